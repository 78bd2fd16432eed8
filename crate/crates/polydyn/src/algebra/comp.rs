//! Composition solvers: digit expansions in base X, recovery of outer and
//! inner factors of a functional composition, and Chebyshev polynomials.

use super::poly::Poly;
use super::roots::eth_roots;
use super::scalar::Scalar;
use crate::{Error, Result};

/// Chebyshev polynomial T_m with T_m(cos t) = cos(m t), via the recurrence
/// T_m = 2 z T_(m-1) - T_(m-2).
pub fn chebyshev(m: u64) -> Result<Poly> {
    let cap = super::poly::degree_cap() as u64;
    if m > cap {
        return Err(Error::Resource(format!("degree {m} exceeds cap {cap}")));
    }
    let two_z = Poly::from_int_coeffs(&[0, 2]);
    let mut prev = Poly::one();
    let mut cur = Poly::z();
    if m == 0 {
        return Ok(prev);
    }
    for _ in 1..m {
        let next = two_z.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Digits of `f` in base `x` (deg x >= 1): f = sum digits[j] * x^j with
/// deg digits[j] < deg x. The zero polynomial has no digits.
pub fn x_adic(f: &Poly, x: &Poly) -> Result<Vec<Poly>> {
    if x.degree().map(|d| d < 1).unwrap_or(true) {
        return Err(Error::Invalid("digit base must be nonconstant".into()));
    }
    let mut digits = Vec::new();
    let mut cur = f.clone();
    while !cur.is_zero() {
        let (q, r) = cur.divrem(x)?;
        digits.push(r);
        cur = q;
    }
    Ok(digits)
}

/// Fiberwise average of f over x: with digits f = sum A_i x^i, each digit
/// of degree < deg x averages to a constant a_i over a fiber of x, and the
/// result is sum a_i x^i. The constants come from power sums of the fiber,
/// which Newton's identities express through the coefficients of x alone.
pub fn average_by(f: &Poly, x: &Poly) -> Result<Poly> {
    let d = match x.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Invalid("averaging base must be nonconstant".into())),
    };
    // Elementary symmetric functions of a fiber of x: all but the last are
    // scalars read off the top coefficients of x; the last is never needed
    // for digits of degree < d.
    let lc = x.lc().clone();
    let mut elem = vec![Scalar::zero(); d];
    for (i, e) in elem.iter_mut().enumerate().skip(1) {
        let mut v = x.coeff(d - i).div(&lc)?;
        if i % 2 == 1 {
            v = v.neg();
        }
        *e = v;
    }
    // Power sums p_0 .. p_{d-1} by Newton's identities.
    let mut power = vec![Scalar::from_int(d as i64)];
    for k in 1..d {
        let mut acc = elem[k].mul(&Scalar::from_int(k as i64));
        if k % 2 == 0 {
            acc = acc.neg();
        }
        for i in 1..k {
            let term = elem[i].mul(&power[k - i]);
            if i % 2 == 1 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        power.push(acc);
    }
    let inv_d = Scalar::from_int(d as i64).recip()?;
    let mut out = Poly::zero();
    for digit in x_adic(f, x)?.iter().rev() {
        let mut avg = Scalar::zero();
        for j in 0..=digit.degree().unwrap_or(0) {
            avg = avg.add(&digit.coeff(j).mul(&power[j]));
        }
        out = out.mul(x).add(&Poly::constant(avg.mul(&inv_d)));
    }
    Ok(out)
}

/// The unique U with f = U(v), if one exists (v nonconstant).
pub fn solve_outer(f: &Poly, v: &Poly) -> Result<Option<Poly>> {
    let digits = x_adic(f, v)?;
    let mut coeffs = Vec::with_capacity(digits.len());
    for d in &digits {
        if let Some(deg) = d.degree() {
            if deg >= 1 {
                return Ok(None);
            }
        }
        coeffs.push(d.coeff(0));
    }
    Ok(Some(Poly::from_coeffs(coeffs)))
}

/// All V over the supported fields with f = u(V(z)), for nonconstant u.
///
/// The leading coefficient of V is found as a deg(u)-th root of
/// lc(f)/lc(u); root extraction covers scalars of the form
/// rational * root of unity, and possible V whose leading coefficient lies
/// outside that class are not reported.
pub fn solve_inner(f: &Poly, u: &Poly) -> Result<Vec<Poly>> {
    let du = match u.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Invalid("outer factor must be nonconstant".into())),
    };
    let df = match f.degree() {
        Some(d) if d >= du && d % du == 0 => d,
        _ => return Ok(Vec::new()),
    };
    let e = df / du;
    let lam = f.lc().div(u.lc())?;
    let branches = match eth_roots(&lam, du as u32) {
        Ok(b) => b,
        Err(Error::Unsupported(_)) => return Ok(Vec::new()),
        Err(other) => return Err(other),
    };
    let mut out = Vec::new();
    for ce in branches {
        // Top-down: the coefficient of z^(df-j) in u(V) is affine in the
        // unknown v_(e-j), with slope deg(u) * lc(u) * ce^(deg u - 1).
        let slope = u
            .lc()
            .mul(&Scalar::from_int(du as i64))
            .mul(&ce.pow_u(du as u64 - 1));
        let mut vc = vec![Scalar::zero(); e + 1];
        vc[e] = ce.clone();
        for j in 1..=e {
            let partial = u.compose(&Poly::from_coeffs(vc.clone()))?;
            let known = partial.coeff(df - j);
            vc[e - j] = f.coeff(df - j).sub(&known).div(&slope)?;
        }
        let v = Poly::from_coeffs(vc);
        if u.compose(&v)? == *f {
            out.push(v);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// The unique monic S with S^n = q, if q (monic, deg divisible by n) is an
/// exact n-th power. Rational linear algebra only: the coefficient of
/// z^(deg q - j) in S^n is affine in the unknown s_(k-j) with slope n.
pub fn monic_nth_root(q: &Poly, n: u32) -> Result<Option<Poly>> {
    if n == 0 {
        return Err(Error::Invalid("root order must be positive".into()));
    }
    let dq = match q.degree() {
        Some(d) => d,
        None => return Ok(None),
    };
    if !q.is_monic() || dq % n as usize != 0 {
        return Ok(None);
    }
    if n == 1 {
        return Ok(Some(q.clone()));
    }
    let k = dq / n as usize;
    let slope = Scalar::from_int(n as i64);
    let mut sc = vec![Scalar::zero(); k + 1];
    sc[k] = Scalar::one();
    for j in 1..=k {
        let partial = Poly::from_coeffs(sc.clone()).pow(n)?;
        sc[k - j] = q.coeff(dq - j).sub(&partial.coeff(dq - j)).div(&slope)?;
    }
    let s = Poly::from_coeffs(sc);
    if s.pow(n)? == *q {
        Ok(Some(s))
    } else {
        Ok(None)
    }
}
