//! Exact root extraction: e-th roots of cyclotomic scalars (square roots of
//! rationals are expressed through quadratic Gauss sums) and lists of the
//! roots of a polynomial that lie inside the supported fields.

use std::collections::BTreeSet;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use super::poly::Poly;
use super::scalar::{divisors, rational_nth_root, Scalar, CONDUCTOR_CAP};
use crate::{Error, Result};

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;
const CANDIDATE_CAP: usize = 50_000;

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let big = BigInt::from(n);
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&BigInt::from(d), &big);
        let minus_one = &big - 1;
        if x.is_one() || x == minus_one {
            continue;
        }
        for _ in 1..r {
            x = x.modpow(&BigInt::from(2), &big);
            if x == minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest integer r with r^l == n, if one exists.
pub fn exact_nth_root_u64(n: u64, l: u32) -> Option<u64> {
    if l == 0 {
        return None;
    }
    if n == 0 {
        return Some(0);
    }
    let r = (n as f64).powf(1.0 / l as f64).round() as u64;
    for c in r.saturating_sub(2)..=r + 2 {
        if let Some(p) = c.checked_pow(l) {
            if p == n {
                return Some(c);
            }
        }
    }
    None
}

/// Factors a positive integer by trial division plus a primality check on the
/// remainder; `None` when a large composite cofactor cannot be resolved.
pub fn factor_bigint(n: &BigInt) -> Option<Vec<(BigInt, u32)>> {
    debug_assert!(n.is_positive());
    let mut n = n.clone();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, e: u32, out: &mut Vec<(BigInt, u32)>| {
        if e > 0 {
            out.push((p, e));
        }
    };
    let mut d = 2u64;
    while d <= TRIAL_DIVISION_BOUND {
        let bd = BigInt::from(d);
        if (&bd * &bd) > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        push(bd, e, &mut out);
        d += if d == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return Some(out);
    }
    if let Ok(small) = u64::try_from(&n) {
        if small <= TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND {
            // Remainder below the square of the trial bound is prime.
            push(n, 1, &mut out);
            return Some(out);
        }
        if is_prime_u64(small) {
            push(n, 1, &mut out);
            return Some(out);
        }
        return None;
    }
    None
}

/// All positive divisors of a factored integer, capped; `None` when the cap
/// would be exceeded.
fn divisors_of_factored(f: &[(BigInt, u32)], cap: usize) -> Option<Vec<BigInt>> {
    let mut out = vec![BigInt::one()];
    for (p, e) in f {
        let mut next = Vec::with_capacity(out.len() * (*e as usize + 1));
        let mut pk = BigInt::one();
        for _ in 0..=*e {
            for d in &out {
                next.push(d * &pk);
            }
            pk *= p;
        }
        if next.len() > cap {
            return None;
        }
        out = next;
    }
    Some(out)
}

/// Legendre symbol (k | p) for odd prime p.
fn legendre(k: u64, p: u64) -> i64 {
    let r = BigInt::from(k).modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
    if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    }
}

/// sqrt(p) for an odd prime p, through the quadratic Gauss sum.
fn sqrt_odd_prime(p: u64) -> Result<Scalar> {
    let phi = (p - 1) as usize;
    // g = sum_{k=1}^{p-1} (k|p) zeta_p^k; zeta^(p-1) folds back into the
    // power basis as -(1 + zeta + ... + zeta^(p-2)).
    let chi_last = legendre(p - 1, p);
    let mut coords = vec![BigRational::from_integer(BigInt::from(-chi_last)); phi];
    for (k, c) in coords.iter_mut().enumerate().skip(1) {
        *c += BigRational::from_integer(BigInt::from(legendre(k as u64, p)));
    }
    let g = Scalar::from_parts(p, coords)?;
    if p % 4 == 1 {
        // g itself equals sqrt(p).
        Ok(g)
    } else {
        // g = i * sqrt(p), so sqrt(p) = -i * g.
        Ok(g.mul(&Scalar::i_unit().neg()))
    }
}

/// sqrt(2) = zeta_8 - zeta_8^3.
fn sqrt_two() -> Result<Scalar> {
    let z8 = Scalar::root_of_unity(8, 1)?;
    Ok(z8.sub(&z8.pow_u(3)))
}

/// Exact square root of a positive rational, as a cyclotomic scalar.
pub fn sqrt_positive_rational(q: &BigRational) -> Result<Scalar> {
    debug_assert!(q.is_positive());
    if let Some(r) = rational_nth_root(q, 2) {
        return Ok(Scalar::from_ratio(r));
    }
    // sqrt(n/d) = sqrt(n*d) / d.
    let nd = q.numer() * q.denom();
    let f = factor_bigint(&nd).ok_or_else(|| {
        Error::Resource("cannot factor the radicand for a square root".into())
    })?;
    let mut rational = BigRational::new(BigInt::one(), q.denom().clone());
    let mut squarefree: Vec<u64> = Vec::new();
    for (p, e) in &f {
        let half = BigRational::from_integer(p.pow(e / 2));
        rational *= half;
        if e % 2 == 1 {
            let p = u64::try_from(p).map_err(|_| {
                Error::Resource("square-free part of radicand too large".into())
            })?;
            squarefree.push(p);
        }
    }
    // Conductor needed: lcm over 8 (for 2), p (p = 1 mod 4), 4p (p = 3 mod 4).
    let mut cond: u64 = 1;
    for &p in &squarefree {
        let c = if p == 2 {
            8
        } else if p % 4 == 1 {
            p
        } else {
            4 * p
        };
        cond = cond.lcm(&c);
        if cond > CONDUCTOR_CAP {
            return Err(Error::Resource(format!(
                "square root needs conductor {cond} beyond the cap"
            )));
        }
    }
    let mut acc = Scalar::from_ratio(rational);
    for &p in &squarefree {
        let s = if p == 2 { sqrt_two()? } else { sqrt_odd_prime(p)? };
        acc = acc.mul(&s);
    }
    Ok(acc)
}

/// All e-th roots of `lambda` expressible in cyclotomic fields.
///
/// Supported inputs are zero and scalars of the form q * (root of unity) with
/// q rational; for those the answer is complete: either all e roots (they are
/// cyclotomic precisely when the positive real e-th root of q is rational or
/// quadratic) or an unsupported-extension error when the roots genuinely lie
/// outside every cyclotomic field.
pub fn eth_roots(lambda: &Scalar, e: u32) -> Result<Vec<Scalar>> {
    if e == 0 {
        return Err(Error::Invalid("0th root requested".into()));
    }
    if lambda.is_zero() {
        return Ok(vec![Scalar::zero()]);
    }
    if e == 1 {
        return Ok(vec![lambda.clone()]);
    }
    let (q, ord, t) = lambda.as_scaled_root_of_unity().ok_or_else(|| {
        Error::Unsupported(format!(
            "cannot take roots of {lambda}: not rational times a root of unity"
        ))
    })?;
    // Positive real e-th root of q: find the largest divisor g of e with
    // q = r^g; then need r^(1/f) for f = e/g.
    let mut y0: Option<Scalar> = None;
    for g in divisors(e as u64).into_iter().rev() {
        if let Some(r) = rational_nth_root(&q, g as u32) {
            let f = e as u64 / g;
            y0 = match f {
                1 => Some(Scalar::from_ratio(r)),
                2 => Some(sqrt_positive_rational(&r)?),
                _ => None,
            };
            break;
        }
    }
    let y0 = y0.ok_or_else(|| {
        Error::Unsupported(format!(
            "the real {e}th root of {q} lies outside every cyclotomic field"
        ))
    })?;
    // One root of unity with u0^e = zeta_ord^t.
    let big_ord = ord * e as u64;
    if big_ord > CONDUCTOR_CAP {
        return Err(Error::Resource(format!(
            "roots need conductor {big_ord} beyond the cap"
        )));
    }
    let u0 = Scalar::root_of_unity(big_ord, t)?;
    let base = y0.mul(&u0);
    let mut out: Vec<Scalar> = (0..e)
        .map(|j| Ok(base.mul(&Scalar::root_of_unity(e as u64, j as u64)?)))
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// Result of an in-field root search.
#[derive(Debug, Clone)]
pub struct RootSearch {
    /// Roots found, with multiplicities, sorted deterministically.
    pub roots: Vec<(Scalar, usize)>,
    /// Nonconstant factor whose roots lie outside the searched classes.
    pub residual: Option<Poly>,
    /// True when a factorization or candidate cap may have hidden roots.
    pub truncated: bool,
}

/// Finds the roots of `p` lying in the supported fields: rationals, rational
/// multiples of roots of unity drawn from the coefficient field (widened by
/// i), and roots of any remaining quadratic factor whose discriminant has a
/// cyclotomic square root. Roots of a residual factor of degree >= 3 outside
/// those classes are not searched; the residual is returned instead.
pub fn roots_in_field(p: &Poly) -> Result<RootSearch> {
    if p.is_zero() {
        return Err(Error::Invalid("root search on the zero polynomial".into()));
    }
    let mut truncated = false;
    let mut mults: Vec<(Scalar, usize)> = Vec::new();
    // Order of vanishing at zero.
    let k = p
        .coeffs()
        .iter()
        .position(|c| !c.is_zero())
        .expect("nonzero polynomial has a nonzero coefficient");
    if k > 0 {
        mults.push((Scalar::zero(), k));
    }
    let p1 = Poly::from_coeffs(p.coeffs()[k..].to_vec());
    if p1.deg() == 0 {
        return Ok(RootSearch { roots: mults, residual: None, truncated });
    }
    // Squarefree part.
    let g = p1.gcd(&p1.derivative())?;
    let mut s = p1.divrem(&g)?.0;
    let mut found: Vec<Scalar> = Vec::new();
    if s.deg() >= 1 {
        let cands = root_candidates(&s, &mut truncated)?;
        for c in cands {
            if s.deg() == 0 {
                break;
            }
            if s.eval(&c).is_zero() {
                found.push(c.clone());
                let lin = Poly::from_coeffs(vec![c.neg(), Scalar::one()]);
                s = s.divrem(&lin)?.0;
            }
        }
    }
    if s.degree() == Some(1) {
        let r = s.coeff(0).neg().div(&s.coeff(1))?;
        found.push(r);
        s = Poly::one();
    }
    if s.degree() == Some(2) {
        // Quadratic formula; keep the factor when the discriminant has no
        // cyclotomic square root.
        let (a, b, c) = (s.coeff(2), s.coeff(1), s.coeff(0));
        let disc = b.mul(&b).sub(&Scalar::from_int(4).mul(&a.mul(&c)));
        match eth_roots(&disc, 2) {
            Ok(rts) => {
                let inv2a = Scalar::from_int(2).mul(&a).recip()?;
                for r in rts_pair(rts) {
                    found.push(b.neg().add(&r).mul(&inv2a));
                }
                s = Poly::one();
            }
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    // Exact multiplicities inside p1.
    found.sort();
    found.dedup();
    for alpha in found {
        let lin = Poly::from_coeffs(vec![alpha.neg(), Scalar::one()]);
        let mut m = 0;
        let mut cur = p1.clone();
        loop {
            let (q, r) = cur.divrem(&lin)?;
            if r.is_zero() {
                m += 1;
                cur = q;
                if cur.degree().is_none() || cur.deg() == 0 {
                    break;
                }
            } else {
                break;
            }
        }
        debug_assert!(m >= 1);
        mults.push((alpha, m));
    }
    mults.sort();
    let residual = if s.degree().map(|d| d >= 1).unwrap_or(false) {
        Some(s)
    } else {
        None
    };
    Ok(RootSearch { roots: mults, residual, truncated })
}

fn rts_pair(rts: Vec<Scalar>) -> Vec<Scalar> {
    // eth_roots(_, 2) returns one root for zero, two otherwise.
    if rts.len() == 1 {
        vec![rts[0].clone(), rts[0].clone()]
    } else {
        rts
    }
}

/// Candidate roots of a squarefree `s` with s(0) != 0: every r * w where r
/// ranges over the rational-root-theorem candidates of the norm polynomial
/// and w over the roots of unity of the (i-widened) coefficient field.
fn root_candidates(s: &Poly, truncated: &mut bool) -> Result<Vec<Scalar>> {
    // Norm polynomial: product of the coefficient-wise Galois conjugates.
    let mut cond: u64 = 1;
    for c in s.coeffs() {
        cond = cond.lcm(&c.conductor());
    }
    let norm = if cond == 1 {
        s.clone()
    } else {
        let mut acc = Poly::one();
        for k in 1..cond {
            if cond.gcd(&k) == 1 {
                let conj = Poly::from_coeffs(s.coeffs().iter().map(|c| c.galois(k)).collect());
                acc = acc.mul(&conj);
            }
        }
        debug_assert!(acc.is_rational());
        acc
    };
    // Clear denominators to integer coefficients.
    let mut den = BigInt::one();
    for c in norm.coeffs() {
        let q = c.as_rational().expect("norm polynomial is rational");
        den = den.lcm(q.denom());
    }
    let ints: Vec<BigInt> = norm
        .coeffs()
        .iter()
        .map(|c| {
            let q = c.as_rational().unwrap();
            (q * BigRational::from_integer(den.clone())).to_integer()
        })
        .collect();
    let c0 = ints.first().expect("nonzero").clone();
    let lc = ints.last().expect("nonzero").clone();
    debug_assert!(!c0.is_zero() && !lc.is_zero());
    let rats = rational_candidates(&c0.abs(), &lc.abs(), truncated)?;
    // Scale by the roots of unity of the coefficient field widened by i.
    let m_sub = cond.lcm(&4);
    let mut set: BTreeSet<Scalar> = BTreeSet::new();
    for r in &rats {
        for j in 0..m_sub {
            let w = Scalar::root_of_unity(m_sub, j)?;
            let x = w.mul(&Scalar::from_ratio(r.clone()));
            set.insert(x.neg());
            set.insert(x);
        }
    }
    if set.len() > CANDIDATE_CAP {
        *truncated = true;
    }
    Ok(set.into_iter().take(CANDIDATE_CAP).collect())
}

/// Positive rational-root-theorem candidates a/b with a | c0, b | lc.
fn rational_candidates(
    c0: &BigInt,
    lc: &BigInt,
    truncated: &mut bool,
) -> Result<Vec<BigRational>> {
    let num_divs = match factor_bigint(c0).and_then(|f| divisors_of_factored(&f, 2_000)) {
        Some(d) => d,
        None => {
            *truncated = true;
            small_divisors(c0)
        }
    };
    let den_divs = match factor_bigint(lc).and_then(|f| divisors_of_factored(&f, 2_000)) {
        Some(d) => d,
        None => {
            *truncated = true;
            small_divisors(lc)
        }
    };
    let mut set: BTreeSet<BigRational> = BTreeSet::new();
    for a in &num_divs {
        for b in &den_divs {
            set.insert(BigRational::new(a.clone(), b.clone()));
            if set.len() > CANDIDATE_CAP {
                *truncated = true;
                break;
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Fallback divisor list when full factorization is unavailable: divisors not
/// exceeding the trial bound, found directly.
fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d <= TRIAL_DIVISION_BOUND {
        let bd = BigInt::from(d);
        if (&bd * &bd) > *n && !(n % &bd).is_zero() {
            break;
        }
        if (n % &bd).is_zero() {
            out.push(bd.clone());
            out.push(n / &bd);
        }
        d += 1;
        if out.len() > 4_000 {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}
