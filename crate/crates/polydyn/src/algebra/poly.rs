//! Dense univariate polynomials over cyclotomic scalars, and invertible
//! affine maps a*z + b.

use std::cell::Cell;
use std::fmt;

use num::rational::BigRational;

use super::scalar::Scalar;
use crate::{Error, Result};

thread_local! {
    static DEGREE_CAP: Cell<usize> = const { Cell::new(512) };
}

/// Current bound on degrees produced by composition, iteration, and powers.
pub fn degree_cap() -> usize {
    DEGREE_CAP.with(|c| c.get())
}

/// Sets the degree bound for this thread (minimum 1).
pub fn set_degree_cap(n: usize) {
    DEGREE_CAP.with(|c| c.set(n.max(1)))
}

fn cap_check(deg: usize) -> Result<()> {
    let cap = degree_cap();
    if deg > cap {
        Err(Error::Resource(format!("degree {deg} exceeds cap {cap}")))
    } else {
        Ok(())
    }
}

/// A polynomial in one variable. Coefficients are stored ascending by degree
/// with no trailing zeros; the zero polynomial has an empty coefficient list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    /// The identity polynomial z.
    pub fn z() -> Self {
        Poly { coeffs: vec![Scalar::zero(), Scalar::one()] }
    }

    pub fn monomial(deg: usize, c: Scalar) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Scalar::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_int_coeffs(cs: &[i64]) -> Self {
        Poly::from_coeffs(cs.iter().map(|&c| Scalar::from_int(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a polynomial known to be nonzero.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of the zero polynomial")
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of z^i (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(i).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Leading coefficient of a nonzero polynomial.
    pub fn lc(&self) -> &Scalar {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn add_scalar(&self, c: &Scalar) -> Poly {
        self.add(&Poly::constant(c.clone()))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn eval_q(&self, x: &BigRational) -> Scalar {
        self.eval(&Scalar::from_ratio(x.clone()))
    }

    /// self(other), with the degree cap enforced on the result.
    pub fn compose(&self, other: &Poly) -> Result<Poly> {
        if let (Some(a), Some(b)) = (self.degree(), other.degree()) {
            if a >= 1 && b >= 1 {
                cap_check(a * b)?;
            }
        }
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(other).add(&Poly::constant(c.clone()));
        }
        Ok(acc)
    }

    /// k-fold self-composition; `iterate(0)` is the identity z.
    pub fn iterate(&self, k: u32) -> Result<Poly> {
        let mut acc = Poly::z();
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, k: u32) -> Result<Poly> {
        if let Some(d) = self.degree() {
            if d >= 1 && k as usize >= 1 {
                cap_check(d * k as usize)?;
            }
        }
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.mul(&Scalar::from_int(i as i64)))
            .collect();
        Poly::from_coeffs(out)
    }

    /// Euclidean division: `self = q * den + r` with deg r < deg den.
    pub fn divrem(&self, den: &Poly) -> Result<(Poly, Poly)> {
        if den.is_zero() {
            return Err(Error::Invalid("division by the zero polynomial".into()));
        }
        let dd = den.deg();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lead_inv = den.lc().recip()?;
        let nd = rem.len() - 1;
        let mut quo = vec![Scalar::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].mul(&lead_inv);
            if c.is_zero() {
                continue;
            }
            quo[k] = c.clone();
            for i in 0..=dd {
                rem[k + i] = rem[k + i].sub(&den.coeffs[i].mul(&c));
            }
        }
        Ok((Poly::from_coeffs(quo), Poly::from_coeffs(rem)))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Ok(a);
        }
        let inv = a.lc().recip()?;
        Ok(a.scale(&inv))
    }

    /// Scales to a monic polynomial (self nonzero).
    pub fn monic(&self) -> Result<Poly> {
        Ok(self.scale(&self.lc().recip()?))
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_rational())
    }

    /// Exponents of the nonzero terms, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = c.to_string();
            let (neg, mag) = match body.strip_prefix('-') {
                Some(rest) if !body.contains(" + ") && !body.contains(" - ") => {
                    (true, rest.to_string())
                }
                _ => (false, body),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let needs_parens = mag.contains(' ');
            let mag_one = mag == "1";
            let var = match i {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{i}"),
            };
            if i == 0 {
                if needs_parens {
                    write!(f, "({mag})")?;
                } else {
                    write!(f, "{mag}")?;
                }
            } else if mag_one {
                write!(f, "{var}")?;
            } else if needs_parens {
                write!(f, "({mag})*{var}")?;
            } else {
                write!(f, "{mag}*{var}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An invertible affine map a*z + b (a nonzero).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    a: Scalar,
    b: Scalar,
}

impl AffineMap {
    pub fn new(a: Scalar, b: Scalar) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::Invalid("affine map with zero linear part".into()));
        }
        Ok(AffineMap { a, b })
    }

    pub fn identity() -> Self {
        AffineMap { a: Scalar::one(), b: Scalar::zero() }
    }

    /// z + t.
    pub fn shift(t: Scalar) -> Self {
        AffineMap { a: Scalar::one(), b: t }
    }

    /// a * z.
    pub fn scaling(a: Scalar) -> Result<Self> {
        AffineMap::new(a, Scalar::zero())
    }

    pub fn a(&self) -> &Scalar {
        &self.a
    }

    pub fn b(&self) -> &Scalar {
        &self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn apply(&self, x: &Scalar) -> Scalar {
        self.a.mul(x).add(&self.b)
    }

    /// self(other(z)).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            a: self.a.mul(&other.a),
            b: self.a.mul(&other.b).add(&self.b),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        let ai = self.a.recip().expect("affine linear part is nonzero");
        AffineMap { a: ai.clone(), b: ai.mul(&self.b).neg() }
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_coeffs(vec![self.b.clone(), self.a.clone()])
    }

    pub fn from_poly(p: &Poly) -> Result<Self> {
        if p.degree() != Some(1) {
            return Err(Error::Invalid(format!(
                "expected a degree-1 polynomial, got {p}"
            )));
        }
        AffineMap::new(p.coeff(1), p.coeff(0))
    }

    /// self(P(z)) as a polynomial.
    pub fn after(&self, p: &Poly) -> Poly {
        p.scale(&self.a).add_scalar(&self.b)
    }

    /// P(self(z)) as a polynomial.
    pub fn before(&self, p: &Poly) -> Poly {
        p.compose(&self.to_poly()).expect("affine composition keeps degree")
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_poly(), f)
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_trim() {
        let p = Poly::from_int_coeffs(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::zero().degree().is_none());
        assert_eq!(Poly::from_int_coeffs(&[0]).degree(), None);
        assert_eq!(Poly::z().degree(), Some(1));
    }

    #[test]
    fn ring_ops() {
        let p = Poly::from_int_coeffs(&[1, 1]); // 1 + z
        let q = Poly::from_int_coeffs(&[-1, 1]); // -1 + z
        assert_eq!(p.mul(&q), Poly::from_int_coeffs(&[-1, 0, 1]));
        assert_eq!(p.add(&q), Poly::from_int_coeffs(&[0, 2]));
        assert_eq!(p.sub(&p), Poly::zero());
    }

    #[test]
    fn eval_and_compose() {
        let p = Poly::from_int_coeffs(&[1, 0, 1]); // z^2 + 1
        assert_eq!(p.eval(&Scalar::from_int(3)), Scalar::from_int(10));
        let c = p.compose(&p).unwrap(); // (z^2+1)^2 + 1
        assert_eq!(c, Poly::from_int_coeffs(&[2, 0, 2, 0, 1]));
        assert_eq!(p.iterate(0).unwrap(), Poly::z());
        assert_eq!(p.iterate(1).unwrap(), p);
    }

    #[test]
    fn compose_respects_cap() {
        set_degree_cap(8);
        let p = Poly::from_int_coeffs(&[0, 0, 0, 1]); // z^3
        assert!(p.compose(&p).err().is_some());
        set_degree_cap(9);
        assert!(p.compose(&p).is_ok());
        set_degree_cap(512);
    }

    #[test]
    fn divrem_gcd() {
        let p = Poly::from_int_coeffs(&[-1, 0, 1]); // z^2 - 1
        let d = Poly::from_int_coeffs(&[1, 1]); // z + 1
        let (q, r) = p.divrem(&d).unwrap();
        assert_eq!(q, Poly::from_int_coeffs(&[-1, 1]));
        assert!(r.is_zero());
        let g = p.gcd(&d).unwrap();
        assert_eq!(g, d);
        // gcd(z^2 - 1, z^2 - 2z + 1) = z - 1.
        let h = Poly::from_int_coeffs(&[1, -2, 1]);
        assert_eq!(p.gcd(&h).unwrap(), Poly::from_int_coeffs(&[-1, 1]));
    }

    #[test]
    fn derivative_support() {
        let p = Poly::from_int_coeffs(&[5, 0, 3, 0, 1]);
        assert_eq!(p.derivative(), Poly::from_int_coeffs(&[0, 6, 0, 4]));
        assert_eq!(p.support(), vec![0, 2, 4]);
    }

    #[test]
    fn affine_maps() {
        let s = AffineMap::new(Scalar::from_int(2), Scalar::from_int(3)).unwrap();
        let inv = s.inverse();
        assert!(s.compose(&inv).is_identity());
        assert!(inv.compose(&s).is_identity());
        assert_eq!(s.apply(&Scalar::from_int(1)), Scalar::from_int(5));
        let p = Poly::from_int_coeffs(&[0, 0, 1]); // z^2
        assert_eq!(s.after(&p), Poly::from_int_coeffs(&[3, 0, 2]));
        assert_eq!(s.before(&p), Poly::from_int_coeffs(&[9, 12, 4]));
        assert!(AffineMap::new(Scalar::zero(), Scalar::one()).is_err());
    }

    #[test]
    fn display() {
        let p = Poly::from_int_coeffs(&[1, -2, 0, 1]);
        assert_eq!(p.to_string(), "z^3 - 2*z + 1");
        let q = Poly::from_coeffs(vec![Scalar::i_unit(), Scalar::one()]);
        assert_eq!(q.to_string(), "z + zeta4");
    }
}
