//! Resultants, exact interpolation, and bivariate polynomials.

use super::poly::Poly;
use super::scalar::Scalar;
use crate::{Error, Result};

/// Resultant of two univariate polynomials, with the convention
/// Res(P, Q) = lc(P)^deg(Q) * product of Q over the roots of P.
pub fn resultant(p: &Poly, q: &Poly) -> Result<Scalar> {
    match (p.degree(), q.degree()) {
        (None, _) | (_, None) => Err(Error::Invalid("resultant with the zero polynomial".into())),
        (Some(0), Some(dq)) => Ok(p.coeff(0).pow_u(dq as u64)),
        (Some(dp), Some(0)) => Ok(q.coeff(0).pow_u(dp as u64)),
        (Some(dp), Some(dq)) => {
            if dp < dq {
                let sign = if (dp * dq) % 2 == 1 {
                    Scalar::from_int(-1)
                } else {
                    Scalar::one()
                };
                return Ok(sign.mul(&resultant(q, p)?));
            }
            let (_, r) = p.divrem(q)?;
            if r.is_zero() {
                return Ok(Scalar::zero());
            }
            let dr = r.degree().unwrap_or(0);
            let sign = if (dp * dq) % 2 == 1 {
                Scalar::from_int(-1)
            } else {
                Scalar::one()
            };
            let factor = q.lc().pow_u((dp - dr) as u64);
            Ok(sign.mul(&factor).mul(&resultant(q, &r)?))
        }
    }
}

/// Unique polynomial of degree < n through n points with distinct nodes.
pub fn lagrange(points: &[(Scalar, Scalar)]) -> Result<Poly> {
    let n = points.len();
    if n == 0 {
        return Ok(Poly::zero());
    }
    let mut acc = Poly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        let mut basis = Poly::one();
        let mut denom = Scalar::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&Poly::from_coeffs(vec![xj.neg(), Scalar::one()]));
            denom = denom.mul(&xi.sub(xj));
        }
        if denom.is_zero() {
            return Err(Error::Invalid("repeated interpolation node".into()));
        }
        acc = acc.add(&basis.scale(&yi.div(&denom)?));
    }
    Ok(acc)
}

/// A polynomial in two variables x, y, stored as coefficients of powers of y,
/// each a polynomial in x.
#[derive(Clone, PartialEq, Eq)]
pub struct BiPoly {
    by_y: Vec<Poly>,
}

impl serde::Serialize for BiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("BiPoly", 1)?;
        st.serialize_field("y_coeffs", &self.by_y)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for BiPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Input {
            y_coeffs: Vec<Poly>,
        }
        Ok(BiPoly::from_y_coeffs(Input::deserialize(d)?.y_coeffs))
    }
}

impl BiPoly {
    pub fn from_y_coeffs(mut by_y: Vec<Poly>) -> Self {
        while by_y.last().map(|p| p.is_zero()).unwrap_or(false) {
            by_y.pop();
        }
        BiPoly { by_y }
    }

    pub fn is_zero(&self) -> bool {
        self.by_y.is_empty()
    }

    /// Coefficient (in x) of y^j.
    pub fn y_coeff(&self, j: usize) -> Poly {
        self.by_y.get(j).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn y_coeffs(&self) -> &[Poly] {
        &self.by_y
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.by_y.len().checked_sub(1)
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.by_y.iter().filter_map(|p| p.degree()).max()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.y_coeff(j).coeff(i)
    }

    pub fn scale(&self, c: &Scalar) -> BiPoly {
        BiPoly::from_y_coeffs(self.by_y.iter().map(|p| p.scale(c)).collect())
    }

    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for p in self.by_y.iter().rev() {
            acc = acc.mul(y).add(&p.eval(x));
        }
        acc
    }

    /// Substitutes polynomials for x and y, yielding a univariate polynomial.
    pub fn eval_polys(&self, px: &Poly, py: &Poly) -> Result<Poly> {
        let mut acc = Poly::zero();
        for p in self.by_y.iter().rev() {
            acc = acc.mul(py).add(&p.compose(px)?);
        }
        Ok(acc)
    }

    /// True when every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.by_y.iter().all(|p| p.is_rational())
    }

    pub fn iter_coeffs(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.by_y.iter().enumerate().flat_map(|(j, p)| {
            p.coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, c)| (i, j, c))
        })
    }
}

impl std::fmt::Display for BiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, p) in self.by_y.iter().enumerate().rev() {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            // x-part in parentheses, then the y power.
            match j {
                0 => write!(f, "({p})")?,
                1 => write!(f, "({p})*y")?,
                _ => write!(f, "({p})*y^{j}")?,
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_linear() {
        let p = Poly::from_int_coeffs(&[-2, 1]); // t - 2
        let q = Poly::from_int_coeffs(&[-5, 1]); // t - 5
        // Res = q(2) = -3.
        assert_eq!(resultant(&p, &q).unwrap(), Scalar::from_int(-3));
        assert_eq!(resultant(&q, &p).unwrap(), Scalar::from_int(3));
    }

    #[test]
    fn resultant_shared_root_vanishes() {
        let p = Poly::from_int_coeffs(&[-1, 0, 1]); // t^2 - 1
        let q = Poly::from_int_coeffs(&[-1, 1]); // t - 1
        assert_eq!(resultant(&p, &q).unwrap(), Scalar::zero());
    }

    #[test]
    fn resultant_quadratics() {
        let p = Poly::from_int_coeffs(&[-1, 0, 1]); // t^2 - 1, roots ±1
        let q = Poly::from_int_coeffs(&[-4, 0, 1]); // t^2 - 4
        // q(1) * q(-1) = (-3)(-3) = 9.
        assert_eq!(resultant(&p, &q).unwrap(), Scalar::from_int(9));
    }

    #[test]
    fn resultant_leading_coefficient_factor() {
        let p = Poly::from_int_coeffs(&[-1, 2]); // 2t - 1, root 1/2
        let q = Poly::from_int_coeffs(&[0, 0, 1]); // t^2
        // lc(p)^deg(q) * q(1/2) = 4 * 1/4 = 1.
        assert_eq!(resultant(&p, &q).unwrap(), Scalar::one());
    }

    #[test]
    fn lagrange_recovers_cubic() {
        let target = Poly::from_int_coeffs(&[0, -1, 0, 1]); // t^3 - t
        let pts: Vec<(Scalar, Scalar)> = (0..4)
            .map(|k| {
                let x = Scalar::from_int(k);
                (x.clone(), target.eval(&x))
            })
            .collect();
        assert_eq!(lagrange(&pts).unwrap(), target);
    }

    #[test]
    fn bipoly_eval() {
        // x^2 + x*y + y^2 as y-coefficients [x^2, x, 1].
        let b = BiPoly::from_y_coeffs(vec![
            Poly::from_int_coeffs(&[0, 0, 1]),
            Poly::from_int_coeffs(&[0, 1]),
            Poly::one(),
        ]);
        assert_eq!(b.degree_x(), Some(2));
        assert_eq!(b.degree_y(), Some(2));
        assert_eq!(
            b.eval(&Scalar::from_int(2), &Scalar::from_int(3)),
            Scalar::from_int(19)
        );
        let t2 = Poly::from_int_coeffs(&[0, 0, 1]);
        let t3 = Poly::from_int_coeffs(&[0, 0, 0, 1]);
        // substitute x = t^2, y = t^3: t^4 + t^5 + t^6.
        assert_eq!(
            b.eval_polys(&t2, &t3).unwrap(),
            Poly::from_int_coeffs(&[0, 0, 0, 0, 1, 1, 1])
        );
    }
}
