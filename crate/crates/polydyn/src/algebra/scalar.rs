//! Exact scalars: elements of cyclotomic rational fields Q(zeta_m).
//!
//! An element is stored in the power basis 1, zeta, ..., zeta^(phi(m)-1)
//! modulo the m-th cyclotomic polynomial, with arbitrary-precision rational
//! coordinates. The stored conductor is always minimal for the element (a
//! rational number has conductor 1, and a minimal conductor is never 2 mod 4),
//! which makes structural equality coincide with field equality.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, LazyLock, Mutex};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::{Error, Result};

/// Conductor bound enforced at the public entry points (parsing, explicit
/// roots of unity, field extensions taken by root solvers).
pub const CONDUCTOR_CAP: u64 = 5_000;

/// Hard bound past which no arithmetic table is ever built.
const TABLE_CAP: u64 = 100_000;

pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// All positive divisors of `m`, sorted ascending.
pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            small.push(d);
            if d != m / d {
                large.push(m / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Per-conductor arithmetic data: the cyclotomic polynomial and the reduced
/// power basis expansion of every zeta^j, 0 <= j < m.
struct CycTable {
    phi: usize,
    /// Monic Phi_m as integer coefficients, length phi+1.
    phim: Vec<BigInt>,
    /// pow[j] = coordinates of zeta^j, each of length phi.
    pow: Vec<Vec<BigRational>>,
}

static TABLES: LazyLock<Mutex<HashMap<u64, Arc<CycTable>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn table(m: u64) -> Result<Arc<CycTable>> {
    if m == 0 || m > TABLE_CAP {
        return Err(Error::Resource(format!("conductor {m} out of range")));
    }
    if let Some(t) = TABLES.lock().unwrap().get(&m) {
        return Ok(t.clone());
    }
    let phim = cyclotomic_int(m)?;
    let phi = phim.len() - 1;
    // zeta^phi = -(phim[phi-1] zeta^(phi-1) + ... + phim[0])
    let red: Vec<BigRational> = phim[..phi]
        .iter()
        .map(|c| BigRational::from_integer(-c.clone()))
        .collect();
    let mut pow = Vec::with_capacity(m as usize);
    let mut cur = vec![BigRational::zero(); phi];
    cur[0] = BigRational::one();
    pow.push(cur.clone());
    for _ in 1..m {
        let top = cur[phi - 1].clone();
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1].clone();
        }
        cur[0] = BigRational::zero();
        if !top.is_zero() {
            for i in 0..phi {
                cur[i] += &top * &red[i];
            }
        }
        pow.push(cur.clone());
    }
    let t = Arc::new(CycTable { phi, phim, pow });
    TABLES.lock().unwrap().insert(m, t.clone());
    Ok(t)
}

/// Phi_m with integer coefficients, computed as (x^m - 1) / prod of the
/// cyclotomic polynomials of the proper divisors.
fn cyclotomic_int(m: u64) -> Result<Vec<BigInt>> {
    let mut p = vec![BigInt::zero(); m as usize + 1];
    p[0] = -BigInt::one();
    p[m as usize] = BigInt::one();
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let q = table(d)?;
        p = div_exact_int(&p, &q.phim);
    }
    Ok(p)
}

/// Exact division of integer polynomials, divisor monic.
fn div_exact_int(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quo = vec![BigInt::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            quo[k] = c.clone();
            for i in 0..=dd {
                let t = &den[i] * &c;
                rem[k + i] -= t;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quo
}

/// Exact solve of a full-column-rank rational linear system; `None` when the
/// system is inconsistent.
fn solve_linear(rows: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let Some(sel) = (pivot_row..nrows).find(|&r| !a[r][col].is_zero()) else {
            // The bases used here are linearly independent, so every column
            // carries a pivot; a missing pivot would be an internal bug.
            return None;
        };
        a.swap(pivot_row, sel);
        let inv = a[pivot_row][col].recip();
        for j in col..=ncols {
            a[pivot_row][j] = &a[pivot_row][j] * &inv;
        }
        for r in 0..nrows {
            if r != pivot_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..=ncols {
                    let t = &a[pivot_row][j] * &f;
                    a[r][j] -= t;
                }
            }
        }
        pivots.push((pivot_row, col));
        pivot_row += 1;
        if pivot_row == nrows {
            break;
        }
    }
    if pivots.len() < ncols {
        return None;
    }
    for r in pivot_row..nrows {
        if !a[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); ncols];
    for (r, c) in pivots {
        x[c] = a[r][ncols].clone();
    }
    Some(x)
}

/// An exact element of a cyclotomic rational field, in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar {
    cond: u64,
    coords: Vec<BigRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { cond: 1, coords: vec![BigRational::zero()] }
    }

    pub fn one() -> Self {
        Scalar { cond: 1, coords: vec![BigRational::one()] }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { cond: 1, coords: vec![BigRational::from_integer(BigInt::from(n))] }
    }

    pub fn from_ratio(q: BigRational) -> Self {
        Scalar { cond: 1, coords: vec![q] }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::from_ratio(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Builds an element of Q(zeta_m) from raw power-basis coordinates
    /// (length phi(m)) and reduces it to canonical form.
    pub fn from_parts(cond: u64, coords: Vec<BigRational>) -> Result<Self> {
        if cond == 0 || cond > CONDUCTOR_CAP {
            return Err(Error::Invalid(format!("conductor {cond} out of range")));
        }
        let t = table(cond)?;
        if coords.len() != t.phi {
            return Err(Error::Invalid(format!(
                "expected {} coordinates for conductor {cond}, got {}",
                t.phi,
                coords.len()
            )));
        }
        Ok(Self::canonical(cond, coords))
    }

    /// zeta_m^k, canonicalized.
    pub fn root_of_unity(m: u64, k: u64) -> Result<Self> {
        if m == 0 || m > CONDUCTOR_CAP {
            return Err(Error::Invalid(format!("root-of-unity order {m} out of range")));
        }
        let k = k % m;
        let g = m.gcd(&k.max(1));
        let (m, k) = if k == 0 { (1, 0) } else { (m / g, k / g) };
        let t = table(m)?;
        Ok(Self::canonical(m, t.pow[k as usize].clone()))
    }

    /// The imaginary unit zeta_4.
    pub fn i_unit() -> Self {
        Self::root_of_unity(4, 1).unwrap()
    }

    pub fn conductor(&self) -> u64 {
        self.cond
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.cond == 1 && self.coords[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.cond == 1 && self.coords[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.cond == 1
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.cond == 1 {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Canonical form: trims to the minimal conductor. `coords` must have
    /// length phi(cond).
    fn canonical(cond: u64, coords: Vec<BigRational>) -> Self {
        if coords[1..].iter().all(|c| c.is_zero()) {
            return Scalar { cond: 1, coords: vec![coords[0].clone()] };
        }
        let t = table(cond).expect("table for existing conductor");
        for d in divisors(cond) {
            if d == cond || d % 4 == 2 {
                continue;
            }
            // Note phi(d) == phi(cond) is possible (cond = 2d with d odd);
            // those are exactly the non-canonical 2 mod 4 conductors.
            let td = table(d).expect("table for divisor");
            // Columns: zeta_cond^((cond/d) * i) for i < phi(d).
            let step = cond / d;
            let cols: Vec<&Vec<BigRational>> = (0..td.phi)
                .map(|i| &t.pow[((step * i as u64) % cond) as usize])
                .collect();
            let rows: Vec<Vec<BigRational>> = (0..t.phi)
                .map(|r| cols.iter().map(|c| c[r].clone()).collect())
                .collect();
            if let Some(sol) = solve_linear(&rows, &coords) {
                return Scalar { cond: d, coords: sol };
            }
        }
        Scalar { cond, coords }
    }

    /// Coordinates of `self` inside Q(zeta_target); `self.cond` must divide
    /// `target`.
    fn lift_coords(&self, target: u64) -> Vec<BigRational> {
        debug_assert!(target % self.cond == 0);
        if target == self.cond {
            return self.coords.clone();
        }
        let t = table(target).expect("lift table");
        let step = target / self.cond;
        let mut out = vec![BigRational::zero(); t.phi];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &t.pow[((step * i as u64) % target) as usize];
            for j in 0..t.phi {
                out[j] += c * &p[j];
            }
        }
        out
    }

    fn merged_cond(&self, other: &Scalar) -> u64 {
        self.cond.lcm(&other.cond)
    }

    /// Coordinates of `self` in Q(zeta_target); `target` must be a multiple
    /// of the conductor.
    pub fn coords_in(&self, target: u64) -> Result<Vec<BigRational>> {
        if target == 0 || target % self.cond != 0 {
            return Err(Error::Invalid(format!(
                "{target} is not a multiple of conductor {}",
                self.cond
            )));
        }
        table(target)?;
        Ok(self.lift_coords(target))
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if self.cond == 1 && other.cond == 1 {
            return Scalar {
                cond: 1,
                coords: vec![&self.coords[0] + &other.coords[0]],
            };
        }
        let m = self.merged_cond(other);
        let mut a = self.lift_coords(m);
        for (x, y) in a.iter_mut().zip(other.lift_coords(m)) {
            *x += y;
        }
        Self::canonical(m, a)
    }

    pub fn neg(&self) -> Scalar {
        Scalar { cond: self.cond, coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if self.cond == 1 && other.cond == 1 {
            return Scalar {
                cond: 1,
                coords: vec![&self.coords[0] * &other.coords[0]],
            };
        }
        if self.is_zero() || other.is_zero() {
            return Scalar::zero();
        }
        let m = self.merged_cond(other);
        let t = table(m).expect("mul table");
        let a = self.lift_coords(m);
        let b = other.lift_coords(m);
        let mut conv = vec![BigRational::zero(); 2 * t.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out = conv[..t.phi].to_vec();
        for (e, c) in conv.iter().enumerate().skip(t.phi) {
            if c.is_zero() {
                continue;
            }
            let p = &t.pow[(e as u64 % m) as usize];
            for j in 0..t.phi {
                out[j] += c * &p[j];
            }
        }
        Self::canonical(m, out)
    }

    pub fn recip(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Invalid("division by zero".into()));
        }
        if self.cond == 1 {
            return Ok(Scalar { cond: 1, coords: vec![self.coords[0].recip()] });
        }
        let t = table(self.cond).expect("recip table");
        let phim: Vec<BigRational> = t
            .phim
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let inv = poly_mod_inverse(&self.coords, &phim)
            .expect("nonzero element of a field has an inverse");
        let mut coords = inv;
        coords.resize(t.phi, BigRational::zero());
        Ok(Self::canonical(self.cond, coords))
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow_u(&self, mut k: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn pow_i(&self, k: i64) -> Result<Scalar> {
        if k >= 0 {
            Ok(self.pow_u(k as u64))
        } else {
            Ok(self.recip()?.pow_u(k.unsigned_abs()))
        }
    }

    /// The Galois automorphism zeta -> zeta^k (k coprime to the conductor).
    pub fn galois(&self, k: u64) -> Scalar {
        if self.cond == 1 {
            return self.clone();
        }
        debug_assert_eq!(self.cond.gcd(&k), 1);
        let t = table(self.cond).expect("galois table");
        let mut out = vec![BigRational::zero(); t.phi];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let p = &t.pow[((k * i as u64) % self.cond) as usize];
            for j in 0..t.phi {
                out[j] += c * &p[j];
            }
        }
        Self::canonical(self.cond, out)
    }

    /// Complex conjugation (the automorphism zeta -> zeta^(m-1)).
    pub fn conj(&self) -> Scalar {
        if self.cond == 1 {
            self.clone()
        } else {
            self.galois(self.cond - 1)
        }
    }

    /// Field norm down to Q: the product of all Galois conjugates.
    pub fn norm(&self) -> BigRational {
        if self.cond == 1 {
            return self.coords[0].clone();
        }
        let mut acc = Scalar::one();
        for k in 1..self.cond {
            if self.cond.gcd(&k) == 1 {
                acc = acc.mul(&self.galois(k));
            }
        }
        acc.as_rational()
            .expect("norm of a cyclotomic element is rational")
            .clone()
    }

    /// When `self` is a root of unity, its primitive description `(ord, t)`
    /// with `self = zeta_ord^t` and `gcd(t, ord) = 1`.
    pub fn as_root_of_unity(&self) -> Option<(u64, u64)> {
        if let Some(q) = self.as_rational() {
            if q.is_one() {
                return Some((1, 0));
            }
            if (-q).is_one() {
                return Some((2, 1));
            }
            return None;
        }
        let m = self.cond;
        for j in 1..m {
            let z = Scalar::root_of_unity(m, j).ok()?;
            if *self == z {
                let g = m.gcd(&j);
                return Some((m / g, j / g));
            }
            if *self == z.neg() {
                // -zeta_m^j = zeta_(2m)^(m + 2j); reachable only for odd m
                // (for even m, -1 is itself a power of zeta_m).
                let o = 2 * m;
                let t = (m + 2 * j) % o;
                let g = o.gcd(&t);
                return Some((o / g, t / g));
            }
        }
        None
    }

    /// Writes `self` as q * zeta_ord^t with q a positive rational, when such
    /// a factorization exists in the ambient field.
    pub fn as_scaled_root_of_unity(&self) -> Option<(BigRational, u64, u64)> {
        if self.is_zero() {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return if q.is_positive() {
                Some((q.clone(), 1, 0))
            } else {
                Some((-q.clone(), 2, 1))
            };
        }
        let n = self.norm();
        let phi = euler_phi(self.cond) as u32;
        let q = rational_nth_root(&n.abs(), phi)?;
        if q.is_zero() {
            return None;
        }
        let omega = self.mul(&Scalar::from_ratio(q.recip()));
        let (ord, t) = omega.as_root_of_unity()?;
        Some((q, ord, t))
    }
}

/// Exact n-th root of a nonnegative rational, when it exists.
pub fn rational_nth_root(q: &BigRational, n: u32) -> Option<BigRational> {
    debug_assert!(!q.is_negative());
    let num = q.numer();
    let den = q.denom();
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if &rn.pow(n) == num && &rd.pow(n) == den {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// Inverse of `a` modulo the monic rational polynomial `modulus` via the
/// extended Euclidean algorithm; `None` only if gcd is non-constant.
fn poly_mod_inverse(a: &[BigRational], modulus: &[BigRational]) -> Option<Vec<BigRational>> {
    // Invariant: r0 = s0 * a (mod modulus), r1 = s1 * a (mod modulus).
    let trim = |v: &mut Vec<BigRational>| {
        while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    };
    let mut r0 = modulus.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    let mut s0: Vec<BigRational> = vec![BigRational::zero()];
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem_q(&r0, &r1);
        let qs1 = poly_mul_q(&q, &s1);
        let mut s2 = s0.clone();
        s2.resize(s2.len().max(qs1.len()), BigRational::zero());
        for (i, c) in qs1.iter().enumerate() {
            s2[i] -= c;
        }
        trim(&mut s2);
        r0 = r1;
        r1 = r;
        trim(&mut r1);
        s0 = s1;
        s1 = s2;
    }
    if r0.len() != 1 || r0[0].is_zero() {
        return None;
    }
    let inv = r0[0].recip();
    Some(s0.iter().map(|c| c * &inv).collect())
}

fn poly_divrem_q(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    if num.len() <= dd {
        return (vec![BigRational::zero()], rem);
    }
    let nd = num.len() - 1;
    let lead = den[dd].recip();
    let mut quo = vec![BigRational::zero(); nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = &rem[k + dd] * &lead;
        if !c.is_zero() {
            quo[k] = c.clone();
            for i in 0..=dd {
                let t = &den[i] * &c;
                rem[k + i] -= t;
            }
        }
    }
    rem.truncate(dd.max(1));
    (quo, rem)
}

fn poly_mul_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{q}");
        }
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let unit = match i {
                0 => String::new(),
                1 => format!("zeta{}", self.cond),
                _ => format!("zeta{}^{}", self.cond, i),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{unit}")?;
            } else {
                write!(f, "{mag}*{unit}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn phi_and_divisors() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(2), 1);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(5), 4);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |m: u64| -> Vec<i64> {
            table(m)
                .unwrap()
                .phim
                .iter()
                .map(|c| i64::try_from(c.clone()).unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(as_i64(5), vec![1, 1, 1, 1, 1]);
    }

    #[test]
    fn roots_of_unity_canonicalize() {
        let i = Scalar::i_unit();
        assert_eq!(i.conductor(), 4);
        assert_eq!(i.mul(&i), Scalar::from_int(-1));
        // zeta_6 lives in Q(zeta_3).
        let z6 = Scalar::root_of_unity(6, 1).unwrap();
        assert_eq!(z6.conductor(), 3);
        assert_eq!(z6.pow_u(6), Scalar::one());
        assert_eq!(z6.pow_u(3), Scalar::from_int(-1));
        // zeta_8^2 = i.
        let z8 = Scalar::root_of_unity(8, 1).unwrap();
        assert_eq!(z8.mul(&z8), i);
        // zeta_2 = -1 is rational.
        assert_eq!(Scalar::root_of_unity(2, 1).unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn arithmetic_gaussian() {
        let i = Scalar::i_unit();
        let one = Scalar::one();
        let a = one.add(&i); // 1 + i
        let b = one.sub(&i); // 1 - i
        assert_eq!(a.mul(&b), Scalar::from_int(2));
        let inv = a.recip().unwrap();
        assert_eq!(inv.mul(&a), Scalar::one());
        assert_eq!(inv, b.mul(&Scalar::ratio(1, 2)));
    }

    #[test]
    fn zeta3_relations() {
        let z = Scalar::root_of_unity(3, 1).unwrap();
        let z2 = z.pow_u(2);
        // 1 + zeta + zeta^2 = 0.
        assert!(Scalar::one().add(&z).add(&z2).is_zero());
        assert_eq!(z.mul(&z2), Scalar::one());
        assert_eq!(Scalar::one().add(&z).norm(), BigRational::one());
    }

    #[test]
    fn galois_and_norm() {
        let z5 = Scalar::root_of_unity(5, 1).unwrap();
        assert_eq!(z5.galois(2), z5.pow_u(2));
        // N(zeta_5) = 1; N(1 - zeta_5) = Phi_5(1) = 5.
        assert_eq!(z5.norm(), BigRational::one());
        assert_eq!(Scalar::one().sub(&z5).norm(), q(5, 1));
        assert_eq!(Scalar::from_int(-3).norm(), q(-3, 1));
    }

    #[test]
    fn conjugation() {
        let z8 = Scalar::root_of_unity(8, 1).unwrap();
        let x = z8.add(&z8.conj()); // zeta_8 + zeta_8^-1 = sqrt(2)
        assert_eq!(x.mul(&x), Scalar::from_int(2));
        assert_eq!(x.conj(), x);
    }

    #[test]
    fn root_of_unity_detection() {
        let z6 = Scalar::root_of_unity(6, 1).unwrap();
        assert_eq!(z6.as_root_of_unity(), Some((6, 1)));
        let m = Scalar::root_of_unity(3, 1).unwrap().neg();
        assert_eq!(m.as_root_of_unity(), Some((6, 5)));
        assert_eq!(Scalar::one().as_root_of_unity(), Some((1, 0)));
        assert_eq!(Scalar::from_int(-1).as_root_of_unity(), Some((2, 1)));
        assert_eq!(Scalar::from_int(2).as_root_of_unity(), None);
        assert_eq!(
            Scalar::one().add(&Scalar::root_of_unity(5, 1).unwrap()).as_root_of_unity(),
            None
        );
    }

    #[test]
    fn scaled_root_of_unity() {
        let z8 = Scalar::root_of_unity(8, 3).unwrap();
        let x = z8.mul(&Scalar::from_int(6));
        assert_eq!(x.as_scaled_root_of_unity(), Some((q(6, 1), 8, 3)));
        assert_eq!(
            Scalar::from_int(-4).as_scaled_root_of_unity(),
            Some((q(4, 1), 2, 1))
        );
        assert_eq!(
            Scalar::ratio(3, 2).as_scaled_root_of_unity(),
            Some((q(3, 2), 1, 0))
        );
        // 1 + zeta_5 is not rational * root of unity.
        let bad = Scalar::one().add(&Scalar::root_of_unity(5, 1).unwrap());
        assert_eq!(bad.as_scaled_root_of_unity(), None);
        // 1 + i = sqrt(2) * zeta_8 has irrational modulus, so no factorization.
        let g = Scalar::one().add(&Scalar::i_unit());
        assert_eq!(g.as_scaled_root_of_unity(), None);
    }

    #[test]
    fn rational_nth_roots() {
        assert_eq!(rational_nth_root(&q(8, 27), 3), Some(q(2, 3)));
        assert_eq!(rational_nth_root(&q(8, 27), 2), None);
        assert_eq!(rational_nth_root(&q(1, 1), 5), Some(q(1, 1)));
    }

    #[test]
    fn minimal_conductor_after_mixing() {
        // zeta_12^3 = i must come back at conductor 4.
        let z12 = Scalar::root_of_unity(12, 1).unwrap();
        let x = z12.pow_u(3);
        assert_eq!(x, Scalar::i_unit());
        assert_eq!(x.conductor(), 4);
        // (1+i) * (1-i) mixes back to conductor 1.
        let z = Scalar::root_of_unity(8, 1).unwrap();
        let s = z.add(&z.pow_u(7));
        assert_eq!(s.conductor(), 8);
        assert_eq!(s.pow_u(2).conductor(), 1);
    }

    #[test]
    fn display_formats() {
        assert_eq!(Scalar::ratio(-1, 2).to_string(), "-1/2");
        let z8 = Scalar::root_of_unity(8, 1).unwrap();
        let x = Scalar::one().add(&z8.mul(&Scalar::from_int(2)));
        assert_eq!(x.to_string(), "1 + 2*zeta8");
    }
}
