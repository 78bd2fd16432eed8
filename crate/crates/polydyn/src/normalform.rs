//! Canonical forms and invariants of a single polynomial: centering,
//! conjugacy testing, the symmetry group of the invariant set, special-class
//! detection (powers and Chebyshev polynomials), and twist orders.

use serde::Serialize;

use crate::algebra::{chebyshev, eth_roots, euler_phi, AffineMap, Poly, Scalar};
use crate::{Error, Result};

/// sigma^{-1} . P . sigma, the affine change of coordinates.
pub fn conjugate_by(p: &Poly, sigma: &AffineMap) -> Poly {
    sigma.inverse().after(&sigma.before(p))
}

/// Centers A: returns (A_c, tau) with A_c = tau^{-1} . A . tau, tau a
/// translation z + t, and the second-highest coefficient of A_c zero.
pub fn center(a: &Poly) -> Result<(Poly, AffineMap)> {
    let d = match a.degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::Invalid("centering needs degree >= 2".into())),
    };
    let t = a
        .coeff(d - 1)
        .div(&Scalar::from_int(d as i64).mul(a.lc()))?
        .neg();
    let tau = AffineMap::shift(t);
    let ac = conjugate_by(a, &tau);
    debug_assert!(ac.coeff(d - 1).is_zero());
    Ok((ac, tau))
}

/// A witness that two polynomials are conjugate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyWitness {
    /// sigma with B = sigma^{-1} . A . sigma.
    pub map: AffineMap,
}

/// Searches for sigma = a z + b over cyclotomic scalars with
/// B = sigma^{-1} . A . sigma.
///
/// Centering reduces the freedom to a scaling a with a^(d-1) fixed by the
/// leading coefficients; all cyclotomic candidates are tested. When the
/// required root lies outside every cyclotomic field the search reports an
/// unsupported extension instead of deciding.
pub fn conjugacy_test(a: &Poly, b: &Poly) -> Result<Option<ConjugacyWitness>> {
    let d = match (a.degree(), b.degree()) {
        (Some(da), Some(db)) if da == db && da >= 2 => da,
        _ => {
            return Err(Error::Invalid(
                "conjugacy test needs equal degrees >= 2".into(),
            ))
        }
    };
    let (ac, tau_a) = center(a)?;
    let (bc, tau_b) = center(b)?;
    let lam = bc.lc().div(ac.lc())?;
    let candidates = eth_roots(&lam, (d - 1) as u32)?;
    for cand in candidates {
        let inv = cand.recip()?;
        let mut ok = true;
        let mut apow = inv.clone(); // a^(i-1) starting at i = 0
        for i in 0..=d {
            if bc.coeff(i) != apow.mul(&ac.coeff(i)) {
                ok = false;
                break;
            }
            apow = apow.mul(&cand);
        }
        if ok {
            let sigma = tau_a
                .compose(&AffineMap::scaling(cand)?)
                .compose(&tau_b.inverse());
            debug_assert_eq!(conjugate_by(a, &sigma), *b);
            return Ok(Some(ConjugacyWitness { map: sigma }));
        }
    }
    Ok(None)
}

/// The symmetry group of the invariant set of a non-power polynomial: cyclic
/// of order n, generated by conjugating z -> zeta_n z back through the
/// centering.
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryGroup {
    pub order: u64,
    /// Common residue s of the support exponents of the centered form mod n.
    pub s_residue: u64,
    /// Generator in the original coordinates.
    pub generator: AffineMap,
    /// The centering translation used.
    pub centering: AffineMap,
}

impl SymmetryGroup {
    /// All group elements, in generator-power order.
    pub fn elements(&self) -> Result<Vec<AffineMap>> {
        let mut out = Vec::with_capacity(self.order as usize);
        for j in 0..self.order {
            let zeta = Scalar::root_of_unity(self.order, j)?;
            let scaled = AffineMap::scaling(zeta)?;
            out.push(self.centering.compose(&scaled).compose(&self.centering.inverse()));
        }
        Ok(out)
    }

    /// Order of `mu` inside the group, or `None` when `mu` is not a member.
    pub fn member_order(&self, mu: &AffineMap) -> Option<u64> {
        let mu_c = self
            .centering
            .inverse()
            .compose(mu)
            .compose(&self.centering);
        if !mu_c.b().is_zero() {
            return None;
        }
        let eps = mu_c.a().clone();
        let mut pow = Scalar::one();
        for r in 1..=self.order {
            pow = pow.mul(&eps);
            if pow.is_one() {
                return Some(r);
            }
        }
        None
    }
}

/// Computes the symmetry group datum from the support of the centered form.
/// Power-kind input (singleton support after centering) has an infinite
/// group and is signaled as an error.
pub fn symmetry_group(a: &Poly) -> Result<SymmetryGroup> {
    let d = match a.degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::Invalid("symmetry group needs degree >= 2".into())),
    };
    let (ac, tau) = center(a)?;
    let support = ac.support();
    if support.len() == 1 {
        return Err(Error::Invalid(
            "power-special polynomial: the symmetry group is infinite".into(),
        ));
    }
    let mut n: u64 = 0;
    for &e in &support {
        n = num::Integer::gcd(&n, &((d - e) as u64));
    }
    debug_assert!(n >= 1);
    let s = (d as u64) % n;
    debug_assert!(support.iter().all(|&e| (e as u64) % n == s));
    let zeta = Scalar::root_of_unity(n, 1)?;
    let generator = tau
        .compose(&AffineMap::scaling(zeta)?)
        .compose(&tau.inverse());
    Ok(SymmetryGroup { order: n, s_residue: s, generator, centering: tau })
}

/// |Sigma(A)| * phi(|Sigma(A)|), the period-bound quantity.
pub fn n_of(a: &Poly) -> Result<u64> {
    let g = symmetry_group(a)?;
    Ok(g.order * euler_phi(g.order))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecialKind {
    Power,
    ChebyshevPlus,
    ChebyshevMinus,
    None,
}

/// Whether A is conjugate to z^d or to a signed Chebyshev polynomial, with a
/// witness pair (mu, nu = mu^{-1}) such that A = mu . M . nu for the model M.
#[derive(Debug, Clone, Serialize)]
pub struct SpecialClass {
    pub kind: SpecialKind,
    pub witness: Option<(AffineMap, AffineMap)>,
}

/// Classifies A up to conjugacy against the special models z^d and ±T_d.
///
/// The witness may be absent for a power classification whose scaling root
/// lies outside cyclotomic fields; Chebyshev probes whose scaling root is
/// unsupported are reported as not conjugate.
pub fn special_class(a: &Poly) -> Result<SpecialClass> {
    let d = match a.degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::Invalid("special classification needs degree >= 2".into())),
    };
    let (ac, tau) = center(a)?;
    if ac.support().len() == 1 {
        // A is conjugate to z^d: find mu = tau . (a z) with a^(d-1) = 1/lc.
        let witness = match eth_roots(&ac.lc().recip()?, (d - 1) as u32) {
            Ok(roots) => {
                let mu = tau.compose(&AffineMap::scaling(roots[0].clone())?);
                let model = Poly::monomial(d, Scalar::one());
                debug_assert_eq!(conjugate_by(&model, &mu.inverse()), *a);
                Some((mu.clone(), mu.inverse()))
            }
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        };
        return Ok(SpecialClass { kind: SpecialKind::Power, witness });
    }
    let t = chebyshev(d as u64)?;
    for (kind, model) in [
        (SpecialKind::ChebyshevPlus, t.clone()),
        (SpecialKind::ChebyshevMinus, t.neg()),
    ] {
        match conjugacy_test(a, &model) {
            Ok(Some(w)) => {
                // model = sigma^{-1} . A . sigma, so A = sigma . model . sigma^{-1}.
                let mu = w.map.clone();
                return Ok(SpecialClass { kind, witness: Some((mu.clone(), mu.inverse())) });
            }
            Ok(None) => {}
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(SpecialClass { kind: SpecialKind::None, witness: None })
}

/// Minimal N >= 1 with (mu . A)^N = A^N for a symmetry mu, computed through
/// the exponent-sum congruence 1 + s + ... + s^(N-1) = 0 mod ord(mu); `None`
/// when gcd(s, ord(mu)) != 1, in which case no such N exists.
pub fn twist_order(a: &Poly, mu: &AffineMap) -> Result<Option<u64>> {
    let group = symmetry_group(a)?;
    let r = group
        .member_order(mu)
        .ok_or_else(|| Error::Invalid("the map is not a symmetry of the polynomial".into()))?;
    let s = group.s_residue;
    let bound = group.order * euler_phi(group.order);
    if num::Integer::gcd(&s, &r) != 1 {
        return Ok(None);
    }
    let mut sum = 0u64; // S_N mod r
    let mut spow = 1u64; // s^N mod r
    for n in 1..=bound {
        sum = (sum + spow) % r;
        spow = (spow * (s % r.max(1))) % r;
        if sum == 0 {
            cross_check_twist(a, mu, n)?;
            return Ok(Some(n));
        }
    }
    Err(Error::Internal(
        "twist-order congruence had no solution within the group bound".into(),
    ))
}

/// Literal composition check of the twist identity, skipped when the
/// iterated degree would exceed the cap.
fn cross_check_twist(a: &Poly, mu: &AffineMap, n: u64) -> Result<()> {
    let d = a.deg() as u64;
    if n > 8 {
        return Ok(());
    }
    let Some(deg) = d.checked_pow(n as u32) else {
        return Ok(());
    };
    if deg > crate::algebra::degree_cap() as u64 {
        return Ok(());
    }
    let twisted = mu.after(a);
    let lhs = twisted.iterate(n as u32)?;
    let rhs = a.iterate(n as u32)?;
    if lhs != rhs {
        return Err(Error::Internal(
            "twist-order congruence disagreed with literal composition".into(),
        ));
    }
    Ok(())
}
