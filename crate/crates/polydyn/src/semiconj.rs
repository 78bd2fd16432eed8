//! Semiconjugacy between polynomials: verification, reduction to primitive
//! triples, their classification into power and Chebyshev shapes, enumeration
//! of partners one degree of freedom up or down, and transfer of a
//! semiconjugacy along iterates.
//!
//! Throughout, "A sits over B via X" means A . X = X . B for nonconstant X,
//! and a triple is *primitive* when gcd(deg X, deg B) = 1.

use num::integer::gcd;
use serde::Serialize;

use crate::algebra::{
    chebyshev, degree_cap, divisors, eth_roots, euler_phi, monic_nth_root, roots_in_field,
    solve_outer, AffineMap, Poly, Scalar,
};
use crate::decompose::{
    canonical_rep, canonical_rep_with_map, equivalence_class, iterate_root, normalized_inner,
    EquivalenceChain,
};
use crate::normalform::{
    center, conjugacy_test, conjugate_by, special_class, symmetry_group, SpecialKind,
};
use crate::{Error, Result};

fn require_degree(p: &Poly, min: usize, name: &str) -> Result<usize> {
    match p.degree() {
        Some(d) if d >= min => Ok(d),
        _ => Err(Error::Invalid(format!(
            "{name} must have degree at least {min}"
        ))),
    }
}

/// Outcome of checking the identity A . X = X . B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    /// The identity A . X = X . B holds.
    pub holds: bool,
    /// deg X and deg B are coprime.
    pub primitive: bool,
}

/// Checks A . X = X . B and reports whether the triple is primitive.
pub fn verify(a: &Poly, b: &Poly, x: &Poly) -> Result<VerifyReport> {
    require_degree(a, 1, "A")?;
    let db = require_degree(b, 1, "B")?;
    let dx = require_degree(x, 1, "X")?;
    let holds = a.compose(x)? == x.compose(b)?;
    Ok(VerifyReport {
        holds,
        primitive: gcd(dx, db) == 1,
    })
}

/// Result of peeling common inner factors from X and B until the triple
/// becomes primitive: A . X0 = X0 . B0, X = X0 . U, and B0 . U = U . B.
#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveReduction {
    pub b0: Poly,
    pub x0: Poly,
    /// Accumulated inner factor U transported from X to B.
    pub u: Poly,
    /// Elementary chain from B to B0 whose witness is U.
    pub chain: EquivalenceChain,
}

/// Reduces A . X = X . B to a primitive triple. Each round splits off the
/// normalized inner factor W of X whose degree is gcd(deg X, deg B) — a
/// common inner factor of X and B exists at that degree — and replaces B by
/// its elementary partner W . (B / W).
pub fn primitive_reduce(a: &Poly, b: &Poly, x: &Poly) -> Result<PrimitiveReduction> {
    let report = verify(a, b, x)?;
    if !report.holds {
        return Err(Error::Invalid("A . X = X . B does not hold".into()));
    }
    let mut b_cur = b.clone();
    let mut x_cur = x.clone();
    let mut u_total = Poly::z();
    let mut steps = Vec::new();
    loop {
        let dx = x_cur.deg();
        let dbc = b_cur.deg();
        let g = gcd(dx, dbc);
        if g == 1 {
            break;
        }
        let (x_next, w) = normalized_inner(&x_cur, g)?.ok_or_else(|| {
            Error::Internal("X has no inner factor at the common degree".into())
        })?;
        let b_tilde = solve_outer(&b_cur, &w)?.ok_or_else(|| {
            Error::Internal("B has no inner factor matching the one peeled from X".into())
        })?;
        b_cur = w.compose(&b_tilde)?;
        u_total = w.compose(&u_total)?;
        steps.push((w, b_tilde));
        x_cur = x_next;
    }
    if x_cur.compose(&u_total)? != *x
        || a.compose(&x_cur)? != x_cur.compose(&b_cur)?
        || b_cur.compose(&u_total)? != u_total.compose(b)?
    {
        return Err(Error::Internal("reduction lost an intertwining identity".into()));
    }
    let chain = EquivalenceChain {
        steps,
        endpoints: (b.clone(), b_cur.clone()),
        witness: u_total.clone(),
    };
    Ok(PrimitiveReduction {
        b0: b_cur,
        x0: x_cur,
        u: u_total,
        chain,
    })
}

/// The two shapes a primitive triple can take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimitiveKind {
    PowerType,
    ChebyshevType,
}

/// Normal form of a primitive triple A . X = X . B with deg X = n >= 2.
///
/// Power type: X = nu . z^n . mu, A = nu . z^s R(z)^n . nu^-1, and
/// B = mu^-1 . z^s R(z^n) . mu, with gcd(s, n) = 1.
///
/// Chebyshev type: X = nu . T_n . mu, A = nu . (sign_a T_m) . nu^-1, and
/// B = mu^-1 . (sign_b T_m) . mu, with sign_a = sign_b^n.
#[derive(Debug, Clone, Serialize)]
pub struct PrimitiveForm {
    pub kind: PrimitiveKind,
    pub n: u64,
    pub s: Option<u64>,
    pub r: Option<Poly>,
    pub m: Option<u64>,
    pub sign_a: Option<i8>,
    pub sign_b: Option<i8>,
    pub mu: AffineMap,
    pub nu: AffineMap,
}

/// Puts a primitive triple (deg X >= 2) into its normal form.
pub fn ritt_classify(a: &Poly, b: &Poly, x: &Poly) -> Result<PrimitiveForm> {
    let report = verify(a, b, x)?;
    if !report.holds {
        return Err(Error::Invalid("A . X = X . B does not hold".into()));
    }
    if !report.primitive {
        return Err(Error::Invalid(
            "triple is not primitive; reduce it first".into(),
        ));
    }
    let n = require_degree(x, 2, "X")?;
    let d = require_degree(b, 2, "B")?;
    let sc = special_class(a)?;
    match sc.kind {
        SpecialKind::ChebyshevPlus | SpecialKind::ChebyshevMinus => {
            let (w1, _) = sc.witness.clone().ok_or_else(|| {
                Error::Unsupported(
                    "Chebyshev witness requires scaling outside the supported fields".into(),
                )
            })?;
            let sign_a: i8 = if sc.kind == SpecialKind::ChebyshevPlus {
                1
            } else {
                -1
            };
            let tm = chebyshev(d as u64)?;
            let tn = chebyshev(n as u64)?;
            let two_pow = Scalar::from_int(2).pow_u(n as u64 - 1);
            let n_scalar = Scalar::from_int(n as i64);
            // The conjugator onto the model is unique only up to a symmetry
            // of the model; for odd m both signs must be tried.
            let mut gauges = vec![AffineMap::identity()];
            if d % 2 == 1 {
                gauges.push(AffineMap::scaling(Scalar::from_int(-1))?);
            }
            for gamma in gauges {
                let nu = w1.compose(&gamma);
                let y = nu.inverse().after(x);
                let lam = y.coeff(n).div(&two_pow)?;
                let branches = eth_roots(&lam, n as u32)?;
                let mut mu = None;
                for lead in branches {
                    let denom = two_pow.mul(&n_scalar).mul(&lead.pow_u(n as u64 - 1));
                    let shift = y.coeff(n - 1).div(&denom)?;
                    let cand = AffineMap::new(lead, shift)?;
                    if tn.compose(&cand.to_poly())? == y {
                        mu = Some(cand);
                        break;
                    }
                }
                let mu = match mu {
                    Some(m) => m,
                    None => continue,
                };
                let conj = conjugate_by(b, &mu.inverse());
                let sign_b: i8 = if conj == tm {
                    1
                } else if conj == tm.neg() {
                    -1
                } else {
                    return Err(Error::Internal(
                        "conjugated B is not a signed Chebyshev polynomial".into(),
                    ));
                };
                let expected = if n % 2 == 0 { 1 } else { sign_b };
                if sign_a != expected {
                    return Err(Error::Internal("sign law sign_a = sign_b^n violated".into()));
                }
                return Ok(PrimitiveForm {
                    kind: PrimitiveKind::ChebyshevType,
                    n: n as u64,
                    s: None,
                    r: None,
                    m: Some(d as u64),
                    sign_a: Some(sign_a),
                    sign_b: Some(sign_b),
                    mu,
                    nu,
                });
            }
            Err(Error::Internal(
                "no affine change matches the Chebyshev model".into(),
            ))
        }
        _ => {
            let (bc, tau_b) = center(b)?;
            let mu = tau_b.inverse();
            let s = d % n;
            for e in bc.support() {
                if e % n != s {
                    return Err(Error::Internal(
                        "centered B does not respect the expected stride".into(),
                    ));
                }
            }
            let k = (d - s) / n;
            let mut rc = Vec::with_capacity(k + 1);
            for j in 0..=k {
                rc.push(bc.coeff(s + n * j));
            }
            let r = Poly::from_coeffs(rc);
            let xt = x.compose(&tau_b.to_poly())?;
            let binomial = Poly::monomial(n, xt.coeff(n)).add(&Poly::constant(xt.coeff(0)));
            if xt != binomial {
                return Err(Error::Internal(
                    "X does not reduce to a binomial over the centered B".into(),
                ));
            }
            let nu = AffineMap::new(xt.coeff(n), xt.coeff(0))?;
            let model = Poly::monomial(s, Scalar::one()).mul(&r.pow(n as u32)?);
            if conjugate_by(&model, &nu.inverse()) != *a {
                return Err(Error::Internal(
                    "A is not conjugate to the reconstructed power model".into(),
                ));
            }
            debug_assert_eq!(gcd(s, n), 1);
            Ok(PrimitiveForm {
                kind: PrimitiveKind::PowerType,
                n: n as u64,
                s: Some(s as u64),
                r: Some(r),
                m: None,
                sign_a: None,
                sign_b: None,
                mu,
                nu,
            })
        }
    }
}

fn push_unique(pairs: &mut Vec<(Poly, Poly)>, rep: Poly, x: Poly) -> Result<()> {
    for (existing, _) in pairs.iter() {
        if *existing == rep {
            return Ok(());
        }
        match conjugacy_test(existing, &rep) {
            Ok(Some(_)) => return Ok(()),
            Ok(None) => {}
            // Undecided conjugacy: keep both rather than drop a partner.
            Err(Error::Unsupported(_)) => {}
            Err(e) => return Err(e),
        }
    }
    pairs.push((rep, x));
    Ok(())
}

/// Pair (rep, X) with rep . X = X . b and rep conjugate to b.
fn self_pair_over(b: &Poly) -> Result<(Poly, Poly)> {
    let rep = canonical_rep(b)?;
    match conjugacy_test(&rep, b) {
        Ok(Some(w)) => {
            // b = map^-1 . rep . map, so rep . (map . b) = (map . b) . b.
            let x = w.map.after(b);
            Ok((rep, x))
        }
        _ => Ok((b.clone(), b.clone())),
    }
}

/// Pair (rep, X) with a . X = X . rep and rep conjugate to a.
fn self_pair_under(a: &Poly) -> Result<(Poly, Poly)> {
    let rep = canonical_rep(a)?;
    match conjugacy_test(a, &rep) {
        Ok(Some(w)) => {
            // rep = map^-1 . a . map, so a . (map . rep) = (map . rep) . rep.
            let x = w.map.after(&rep);
            Ok((rep, x))
        }
        _ => Ok((a.clone(), a.clone())),
    }
}

/// Polynomials sitting over B, one per conjugacy class, each with a verified
/// witness.
#[derive(Debug, Clone, Serialize)]
pub struct DownSet {
    pub pairs: Vec<(Poly, Poly)>,
    pub truncated: bool,
}

/// Enumerates the A with A . X = X . B, one representative per conjugacy
/// class. Every such A arises, up to conjugacy, by regrouping the centered
/// form of a decomposition partner of B along an arithmetic progression of
/// its support, so the search walks the elementary-equivalence class of B
/// and reads off each stride.
pub fn enumerate_down(b: &Poly, step_bound: Option<u64>) -> Result<DownSet> {
    let d = require_degree(b, 2, "B")?;
    let sc = special_class(b)?;
    if sc.kind == SpecialKind::Power {
        // The only class over a power is the power itself.
        let pair = self_pair_over(b)?;
        return Ok(DownSet {
            pairs: vec![pair],
            truncated: false,
        });
    }
    let ec = equivalence_class(b, step_bound)?;
    let mut pairs: Vec<(Poly, Poly)> = Vec::new();
    for member in &ec.members {
        let (bc, tau) = center(&member.found)?;
        let supp = bc.support();
        if supp.len() < 2 {
            continue;
        }
        let mut stride = 0usize;
        for e in &supp {
            stride = gcd(stride, d - e);
        }
        // member.found . witness = witness . b
        let carried = tau.inverse().after(&member.chain.witness);
        for n_u in divisors(stride as u64) {
            let n = n_u as usize;
            let s = d % n;
            let k = (d - s) / n;
            let mut rc = Vec::with_capacity(k + 1);
            for j in 0..=k {
                rc.push(bc.coeff(s + n * j));
            }
            let r = Poly::from_coeffs(rc);
            let a_cand = Poly::monomial(s, Scalar::one()).mul(&r.pow(n as u32)?);
            let mut x_cand = Poly::monomial(n, Scalar::one()).compose(&carried)?;
            if x_cand.deg() < 2 {
                // Pad a linear witness; X . B intertwines whenever X does.
                x_cand = x_cand.compose(b)?;
            }
            if a_cand.compose(&x_cand)? != x_cand.compose(b)? {
                return Err(Error::Internal(
                    "stride readout fails the intertwining identity".into(),
                ));
            }
            let (rep, sigma) = canonical_rep_with_map(&a_cand)?;
            let x_rep = sigma.inverse().after(&x_cand);
            push_unique(&mut pairs, rep, x_rep)?;
        }
    }
    Ok(DownSet {
        pairs,
        truncated: ec.truncated,
    })
}

/// A branch of the ascent search that could not be explored exactly.
#[derive(Debug, Clone, Serialize)]
pub struct UnsupportedBranch {
    pub alpha: Option<Scalar>,
    pub n: Option<u64>,
    pub reason: String,
}

/// Polynomials B sitting under A (A . X = X . B), one per conjugacy class,
/// each with a verified witness.
#[derive(Debug, Clone, Serialize)]
pub struct UpSet {
    pub pairs: Vec<(Poly, Poly)>,
    pub unsupported: Vec<UnsupportedBranch>,
    pub truncated: bool,
}

/// Enumerates the B with A . X = X . B, one representative per conjugacy
/// class. Each primitive witness forces a fixed point alpha of A at which
/// the recentered polynomial is z^s R(z)^n with gcd(s, n) = 1; the search
/// scans fixed points, exact n-th power splittings, and leading-coefficient
/// branches, then closes each hit under elementary equivalence.
pub fn enumerate_up(a: &Poly, step_bound: Option<u64>) -> Result<UpSet> {
    let d = require_degree(a, 2, "A")?;
    let sc = special_class(a)?;
    let mut pairs: Vec<(Poly, Poly)> = Vec::new();
    let mut unsupported: Vec<UnsupportedBranch> = Vec::new();
    let mut truncated = false;
    match sc.kind {
        SpecialKind::Power => {
            // Everything under a power is conjugate to the power itself.
            pairs.push(self_pair_under(a)?);
            return Ok(UpSet {
                pairs,
                unsupported,
                truncated,
            });
        }
        SpecialKind::ChebyshevPlus | SpecialKind::ChebyshevMinus => {
            pairs.push(self_pair_under(a)?);
            // The sign law sign_a = sign_b^n admits the opposite sign under
            // an odd-degree plus-type Chebyshev, through an even witness.
            if d % 2 == 1 && sc.kind == SpecialKind::ChebyshevPlus {
                match &sc.witness {
                    Some((w1, _)) => {
                        let tm = chebyshev(d as u64)?;
                        let t2 = chebyshev(2)?;
                        let twin = conjugate_by(&tm.neg(), &w1.inverse());
                        let x2 = w1.after(&t2).compose(&w1.inverse().to_poly())?;
                        if a.compose(&x2)? != x2.compose(&twin)? {
                            return Err(Error::Internal(
                                "sign twin fails the intertwining identity".into(),
                            ));
                        }
                        let (rep, sigma) = canonical_rep_with_map(&twin)?;
                        let x_rep = x2.compose(&sigma.to_poly())?;
                        push_unique(&mut pairs, rep, x_rep)?;
                    }
                    None => unsupported.push(UnsupportedBranch {
                        alpha: None,
                        n: Some(2),
                        reason: "sign twin requires scaling outside the supported fields".into(),
                    }),
                }
            }
            return Ok(UpSet {
                pairs,
                unsupported,
                truncated,
            });
        }
        SpecialKind::None => {}
    }
    pairs.push(self_pair_under(a)?);
    let search = roots_in_field(&a.sub(&Poly::z()))?;
    if search
        .residual
        .as_ref()
        .and_then(|p| p.degree())
        .map_or(false, |dr| dr >= 1)
    {
        unsupported.push(UnsupportedBranch {
            alpha: None,
            n: None,
            reason: "some fixed points lie outside the supported fields".into(),
        });
    }
    if search.truncated {
        truncated = true;
    }
    for (alpha, _) in &search.roots {
        let tau = AffineMap::shift(alpha.clone());
        let p = conjugate_by(a, &tau);
        let supp = p.support();
        let s = supp[0];
        if s == 0 {
            return Err(Error::Internal(
                "fixed point does not vanish after recentering".into(),
            ));
        }
        if s == d {
            continue;
        }
        let q = Poly::from_coeffs(p.coeffs()[s..].to_vec());
        let lead = q.lc();
        let q_monic = q.monic()?;
        for n_u in divisors((d - s) as u64) {
            let n = n_u as usize;
            if n < 2 || gcd(s, n) != 1 {
                continue;
            }
            let s_tilde = match monic_nth_root(&q_monic, n as u32)? {
                Some(root) => root,
                None => continue,
            };
            let branches = match eth_roots(&lead, n as u32) {
                Ok(bs) => bs,
                Err(Error::Unsupported(reason)) => {
                    unsupported.push(UnsupportedBranch {
                        alpha: Some(alpha.clone()),
                        n: Some(n as u64),
                        reason,
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            for u in branches {
                let r = s_tilde.scale(&u);
                let b0 = Poly::monomial(s, Scalar::one())
                    .mul(&r.compose(&Poly::monomial(n, Scalar::one()))?);
                let x0 = Poly::monomial(n, Scalar::one()).add(&Poly::constant(alpha.clone()));
                if a.compose(&x0)? != x0.compose(&b0)? {
                    return Err(Error::Internal(
                        "ascent branch fails the intertwining identity".into(),
                    ));
                }
                let ec = equivalence_class(&b0, step_bound)?;
                truncated = truncated || ec.truncated;
                for member in &ec.members {
                    let y = member.chain.reverse_witness()?;
                    let x_m = x0.compose(&y)?;
                    let (rep, sigma) = canonical_rep_with_map(&member.found)?;
                    let x_rep = x_m.compose(&sigma.to_poly())?;
                    if a.compose(&x_rep)? != x_rep.compose(&rep)? {
                        return Err(Error::Internal(
                            "equivalence closure lost the intertwining identity".into(),
                        ));
                    }
                    push_unique(&mut pairs, rep, x_rep)?;
                }
            }
        }
    }
    Ok(UpSet {
        pairs,
        unsupported,
        truncated,
    })
}

/// Writes P = mu . Q^k for an affine mu commuting with Q, if possible.
/// Q must be non-special; such an expression is then unique.
pub fn sha_express(p: &Poly, q: &Poly) -> Result<Option<(AffineMap, u64)>> {
    let dq = require_degree(q, 2, "Q")?;
    let sc = special_class(q)?;
    if sc.kind != SpecialKind::None {
        return Err(Error::Invalid(
            "base polynomial must not be special".into(),
        ));
    }
    let dp = require_degree(p, 1, "P")?;
    let mut k = 0u64;
    let mut cur = 1usize;
    while cur < dp {
        cur = cur
            .checked_mul(dq)
            .ok_or_else(|| Error::Resource("degree overflow while matching powers".into()))?;
        k += 1;
    }
    if cur != dp {
        return Err(Error::Invalid("deg P is not a power of deg Q".into()));
    }
    let group = symmetry_group(q)?;
    let candidate = if k == 0 {
        AffineMap::from_poly(p)?
    } else {
        let qk = q.iterate(k as u32)?;
        let scale = p.lc().div(&qk.lc())?;
        let diff = p.sub(&qk.scale(&scale));
        if diff.degree().map_or(false, |dd| dd >= 1) {
            return Ok(None);
        }
        AffineMap::new(scale, diff.coeff(0))?
    };
    if group.member_order(&candidate).is_none() {
        return Ok(None);
    }
    Ok(Some((candidate, k)))
}

/// Given A . X = X . B^l, recovers the unique lift with lift . X = X . B
/// and lift^l = A. Both identities are forced; failure of either signals
/// an internal inconsistency.
pub fn lift_iterate(b_hat: &Poly, x: &Poly, l: u32, a: &Poly) -> Result<Poly> {
    if l == 0 {
        return Err(Error::Invalid("iterate order must be positive".into()));
    }
    require_degree(a, 1, "A")?;
    require_degree(b_hat, 1, "B")?;
    let bl = b_hat.iterate(l)?;
    let report = verify(a, &bl, x)?;
    if !report.holds {
        return Err(Error::Invalid("A . X = X . B^l does not hold".into()));
    }
    let a_hat = solve_outer(&x.compose(b_hat)?, x)?
        .ok_or_else(|| Error::Internal("semiconjugacy does not lift along X".into()))?;
    if a_hat.iterate(l)? != *a {
        return Err(Error::Internal("lift does not iterate back to A".into()));
    }
    Ok(a_hat)
}

/// Outcome of searching for a shared-iterate descent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum DescendOutcome {
    Found { s: u64, b_hat: Poly },
    Exhausted { s_bound: u64 },
}

/// Given A^l . X = X . B, searches for s with B^s = b_hat^(l s) for some
/// b_hat, i.e. an l-th root of an iterate of B after passing to a further
/// iterate. The default bound is n phi(n) for n the primitive witness
/// degree of the reduced triple.
pub fn descend_iterate(
    a_hat: &Poly,
    l: u32,
    b: &Poly,
    x: &Poly,
    s_bound: Option<u64>,
) -> Result<DescendOutcome> {
    if l == 0 {
        return Err(Error::Invalid("iterate order must be positive".into()));
    }
    require_degree(a_hat, 2, "A")?;
    let db = require_degree(b, 2, "B")?;
    require_degree(x, 1, "X")?;
    let al = a_hat.iterate(l)?;
    let report = verify(&al, b, x)?;
    if !report.holds {
        return Err(Error::Invalid("A^l . X = X . B does not hold".into()));
    }
    let bound = match s_bound {
        Some(bd) => bd,
        None => {
            let red = primitive_reduce(&al, b, x)?;
            let n = red.x0.deg() as u64;
            if n <= 1 {
                1
            } else {
                n * euler_phi(n)
            }
        }
    };
    let cap = degree_cap() as u64;
    for s in 1..=bound {
        if s == 1 && l == 1 {
            return Ok(DescendOutcome::Found {
                s: 1,
                b_hat: b.clone(),
            });
        }
        let order = (l as u64)
            .checked_mul(s)
            .filter(|o| *o <= u32::MAX as u64)
            .ok_or_else(|| Error::Resource("iterate order overflow".into()))?;
        let mut deg_bs = 1u64;
        for _ in 0..s {
            deg_bs = deg_bs.saturating_mul(db as u64);
            if deg_bs > cap {
                return Err(Error::Resource(format!(
                    "degree cap {cap} reached while searching shared iterates at s = {s}"
                )));
            }
        }
        let bs = b.iterate(s as u32)?;
        if let Some(b_hat) = iterate_root(&bs, order as u32)? {
            return Ok(DescendOutcome::Found { s, b_hat });
        }
    }
    Ok(DescendOutcome::Exhausted { s_bound: bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> Poly {
        crate::algebra::parse::parse_poly(src).unwrap()
    }

    #[test]
    fn verify_reports() {
        let t2 = chebyshev(2).unwrap();
        let t3 = chebyshev(3).unwrap();
        let r = verify(&t3, &t3, &t2).unwrap();
        assert!(r.holds && r.primitive);
        let a0 = p("z*(z+1)^2");
        let h = p("z^3 + z");
        let r = verify(&a0, &h, &p("z^2")).unwrap();
        assert!(r.holds && r.primitive);
        let r = verify(&p("z^2"), &p("z^2"), &p("z + 1")).unwrap();
        assert!(!r.holds);
        let r = verify(&t2, &chebyshev(2).unwrap(), &chebyshev(4).unwrap()).unwrap();
        assert!(r.holds && !r.primitive);
    }

    #[test]
    fn reduce_when_already_primitive() {
        let a0 = p("z*(z+1)^2");
        let h = p("z^3 + z");
        let x = p("z^2");
        let red = primitive_reduce(&a0, &h, &x).unwrap();
        assert_eq!(red.b0, h);
        assert_eq!(red.x0, x);
        assert_eq!(red.u, Poly::z());
        assert!(red.chain.steps.is_empty());
    }

    #[test]
    fn reduce_chebyshev_tower() {
        let t2 = chebyshev(2).unwrap();
        let t4 = chebyshev(4).unwrap();
        let red = primitive_reduce(&t2, &t2, &t4).unwrap();
        assert_eq!(red.x0, p("8*z + 1"));
        assert_eq!(red.b0, p("16*z^2 + 4*z"));
        assert_eq!(red.u, p("z^4 - z^2"));
        assert_eq!(red.chain.steps.len(), 2);
        assert_eq!(red.x0.compose(&red.u).unwrap(), t4);
        assert_eq!(
            red.b0.compose(&red.u).unwrap(),
            red.u.compose(&t2).unwrap()
        );
        let y = red.chain.reverse_witness().unwrap();
        assert_eq!(t2.compose(&y).unwrap(), y.compose(&red.b0).unwrap());
    }

    #[test]
    fn classify_power_form() {
        let a0 = p("z*(z+1)^2");
        let h = p("z^3 + z");
        let form = ritt_classify(&a0, &h, &p("z^2")).unwrap();
        assert_eq!(form.kind, PrimitiveKind::PowerType);
        assert_eq!(form.n, 2);
        assert_eq!(form.s, Some(1));
        assert_eq!(form.r, Some(p("z + 1")));
        assert!(form.mu.is_identity());
        assert!(form.nu.is_identity());
    }

    #[test]
    fn classify_power_form_shifted() {
        let a0 = p("z*(z+1)^2");
        let h = p("z^3 + z");
        let sigma = AffineMap::shift(Scalar::one());
        let b2 = conjugate_by(&h, &sigma);
        let x2 = sigma.before(&p("z^2"));
        let form = ritt_classify(&a0, &b2, &x2).unwrap();
        assert_eq!(form.kind, PrimitiveKind::PowerType);
        assert_eq!(form.s, Some(1));
        assert_eq!(form.r, Some(p("z + 1")));
        assert_eq!(form.mu, AffineMap::new(Scalar::one(), Scalar::one()).unwrap());
        // Reassemble B from the form: B = mu^-1 . z^s R(z^n) . mu.
        let inner = p("z").mul(&form.r.clone().unwrap().compose(&p("z^2")).unwrap());
        assert_eq!(conjugate_by(&inner, &form.mu), b2);
    }

    #[test]
    fn classify_chebyshev_signs() {
        let t2 = chebyshev(2).unwrap();
        let t3 = chebyshev(3).unwrap();
        let form = ritt_classify(&t3, &t3.neg(), &t2).unwrap();
        assert_eq!(form.kind, PrimitiveKind::ChebyshevType);
        assert_eq!(form.m, Some(3));
        assert_eq!(form.sign_a, Some(1));
        assert_eq!(form.sign_b, Some(-1));
        // X = nu . T_n . mu.
        let rebuilt = form
            .nu
            .after(&t2)
            .compose(&form.mu.to_poly())
            .unwrap();
        assert_eq!(rebuilt, t2);
    }

    #[test]
    fn down_from_odd_cubic() {
        let h = p("z^3 + z");
        let down = enumerate_down(&h, None).unwrap();
        assert!(!down.truncated);
        assert_eq!(down.pairs.len(), 2);
        let reps: Vec<&Poly> = down.pairs.iter().map(|(a, _)| a).collect();
        assert!(reps.contains(&&canonical_rep(&h).unwrap()));
        assert!(reps.contains(&&canonical_rep(&p("z*(z+1)^2")).unwrap()));
        for (a, x) in &down.pairs {
            assert!(verify(a, &h, x).unwrap().holds);
        }
    }

    #[test]
    fn down_from_power_and_chebyshev() {
        let down = enumerate_down(&p("z^4"), None).unwrap();
        assert_eq!(down.pairs.len(), 1);
        let (a, x) = &down.pairs[0];
        assert_eq!(*a, p("z^4"));
        assert!(verify(a, &p("z^4"), x).unwrap().holds);
        // Even-degree Chebyshev: both strides collapse onto one class.
        let t4 = chebyshev(4).unwrap();
        let down = enumerate_down(&t4, None).unwrap();
        assert_eq!(down.pairs.len(), 1);
        for (a, x) in &down.pairs {
            assert!(verify(a, &t4, x).unwrap().holds);
        }
    }

    #[test]
    fn up_from_regrouped_cubic() {
        let a0 = p("z*(z+1)^2");
        let up = enumerate_up(&a0, None).unwrap();
        assert!(up.unsupported.is_empty());
        let reps: Vec<&Poly> = up.pairs.iter().map(|(b, _)| b).collect();
        assert_eq!(up.pairs.len(), 3);
        assert!(reps.contains(&&p("z^3 + z")));
        assert!(reps.contains(&&p("z^3 - z")));
        assert!(reps.contains(&&canonical_rep(&a0).unwrap()));
        for (b, x) in &up.pairs {
            assert!(verify(&a0, b, x).unwrap().holds);
        }
    }

    #[test]
    fn up_from_special() {
        let up = enumerate_up(&p("z^3"), None).unwrap();
        assert_eq!(up.pairs.len(), 1);
        let (b, x) = &up.pairs[0];
        assert!(verify(&p("z^3"), b, x).unwrap().holds);
        // Odd plus-type Chebyshev gains the sign twin; minus type does not.
        let t3 = chebyshev(3).unwrap();
        let up = enumerate_up(&t3, None).unwrap();
        assert_eq!(up.pairs.len(), 2);
        let reps: Vec<&Poly> = up.pairs.iter().map(|(b, _)| b).collect();
        assert!(reps.contains(&&canonical_rep(&t3.neg()).unwrap()));
        for (b, x) in &up.pairs {
            assert!(verify(&t3, b, x).unwrap().holds);
        }
        let up = enumerate_up(&t3.neg(), None).unwrap();
        assert_eq!(up.pairs.len(), 1);
    }

    #[test]
    fn sha_expressions() {
        let h = p("z^3 + z");
        let h2 = h.iterate(2).unwrap();
        let (mu, k) = sha_express(&h2, &h).unwrap().unwrap();
        assert!(mu.is_identity());
        assert_eq!(k, 2);
        let twisted = h2.neg();
        let (mu, k) = sha_express(&twisted, &h).unwrap().unwrap();
        assert_eq!(mu.to_poly(), p("-z"));
        assert_eq!(k, 2);
        // z + 1 commutes with nothing here: shifted iterate is rejected.
        let shifted = h2.add(&Poly::one());
        assert!(sha_express(&shifted, &h).unwrap().is_none());
        assert!(sha_express(&h, &p("z^2")).is_err());
    }

    #[test]
    fn lift_recovers_generator() {
        let a0 = p("z*(z+1)^2");
        let h = p("z^3 + z");
        let a = a0.iterate(2).unwrap();
        let lifted = lift_iterate(&h, &p("z^2"), 2, &a).unwrap();
        assert_eq!(lifted, a0);
    }

    #[test]
    fn descent_direct_and_twisted() {
        let a0 = p("z*(z+1)^2");
        let h = p("z^3 + z");
        let found = descend_iterate(&a0, 1, &h, &p("z^2"), None).unwrap();
        assert_eq!(
            found,
            DescendOutcome::Found {
                s: 1,
                b_hat: h.clone()
            }
        );
        // Twisted: B = -H^2 admits no square root, but B^2 = H^4 does.
        let b = h.iterate(2).unwrap().neg();
        let out = descend_iterate(&a0, 2, &b, &p("z^2"), None).unwrap();
        match out {
            DescendOutcome::Found { s, b_hat } => {
                assert_eq!(s, 2);
                assert_eq!(b_hat, h.neg());
                assert_eq!(
                    b_hat.iterate(4).unwrap(),
                    b.iterate(2).unwrap()
                );
            }
            other => panic!("expected a shared iterate, got {other:?}"),
        }
        let out = descend_iterate(&a0, 2, &b, &p("z^2"), Some(0)).unwrap();
        assert_eq!(out, DescendOutcome::Exhausted { s_bound: 0 });
    }
}
