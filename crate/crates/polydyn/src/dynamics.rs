//! Dynamics of product endomorphisms (z1, z2) -> (A1(z1), A2(z2)):
//! invariant-curve parametrization checks, orbits of affine graph curves
//! with exact period certificates, the divisibility bound on curve periods,
//! the five-stage shared-iterate construction, and desk-scale generator
//! lists for the family of polynomials sharing an iterate relation with A.

use num::integer::{gcd, lcm};
use num::{BigInt, BigRational, Signed, Zero};
use serde::Serialize;

use crate::algebra::{
    chebyshev, degree_cap, lagrange, resultant, AffineMap, BiPoly, Poly, Scalar,
};
use crate::decompose::{iterate_root, normalized_inner};
use crate::normalform::{special_class, symmetry_group, SpecialKind};
use crate::semiconj::{descend_iterate, enumerate_up, verify, DescendOutcome};
use crate::{Error, Result};

/// A polynomial parametrization t -> (X1(t), X2(t)) of a curve invariant
/// under (A1, A2), with the induced self-map B on the parameter line.
#[derive(Debug, Clone, Serialize)]
pub struct CurveParametrization {
    pub x1: Poly,
    pub x2: Poly,
    pub b: Poly,
}

/// The graph curve {(x, mu(x))} for an affine map mu.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphCurve {
    pub map: AffineMap,
}

/// Exact certificate that a graph curve returns to itself after `period`
/// steps of the product map; every listed identity is a pair of equal
/// polynomials.
#[derive(Debug, Clone, Serialize)]
pub struct PeriodCertificate {
    pub period: u64,
    pub orbit: Vec<GraphCurve>,
    pub verification: Vec<(Poly, Poly)>,
}

/// Outcome of both commutation checks A1 . X1 = X1 . B and
/// A2 . X2 = X2 . B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamCheck {
    pub first: bool,
    pub second: bool,
    pub degrees_match: bool,
}

impl ParamCheck {
    pub fn holds(&self) -> bool {
        self.first && self.second
    }
}

/// Checks that (X1, X2, B) parametrizes a curve invariant under (A1, A2).
pub fn verify_invariant_param(
    a1: &Poly,
    a2: &Poly,
    x1: &Poly,
    x2: &Poly,
    b: &Poly,
) -> Result<ParamCheck> {
    for (p, name) in [(a1, "A1"), (a2, "A2"), (x1, "X1"), (x2, "X2"), (b, "B")] {
        if p.degree().map_or(true, |d| d < 1) {
            return Err(Error::Invalid(format!("{name} must be nonconstant")));
        }
    }
    Ok(ParamCheck {
        first: a1.compose(x1)? == x1.compose(b)?,
        second: a2.compose(x2)? == x2.compose(b)?,
        degrees_match: a1.deg() == a2.deg() && a1.deg() >= 2,
    })
}

/// Image of the graph curve y = mu(x) under (A1, A2): returns nu with
/// A2 . mu = nu . A1 when the image is again an affine graph.
pub fn graph_step(a1: &Poly, a2: &Poly, mu: &AffineMap) -> Result<Option<AffineMap>> {
    for (p, name) in [(a1, "A1"), (a2, "A2")] {
        if p.degree().map_or(true, |d| d < 2) {
            return Err(Error::Invalid(format!("{name} must have degree >= 2")));
        }
    }
    let image = mu.before(a2);
    match crate::algebra::solve_outer(&image, a1)? {
        Some(u) if u.deg() == 1 => Ok(Some(AffineMap::from_poly(&u)?)),
        _ => Ok(None),
    }
}

/// Result of iterating `graph_step` from an initial graph curve.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum OrbitOutcome {
    Periodic(PeriodCertificate),
    PrePeriodic { preperiod: u64, period: u64 },
    ExitFamily { steps: u64 },
    CapExhausted { cap: u64 },
}

/// Iterates the product map on the graph curve y = mu(x) until the orbit
/// closes up, leaves the graph family, or exhausts the step cap. The
/// default cap is four times the period bound when that is defined,
/// otherwise 64.
pub fn graph_orbit(
    a1: &Poly,
    a2: &Poly,
    mu: &AffineMap,
    step_cap: Option<u64>,
) -> Result<OrbitOutcome> {
    let cap = match step_cap {
        Some(c) => c,
        None => match period_bound(a1, a2) {
            Ok(b) => 4 * b,
            Err(Error::Invalid(_)) => 64,
            Err(e) => return Err(e),
        },
    };
    let mut orbit = vec![mu.clone()];
    for _ in 0..cap {
        let cur = orbit.last().expect("orbit is nonempty");
        let next = match graph_step(a1, a2, cur)? {
            Some(nu) => nu,
            None => {
                return Ok(OrbitOutcome::ExitFamily {
                    steps: orbit.len() as u64 - 1,
                })
            }
        };
        if let Some(j) = orbit.iter().position(|m| *m == next) {
            let k = orbit.len();
            if j == 0 {
                let mut verification = Vec::with_capacity(k);
                for i in 0..k {
                    let lhs = orbit[i].before(a2);
                    let rhs = orbit[(i + 1) % k].after(a1);
                    if lhs != rhs {
                        return Err(Error::Internal(
                            "period certificate identity failed to re-verify".into(),
                        ));
                    }
                    verification.push((lhs, rhs));
                }
                return Ok(OrbitOutcome::Periodic(PeriodCertificate {
                    period: k as u64,
                    orbit: orbit.into_iter().map(|map| GraphCurve { map }).collect(),
                    verification,
                }));
            }
            return Ok(OrbitOutcome::PrePeriodic {
                preperiod: j as u64,
                period: (k - j) as u64,
            });
        }
        orbit.push(next);
    }
    Ok(OrbitOutcome::CapExhausted { cap })
}

/// Divisibility bound for periods of invariant curves of (A1, A2):
/// lcm(N(A1), N(A2)), defined for non-special inputs.
pub fn period_bound(a1: &Poly, a2: &Poly) -> Result<u64> {
    for (p, name) in [(a1, "A1"), (a2, "A2")] {
        if p.degree().map_or(true, |d| d < 2) {
            return Err(Error::Invalid(format!("{name} must have degree >= 2")));
        }
        if special_class(p)?.kind != SpecialKind::None {
            return Err(Error::Invalid(format!(
                "{name} is special; the period bound applies to non-special maps"
            )));
        }
    }
    Ok(lcm(
        crate::normalform::n_of(a1)?,
        crate::normalform::n_of(a2)?,
    ))
}

/// Strips the largest common normalized inner factor shared by X1 and X2,
/// so the parametrization becomes generically one-to-one and the resultant
/// is reduced.
fn strip_common_inner(x1: &Poly, x2: &Poly) -> Result<(Poly, Poly)> {
    let mut c1 = x1.clone();
    let mut c2 = x2.clone();
    'outer: loop {
        let g0 = gcd(c1.deg(), c2.deg());
        let mut divs: Vec<usize> = (2..=g0).filter(|k| g0 % k == 0).collect();
        divs.reverse();
        for g in divs {
            let first = normalized_inner(&c1, g)?;
            let second = normalized_inner(&c2, g)?;
            if let (Some((u1, v1)), Some((u2, v2))) = (first, second) {
                if v1 == v2 {
                    c1 = u1;
                    c2 = u2;
                    continue 'outer;
                }
            }
        }
        return Ok((c1, c2));
    }
}

/// Implicit equation of the parametrized curve t -> (X1(t), X2(t)): the
/// resultant in t of (X1(t) - x, X2(t) - y), computed by exact evaluation
/// on a grid and Lagrange interpolation, then normalized to primitive
/// integer content with the leading coefficient of the highest y-power
/// positive (rational case).
pub fn implicitize(x1: &Poly, x2: &Poly) -> Result<BiPoly> {
    for (p, name) in [(x1, "X1"), (x2, "X2")] {
        if p.degree().map_or(true, |d| d < 1) {
            return Err(Error::Invalid(format!("{name} must be nonconstant")));
        }
    }
    let (s1, s2) = strip_common_inner(x1, x2)?;
    let dx = s2.deg();
    let dy = s1.deg();
    // Row j: the univariate polynomial x -> Res_t(X1 - x, X2 - y_j).
    let mut rows = Vec::with_capacity(dy + 1);
    for j in 0..=dy {
        let yj = Scalar::from_int(j as i64);
        let shifted2 = s2.add_scalar(&yj.neg());
        let mut points = Vec::with_capacity(dx + 1);
        for i in 0..=dx {
            let xi = Scalar::from_int(i as i64);
            let shifted1 = s1.add_scalar(&xi.neg());
            points.push((xi, resultant(&shifted1, &shifted2)?));
        }
        rows.push((yj, lagrange(&points)?));
    }
    let mut by_y = Vec::with_capacity(dy + 1);
    for k in 0..=dy {
        let mut xc = Vec::with_capacity(dx + 1);
        for i in 0..=dx {
            let points: Vec<(Scalar, Scalar)> =
                rows.iter().map(|(yj, row)| (yj.clone(), row.coeff(i))).collect();
            xc.push(lagrange(&points)?.coeff(k));
        }
        by_y.push(Poly::from_coeffs(xc));
    }
    Ok(normalize_bivariate(BiPoly::from_y_coeffs(by_y)))
}

/// Rational normalization: clear denominators, divide out integer content,
/// and fix the sign from the top y-coefficient. Non-rational coefficients
/// are left as computed.
fn normalize_bivariate(r: BiPoly) -> BiPoly {
    if r.is_zero() || !r.is_rational() {
        return r;
    }
    let mut num_gcd = BigInt::zero();
    let mut den_lcm = BigInt::from(1);
    for (_, _, c) in r.iter_coeffs() {
        let q = c.as_rational().expect("rational coefficient");
        num_gcd = gcd(num_gcd, q.numer().abs());
        den_lcm = lcm(den_lcm, q.denom().clone());
    }
    if num_gcd.is_zero() {
        return r;
    }
    let mut scale = BigRational::new(den_lcm, num_gcd);
    let top = r
        .y_coeffs()
        .last()
        .expect("nonzero bivariate polynomial")
        .lc()
        .as_rational()
        .expect("rational coefficient");
    if (top * &scale).is_negative() {
        scale = -scale;
    }
    r.scale(&Scalar::from_ratio(scale))
}

/// Result of the five-stage shared-iterate construction.
#[derive(Debug, Clone, Serialize)]
pub struct Fin0Result {
    pub s: u64,
    pub b_hat: Poly,
    pub gamma1: AffineMap,
    pub gamma2: AffineMap,
    pub n: u64,
    /// Every identity verified along the way, as pairs of equal polynomials.
    pub identities: Vec<(Poly, Poly)>,
}

/// Either a completed construction or a reported search exhaustion.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum Fin0Outcome {
    Done(Fin0Result),
    Exhausted { s_bound: u64 },
}

fn checked_identity(lhs: Poly, rhs: Poly, stage: &str, out: &mut Vec<(Poly, Poly)>) -> Result<()> {
    if lhs != rhs {
        return Err(Error::Internal(format!("{stage}: certificate identity violated")));
    }
    out.push((lhs, rhs));
    Ok(())
}

/// Five-stage pipeline: from A_i^k . X_i = X_i . B produce a shared root
/// B_hat of an iterate of B, lifts A-hat_i along X_i, symmetry twists
/// gamma_i with A_i = gamma_i . A-hat_i, the bound N, and the final
/// identity A_i^N . X_i = X_i . B_hat^N, all exactly certified.
pub fn fin0_construct(
    a1: &Poly,
    a2: &Poly,
    b: &Poly,
    x1: &Poly,
    x2: &Poly,
    k: u32,
    s_bound: Option<u64>,
) -> Result<Fin0Outcome> {
    if k == 0 {
        return Err(Error::Invalid("iterate order must be positive".into()));
    }
    for (p, name) in [(a1, "A1"), (a2, "A2")] {
        if p.degree().map_or(true, |d| d < 2) {
            return Err(Error::Invalid(format!("{name} must have degree >= 2")));
        }
        if special_class(p)?.kind != SpecialKind::None {
            return Err(Error::Invalid(format!("{name} must be non-special")));
        }
    }
    for (a, x, name) in [(a1, x1, "first"), (a2, x2, "second")] {
        if !verify(&a.iterate(k)?, b, x)?.holds {
            return Err(Error::Invalid(format!(
                "{name} input identity A^k . X = X . B does not hold"
            )));
        }
    }
    let mut identities = Vec::new();
    // Stage 1: shared iterate root of B.
    let (s, b_hat) = match descend_iterate(a1, k, b, x1, s_bound)? {
        DescendOutcome::Found { s, b_hat } => (s, b_hat),
        DescendOutcome::Exhausted { s_bound } => return Ok(Fin0Outcome::Exhausted { s_bound }),
    };
    checked_identity(
        b.iterate(s as u32)?,
        b_hat.iterate(s as u32 * k)?,
        "stage 1",
        &mut identities,
    )?;
    // Stage 2: lift B_hat through each parametrization.
    let mut lifts = Vec::new();
    for (x, name) in [(x1, "stage 2 (first)"), (x2, "stage 2 (second)")] {
        let lifted = crate::algebra::solve_outer(&x.compose(&b_hat)?, x)?
            .ok_or_else(|| Error::Internal(format!("{name}: B_hat does not lift along X")))?;
        checked_identity(lifted.compose(x)?, x.compose(&b_hat)?, name, &mut identities)?;
        lifts.push(lifted);
    }
    // Stage 3: symmetry twists relating A_i to the lifts.
    let mut gammas = Vec::new();
    for (a, lifted, name) in [
        (a1, &lifts[0], "stage 3 (first)"),
        (a2, &lifts[1], "stage 3 (second)"),
    ] {
        if a.deg() != lifted.deg() {
            return Err(Error::Internal(format!("{name}: lift degree mismatch")));
        }
        let scale = a.lc().div(lifted.lc())?;
        let diff = a.sub(&lifted.scale(&scale));
        if diff.degree().map_or(false, |d| d >= 1) {
            return Err(Error::Internal(format!(
                "{name}: A is not an affine twist of the lift"
            )));
        }
        let gamma = AffineMap::new(scale, diff.coeff(0))?;
        if symmetry_group(a)?.member_order(&gamma).is_none() {
            return Err(Error::Internal(format!(
                "{name}: twist is not a Julia-set symmetry"
            )));
        }
        checked_identity(a.clone(), gamma.after(lifted), name, &mut identities)?;
        gammas.push(gamma);
    }
    // Stage 4: the period bound.
    let n = period_bound(a1, a2)?;
    // Stage 5: the final identity at the bound, guarded by the degree cap.
    let cap = degree_cap() as u64;
    for (a, x, name) in [(a1, x1, "stage 5 (first)"), (a2, x2, "stage 5 (second)")] {
        let mut deg = x.deg() as u64;
        for _ in 0..n {
            deg = deg.saturating_mul(a.deg() as u64);
            if deg > cap {
                return Err(Error::Resource(format!(
                    "stage 5 needs degree {deg} beyond cap {cap}"
                )));
            }
        }
        checked_identity(
            a.iterate(n as u32)?.compose(x)?,
            x.compose(&b_hat.iterate(n as u32)?)?,
            name,
            &mut identities,
        )?;
    }
    Ok(Fin0Outcome::Done(Fin0Result {
        s,
        b_hat,
        gamma1: gammas[0].clone(),
        gamma2: gammas[1].clone(),
        n,
        identities,
    }))
}

/// One generator emitted by [`inter_generators`]: `related` sits under
/// gamma . A via `witness`, and `related = twist . base^l` peels it to the
/// minimal base.
#[derive(Debug, Clone, Serialize)]
pub struct Generator {
    pub base: Poly,
    pub l: u64,
    pub twist: Option<AffineMap>,
    pub gamma: AffineMap,
    pub witness: Poly,
    pub related: Poly,
}

/// Generator list with truncation reporting.
#[derive(Debug, Clone, Serialize)]
pub struct InterGenerators {
    pub generators: Vec<Generator>,
    pub truncated: bool,
    pub notes: Vec<String>,
}

/// Smallest d0 >= 2 with d = d0^j, together with j.
fn minimal_power_base(d: usize) -> (usize, u32) {
    for d0 in 2..=d {
        let mut acc = d0;
        let mut j = 1u32;
        while acc < d {
            acc *= d0;
            j += 1;
        }
        if acc == d {
            return (d0, j);
        }
    }
    (d, 1)
}

/// Peels `bp` as twist . base^l with l maximal (l <= iter_bound), allowing
/// twists from the symmetry group of bp.
fn peel_iterate(bp: &Poly, iter_bound: u64) -> Result<(Poly, u64, Option<AffineMap>)> {
    let d = bp.deg();
    let mut l = iter_bound.min(u32::MAX as u64) as u32;
    while l >= 2 {
        let root_deg = crate::algebra::exact_nth_root_u64(d as u64, l);
        if root_deg.map_or(false, |r| r >= 2) {
            if let Some(g) = iterate_root(bp, l)? {
                return Ok((g, l as u64, None));
            }
            for mu in symmetry_group(bp)?.elements()? {
                if mu.is_identity() {
                    continue;
                }
                let untwisted = mu.inverse().after(bp);
                if let Some(g) = iterate_root(&untwisted, l)? {
                    return Ok((g, l as u64, Some(mu)));
                }
            }
        }
        l -= 1;
    }
    Ok((bp.clone(), 1, None))
}

/// Desk-scale generator list for the family of polynomials sharing an
/// iterate relation with A: walks the symmetry twists gamma . A, ascends
/// one degree of freedom with [`enumerate_up`], peels iterates, and keeps
/// a minimal set in which no generator is conjugate to an iterate of
/// another. Special A short-circuits to the minimal root of its model.
pub fn inter_generators(
    a: &Poly,
    iter_bound: Option<u64>,
    step_bound: Option<u64>,
) -> Result<InterGenerators> {
    let d = match a.degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::Invalid("A must have degree >= 2".into())),
    };
    let iter_bound = iter_bound.unwrap_or(6);
    let sc = special_class(a)?;
    if sc.kind != SpecialKind::None {
        let (d0, j) = minimal_power_base(d);
        let (base, related, twist) = match sc.kind {
            SpecialKind::Power => (
                Poly::monomial(d0, Scalar::one()),
                Poly::monomial(d, Scalar::one()),
                None,
            ),
            SpecialKind::ChebyshevPlus => (chebyshev(d0 as u64)?, chebyshev(d as u64)?, None),
            SpecialKind::ChebyshevMinus => {
                let related = chebyshev(d as u64)?.neg();
                if j > 1 {
                    let flip = AffineMap::scaling(Scalar::from_int(-1))?;
                    (chebyshev(d0 as u64)?, related, Some(flip))
                } else {
                    (related.clone(), related, None)
                }
            }
            SpecialKind::None => unreachable!(),
        };
        let generator = match &sc.witness {
            Some((w1, _)) => Generator {
                base,
                l: j as u64,
                twist,
                gamma: AffineMap::identity(),
                witness: w1.to_poly(),
                related,
            },
            None => Generator {
                base: a.clone(),
                l: 1,
                twist: None,
                gamma: AffineMap::identity(),
                witness: Poly::z(),
                related: a.clone(),
            },
        };
        return Ok(InterGenerators {
            generators: vec![generator],
            truncated: false,
            notes: Vec::new(),
        });
    }
    let group = symmetry_group(a)?;
    let mut truncated = false;
    let mut notes = Vec::new();
    let mut candidates: Vec<Generator> = Vec::new();
    for gamma in group.elements()? {
        let ga = gamma.after(a);
        let up = enumerate_up(&ga, step_bound)?;
        truncated = truncated || up.truncated;
        for branch in &up.unsupported {
            notes.push(format!(
                "unexplored ascent branch over a symmetry twist: {}",
                branch.reason
            ));
        }
        for (related, witness) in up.pairs {
            let (base, l, twist) = peel_iterate(&related, iter_bound)?;
            candidates.push(Generator {
                base,
                l,
                twist,
                gamma: gamma.clone(),
                witness,
                related,
            });
        }
    }
    candidates.sort_by(|g1, g2| (g1.base.deg(), &g1.base).cmp(&(g2.base.deg(), &g2.base)));
    let mut kept: Vec<Generator> = Vec::new();
    'cands: for cand in candidates {
        for existing in &kept {
            let de = existing.base.deg();
            let dc = cand.base.deg();
            if dc % de != 0 {
                continue;
            }
            let mut acc = de;
            let mut l = 1u32;
            while acc < dc {
                acc *= de;
                l += 1;
            }
            if acc != dc {
                continue;
            }
            match crate::normalform::conjugacy_test(&cand.base, &existing.base.iterate(l)?) {
                Ok(Some(_)) => continue 'cands,
                Ok(None) => {}
                Err(Error::Unsupported(_)) => {}
                Err(e) => return Err(e),
            }
        }
        kept.push(cand);
    }
    Ok(InterGenerators {
        generators: kept,
        truncated,
        notes,
    })
}
