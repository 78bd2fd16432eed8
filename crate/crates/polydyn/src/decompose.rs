//! Functional decomposition: inner/outer factors, iterate roots, the common
//! refactoring of a composition identity A . C = D . B, elementary
//! transformations U . V -> V . U, and equivalence classes under them.

use std::collections::HashSet;

use serde::Serialize;

use crate::algebra::{divisors, eth_roots, exact_nth_root_u64, solve_outer};
use crate::algebra::{AffineMap, Poly, Scalar};
use crate::normalform::{center, conjugacy_test, conjugate_by};
use crate::{Error, Result};

/// F = outer . inner with the inner factor normalized: monic and vanishing
/// at the origin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub outer: Poly,
    pub inner: Poly,
}

/// The unique normalized inner factor of F at degree e together with its
/// outer cofactor, if F decomposes there. Accepts the full range
/// 1 <= e <= deg F; the ends are the trivial splits.
///
/// The top e coefficients of a monic inner factor are forced by the top
/// segment of F through a triangular rational solve, so no root extraction
/// is ever needed and the factor is unique.
pub fn normalized_inner(f: &Poly, e: usize) -> Result<Option<(Poly, Poly)>> {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return Err(Error::Invalid("decomposition needs degree >= 1".into())),
    };
    if e == 0 || n % e != 0 {
        return Err(Error::Invalid("inner degree must divide the degree".into()));
    }
    if e == 1 {
        return Ok(Some((f.clone(), Poly::z())));
    }
    if e == n {
        // F = (lc z + F(0)) . V with V = (F - F(0)) / lc.
        let v = f
            .sub(&Poly::constant(f.coeff(0)))
            .scale(&f.lc().recip()?);
        let u = Poly::from_coeffs(vec![f.coeff(0), f.lc().clone()]);
        return Ok(Some((u, v)));
    }
    let q = n / e;
    let lc_inv = f.lc().recip()?;
    let qs = Scalar::from_int(q as i64);
    let mut v_coeffs = vec![Scalar::zero(); e + 1];
    v_coeffs[e] = Scalar::one();
    for j in 1..e {
        let v = Poly::from_coeffs(v_coeffs.clone());
        let w = v.pow(q as u32)?;
        let target = f.coeff(n - j).mul(&lc_inv);
        v_coeffs[e - j] = target.sub(&w.coeff(n - j)).div(&qs)?;
    }
    let v = Poly::from_coeffs(v_coeffs);
    match solve_outer(f, &v)? {
        Some(u) => Ok(Some((u, v))),
        None => Ok(None),
    }
}

/// All decompositions of F with a normalized inner factor of degree e,
/// 1 < e < deg F. Normalization makes the inner factor unique, so the
/// result has at most one element.
pub fn all_decompositions(f: &Poly, e: usize) -> Result<Vec<Decomposition>> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return Err(Error::Invalid("decomposition needs degree >= 2".into())),
    };
    if e <= 1 || e >= n || n % e != 0 {
        return Err(Error::Invalid(
            "inner degree must be a proper nontrivial divisor of the degree".into(),
        ));
    }
    Ok(normalized_inner(f, e)?
        .map(|(outer, inner)| Decomposition { outer, inner })
        .into_iter()
        .collect())
}

/// A polynomial A with A iterated l times equal to F, if one exists.
///
/// Any such A is an affine adjustment b V + c of the normalized inner factor
/// V of F at degree (deg F)^(1/l). The scaling b runs over the root branches
/// of the leading coefficient; the shift c is then determined linearly. The
/// first branch that verifies is returned.
pub fn iterate_root(f: &Poly, l: u32) -> Result<Option<Poly>> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return Err(Error::Invalid("iterate root needs degree >= 2".into())),
    };
    if l < 2 {
        return Err(Error::Invalid("iterate root needs l >= 2".into()));
    }
    let Some(d0) = exact_nth_root_u64(n as u64, l) else {
        return Ok(None);
    };
    let d0 = d0 as usize;
    debug_assert!(d0 >= 2);
    let Some((u, v)) = normalized_inner(f, d0)? else {
        return Ok(None);
    };
    let m = u.deg(); // d0^(l-1)
    let e_exp = ((n - 1) / (d0 - 1)) as u32; // 1 + d0 + ... + d0^(l-1)
    let branches = eth_roots(f.lc(), e_exp)?;
    let target = u.coeff(m - 1);
    for b in branches {
        // H(c) = (bV + c)^(l-1) . (bz + c); its coefficient at m-1 is affine
        // in c, and matching it against the outer factor pins c down.
        let at = |c: &Scalar| -> Result<Scalar> {
            let cand = v.scale(&b).add(&Poly::constant(c.clone()));
            let lin = Poly::from_coeffs(vec![c.clone(), b.clone()]);
            let h = cand.iterate(l - 1)?.compose(&lin)?;
            Ok(h.coeff(m - 1))
        };
        let f0 = at(&Scalar::zero())?;
        let f1 = at(&Scalar::one())?;
        let slope = f1.sub(&f0);
        if slope.is_zero() {
            return Err(Error::Internal("iterate-root shift equation degenerated".into()));
        }
        let c = target.sub(&f0).div(&slope)?;
        let cand = v.scale(&b).add(&Poly::constant(c));
        if cand.iterate(l)? == *f {
            return Ok(Some(cand));
        }
    }
    Ok(None)
}

/// The six factors of the common refactoring of A . C = D . B:
/// A = U . At, D = U . Dt, C = Ct . V, B = Bt . V, and At . Ct = Dt . Bt,
/// with deg U = gcd(deg A, deg D) and deg V = gcd(deg C, deg B).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EngstromFactorization {
    pub u: Poly,
    pub v: Poly,
    pub a_tilde: Poly,
    pub c_tilde: Poly,
    pub d_tilde: Poly,
    pub b_tilde: Poly,
}

/// Refactors an identity A . C = D . B through common outer and inner
/// factors. When deg C = deg B the identity collapses to a degree-one
/// bridge mu with C = mu . B and A = D . mu^{-1}.
pub fn engstrom_factor(a: &Poly, c: &Poly, d: &Poly, b: &Poly) -> Result<EngstromFactorization> {
    for p in [a, c, d, b] {
        if p.degree().is_none() || p.deg() < 1 {
            return Err(Error::Invalid("refactoring needs four polynomials of degree >= 1".into()));
        }
    }
    if a.compose(c)? != d.compose(b)? {
        return Err(Error::Invalid("the composition identity A . C = D . B fails".into()));
    }
    let (da, dc, dd, db) = (a.deg(), c.deg(), d.deg(), b.deg());
    if dc == db {
        // C = mu . B forced; the refactoring degenerates through mu.
        let scale = c.lc().div(b.lc())?;
        let shift = c.sub(&b.scale(&scale));
        let Some(shift) = shift.degree().map_or(Some(Scalar::zero()), |deg| {
            if deg == 0 {
                Some(shift.coeff(0))
            } else {
                None
            }
        }) else {
            return Err(Error::Internal(
                "equal inner degrees without a degree-one bridge".into(),
            ));
        };
        let mu = AffineMap::new(scale, shift)?;
        let mu_inv = mu.inverse();
        debug_assert_eq!(mu.after(b), *c);
        return Ok(EngstromFactorization {
            u: d.clone(),
            v: b.clone(),
            a_tilde: mu_inv.to_poly(),
            c_tilde: mu.to_poly(),
            d_tilde: Poly::z(),
            b_tilde: Poly::z(),
        });
    }
    let g2 = num::Integer::gcd(&dc, &db);
    let (c_tilde, v) = normalized_inner(c, g2)?.ok_or_else(|| {
        Error::Internal("the common inner factor of C and B is missing".into())
    })?;
    let b_tilde = solve_outer(b, &v)?.ok_or_else(|| {
        Error::Internal("the common inner factor does not divide B".into())
    })?;
    let g1 = num::Integer::gcd(&da, &dd);
    let (u, a_tilde) = normalized_inner(a, da / g1)?.ok_or_else(|| {
        Error::Internal("the common outer factor of A and D is missing".into())
    })?;
    // The middle factor solves At . Ct = Dt . Bt outright; D = U . Dt then
    // follows by right cancellation against Bt . V.
    let middle = a_tilde.compose(&c_tilde)?;
    let d_tilde = solve_outer(&middle, &b_tilde)?.ok_or_else(|| {
        Error::Internal("the refactored middle identity has no solution".into())
    })?;
    let fact = EngstromFactorization { u, v, a_tilde, c_tilde, d_tilde, b_tilde };
    if fact.u.compose(&fact.d_tilde)? != *d {
        return Err(Error::Internal("the common outer factor does not divide D".into()));
    }
    debug_assert_eq!(fact.u.deg(), g1);
    debug_assert_eq!(fact.v.deg(), g2);
    Ok(fact)
}

/// All elementary partners of F: for each decomposition F = U . V the
/// partner V . U, with the witnessing decomposition of F.
pub fn elementary_neighbors(f: &Poly) -> Result<Vec<(Poly, Decomposition)>> {
    let n = match f.degree() {
        Some(n) if n >= 2 => n,
        _ => return Err(Error::Invalid("elementary transformation needs degree >= 2".into())),
    };
    let mut out = Vec::new();
    for e in divisors(n as u64) {
        let e = e as usize;
        if e <= 1 || e >= n {
            continue;
        }
        for dec in all_decompositions(f, e)? {
            let partner = dec.inner.compose(&dec.outer)?;
            out.push((partner, dec));
        }
    }
    Ok(out)
}

/// A chain of elementary transformations from a start polynomial B to an end
/// polynomial A. Step i records the decomposition of the *new* polynomial:
/// new = U_i . V_i while old = V_i . U_i. The witness X = U_s . ... . U_1
/// satisfies A . X = X . B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivalenceChain {
    pub steps: Vec<(Poly, Poly)>,
    /// (start, end) = (B, A).
    pub endpoints: (Poly, Poly),
    /// X = U_s . ... . U_1 with end . X = X . start.
    pub witness: Poly,
}

impl EquivalenceChain {
    /// The reverse witness Y = V_1 . ... . V_s with start . Y = Y . end.
    pub fn reverse_witness(&self) -> Result<Poly> {
        let mut y = Poly::z();
        for (_, v) in &self.steps {
            y = y.compose(v)?;
        }
        Ok(y)
    }
}

/// One conjugacy class discovered while closing F under elementary
/// transformations.
#[derive(Debug, Clone, Serialize)]
pub struct ClassMember {
    /// Canonical representative of the conjugacy class.
    pub representative: Poly,
    /// The member as first reached by the chain.
    pub found: Poly,
    pub chain: EquivalenceChain,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceClass {
    pub members: Vec<ClassMember>,
    pub truncated: bool,
}

/// Centered canonical form of the conjugacy class of P: among the scalings
/// that make the centered form monic (or, when that root is unsupported,
/// the root-of-unity scalings of matching order), the coefficientwise
/// least conjugate.
pub fn canonical_rep(p: &Poly) -> Result<Poly> {
    canonical_rep_with_map(p).map(|(rep, _)| rep)
}

/// Like [`canonical_rep`], also returning a map sigma with
/// rep = sigma^-1 . p . sigma.
pub fn canonical_rep_with_map(p: &Poly) -> Result<(Poly, AffineMap)> {
    let d = match p.degree() {
        Some(d) if d >= 2 => d,
        _ => return Err(Error::Invalid("canonical form needs degree >= 2".into())),
    };
    let (pc, tau) = center(p)?;
    let scalings = match eth_roots(&pc.lc().recip()?, (d - 1) as u32) {
        Ok(roots) => roots,
        Err(Error::Unsupported(_)) => {
            let ord = (d - 1) as u64;
            (0..ord)
                .map(|j| Scalar::root_of_unity(ord, j))
                .collect::<Result<Vec<_>>>()?
        }
        Err(e) => return Err(e),
    };
    let mut best: Option<(Poly, AffineMap)> = None;
    for s in scalings {
        let scale = AffineMap::scaling(s)?;
        let cand = conjugate_by(&pc, &scale);
        if best.as_ref().map_or(true, |(b, _)| cand < *b) {
            best = Some((cand, tau.compose(&scale)));
        }
    }
    Ok(best.expect("scaling orbit is nonempty"))
}

/// Closes F under elementary transformations and conjugacy. Conjugate
/// polynomials have conjugate partner sets, so the search expands one
/// member per conjugacy class; without this the walk drifts through
/// endless conjugates with ever-growing coefficients. `step_bound`
/// (default 64) caps the number of elementary transformations applied,
/// and hitting the cap sets `truncated`.
pub fn equivalence_class(f: &Poly, step_bound: Option<u64>) -> Result<EquivalenceClass> {
    if f.degree().map_or(true, |d| d < 2) {
        return Err(Error::Invalid("equivalence class needs degree >= 2".into()));
    }
    let bound = step_bound.unwrap_or(64);
    let mut truncated = false;
    let mut used = 0u64;
    let mut reps_seen: HashSet<Poly> = HashSet::new();
    let mut exact_seen: HashSet<Poly> = HashSet::new();
    let seed_chain = EquivalenceChain {
        steps: Vec::new(),
        endpoints: (f.clone(), f.clone()),
        witness: Poly::z(),
    };
    reps_seen.insert(canonical_rep(f)?);
    exact_seen.insert(f.clone());
    let mut members = vec![ClassMember {
        representative: canonical_rep(f)?,
        found: f.clone(),
        chain: seed_chain,
    }];
    let mut qi = 0;
    'bfs: while qi < members.len() {
        let node = members[qi].found.clone();
        let steps = members[qi].chain.steps.clone();
        qi += 1;
        for (partner, dec) in elementary_neighbors(&node)? {
            if used == bound {
                truncated = true;
                break 'bfs;
            }
            used += 1;
            if exact_seen.contains(&partner) {
                continue;
            }
            exact_seen.insert(partner.clone());
            let representative = canonical_rep(&partner)?;
            if reps_seen.contains(&representative) {
                continue;
            }
            let mut known = false;
            for m in &members {
                match conjugacy_test(&m.found, &partner) {
                    Ok(Some(_)) => {
                        known = true;
                        break;
                    }
                    Ok(None) => {}
                    Err(Error::Unsupported(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            reps_seen.insert(representative.clone());
            if known {
                continue;
            }
            // The new node decomposes as inner . outer of the old node.
            let mut chain_steps = steps.clone();
            chain_steps.push((dec.inner.clone(), dec.outer.clone()));
            let mut witness = Poly::z();
            for (u, _) in &chain_steps {
                witness = u.compose(&witness)?;
            }
            let chain = EquivalenceChain {
                steps: chain_steps,
                endpoints: (f.clone(), partner.clone()),
                witness,
            };
            debug_assert_eq!(
                partner.compose(&chain.witness).unwrap(),
                chain.witness.compose(f).unwrap()
            );
            members.push(ClassMember { representative, found: partner, chain });
        }
    }
    Ok(EquivalenceClass { members, truncated })
}
