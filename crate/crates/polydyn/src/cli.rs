//! JSON command-line surface. A request names a command and its
//! parameters; the answer is a [`Certificate`] whose identities can be
//! re-verified independently, or an error report. Exit codes: 0 success,
//! 2 definite mathematical negative, 64 malformed input, 70 internal
//! inconsistency, 75 resource or search-bound exhaustion.

use std::io::{Read, Write};

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{
    average_by, chebyshev, degree_cap, set_degree_cap, solve_inner, solve_outer, x_adic,
    AffineMap, Poly, Scalar,
};
use crate::cert::{recheck, Certificate, Expr, Identity};
use crate::semiconj::PrimitiveKind;
use crate::{decompose, dynamics, normalform, semiconj};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_PARSE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;
pub const EXIT_RESOURCE: i32 = 75;

/// Optional bounds accepted with every request; command-line flags
/// override per-request values.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Limits {
    pub degree_cap: Option<u64>,
    pub step_bound: Option<u64>,
    pub s_bound: Option<u64>,
    pub iter_bound: Option<u64>,
}

/// One operation request: command name, operation parameters, bounds.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Request {
    pub command: String,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub limits: Option<Limits>,
}

fn classify(e: &Error) -> (i32, &'static str) {
    match e {
        Error::Parse(_) => (EXIT_PARSE, "parse"),
        Error::Invalid(_) => (EXIT_PARSE, "invalid"),
        Error::Unsupported(_) => (EXIT_RESOURCE, "unsupported"),
        Error::Resource(_) => (EXIT_RESOURCE, "resource"),
        Error::Internal(_) => (EXIT_INTERNAL, "internal"),
    }
}

fn error_report(e: &Error) -> (i32, Value) {
    let (code, class) = classify(e);
    (code, json!({"error": {"class": class, "message": e.to_string()}}))
}

fn negative(message: &str) -> (i32, Value) {
    (
        EXIT_NEGATIVE,
        json!({"error": {"class": "negative", "message": message}}),
    )
}

fn take_params<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| Error::Parse(format!("bad params: {e}")))
}

fn ep(p: &Poly) -> Expr {
    Expr::poly(p)
}

fn comp2(a: Expr, b: Expr) -> Expr {
    Expr::compose(vec![a, b])
}

fn cert_value(claim: &str, identities: Vec<Identity>, data: Value) -> Result<Value> {
    let cert = Certificate::new(claim, identities, data);
    serde_json::to_value(&cert).map_err(|e| Error::Internal(format!("serialization: {e}")))
}

fn ok_cert(claim: &str, identities: Vec<Identity>, data: Value) -> Result<(i32, Value)> {
    Ok((EXIT_OK, cert_value(claim, identities, data)?))
}

fn bounded_cert(
    truncated: bool,
    claim: &str,
    identities: Vec<Identity>,
    data: Value,
) -> Result<(i32, Value)> {
    let code = if truncated { EXIT_RESOURCE } else { EXIT_OK };
    Ok((code, cert_value(claim, identities, data)?))
}

fn to_json<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(format!("serialization: {e}")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ChebParams {
    m: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyParams {
    poly: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComposeParams {
    #[serde(rename = "P")]
    p: Poly,
    #[serde(rename = "Q")]
    q: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IterateParams {
    #[serde(rename = "P")]
    p: Poly,
    k: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DigitParams {
    #[serde(rename = "Q")]
    q: Poly,
    #[serde(rename = "X")]
    x: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct OuterParams {
    #[serde(rename = "G")]
    g: Poly,
    inner: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InnerParams {
    #[serde(rename = "G")]
    g: Poly,
    outer: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairParams {
    #[serde(rename = "A")]
    a: Poly,
    #[serde(rename = "B")]
    b: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TwistParams {
    #[serde(rename = "A")]
    a: Poly,
    mu: AffineMap,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitParams {
    #[serde(rename = "F")]
    f: Poly,
    e: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RootParams {
    #[serde(rename = "F")]
    f: Poly,
    l: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FParams {
    #[serde(rename = "F")]
    f: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EngstromParams {
    #[serde(rename = "A")]
    a: Poly,
    #[serde(rename = "C")]
    c: Poly,
    #[serde(rename = "D")]
    d: Poly,
    #[serde(rename = "B")]
    b: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TripleParams {
    #[serde(rename = "A")]
    a: Poly,
    #[serde(rename = "B")]
    b: Poly,
    #[serde(rename = "X")]
    x: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AParams {
    #[serde(rename = "A")]
    a: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BParams {
    #[serde(rename = "B")]
    b: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ShaParams {
    #[serde(rename = "P")]
    p: Poly,
    #[serde(rename = "Q")]
    q: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LiftParams {
    #[serde(rename = "B_hat")]
    b_hat: Poly,
    #[serde(rename = "X")]
    x: Poly,
    l: u32,
    #[serde(rename = "A")]
    a: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DescendParams {
    #[serde(rename = "A_hat")]
    a_hat: Poly,
    l: u32,
    #[serde(rename = "B")]
    b: Poly,
    #[serde(rename = "X")]
    x: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurvePairParams {
    #[serde(rename = "A1")]
    a1: Poly,
    #[serde(rename = "A2")]
    a2: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveMuParams {
    #[serde(rename = "A1")]
    a1: Poly,
    #[serde(rename = "A2")]
    a2: Poly,
    mu: AffineMap,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveVerifyParams {
    #[serde(rename = "A1")]
    a1: Poly,
    #[serde(rename = "A2")]
    a2: Poly,
    #[serde(rename = "X1")]
    x1: Poly,
    #[serde(rename = "X2")]
    x2: Poly,
    #[serde(rename = "B")]
    b: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ImplicitParams {
    #[serde(rename = "X1")]
    x1: Poly,
    #[serde(rename = "X2")]
    x2: Poly,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FinParams {
    #[serde(rename = "A1")]
    a1: Poly,
    #[serde(rename = "A2")]
    a2: Poly,
    #[serde(rename = "B")]
    b: Poly,
    #[serde(rename = "X1")]
    x1: Poly,
    #[serde(rename = "X2")]
    x2: Poly,
    k: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RecheckParams {
    certificate: Certificate,
}

fn dispatch(command: &str, params: Value, lim: &Limits) -> Result<(i32, Value)> {
    match command {
        "cheb" => {
            let p: ChebParams = take_params(params)?;
            let t = chebyshev(p.m)?;
            ok_cert("cheb", vec![], json!({"m": p.m, "poly": t}))
        }
        "compose" => {
            let p: ComposeParams = take_params(params)?;
            let r = p.p.compose(&p.q)?;
            let id = Identity::new(ep(&r), comp2(ep(&p.p), ep(&p.q)));
            ok_cert("compose", vec![id], json!({"poly": r}))
        }
        "iterate" => {
            let p: IterateParams = take_params(params)?;
            let r = p.p.iterate(p.k)?;
            let id = Identity::new(ep(&r), Expr::iterate(ep(&p.p), p.k));
            ok_cert("iterate", vec![id], json!({"poly": r}))
        }
        "xadic" => {
            let p: DigitParams = take_params(params)?;
            let digits = x_adic(&p.q, &p.x)?;
            ok_cert("xadic", vec![], json!({"digits": digits}))
        }
        "average" => {
            let p: DigitParams = take_params(params)?;
            let avg = average_by(&p.q, &p.x)?;
            ok_cert("average", vec![], json!({"poly": avg}))
        }
        "solve.outer" => {
            let p: OuterParams = take_params(params)?;
            match solve_outer(&p.g, &p.inner)? {
                Some(u) => {
                    let id = Identity::new(ep(&p.g), comp2(ep(&u), ep(&p.inner)));
                    ok_cert("solve.outer", vec![id], json!({"outer": u}))
                }
                None => Ok(negative("no outer factor over the given inner")),
            }
        }
        "solve.inner" => {
            let p: InnerParams = take_params(params)?;
            let inners = solve_inner(&p.g, &p.outer)?;
            let ids = inners
                .iter()
                .map(|c| Identity::new(ep(&p.g), comp2(ep(&p.outer), ep(c))))
                .collect();
            ok_cert("solve.inner", ids, json!({"inners": inners}))
        }
        "center" => {
            let p: PolyParams = take_params(params)?;
            let (pc, tau) = normalform::center(&p.poly)?;
            let id = Identity::new(
                comp2(ep(&p.poly), ep(&tau.to_poly())),
                comp2(ep(&tau.to_poly()), ep(&pc)),
            );
            ok_cert("center", vec![id], json!({"centered": pc, "map": tau}))
        }
        "conjugate" => {
            let p: PairParams = take_params(params)?;
            match normalform::conjugacy_test(&p.a, &p.b)? {
                Some(w) => {
                    let sp = w.map.to_poly();
                    let id = Identity::new(comp2(ep(&p.a), ep(&sp)), comp2(ep(&sp), ep(&p.b)));
                    ok_cert("conjugate", vec![id], json!({"map": w.map}))
                }
                None => Ok(negative("the polynomials are not conjugate")),
            }
        }
        "symmetry" => {
            let p: PolyParams = take_params(params)?;
            let group = normalform::symmetry_group(&p.poly)?;
            let partner = dynamics::graph_step(&p.poly, &p.poly, &group.generator)?
                .ok_or_else(|| Error::Internal("symmetry generator fails to commute".into()))?;
            let id = Identity::new(
                ep(&group.generator.before(&p.poly)),
                ep(&partner.after(&p.poly)),
            );
            ok_cert("symmetry", vec![id], to_json(&group)?)
        }
        "nof" => {
            let p: PolyParams = take_params(params)?;
            ok_cert("nof", vec![], json!({"n": normalform::n_of(&p.poly)?}))
        }
        "special" => {
            let p: PolyParams = take_params(params)?;
            let sc = normalform::special_class(&p.poly)?;
            let mut ids = vec![];
            if let Some((w1, _)) = &sc.witness {
                let d = p.poly.deg();
                let model = match sc.kind {
                    normalform::SpecialKind::Power => Poly::monomial(d, Scalar::one()),
                    normalform::SpecialKind::ChebyshevPlus => chebyshev(d as u64)?,
                    normalform::SpecialKind::ChebyshevMinus => chebyshev(d as u64)?.neg(),
                    normalform::SpecialKind::None => {
                        return Err(Error::Internal("witness without a model".into()))
                    }
                };
                ids.push(Identity::new(
                    comp2(ep(&p.poly), ep(&w1.to_poly())),
                    comp2(ep(&w1.to_poly()), ep(&model)),
                ));
            }
            ok_cert("special", ids, to_json(&sc)?)
        }
        "twist.order" => {
            let p: TwistParams = take_params(params)?;
            match normalform::twist_order(&p.a, &p.mu)? {
                Some(n) => {
                    let id = Identity::new(
                        Expr::iterate(ep(&p.mu.after(&p.a)), n as u32),
                        Expr::iterate(ep(&p.a), n as u32),
                    );
                    ok_cert("twist.order", vec![id], json!({"order": n}))
                }
                None => Ok(negative("no iterate of the twisted map rejoins the iterates")),
            }
        }
        "decompose.inner" => {
            let p: SplitParams = take_params(params)?;
            match decompose::normalized_inner(&p.f, p.e)? {
                Some((u, v)) => {
                    let id = Identity::new(ep(&p.f), comp2(ep(&u), ep(&v)));
                    ok_cert("decompose.inner", vec![id], json!({"outer": u, "inner": v}))
                }
                None => Ok(negative("no inner factor at the requested degree")),
            }
        }
        "decompose.all" => {
            let p: SplitParams = take_params(params)?;
            let all = decompose::all_decompositions(&p.f, p.e)?;
            let ids = all
                .iter()
                .map(|d| Identity::new(ep(&p.f), comp2(ep(&d.outer), ep(&d.inner))))
                .collect();
            ok_cert("decompose.all", ids, json!({"decompositions": all}))
        }
        "iterate.root" => {
            let p: RootParams = take_params(params)?;
            match decompose::iterate_root(&p.f, p.l)? {
                Some(g) => {
                    let id = Identity::new(ep(&p.f), Expr::iterate(ep(&g), p.l));
                    ok_cert("iterate.root", vec![id], json!({"root": g}))
                }
                None => Ok(negative("the polynomial is not an exact iterate")),
            }
        }
        "engstrom" => {
            let p: EngstromParams = take_params(params)?;
            let f = decompose::engstrom_factor(&p.a, &p.c, &p.d, &p.b)?;
            let ids = vec![
                Identity::new(ep(&p.a), comp2(ep(&f.u), ep(&f.a_tilde))),
                Identity::new(ep(&p.d), comp2(ep(&f.u), ep(&f.d_tilde))),
                Identity::new(ep(&p.c), comp2(ep(&f.c_tilde), ep(&f.v))),
                Identity::new(ep(&p.b), comp2(ep(&f.b_tilde), ep(&f.v))),
                Identity::new(
                    comp2(ep(&f.a_tilde), ep(&f.c_tilde)),
                    comp2(ep(&f.d_tilde), ep(&f.b_tilde)),
                ),
            ];
            ok_cert("engstrom", ids, to_json(&f)?)
        }
        "neighbors" => {
            let p: FParams = take_params(params)?;
            let list = decompose::elementary_neighbors(&p.f)?;
            let mut ids = vec![];
            for (partner, dec) in &list {
                ids.push(Identity::new(ep(&p.f), comp2(ep(&dec.outer), ep(&dec.inner))));
                ids.push(Identity::new(ep(partner), comp2(ep(&dec.inner), ep(&dec.outer))));
            }
            ok_cert("neighbors", ids, json!({"neighbors": list}))
        }
        "equiv.class" => {
            let p: FParams = take_params(params)?;
            let class = decompose::equivalence_class(&p.f, lim.step_bound)?;
            let ids = class
                .members
                .iter()
                .map(|m| {
                    Identity::new(
                        comp2(ep(&m.chain.endpoints.1), ep(&m.chain.witness)),
                        comp2(ep(&m.chain.witness), ep(&m.chain.endpoints.0)),
                    )
                })
                .collect();
            bounded_cert(class.truncated, "equiv.class", ids, to_json(&class)?)
        }
        "equiv.rep" => {
            let p: FParams = take_params(params)?;
            let (rep, map) = decompose::canonical_rep_with_map(&p.f)?;
            let sp = map.to_poly();
            let id = Identity::new(comp2(ep(&p.f), ep(&sp)), comp2(ep(&sp), ep(&rep)));
            ok_cert("equiv.rep", vec![id], json!({"representative": rep, "map": map}))
        }
        "semiconj.verify" => {
            let p: TripleParams = take_params(params)?;
            let report = semiconj::verify(&p.a, &p.b, &p.x)?;
            if !report.holds {
                return Ok(negative("the semiconjugacy identity fails"));
            }
            let id = Identity::new(comp2(ep(&p.a), ep(&p.x)), comp2(ep(&p.x), ep(&p.b)));
            ok_cert("semiconj.verify", vec![id], to_json(&report)?)
        }
        "semiconj.reduce" => {
            let p: TripleParams = take_params(params)?;
            let red = semiconj::primitive_reduce(&p.a, &p.b, &p.x)?;
            let ids = vec![
                Identity::new(ep(&p.x), comp2(ep(&red.x0), ep(&red.u))),
                Identity::new(comp2(ep(&p.a), ep(&red.x0)), comp2(ep(&red.x0), ep(&red.b0))),
                Identity::new(comp2(ep(&red.b0), ep(&red.u)), comp2(ep(&red.u), ep(&p.b))),
            ];
            ok_cert("semiconj.reduce", ids, to_json(&red)?)
        }
        "semiconj.classify" => {
            let p: TripleParams = take_params(params)?;
            let form = semiconj::ritt_classify(&p.a, &p.b, &p.x)?;
            let nu_p = form.nu.to_poly();
            let mu_p = form.mu.to_poly();
            let mut ids = vec![Identity::new(
                comp2(ep(&p.a), ep(&p.x)),
                comp2(ep(&p.x), ep(&p.b)),
            )];
            match form.kind {
                PrimitiveKind::PowerType => {
                    let n = form.n as usize;
                    let s = form.s.ok_or_else(|| {
                        Error::Internal("power form without an exponent".into())
                    })? as usize;
                    let r = form.r.clone().ok_or_else(|| {
                        Error::Internal("power form without a cofactor".into())
                    })?;
                    let zn = Poly::monomial(n, Scalar::one());
                    let model_a = Poly::monomial(s, Scalar::one()).mul(&r.pow(n as u32)?);
                    let model_b = Poly::monomial(s, Scalar::one()).mul(&r.compose(&zn)?);
                    ids.push(Identity::new(
                        comp2(ep(&p.a), ep(&nu_p)),
                        comp2(ep(&nu_p), ep(&model_a)),
                    ));
                    ids.push(Identity::new(
                        comp2(ep(&mu_p), ep(&p.b)),
                        comp2(ep(&model_b), ep(&mu_p)),
                    ));
                    ids.push(Identity::new(
                        ep(&p.x),
                        Expr::compose(vec![ep(&nu_p), ep(&zn), ep(&mu_p)]),
                    ));
                }
                PrimitiveKind::ChebyshevType => {
                    let m = form
                        .m
                        .ok_or_else(|| Error::Internal("chebyshev form without an order".into()))?;
                    let tm = chebyshev(m)?;
                    let tn = chebyshev(form.n)?;
                    let model_a = if form.sign_a == Some(-1) { tm.neg() } else { tm.clone() };
                    let model_b = if form.sign_b == Some(-1) { tm.neg() } else { tm };
                    ids.push(Identity::new(
                        comp2(ep(&p.a), ep(&nu_p)),
                        comp2(ep(&nu_p), ep(&model_a)),
                    ));
                    ids.push(Identity::new(
                        comp2(ep(&mu_p), ep(&p.b)),
                        comp2(ep(&model_b), ep(&mu_p)),
                    ));
                    ids.push(Identity::new(
                        ep(&p.x),
                        Expr::compose(vec![ep(&nu_p), ep(&tn), ep(&mu_p)]),
                    ));
                }
            }
            ok_cert("semiconj.classify", ids, to_json(&form)?)
        }
        "semiconj.down" => {
            let p: BParams = take_params(params)?;
            let down = semiconj::enumerate_down(&p.b, lim.step_bound)?;
            let ids = down
                .pairs
                .iter()
                .map(|(a, x)| Identity::new(comp2(ep(a), ep(x)), comp2(ep(x), ep(&p.b))))
                .collect();
            bounded_cert(down.truncated, "semiconj.down", ids, to_json(&down)?)
        }
        "semiconj.up" => {
            let p: AParams = take_params(params)?;
            let up = semiconj::enumerate_up(&p.a, lim.step_bound)?;
            let ids = up
                .pairs
                .iter()
                .map(|(b, x)| Identity::new(comp2(ep(&p.a), ep(x)), comp2(ep(x), ep(b))))
                .collect();
            bounded_cert(up.truncated, "semiconj.up", ids, to_json(&up)?)
        }
        "sha" => {
            let p: ShaParams = take_params(params)?;
            match semiconj::sha_express(&p.p, &p.q)? {
                Some((mu, k)) => {
                    let id = Identity::new(
                        ep(&p.p),
                        comp2(ep(&mu.to_poly()), Expr::iterate(ep(&p.q), k as u32)),
                    );
                    ok_cert("sha", vec![id], json!({"map": mu, "k": k}))
                }
                None => Ok(negative("not an affine twist of an iterate")),
            }
        }
        "lift" => {
            let p: LiftParams = take_params(params)?;
            let lifted = semiconj::lift_iterate(&p.b_hat, &p.x, p.l, &p.a)?;
            let ids = vec![
                Identity::new(Expr::iterate(ep(&lifted), p.l), ep(&p.a)),
                Identity::new(
                    comp2(ep(&lifted), ep(&p.x)),
                    comp2(ep(&p.x), ep(&p.b_hat)),
                ),
            ];
            ok_cert("lift", ids, json!({"lift": lifted}))
        }
        "descend" => {
            let p: DescendParams = take_params(params)?;
            match semiconj::descend_iterate(&p.a_hat, p.l, &p.b, &p.x, lim.s_bound)? {
                semiconj::DescendOutcome::Found { s, b_hat } => {
                    let ids = vec![
                        Identity::new(
                            Expr::iterate(ep(&p.b), s as u32),
                            Expr::iterate(ep(&b_hat), s as u32 * p.l),
                        ),
                        Identity::new(
                            comp2(Expr::iterate(ep(&p.a_hat), p.l), ep(&p.x)),
                            comp2(ep(&p.x), ep(&p.b)),
                        ),
                    ];
                    ok_cert("descend", ids, json!({"s": s, "b_hat": b_hat}))
                }
                out @ semiconj::DescendOutcome::Exhausted { .. } => {
                    Ok((EXIT_RESOURCE, cert_value("descend", vec![], to_json(&out)?)?))
                }
            }
        }
        "curve.verify" => {
            let p: CurveVerifyParams = take_params(params)?;
            let check = dynamics::verify_invariant_param(&p.a1, &p.a2, &p.x1, &p.x2, &p.b)?;
            if !check.holds() {
                return Ok(negative("the parametrization is not invariant"));
            }
            let ids = vec![
                Identity::new(comp2(ep(&p.a1), ep(&p.x1)), comp2(ep(&p.x1), ep(&p.b))),
                Identity::new(comp2(ep(&p.a2), ep(&p.x2)), comp2(ep(&p.x2), ep(&p.b))),
            ];
            ok_cert("curve.verify", ids, to_json(&check)?)
        }
        "curve.step" => {
            let p: CurveMuParams = take_params(params)?;
            match dynamics::graph_step(&p.a1, &p.a2, &p.mu)? {
                Some(nu) => {
                    let id = Identity::new(
                        ep(&p.mu.before(&p.a2)),
                        ep(&nu.after(&p.a1)),
                    );
                    ok_cert("curve.step", vec![id], json!({"map": nu}))
                }
                None => Ok(negative("the image is not an affine graph over the family")),
            }
        }
        "curve.orbit" => {
            let p: CurveMuParams = take_params(params)?;
            let out = dynamics::graph_orbit(&p.a1, &p.a2, &p.mu, lim.step_bound)?;
            let (code, ids) = match &out {
                dynamics::OrbitOutcome::Periodic(cert) => (
                    EXIT_OK,
                    cert.verification
                        .iter()
                        .map(|(l, r)| Identity::equal(l, r))
                        .collect(),
                ),
                dynamics::OrbitOutcome::CapExhausted { .. } => (EXIT_RESOURCE, vec![]),
                _ => (EXIT_OK, vec![]),
            };
            Ok((code, cert_value("curve.orbit", ids, to_json(&out)?)?))
        }
        "curve.bound" => {
            let p: CurvePairParams = take_params(params)?;
            let bound = dynamics::period_bound(&p.a1, &p.a2)?;
            ok_cert("curve.bound", vec![], json!({"bound": bound}))
        }
        "curve.implicitize" => {
            let p: ImplicitParams = take_params(params)?;
            let curve = dynamics::implicitize(&p.x1, &p.x2)?;
            ok_cert("curve.implicitize", vec![], json!({"curve": curve}))
        }
        "curve.fin0" => {
            let p: FinParams = take_params(params)?;
            match dynamics::fin0_construct(&p.a1, &p.a2, &p.b, &p.x1, &p.x2, p.k, lim.s_bound)? {
                dynamics::Fin0Outcome::Done(res) => {
                    let ids = res
                        .identities
                        .iter()
                        .map(|(l, r)| Identity::equal(l, r))
                        .collect();
                    let data = json!({
                        "s": res.s,
                        "b_hat": res.b_hat,
                        "gamma1": res.gamma1,
                        "gamma2": res.gamma2,
                        "n": res.n,
                    });
                    ok_cert("curve.fin0", ids, data)
                }
                out @ dynamics::Fin0Outcome::Exhausted { .. } => {
                    Ok((EXIT_RESOURCE, cert_value("curve.fin0", vec![], to_json(&out)?)?))
                }
            }
        }
        "curve.intergen" => {
            let p: AParams = take_params(params)?;
            let out = dynamics::inter_generators(&p.a, lim.iter_bound, lim.step_bound)?;
            let mut ids = vec![];
            for g in &out.generators {
                let twisted = g.gamma.after(&p.a);
                ids.push(Identity::new(
                    comp2(ep(&twisted), ep(&g.witness)),
                    comp2(ep(&g.witness), ep(&g.related)),
                ));
                let mut model = Expr::iterate(ep(&g.base), g.l as u32);
                if let Some(t) = &g.twist {
                    model = comp2(ep(&t.to_poly()), model);
                }
                ids.push(Identity::new(ep(&g.related), model));
            }
            bounded_cert(out.truncated, "curve.intergen", ids, to_json(&out)?)
        }
        "recheck" => {
            let p: RecheckParams = take_params(params)?;
            let valid = recheck(&p.certificate)?;
            let code = if valid { EXIT_OK } else { EXIT_NEGATIVE };
            Ok((code, cert_value("recheck", vec![], json!({"valid": valid}))?))
        }
        other => Err(Error::Parse(format!("unknown command \"{other}\""))),
    }
}

fn effective_limits(req: &Request, flags: &Limits) -> Result<Limits> {
    let mut lim = req.limits.clone().unwrap_or_default();
    if flags.degree_cap.is_some() {
        lim.degree_cap = flags.degree_cap;
    }
    if flags.step_bound.is_some() {
        lim.step_bound = flags.step_bound;
    }
    if flags.s_bound.is_some() {
        lim.s_bound = flags.s_bound;
    }
    if flags.iter_bound.is_some() {
        lim.iter_bound = flags.iter_bound;
    }
    for (name, v) in [
        ("degree_cap", lim.degree_cap),
        ("step_bound", lim.step_bound),
        ("s_bound", lim.s_bound),
        ("iter_bound", lim.iter_bound),
    ] {
        if v == Some(0) {
            return Err(Error::Invalid(format!("{name} must be positive")));
        }
    }
    Ok(lim)
}

/// Processes one request, returning (exit code, response body).
pub fn run_request(req: &Request, flags: &Limits) -> (i32, Value) {
    let lim = match effective_limits(req, flags) {
        Ok(l) => l,
        Err(e) => return error_report(&e),
    };
    let saved = degree_cap();
    if let Some(c) = lim.degree_cap {
        set_degree_cap(c as usize);
    }
    let out = dispatch(&req.command, req.params.clone(), &lim);
    set_degree_cap(saved);
    match out {
        Ok(pair) => pair,
        Err(e) => error_report(&e),
    }
}

fn handle_value(v: Value, flags: &Limits) -> (i32, Value) {
    match serde_json::from_value::<Request>(v) {
        Ok(req) => run_request(&req, flags),
        Err(e) => (
            EXIT_PARSE,
            json!({"error": {"class": "parse", "message": format!("bad request: {e}")}}),
        ),
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "polydyn",
    version,
    about = "Exact certificates for polynomial decomposition, semiconjugacy, and invariant curves"
)]
struct Args {
    /// Request file (JSON object, or array for batch mode); - for stdin.
    #[arg(long, default_value = "-")]
    input: String,
    /// Output file; - for stdout.
    #[arg(long, default_value = "-")]
    output: String,
    /// Seed for randomized harnesses; all certified operations are
    /// deterministic and ignore it.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the polynomial degree cap.
    #[arg(long)]
    degree_cap: Option<u64>,
    /// Override per-request step bounds.
    #[arg(long)]
    step_bound: Option<u64>,
}

fn read_input(spec: &str) -> std::io::Result<String> {
    if spec == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        std::fs::read_to_string(spec)
    }
}

fn write_output(spec: &str, body: &str) -> std::io::Result<()> {
    if spec == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(body.as_bytes())?;
        out.write_all(b"\n")?;
        out.flush()
    } else {
        std::fs::write(spec, format!("{body}\n"))
    }
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_PARSE,
            };
            let _ = e.print();
            return code;
        }
    };
    let _ = args.seed;
    let text = match read_input(&args.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", args.input);
            return EXIT_PARSE;
        }
    };
    let flags = Limits {
        degree_cap: args.degree_cap,
        step_bound: args.step_bound,
        s_bound: None,
        iter_bound: None,
    };
    let (code, body) = match serde_json::from_str::<Value>(&text) {
        Err(e) => (
            EXIT_PARSE,
            json!({"error": {"class": "parse", "message": format!("bad JSON: {e}")}}),
        ),
        Ok(Value::Array(items)) => {
            let responses: Vec<Value> = items
                .into_iter()
                .map(|item| {
                    let (status, body) = handle_value(item, &flags);
                    json!({"status": status, "body": body})
                })
                .collect();
            (EXIT_OK, Value::Array(responses))
        }
        Ok(single) => handle_value(single, &flags),
    };
    let rendered = match serde_json::to_string(&body) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("cannot serialize response: {e}");
            return EXIT_INTERNAL;
        }
    };
    if let Err(e) = write_output(&args.output, &rendered) {
        eprintln!("cannot write {}: {e}", args.output);
        return EXIT_INTERNAL;
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(text: &str) -> Request {
        serde_json::from_str(text).unwrap()
    }

    #[test]
    fn cheb_request() {
        let (code, body) = run_request(
            &req(r#"{"command":"cheb","params":{"m":2}}"#),
            &Limits::default(),
        );
        assert_eq!(code, EXIT_OK);
        assert_eq!(body["data"]["poly"]["coeffs"], json!(["-1", "0", "2"]));
    }

    #[test]
    fn negative_and_parse_codes() {
        let (code, body) = run_request(
            &req(r#"{"command":"conjugate","params":{"A":"z^2+1","B":"z^2+2"}}"#),
            &Limits::default(),
        );
        assert_eq!(code, EXIT_NEGATIVE);
        assert_eq!(body["error"]["class"], json!("negative"));
        let (code, _) = run_request(
            &req(r#"{"command":"no.such.op","params":{}}"#),
            &Limits::default(),
        );
        assert_eq!(code, EXIT_PARSE);
        let bad: std::result::Result<Request, _> =
            serde_json::from_str(r#"{"command":"cheb","params":{},"extra":1}"#);
        assert!(bad.is_err());
        let (code, _) = run_request(
            &req(r#"{"command":"cheb","params":{"m":2},"limits":{"step_bound":0}}"#),
            &Limits::default(),
        );
        assert_eq!(code, EXIT_PARSE);
    }

    #[test]
    fn produced_certificates_recheck() {
        for text in [
            r#"{"command":"compose","params":{"P":"z^2+1","Q":"z^3"}}"#,
            r#"{"command":"conjugate","params":{"A":"z^2+4*z","B":"z^2+2*z-2"}}"#,
            r#"{"command":"semiconj.verify","params":{"A":"z*(z+1)^2","B":"z*(z^2+1)","X":"z^2"}}"#,
            r#"{"command":"semiconj.classify","params":{"A":"z*(z+1)^2","B":"z*(z^2+1)","X":"z^2"}}"#,
            r#"{"command":"curve.orbit","params":{"A1":"z^7+z^2","A2":"z^7+z^2","mu":"zeta5*z"}}"#,
            r#"{"command":"engstrom","params":{"A":"z^2","C":"z^2","D":"z^2","B":"z^2"}}"#,
        ] {
            let (code, body) = run_request(&req(text), &Limits::default());
            assert_eq!(code, EXIT_OK, "{text}: {body}");
            let wrapped = format!(r#"{{"command":"recheck","params":{{"certificate":{body}}}}}"#);
            let (code, verdict) = run_request(&req(&wrapped), &Limits::default());
            assert_eq!(code, EXIT_OK, "{text}");
            assert_eq!(verdict["data"]["valid"], json!(true), "{text}");
        }
    }

    #[test]
    fn recheck_rejects_tampering() {
        let (_, body) = run_request(
            &req(r#"{"command":"compose","params":{"P":"z^2","Q":"z^3"}}"#),
            &Limits::default(),
        );
        let mut cert = body.clone();
        // Perturb one stored coefficient: z^6 becomes z^6 + 1.
        cert["identities"][0]["lhs"]["poly"] =
            json!({"coeffs": ["1", "0", "0", "0", "0", "0", "1"]});
        let wrapped = json!({"command": "recheck", "params": {"certificate": cert}});
        let (code, verdict) =
            run_request(&serde_json::from_value(wrapped).unwrap(), &Limits::default());
        assert_eq!(code, EXIT_NEGATIVE);
        assert_eq!(verdict["data"]["valid"], json!(false));
    }

    #[test]
    fn determinism() {
        let r = req(r#"{"command":"semiconj.up","params":{"A":"z*(z+1)^2"}}"#);
        let a = run_request(&r, &Limits::default());
        let b = run_request(&r, &Limits::default());
        assert_eq!(a.0, b.0);
        assert_eq!(
            serde_json::to_string(&a.1).unwrap(),
            serde_json::to_string(&b.1).unwrap()
        );
    }
}
