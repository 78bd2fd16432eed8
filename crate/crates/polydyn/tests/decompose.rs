use polydyn::algebra::parse::parse_poly;
use polydyn::algebra::{chebyshev, Poly, Scalar};
use polydyn::decompose::{
    all_decompositions, canonical_rep, engstrom_factor, equivalence_class, iterate_root,
    normalized_inner,
};
use proptest::prelude::*;

fn p(src: &str) -> Poly {
    parse_poly(src).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Every constructed iterate is recognized and its root reproduces it.
    #[test]
    fn iterate_roots_complete(cs in proptest::collection::vec(-4i64..=4, 3), cubic in any::<bool>(), l in 2u32..=3) {
        let g = if cubic {
            let mut full = vec![cs[0], cs[1], cs[2], 1];
            if full[3] == 0 {
                full[3] = 1;
            }
            Poly::from_int_coeffs(&full)
        } else {
            Poly::from_int_coeffs(&[cs[0], cs[1], 2])
        };
        let f = g.iterate(l).unwrap();
        let root = iterate_root(&f, l).unwrap().expect("root of a constructed iterate");
        prop_assert_eq!(root.iterate(l).unwrap(), f);
    }
}

#[test]
fn decomposition_postconditions() {
    let corpus = [
        p("z^4 + 2*z^2 + 2"),
        chebyshev(6).unwrap(),
        p("z^6 + z^4"),
        p("(z^2 + 1)^2"),
        p("z^6"),
    ];
    for f in &corpus {
        let d = f.degree().unwrap();
        for e in 2..d {
            if d % e != 0 {
                continue;
            }
            for dec in all_decompositions(f, e).unwrap() {
                assert_eq!(dec.outer.compose(&dec.inner).unwrap(), *f);
                assert!(dec.inner.is_monic());
                assert!(dec.inner.coeff(0).is_zero());
                assert_eq!(dec.inner.degree(), Some(e));
            }
        }
    }
}

#[test]
fn root_examples() {
    assert_eq!(iterate_root(&p("z^4 + 2*z^2 + 2"), 2).unwrap(), Some(p("z^2 + 1")));
    // z^8 is the third iterate of z^2.
    assert_eq!(iterate_root(&p("z^8"), 3).unwrap(), Some(p("z^2")));
    // Degree 4 is not a cube.
    assert_eq!(iterate_root(&p("z^4"), 3).unwrap(), None);
    // Chebyshev iterates split, with both signed roots valid since T_3 is odd.
    let root = iterate_root(&chebyshev(9).unwrap(), 2).unwrap().unwrap();
    assert!(root == chebyshev(3).unwrap() || root == chebyshev(3).unwrap().neg());
    assert_eq!(root.iterate(2).unwrap(), chebyshev(9).unwrap());
}

// Being an exact second iterate is a class invariant: every member of the
// class of a second iterate is itself a second iterate. The composite seed
// (z^2+z) . z^2 makes the class nontrivial, since regrouping the four inner
// factors of its iterate produces a partner from a different conjugacy class.
#[test]
fn iterate_status_is_class_invariant() {
    let seed = p("z^4 + z^2");
    let f = seed.iterate(2).unwrap();
    let class = equivalence_class(&f, None).unwrap();
    assert!(!class.truncated);
    assert!(class.members.len() >= 2, "expected a nontrivial class");
    let partner_rep = canonical_rep(&p("(z^2 + z)^2").iterate(2).unwrap()).unwrap();
    assert!(class.members.iter().any(|m| m.representative == partner_rep));
    for member in &class.members {
        for target in [&member.found, &member.representative] {
            let root = iterate_root(target, 2).unwrap();
            let root = root.unwrap_or_else(|| panic!("member without a root: {target:?}"));
            assert_eq!(root.iterate(2).unwrap(), *target);
        }
    }
}

#[test]
fn class_chains_reverify() {
    for f in [p("(z^2 + 1)^2"), p("z^6 + z^4"), chebyshev(4).unwrap()] {
        let class = equivalence_class(&f, None).unwrap();
        for member in &class.members {
            let chain = &member.chain;
            let (start, end) = &chain.endpoints;
            assert_eq!(start, &f);
            assert_eq!(end, &member.found);
            let x = &chain.witness;
            assert_eq!(
                end.compose(x).unwrap(),
                x.compose(start).unwrap(),
                "forward witness for {end:?}"
            );
            let y = chain.reverse_witness().unwrap();
            assert_eq!(start.compose(&y).unwrap(), y.compose(end).unwrap());
        }
    }
}

#[test]
fn engstrom_degree_equations() {
    // A . C = D . B built from U . P . Q | R . V against U . P | Q . R . V.
    let cases: [(&str, &str, &str, &str, &str); 3] = [
        ("z^2", "z^2 + 1", "z^2 - 2", "2*z + 1", "z^2 + z"),
        ("z^2 - z", "z^3", "z^2 + 2", "z^2", "z^2 - 1"),
        ("z^3 + z", "z^2", "z^2 + z", "z^2 + 2*z", "z^2"),
    ];
    for (us, ps, qs, rs, vs) in cases {
        let (u, pp, q, r, v) = (p(us), p(ps), p(qs), p(rs), p(vs));
        let a = u.compose(&pp).unwrap().compose(&q).unwrap();
        let d = u.compose(&pp).unwrap();
        let c = r.compose(&v).unwrap();
        let b = q.compose(&r).unwrap().compose(&v).unwrap();
        assert_eq!(a.compose(&c).unwrap(), d.compose(&b).unwrap());
        let fac = engstrom_factor(&a, &c, &d, &b).unwrap();
        assert_eq!(a, fac.u.compose(&fac.a_tilde).unwrap());
        assert_eq!(d, fac.u.compose(&fac.d_tilde).unwrap());
        assert_eq!(c, fac.c_tilde.compose(&fac.v).unwrap());
        assert_eq!(b, fac.b_tilde.compose(&fac.v).unwrap());
        assert_eq!(
            fac.a_tilde.compose(&fac.c_tilde).unwrap(),
            fac.d_tilde.compose(&fac.b_tilde).unwrap()
        );
        let dg = |f: &Poly| f.degree().unwrap() as u64;
        assert_eq!(dg(&fac.u), gcd(dg(&a), dg(&d)));
        assert_eq!(dg(&fac.v), gcd(dg(&c), dg(&b)));
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

#[test]
fn inner_factor_negative() {
    assert!(normalized_inner(&p("z^4 + z"), 2).unwrap().is_none());
    let (outer, inner) = normalized_inner(&p("z^4 + 2*z^2 + 2"), 2).unwrap().unwrap();
    assert_eq!(outer.compose(&inner).unwrap(), p("z^4 + 2*z^2 + 2"));
    assert_eq!(inner, p("z^2"));
}

#[test]
fn canonical_reps_are_stable() {
    // A canonical representative is a fixed point of the normal form, and two
    // conjugates share it.
    for f in [p("z^3 + z + 1"), p("2*z^2 + 4*z"), chebyshev(5).unwrap(), p("z^4 + z^2")] {
        let rep = canonical_rep(&f).unwrap();
        assert_eq!(canonical_rep(&rep).unwrap(), rep);
    }
    let a = p("z^3 + z + 1");
    let moved = polydyn::normalform::conjugate_by(
        &a,
        &polydyn::algebra::AffineMap::new(Scalar::from_int(2), Scalar::from_int(3)).unwrap(),
    );
    assert_eq!(canonical_rep(&a).unwrap(), canonical_rep(&moved).unwrap());
}
