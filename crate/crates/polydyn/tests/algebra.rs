use polydyn::algebra::parse::parse_poly;
use polydyn::algebra::{
    average_by, chebyshev, solve_inner, solve_outer, x_adic, AffineMap, Poly, Scalar,
};
use proptest::prelude::*;

fn p(src: &str) -> Poly {
    parse_poly(src).unwrap()
}

fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::from_int(n).div(&Scalar::from_int(d)).unwrap()
}

fn int_poly(deg: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec(-6i64..=6, deg + 1).prop_map(move |mut cs| {
        if cs[deg] == 0 {
            cs[deg] = 1;
        }
        Poly::from_int_coeffs(&cs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Any polynomial is rebuilt exactly from its base-X digits.
    #[test]
    fn digits_reconstruct(q in int_poly(7), e in 1usize..=3, cs in proptest::collection::vec(-5i64..=5, 4)) {
        let mut xc = cs[..e + 1].to_vec();
        if xc[e] == 0 {
            xc[e] = 2;
        }
        let x = Poly::from_int_coeffs(&xc);
        let digits = x_adic(&q, &x).unwrap();
        let mut back = Poly::zero();
        for d in digits.iter().rev() {
            back = back.mul(&x).add(d);
        }
        prop_assert_eq!(back, q);
        for d in &digits {
            prop_assert!(d.degree().map_or(true, |dd| dd < x.degree().unwrap()));
        }
    }

    // Composing and then dividing out the inner factor is the identity.
    #[test]
    fn outer_cancellation(a in int_poly(4), e in 1usize..=3, cs in proptest::collection::vec(-5i64..=5, 4)) {
        let mut xc = cs[..e + 1].to_vec();
        if xc[e] == 0 {
            xc[e] = -1;
        }
        let b = Poly::from_int_coeffs(&xc);
        let f = a.compose(&b).unwrap();
        let got = solve_outer(&f, &b).unwrap();
        prop_assert_eq!(got, Some(a));
    }

    // Averaging along the fibers of X is a projection onto compositions with X:
    // it fixes A . X and applying it twice equals applying it once.
    #[test]
    fn averaging_projects(a in int_poly(3), e in 2usize..=3, f in int_poly(6)) {
        let x = Poly::monomial(e, Scalar::one()).add(&Poly::z());
        let comp = a.compose(&x).unwrap();
        prop_assert_eq!(average_by(&comp, &x).unwrap(), comp);
        let once = average_by(&f, &x).unwrap();
        let twice = average_by(&once, &x).unwrap();
        prop_assert_eq!(once, twice);
    }
}

#[test]
fn chebyshev_semigroup() {
    for m in 1u64..=6 {
        for n in 1u64..=6 {
            let tm = chebyshev(m).unwrap();
            let tn = chebyshev(n).unwrap();
            assert_eq!(tm.compose(&tn).unwrap(), chebyshev(m * n).unwrap(), "m={m} n={n}");
        }
    }
}

#[test]
fn chebyshev_shape() {
    assert_eq!(chebyshev(2).unwrap(), p("2*z^2 - 1"));
    assert_eq!(chebyshev(3).unwrap(), p("4*z^3 - 3*z"));
    assert_eq!(chebyshev(5).unwrap(), p("16*z^5 - 20*z^3 + 5*z"));
    assert_eq!(chebyshev(6).unwrap(), p("32*z^6 - 48*z^4 + 18*z^2 - 1"));
    for m in 2u64..=12 {
        let t = chebyshev(m).unwrap();
        assert_eq!(t.degree(), Some(m as usize));
        assert_eq!(*t.lc(), Scalar::from_int(2).pow_u(m - 1));
        // Same parity as m in every supported exponent.
        for k in t.support() {
            assert_eq!(k as u64 % 2, m % 2, "m={m} k={k}");
        }
        // T_m(1) = 1 and T_m(-1) = (-1)^m.
        assert_eq!(t.eval(&Scalar::one()), Scalar::one());
        assert_eq!(t.eval(&Scalar::from_int(-1)), Scalar::from_int(if m % 2 == 0 { 1 } else { -1 }));
    }
}

#[test]
fn averaging_values() {
    // Averaging z^2 over the fibers of z^3 - 2z gives the constant 4/3.
    let avg = average_by(&p("z^2"), &p("z^3 - 2*z")).unwrap();
    assert_eq!(avg, Poly::constant(ratio(4, 3)));
    // Monic input with monic base stays monic.
    let f = p("z^6 + 3*z^4 + z + 7");
    let out = average_by(&f, &p("z^2 + 1")).unwrap();
    assert!(out.is_monic());
    // Linearity in the first argument.
    let x = p("z^2 - 2");
    let g = p("z^5 - z^3 + 2*z");
    let h = p("z^4 + z");
    let lhs = average_by(&g.scale(&Scalar::from_int(3)).add(&h), &x).unwrap();
    let rhs = average_by(&g, &x)
        .unwrap()
        .scale(&Scalar::from_int(3))
        .add(&average_by(&h, &x).unwrap());
    assert_eq!(lhs, rhs);
}

#[test]
fn inner_solutions() {
    // z^6 = (z^2) . (±z^3).
    let sols = solve_inner(&p("z^6"), &p("z^2")).unwrap();
    assert_eq!(sols.len(), 2);
    for v in &sols {
        assert_eq!(p("z^2").compose(v).unwrap(), p("z^6"));
    }
    assert!(sols.contains(&p("z^3")));
    assert!(sols.contains(&p("-z^3")));
    // No inner factor exists here.
    assert!(solve_inner(&p("z^6 + z"), &p("z^2")).unwrap().is_empty());
    // Unique branch through a translation.
    let sols = solve_inner(&p("z^4 + 2*z^2 + 1"), &p("z^2")).unwrap();
    for v in &sols {
        assert_eq!(p("z^2").compose(v).unwrap(), p("z^4 + 2*z^2 + 1"));
    }
    assert!(!sols.is_empty());
}

#[test]
fn digit_example() {
    let digits = x_adic(&p("z^5 + z^2"), &p("z^2")).unwrap();
    assert_eq!(digits, vec![Poly::zero(), Poly::one(), Poly::z()]);
}

#[test]
fn serde_round_trips() {
    // Rational polynomial.
    let f = p("z^3 - 7/2*z + 1/3");
    let text = serde_json::to_string(&f).unwrap();
    assert_eq!(serde_json::from_str::<Poly>(&text).unwrap(), f);
    // Cyclotomic polynomial: coefficients carried over a conductor.
    let zeta = Scalar::root_of_unity(5, 1).unwrap();
    let g = Poly::z().scale(&zeta).add(&Poly::constant(Scalar::one()));
    let text = serde_json::to_string(&g).unwrap();
    assert!(text.contains("conductor"));
    assert_eq!(serde_json::from_str::<Poly>(&text).unwrap(), g);
    // Scalars and affine maps.
    let s = Scalar::root_of_unity(8, 3).unwrap();
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<Scalar>(&text).unwrap(), s);
    let m = AffineMap::new(ratio(2, 3), Scalar::from_int(-1)).unwrap();
    let text = serde_json::to_string(&m).unwrap();
    assert_eq!(serde_json::from_str::<AffineMap>(&text).unwrap(), m);
    // Expression strings are accepted as polynomial input.
    let h: Poly = serde_json::from_str("\"z^2 - 4*z + 4\"").unwrap();
    assert_eq!(h, p("z^2 - 4*z + 4"));
}
