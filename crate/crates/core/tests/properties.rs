mod common;

use densfact::coords::schwarzian;
use densfact::densalg::{parse_op, DensOp};
use densfact::duval::{check_weight, duval_ovsienko_map, WeightedOp2};
use densfact::symexpr::{equal_probabilistic, evaluate, parse_expr, rat, sum, Expr, Rational};
use densfact::EqualityConfig;
use proptest::prelude::*;

fn cfg() -> EqualityConfig {
    EqualityConfig::default()
}

fn poly_from(cs: &[i64]) -> Expr {
    sum(cs.iter().enumerate().map(|(k, &c)| Expr::x().powi(k as i64).scale(&rat(c, 1))))
}

fn poly() -> impl Strategy<Value = Expr> {
    prop::collection::vec(-3i64..=3, 1..=4).prop_map(|cs| poly_from(&cs))
}

fn weight() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Joint order at most 2, polynomial coefficients.
fn operator() -> impl Strategy<Value = DensOp> {
    (weight(), prop::collection::vec(poly(), 6)).prop_map(|(w, cs)| {
        let keys = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
        DensOp::from_terms(w, keys.into_iter().zip(cs))
    })
}

/// Raw expression text with no poles on the positive half-line.
fn expr_text() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("x".to_string()),
        (-3i64..=3).prop_map(|c| format!("({c})")),
        Just("x^(1/2)".to_string()),
        (1i64..=3).prop_map(|c| format!("(1/(x + {c}))")),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} + {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} - {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a} * {b})")),
            (inner.clone(), 0u32..=3).prop_map(|(a, n)| format!("({a})^{n}")),
            (inner.clone(), 1i64..=3).prop_map(|(a, c)| format!("({a})/(x^2 + {c})")),
        ]
    })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simplify_preserves_value(text in expr_text(), x0 in 0.1f64..3.0) {
        let raw = parse_expr(&text).unwrap();
        let simple = raw.simplify();
        if let Some(v) = evaluate(&raw, x0) {
            let w = evaluate(&simple, x0).expect("simplified form defined where the raw one is");
            prop_assert!(close(v, w), "{text}: {v} vs {w} ({simple})");
        }
    }

    #[test]
    fn printing_round_trips(text in expr_text()) {
        let raw = parse_expr(&text).unwrap();
        prop_assert_eq!(parse_expr(&raw.to_string()).unwrap(), raw.clone());
        // simplify is not a canonical form, so the pretty form is compared by value.
        let e = raw.simplify();
        prop_assert!(equal_probabilistic(&parse_expr(&e.pretty()).unwrap(), &e, &cfg()).unwrap());
    }

    #[test]
    fn differentiation_is_linear_and_leibniz(f in expr_text(), g in expr_text(), c in -4i64..=4) {
        let (f, g) = (parse_expr(&f).unwrap().simplify(), parse_expr(&g).unwrap().simplify());
        let c = rat(c, 1);
        let lin = (f.scale(&c) + g.clone()).derivative();
        prop_assert!(equal_probabilistic(&lin, &(f.derivative().scale(&c) + g.derivative()), &cfg()).unwrap());
        let leibniz = f.derivative() * g.clone() + f.clone() * g.derivative();
        prop_assert!(equal_probabilistic(&(f * g).derivative(), &leibniz, &cfg()).unwrap());
    }

    #[test]
    fn composition_is_associative_and_adds_weights(a in operator(), b in operator(), c in operator()) {
        let ab = a.multiply(&b);
        prop_assert_eq!(ab.weight(), &(a.weight() + b.weight()));
        prop_assert!(ab.multiply(&c).eq_probabilistic(&a.multiply(&b.multiply(&c)), &cfg()).unwrap());
    }

    #[test]
    fn adjoint_is_an_anti_involution(a in operator(), b in operator()) {
        prop_assert!(a.adjoint().adjoint().eq_probabilistic(&a, &cfg()).unwrap());
        let lhs = a.multiply(&b).adjoint();
        prop_assert!(lhs.eq_probabilistic(&b.adjoint().multiply(&a.adjoint()), &cfg()).unwrap());
        prop_assert_eq!(a.adjoint().weight().clone(), a.weight().clone());
    }

    #[test]
    fn restriction_is_a_homomorphism(a in operator(), b in operator(), lambda in weight()) {
        let whole = a.multiply(&b).restrict(&lambda);
        let parts = a.restrict(&(&lambda + b.weight())).compose(&b.restrict(&lambda)).unwrap();
        prop_assert!(whole.eq_probabilistic(&parts, &cfg()).unwrap());
    }

    #[test]
    fn dsl_round_trips(a in operator()) {
        let again = parse_op(&a.to_dsl()).unwrap();
        prop_assert!(again.eq_probabilistic(&a, &cfg()).unwrap(), "{} reparsed as {}", a.to_dsl(), again.to_dsl());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// `𝔖(f∘g) = (𝔖f)∘g · g'² + 𝔖g` for power maps after increasing polynomials.
    #[test]
    fn schwarzian_cocycle(k in 1i64..=3, n in 2i64..=3, cs in prop::collection::vec(0i64..=3, 3)) {
        let f = Expr::x().powi(n).scale(&rat(k, 1));
        let g = poly_from(&[cs[0], cs[1] + 1, cs[2]]);
        let lhs = schwarzian(&f.substitute(&g)).unwrap();
        let rhs = schwarzian(&f).unwrap().substitute(&g) * g.derivative().powi(2) + schwarzian(&g).unwrap();
        prop_assert!(equal_probabilistic(&lhs, &rhs, &cfg()).unwrap());
    }

    #[test]
    fn duval_map_composes(a in (poly(), poly(), poly()), mu in weight(), kappa in weight(), lambda in weight()) {
        prop_assume!(check_weight(&mu).is_ok() && check_weight(&kappa).is_ok() && check_weight(&lambda).is_ok());
        let src = WeightedOp2::new(a.0, a.1, a.2, mu);
        let direct = duval_ovsienko_map(&src, &lambda).unwrap();
        let two_step = duval_ovsienko_map(&duval_ovsienko_map(&src, &kappa).unwrap(), &lambda).unwrap();
        prop_assert!(two_step.eq_probabilistic(&direct, &cfg()).unwrap());
    }
}
