use num_complex::Complex64;
use proptest::prelude::*;

use cmc1::holo::{eval_jet, eval_jet_on_sheet, parse, Expr, Func};
use cmc1::small::{small_matrix, small_matrix_with_root, to_upper_half_space};
use cmc1::{bianchi_calo_point, bicalo_denominator};

const CATALOG_EXPRS: [&str; 4] = ["tau^2", "log(tau)", "exp(tau)", "tau^3+tau"];

/// τ in the right half-plane, away from the origin, where every catalog
/// function and its principal branches are smooth.
fn tau() -> impl Strategy<Value = Complex64> {
    (0.3f64..2.5, -1.4f64..1.4).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Constants the parser can produce: non-negative reals and positive
/// imaginary literals.
fn literal() -> BoxedStrategy<Expr> {
    prop_oneof![
        (0.0f64..10.0).prop_map(|a| Expr::Const(Complex64::new(a, 0.0))),
        (0u32..9).prop_map(|k| Expr::Const(Complex64::new(k as f64, 0.0))),
        prop::sample::select(vec![1e-9, 1e30, 6.02e23, 0.1]).prop_map(|a| Expr::Const(Complex64::new(a, 0.0))),
        (1e-3f64..10.0).prop_map(|b| Expr::Const(Complex64::new(0.0, b))),
        Just(Expr::Const(Complex64::new(0.0, 1.0))),
    ]
    .boxed()
}

fn any_constant() -> BoxedStrategy<Expr> {
    (-3.0f64..3.0, -3.0f64..3.0)
        .prop_map(|(a, b)| Expr::Const(Complex64::new(a, b)))
        .boxed()
}

fn expression(constant: BoxedStrategy<Expr>) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![Just(Expr::Var), constant];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Pow(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (prop::sample::select(Func::ALL.to_vec()), inner).prop_map(|(f, a)| Expr::Call(f, Box::new(a))),
        ]
    })
}

fn smooth_expression() -> impl Strategy<Value = Expr> {
    prop::sample::select(CATALOG_EXPRS.to_vec())
        .prop_union(prop::sample::select(vec![
            "sin(tau)*exp(tau/3)",
            "sqrt(tau)+tau^-2",
            "tau^2.5 - 1/(tau+3)",
            "cosh(tau)/(2+tanh(tau))",
        ]))
        .prop_map(|s| parse(s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn jet_derivatives_match_central_differences(e in smooth_expression(), t in tau()) {
        let h = 1e-5;
        let j = eval_jet(&e, t).unwrap();
        let at = |dt: Complex64| eval_jet(&e, t + dt).unwrap();
        let (p, m) = (at(Complex64::new(h, 0.0)), at(Complex64::new(-h, 0.0)));
        let d1 = (p.val - m.val) / (2.0 * h);
        let d2 = (p.d1 - m.d1) / (2.0 * h);
        let scale = 1.0 + j.val.norm() + j.d1.norm() + j.d2.norm();
        prop_assert!((d1 - j.d1).norm() < 1e-6 * scale, "f′ {} vs {}", j.d1, d1);
        prop_assert!((d2 - j.d2).norm() < 1e-6 * scale, "f″ {} vs {}", j.d2, d2);
        // holomorphic: the same derivative along the imaginary direction
        let (pi, mi) = (at(Complex64::new(0.0, h)), at(Complex64::new(0.0, -h)));
        let d1i = (pi.val - mi.val) / (2.0 * Complex64::new(0.0, h));
        prop_assert!((d1i - j.d1).norm() < 1e-6 * scale);
    }

    #[test]
    fn exp_of_log_is_identity(t in tau()) {
        let j = eval_jet(&parse("exp(log(tau))").unwrap(), t).unwrap();
        prop_assert!((j.val - t).norm() < 1e-12 * (1.0 + t.norm()));
        prop_assert!((j.d1 - 1.0).norm() < 1e-12);
        prop_assert!(j.d2.norm() < 1e-12);
    }

    #[test]
    fn printing_round_trips(e in expression(literal())) {
        let printed = e.to_string();
        prop_assert_eq!(parse(&printed).unwrap(), e, "{}", printed);
    }

    #[test]
    fn reprinting_is_a_fixed_point(e in expression(any_constant())) {
        let once = parse(&e.to_string()).unwrap();
        let twice = parse(&once.to_string()).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn sheet_and_principal_agree_off_the_cut(e in smooth_expression(), t in tau()) {
        let a = eval_jet(&e, t).unwrap();
        let b = eval_jet_on_sheet(&e, t.norm(), t.arg()).unwrap();
        let scale = 1.0 + a.val.norm() + a.d1.norm() + a.d2.norm();
        prop_assert!((a.val - b.val).norm() + (a.d1 - b.d1).norm() + (a.d2 - b.d2).norm() < 1e-12 * scale);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn routes_agree(e in smooth_expression(), t in tau()) {
        let j = eval_jet(&e, t).unwrap();
        prop_assume!(j.d1.norm() > 1e-3);
        let a = bianchi_calo_point(&j, t).unwrap();
        let w = small_matrix(&j, t).unwrap();
        let b = to_upper_half_space(&w).unwrap();
        prop_assert!(a.distance(b) < 1e-9 * (1.0 + a.to_vec().norm()), "{a:?} vs {b:?}");
        prop_assert!((w.det() - 1.0).norm() < 1e-10);
        let flipped = to_upper_half_space(&small_matrix_with_root(&j, t, -j.d1.sqrt())).unwrap();
        prop_assert_eq!(flipped, b);
    }

    /// `D = |f′ + ½ f″ τ|² + ¼|f″|²`, so `D > 0` wherever `f′ ≠ 0`, and `z = |f′|³/D`.
    #[test]
    fn denominator_is_positive_and_sets_height(e in smooth_expression(), t in tau()) {
        let j = eval_jet(&e, t).unwrap();
        prop_assume!(j.d1.norm() > 1e-3);
        let d = bicalo_denominator(&j, t);
        prop_assert!(d > 0.0);
        let p = bianchi_calo_point(&j, t).unwrap();
        prop_assert!((p.z - j.d1.norm().powi(3) / d).abs() < 1e-12 * p.z.max(1.0));
        let alt = (j.d1 + 0.5 * j.d2 * t).norm_sqr() + 0.25 * j.d2.norm_sqr();
        prop_assert!((d - alt).abs() < 1e-10 * d.max(1.0), "{d} vs {alt}");
    }
}
