use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;
use zetaspec::asymptotic_engine::{
    asymptotic_series, borel_compare, hankel_quadrature, HankelContour, Truncation,
};
use zetaspec::biorthogonality::{regularized_inner_z, DualState};
use zetaspec::operator_engine::{
    adjoint_eigen_residual, apply_delta, apply_delta_adjoint, apply_eta, apply_rho_sin,
    metric_residual, AnalyticFunction, GridSpec,
};
use zetaspec::report::VerificationReport;
use zetaspec::special_fn::{
    bernoulli_polynomial_exact, hurwitz_zeta, hurwitz_zeta_estimate, riemann_zeta,
    EulerMaclaurinParams,
};
use zetaspec::spectral_checks::{bk_quantization_residual, pt_pairing, renormalized_expectation};
use zetaspec::zero_finder::{boundary_condition_residual, eigenvalue};

fn params() -> EulerMaclaurinParams {
    EulerMaclaurinParams::default()
}

fn away_from_poles(z: Complex64) -> bool {
    (z - 1.0).norm() > 0.1 && (z - 2.0).norm() > 0.1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hurwitz_shift_identity(re in -1.0f64..3.0, im in -50.0f64..50.0, a in 0.1f64..10.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - 1.0).norm() > 1e-3);
        let lhs = hurwitz_zeta(z, a, &params()).unwrap() - hurwitz_zeta(z, a + 1.0, &params()).unwrap();
        let rhs = Complex64::new(a, 0.0).powc(-z);
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm(), "{} vs {}", lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bernoulli_difference_exact(n in 1usize..=20, p in -50i64..50, q in 1i64..20) {
        let x = BigRational::new(p.into(), q.into());
        let lhs = bernoulli_polynomial_exact(n, &(x.clone() + BigRational::one())).unwrap()
            - bernoulli_polynomial_exact(n, &x).unwrap();
        let mut pow = BigRational::one();
        for _ in 0..n - 1 {
            pow *= x.clone();
        }
        let rhs = pow * BigRational::from_integer(n.into());
        prop_assert!((lhs - rhs).is_zero());
    }

    #[test]
    fn riemann_matches_hurwitz_at_one(re in 0.05f64..0.95, im in 1.0f64..60.0) {
        let z = Complex64::new(re, im);
        let a = riemann_zeta(z).unwrap();
        let b = hurwitz_zeta(z, 1.0, &params()).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn schwarz_reflection(re in -1.0f64..3.0, im in -40.0f64..40.0, a in 0.2f64..10.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - 1.0).norm() > 1e-3);
        let v = hurwitz_zeta(z, a, &params()).unwrap();
        let w = hurwitz_zeta(z.conj(), a, &params()).unwrap();
        prop_assert!((v.conj() - w).norm() <= 1e-12 * v.norm().max(1.0));
    }

    #[test]
    fn eigenvalue_is_real_on_the_line(t in 1.0f64..300.0) {
        let e = eigenvalue(Complex64::new(0.5, t));
        prop_assert!(e.im.abs() <= 1e-12 && (e.re + 2.0 * t).abs() <= 1e-12 * t);
    }

    #[test]
    fn plane_wave_symbols(k in -3.0f64..3.0, x in 1.5f64..40.0) {
        let w = AnalyticFunction::plane_wave(k);
        let f = w.eval(x).unwrap();
        let e = |s: f64| Complex64::from_polar(1.0, s);
        prop_assert!((apply_delta(&w).eval(x).unwrap() - (1.0 - e(-k)) * f).norm() <= 1e-12);
        prop_assert!((apply_delta_adjoint(&w).eval(x).unwrap() - (1.0 - e(k)) * f).norm() <= 1e-12);
        prop_assert!((apply_eta(&w).eval(x).unwrap() - (k / 2.0).sin().powi(2) * f).norm() <= 1e-12);
        prop_assert!((apply_rho_sin(&w).eval(x).unwrap() - (k / 2.0).sin() * f).norm() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Δ†Δ = 4η̂ on combinations of a plane wave and a power.
    #[test]
    fn delta_adjoint_delta_is_four_eta(
        k in 0.5f64..3.0,
        c in (-2.0f64..2.0, -2.0f64..2.0),
        re in -1.0f64..1.0,
        im in -10.0f64..10.0,
    ) {
        let z = Complex64::new(re, im);
        let c = Complex64::new(c.0, c.1);
        let wave = AnalyticFunction::plane_wave(k);
        let power = AnalyticFunction::power(z);
        let f = AnalyticFunction::new("test", move |x| Ok(wave.eval(x)? + c * power.eval(x)?));
        let lhs = apply_delta_adjoint(&apply_delta(&f));
        let rhs = apply_eta(&f);
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for x in GridSpec::linear(2.0, 30.0, 57).points() {
            let r = 4.0 * rhs.eval(x).unwrap();
            worst = worst.max((lhs.eval(x).unwrap() - r).norm());
            scale = scale.max(r.norm());
        }
        prop_assert!(worst <= 1e-12 * scale, "{} vs scale {}", worst, scale);
    }

    #[test]
    fn metric_intertwines_on_eigenfunctions(re in 0.05f64..0.95, im in 1.0f64..60.0) {
        let z = Complex64::new(re, im);
        let grid = GridSpec::logarithmic(2.0, 50.0, 40);
        prop_assert!(metric_residual(z, &grid).unwrap().max_rel <= 1e-9);
        prop_assert!(adjoint_eigen_residual(z, &grid).unwrap().max_rel <= 1e-9);
    }

    #[test]
    fn exact_derivative_matches_finite_difference(re in -1.0f64..2.0, im in -30.0f64..30.0, x in 2.0f64..40.0) {
        let z = Complex64::new(re, im);
        prop_assume!((z - 1.0).norm() > 0.1);
        for f in [AnalyticFunction::power(z), AnalyticFunction::hurwitz_eigenfunction(z), AnalyticFunction::dual_state(z)] {
            let exact = f.derivative(x).unwrap().unwrap();
            let fd = f.finite_difference(x, 1e-3 * x).unwrap();
            prop_assert!((exact - fd).norm() <= 1e-7 * exact.norm().max(1e-300), "{}: {} vs {}", f.label(), exact, fd);
        }
    }

    #[test]
    fn contour_independence(re in -1.0f64..2.0, im in -8.0f64..8.0, x in 1.0f64..50.0) {
        let z = Complex64::new(re, im);
        prop_assume!(away_from_poles(z));
        let c = HankelContour::adaptive(z, x);
        let a = hankel_quadrature(z, x, &c).unwrap().value;
        let b = hankel_quadrature(z, x, &c.refined()).unwrap().value;
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn optimal_index_grows_with_x(re in -1.0f64..2.0, im in -40.0f64..40.0) {
        let z = Complex64::new(re, im);
        prop_assume!(away_from_poles(z) && (z - 3.0).norm() > 0.1);
        let idx: Vec<usize> = [10.0, 20.0, 40.0, 80.0]
            .iter()
            .map(|&x| asymptotic_series(z, x, Truncation::Auto).unwrap().optimal_index)
            .collect();
        prop_assert!(idx.windows(2).all(|w| w[0] <= w[1]), "{:?}", idx);
    }

    #[test]
    fn trivial_zero_series_is_bernoulli(n in 1usize..=8, x in 0.5f64..20.0) {
        let m = 2 * n + 1;
        let z = Complex64::new(-2.0 * n as f64, 0.0);
        let s = asymptotic_series(z, x, Truncation::Auto).unwrap();
        prop_assert!(s.terminated);
        let nonzero = s.terms.iter().filter(|t| t.norm() > 0.0).count();
        prop_assert!(nonzero <= n + 2);
        // ψ_{−2n}(x) = +B_{2n+1}(x+1)/(2n+1), evaluated exactly at the float x
        let xr = BigRational::from_float(x + 1.0).unwrap();
        let exact = bernoulli_polynomial_exact(m, &xr).unwrap() / BigRational::from_integer(m.into());
        let expect = exact.to_f64().unwrap();
        let tol = s.error_estimate.max(1e-12 * expect.abs().max(1.0));
        prop_assert!((s.sum - expect).norm() <= tol, "{} vs {}", s.sum, expect);
        // far outside the accuracy strip, so hold Hurwitz to its own estimate
        let h = hurwitz_zeta_estimate(z, x + 1.0, &params()).unwrap();
        prop_assert!((h.value + expect).norm() <= h.estimate + 1e-12);
    }

    #[test]
    fn borel_routes_agree(re in -1.0f64..2.0, im in -30.0f64..30.0, x in 10.0f64..100.0) {
        let z = Complex64::new(re, im);
        prop_assume!(away_from_poles(z));
        let b = borel_compare(z, x).unwrap();
        prop_assert!(b.consistent(), "{:?}", b);
    }

    #[test]
    fn dual_state_is_forward_difference(re in -1.0f64..2.0, im in -50.0f64..50.0, x in 0.1f64..50.0) {
        let z = Complex64::new(re, im);
        let a = DualState::new(z).eval(x).unwrap();
        let b = apply_delta_adjoint(&AnalyticFunction::power(z)).eval(x).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * a.norm().max(1.0));
    }

    #[test]
    fn inner_product_closed_form(tm in 10.0f64..60.0, tn in 10.0f64..60.0, log_l in 1.0f64..12.0) {
        let lambda = log_l.exp();
        let r = regularized_inner_z(1, Complex64::new(0.5, tm), 2, Complex64::new(0.5, tn), lambda).unwrap();
        let alpha = tm - tn;
        let expect = if alpha == 0.0 { 2.0 * log_l } else { 2.0 * (alpha * log_l).sin() / alpha };
        prop_assert!((r.value - expect).norm() <= 1e-10);
        prop_assert!(r.value.norm() <= 2.0 / alpha.abs() + 1e-10);
        let d = regularized_inner_z(1, Complex64::new(0.5, tm), 1, Complex64::new(0.5, tm), lambda).unwrap();
        prop_assert!((d.value.re / log_l - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn pt_defect_vanishes_on_the_line(t in 1.0f64..100.0) {
        let r = pt_pairing(&[Complex64::new(0.5, t)]).unwrap();
        prop_assert!(r[0].pure_imag_defect <= 1e-10);
        prop_assert!((r[0].partner - Complex64::new(0.5, t)).norm() == 0.0);
    }

    #[test]
    fn quantization_views_agree(re in 0.1f64..0.9, im in 1.0f64..50.0) {
        let z = Complex64::new(re, im);
        let a = bk_quantization_residual(z).unwrap();
        let b = boundary_condition_residual(z).unwrap();
        prop_assert!((a - b).abs() <= 1e-12, "{} vs {}", a, b);
    }

    #[test]
    fn expectation_matches_closed_form(t in 1.0f64..100.0, log_l in 0.7f64..13.8) {
        let r = renormalized_expectation(Complex64::new(0.5, t), log_l.exp()).unwrap();
        prop_assert!(r.quadrature_deviation() <= 1e-10);
    }

    #[test]
    fn report_pass_iff_metrics_within_tolerance(m in proptest::collection::vec(0.0f64..2.0, 0..6), tol in 0.01f64..2.0) {
        let named: Vec<(String, f64)> = m.iter().enumerate().map(|(i, v)| (format!("m{i}"), *v)).collect();
        let refs: Vec<(&str, f64)> = named.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        let r = VerificationReport::new("x", "a", &[], &refs, tol);
        prop_assert_eq!(r.pass, m.iter().all(|v| *v <= tol));
    }
}
