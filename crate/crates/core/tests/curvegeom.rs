use bicyclic::curvegeom::{
    curve_type_at, fa_closed_form_branch, fa_m, fa_m1, fa_m2, fa_polynomial, mobius_retype, trace_branch,
    trace_branch_from, unimodular_roots_at, BranchSource, CurveBranch, Tau, DEFAULT_MAX_ORDER,
};
use bicyclic::{Error, Poly2};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

fn wrapped_diff(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Five-point central differences of the traced `m`, one Richardson step.
fn fd_first_second(branch: &CurveBranch, t: f64) -> (f64, f64) {
    let m = |s: f64| branch.m_at(s).unwrap();
    let d1 = |h: f64| (-m(t + 2.0 * h) + 8.0 * m(t + h) - 8.0 * m(t - h) + m(t - 2.0 * h)) / (12.0 * h);
    let d2 =
        |h: f64| (-m(t + 2.0 * h) + 16.0 * m(t + h) - 30.0 * m(t) + 16.0 * m(t - h) - m(t - 2.0 * h)) / (12.0 * h * h);
    let h = 1e-2;
    ((16.0 * d1(h / 2.0) - d1(h)) / 15.0, (16.0 * d2(h / 2.0) - d2(h)) / 15.0)
}

#[test]
fn lines_trace_exactly() {
    let plus = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 1, 1.0)]);
    let b = trace_branch(&plus, (0.0, TAU), 256).unwrap();
    assert_eq!(b.source, BranchSource::Traced);
    for (t, m, m1, m2) in b.rows() {
        assert!(wrapped_diff(m, PI - t, TAU) < 1e-12);
        assert!((m1 + 1.0).abs() < 1e-12 && m2.abs() < 1e-12);
    }
    let minus = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 1, -1.0)]);
    let b = trace_branch(&minus, (0.0, TAU), 256).unwrap();
    for (t, m, _, _) in b.rows() {
        assert!(wrapped_diff(m, -t, TAU) < 1e-12);
    }
    assert!(b.is_closed_full_turn());
}

#[test]
fn fa_trace_matches_closed_form() {
    let a = 0.5;
    let f = fa_polynomial(a);
    let traced = trace_branch(&f, (0.0, TAU), 512).unwrap();
    let closed = fa_closed_form_branch(a, (0.0, TAU), 512).unwrap();
    assert_eq!(closed.source, BranchSource::ClosedForm);
    let scale = f.max_abs();
    for i in 0..512 {
        let t = traced.parameter_grid[i];
        let m = traced.values[i];
        assert!(wrapped_diff(m, closed.values[i], TAU) < 1e-8);
        assert!((traced.first[i] - closed.first[i]).abs() < 1e-8);
        assert!(traced.first[i] < 0.0);
        // the arctan display agrees with the branch up to a half turn
        let display = PI + ((1.0 - a * a) * t.sin() / (2.0 * a - (1.0 + a * a) * t.cos())).atan();
        assert!(wrapped_diff(m, display, PI) < 1e-8);

        let z1 = Complex64::from_polar(1.0, t);
        let z2 = Complex64::from_polar(1.0, m);
        assert!(f.evaluate(z1, z2).norm() <= 1e-8 * scale);
    }
    // nondecreasing t, decreasing m along the unwrapped branch
    assert!(traced.values.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn finite_differences_agree_with_closed_form() {
    let a = 0.5;
    let traced = trace_branch(&fa_polynomial(a), (0.0, TAU), 512).unwrap();
    for i in (0..512).step_by(4) {
        let t = traced.parameter_grid[i];
        let (d1, d2) = fd_first_second(&traced, t);
        assert!((d1 - fa_m1(a, t)).abs() <= 1e-6, "t={t}: {d1} vs {}", fa_m1(a, t));
        assert!((d2 - fa_m2(a, t)).abs() <= 1e-6, "t={t}: {d2} vs {}", fa_m2(a, t));
    }
}

#[test]
fn fa_types() {
    let f = fa_polynomial(0.5);
    let b = trace_branch(&f, (-PI, PI), 512).unwrap();
    let r = curve_type_at(&b, PI / 2.0, DEFAULT_MAX_ORDER).unwrap();
    assert_eq!(r.tau, Tau::Finite(2));
    assert!((r.derivative_values[1] - 0.48).abs() < 1e-12);
    let r = curve_type_at(&b, 0.0, DEFAULT_MAX_ORDER).unwrap();
    assert_eq!(r.tau, Tau::Finite(3));
    assert!((r.derivative_values[0] + 3.0).abs() < 1e-12);
    assert!((r.derivative_values[2] - 12.0).abs() < 1e-10);
    let eta = r.witness_vector;
    assert!((eta[0] * 1.0 + eta[1] * r.derivative_values[0]).abs() < 1e-14);
    assert!((eta[0].hypot(eta[1]) - 1.0).abs() < 1e-15);
}

#[test]
fn lines_have_infinite_type() {
    let f = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 1, 1.0)]);
    let b = trace_branch(&f, (0.0, TAU), 128).unwrap();
    for t in [0.0, 1.0, 3.0, 5.5] {
        assert_eq!(curve_type_at(&b, t, DEFAULT_MAX_ORDER).unwrap().tau, Tau::Infinite);
    }
}

#[test]
fn type_survives_reversing_the_parameter() {
    // zeros of z1^n f(1/z1, z2) are (e^{-it}, e^{i m(t)})
    let f = fa_polynomial(0.5);
    let (n, m) = f.bidegree();
    let terms: Vec<_> = f.terms().map(|((k, l), c)| ((n - k, l), c)).collect();
    assert_eq!(m, 1);
    let g = Poly2::from_terms(&terms);
    let bf = trace_branch(&f, (-PI, PI), 256).unwrap();
    let bg = trace_branch(&g, (-PI, PI), 256).unwrap();
    for t in [0.0, 0.3, PI / 2.0, -2.0] {
        let tf = curve_type_at(&bf, t, DEFAULT_MAX_ORDER).unwrap().tau;
        let tg = curve_type_at(&bg, -t, DEFAULT_MAX_ORDER).unwrap().tau;
        assert_eq!(tf, tg, "t={t}");
    }
}

#[test]
fn mobius_retype_reaches_type_two() {
    let line = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 1, 1.0)]);
    let a = Complex64::new(0.3, 0.4);
    let res = mobius_retype(&line, 0.0, &[a]).unwrap();
    assert_eq!(res.report.tau, Tau::Finite(2));
    assert_eq!(res.params.a(), a);

    // finite-difference oracle on the transformed branch
    let t1 = res.report.point;
    let start = t1 - 0.3;
    let target = res.report.z[1];
    let seed = *unimodular_roots_at(&res.g, start)
        .iter()
        .min_by(|x, y| (*x - target).norm().total_cmp(&(*y - target).norm()))
        .unwrap();
    let branch = trace_branch_from(&res.g, (start, t1 + 0.3), 64, seed).unwrap();
    let (d1, d2) = fd_first_second(&branch, t1);
    assert!((d1 - res.report.derivative_values[0]).abs() < 1e-6);
    assert!((d2 - res.report.derivative_values[1]).abs() < 1e-6);
    assert!(d2.abs() > 1e-3);

    let err = mobius_retype(&line, 0.0, &[Complex64::new(0.5, 0.0)]).unwrap_err();
    assert!(matches!(err, Error::RetypeFailed(_)));

    let fa = fa_polynomial(0.5);
    let res = mobius_retype(&fa, PI / 2.0, &[a]).unwrap();
    assert_eq!(res.params.a(), Complex64::new(0.0, 0.0));
    assert_eq!(res.report.tau, Tau::Finite(2));
}

#[test]
fn tracing_failures_are_reported() {
    let none = Poly2::from_real_terms(&[(0, 0, 3.0), (1, 0, 1.0), (0, 1, 1.0)]);
    assert!(matches!(trace_branch(&none, (0.0, 1.0), 16), Err(Error::BranchLost { .. })));
    // (z2 - z1)^2: every slice has a double root on the circle
    let double = Poly2::from_real_terms(&[(2, 0, 1.0), (1, 1, -2.0), (0, 2, 1.0)]);
    assert!(matches!(trace_branch(&double, (0.0, 1.0), 16), Err(Error::BranchAmbiguity { .. })));
    assert!(fa_closed_form_branch(1.5, (0.0, 1.0), 8).is_err());
    let _ = fa_m(0.5, 0.0);
}
