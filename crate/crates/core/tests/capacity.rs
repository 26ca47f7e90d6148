use bicyclic::capacity::{
    bump_profile, cofactor_experiment, decay_fit, direct_energy, fourier_coefficients, noncyclicity_certificate,
    riesz_energy, CurveMeasure, FourierTable, MeasureChoice, Trend,
};
use bicyclic::curvegeom::{fa_m, fa_polynomial};
use bicyclic::{Error, Poly2};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const CUTOFFS: [usize; 5] = [8, 16, 32, 64, 128];

fn diagonal_line() -> Poly2 {
    Poly2::from_real_terms(&[(0, 0, 1.0), (1, 1, 1.0)])
}

fn horizontal_line() -> Poly2 {
    Poly2::from_real_terms(&[(0, 0, 1.0), (0, 1, -1.0)])
}

fn fa_bump(nodes: usize) -> CurveMeasure {
    let z2 = Complex64::from_polar(1.0, fa_m(0.5, PI / 2.0));
    CurveMeasure::bump(&fa_polynomial(0.5), PI / 2.0, z2, 1.0, nodes).unwrap()
}

fn line_table(k: usize) -> FourierTable {
    fourier_coefficients(&CurveMeasure::uniform_closed(&diagonal_line(), 8 * k).unwrap(), k).unwrap()
}

fn assert_conjugate_symmetric(t: &FourierTable) {
    let k = t.k_max as i64;
    for a in -k..=k {
        for b in -k..=k {
            assert_eq!(t.get(-a, -b), t.get(a, b).conj());
        }
    }
    assert!((t.get(0, 0) - ONE).norm() < 1e-14);
}

#[test]
fn line_measure_coefficients_are_exact() {
    let t = line_table(64);
    for k in -64i64..=64 {
        for l in -64i64..=64 {
            let want = if k == l {
                Complex64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            assert!((t.get(k, l) - want).norm() <= 1e-12, "({k},{l})");
        }
    }
    assert_conjugate_symmetric(&t);
    let fit = decay_fit(&t, 10, 2.0).unwrap();
    assert!(fit.slope.abs() < 1e-10);
    assert!(fit.shells.iter().all(|s| (s.max_modulus - 1.0).abs() < 1e-12));
}

#[test]
fn resolution_is_enforced() {
    let mu = CurveMeasure::uniform_closed(&diagonal_line(), 256).unwrap();
    assert!(matches!(fourier_coefficients(&mu, 64), Err(Error::Resolution(_))));
    assert!(matches!(decay_fit(&fourier_coefficients(&mu, 16).unwrap(), 4, 2.0), Err(Error::Resolution(_))));
}

#[test]
fn bump_measure_is_normalized_and_spectrally_accurate() {
    // integral of exp(-1/(1-s^2)) over [-1, 1]
    let bump_integral = 0.443_993_816_168_079_4;
    let mu = fa_bump(1024);
    assert!((mu.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    assert!((mu.raw_mass - bump_integral).abs() < 1e-10);
    assert_eq!(bump_profile(1.0), 0.0);

    let coarse = fourier_coefficients(&mu, 8).unwrap().get(5, 3);
    let fine = fourier_coefficients(&fa_bump(2048), 8).unwrap().get(5, 3);
    assert!((coarse - fine).norm() < 1e-9);

    // independent quadrature with the closed-form phase
    let n = 4096;
    let mut oracle = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for i in 0..n {
        let t = PI / 2.0 - 1.0 + 2.0 * (i as f64 + 0.5) / n as f64;
        let w = bump_profile(t - PI / 2.0);
        mass += w;
        oracle += Complex64::from_polar(w, -(5.0 * t + 3.0 * fa_m(0.5, t)));
    }
    assert!((coarse - oracle / mass).norm() < 1e-9);
    assert_conjugate_symmetric(&fourier_coefficients(&mu, 64).unwrap());
}

#[test]
fn fa_bump_decay_statistic_is_stable() {
    let s64 = decay_fit(&fourier_coefficients(&fa_bump(512), 64).unwrap(), 10, 2.0).unwrap();
    let s128 = decay_fit(&fourier_coefficients(&fa_bump(1024), 128).unwrap(), 10, 2.0).unwrap();
    let ratio = s128.bound_statistic / s64.bound_statistic;
    assert!((0.8..=1.2).contains(&ratio), "{ratio}");
    assert!(s128.slope < 0.0);
    // the type-2 bound |mu| <= C R^(-1/2) with C the bound statistic
    for s in &s128.shells {
        assert!(s.max_modulus <= s128.bound_statistic * (s.radius as f64).powf(-0.5) + 1e-15);
    }
}

#[test]
fn horizontal_bump_reduces_to_one_dimension() {
    let mu = CurveMeasure::bump(&horizontal_line(), 1.0, ONE, 1.0, 512).unwrap();
    let t = fourier_coefficients(&mu, 32).unwrap();
    let n = 4096;
    for k in -32i64..=32 {
        let mut psi_hat = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for i in 0..n {
            let x = 2.0 * (i as f64 + 0.5) / n as f64 - 1.0;
            let w = bump_profile(x);
            mass += w;
            psi_hat += Complex64::from_polar(w, -(k as f64) * (1.0 + x));
        }
        psi_hat /= mass;
        for l in -32i64..=32 {
            assert!((t.get(k, l) - psi_hat).norm() < 1e-10, "({k},{l})");
        }
    }
    // constant along the l-axis
    assert!((0..=32).all(|l| (t.get(0, l) - ONE).norm() < 1e-12));
}

#[test]
fn energy_verdicts_follow_the_p_series() {
    let diag = line_table(128);
    let r = riesz_energy(&diag, 0.75, &CUTOFFS).unwrap();
    assert_eq!(r.verdict, Trend::ConvergentTrend);
    assert!(r.trend.ratios.iter().all(|q| (q - 2f64.powf(-0.5)).abs() < 0.03));
    assert_eq!(riesz_energy(&diag, 0.4, &CUTOFFS).unwrap().verdict, Trend::DivergentTrend);

    // oracle: 1 + 1/2 sum_{k=1}^{K} k^(-2 alpha)
    for (i, &c) in CUTOFFS.iter().enumerate() {
        let want = 1.0 + 0.5 * (1..=c).map(|k| (k as f64).powf(-1.5)).sum::<f64>();
        assert!((r.partial_sums[i] - want).abs() < 1e-10);
    }

    let horiz = fourier_coefficients(&CurveMeasure::uniform_closed(&horizontal_line(), 1024).unwrap(), 128).unwrap();
    for k in 1..=128 {
        assert!(horiz.get(k, 0).norm() < 1e-12 && (horiz.get(0, k) - ONE).norm() < 1e-12);
    }
    let h = riesz_energy(&horiz, 0.9, &CUTOFFS).unwrap();
    assert_eq!(h.verdict, Trend::DivergentTrend);
    assert!(h.tail_slope > 0.0);

    assert!(riesz_energy(&diag, 0.0, &CUTOFFS).is_err());
    assert!(riesz_energy(&diag, 1.2, &CUTOFFS).is_err());
    assert!(riesz_energy(&diag, 0.5, &[8, 256]).is_err());
}

#[test]
fn convergent_verdicts_survive_doubling_k() {
    let bump = fa_bump(1024);
    for alpha in [0.6, 0.75, 0.9, 1.0] {
        let small = riesz_energy(&fourier_coefficients(&bump, 64).unwrap(), alpha, &CUTOFFS[..4]).unwrap();
        let large = riesz_energy(&fourier_coefficients(&bump, 128).unwrap(), alpha, &CUTOFFS).unwrap();
        if small.verdict == Trend::ConvergentTrend {
            assert_eq!(large.verdict, Trend::ConvergentTrend, "alpha={alpha}");
        }
        assert!(large.partial_sums.windows(2).all(|w| w[1] >= w[0]));
    }
}

#[test]
fn direct_energy_tracks_the_half_threshold() {
    let e = |n: usize, alpha: f64| {
        direct_energy(&CurveMeasure::uniform_closed(&diagonal_line(), n).unwrap(), alpha).unwrap()
    };
    // above 1/2 the diagonal-omitted sums settle, below they keep growing
    assert!(e(512, 0.75) / e(256, 0.75) < 1.03);
    assert!(e(512, 0.4) / e(256, 0.4) > 1.1);
    assert!(e(128, 1.0).is_finite());
}

#[test]
fn certificates() {
    let c = noncyclicity_certificate(&fa_polynomial(0.5), 0.6).unwrap();
    assert_eq!(c.measure, MeasureChoice::TypeTwoBump);
    assert_eq!(c.energy.verdict, Trend::ConvergentTrend);
    assert!(c.noncyclic_evidence);

    let line = noncyclicity_certificate(&diagonal_line(), 0.75).unwrap();
    assert_eq!(line.measure, MeasureChoice::UniformLine);
    assert_eq!(line.energy.verdict, Trend::ConvergentTrend);
    let low = noncyclicity_certificate(&diagonal_line(), 0.4).unwrap();
    assert_eq!(low.energy.verdict, Trend::DivergentTrend);
    assert!(!low.noncyclic_evidence);

    let two = Poly2::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
    assert!(matches!(noncyclicity_certificate(&two, 0.75), Err(Error::NotACurve)));
}

#[test]
fn cofactor_experiment_on_a_single_torus_zero() {
    let f = Poly2::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
    let zeros = [[ONE, ONE]];
    let sups: Vec<f64> =
        [256, 512, 1024].iter().map(|&g| cofactor_experiment(&f, &zeros, 1, 1, g).unwrap().sup_norm).collect();
    for w in sups.windows(2) {
        assert!((0.9..=1.1).contains(&(w[1] / w[0])));
    }
    for g in [256, 512, 1024] {
        let r = cofactor_experiment(&f, &zeros, 1, 4, g).unwrap();
        let beta2 = &r.weighted_sums[1];
        assert_eq!(beta2.beta, 2.0);
        assert_eq!(beta2.verdict, Trend::ConvergentTrend);
        for ws in &r.weighted_sums {
            assert!(ws.partial_sums.windows(2).all(|w| w[1] >= w[0]));
        }
    }
    assert!(matches!(cofactor_experiment(&f, &[], 1, 1, 256), Err(Error::InconsistentZeros { .. })));
    assert!(cofactor_experiment(&f, &zeros, 1, 1, 300).is_err());

    let smooth = Poly2::from_real_terms(&[(0, 0, 3.0), (1, 0, 1.0), (0, 1, 1.0)]);
    let r = cofactor_experiment(&smooth, &[], 0, 1, 256).unwrap();
    assert!(r.weighted_sums.iter().all(|w| w.verdict == Trend::ConvergentTrend));
    assert!((r.sup_norm - 1.0).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn bump_tables_are_symmetric_probability_transforms(a in 0.1f64..0.9, center in 0.3f64..2.8, hw in 0.2f64..0.9) {
        let f = fa_polynomial(a);
        let z2 = Complex64::from_polar(1.0, fa_m(a, center));
        let mu = CurveMeasure::bump(&f, center, z2, hw, 512).unwrap();
        let t = fourier_coefficients(&mu, 32).unwrap();
        prop_assert!((t.get(0, 0) - ONE).norm() < 1e-12);
        for k in -32i64..=32 {
            for l in -32i64..=32 {
                prop_assert_eq!(t.get(-k, -l), t.get(k, l).conj());
                prop_assert!(t.get(k, l).norm() <= 1.0 + 1e-12);
            }
        }
        let r = riesz_energy(&t, 0.7, &[4, 8, 16, 32]).unwrap();
        prop_assert!(r.partial_sums.windows(2).all(|w| w[1] >= w[0]));
    }
}
