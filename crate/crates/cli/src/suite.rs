//! The bundled example suite behind `reproduce-paper`.

use crate::Output;
use bicyclic::capacity::{cofactor_experiment, CofactorReport, Trend};
use bicyclic::classifier::{classify_with_evidence, CyclicityVerdict, Threshold};
use bicyclic::curvegeom::{curve_type_at, fa_polynomial, trace_branch, TypeReport, DEFAULT_MAX_ORDER};
use bicyclic::dataset::bundled_dataset;
use bicyclic::detrep::{haar_unitary, polynomial_from_unitary, unitary_from_pair, verify_agler_identity, DetRep};
use bicyclic::stability::bidisk_zero_scan;
use bicyclic::Poly2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::PI;

pub const SUITE_ALPHAS: [f64; 3] = [0.25, 0.75, 1.0];
pub const SUITE_CAPS: [usize; 5] = [0, 2, 4, 8, 12];

pub struct Example {
    pub name: &'static str,
    pub factors: Vec<Poly2>,
    pub expected: Threshold,
}

fn p(terms: &[(usize, usize, f64)]) -> Poly2 {
    Poly2::from_real_terms(terms)
}

pub fn examples() -> Vec<Example> {
    use Threshold::*;
    let ex = |name, factors, expected| Example { name, factors, expected };
    vec![
        ex("z1 - 1", vec![p(&[(0, 0, -1.0), (1, 0, 1.0)])], CyclicIffAlphaLeqOne),
        ex("2 - z1 - z2", vec![p(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)])], CyclicIffAlphaLeqOne),
        ex("1 - z1 z2", vec![p(&[(0, 0, 1.0), (1, 1, -1.0)])], CyclicIffAlphaLeqHalf),
        ex("1 + z1 z2", vec![p(&[(0, 0, 1.0), (1, 1, 1.0)])], CyclicIffAlphaLeqHalf),
        ex("f_a, a = 0.25", vec![fa_polynomial(0.25)], CyclicIffAlphaLeqHalf),
        ex("f_a, a = 0.5", vec![fa_polynomial(0.5)], CyclicIffAlphaLeqHalf),
        ex("f_a, a = 0.75", vec![fa_polynomial(0.75)], CyclicIffAlphaLeqHalf),
        ex(
            "(1 - z1)(1 - z2)",
            vec![p(&[(0, 0, 1.0), (1, 0, -1.0)]), p(&[(0, 0, 1.0), (0, 1, -1.0)])],
            CyclicIffAlphaLeqOne,
        ),
        ex("3 + z1 + z2", vec![p(&[(0, 0, 3.0), (1, 0, 1.0), (0, 1, 1.0)])], CyclicAllAlpha),
        ex("z1 z2", vec![p(&[(1, 1, 1.0)])], NotCyclicAnyAlpha),
    ]
}

#[derive(Serialize)]
struct ExampleReport {
    name: &'static str,
    factors: Vec<String>,
    expected: Threshold,
    matches: bool,
    verdict: CyclicityVerdict,
}

#[derive(Serialize)]
struct SummaryRow {
    example: &'static str,
    expected: Threshold,
    threshold: Threshold,
    matches: bool,
    d12_alpha_025: f64,
    d12_alpha_075: f64,
    d12_alpha_1: f64,
    energy_alpha_075: String,
    disagreements: usize,
}

#[derive(Serialize)]
struct AglerCheck {
    name: String,
    identity_residual: f64,
    regeneration_residual: f64,
    fit_residual: f64,
}

#[derive(Serialize)]
struct RandomUnitaryCheck {
    n: usize,
    m: usize,
    polynomial: Poly2,
    zero_in_open_bidisk: bool,
    reflection_symmetric: bool,
}

#[derive(Serialize)]
struct SuiteReport {
    seed: u64,
    alphas: Vec<f64>,
    degree_caps: Vec<usize>,
    all_match: bool,
    examples: Vec<ExampleReport>,
    curve_types: Vec<TypeReport>,
    cofactor: Vec<CofactorReport>,
    agler_pairs: Vec<AglerCheck>,
    random_unitaries: Vec<RandomUnitaryCheck>,
}

pub fn reproduce(seed: u64, out: &Output) -> anyhow::Result<i32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for ex in examples() {
        let verdict = classify_with_evidence(&ex.factors, &SUITE_ALPHAS, &SUITE_CAPS)?;
        let last_distance = |i: usize| verdict.evidence[i].profile.last().map_or(f64::NAN, |r| r.distance);
        let energy =
            verdict.evidence[1].certificate.as_ref().map_or("-".to_string(), |c| format!("{:?}", c.energy.verdict));
        rows.push(SummaryRow {
            example: ex.name,
            expected: ex.expected,
            threshold: verdict.threshold,
            matches: verdict.threshold == ex.expected,
            d12_alpha_025: last_distance(0),
            d12_alpha_075: last_distance(1),
            d12_alpha_1: last_distance(2),
            energy_alpha_075: energy,
            disagreements: verdict.evidence.iter().map(|e| e.disagreements.len()).sum(),
        });
        reports.push(ExampleReport {
            name: ex.name,
            factors: ex.factors.iter().map(|f| f.to_string()).collect(),
            expected: ex.expected,
            matches: verdict.threshold == ex.expected,
            verdict,
        });
    }

    let fa = fa_polynomial(0.5);
    let branch = trace_branch(&fa, (-PI, PI), 512)?;
    let curve_types =
        vec![curve_type_at(&branch, PI / 2.0, DEFAULT_MAX_ORDER)?, curve_type_at(&branch, 0.0, DEFAULT_MAX_ORDER)?];

    let one = Complex64::new(1.0, 0.0);
    let diag = p(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
    let cofactor = [256, 512]
        .iter()
        .map(|&g| cofactor_experiment(&diag, &[[one, one]], 1, 4, g))
        .collect::<Result<Vec<_>, _>>()?;

    let mut agler_pairs = Vec::new();
    for entry in bundled_dataset() {
        let pair = entry.pair();
        let identity_residual = verify_agler_identity(&entry.f, &pair, 64, &mut rng)?;
        let fit = unitary_from_pair(&entry.f, &pair, 32)?;
        agler_pairs.push(AglerCheck {
            name: entry.name.clone(),
            identity_residual,
            regeneration_residual: fit.regeneration_residual,
            fit_residual: fit.fit_residual,
        });
    }

    let mut random_unitaries = Vec::new();
    for size in 2..=4 {
        let n = rng.random_range(1..size);
        let u = haar_unitary(size, &mut rng);
        let f = polynomial_from_unitary(&DetRep::new(one, u, n, size - n)?)?;
        let scan = bidisk_zero_scan(&f, 16, 32)?;
        random_unitaries.push(RandomUnitaryCheck {
            n,
            m: size - n,
            reflection_symmetric: f.unimodular_reflection_match(1e-9).matches,
            zero_in_open_bidisk: scan.has_zero_in_open_bidisk,
            polynomial: f,
        });
    }

    let all_match = rows.iter().all(|r| r.matches);
    let report = SuiteReport {
        seed,
        alphas: SUITE_ALPHAS.to_vec(),
        degree_caps: SUITE_CAPS.to_vec(),
        all_match,
        examples: reports,
        curve_types,
        cofactor,
        agler_pairs,
        random_unitaries,
    };
    out.json("reproduce", &report)?;
    out.csv("summary", &rows)?;

    println!(
        "{:<18} {:<22} {:<22} {:>9} {:>9} {:>9}  energy(0.75)",
        "example", "expected", "threshold", "d12(.25)", "d12(.75)", "d12(1)"
    );
    for r in &rows {
        println!(
            "{:<18} {:<22} {:<22} {:>9.5} {:>9.5} {:>9.5}  {}{}",
            r.example,
            format!("{:?}", r.expected),
            format!("{:?}", r.threshold),
            r.d12_alpha_025,
            r.d12_alpha_075,
            r.d12_alpha_1,
            r.energy_alpha_075,
            if r.matches { "" } else { "  MISMATCH" }
        );
    }
    let convergent = report.cofactor.iter().all(|c| c.weighted_sums[1].verdict == Trend::ConvergentTrend);
    println!("cofactor (2 - z1 - z2, q = 1, N = 4): beta = 2 sums convergent on all grids: {convergent}");
    Ok(if all_match { 0 } else { 1 })
}
