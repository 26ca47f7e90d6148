//! Command-line front end. Every subcommand reads polynomials in the JSON
//! layout of [`Poly2`] and writes a JSON report plus plot-ready CSV files
//! into the output directory.

mod output;
mod suite;

use anyhow::{anyhow, bail, Context};
use bicyclic::capacity::{
    cofactor_experiment, decay_fit, fourier_coefficients, noncyclicity_certificate, riesz_energy, CurveMeasure,
    DecayFit, EnergyReport, FourierTable, Window,
};
use bicyclic::classifier::{classify, classify_with_evidence, CyclicityVerdict, Threshold};
use bicyclic::curvegeom::{curve_type_at, mobius_retype, trace_branch, unimodular_roots_at, DEFAULT_MAX_ORDER};
use bicyclic::detrep::{haar_unitary, polynomial_from_unitary, DetRep};
use bicyclic::dirichlet::{distance_profile, optimal_approximant, AlphaSpace, ProfileRow};
use bicyclic::stability::{
    bidisk_zero_scan, classify_torus_zeros, TorusZeroKind, DEFAULT_ANGULAR_STEPS, DEFAULT_RADIAL_STEPS,
};
use bicyclic::Poly2;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

pub use output::Output;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "BICYCLIC_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bicyclic", version, about = "Cyclicity of polynomials in Dirichlet-type spaces on the bidisk")]
pub struct Cli {
    /// Directory receiving the JSON and CSV outputs.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Seed for every random draw (torus samples, random unitaries).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cyclicity threshold of a product of irreducible factors.
    Classify(ClassifyArgs),
    /// Optimal approximants and the distance profile d_N.
    Approximant(ApproximantArgs),
    /// Polynomial from a unitary determinantal representation.
    Detgen(DetgenArgs),
    /// Bidisk zero scan and torus zero trichotomy.
    TorusZeros(PolyArg),
    /// Type of the torus zero curve at a parameter value.
    CurveType(CurveTypeArgs),
    /// Fourier coefficients of a measure on the torus zero curve.
    Fourier(FourierArgs),
    /// Truncated Riesz energies of a curve measure.
    Energy(EnergyArgs),
    /// Energy-based non-cyclicity evidence for a curve factor.
    Certificate(CertificateArgs),
    /// Fourier sums of Q0^N / f around finitely many torus zeros.
    Cofactor(CofactorArgs),
    /// Runs the bundled example suite and writes a summary table.
    ReproducePaper,
}

#[derive(Args, Debug)]
pub struct PolyArg {
    /// Polynomial JSON file.
    #[arg(long)]
    pub poly: PathBuf,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    /// JSON file with one polynomial or an array of factors; repeatable.
    #[arg(long, required = true, num_args = 1..)]
    pub factors: Vec<PathBuf>,
    /// Exponents at which to attach numerical evidence.
    #[arg(long, num_args = 1..)]
    pub alpha: Vec<f64>,
    #[arg(long, num_args = 1.., default_values_t = [0usize, 2, 4, 8, 12])]
    pub caps: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct ApproximantArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long, required = true, num_args = 1..)]
    pub alpha: Vec<f64>,
    #[arg(long, num_args = 1.., default_values_t = [0usize, 2, 4, 8, 12])]
    pub caps: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct DetgenArgs {
    /// Block sizes n and m.
    #[arg(long, num_args = 2, value_names = ["N", "M"])]
    pub size: Vec<usize>,
    /// Representation JSON `{"c", "n", "m", "u"}`; a Haar random unitary with c = 1 when absent.
    #[arg(long)]
    pub unitary: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CurveTypeArgs {
    #[arg(long)]
    pub poly: PathBuf,
    /// Parameter of the first coordinate, `z1 = e^{it}`.
    #[arg(long, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    pub max_order: usize,
    /// Möbius parameters `re,im` to try when the point is not of type 2.
    #[arg(long, num_args = 1.., value_parser = parse_complex)]
    pub retype: Vec<Complex64>,
}

#[derive(Args, Debug, Clone)]
pub struct MeasureArgs {
    #[arg(long)]
    pub poly: PathBuf,
    /// Uniform measure over a full turn of a closed branch.
    #[arg(long, conflicts_with = "bump_center")]
    pub uniform_line: bool,
    /// Center of a bump window in the first coordinate's angle.
    #[arg(long, allow_hyphen_values = true)]
    pub bump_center: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    /// Quadrature nodes; defaults to 8 K.
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long = "K", default_value_t = 64)]
    pub k: usize,
    /// Type used for the decay bound statistic.
    #[arg(long, default_value_t = 2.0)]
    pub tau: f64,
    #[arg(long, default_value_t = 10)]
    pub shells: usize,
}

#[derive(Args, Debug)]
pub struct EnergyArgs {
    #[command(flatten)]
    pub measure: MeasureArgs,
    #[arg(long = "K", default_value_t = 128)]
    pub k: usize,
    #[arg(long, required = true, num_args = 1..)]
    pub alpha: Vec<f64>,
    /// Defaults to 8, 16, ... up to K.
    #[arg(long, num_args = 1..)]
    pub cutoffs: Vec<usize>,
}

#[derive(Args, Debug)]
pub struct CertificateArgs {
    #[arg(long)]
    pub poly: PathBuf,
    #[arg(long, required = true, num_args = 1..)]
    pub alpha: Vec<f64>,
}

#[derive(Args, Debug)]
pub struct CofactorArgs {
    #[arg(long)]
    pub poly: PathBuf,
    /// JSON list of torus zeros `[[[re, im], [re, im]], ...]`; found numerically when absent.
    #[arg(long)]
    pub zeros: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    #[arg(long = "N", default_value_t = 1)]
    pub n_power: usize,
    #[arg(long, num_args = 1.., default_values_t = [256usize, 512, 1024])]
    pub grid: Vec<usize>,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or_else(|| format!("expected re,im but got {s:?}"))?;
    let re: f64 = re.trim().parse().map_err(|e| format!("{e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("{e}"))?;
    Ok(Complex64::new(re, im))
}

/// Exit code carrying a classification threshold.
pub fn threshold_exit_code(t: Threshold) -> i32 {
    match t {
        Threshold::NotCyclicAnyAlpha => 10,
        Threshold::CyclicIffAlphaLeqHalf => 11,
        Threshold::CyclicIffAlphaLeqOne => 12,
        Threshold::CyclicAllAlpha => 13,
    }
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the process exit code: 0 on success, the threshold code for
/// `classify`, 1 for numerical or I/O failures, 2 for usage errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };
    let out = Output::new(&cli.out);
    match pool.install(|| execute(&cli, &out)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            out.error(&e);
            1
        }
    }
}

fn execute(cli: &Cli, out: &Output) -> anyhow::Result<i32> {
    out.ensure()?;
    match &cli.command {
        Command::Classify(a) => cmd_classify(a, out),
        Command::Approximant(a) => cmd_approximant(a, out),
        Command::Detgen(a) => cmd_detgen(a, cli.seed, out),
        Command::TorusZeros(a) => cmd_torus_zeros(a, out),
        Command::CurveType(a) => cmd_curve_type(a, out),
        Command::Fourier(a) => cmd_fourier(a, out),
        Command::Energy(a) => cmd_energy(a, out),
        Command::Certificate(a) => cmd_certificate(a, out),
        Command::Cofactor(a) => cmd_cofactor(a, out),
        Command::ReproducePaper => suite::reproduce(cli.seed, out),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PolyFile {
    One(Poly2),
    Many(Vec<Poly2>),
}

pub fn load_polys(path: &Path) -> anyhow::Result<Vec<Poly2>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed: PolyFile =
        serde_json::from_str(&text).with_context(|| format!("parsing polynomial JSON in {}", path.display()))?;
    Ok(match parsed {
        PolyFile::One(p) => vec![p],
        PolyFile::Many(v) => v,
    })
}

pub fn load_poly(path: &Path) -> anyhow::Result<Poly2> {
    let mut v = load_polys(path)?;
    if v.len() != 1 {
        bail!("{} holds {} polynomials, expected one", path.display(), v.len());
    }
    Ok(v.remove(0))
}

// ---- classify -------------------------------------------------------------------

#[derive(Serialize)]
struct FactorRow {
    factor: String,
    threshold: Threshold,
    rule: String,
    torus_kind: String,
    torus_points: usize,
}

fn cmd_classify(a: &ClassifyArgs, out: &Output) -> anyhow::Result<i32> {
    let mut factors = Vec::new();
    for p in &a.factors {
        factors.extend(load_polys(p)?);
    }
    let verdict: CyclicityVerdict =
        if a.alpha.is_empty() { classify(&factors)? } else { classify_with_evidence(&factors, &a.alpha, &a.caps)? };
    out.json("verdict", &verdict)?;
    let rows: Vec<FactorRow> = verdict
        .per_factor
        .iter()
        .map(|f| FactorRow {
            factor: f.factor.to_string(),
            threshold: f.threshold,
            rule: format!("{:?}", f.rule),
            torus_kind: f.torus.as_ref().map_or("-".into(), |t| format!("{:?}", t.kind)),
            torus_points: f.torus.as_ref().map_or(0, |t| t.points.len()),
        })
        .collect();
    out.csv("factors", &rows)?;
    let profile_rows: Vec<AlphaProfileRow> =
        verdict.evidence.iter().flat_map(|e| e.profile.iter().map(move |r| AlphaProfileRow::new(e.alpha, r))).collect();
    if !profile_rows.is_empty() {
        out.csv("profile", &profile_rows)?;
    }
    println!("threshold: {:?} ({})", verdict.threshold, verdict.threshold.label());
    for e in &verdict.evidence {
        for d in &e.disagreements {
            println!("DISAGREEMENT: {d}");
        }
    }
    Ok(threshold_exit_code(verdict.threshold))
}

// ---- approximant ----------------------------------------------------------------

#[derive(Serialize)]
struct AlphaProfileRow {
    alpha: f64,
    #[serde(rename = "N")]
    degree_cap: usize,
    #[serde(rename = "d_N")]
    distance: f64,
    gram_condition: f64,
}

impl AlphaProfileRow {
    fn new(alpha: f64, r: &ProfileRow) -> Self {
        Self { alpha, degree_cap: r.degree_cap, distance: r.distance, gram_condition: r.gram_condition }
    }
}

#[derive(Serialize)]
struct ApproximantReport {
    f: Poly2,
    alpha: f64,
    profile: Vec<ProfileRow>,
    final_approximant: Poly2,
}

fn cmd_approximant(a: &ApproximantArgs, out: &Output) -> anyhow::Result<i32> {
    let f = load_poly(&a.poly)?;
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for &alpha in &a.alpha {
        let space = AlphaSpace::new(alpha);
        let profile = distance_profile(&f, space, &a.caps)?;
        let last = *a.caps.last().ok_or_else(|| anyhow!("no degree caps"))?;
        let approx = optimal_approximant(&f, space, last)?;
        rows.extend(profile.iter().map(|r| AlphaProfileRow::new(alpha, r)));
        for r in &profile {
            println!("alpha={alpha} N={} d_N={:.12}", r.degree_cap, r.distance);
        }
        reports.push(ApproximantReport { f: f.clone(), alpha, profile, final_approximant: approx.approximant });
    }
    out.json("approximant", &reports)?;
    out.csv("profile", &rows)?;
    Ok(0)
}

// ---- detgen ---------------------------------------------------------------------

#[derive(Serialize)]
struct CoeffRow {
    k: usize,
    l: usize,
    re: f64,
    im: f64,
}

fn coeff_rows(f: &Poly2) -> Vec<CoeffRow> {
    f.terms().map(|((k, l), c)| CoeffRow { k, l, re: c.re, im: c.im }).collect()
}

fn cmd_detgen(a: &DetgenArgs, seed: u64, out: &Output) -> anyhow::Result<i32> {
    let rep = match &a.unitary {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let rep: DetRep = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
            rep
        }
        None => {
            if a.size.len() != 2 {
                bail!("--size n m is required without --unitary");
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = haar_unitary(a.size[0] + a.size[1], &mut rng);
            DetRep::new(Complex64::new(1.0, 0.0), u, a.size[0], a.size[1])?
        }
    };
    if a.size.len() == 2 && (a.size[0], a.size[1]) != (rep.n, rep.m) {
        bail!("--size {} {} does not match the representation's ({}, {})", a.size[0], a.size[1], rep.n, rep.m);
    }
    let f = polynomial_from_unitary(&rep)?;
    out.json("detrep", &rep)?;
    out.json("polynomial", &f)?;
    out.csv("coefficients", &coeff_rows(&f))?;
    println!("{f}");
    Ok(0)
}

// ---- torus zeros ----------------------------------------------------------------

#[derive(Serialize)]
struct PointRow {
    t1: f64,
    t2: f64,
    z1_re: f64,
    z1_im: f64,
    z2_re: f64,
    z2_im: f64,
}

fn point_row(p: &[Complex64; 2]) -> PointRow {
    PointRow {
        t1: p[0].arg().rem_euclid(TAU),
        t2: p[1].arg().rem_euclid(TAU),
        z1_re: p[0].re,
        z1_im: p[0].im,
        z2_re: p[1].re,
        z2_im: p[1].im,
    }
}

#[derive(Serialize)]
struct CurveRow {
    t: f64,
    m: f64,
    m1: f64,
    m2: f64,
}

fn cmd_torus_zeros(a: &PolyArg, out: &Output) -> anyhow::Result<i32> {
    let f = load_poly(&a.poly)?;
    let scan = bidisk_zero_scan(&f, DEFAULT_RADIAL_STEPS, DEFAULT_ANGULAR_STEPS)?;
    let torus = if scan.has_zero_in_open_bidisk { None } else { Some(classify_torus_zeros(&f)?) };
    #[derive(Serialize)]
    struct Report<'a> {
        f: &'a Poly2,
        scan: &'a bicyclic::stability::BidiskStabilityReport,
        torus: &'a Option<bicyclic::stability::TorusZeroSet>,
    }
    out.json("torus_zeros", &Report { f: &f, scan: &scan, torus: &torus })?;
    let points: Vec<PointRow> = torus.iter().flat_map(|t| t.points.iter().map(point_row)).collect();
    out.csv("points", &points)?;
    if let Some(t) = &torus {
        if t.kind == TorusZeroKind::Curve {
            let g = oriented(&f);
            if let Ok(b) = trace_branch(&g, (0.0, TAU), 256) {
                let rows: Vec<CurveRow> = b.rows().map(|(t, m, m1, m2)| CurveRow { t, m, m1, m2 }).collect();
                out.csv("curve", &rows)?;
            }
        }
        println!("torus zeros: {:?} ({} points)", t.kind, t.points.len());
    } else {
        println!("zero in the open bidisk at {:?}", scan.witness);
    }
    Ok(0)
}

/// Swaps the variables when the torus curve is a union of circles `{zeta} x T`,
/// which are not graphs over the first coordinate.
fn oriented(f: &Poly2) -> Poly2 {
    if f.bidegree().1 == 0 {
        f.swap_variables()
    } else {
        f.clone()
    }
}

// ---- curve type -----------------------------------------------------------------

#[derive(Serialize)]
struct DerivativeRow {
    order: usize,
    m_derivative: f64,
    normal_component: f64,
    threshold: f64,
}

fn cmd_curve_type(a: &CurveTypeArgs, out: &Output) -> anyhow::Result<i32> {
    let f = load_poly(&a.poly)?;
    let report = if a.retype.is_empty() {
        // branch through the root of smallest argument above e^{it}
        let branch = trace_branch(&f, (a.t, a.t + 0.5), 64)?;
        curve_type_at(&branch, a.t, a.max_order)?
    } else {
        let res = mobius_retype(&f, a.t, &a.retype)?;
        out.json("retype", &res)?;
        res.report
    };
    out.json("curve_type", &report)?;
    let rows: Vec<DerivativeRow> = (0..report.derivative_values.len())
        .map(|i| DerivativeRow {
            order: i + 1,
            m_derivative: report.derivative_values[i],
            normal_component: report.normal_components[i],
            threshold: report.thresholds[i],
        })
        .collect();
    out.csv("derivatives", &rows)?;
    println!("tau: {:?} at t = {}", report.tau, report.point);
    Ok(0)
}

// ---- measures -------------------------------------------------------------------

fn build_measure(m: &MeasureArgs, k: usize) -> anyhow::Result<CurveMeasure> {
    let f = oriented(&load_poly(&m.poly)?);
    let nodes = m.nodes.unwrap_or(8 * k);
    match m.bump_center {
        Some(center) => {
            let z2 = unimodular_roots_at(&f, center)
                .into_iter()
                .min_by(|a, b| a.arg().rem_euclid(TAU).total_cmp(&b.arg().rem_euclid(TAU)))
                .ok_or_else(|| anyhow!("no torus zero above t = {center}"))?;
            Ok(CurveMeasure::bump(&f, center, z2, m.half_width, nodes)?)
        }
        None => Ok(CurveMeasure::uniform_closed(&f, nodes)?),
    }
}

#[derive(Serialize)]
struct FourierRow {
    k: i64,
    l: i64,
    re: f64,
    im: f64,
    abs: f64,
}

fn fourier_rows(t: &FourierTable) -> Vec<FourierRow> {
    let kk = t.k_max as i64;
    let mut rows = Vec::with_capacity(t.coeffs.len());
    for k in -kk..=kk {
        for l in -kk..=kk {
            let c = t.get(k, l);
            rows.push(FourierRow { k, l, re: c.re, im: c.im, abs: c.norm() });
        }
    }
    rows
}

#[derive(Serialize)]
struct FourierReport<'a> {
    window: Window,
    quadrature_nodes: usize,
    table: &'a FourierTable,
    decay: Option<DecayFit>,
}

fn cmd_fourier(a: &FourierArgs, out: &Output) -> anyhow::Result<i32> {
    let mu = build_measure(&a.measure, a.k)?;
    let table = fourier_coefficients(&mu, a.k)?;
    let decay = if a.k >= 32 { Some(decay_fit(&table, a.shells, a.tau)?) } else { None };
    out.json(
        "fourier",
        &FourierReport {
            window: mu.window,
            quadrature_nodes: mu.quadrature_nodes,
            table: &table,
            decay: decay.clone(),
        },
    )?;
    out.csv("fourier", &fourier_rows(&table))?;
    if let Some(d) = &decay {
        out.csv("shells", &d.shells)?;
        println!("decay slope {:.6}, bound statistic {:.6} (tau = {})", d.slope, d.bound_statistic, d.tau_claimed);
    }
    println!("mu(0,0) = {}, mu(1,1) = {}", table.get(0, 0), table.get(1, 1));
    Ok(0)
}

#[derive(Serialize)]
struct EnergyRow {
    alpha: f64,
    cutoff: usize,
    partial_sum: f64,
}

fn energy_rows(r: &EnergyReport) -> Vec<EnergyRow> {
    r.cutoffs
        .iter()
        .zip(&r.partial_sums)
        .map(|(&cutoff, &partial_sum)| EnergyRow { alpha: r.alpha, cutoff, partial_sum })
        .collect()
}

fn doubling_cutoffs(k: usize) -> Vec<usize> {
    let mut v = Vec::new();
    let mut c = 8;
    while c <= k {
        v.push(c);
        c *= 2;
    }
    v
}

fn cmd_energy(a: &EnergyArgs, out: &Output) -> anyhow::Result<i32> {
    let mu = build_measure(&a.measure, a.k)?;
    let table = fourier_coefficients(&mu, a.k)?;
    let cutoffs = if a.cutoffs.is_empty() { doubling_cutoffs(a.k) } else { a.cutoffs.clone() };
    let reports = a.alpha.iter().map(|&al| riesz_energy(&table, al, &cutoffs)).collect::<Result<Vec<_>, _>>()?;
    out.json("energy", &reports)?;
    out.csv("energy", &reports.iter().flat_map(energy_rows).collect::<Vec<_>>())?;
    for r in &reports {
        println!("alpha={} {:?} tail_slope={:.4}", r.alpha, r.verdict, r.tail_slope);
    }
    Ok(0)
}

fn cmd_certificate(a: &CertificateArgs, out: &Output) -> anyhow::Result<i32> {
    let f = load_poly(&a.poly)?;
    let certs = a.alpha.iter().map(|&al| noncyclicity_certificate(&f, al)).collect::<Result<Vec<_>, _>>()?;
    out.json("certificate", &certs)?;
    out.csv("certificate", &certs.iter().flat_map(|c| energy_rows(&c.energy)).collect::<Vec<_>>())?;
    for c in &certs {
        println!("alpha={} {:?} via {:?}", c.alpha, c.energy.verdict, c.measure);
    }
    Ok(0)
}

// ---- cofactor -------------------------------------------------------------------

#[derive(Serialize)]
struct CofactorRow {
    grid: usize,
    beta: f64,
    cutoff: usize,
    weighted_sum: f64,
    sup_norm: f64,
}

fn cmd_cofactor(a: &CofactorArgs, out: &Output) -> anyhow::Result<i32> {
    let f = load_poly(&a.poly)?;
    let zeros: Vec<[Complex64; 2]> = match &a.zeros {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing zeros in {}", path.display()))?
        }
        None => {
            let t = classify_torus_zeros(&f)?;
            if t.kind == TorusZeroKind::Curve {
                bail!("the torus zero set is a curve; the cofactor experiment needs finitely many zeros");
            }
            t.points
        }
    };
    let reports =
        a.grid.iter().map(|&g| cofactor_experiment(&f, &zeros, a.q, a.n_power, g)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for r in &reports {
        for w in &r.weighted_sums {
            for (&cutoff, &s) in r.cutoffs.iter().zip(&w.partial_sums) {
                rows.push(CofactorRow { grid: r.grid, beta: w.beta, cutoff, weighted_sum: s, sup_norm: r.sup_norm });
            }
        }
        let verdicts: Vec<String> =
            r.weighted_sums.iter().map(|w| format!("beta={} {:?}", w.beta, w.verdict)).collect();
        println!("grid={} sup={:.6} {}", r.grid, r.sup_norm, verdicts.join(", "));
    }
    out.json("cofactor", &reports)?;
    out.csv("cofactor", &rows)?;
    Ok(0)
}
