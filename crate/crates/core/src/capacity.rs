//! Smooth measures on torus zero curves, their Fourier coefficients, truncated
//! Riesz energies, and the cofactor experiment for finite torus zero sets.
//!
//! Energies use the Fourier form
//! `1 + sum |mu(k,0)|^2/k^a + sum |mu(0,l)|^2/l^a + 1/2 sum_{k != 0, l >= 1} |mu(k,l)|^2/(|k|^a l^a)`.
//! Every "verdict" here is a trend classification of partial sums under
//! doubling cutoffs, not a statement about the infinite series.

use crate::curvegeom::{
    self, curve_type_at, follow_branch, mobius_retype, trace_branch, trace_branch_from, CurveBranch, RetypeResult, Tau,
    TypeReport, DEFAULT_MAX_ORDER,
};
use crate::error::{Error, Result};
use crate::fourier;
use crate::poly2::{MobiusParams, Poly2};
use crate::stability::{classify_torus_zeros, TorusZeroKind};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Ratio of successive increments below which partial sums count as converging.
pub const CONVERGENT_RATIO: f64 = 0.9;
/// Increments below this fraction of the partial sum count as zero.
pub const NEGLIGIBLE_INCREMENT: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Window {
    /// Constant density over a full turn of a closed branch.
    Uniform,
    /// `exp(-1/(1-s^2))` with `s = (t - center)/half_width`.
    Bump { center: f64, half_width: f64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveMeasure {
    pub branch: CurveBranch,
    pub window: Window,
    /// Quadrature weights at the branch nodes, summing to one.
    pub weights: Vec<f64>,
    pub quadrature_nodes: usize,
    /// Trapezoid value of the unnormalized window integral.
    pub raw_mass: f64,
}

pub fn bump_profile(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - s * s)).exp()
    }
}

impl CurveMeasure {
    /// Uniform measure `dt / 2 pi` on a branch that closes up over a full turn.
    pub fn uniform_closed(f: &Poly2, nodes: usize) -> Result<Self> {
        let branch = trace_branch(f, (0.0, TAU), nodes)?;
        Self::uniform_on(branch)
    }

    pub fn uniform_on(branch: CurveBranch) -> Result<Self> {
        if !branch.is_closed_full_turn() {
            return Err(Error::InvalidArgument("uniform measure needs a branch closing over a full turn".into()));
        }
        let n = branch.parameter_grid.len();
        Ok(Self {
            branch,
            window: Window::Uniform,
            weights: vec![1.0 / n as f64; n],
            quadrature_nodes: n,
            raw_mass: TAU,
        })
    }

    /// Bump measure centered at the torus point `(e^{i center}, z2_center)`.
    pub fn bump(f: &Poly2, center: f64, z2_center: Complex64, half_width: f64, nodes: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width < std::f64::consts::PI) || nodes < 8 {
            return Err(Error::InvalidArgument("bump needs 0 < half_width < pi and at least 8 nodes".into()));
        }
        let start = center - half_width;
        // walk back from the center to the left end of the window
        let back: Vec<f64> = (0..=64).map(|i| center - half_width * i as f64 / 64.0).collect();
        let left = *follow_branch(f, &back, z2_center)?.last().expect("nonempty");
        let branch = trace_branch_from(f, (start, center + half_width), nodes, Complex64::from_polar(1.0, left))?;
        let step = 2.0 * half_width / nodes as f64;
        let raw: Vec<f64> = branch.parameter_grid.iter().map(|&t| bump_profile((t - center) / half_width)).collect();
        let total: f64 = raw.iter().sum();
        let weights = raw.iter().map(|w| w / total).collect();
        Ok(Self {
            branch,
            window: Window::Bump { center, half_width },
            weights,
            quadrature_nodes: nodes,
            raw_mass: total * step,
        })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierTable {
    pub k_max: usize,
    /// Row-major over `k, l = -K..=K`.
    pub coeffs: Vec<Complex64>,
}

impl FourierTable {
    pub fn get(&self, k: i64, l: i64) -> Complex64 {
        let w = 2 * self.k_max + 1;
        let kk = (k + self.k_max as i64) as usize;
        let ll = (l + self.k_max as i64) as usize;
        self.coeffs[kk * w + ll]
    }

    pub fn k_max_i(&self) -> i64 {
        self.k_max as i64
    }
}

/// `mu(k,l) = sum_i w_i exp(-i (k t_i + l m(t_i)))` for `|k|, |l| <= K`.
pub fn fourier_coefficients(mu: &CurveMeasure, k_max: usize) -> Result<FourierTable> {
    let nodes = mu.branch.parameter_grid.len();
    if nodes < 8 * k_max {
        return Err(Error::Resolution(format!(
            "{nodes} quadrature nodes cannot resolve K = {k_max}; need {}",
            8 * k_max
        )));
    }
    let w = 2 * k_max + 1;
    let kk = k_max as i64;
    let a = DMatrix::from_fn(w, nodes, |r, i| {
        let k = r as i64 - kk;
        Complex64::from_polar(mu.weights[i], -(k as f64) * mu.branch.parameter_grid[i])
    });
    let b = DMatrix::from_fn(nodes, w, |i, c| {
        let l = c as i64 - kk;
        Complex64::from_polar(1.0, -(l as f64) * mu.branch.values[i])
    });
    let prod = a * b;
    let mut coeffs = vec![ZERO; w * w];
    for r in 0..w {
        for c in 0..w {
            coeffs[r * w + c] = prod[(r, c)];
        }
    }
    // enforce mu(-k,-l) = conj(mu(k,l)) from the upper half
    for r in 0..w {
        for c in 0..w {
            let (rr, cc) = (w - 1 - r, w - 1 - c);
            if (r, c) > (rr, cc) {
                coeffs[r * w + c] = coeffs[rr * w + cc].conj();
            }
        }
    }
    let center = k_max * w + k_max;
    coeffs[center] = Complex64::new(coeffs[center].re, 0.0);
    Ok(FourierTable { k_max, coeffs })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Shell {
    pub radius: usize,
    pub max_modulus: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayFit {
    pub shells: Vec<Shell>,
    /// Least-squares slope of `log max` against `log R`.
    pub slope: f64,
    pub residual: f64,
    pub tau_claimed: f64,
    /// `sup_R max_R * R^(1/tau)`.
    pub bound_statistic: f64,
}

/// Dyadic shells `R <= |(k,l)| < 2R` for `R = 1, 2, 4, ...` lying inside the
/// table, at most `shells` of them.
pub fn decay_fit(table: &FourierTable, shells: usize, tau_claimed: f64) -> Result<DecayFit> {
    if table.k_max < 32 {
        return Err(Error::Resolution(format!("decay fit needs K >= 32, got {}", table.k_max)));
    }
    if !(tau_claimed >= 1.0) {
        return Err(Error::InvalidArgument(format!("type must be at least 1, got {tau_claimed}")));
    }
    let kk = table.k_max_i();
    let mut out = Vec::new();
    let mut radius = 1usize;
    while 2 * radius <= table.k_max && out.len() < shells {
        let r = radius as f64;
        let mut best: Option<f64> = None;
        for k in -kk..=kk {
            for l in -kk..=kk {
                let d = ((k * k + l * l) as f64).sqrt();
                if d >= r && d < 2.0 * r {
                    let v = table.get(k, l).norm();
                    best = Some(best.map_or(v, |b: f64| b.max(v)));
                }
            }
        }
        let max_modulus = best.ok_or(Error::EmptyShell { radius })?;
        out.push(Shell { radius, max_modulus });
        radius *= 2;
    }
    if out.len() < 2 {
        return Err(Error::Resolution("need at least two shells for a fit".into()));
    }
    let xs: Vec<f64> = out.iter().map(|s| (s.radius as f64).ln()).collect();
    let ys: Vec<f64> = out.iter().map(|s| s.max_modulus.max(f64::MIN_POSITIVE).ln()).collect();
    let (slope, intercept) = least_squares_line(&xs, &ys);
    let residual = xs.iter().zip(&ys).map(|(x, y)| (y - slope * x - intercept).powi(2)).sum::<f64>().sqrt();
    let bound_statistic =
        out.iter().map(|s| s.max_modulus * (s.radius as f64).powf(1.0 / tau_claimed)).fold(0.0, f64::max);
    Ok(DecayFit { shells: out, slope, residual, tau_claimed, bound_statistic })
}

fn least_squares_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (slope, my - slope * mx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Trend {
    ConvergentTrend,
    DivergentTrend,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrendAnalysis {
    pub increments: Vec<f64>,
    pub ratios: Vec<f64>,
    pub verdict: Trend,
    pub convergent_ratio: f64,
    pub negligible_increment: f64,
}

/// Classifies partial sums taken at increasing cutoffs. Increments that keep
/// shrinking by a factor below `0.9` read as convergence, increments that
/// never shrink read as divergence.
pub fn trend_of(partial_sums: &[f64]) -> TrendAnalysis {
    let last = partial_sums.last().copied().unwrap_or(0.0).abs();
    let increments: Vec<f64> = partial_sums
        .windows(2)
        .map(|w| {
            let d = w[1] - w[0];
            if d.abs() <= NEGLIGIBLE_INCREMENT * last.max(f64::MIN_POSITIVE) {
                0.0
            } else {
                d
            }
        })
        .collect();
    let ratios: Vec<f64> = increments
        .windows(2)
        .map(|w| {
            if w[0] == 0.0 {
                if w[1] == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                w[1] / w[0]
            }
        })
        .collect();
    let verdict = if increments.iter().all(|&d| d == 0.0) {
        Trend::ConvergentTrend
    } else if ratios.is_empty() {
        Trend::Inconclusive
    } else if ratios.iter().all(|&r| r < CONVERGENT_RATIO) {
        Trend::ConvergentTrend
    } else if increments.windows(2).all(|w| w[1] >= w[0]) {
        Trend::DivergentTrend
    } else {
        Trend::Inconclusive
    };
    TrendAnalysis {
        increments,
        ratios,
        verdict,
        convergent_ratio: CONVERGENT_RATIO,
        negligible_increment: NEGLIGIBLE_INCREMENT,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EnergyReport {
    pub alpha: f64,
    pub cutoffs: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub trend: TrendAnalysis,
    pub verdict: Trend,
    /// Slope of `log(increment)` against `log(cutoff)`; negative means shrinking increments.
    pub tail_slope: f64,
}

/// The energy sum truncated at `|k|, l <= cutoff`.
pub fn energy_partial_sum(table: &FourierTable, alpha: f64, cutoff: usize) -> f64 {
    let c = cutoff as i64;
    let mut axis = 0.0;
    for j in 1..=c {
        let w = (j as f64).powf(-alpha);
        axis += table.get(j, 0).norm_sqr() * w + table.get(0, j).norm_sqr() * w;
    }
    let mixed: f64 = (1..=c)
        .map(|l| {
            let wl = (l as f64).powf(-alpha);
            (1..=c)
                .map(|k| {
                    let wk = (k as f64).powf(-alpha);
                    (table.get(k, l).norm_sqr() + table.get(-k, l).norm_sqr()) * wk * wl
                })
                .sum::<f64>()
        })
        .sum();
    1.0 + axis + 0.5 * mixed
}

pub fn riesz_energy(table: &FourierTable, alpha: f64, cutoffs: &[usize]) -> Result<EnergyReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("energy needs 0 < alpha <= 1, got {alpha}")));
    }
    if cutoffs.is_empty() || cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("cutoffs must be nonempty and strictly increasing".into()));
    }
    if let Some(&c) = cutoffs.iter().find(|&&c| c > table.k_max || c == 0) {
        return Err(Error::InvalidArgument(format!("cutoff {c} outside 1..={}", table.k_max)));
    }
    let partial_sums: Vec<f64> = cutoffs.iter().map(|&c| energy_partial_sum(table, alpha, c)).collect();
    let trend = trend_of(&partial_sums);
    let pts: Vec<(f64, f64)> = trend
        .increments
        .iter()
        .zip(&cutoffs[1..])
        .filter(|(d, _)| **d > 0.0)
        .map(|(d, &c)| ((c as f64).ln(), d.ln()))
        .collect();
    let tail_slope = if pts.len() >= 2 {
        let (xs, ys): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
        least_squares_line(&xs, &ys).0
    } else {
        f64::NEG_INFINITY
    };
    Ok(EnergyReport { alpha, cutoffs: cutoffs.to_vec(), verdict: trend.verdict, partial_sums, trend, tail_slope })
}

/// Direct double-sum energy of the measure with the diagonal omitted, using
/// `|x1-y1|^(a-1) |x2-y2|^(a-1)` for `a < 1` and the product log kernel
/// `log(e/|x1-y1|) log(e/|x2-y2|)` at `a = 1`. Quadratic in the node count;
/// meant for cross-checking trends of the Fourier sums at small resolutions.
pub fn direct_energy(mu: &CurveMeasure, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("energy needs 0 < alpha <= 1, got {alpha}")));
    }
    let pts: Vec<(Complex64, Complex64, f64)> = mu
        .branch
        .parameter_grid
        .iter()
        .zip(&mu.branch.values)
        .zip(&mu.weights)
        .map(|((&t, &m), &w)| (Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, m), w))
        .collect();
    let kernel = |d: f64| -> f64 {
        // coincident coordinates in one variable only occur on axis-aligned pieces
        let d = d.max(1e-300);
        if alpha == 1.0 {
            (std::f64::consts::E / d).ln()
        } else {
            d.powf(alpha - 1.0)
        }
    };
    let total: f64 = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let (x1, x2, wx) = pts[i];
            let mut s = 0.0;
            for (j, &(y1, y2, wy)) in pts.iter().enumerate() {
                if i != j && wy > 0.0 {
                    s += wy * kernel((x1 - y1).norm()) * kernel((x2 - y2).norm());
                }
            }
            wx * s
        })
        .collect::<Vec<f64>>()
        .iter()
        .sum();
    Ok(total)
}

// ---- certificate ---------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateConfig {
    pub k_max: usize,
    pub cutoffs: Vec<usize>,
    pub quadrature_nodes: usize,
    pub trace_nodes: usize,
    pub mobius_candidates: Vec<Complex64>,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        Self {
            k_max: 128,
            cutoffs: vec![8, 16, 32, 64, 128],
            quadrature_nodes: 4096,
            trace_nodes: 512,
            mobius_candidates: vec![Complex64::new(0.3, 0.4), Complex64::new(-0.2, 0.5), Complex64::new(0.0, 0.5)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeasureChoice {
    UniformLine,
    TypeTwoBump,
    RetypedBump,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Certificate {
    pub alpha: f64,
    pub measure: MeasureChoice,
    pub window: Window,
    pub mobius: Option<MobiusParams>,
    pub type_report: Option<TypeReport>,
    pub energy: EnergyReport,
    /// Convergent energy at `alpha`: evidence that `f` is not cyclic for any exponent at or above `alpha`.
    pub noncyclic_evidence: bool,
    pub config: CertificateConfig,
}

/// Bump window around the node of largest curvature where the curvature stays
/// above a quarter of its peak.
fn type_two_window(branch: &CurveBranch) -> Option<(f64, Complex64, f64)> {
    let n = branch.parameter_grid.len();
    let (imax, peak) =
        branch.second.iter().enumerate().map(|(i, v)| (i, v.abs())).max_by(|a, b| a.1.total_cmp(&b.1))?;
    let scale = branch.second.iter().map(|v| v.abs()).fold(1.0, f64::max);
    if peak <= 1e-7 * scale || peak <= 1e-9 {
        return None;
    }
    let step = branch.parameter_grid[1] - branch.parameter_grid[0];
    let mut reach = 0usize;
    while reach < n / 2 {
        let lo = (imax + n - reach - 1) % n;
        let hi = (imax + reach + 1) % n;
        if branch.second[lo].abs() < 0.25 * peak || branch.second[hi].abs() < 0.25 * peak {
            break;
        }
        reach += 1;
    }
    let half_width = (reach as f64 * step).min(1.0);
    if half_width < 4.0 * step {
        return None;
    }
    let center = branch.parameter_grid[imax];
    Some((center, Complex64::from_polar(1.0, branch.values[imax]), half_width))
}

fn is_line(branch: &CurveBranch) -> bool {
    branch.is_closed_full_turn() && branch.second.iter().all(|v| v.abs() <= 1e-9)
}

pub fn noncyclicity_certificate(f: &Poly2, alpha: f64) -> Result<Certificate> {
    noncyclicity_certificate_with(f, alpha, CertificateConfig::default())
}

/// Builds a measure on the torus zero curve of `f` and evaluates its energy.
/// Lines get the uniform measure; otherwise a bump around a type-2 point,
/// reached by a Möbius map in the first variable when the curve has none.
pub fn noncyclicity_certificate_with(f: &Poly2, alpha: f64, config: CertificateConfig) -> Result<Certificate> {
    let torus = classify_torus_zeros(f)?;
    if torus.kind != TorusZeroKind::Curve {
        return Err(Error::NotACurve);
    }
    // circles {zeta} x T are graphs over the second variable
    let f = if f.bidegree().1 == 0 { f.swap_variables() } else { f.clone() };
    let branch = trace_branch(&f, (0.0, TAU), config.trace_nodes)?;

    let (measure, choice, mobius, type_report) = if is_line(&branch) {
        let m = CurveMeasure::uniform_closed(&f, config.quadrature_nodes)?;
        (m, MeasureChoice::UniformLine, None, None)
    } else if let Some((center, z2, hw)) = type_two_window(&branch) {
        let report = curve_type_at(&branch, center, DEFAULT_MAX_ORDER)?;
        let m = CurveMeasure::bump(&f, center, z2, hw, config.quadrature_nodes)?;
        (m, MeasureChoice::TypeTwoBump, None, Some(report))
    } else {
        let RetypeResult { params, g, report, .. } =
            mobius_retype(&f, branch.parameter_grid[0], &config.mobius_candidates)?;
        if report.tau != Tau::Finite(2) {
            return Err(Error::RetypeFailed("retyped point is not of type 2".into()));
        }
        let gb = curvegeom::trace_branch_from(&g, (report.point, report.point + TAU), config.trace_nodes, report.z[1])?;
        let (center, z2, hw) = type_two_window(&gb)
            .ok_or_else(|| Error::RetypeFailed("no curvature window on the transformed curve".into()))?;
        let m = CurveMeasure::bump(&g, center, z2, hw, config.quadrature_nodes)?;
        (m, MeasureChoice::RetypedBump, Some(params), Some(report))
    };
    let table = fourier_coefficients(&measure, config.k_max)?;
    let energy = riesz_energy(&table, alpha, &config.cutoffs)?;
    Ok(Certificate {
        alpha,
        measure: choice,
        window: measure.window,
        mobius,
        type_report,
        noncyclic_evidence: energy.verdict == Trend::ConvergentTrend,
        energy,
        config,
    })
}

// ---- cofactor ------------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedSums {
    pub beta: f64,
    pub partial_sums: Vec<f64>,
    pub trend: TrendAnalysis,
    pub verdict: Trend,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CofactorReport {
    pub q: usize,
    #[serde(rename = "N")]
    pub n_power: usize,
    pub grid: usize,
    pub cutoffs: Vec<usize>,
    /// Largest |Q| over the lattice.
    pub sup_norm: f64,
    pub weighted_sums: Vec<WeightedSums>,
}

/// Cutoffs `8, 16, ...` up to a quarter of the grid.
pub fn default_cofactor_cutoffs(grid: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut c = 8;
    while c <= grid / 4 {
        out.push(c);
        c *= 2;
    }
    out
}

/// `Q = Q0^N / f` on the `grid x grid` torus lattice, with
/// `Q0 = prod (z1 - zeta1)^q (z2 - zeta2)^q` over the supplied zeros, and the
/// weighted sums `sum |Q^(k,l)|^2 (|k|+1)^b (|l|+1)^b` for `b = 1, 2`.
pub fn cofactor_experiment(
    f: &Poly2,
    zeros: &[[Complex64; 2]],
    q: usize,
    n_power: usize,
    grid: usize,
) -> Result<CofactorReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if grid < 256 || !grid.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("grid must be a power of two >= 256, got {grid}")));
    }
    let scale = f.max_abs();
    let nodes = fourier::roots_of_unity(grid);
    let rows: Vec<Result<Vec<Complex64>>> = (0..grid)
        .into_par_iter()
        .map(|j| {
            let z1 = nodes[j];
            let mut row = Vec::with_capacity(grid);
            for (k, &z2) in nodes.iter().enumerate() {
                let mut q0 = Complex64::new(1.0, 0.0);
                for z in zeros {
                    q0 *= ((z1 - z[0]) * (z2 - z[1])).powu(q as u32);
                }
                let num = q0.powu(n_power as u32);
                let den = f.evaluate(z1, z2);
                if den.norm() <= 1e-12 * scale {
                    let near = zeros.iter().any(|z| (z1 - z[0]).norm() + (z2 - z[1]).norm() < 1e-6);
                    if !near {
                        return Err(Error::InconsistentZeros {
                            t1: TAU * j as f64 / grid as f64,
                            t2: TAU * k as f64 / grid as f64,
                        });
                    }
                    row.push(ZERO);
                } else {
                    row.push(num / den);
                }
            }
            Ok(row)
        })
        .collect();
    let mut data = Vec::with_capacity(grid * grid);
    for r in rows {
        data.extend(r?);
    }
    let sup_norm = data.iter().map(|c| c.norm()).fold(0.0, f64::max);
    fourier::transform_2d(&mut data, grid, grid);

    let cutoffs = default_cofactor_cutoffs(grid);
    let idx = |k: i64| -> usize { k.rem_euclid(grid as i64) as usize };
    let weighted_sums = [1.0, 2.0]
        .iter()
        .map(|&beta| {
            let partial_sums: Vec<f64> = cutoffs
                .iter()
                .map(|&c| {
                    let c = c as i64;
                    let mut s = 0.0;
                    for k in -c..=c {
                        let wk = ((k.abs() + 1) as f64).powf(beta);
                        for l in -c..=c {
                            let wl = ((l.abs() + 1) as f64).powf(beta);
                            s += data[idx(k) * grid + idx(l)].norm_sqr() * wk * wl;
                        }
                    }
                    s
                })
                .collect();
            let trend = trend_of(&partial_sums);
            WeightedSums { beta, verdict: trend.verdict, partial_sums, trend }
        })
        .collect();
    Ok(CofactorReport { q, n_power, grid, cutoffs, sup_norm, weighted_sums })
}
