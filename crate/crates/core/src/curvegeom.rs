//! Torus zero curves as graphs `t -> (e^{it}, e^{i m(t)})` and their type.
//!
//! Branches are traced node by node with nearest-argument continuation.
//! Derivatives of `m` come from the Taylor expansion of the implicit function
//! `z2(z1)` defined by `f(z1, z2) = 0`, computed by Newton's method on
//! truncated power series. The type of a point is the first order at which
//! the curve leaves its tangent line.

use crate::error::{Error, Result};
use crate::poly2::{Axis, MobiusParams, Poly2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub const DEFAULT_MAX_ORDER: usize = 5;
/// Relative size below which a derivative counts as zero.
pub const TYPE_THRESHOLD: f64 = 1e-7;
const UNIMODULAR_BAND: f64 = 1e-6;
const AMBIGUITY_SEPARATION: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchSource {
    ClosedForm,
    Traced,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveBranch {
    pub f: Poly2,
    pub parameter_grid: Vec<f64>,
    /// Unwrapped `m(t)`.
    pub values: Vec<f64>,
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    pub third: Vec<f64>,
    pub source: BranchSource,
}

fn wrap_angle(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y > PI {
        y - TAU
    } else {
        y
    }
}

// ---- truncated power series -------------------------------------------------

fn series_mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![ZERO; n];
    for i in 0..n {
        if a[i] == ZERO {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

fn series_inv(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut out = vec![ZERO; n];
    out[0] = ONE / a[0];
    for k in 1..n {
        let s: Complex64 = (1..=k).map(|j| a[j] * out[k - j]).sum();
        out[k] = -s * out[0];
    }
    out
}

/// `f(z1(s), z2(s))` for series arguments.
fn series_eval(f: &Poly2, z1: &[Complex64], z2: &[Complex64]) -> Vec<Complex64> {
    let (n, m) = f.bidegree();
    let len = z1.len();
    let mut acc = vec![ZERO; len];
    for k in (0..=n).rev() {
        let mut inner = vec![ZERO; len];
        for l in (0..=m).rev() {
            inner = series_mul(&inner, z2);
            inner[0] += f.coeff(k, l);
        }
        acc = series_mul(&acc, z1);
        for (a, b) in acc.iter_mut().zip(&inner) {
            *a += b;
        }
    }
    acc
}

/// Derivatives `[m, m', ..., m^(order)]` of the branch through the torus point
/// `(z1, z2)`, where `z1 = e^{it}`.
pub fn branch_derivatives_at(f: &Poly2, z1: Complex64, z2: Complex64, order: usize) -> Result<Vec<f64>> {
    let t = z1.arg();
    let len = order + 1;
    let d2 = f.partial_derivative(Axis::Z2);
    let scale = f.max_abs();
    if d2.evaluate(z1, z2).norm() <= 1e-10 * scale {
        return Err(Error::IrregularParametrization { t });
    }
    // z1(s) = z1 e^{is}
    let mut z1s = vec![ZERO; len];
    let mut fact = 1.0;
    for (j, c) in z1s.iter_mut().enumerate() {
        if j > 0 {
            fact *= j as f64;
        }
        *c = z1 * Complex64::i().powu(j as u32) / fact;
    }
    let mut z2s = vec![ZERO; len];
    z2s[0] = z2;
    for _ in 0..(len + 2) {
        let val = series_eval(f, &z1s, &z2s);
        let der = series_eval(&d2, &z1s, &z2s);
        let step = series_mul(&val, &series_inv(&der));
        for (a, b) in z2s.iter_mut().zip(&step) {
            *a -= b;
        }
    }
    // m(s) = arg z2(0) + Im log(z2(s) / z2(0)); (log w)' = w'/w
    let deriv: Vec<Complex64> = (1..len).map(|k| z2s[k] * k as f64).chain(std::iter::once(ZERO)).collect();
    let ratio = series_mul(&deriv, &series_inv(&z2s));
    let mut out = vec![z2s[0].arg(); len];
    let mut fact = 1.0;
    for k in 1..len {
        fact *= k as f64;
        // coefficient of s^k in the log is ratio[k-1]/k; times k! for the derivative
        out[k] = (ratio[k - 1] / k as f64).im * fact;
    }
    Ok(out)
}

// ---- tracing -----------------------------------------------------------------

/// Unimodular roots of `f(e^{it}, .)`, projected to the circle and polished.
pub fn unimodular_roots_at(f: &Poly2, t: f64) -> Vec<Complex64> {
    let z1 = Complex64::from_polar(1.0, t);
    let slice = f.slice_z2(z1);
    let ds = slice.derivative();
    slice
        .roots()
        .into_iter()
        .filter(|r| (r.norm() - 1.0).abs() <= UNIMODULAR_BAND)
        .map(|mut r| {
            for _ in 0..2 {
                let d = ds.eval(r);
                if d.norm() > 0.0 {
                    let next = r - slice.eval(r) / d;
                    if slice.eval(next).norm() < slice.eval(r).norm() {
                        r = next;
                    }
                }
            }
            r / r.norm()
        })
        .collect()
}

fn pick_nearest(f: &Poly2, t: f64, reference: f64) -> Result<f64> {
    let roots = unimodular_roots_at(f, t);
    if roots.is_empty() {
        return Err(Error::BranchLost { t });
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let sep = (roots[i] - roots[j]).norm();
            if sep < AMBIGUITY_SEPARATION {
                return Err(Error::BranchAmbiguity { t, separation: sep });
            }
        }
    }
    let best = roots
        .iter()
        .map(|r| wrap_angle(r.arg() - reference))
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
        .expect("nonempty");
    let z = Complex64::from_polar(1.0, t);
    let point = Complex64::from_polar(1.0, reference + best);
    if f.evaluate(z, point).norm() > 1e-8 * f.max_abs() {
        return Err(Error::BranchLost { t });
    }
    Ok(reference + best)
}

fn fill_derivatives(f: &Poly2, grid: &[f64], values: &[f64]) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut d1 = Vec::with_capacity(grid.len());
    let mut d2 = Vec::with_capacity(grid.len());
    let mut d3 = Vec::with_capacity(grid.len());
    for (&t, &m) in grid.iter().zip(values) {
        let d = branch_derivatives_at(f, Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, m), 3)?;
        d1.push(d[1]);
        d2.push(d[2]);
        d3.push(d[3]);
    }
    Ok((d1, d2, d3))
}

/// Traces the branch starting at the unimodular root of `f(e^{i t_start}, .)`
/// with the smallest argument in `[0, 2 pi)`. Nodes are
/// `t_start + i (t_end - t_start) / nodes` for `i < nodes`.
pub fn trace_branch(f: &Poly2, t_window: (f64, f64), nodes: usize) -> Result<CurveBranch> {
    let (t0, _) = t_window;
    let mut roots = unimodular_roots_at(f, t0);
    if roots.is_empty() {
        return Err(Error::BranchLost { t: t0 });
    }
    roots.sort_by(|a, b| a.arg().rem_euclid(TAU).total_cmp(&b.arg().rem_euclid(TAU)));
    trace_branch_from(f, t_window, nodes, roots[0])
}

/// Traces the branch through `(e^{i t_start}, z2_start)`.
pub fn trace_branch_from(f: &Poly2, t_window: (f64, f64), nodes: usize, z2_start: Complex64) -> Result<CurveBranch> {
    let (t0, t1) = t_window;
    if nodes < 2 || !(t1 > t0) {
        return Err(Error::InvalidArgument("tracing needs t_end > t_start and at least 2 nodes".into()));
    }
    if f.bidegree().1 == 0 {
        return Err(Error::NotACurve);
    }
    let step = (t1 - t0) / nodes as f64;
    let grid: Vec<f64> = (0..nodes).map(|i| t0 + step * i as f64).collect();
    let values = follow_branch(f, &grid, z2_start)?;
    let (first, second, third) = fill_derivatives(f, &grid, &values)?;
    Ok(CurveBranch { f: f.clone(), parameter_grid: grid, values, first, second, third, source: BranchSource::Traced })
}

/// Unwrapped `m` along the parameters `ts` (in any order), continuing from the
/// unimodular root nearest `z2_seed` at `ts[0]`.
pub fn follow_branch(f: &Poly2, ts: &[f64], z2_seed: Complex64) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(ts.len());
    let mut reference = z2_seed.arg().rem_euclid(TAU);
    for &t in ts {
        let m = pick_nearest(f, t, reference)?;
        values.push(m);
        reference = m;
    }
    Ok(values)
}

impl CurveBranch {
    pub fn window(&self) -> (f64, f64) {
        let n = self.parameter_grid.len();
        let step = self.parameter_grid[1] - self.parameter_grid[0];
        (self.parameter_grid[0], self.parameter_grid[n - 1] + step)
    }

    /// `m(t)` at an arbitrary parameter, continued from the nearest grid node.
    pub fn m_at(&self, t: f64) -> Result<f64> {
        let (i, _) = self
            .parameter_grid
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .expect("nonempty grid");
        let reference = self.values[i] + self.first[i] * (t - self.parameter_grid[i]);
        pick_nearest(&self.f, t, reference)
    }

    /// Rows `(t, m, m', m'')`.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        (0..self.parameter_grid.len()).map(|i| (self.parameter_grid[i], self.values[i], self.first[i], self.second[i]))
    }

    /// Whether the branch closes up over a full turn of `t`.
    pub fn is_closed_full_turn(&self) -> bool {
        let (a, b) = self.window();
        if ((b - a) - TAU).abs() > 1e-9 {
            return false;
        }
        self.m_at(b).map(|end| wrap_angle(end - self.values[0]).abs() < 1e-8).unwrap_or(false)
    }
}

// ---- the f_a family ------------------------------------------------------------

/// `1 - a z1 - a z2 + z1 z2`
pub fn fa_polynomial(a: f64) -> Poly2 {
    Poly2::from_real_terms(&[(0, 0, 1.0), (1, 0, -a), (0, 1, -a), (1, 1, 1.0)])
}

/// `m(t)` of the torus zero curve of `f_a`, `0 < a < 1`, as a principal argument.
pub fn fa_m(a: f64, t: f64) -> f64 {
    ((1.0 - a * a) * t.sin()).atan2(2.0 * a - (1.0 + a * a) * t.cos())
}

fn fa_denominator(a: f64, t: f64) -> f64 {
    2.0 * a * t.cos() - 1.0 - a * a
}

pub fn fa_m1(a: f64, t: f64) -> f64 {
    (1.0 - a * a) / fa_denominator(a, t)
}

pub fn fa_m2(a: f64, t: f64) -> f64 {
    2.0 * a * (1.0 - a * a) * t.sin() / fa_denominator(a, t).powi(2)
}

pub fn fa_m3(a: f64, t: f64) -> f64 {
    let d = fa_denominator(a, t);
    2.0 * a * (1.0 - a * a) * (t.cos() / d.powi(2) + 4.0 * a * t.sin().powi(2) / d.powi(3))
}

/// Branch of `f_a` from the closed forms, unwrapped along the grid.
pub fn fa_closed_form_branch(a: f64, t_window: (f64, f64), nodes: usize) -> Result<CurveBranch> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidArgument(format!("closed form needs 0 < a < 1, got {a}")));
    }
    let (t0, t1) = t_window;
    if nodes < 2 || !(t1 > t0) {
        return Err(Error::InvalidArgument("closed form needs t_end > t_start and at least 2 nodes".into()));
    }
    let step = (t1 - t0) / nodes as f64;
    let grid: Vec<f64> = (0..nodes).map(|i| t0 + step * i as f64).collect();
    let mut values: Vec<f64> = Vec::with_capacity(nodes);
    for &t in &grid {
        let raw = fa_m(a, t);
        let v = match values.last() {
            Some(&prev) => prev + wrap_angle(raw - prev),
            None => raw.rem_euclid(TAU),
        };
        values.push(v);
    }
    Ok(CurveBranch {
        f: fa_polynomial(a),
        first: grid.iter().map(|&t| fa_m1(a, t)).collect(),
        second: grid.iter().map(|&t| fa_m2(a, t)).collect(),
        third: grid.iter().map(|&t| fa_m3(a, t)).collect(),
        parameter_grid: grid,
        values,
        source: BranchSource::ClosedForm,
    })
}

// ---- type ----------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tau {
    Finite(usize),
    Infinite,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DirectionOrder {
    pub eta: [f64; 2],
    /// First derivative order with a nonzero component along `eta`.
    pub order: Option<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TypeReport {
    pub point: f64,
    pub z: [Complex64; 2],
    pub tau: Tau,
    pub max_order: usize,
    /// Unit vector whose first nonvanishing order equals `tau`.
    pub witness_vector: [f64; 2],
    /// `m^(k)(t)` for `k = 1..=max_order`.
    pub derivative_values: Vec<f64>,
    /// Component of the k-th derivative of `(t, m(t))` along the unit normal.
    pub normal_components: Vec<f64>,
    /// Per-order zero thresholds applied to `|m^(k)|`.
    pub thresholds: Vec<f64>,
    pub directions: Vec<DirectionOrder>,
}

fn type_from_derivatives(t: f64, z: [Complex64; 2], derivs: &[f64], scales: &[f64], max_order: usize) -> TypeReport {
    let m1 = derivs[1];
    let norm = (1.0 + m1 * m1).sqrt();
    let normal = [-m1 / norm, 1.0 / norm];
    let tangent = [1.0 / norm, m1 / norm];
    let thresholds: Vec<f64> = (1..=max_order).map(|k| TYPE_THRESHOLD * scales[k].max(1.0)).collect();
    let normal_components: Vec<f64> = (1..=max_order).map(|k| if k == 1 { 0.0 } else { derivs[k] / norm }).collect();
    let normal_order = (2..=max_order).find(|&k| derivs[k].abs() > thresholds[k - 1]);
    let tau = normal_order.map_or(Tau::Infinite, Tau::Finite);
    let directions = vec![
        DirectionOrder { eta: tangent, order: Some(1) },
        DirectionOrder { eta: normal, order: normal_order },
        DirectionOrder { eta: [-normal[0], -normal[1]], order: normal_order },
    ];
    TypeReport {
        point: t,
        z,
        tau,
        max_order,
        witness_vector: normal,
        derivative_values: derivs[1..].to_vec(),
        normal_components,
        thresholds,
        directions,
    }
}

/// Type of the branch at parameter `t`. Derivatives count as zero below
/// `1e-7 * max(1, max |m^(k)| over the branch grid)`.
pub fn curve_type_at(branch: &CurveBranch, t: f64, max_order: usize) -> Result<TypeReport> {
    if max_order < 2 {
        return Err(Error::InvalidArgument("max_order must be at least 2".into()));
    }
    let (a, b) = branch.window();
    if t < a - 1e-12 || t > b + 1e-12 {
        return Err(Error::InvalidArgument(format!("t = {t} outside the branch window [{a}, {b}]")));
    }
    let m = branch.m_at(t)?;
    let z = [Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, m)];
    let derivs = branch_derivatives_at(&branch.f, z[0], z[1], max_order)?;

    let stride = (branch.parameter_grid.len() / 64).max(1);
    let mut scales = vec![0.0f64; max_order + 1];
    for i in (0..branch.parameter_grid.len()).step_by(stride) {
        let zi = [Complex64::from_polar(1.0, branch.parameter_grid[i]), Complex64::from_polar(1.0, branch.values[i])];
        let d = branch_derivatives_at(&branch.f, zi[0], zi[1], max_order)?;
        for k in 1..=max_order {
            scales[k] = scales[k].max(d[k].abs());
        }
    }
    for k in 1..=max_order {
        scales[k] = scales[k].max(derivs[k].abs());
    }
    Ok(type_from_derivatives(t, z, &derivs, &scales, max_order))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CandidateOutcome {
    pub a: Complex64,
    pub tau: Option<Tau>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RetypeResult {
    pub params: MobiusParams,
    /// Transformed polynomial (equal to `f` for the identity).
    pub g: Poly2,
    pub report: TypeReport,
    pub outcomes: Vec<CandidateOutcome>,
}

/// Looks for a Möbius map in the first variable that turns the point of the
/// torus curve of `f` over `t0` into a type-2 point. The point is the
/// unimodular root of `f(e^{i t0}, .)` with smallest argument.
pub fn mobius_retype(f: &Poly2, t0: f64, a_candidates: &[Complex64]) -> Result<RetypeResult> {
    let span = 0.5;
    let base = trace_branch(f, (t0, t0 + span), 64)?;
    let report = curve_type_at(&base, t0, DEFAULT_MAX_ORDER)?;
    if report.tau == Tau::Finite(2) {
        return Ok(RetypeResult { params: MobiusParams::identity_like(), g: f.clone(), report, outcomes: Vec::new() });
    }
    let p0 = report.z;
    let mut outcomes = Vec::new();
    for &a in a_candidates {
        if a.im == 0.0 {
            outcomes.push(CandidateOutcome { a, tau: None, note: "rejected: Im(a) = 0".into() });
            continue;
        }
        let params = match MobiusParams::new(a, ZERO) {
            Ok(p) => p,
            Err(e) => {
                outcomes.push(CandidateOutcome { a, tau: None, note: format!("rejected: {e}") });
                continue;
            }
        };
        let g = crate::poly2::mobius_numerator(f, params);
        let (w1, w2) = params.apply(p0[0], p0[1]);
        let t1 = w1.arg();
        let attempt = trace_branch_from(&g, (t1, t1 + span), 64, w2)
            .and_then(|branch| curve_type_at(&branch, t1, DEFAULT_MAX_ORDER));
        match attempt {
            Ok(r) if r.tau == Tau::Finite(2) => {
                outcomes.push(CandidateOutcome { a, tau: Some(r.tau), note: "type 2".into() });
                return Ok(RetypeResult { params, g, report: r, outcomes });
            }
            Ok(r) => outcomes.push(CandidateOutcome { a, tau: Some(r.tau), note: "not type 2".into() }),
            Err(e) => outcomes.push(CandidateOutcome { a, tau: None, note: e.to_string() }),
        }
    }
    let summary = outcomes.iter().map(|o| format!("a={}: {}", o.a, o.note)).collect::<Vec<_>>().join("; ");
    Err(Error::RetypeFailed(summary))
}
