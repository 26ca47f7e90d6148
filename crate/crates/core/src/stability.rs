//! Where does the zero set of `f` meet the closed bidisk?
//!
//! [`bidisk_zero_scan`] solves the one-variable slices `f(., z2)` (and, with the
//! variables swapped, `f(z1, .)`) on a polar grid of the closed disk.
//! [`torus_zero_classification`] then decides the empty / finite / curve
//! trichotomy for the zeros on the torus.

use crate::error::{Error, Result};
use crate::poly2::{self, Axis, Poly2, UnimodularMatch, DEFAULT_SYMMETRY_TOLERANCE};
use crate::univariate::UniPoly;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub const DEFAULT_RADIAL_STEPS: usize = 64;
pub const DEFAULT_ANGULAR_STEPS: usize = 128;
/// Band separating open-disk roots from boundary roots.
pub const DEFAULT_MARGIN: f64 = 1e-7;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BidiskStabilityReport {
    pub has_zero_in_open_bidisk: bool,
    pub has_zero_on_closed_bidisk: bool,
    pub witness: Option<[Complex64; 2]>,
    /// Smallest sampled |f| over the torus lattice and the located slice roots.
    pub min_modulus_estimate: f64,
    /// `[radial_steps, angular_steps]`
    pub grid_resolution: [usize; 2],
    pub margin: f64,
    /// Closed-bidisk hits that are not on the torus.
    pub off_torus_hits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusZeroKind {
    Empty,
    Finite,
    Curve,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusZeroSet {
    pub kind: TorusZeroKind,
    pub points: Vec<[Complex64; 2]>,
    pub symmetry: Option<UnimodularMatch>,
    /// Curve made of full circles `{zeta} x T` or `T x {zeta}` (univariate input).
    pub axis_aligned: bool,
    pub candidates_checked: usize,
}

#[derive(Clone, Copy, Debug)]
struct Hit {
    z1: Complex64,
    z2: Complex64,
    open: bool,
}

impl Hit {
    fn depth(&self) -> f64 {
        self.z1.norm().max(self.z2.norm())
    }
}

fn polar_grid(radial_steps: usize, angular_steps: usize) -> Vec<Complex64> {
    let mut nodes = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=radial_steps {
        let r = i as f64 / radial_steps as f64;
        for j in 0..angular_steps {
            nodes.push(Complex64::from_polar(r, TAU * j as f64 / angular_steps as f64));
        }
    }
    nodes
}

/// Roots in z1 of `f(., z2)` for every grid node `z2`, reported as hits.
fn scan_one_way(f: &Poly2, nodes: &[Complex64], margin: f64) -> Vec<Hit> {
    let scale = f.max_abs();
    let per_node: Vec<Vec<Hit>> = nodes
        .par_iter()
        .map(|&z2| {
            let slice = f.slice_z1(z2);
            let inside = z2.norm() < 1.0 - margin;
            if slice.is_zero(1e-13 * scale) {
                return vec![Hit { z1: Complex64::new(0.0, 0.0), z2, open: inside }];
            }
            slice
                .roots()
                .into_iter()
                .filter(|r| r.norm() <= 1.0 + margin)
                .map(|z1| Hit { z1, z2, open: inside && z1.norm() < 1.0 - margin })
                .collect()
        })
        .collect();
    per_node.into_iter().flatten().collect()
}

pub fn bidisk_zero_scan(f: &Poly2, radial_steps: usize, angular_steps: usize) -> Result<BidiskStabilityReport> {
    bidisk_zero_scan_with_margin(f, radial_steps, angular_steps, DEFAULT_MARGIN)
}

pub fn bidisk_zero_scan_with_margin(
    f: &Poly2,
    radial_steps: usize,
    angular_steps: usize,
    margin: f64,
) -> Result<BidiskStabilityReport> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if radial_steps < 8 || angular_steps < 8 {
        return Err(Error::InvalidArgument("scan needs at least 8 radial and 8 angular steps".into()));
    }
    let torus: Vec<Complex64> =
        (0..angular_steps).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / angular_steps as f64)).collect();
    let torus_min = torus
        .par_iter()
        .map(|&z1| torus.iter().map(|&z2| f.evaluate(z1, z2).norm()).fold(f64::INFINITY, f64::min))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min);

    if f.is_constant() {
        return Ok(BidiskStabilityReport {
            has_zero_in_open_bidisk: false,
            has_zero_on_closed_bidisk: false,
            witness: None,
            min_modulus_estimate: torus_min,
            grid_resolution: [radial_steps, angular_steps],
            margin,
            off_torus_hits: 0,
        });
    }

    let nodes = polar_grid(radial_steps, angular_steps);
    let mut hits = scan_one_way(f, &nodes, margin);
    hits.extend(scan_one_way(&f.swap_variables(), &nodes, margin).into_iter().map(|h| Hit { z1: h.z2, z2: h.z1, ..h }));

    let has_open = hits.iter().any(|h| h.open);
    let has_closed = !hits.is_empty();
    let off_torus_hits = hits.iter().filter(|h| h.z1.norm() < 1.0 - 1e-6 || h.z2.norm() < 1.0 - 1e-6).count();
    let best = hits.iter().filter(|h| h.open == has_open).min_by(|a, b| a.depth().total_cmp(&b.depth()));
    let witness = best.map(|h| refine_witness(f, *h));
    let hit_min = hits.iter().map(|h| f.evaluate(h.z1, h.z2).norm()).fold(f64::INFINITY, f64::min);

    Ok(BidiskStabilityReport {
        has_zero_in_open_bidisk: has_open,
        has_zero_on_closed_bidisk: has_closed,
        witness,
        min_modulus_estimate: torus_min.min(hit_min),
        grid_resolution: [radial_steps, angular_steps],
        margin,
        off_torus_hits,
    })
}

/// Newton polish of the witness along whichever slice is better conditioned.
fn refine_witness(f: &Poly2, hit: Hit) -> [Complex64; 2] {
    let d1 = f.partial_derivative(Axis::Z1);
    let d2 = f.partial_derivative(Axis::Z2);
    let (mut z1, mut z2) = (hit.z1, hit.z2);
    for _ in 0..4 {
        let val = f.evaluate(z1, z2);
        let g1 = d1.evaluate(z1, z2);
        let g2 = d2.evaluate(z1, z2);
        if val.norm() == 0.0 {
            break;
        }
        let (n1, n2) = if g1.norm() >= g2.norm() { (z1 - val / g1, z2) } else { (z1, z2 - val / g2) };
        if !(n1.re.is_finite() && n2.re.is_finite()) || f.evaluate(n1, n2).norm() >= val.norm() {
            break;
        }
        z1 = n1;
        z2 = n2;
    }
    [z1, z2]
}

/// Runs the bidisk scan with default resolution, rejects inputs with zeros in
/// the open bidisk, then classifies the torus zeros.
pub fn torus_zero_classification(f: &Poly2) -> Result<TorusZeroSet> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let scan = bidisk_zero_scan(f, DEFAULT_RADIAL_STEPS, DEFAULT_ANGULAR_STEPS)?;
    if scan.has_zero_in_open_bidisk {
        let w = scan.witness.unwrap_or_default();
        return Err(Error::ZerosInBidisk { z1: w[0].to_string(), z2: w[1].to_string() });
    }
    classify_torus_zeros(f)
}

/// Torus trichotomy for a nonzero `f` already known to have no zeros in the
/// open bidisk. Irreducibility is a precondition; an identically vanishing
/// resultant against the reflection is reported as a violation of it.
pub fn classify_torus_zeros(f: &Poly2) -> Result<TorusZeroSet> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let symmetry = f.unimodular_reflection_match(DEFAULT_SYMMETRY_TOLERANCE);
    if f.is_constant() {
        return Ok(TorusZeroSet {
            kind: TorusZeroKind::Empty,
            points: Vec::new(),
            symmetry: Some(symmetry),
            axis_aligned: false,
            candidates_checked: 0,
        });
    }
    if let Some((_, uni)) = f.as_univariate() {
        let roots = uni.roots();
        let on_circle = roots.iter().any(|&r| is_unimodular_root(&uni, r));
        return Ok(TorusZeroSet {
            kind: if on_circle { TorusZeroKind::Curve } else { TorusZeroKind::Empty },
            points: Vec::new(),
            symmetry: Some(symmetry),
            axis_aligned: on_circle,
            candidates_checked: roots.len(),
        });
    }
    if symmetry.matches {
        return Ok(TorusZeroSet {
            kind: TorusZeroKind::Curve,
            points: Vec::new(),
            symmetry: Some(symmetry),
            axis_aligned: false,
            candidates_checked: 0,
        });
    }

    let reflected = f.reflect()?;
    let res = poly2::sylvester_resultant_z2(f, &reflected)?;
    if res.max_abs() <= 1e-10 * poly2::resultant_scale(f, &reflected) {
        return Err(Error::NotIrreducible(
            "resultant of f and its reflection vanishes identically but f is not reflection-symmetric".into(),
        ));
    }
    let roots = res.trimmed(1e-13).roots();
    let candidates: Vec<f64> = roots.iter().filter(|r| (r.norm() - 1.0).abs() <= 1e-4).map(|r| r.arg()).collect();

    let f_scale = f.max_abs();
    let mut points: Vec<[Complex64; 2]> = Vec::new();
    for &s0 in &candidates {
        let s = refine_torus_angle(f, s0, 2e-3);
        let z1 = Complex64::from_polar(1.0, s);
        for z2 in f.slice_z2(z1).roots() {
            if (z2.norm() - 1.0).abs() > 1e-6 {
                continue;
            }
            let p = [z1, z2 / z2.norm()];
            let ok = f.evaluate(p[0], p[1]).norm() <= 1e-8 * f_scale
                && reflected.evaluate(p[0], p[1]).norm() <= 1e-8 * f_scale;
            let dup = points.iter().any(|q| (q[0] - p[0]).norm() + (q[1] - p[1]).norm() < 1e-6);
            if ok && !dup {
                points.push(p);
            }
        }
    }
    let angle = |z: Complex64| z.arg().rem_euclid(TAU);
    points.sort_by(|a, b| angle(a[0]).total_cmp(&angle(b[0])).then(angle(a[1]).total_cmp(&angle(b[1]))));
    Ok(TorusZeroSet {
        kind: if points.is_empty() { TorusZeroKind::Empty } else { TorusZeroKind::Finite },
        points,
        symmetry: Some(symmetry),
        axis_aligned: false,
        candidates_checked: candidates.len(),
    })
}

fn is_unimodular_root(p: &UniPoly, r: Complex64) -> bool {
    if (r.norm() - 1.0).abs() > 1e-5 {
        return false;
    }
    p.eval(r / r.norm()).norm() <= 1e-8 * p.max_abs()
}

/// Distance of the nearest root of `f(e^{is}, .)` from the unit circle.
fn circle_gap(f: &Poly2, s: f64) -> f64 {
    f.slice_z2(Complex64::from_polar(1.0, s))
        .roots()
        .iter()
        .map(|r| (r.norm() - 1.0).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Golden-section search for the angle where a root of `f(e^{is}, .)` touches the circle.
fn refine_torus_angle(f: &Poly2, s0: f64, half_width: f64) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (s0 - half_width, s0 + half_width);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (circle_gap(f, c), circle_gap(f, d));
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = circle_gap(f, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = circle_gap(f, d);
        }
    }
    let mid = 0.5 * (a + b);
    if circle_gap(f, mid) <= circle_gap(f, s0) {
        mid
    } else {
        s0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(usize, usize, f64)]) -> Poly2 {
        Poly2::from_real_terms(terms)
    }

    fn fa(a: f64) -> Poly2 {
        p(&[(0, 0, 1.0), (1, 0, -a), (0, 1, -a), (1, 1, 1.0)])
    }

    fn scan(f: &Poly2) -> BidiskStabilityReport {
        bidisk_zero_scan(f, 32, 64).unwrap()
    }

    #[test]
    fn monomial_has_open_zero() {
        let r = scan(&p(&[(1, 1, 1.0)]));
        assert!(r.has_zero_in_open_bidisk && r.has_zero_on_closed_bidisk);
        let w = r.witness.unwrap();
        assert!(w[0].norm() < 1.0 && w[1].norm() < 1.0);
        assert!(p(&[(1, 1, 1.0)]).evaluate(w[0], w[1]).norm() <= 1e-6);
    }

    #[test]
    fn strictly_stable_polynomial() {
        let r = scan(&p(&[(0, 0, 3.0), (1, 0, 1.0), (0, 1, 1.0)]));
        assert!(!r.has_zero_on_closed_bidisk);
        assert!(r.witness.is_none());
        assert!((r.min_modulus_estimate - 1.0).abs() < 1e-12);
    }

    #[test]
    fn torus_curve_is_closed_but_not_open() {
        let f = p(&[(0, 0, 1.0), (1, 1, 1.0)]);
        let r = scan(&f);
        assert!(!r.has_zero_in_open_bidisk);
        assert!(r.has_zero_on_closed_bidisk);
        let w = r.witness.unwrap();
        assert!(f.evaluate(w[0], w[1]).norm() <= 1e-6 * f.max_abs());
        assert!(r.min_modulus_estimate < 1e-12);
    }

    #[test]
    fn constant_and_zero_inputs() {
        let r = scan(&Poly2::constant(Complex64::new(2.0, 0.0)));
        assert!(!r.has_zero_on_closed_bidisk);
        assert!(bidisk_zero_scan(&Poly2::zero(), 16, 16).is_err());
        assert!(bidisk_zero_scan(&p(&[(1, 0, 1.0)]), 4, 16).is_err());
    }

    #[test]
    fn degenerate_slice_reports_line() {
        // (z2 - 0.5) vanishes on the line z2 = 1/2 inside the disk
        let f = p(&[(0, 1, 1.0), (0, 0, -0.5), (1, 1, 0.0)]);
        let r = scan(&f);
        assert!(r.has_zero_in_open_bidisk);
        // z1 * (z2 - 1): degenerate slice at z2 = 1 on the boundary, open zeros at z1 = 0
        let g = &p(&[(1, 0, 1.0)]) * &p(&[(0, 1, 1.0), (0, 0, -1.0)]);
        assert!(scan(&g).has_zero_in_open_bidisk);
    }

    #[test]
    fn swapping_variables_agrees() {
        let cases = [
            p(&[(1, 1, 1.0)]),
            p(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]),
            p(&[(0, 0, 1.0), (2, 0, 0.3), (1, 2, -0.9)]),
            p(&[(0, 0, 0.5), (1, 0, 1.0), (0, 1, 0.2)]),
            fa(0.25),
        ];
        for f in &cases {
            assert_eq!(scan(f).has_zero_in_open_bidisk, scan(&f.swap_variables()).has_zero_in_open_bidisk, "{f}");
        }
    }

    #[test]
    fn irreducible_stable_examples_only_meet_the_torus() {
        for f in [fa(0.5), fa(0.25), p(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]), p(&[(0, 0, 1.0), (1, 1, 1.0)])] {
            let r = scan(&f);
            assert!(!r.has_zero_in_open_bidisk);
            assert_eq!(r.off_torus_hits, 0, "{f}");
        }
    }

    #[test]
    fn single_torus_point() {
        let f = p(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]);
        let t = torus_zero_classification(&f).unwrap();
        assert_eq!(t.kind, TorusZeroKind::Finite);
        assert_eq!(t.points.len(), 1);
        let one = Complex64::new(1.0, 0.0);
        assert!((t.points[0][0] - one).norm() < 1e-6 && (t.points[0][1] - one).norm() < 1e-6);
        let r = f.reflect().unwrap();
        for q in &t.points {
            assert!((q[0].norm() - 1.0).abs() <= 1e-10 && (q[1].norm() - 1.0).abs() <= 1e-10);
            assert!(f.evaluate(q[0], q[1]).norm() <= 1e-8 * f.max_abs());
            assert!(r.evaluate(q[0], q[1]).norm() <= 1e-8 * f.max_abs());
        }
    }

    #[test]
    fn four_torus_points() {
        let f = p(&[(0, 0, 2.0), (2, 0, -1.0), (0, 2, -1.0)]);
        let t = torus_zero_classification(&f).unwrap();
        assert_eq!(t.kind, TorusZeroKind::Finite);
        assert_eq!(t.points.len(), 4);
        for q in &t.points {
            assert!((q[0].re.abs() - 1.0).abs() < 1e-6 && (q[1].re.abs() - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn curves_and_empty_sets() {
        let t = torus_zero_classification(&p(&[(0, 0, 1.0), (1, 1, -1.0)])).unwrap();
        assert_eq!(t.kind, TorusZeroKind::Curve);
        assert!(!t.axis_aligned);
        assert!(t.symmetry.as_ref().unwrap().matches);

        let t = torus_zero_classification(&p(&[(0, 0, 3.0), (1, 0, 1.0), (0, 1, 1.0)])).unwrap();
        assert_eq!(t.kind, TorusZeroKind::Empty);

        let t = torus_zero_classification(&p(&[(1, 0, 1.0), (0, 0, -1.0)])).unwrap();
        assert_eq!(t.kind, TorusZeroKind::Curve);
        assert!(t.axis_aligned);

        let t = torus_zero_classification(&p(&[(0, 2, 1.0), (0, 0, 4.0)])).unwrap();
        assert_eq!(t.kind, TorusZeroKind::Empty);
    }

    #[test]
    fn rejects_open_zeros_and_reducible_input() {
        assert!(matches!(torus_zero_classification(&p(&[(1, 1, 1.0)])), Err(Error::ZerosInBidisk { .. })));
        let f = &p(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]) * &p(&[(0, 0, 1.0), (1, 1, 1.0)]);
        assert!(matches!(torus_zero_classification(&f), Err(Error::NotIrreducible(_))));
    }
}
