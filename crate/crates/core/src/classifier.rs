//! Cyclicity thresholds for products of polynomials with no zeros in the open
//! bidisk, decided from the zero set on the closed bidisk and the torus.
//!
//! Factors are expected to be irreducible. Full circles `{zeta} x T` hidden in
//! a bivariate factor (a one-variable divisor with a unimodular root) are
//! split off before the torus trichotomy runs, so products such as
//! `(1 - z1)(1 - z2)` are still classified correctly.

use crate::capacity::{noncyclicity_certificate, Certificate, Trend};
use crate::dirichlet::{distance_profile, AlphaSpace, ProfileRow};
use crate::error::{Error, Result};
use crate::poly2::{Axis, Poly2};
use crate::stability::{
    bidisk_zero_scan, classify_torus_zeros, BidiskStabilityReport, TorusZeroKind, TorusZeroSet, DEFAULT_ANGULAR_STEPS,
    DEFAULT_RADIAL_STEPS,
};
use crate::univariate::UniPoly;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Ordered from most to least restrictive; a product gets the minimum over its factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Threshold {
    NotCyclicAnyAlpha,
    CyclicIffAlphaLeqHalf,
    CyclicIffAlphaLeqOne,
    CyclicAllAlpha,
}

impl Threshold {
    pub fn is_cyclic_at(self, alpha: f64) -> bool {
        match self {
            Threshold::NotCyclicAnyAlpha => false,
            Threshold::CyclicIffAlphaLeqHalf => alpha <= 0.5,
            Threshold::CyclicIffAlphaLeqOne => alpha <= 1.0,
            Threshold::CyclicAllAlpha => true,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Threshold::NotCyclicAnyAlpha => "not cyclic for any alpha",
            Threshold::CyclicIffAlphaLeqHalf => "cyclic iff alpha <= 1/2",
            Threshold::CyclicIffAlphaLeqOne => "cyclic iff alpha <= 1",
            Threshold::CyclicAllAlpha => "cyclic for all alpha",
        }
    }
}

/// Which case of the decision procedure produced a factor verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    ZeroInOpenBidisk,
    NoZeroOnClosedBidisk,
    ConstantFactor,
    UnivariateTorusRoot,
    EmptyTorusZeros,
    FiniteTorusZeros,
    TorusCurve,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorAnalysis {
    pub factor: Poly2,
    pub threshold: Threshold,
    pub rule: Rule,
    pub scan: Option<BidiskStabilityReport>,
    pub torus: Option<TorusZeroSet>,
    /// Factors `z_j - zeta` with `|zeta| = 1` divided out before the torus analysis.
    pub axis_factors: Vec<Poly2>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlphaEvidence {
    pub alpha: f64,
    pub theorem_says_cyclic: bool,
    pub profile: Vec<ProfileRow>,
    pub certificate: Option<Certificate>,
    pub disagreements: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclicityVerdict {
    pub threshold: Threshold,
    pub per_factor: Vec<FactorAnalysis>,
    pub evidence: Vec<AlphaEvidence>,
}

impl CyclicityVerdict {
    pub fn has_disagreements(&self) -> bool {
        self.evidence.iter().any(|e| !e.disagreements.is_empty())
    }
}

const AXIS_ROOT_BAND: f64 = 1e-6;
const AXIS_VALUE_TOL: f64 = 1e-9;

/// Coefficients of `f` as polynomials in `z1`, one per power of `z2`.
fn z1_columns(f: &Poly2) -> Vec<UniPoly> {
    let (n, m) = f.bidegree();
    (0..=m).map(|l| UniPoly::new((0..=n).map(|k| f.coeff(k, l)).collect())).collect()
}

fn from_z1_columns(cols: &[UniPoly]) -> Poly2 {
    let terms: Vec<_> = cols
        .iter()
        .enumerate()
        .flat_map(|(l, c)| c.coeffs.iter().enumerate().map(move |(k, &v)| ((k, l), v)))
        .collect();
    Poly2::from_terms(&terms)
}

/// Quotient of `p` by `z - r`, dropping the remainder.
fn deflate(p: &UniPoly, r: Complex64) -> UniPoly {
    let c = &p.coeffs;
    if c.len() <= 1 {
        return UniPoly::new(vec![Complex64::new(0.0, 0.0)]);
    }
    let mut q = vec![Complex64::new(0.0, 0.0); c.len() - 1];
    let mut acc = Complex64::new(0.0, 0.0);
    for d in (1..c.len()).rev() {
        acc = acc * r + c[d];
        q[d - 1] = acc;
    }
    UniPoly::new(q)
}

/// Splits off divisors `z1 - zeta` with `|zeta| = 1`, returning them and the cofactor.
fn split_z1_circles(f: &Poly2) -> (Vec<Complex64>, Poly2) {
    let mut cols = z1_columns(f);
    let mut found = Vec::new();
    let scale = f.max_abs();
    loop {
        let nonzero: Vec<&UniPoly> = cols.iter().filter(|c| c.max_abs() > 1e-14 * scale).collect();
        let Some(pivot) = nonzero.iter().min_by_key(|c| c.trimmed(1e-14).coeffs.len()) else { break };
        let pivot = pivot.trimmed(1e-14);
        if pivot.coeffs.len() <= 1 {
            break;
        }
        let root = pivot
            .roots()
            .into_iter()
            .filter(|r| (r.norm() - 1.0).abs() <= AXIS_ROOT_BAND)
            .map(|r| r / r.norm())
            .find(|&r| cols.iter().all(|c| c.eval(r).norm() <= AXIS_VALUE_TOL * scale));
        let Some(r) = root else { break };
        cols = cols.iter().map(|c| deflate(c, r)).collect();
        found.push(r);
    }
    (found, from_z1_columns(&cols))
}

/// One-variable divisors of `f` vanishing on a full circle of the torus, and the cofactor.
pub fn split_axis_factors(f: &Poly2) -> (Vec<Poly2>, Poly2) {
    let (r1, rest) = split_z1_circles(f);
    let (r2, rest) = split_z1_circles(&rest.swap_variables());
    let rest = rest.swap_variables();
    let one = Complex64::new(1.0, 0.0);
    let mut out: Vec<Poly2> =
        r1.iter().map(|&r| Poly2::from_univariate(Axis::Z1, &UniPoly::new(vec![-r, one]))).collect();
    out.extend(r2.iter().map(|&r| Poly2::from_univariate(Axis::Z2, &UniPoly::new(vec![-r, one]))));
    (out, rest)
}

/// Verdict for a single factor.
pub fn classify_factor(f: &Poly2) -> Result<FactorAnalysis> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let finish = |threshold, rule, scan, torus, axis_factors| FactorAnalysis {
        factor: f.clone(),
        threshold,
        rule,
        scan,
        torus,
        axis_factors,
    };
    if f.is_constant() {
        return Ok(finish(Threshold::CyclicAllAlpha, Rule::ConstantFactor, None, None, Vec::new()));
    }
    let scan = bidisk_zero_scan(f, DEFAULT_RADIAL_STEPS, DEFAULT_ANGULAR_STEPS)?;
    if scan.has_zero_in_open_bidisk {
        return Ok(finish(Threshold::NotCyclicAnyAlpha, Rule::ZeroInOpenBidisk, Some(scan), None, Vec::new()));
    }
    if !scan.has_zero_on_closed_bidisk {
        return Ok(finish(Threshold::CyclicAllAlpha, Rule::NoZeroOnClosedBidisk, Some(scan), None, Vec::new()));
    }
    if f.as_univariate().is_some() {
        let torus = classify_torus_zeros(f)?;
        let (threshold, rule) = if torus.kind == TorusZeroKind::Empty {
            (Threshold::CyclicAllAlpha, Rule::EmptyTorusZeros)
        } else {
            (Threshold::CyclicIffAlphaLeqOne, Rule::UnivariateTorusRoot)
        };
        return Ok(finish(threshold, rule, Some(scan), Some(torus), Vec::new()));
    }
    let (axis_factors, rest) = split_axis_factors(f);
    let floor = if axis_factors.is_empty() { Threshold::CyclicAllAlpha } else { Threshold::CyclicIffAlphaLeqOne };
    if rest.is_constant() {
        return Ok(finish(floor, Rule::UnivariateTorusRoot, Some(scan), None, axis_factors));
    }
    let torus = classify_torus_zeros(&rest)?;
    let (threshold, rule) = match torus.kind {
        TorusZeroKind::Empty => (Threshold::CyclicAllAlpha, Rule::EmptyTorusZeros),
        TorusZeroKind::Finite => (Threshold::CyclicIffAlphaLeqOne, Rule::FiniteTorusZeros),
        TorusZeroKind::Curve if torus.axis_aligned => (Threshold::CyclicIffAlphaLeqOne, Rule::UnivariateTorusRoot),
        TorusZeroKind::Curve => (Threshold::CyclicIffAlphaLeqHalf, Rule::TorusCurve),
    };
    let rule = if threshold > floor { Rule::UnivariateTorusRoot } else { rule };
    Ok(finish(threshold.min(floor), rule, Some(scan), Some(torus), axis_factors))
}

/// Threshold of the product of `factors` (each assumed irreducible).
pub fn classify(factors: &[Poly2]) -> Result<CyclicityVerdict> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("at least one factor is required".into()));
    }
    let per_factor = factors.par_iter().map(classify_factor).collect::<Result<Vec<_>>>()?;
    let threshold = per_factor.iter().map(|a| a.threshold).min().expect("nonempty");
    Ok(CyclicityVerdict { threshold, per_factor, evidence: Vec::new() })
}

pub fn product(factors: &[Poly2]) -> Poly2 {
    factors.iter().fold(Poly2::constant(Complex64::new(1.0, 0.0)), |acc, f| &acc * f)
}

/// [`classify`] plus, for each `alpha`, the distance profile of the product
/// and, for curve factors with `alpha > 1/2`, an energy certificate. The
/// evidence never changes the threshold; mismatches are listed per `alpha`.
pub fn classify_with_evidence(factors: &[Poly2], alphas: &[f64], degree_caps: &[usize]) -> Result<CyclicityVerdict> {
    let mut verdict = classify(factors)?;
    let f = product(factors);
    let curve_factor = verdict.per_factor.iter().find(|a| a.rule == Rule::TorusCurve).map(|a| a.factor.clone());
    for &alpha in alphas {
        let profile = distance_profile(&f, AlphaSpace::new(alpha), degree_caps)?;
        let cyclic = verdict.threshold.is_cyclic_at(alpha);
        let mut disagreements = Vec::new();
        if cyclic && profile.len() >= 2 {
            let (first, last) = (profile[0].distance, profile[profile.len() - 1].distance);
            if !(last < first * (1.0 - 1e-6)) {
                disagreements.push(format!(
                    "cyclic at alpha = {alpha} but the distance did not decrease ({first:.6} -> {last:.6})"
                ));
            }
        }
        let certificate = match (&curve_factor, verdict.threshold) {
            (Some(g), Threshold::CyclicIffAlphaLeqHalf) if alpha > 0.5 && alpha <= 1.0 => {
                let c = noncyclicity_certificate(g, alpha)?;
                if c.energy.verdict != Trend::ConvergentTrend {
                    disagreements
                        .push(format!("not cyclic at alpha = {alpha} but the energy trend is {:?}", c.energy.verdict));
                }
                Some(c)
            }
            _ => None,
        };
        verdict.evidence.push(AlphaEvidence {
            alpha,
            theorem_says_cyclic: cyclic,
            profile,
            certificate,
            disagreements,
        });
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thresholds_are_ordered() {
        assert!(Threshold::NotCyclicAnyAlpha < Threshold::CyclicIffAlphaLeqHalf);
        assert!(Threshold::CyclicIffAlphaLeqHalf < Threshold::CyclicIffAlphaLeqOne);
        assert!(Threshold::CyclicIffAlphaLeqOne < Threshold::CyclicAllAlpha);
        assert!(Threshold::CyclicIffAlphaLeqHalf.is_cyclic_at(0.5));
        assert!(!Threshold::CyclicIffAlphaLeqHalf.is_cyclic_at(0.51));
        assert!(Threshold::CyclicAllAlpha.is_cyclic_at(7.0));
    }

    #[test]
    fn deflation_divides_exactly() {
        let one = Complex64::new(1.0, 0.0);
        let p = UniPoly::from_roots(&[one, Complex64::new(0.0, 2.0)]);
        let q = deflate(&p, one);
        assert!(
            (q.eval(Complex64::new(0.3, 0.1)) - (Complex64::new(0.3, 0.1) - Complex64::new(0.0, 2.0))).norm() < 1e-14
        );
    }

    #[test]
    fn circles_split_from_products() {
        let f = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 1.0)]);
        let (axis, rest) = split_axis_factors(&f);
        assert_eq!(axis.len(), 2);
        assert!(rest.is_constant());
        let g = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 1, 1.0)]);
        let (axis, rest) = split_axis_factors(&g);
        assert!(axis.is_empty());
        assert!(rest.max_coeff_diff(&g) == 0.0);
    }
}
