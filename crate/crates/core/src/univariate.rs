//! One-variable complex polynomials and their roots.
//!
//! Roots come from the eigenvalues of the Frobenius companion matrix,
//! followed by a couple of Newton steps on the original coefficients.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Polynomial `c[0] + c[1] z + ... + c[d] z^d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniPoly {
    pub coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self { coeffs: vec![ZERO] };
        }
        Self { coeffs }
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `(z - r_1)(z - r_2)...`
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut p = UniPoly::constant(ONE);
        for &r in roots {
            p = p.mul(&UniPoly::new(vec![-r, ONE]));
        }
        p
    }

    /// Formal degree (length of the coefficient vector minus one).
    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.max_abs() <= tol
    }

    /// Drops leading coefficients with modulus at most `rel_tol * max_abs`.
    pub fn trimmed(&self, rel_tol: f64) -> UniPoly {
        let scale = self.max_abs();
        let cut = rel_tol * scale;
        let mut d = self.coeffs.len();
        while d > 1 && self.coeffs[d - 1].norm() <= cut {
            d -= 1;
        }
        UniPoly::new(self.coeffs[..d].to_vec())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() == 1 {
            return UniPoly::constant(ZERO);
        }
        UniPoly::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, e: usize) -> UniPoly {
        let mut acc = UniPoly::constant(ONE);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// All complex roots, with multiplicity. Leading coefficients that are
    /// negligible relative to the largest one are dropped first, so roots at
    /// infinity are not reported. An identically zero polynomial has no
    /// reported roots; callers check `is_zero` separately.
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.trimmed(1e-14);
        let d = p.formal_degree();
        if d == 0 {
            return Vec::new();
        }
        let lead = p.coeffs[d];
        if d == 1 {
            return vec![-p.coeffs[0] / lead];
        }
        if d == 2 {
            return quadratic_roots(p.coeffs[2], p.coeffs[1], p.coeffs[0]).into_iter().map(|r| p.polish(r)).collect();
        }

        let mut companion = DMatrix::<Complex64>::zeros(d, d);
        for i in 1..d {
            companion[(i, i - 1)] = ONE;
        }
        for i in 0..d {
            companion[(i, d - 1)] = -p.coeffs[i] / lead;
        }
        let raw = companion
            .try_schur(f64::EPSILON, 10_000)
            .and_then(|s| s.eigenvalues())
            .map(|v| v.iter().copied().collect::<Vec<_>>())
            .unwrap_or_else(|| durand_kerner(&p));
        raw.into_iter().map(|r| p.polish(r)).collect()
    }

    /// Newton steps that are only accepted while they reduce |p|.
    fn polish(&self, mut z: Complex64) -> Complex64 {
        let dp = self.derivative();
        let mut best = self.eval(z).norm();
        for _ in 0..3 {
            let d = dp.eval(z);
            if d.norm() == 0.0 {
                break;
            }
            let cand = z - self.eval(z) / d;
            let val = self.eval(cand).norm();
            if val < best {
                best = val;
                z = cand;
            } else {
                break;
            }
        }
        z
    }
}

fn quadratic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - a * c * 4.0).sqrt();
    // pick the sign that avoids cancellation
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
    if q.norm() == 0.0 {
        return [ZERO, ZERO];
    }
    [q / a, c / q]
}

fn durand_kerner(p: &UniPoly) -> Vec<Complex64> {
    let d = p.formal_degree();
    let lead = p.coeffs[d];
    let monic = UniPoly::new(p.coeffs.iter().map(|c| c / lead).collect());
    let radius = 1.0 + monic.coeffs[..d].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(radius, 0.4 + std::f64::consts::TAU * k as f64 / d as f64)).collect();
    for _ in 0..2000 {
        let mut shift = 0.0f64;
        for i in 0..d {
            let mut denom = ONE;
            for j in 0..d {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = monic.eval(z[i]) / denom;
            z[i] -= step;
            shift = shift.max(step.norm());
        }
        if shift < 1e-15 * radius {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_same_roots(mut got: Vec<Complex64>, mut want: Vec<Complex64>, tol: f64) {
        let key = |z: &Complex64| (z.re * 1e6).round() as i64 * 1_000_000_000 + (z.im * 1e6).round() as i64;
        got.sort_by_key(key);
        want.sort_by_key(key);
        assert_eq!(got.len(), want.len());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < tol, "{g} vs {w}");
        }
    }

    #[test]
    fn roots_of_products() {
        let want = vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.0), c(3.0, 0.3), c(0.2, -0.9)];
        let p = UniPoly::from_roots(&want);
        assert_same_roots(p.roots(), want, 1e-12);
    }

    #[test]
    fn quadratic_and_linear() {
        let p = UniPoly::from_roots(&[c(2.0, 0.0), c(-1.0, 1.0)]);
        assert_same_roots(p.roots(), vec![c(2.0, 0.0), c(-1.0, 1.0)], 1e-14);
        assert_same_roots(UniPoly::new(vec![c(2.0, 0.0), c(-1.0, 0.0)]).roots(), vec![c(2.0, 0.0)], 1e-15);
    }

    #[test]
    fn negligible_leading_coefficient_is_dropped() {
        let p = UniPoly::new(vec![c(-1.0, 0.0), c(1.0, 0.0), c(1e-20, 0.0)]);
        assert_eq!(p.roots().len(), 1);
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(UniPoly::constant(c(3.0, 0.0)).roots().is_empty());
    }

    #[test]
    fn durand_kerner_fallback_agrees() {
        let want = vec![c(0.5, 0.5), c(-2.0, 0.0), c(1.0, -1.0), c(0.0, 3.0)];
        let p = UniPoly::from_roots(&want);
        let got: Vec<_> = durand_kerner(&p).into_iter().map(|r| p.polish(r)).collect();
        assert_same_roots(got, want, 1e-10);
    }
}
