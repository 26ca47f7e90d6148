//! Dirichlet-type norms on coefficient grids and optimal polynomial approximants.
//!
//! The norm of `f = sum a_{k,l} z1^k z2^l` is
//! `sum (k+1)^alpha (l+1)^alpha |a_{k,l}|^2`. An approximant of total degree
//! at most `N` minimizes `||p f - 1||` over the span of `z1^i z2^j f`,
//! `i + j <= N`; the resulting distances tend to zero exactly when `f` is cyclic.

use crate::error::{Error, Result};
use crate::poly2::Poly2;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaSpace {
    pub alpha: f64,
}

impl AlphaSpace {
    pub fn new(alpha: f64) -> Self {
        Self { alpha }
    }

    /// `(k+1)^alpha (l+1)^alpha`
    pub fn weight(&self, k: usize, l: usize) -> f64 {
        (((k + 1) * (l + 1)) as f64).powf(self.alpha)
    }
}

pub fn alpha_norm(f: &Poly2, space: AlphaSpace) -> f64 {
    f.terms().map(|((k, l), c)| space.weight(k, l) * c.norm_sqr()).sum::<f64>().sqrt()
}

/// `sum w(k,l) a_{k,l} conj(b_{k,l})`, linear in the first argument.
pub fn alpha_inner(f: &Poly2, g: &Poly2, space: AlphaSpace) -> Complex64 {
    f.terms().map(|((k, l), a)| a * g.coeff(k, l).conj() * space.weight(k, l)).sum()
}

/// Nodes and weights on `[0, 1]` for `int_0^1 p(s) (1-s)^a ds`, exact for
/// polynomials of degree below `2 * count`.
pub fn gauss_jacobi_unit(count: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(count > 0 && a > -1.0);
    // Jacobi matrix for weight (1-x)^a on [-1, 1] (b = 0)
    let b = 0.0;
    let mut jac = DMatrix::<f64>::zeros(count, count);
    for i in 0..count {
        let n = i as f64;
        let s = 2.0 * n + a + b;
        jac[(i, i)] = if i == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        if i + 1 < count {
            let n = n + 1.0;
            let s = 2.0 * n + a + b;
            let off = (4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mass = 1.0 / (a + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..count)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (0.5 * (1.0 + eig.eigenvalues[i]), mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// Integral form of the norm with `w(z) = 1 - |z|^2` and area measure
/// normalized to total mass one, evaluated by Gauss-Jacobi in `|z|^2`
/// times the trapezoid rule in angle, `nodes` points per axis.
pub fn integral_norm_quadrature(f: &Poly2, alpha: f64, nodes: usize) -> Result<f64> {
    if !(alpha < 2.0) {
        return Err(Error::InvalidArgument(format!("integral norm needs alpha < 2, got {alpha}")));
    }
    if nodes == 0 {
        return Err(Error::InvalidArgument("quadrature needs at least one node".into()));
    }
    let (s, w) = gauss_jacobi_unit(nodes, 1.0 - alpha);
    // disk points and weights; the angular average carries weight 1/nodes
    let disk: Vec<(Complex64, f64)> = s
        .iter()
        .zip(&w)
        .flat_map(|(&s, &w)| {
            (0..nodes).map(move |j| (Complex64::from_polar(s.sqrt(), TAU * j as f64 / nodes as f64), w / nodes as f64))
        })
        .collect();

    let origin = f.evaluate(ZERO, ZERO).norm_sqr();
    let d1 = f.partial_derivative(crate::Axis::Z1);
    let d2 = f.partial_derivative(crate::Axis::Z2);
    let d12 = d1.partial_derivative(crate::Axis::Z2);
    let edge1: f64 = disk.iter().map(|&(z, w)| w * d1.evaluate(z, ZERO).norm_sqr()).sum();
    let edge2: f64 = disk.iter().map(|&(z, w)| w * d2.evaluate(ZERO, z).norm_sqr()).sum();
    let mixed: f64 = if d12.is_zero() {
        0.0
    } else {
        disk.par_iter()
            .map(|&(z1, w1)| {
                let slice = d12.slice_z2(z1);
                w1 * disk.iter().map(|&(z2, w2)| w2 * slice.eval(z2).norm_sqr()).sum::<f64>()
            })
            .collect::<Vec<f64>>()
            .iter()
            .sum()
    };
    Ok((origin + edge1 + edge2 + mixed).sqrt())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ApproximantResult {
    pub alpha: f64,
    pub degree_cap: usize,
    pub approximant: Poly2,
    pub distance: f64,
    pub gram_condition: f64,
}

/// Monomial exponents `(i, j)` with `i + j <= cap`, ordered by total degree.
pub fn total_degree_basis(cap: usize) -> Vec<(usize, usize)> {
    (0..=cap).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect()
}

/// `<z^s f, z^r f>` for the shift exponents `s`, `r`.
fn shifted_gram_entry(
    terms: &[((usize, usize), Complex64)],
    f: &Poly2,
    s: (usize, usize),
    r: (usize, usize),
    space: AlphaSpace,
) -> Complex64 {
    // coefficient of z^(k+s) in z^s f is a_k; in z^r f it is a_{k+s-r}
    let mut acc = ZERO;
    for &((k, l), a) in terms {
        let (p, q) = (k + s.0, l + s.1);
        if p < r.0 || q < r.1 {
            continue;
        }
        let b = f.coeff(p - r.0, q - r.1);
        if b != ZERO {
            acc += a * b.conj() * space.weight(p, q);
        }
    }
    acc
}

pub fn optimal_approximant(f: &Poly2, space: AlphaSpace, degree_cap: usize) -> Result<ApproximantResult> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let basis = total_degree_basis(degree_cap);
    let size = basis.len();
    let terms: Vec<_> = f.terms().collect();

    // gram[(r, s)] = <phi_s, phi_r>, rhs[r] = <1, phi_r>
    let rows: Vec<Vec<Complex64>> = basis
        .par_iter()
        .map(|&r| basis.iter().map(|&s| shifted_gram_entry(&terms, f, s, r, space)).collect())
        .collect();
    let gram = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
    let mut rhs = DVector::<Complex64>::zeros(size);
    rhs[0] = f.coeff(0, 0).conj();

    // symmetric diagonal scaling before factoring
    let scale: Vec<f64> = (0..size).map(|i| 1.0 / gram[(i, i)].re.sqrt()).collect();
    let scaled = DMatrix::from_fn(size, size, |i, j| gram[(i, j)] * scale[i] * scale[j]);
    let scaled_rhs = DVector::from_fn(size, |i, _| rhs[i] * scale[i]);

    let eig = SymmetricEigen::new(scaled.clone());
    let (lo, hi) = eig.eigenvalues.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let gram_condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };

    let chol = match scaled.clone().cholesky() {
        Some(c) => c,
        None => {
            let jitter = 1e-12 * scaled.trace().re;
            let mut shifted = scaled.clone();
            for i in 0..size {
                shifted[(i, i)] += Complex64::new(jitter, 0.0);
            }
            shifted.cholesky().ok_or(Error::SingularGram { condition: gram_condition })?
        }
    };
    let mut y = chol.solve(&scaled_rhs);
    for _ in 0..3 {
        let residual = &scaled_rhs - &scaled * &y;
        y += chol.solve(&residual);
    }

    let coeffs: Vec<_> = basis.iter().enumerate().map(|(i, &(a, b))| ((a, b), y[i] * scale[i])).collect();
    let approximant = Poly2::from_terms(&coeffs);
    let distance = approximant_distance(f, &approximant, space);
    Ok(ApproximantResult { alpha: space.alpha, degree_cap, approximant, distance, gram_condition })
}

/// `||p f - 1||_alpha`
pub fn approximant_distance(f: &Poly2, p: &Poly2, space: AlphaSpace) -> f64 {
    let one = Poly2::constant(Complex64::new(1.0, 0.0));
    alpha_norm(&(&(p * f) - &one), space)
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ProfileRow {
    #[serde(rename = "N")]
    pub degree_cap: usize,
    #[serde(rename = "d_N")]
    pub distance: f64,
    pub gram_condition: f64,
}

pub fn distance_profile(f: &Poly2, space: AlphaSpace, caps: &[usize]) -> Result<Vec<ProfileRow>> {
    if caps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("degree caps must be strictly increasing".into()));
    }
    caps.iter()
        .map(|&n| {
            let r = optimal_approximant(f, space, n)?;
            Ok(ProfileRow { degree_cap: n, distance: r.distance, gram_condition: r.gram_condition })
        })
        .collect()
}
