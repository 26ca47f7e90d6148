//! Determinantal representations `f = c det(I - U diag(z1 I_n, z2 I_m))`.
//!
//! Going from a unitary to a polynomial is a determinant on a roots-of-unity
//! grid. Going back needs a pair `(P, Q)` satisfying the sums-of-squares
//! identity for `h = z1 f_1 + z2 f_2`; the unitary is then the Procrustes fit
//! of `U (z1 P; z2 Q) = (P; Q)` on sampled points of the zero set.

use crate::error::{Error, Result};
use crate::fourier;
use crate::poly2::Poly2;
use crate::univariate::UniPoly;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// `[[re, im], ...]` rows.
pub type ComplexRows = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_rows(m: &DMatrix<Complex64>) -> ComplexRows {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn matrix_from_rows(rows: &ComplexRows) -> Result<DMatrix<Complex64>> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Shape("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// `max |U* U - I|`
pub fn unitarity_defect(u: &DMatrix<Complex64>) -> f64 {
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..g.nrows() {
        for j in 0..g.ncols() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((g[(i, j)] - target).norm());
        }
    }
    worst
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "DetRepJson", into = "DetRepJson")]
pub struct DetRep {
    pub c: Complex64,
    pub u: DMatrix<Complex64>,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DetRepJson {
    pub c: [f64; 2],
    pub n: usize,
    pub m: usize,
    pub u: ComplexRows,
}

impl TryFrom<DetRepJson> for DetRep {
    type Error = Error;

    fn try_from(j: DetRepJson) -> Result<Self> {
        DetRep::new(Complex64::new(j.c[0], j.c[1]), matrix_from_rows(&j.u)?, j.n, j.m)
    }
}

impl From<DetRep> for DetRepJson {
    fn from(r: DetRep) -> Self {
        DetRepJson { c: [r.c.re, r.c.im], n: r.n, m: r.m, u: matrix_to_rows(&r.u) }
    }
}

impl DetRep {
    /// Validates the shape and unitarity of `u`.
    pub fn new(c: Complex64, u: DMatrix<Complex64>, n: usize, m: usize) -> Result<Self> {
        if u.nrows() != n + m || u.ncols() != n + m {
            return Err(Error::Shape(format!("U is {}x{} but n + m = {}", u.nrows(), u.ncols(), n + m)));
        }
        let deviation = unitarity_defect(&u);
        if !(deviation <= UNITARY_TOLERANCE) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self { c, u, n, m })
    }

    /// `c det(I - U diag(z1 I_n, z2 I_m))` at one point.
    pub fn evaluate(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let size = self.n + self.m;
        let a = DMatrix::from_fn(size, size, |i, j| {
            let z = if j < self.n { z1 } else { z2 };
            let id = if i == j { ONE } else { ZERO };
            id - self.u[(i, j)] * z
        });
        self.c * a.determinant()
    }
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of the diagonal of R moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(size: usize, rng: &mut R) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(size, size, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..size {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..size {
            q[(i, j)] *= phase;
        }
    }
    q
}

pub fn polynomial_from_unitary(rep: &DetRep) -> Result<Poly2> {
    let deviation = unitarity_defect(&rep.u);
    if !(deviation <= UNITARY_TOLERANCE) {
        return Err(Error::NotUnitary { deviation });
    }
    let (rows, cols) = (rep.n + 1, rep.m + 1);
    let u1 = fourier::roots_of_unity(rows);
    let u2 = fourier::roots_of_unity(cols);
    let mut grid: Vec<Complex64> =
        u1.iter().flat_map(|&z1| u2.iter().map(move |&z2| (z1, z2))).map(|(z1, z2)| rep.evaluate(z1, z2)).collect();
    fourier::transform_2d(&mut grid, rows, cols);
    Poly2::from_grid(grid.chunks(cols).map(|r| r.to_vec()).collect())
}

/// Vectors `P` (length n) and `Q` (length m) of the sums-of-squares identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AglerPair {
    #[serde(rename = "P")]
    pub p: Vec<Poly2>,
    #[serde(rename = "Q")]
    pub q: Vec<Poly2>,
}

impl AglerPair {
    pub fn new(p: Vec<Poly2>, q: Vec<Poly2>) -> Self {
        Self { p, q }
    }

    /// `Pmat[i][j]` is the coefficient of `z1^j` in `P_i`, a polynomial in `z2`.
    pub fn pmat(&self) -> Vec<Vec<UniPoly>> {
        let n = self.p.len();
        self.p
            .iter()
            .map(|pi| {
                let (_, m) = pi.bidegree();
                (0..n).map(|j| UniPoly::new((0..=m).map(|l| pi.coeff(j, l)).collect())).collect()
            })
            .collect()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { p: self.p.iter().map(|x| x.scale(s)).collect(), q: self.q.iter().map(|x| x.scale(s)).collect() }
    }

    fn check_shape(&self, n: usize, m: usize) -> Result<()> {
        if self.p.len() != n || self.q.len() != m {
            return Err(Error::Shape(format!(
                "pair has lengths ({}, {}) but f has bidegree ({n}, {m})",
                self.p.len(),
                self.q.len()
            )));
        }
        Ok(())
    }

    fn eval(list: &[Poly2], z1: Complex64, z2: Complex64) -> Vec<Complex64> {
        list.iter().map(|e| e.evaluate(z1, z2)).collect()
    }
}

fn random_disk_point<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let r: f64 = rng.random::<f64>().sqrt();
    Complex64::from_polar(r, TAU * rng.random::<f64>())
}

/// Largest deviation, over `samples` random `(z, w)` in the bidisk squared, between
/// `h~(z) h~(w)* - h(z) h(w)*` and `(1 - z1 w1*) P(w)* P(z) + (1 - z2 w2*) Q(w)* Q(z)`.
pub fn verify_agler_identity<R: Rng + ?Sized>(f: &Poly2, pair: &AglerPair, samples: usize, rng: &mut R) -> Result<f64> {
    let (n, m) = f.bidegree();
    pair.check_shape(n, m)?;
    let h = f.compute_h();
    let ht = h.reflect_at(n, m);
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (z1, z2, w1, w2) =
            (random_disk_point(rng), random_disk_point(rng), random_disk_point(rng), random_disk_point(rng));
        let lhs = ht.evaluate(z1, z2) * ht.evaluate(w1, w2).conj() - h.evaluate(z1, z2) * h.evaluate(w1, w2).conj();
        let pz = AglerPair::eval(&pair.p, z1, z2);
        let pw = AglerPair::eval(&pair.p, w1, w2);
        let qz = AglerPair::eval(&pair.q, z1, z2);
        let qw = AglerPair::eval(&pair.q, w1, w2);
        let rhs = (ONE - z1 * w1.conj()) * dot(&pw, &pz) + (ONE - z2 * w2.conj()) * dot(&qw, &qz);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Points `(e^{it}, z2)` of the zero set with `|z2| = 1`, from `count` equally
/// spaced angles (offset by half a step).
pub fn torus_zero_samples(f: &Poly2, count: usize) -> Vec<[Complex64; 2]> {
    let mut pts = Vec::new();
    for j in 0..count {
        let z1 = Complex64::from_polar(1.0, TAU * (j as f64 + 0.5) / count as f64);
        for z2 in f.slice_z2(z1).roots() {
            if (z2.norm() - 1.0).abs() <= 1e-6 {
                pts.push([z1, z2 / z2.norm()]);
            }
        }
    }
    pts
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitaryFit {
    pub rep: DetRep,
    /// Largest coefficient difference between `c det(...)` and `f`.
    pub regeneration_residual: f64,
    /// `||U X - Y||_F / ||Y||_F` over the samples.
    pub fit_residual: f64,
    pub samples_used: usize,
}

pub fn unitary_from_pair(f: &Poly2, pair: &AglerPair, zero_samples: usize) -> Result<UnitaryFit> {
    let (n, m) = f.bidegree();
    pair.check_shape(n, m)?;
    let size = n + m;
    let pts = torus_zero_samples(f, zero_samples);
    let x = DMatrix::from_fn(size, pts.len(), |i, j| {
        let [z1, z2] = pts[j];
        if i < n {
            z1 * pair.p[i].evaluate(z1, z2)
        } else {
            z2 * pair.q[i - n].evaluate(z1, z2)
        }
    });
    let y = DMatrix::from_fn(size, pts.len(), |i, j| {
        let [z1, z2] = pts[j];
        if i < n {
            pair.p[i].evaluate(z1, z2)
        } else {
            pair.q[i - n].evaluate(z1, z2)
        }
    });
    let sv = x.clone().svd(false, false).singular_values;
    let top = sv.iter().cloned().fold(0.0, f64::max);
    let rank = sv.iter().filter(|&&s| s > 1e-8 * top).count();
    if pts.is_empty() || rank < size {
        return Err(Error::RankDeficient { rank, needed: size });
    }

    let svd = (&y * x.adjoint()).svd(true, true);
    let u = svd.u.expect("left vectors") * svd.v_t.expect("right vectors");
    let fit_residual = (&u * &x - &y).norm() / y.norm();

    let c = f.coeff(0, 0);
    let rep = DetRep::new(c, u, n, m)?;
    let regenerated = polynomial_from_unitary(&rep)?;
    let regeneration_residual = regenerated.max_coeff_diff(f);
    if !(regeneration_residual <= 1e-8 * f.max_abs().max(1.0)) {
        return Err(Error::RegenerationMismatch { residual: regeneration_residual });
    }
    Ok(UnitaryFit { rep, regeneration_residual, fit_residual, samples_used: pts.len() })
}

/// `det Pmat(z2)`, interpolated from its values at roots of unity. Fails when
/// a root lies inside the unit disk by more than `1e-8`.
pub fn det_p_extraction(pair: &AglerPair) -> Result<UniPoly> {
    let pmat = pair.pmat();
    let n = pmat.len();
    if n == 0 {
        return Ok(UniPoly::constant(ONE));
    }
    let deg = pmat.iter().flatten().map(|e| e.trimmed(0.0).formal_degree()).max().unwrap_or(0);
    let nodes = fourier::roots_of_unity(n * deg + 1);
    let values: Vec<Complex64> =
        nodes.iter().map(|&z| DMatrix::from_fn(n, n, |i, j| pmat[i][j].eval(z)).determinant()).collect();
    let det = UniPoly::new(fourier::interpolate_1d(&values));
    if det.is_zero(0.0) {
        return Err(Error::DetPZeroInDisk { root: "identically zero".into() });
    }
    if let Some(r) = det.roots().into_iter().find(|r| r.norm() < 1.0 - 1e-8) {
        return Err(Error::DetPZeroInDisk { root: r.to_string() });
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[a, b, cc, d])
    }

    #[test]
    fn two_by_two_family() {
        let a = c(0.3, 0.4);
        let b = c((1.0 - a.norm_sqr()).sqrt(), 0.0);
        let u = mat2(a, -b.conj(), b, a.conj());
        let f = polynomial_from_unitary(&DetRep::new(ONE, u, 1, 1).unwrap()).unwrap();
        let want = Poly2::from_terms(&[((0, 0), ONE), ((1, 0), -a), ((0, 1), -a.conj()), ((1, 1), ONE)]);
        assert!(f.max_coeff_diff(&want) < 1e-14);
    }

    #[test]
    fn hand_expanded_determinants() {
        let rot = mat2(ZERO, -ONE, ONE, ZERO);
        let f = polynomial_from_unitary(&DetRep::new(ONE, rot, 1, 1).unwrap()).unwrap();
        assert!(f.max_coeff_diff(&Poly2::from_real_terms(&[(0, 0, 1.0), (1, 1, 1.0)])) < 1e-15);
        let id = DMatrix::<Complex64>::identity(2, 2);
        let g = polynomial_from_unitary(&DetRep::new(ONE, id, 1, 1).unwrap()).unwrap();
        let want = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 0, -1.0), (0, 1, -1.0), (1, 1, 1.0)]);
        assert!(g.max_coeff_diff(&want) < 1e-15);
    }

    #[test]
    fn rejects_non_unitary_and_bad_shapes() {
        let m = mat2(ONE, ONE, ZERO, ONE);
        assert!(matches!(DetRep::new(ONE, m, 1, 1), Err(Error::NotUnitary { .. })));
        assert!(matches!(DetRep::new(ONE, DMatrix::identity(3, 3), 1, 1), Err(Error::Shape(_))));
    }

    #[test]
    fn haar_samples_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for size in 1..=6 {
            assert!(unitarity_defect(&haar_unitary(size, &mut rng)) < 1e-13);
        }
    }

    #[test]
    fn det_p_of_trivial_and_bad_pairs() {
        let pair = AglerPair::new(vec![Poly2::constant(c(2.0, 0.0))], vec![Poly2::monomial(1, 0, c(2.0, 0.0))]);
        let d = det_p_extraction(&pair).unwrap();
        assert_eq!(d.formal_degree(), 0);
        assert!((d.coeffs[0] - c(2.0, 0.0)).norm() < 1e-15);

        // Pmat = diag(1 - 2 z2, 1)
        let bad = AglerPair::new(
            vec![Poly2::from_real_terms(&[(0, 0, 1.0), (0, 1, -2.0)]), Poly2::monomial(1, 0, ONE)],
            vec![],
        );
        assert!(matches!(det_p_extraction(&bad), Err(Error::DetPZeroInDisk { .. })));
    }

    #[test]
    fn json_round_trip() {
        let rep = DetRep::new(c(0.0, 1.0), mat2(ZERO, ONE, ONE, ZERO), 1, 1).unwrap();
        let s = serde_json::to_string(&rep).unwrap();
        let back: DetRep = serde_json::from_str(&s).unwrap();
        assert_eq!(back.u, rep.u);
        assert_eq!(back.c, rep.c);
        let bad = r#"{"c":[1,0],"n":1,"m":1,"u":[[[1,0],[1,0]],[[0,0],[1,0]]]}"#;
        assert!(serde_json::from_str::<DetRep>(bad).is_err());
    }
}
