//! Dense bivariate complex polynomials.
//!
//! A [`Poly2`] stores the coefficient `a_{k,l}` of `z1^k z2^l` on an
//! `(n+1) x (m+1)` grid where `(n, m)` is the bidegree. Every constructor
//! trims empty top rows and columns so the bidegree is tight, which the
//! reflection `f~(z) = z1^n z2^m conj(f(1/conj z1, 1/conj z2))` relies on.

use crate::error::{Error, Result};
use crate::fourier;
use crate::univariate::UniPoly;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Rows/columns below this fraction of the largest coefficient are trimmed.
pub const DEFAULT_TRIM_TOLERANCE: f64 = 1e-12;
/// Relative tolerance for structural predicates such as `f~ = lambda f`.
pub const DEFAULT_SYMMETRY_TOLERANCE: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    Z1,
    Z2,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct Poly2 {
    n: usize,
    m: usize,
    coeffs: Vec<Complex64>,
    trim_tolerance: f64,
}

/// Wire format: `{"bidegree":[n,m],"coeffs":[[[re,im],...],...]}`, row `k`
/// holding the coefficients of `z1^k z2^0 .. z1^k z2^m`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyJson {
    pub bidegree: [usize; 2],
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<PolyJson> for Poly2 {
    type Error = Error;

    fn try_from(value: PolyJson) -> Result<Self> {
        let [n, m] = value.bidegree;
        if value.coeffs.len() != n + 1 {
            return Err(Error::Parse(format!("bidegree ({n},{m}) needs {} rows, found {}", n + 1, value.coeffs.len())));
        }
        let mut grid = Vec::with_capacity(n + 1);
        for (k, row) in value.coeffs.iter().enumerate() {
            if row.len() != m + 1 {
                return Err(Error::Parse(format!("row {k} has {} entries, expected {}", row.len(), m + 1)));
            }
            grid.push(row.iter().map(|&[re, im]| Complex64::new(re, im)).collect());
        }
        Poly2::from_grid(grid)
    }
}

impl From<Poly2> for PolyJson {
    fn from(p: Poly2) -> Self {
        PolyJson {
            bidegree: [p.n, p.m],
            coeffs: (0..=p.n)
                .map(|k| {
                    (0..=p.m)
                        .map(|l| {
                            let c = p.coeff(k, l);
                            [c.re, c.im]
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

/// Outcome of testing `f~ = lambda f` for a unimodular `lambda`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnimodularMatch {
    pub matches: bool,
    pub lambda: Option<Complex64>,
    /// Max coefficient deviation `|b_{k,l} - lambda a_{k,l}|`, relative to `max |a|`.
    pub residual: f64,
}

/// Parameters of the bidisk automorphism
/// `(z1, z2) -> ((a - z1)/(1 - conj(a) z1), (b - z2)/(1 - conj(b) z2))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobiusParams {
    a: Complex64,
    b: Complex64,
}

impl MobiusParams {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        if !(a.norm() < 1.0) {
            return Err(Error::MobiusOutsideDisk { which: "a", value: a.to_string() });
        }
        if !(b.norm() < 1.0) {
            return Err(Error::MobiusOutsideDisk { which: "b", value: b.to_string() });
        }
        Ok(Self { a, b })
    }

    pub fn identity_like() -> Self {
        Self { a: ZERO, b: ZERO }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// Image of a point under the automorphism (an involution).
    pub fn apply(&self, z1: Complex64, z2: Complex64) -> (Complex64, Complex64) {
        ((self.a - z1) / (ONE - self.a.conj() * z1), (self.b - z2) / (ONE - self.b.conj() * z2))
    }
}

impl Poly2 {
    pub fn zero() -> Self {
        Self { n: 0, m: 0, coeffs: vec![ZERO], trim_tolerance: DEFAULT_TRIM_TOLERANCE }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::from_raw(0, 0, vec![c], DEFAULT_TRIM_TOLERANCE)
    }

    pub fn monomial(k: usize, l: usize, c: Complex64) -> Self {
        Self::from_terms(&[((k, l), c)])
    }

    /// Builds a polynomial from `((k, l), a_{k,l})` pairs; repeated indices add up.
    pub fn from_terms(terms: &[((usize, usize), Complex64)]) -> Self {
        let n = terms.iter().map(|t| t.0 .0).max().unwrap_or(0);
        let m = terms.iter().map(|t| t.0 .1).max().unwrap_or(0);
        let mut coeffs = vec![ZERO; (n + 1) * (m + 1)];
        for &((k, l), c) in terms {
            coeffs[k * (m + 1) + l] += c;
        }
        Self::from_raw(n, m, coeffs, DEFAULT_TRIM_TOLERANCE)
    }

    /// Shorthand for real coefficients: `(k, l, a_{k,l})`.
    pub fn from_real_terms(terms: &[(usize, usize, f64)]) -> Self {
        let terms: Vec<_> = terms.iter().map(|&(k, l, c)| ((k, l), Complex64::new(c, 0.0))).collect();
        Self::from_terms(&terms)
    }

    /// Row `k` of `grid` holds the coefficients of `z1^k`. Ragged grids are rejected.
    pub fn from_grid(grid: Vec<Vec<Complex64>>) -> Result<Self> {
        if grid.is_empty() {
            return Ok(Self::zero());
        }
        let width = grid[0].len();
        if width == 0 {
            return Err(Error::Parse("empty coefficient row".into()));
        }
        if grid.iter().any(|row| row.len() != width) {
            return Err(Error::Parse("ragged coefficient grid".into()));
        }
        if grid.iter().flatten().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        let n = grid.len() - 1;
        let m = width - 1;
        Ok(Self::from_raw(n, m, grid.into_iter().flatten().collect(), DEFAULT_TRIM_TOLERANCE))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("polynomial serializes")
    }

    fn from_raw(n: usize, m: usize, coeffs: Vec<Complex64>, trim_tolerance: f64) -> Self {
        debug_assert_eq!(coeffs.len(), (n + 1) * (m + 1));
        let mut p = Self { n, m, coeffs, trim_tolerance };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        let scale = self.max_abs();
        if scale == 0.0 {
            *self = Self { trim_tolerance: self.trim_tolerance, ..Self::zero() };
            return;
        }
        let cut = self.trim_tolerance * scale;
        let w = self.m + 1;
        let row_max = |k: usize| (0..w).map(|l| self.coeffs[k * w + l].norm()).fold(0.0, f64::max);
        let col_max = |l: usize| (0..=self.n).map(|k| self.coeffs[k * w + l].norm()).fold(0.0, f64::max);
        let mut n = self.n;
        while n > 0 && row_max(n) <= cut {
            n -= 1;
        }
        let mut m = self.m;
        while m > 0 && col_max(m) <= cut {
            m -= 1;
        }
        if n == self.n && m == self.m {
            return;
        }
        let mut coeffs = Vec::with_capacity((n + 1) * (m + 1));
        for k in 0..=n {
            coeffs.extend_from_slice(&self.coeffs[k * w..k * w + m + 1]);
        }
        self.n = n;
        self.m = m;
        self.coeffs = coeffs;
    }

    pub fn with_trim_tolerance(mut self, tol: f64) -> Self {
        self.trim_tolerance = tol.max(0.0);
        self.normalize();
        self
    }

    pub fn trim_tolerance(&self) -> f64 {
        self.trim_tolerance
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn total_degree(&self) -> usize {
        self.terms().map(|((k, l), _)| k + l).max().unwrap_or(0)
    }

    /// `a_{k,l}`, zero outside the grid.
    pub fn coeff(&self, k: usize, l: usize) -> Complex64 {
        if k > self.n || l > self.m {
            ZERO
        } else {
            self.coeffs[k * (self.m + 1) + l]
        }
    }

    pub fn coeff_grid(&self) -> Vec<Vec<Complex64>> {
        self.coeffs.chunks(self.m + 1).map(|r| r.to_vec()).collect()
    }

    /// Nonzero coefficients with their indices, row-major.
    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        let w = self.m + 1;
        self.coeffs.iter().enumerate().filter(|(_, c)| c.norm() != 0.0).map(move |(i, &c)| ((i / w, i % w), c))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }

    pub fn is_constant(&self) -> bool {
        self.n == 0 && self.m == 0
    }

    /// `Some(axis)` when the polynomial depends on that variable only.
    pub fn univariate_axis(&self) -> Option<Axis> {
        match (self.n, self.m) {
            (0, 0) => None,
            (_, 0) => Some(Axis::Z1),
            (0, _) => Some(Axis::Z2),
            _ => None,
        }
    }

    /// Largest coefficient difference against another polynomial.
    pub fn max_coeff_diff(&self, other: &Poly2) -> f64 {
        let n = self.n.max(other.n);
        let m = self.m.max(other.m);
        let mut worst = 0.0f64;
        for k in 0..=n {
            for l in 0..=m {
                worst = worst.max((self.coeff(k, l) - other.coeff(k, l)).norm());
            }
        }
        worst
    }

    /// Bivariate Horner evaluation.
    pub fn evaluate(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let w = self.m + 1;
        (0..=self.n).rev().fold(ZERO, |acc, k| {
            let row = &self.coeffs[k * w..(k + 1) * w];
            let inner = row.iter().rev().fold(ZERO, |a, &c| a * z2 + c);
            acc * z1 + inner
        })
    }

    pub fn scale(&self, c: Complex64) -> Poly2 {
        Self::from_raw(self.n, self.m, self.coeffs.iter().map(|&a| a * c).collect(), self.trim_tolerance)
    }

    pub fn partial_derivative(&self, axis: Axis) -> Poly2 {
        match axis {
            Axis::Z1 if self.n == 0 => Self::zero(),
            Axis::Z2 if self.m == 0 => Self::zero(),
            Axis::Z1 => {
                let mut terms = Vec::new();
                for ((k, l), c) in self.terms().filter(|t| t.0 .0 > 0) {
                    terms.push(((k - 1, l), c * k as f64));
                }
                Self::from_terms(&terms)
            }
            Axis::Z2 => {
                let mut terms = Vec::new();
                for ((k, l), c) in self.terms().filter(|t| t.0 .1 > 0) {
                    terms.push(((k, l - 1), c * l as f64));
                }
                Self::from_terms(&terms)
            }
        }
    }

    /// `f(z2, z1)`.
    pub fn swap_variables(&self) -> Poly2 {
        let terms: Vec<_> = self.terms().map(|((k, l), c)| ((l, k), c)).collect();
        Self::from_terms(&terms)
    }

    /// The reflection `f~` at the polynomial's own (tight) bidegree.
    pub fn reflect(&self) -> Result<Poly2> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(self.reflect_at(self.n, self.m))
    }

    /// `z1^n z2^m conj(f(1/conj z1, 1/conj z2))` for a bidegree bound `(n, m)`
    /// that dominates the polynomial's own.
    pub fn reflect_at(&self, n: usize, m: usize) -> Poly2 {
        assert!(n >= self.n && m >= self.m, "reflection bidegree below polynomial bidegree");
        let terms: Vec<_> = self.terms().map(|((k, l), c)| ((n - k, m - l), c.conj())).collect();
        if terms.is_empty() {
            return Self::zero();
        }
        Self::from_terms(&terms)
    }

    /// Tests `f~ = lambda f` with `lambda` read off the largest coefficient of `f`
    /// and projected to the unit circle.
    pub fn unimodular_reflection_match(&self, tol: f64) -> UnimodularMatch {
        if self.is_zero() {
            return UnimodularMatch { matches: false, lambda: None, residual: f64::INFINITY };
        }
        let reflected = self.reflect_at(self.n, self.m);
        let (idx, _) =
            self.coeffs
                .iter()
                .enumerate()
                .fold((0, -1.0), |best, (i, c)| if c.norm() > best.1 { (i, c.norm()) } else { best });
        let w = self.m + 1;
        let (k, l) = (idx / w, idx % w);
        let ratio = reflected.coeff(k, l) / self.coeffs[idx];
        let lambda = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { ONE };
        let scale = self.max_abs();
        let mut residual = 0.0f64;
        for k in 0..=self.n {
            for l in 0..=self.m {
                residual = residual.max((reflected.coeff(k, l) - lambda * self.coeff(k, l)).norm());
            }
        }
        residual /= scale;
        let matches = residual <= tol;
        UnimodularMatch { matches, lambda: matches.then_some(lambda), residual }
    }

    /// Unimodular multiple `g = mu f` with `g~ = g`, when `f` is reflection-symmetric.
    pub fn symmetric_normalization(&self, tol: f64) -> Option<Poly2> {
        let found = self.unimodular_reflection_match(tol);
        found.lambda.map(|lambda| self.scale(lambda.sqrt()))
    }

    /// `h = z1 df/dz1 + z2 df/dz2`, i.e. `a_{k,l} -> (k + l) a_{k,l}`.
    pub fn compute_h(&self) -> Poly2 {
        Self::from_raw(
            self.n,
            self.m,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| c * ((i / (self.m + 1)) + (i % (self.m + 1))) as f64)
                .collect(),
            self.trim_tolerance,
        )
    }

    /// `f(., z2)` as a polynomial in `z1` of formal degree `n`.
    pub fn slice_z1(&self, z2: Complex64) -> UniPoly {
        let w = self.m + 1;
        UniPoly::new(
            (0..=self.n).map(|k| self.coeffs[k * w..(k + 1) * w].iter().rev().fold(ZERO, |a, &c| a * z2 + c)).collect(),
        )
    }

    /// `f(z1, .)` as a polynomial in `z2` of formal degree `m`.
    pub fn slice_z2(&self, z1: Complex64) -> UniPoly {
        let w = self.m + 1;
        UniPoly::new(
            (0..=self.m).map(|l| (0..=self.n).rev().fold(ZERO, |a, k| a * z1 + self.coeffs[k * w + l])).collect(),
        )
    }

    /// Univariate coefficients when `f` depends on one variable only.
    pub fn as_univariate(&self) -> Option<(Axis, UniPoly)> {
        match self.univariate_axis()? {
            Axis::Z1 => Some((Axis::Z1, UniPoly::new((0..=self.n).map(|k| self.coeff(k, 0)).collect()))),
            Axis::Z2 => Some((Axis::Z2, UniPoly::new((0..=self.m).map(|l| self.coeff(0, l)).collect()))),
        }
    }

    /// Polynomial in `z1` for `Axis::Z1` (or `z2`) embedded as a `Poly2`.
    pub fn from_univariate(axis: Axis, p: &UniPoly) -> Poly2 {
        let terms: Vec<_> =
            p.coeffs.iter().enumerate().map(|(d, &c)| (if axis == Axis::Z1 { (d, 0) } else { (0, d) }, c)).collect();
        Self::from_terms(&terms)
    }

    pub fn pow(&self, e: usize) -> Poly2 {
        let mut acc = Poly2::constant(ONE);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: &Poly2) -> Poly2 {
        let n = self.n.max(rhs.n);
        let m = self.m.max(rhs.m);
        let mut coeffs = Vec::with_capacity((n + 1) * (m + 1));
        for k in 0..=n {
            for l in 0..=m {
                coeffs.push(self.coeff(k, l) + rhs.coeff(k, l));
            }
        }
        Poly2::from_raw(n, m, coeffs, self.trim_tolerance)
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        self.scale(-ONE)
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: &Poly2) -> Poly2 {
        self + &(-rhs)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    /// Coefficient convolution; bidegrees add.
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let n = self.n + rhs.n;
        let m = self.m + rhs.m;
        let w = m + 1;
        let mut coeffs = vec![ZERO; (n + 1) * w];
        for ((k1, l1), a) in self.terms() {
            for ((k2, l2), b) in rhs.terms() {
                coeffs[(k1 + k2) * w + l1 + l2] += a * b;
            }
        }
        Poly2::from_raw(n, m, coeffs, self.trim_tolerance)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((k, l), c) in self.terms() {
            let coef = if c.im == 0.0 {
                format!("{}", c.re)
            } else if c.re == 0.0 {
                format!("{}i", c.im)
            } else {
                format!("({}{:+}i)", c.re, c.im)
            };
            let mono = match (k, l) {
                (0, 0) => String::new(),
                _ => {
                    let p1 = match k {
                        0 => String::new(),
                        1 => "z1".into(),
                        _ => format!("z1^{k}"),
                    };
                    let p2 = match l {
                        0 => String::new(),
                        1 => "z2".into(),
                        _ => format!("z2^{l}"),
                    };
                    [p1, p2].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join("*")
                }
            };
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{coef}")?;
            } else {
                write!(f, "{coef}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Sum of coefficient moduli, used to scale resultant comparisons.
fn l1_norm(p: &Poly2) -> f64 {
    p.terms().map(|(_, c)| c.norm()).sum()
}

/// Determinant of the Sylvester matrix of `f` and `g` viewed as polynomials in
/// `z2` with coefficients in `C[z1]`.
///
/// The resultant has degree at most `n_f m_g + n_g m_f` in `z1`; it is sampled at
/// that many plus one roots of unity and recovered by an inverse DFT.
pub fn sylvester_resultant_z2(f: &Poly2, g: &Poly2) -> Result<UniPoly> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (nf, mf) = f.bidegree();
    let (ng, mg) = g.bidegree();
    if mf == 0 && mg == 0 {
        return Err(Error::ResultantUndefined);
    }
    let size = mf + mg;
    let samples = nf * mg + ng * mf + 1;
    let values: Vec<Complex64> = fourier::roots_of_unity(samples)
        .into_iter()
        .map(|z1| {
            let a = f.slice_z2(z1);
            let b = g.slice_z2(z1);
            let mut syl = DMatrix::<Complex64>::zeros(size, size);
            for i in 0..mg {
                for (j, &c) in a.coeffs.iter().rev().enumerate() {
                    syl[(i, i + j)] = c;
                }
            }
            for i in 0..mf {
                for (j, &c) in b.coeffs.iter().rev().enumerate() {
                    syl[(mg + i, i + j)] = c;
                }
            }
            syl.determinant()
        })
        .collect();
    Ok(UniPoly::new(fourier::interpolate_1d(&values)))
}

/// Scale against which a computed resultant is judged identically zero.
pub fn resultant_scale(f: &Poly2, g: &Poly2) -> f64 {
    let (_, mf) = f.bidegree();
    let (_, mg) = g.bidegree();
    l1_norm(f).powi(mg as i32) * l1_norm(g).powi(mf as i32)
}

/// `(1 - conj(a) z1)^n (1 - conj(b) z2)^m (f o m_{a,b})(z)` with `(n, m)` the
/// bidegree of `f`; the cleared-denominator composition with the automorphism.
pub fn mobius_numerator(f: &Poly2, params: MobiusParams) -> Poly2 {
    let (n, m) = f.bidegree();
    let a = params.a();
    let b = params.b();
    let factors = |c: Complex64, deg: usize| -> Vec<UniPoly> {
        let num = UniPoly::new(vec![c, -ONE]);
        let den = UniPoly::new(vec![ONE, -c.conj()]);
        (0..=deg).map(|k| num.pow(k).mul(&den.pow(deg - k))).collect()
    };
    let first = factors(a, n);
    let second = factors(b, m);
    let mut coeffs = vec![ZERO; (n + 1) * (m + 1)];
    for ((k, l), c) in f.terms() {
        for (i, &u) in first[k].coeffs.iter().enumerate() {
            for (j, &v) in second[l].coeffs.iter().enumerate() {
                coeffs[i * (m + 1) + j] += c * u * v;
            }
        }
    }
    Poly2::from_raw(n, m, coeffs, f.trim_tolerance)
}
