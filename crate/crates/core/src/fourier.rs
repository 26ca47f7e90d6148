//! Discrete Fourier helpers on roots-of-unity grids.
//!
//! Sampling a polynomial of degree < N at the N-th roots of unity and applying
//! the normalized forward transform recovers its coefficients exactly (up to
//! rounding), which is how determinants and resultants are turned back into
//! coefficient vectors.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::TAU;

/// `exp(2 pi i j / n)` for `j = 0..n`.
pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|j| Complex64::from_polar(1.0, TAU * j as f64 / n as f64)).collect()
}

/// Coefficients `c_k = (1/N) sum_j v_j exp(-2 pi i j k / N)`.
pub fn interpolate_1d(values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// Normalized 2-D forward transform of a row-major `rows x cols` grid, in place.
/// Entry `(j, k)` of the input is the sample at `(exp(2 pi i j/rows), exp(2 pi i k/cols))`;
/// entry `(a, b)` of the output is the coefficient of `z1^a z2^b` (indices mod the
/// grid size).
pub fn transform_2d(data: &mut [Complex64], rows: usize, cols: usize) {
    assert_eq!(data.len(), rows * cols);
    let mut planner = FftPlanner::new();
    let row_fft = planner.plan_fft_forward(cols);
    for row in data.chunks_mut(cols) {
        row_fft.process(row);
    }
    let col_fft = planner.plan_fft_forward(rows);
    let mut column = vec![Complex64::new(0.0, 0.0); rows];
    for k in 0..cols {
        for j in 0..rows {
            column[j] = data[j * cols + k];
        }
        col_fft.process(&mut column);
        for j in 0..rows {
            data[j * cols + k] = column[j];
        }
    }
    let scale = 1.0 / (rows * cols) as f64;
    data.iter_mut().for_each(|c| *c *= scale);
}
