//! Complex matrix helpers for the `z = 0` and pointwise computations.

use nalgebra::DMatrix;

use crate::ring::Complex;

pub type CMatrix = DMatrix<Complex>;

/// Default relative tolerance on singular values.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Number of singular values above `tol · σ_max`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> usize {
    let sv = singular_values(m);
    let largest = sv.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * largest).count()
}

/// Square and `σ_min > tol · σ_max`.
pub fn is_invertible(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && m.nrows() > 0 && numerical_rank(m, tol) == m.nrows()
}

/// `|det m|` divided by the Hadamard bound `∏_i ‖row_i‖`, which lies in
/// `[0, 1]`; zero rows give 0.
pub fn relative_det(m: &CMatrix) -> f64 {
    let det = m.clone().determinant().norm();
    let scale: f64 = m.row_iter().map(|r| r.norm()).product();
    if scale == 0.0 {
        0.0
    } else {
        det / scale
    }
}

pub fn spectral_radius(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    m.clone()
        .schur()
        .eigenvalues()
        .map(|ev| ev.iter().map(|l| l.norm()).fold(0.0, f64::max))
        .unwrap_or(f64::NAN)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}
