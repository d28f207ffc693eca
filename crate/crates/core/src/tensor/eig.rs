//! Hermitian eigendecomposition and functions of Hermitian matrices.
//!
//! The decomposition is delegated to nalgebra's symmetric eigensolver
//! (Householder tridiagonalization followed by implicit QR), applied to the
//! Hermitian part `(M + M^dagger) / 2` of the input.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::ComplexMatrix;

/// Inputs further than this from Hermitian are rejected.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-8;

fn hermitian_part(m: &ComplexMatrix) -> Result<DMatrix<Complex64>> {
    let dev = m.hermitian_deviation();
    if dev > HERMITIAN_INPUT_TOL * m.max_abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "matrix is not Hermitian (deviation {dev:.3e})"
        )));
    }
    let n = m.rows();
    Ok(DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5))
}

/// Eigenvalues in descending order with the matching eigenvectors as columns.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let h = hermitian_part(m)?;
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok((values, vectors))
}

/// Eigenvalues only, descending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let h = hermitian_part(m)?;
    let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    Ok(values)
}

/// `exp(iH)` for Hermitian `H`.
pub fn herm_expm(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eig(h)?;
    let n = values.len();
    let phases: Vec<Complex64> = values.iter().map(|&x| Complex64::from_polar(1.0, x)).collect();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, j)] * phases[j]);
    Ok(scaled.matmul(&vectors.adjoint()))
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn hermitian_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (values, vectors) = hermitian_eig(m)?;
    let n = values.len();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, j)] * f(values[j]));
    Ok(scaled.matmul(&vectors.adjoint()))
}
