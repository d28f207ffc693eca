use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{hermitian_eigenvalues, max_dim, ComplexMatrix};

/// Hermiticity and trace tolerance for density matrices.
pub const STATE_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Numerical(format!(
                "density matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let limit = max_dim();
        if matrix.rows() > limit {
            return Err(Error::SizeLimit { requested: matrix.rows(), limit });
        }
        let dev = matrix.hermitian_deviation();
        if dev > STATE_TOL {
            return Err(Error::Numerical(format!("state is not Hermitian (deviation {dev:.3e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::Numerical(format!("state trace is {tr}, expected 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?.last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::Numerical(format!(
                "state is not positive semidefinite (eigenvalue {min:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// Pure state `|psi><psi|` from an unnormalized vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Numerical("zero state vector".into()));
        }
        let unit: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&unit))
    }

    /// `I/d`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_matrix_unchecked(ComplexMatrix::from_diag(&vec![1.0 / dim as f64; dim]))
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `tr(self * other)`, real for Hermitian arguments.
    pub fn overlap(&self, other: &DensityMatrix) -> f64 {
        self.matrix.hs_inner(&other.matrix).re
    }

    pub fn purity(&self) -> f64 {
        self.overlap(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_invariants() {
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[0.5, 0.5])).is_ok());
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[0.6, 0.5])).is_err());
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[1.2, -0.2])).is_err());
        let non_herm = ComplexMatrix::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(non_herm).is_err());
    }

    #[test]
    fn tolerates_roundoff_negative_eigenvalue() {
        assert!(DensityMatrix::new(ComplexMatrix::from_diag(&[1.0 + 5e-11, -5e-11])).is_ok());
    }

    #[test]
    fn pure_state_is_normalized() {
        let rho = DensityMatrix::from_pure(&[1.0.into(), 1.0.into()]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-15);
    }
}
