use crate::error::{Error, Result};
use crate::tensor::{hermitian_eigenvalues, ComplexMatrix, DensityMatrix, STATE_TOL};

/// Eigenvalues (or probabilities) below this contribute nothing to an entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// `-sum x log2 x` over the entries above [`ENTROPY_CUTOFF`].
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    let h: f64 = values
        .iter()
        .filter(|&&x| x >= ENTROPY_CUTOFF)
        .map(|&x| -x * x.log2())
        .sum();
    h.max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let values = hermitian_eigenvalues(rho.matrix()).expect("validated density matrix is Hermitian");
    entropy_of_spectrum(&values).min((rho.dim() as f64).log2())
}

/// Entropy of an unvalidated positive matrix. Eigenvalues in `[-1e-10, 0)`
/// are treated as roundoff; anything more negative is an error.
pub fn matrix_entropy(m: &ComplexMatrix) -> Result<f64> {
    let values = hermitian_eigenvalues(m)?;
    match values.last() {
        Some(&min) if min < -STATE_TOL => Err(Error::Numerical(format!(
            "negative eigenvalue {min:.3e} in entropy argument"
        ))),
        _ => Ok(entropy_of_spectrum(&values)),
    }
}

/// Shannon entropy in bits of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> Result<f64> {
    if let Some(x) = p.iter().find(|&&x| !(x >= -1e-12)) {
        return Err(Error::Probability(format!("negative or invalid probability {x}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::Probability(format!("probabilities sum to {total}")));
    }
    Ok(p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum::<f64>().max(0.0))
}
