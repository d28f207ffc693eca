//! Dense complex linear algebra: Kronecker products, partial traces,
//! Hermitian eigendecomposition, `exp(iH)` and entropies.

mod density;
mod eig;
mod entropy;
mod layout;
mod matrix;
mod ortho;
mod random;

pub use density::{DensityMatrix, STATE_TOL};
pub use eig::{herm_expm, hermitian_eig, hermitian_eigenvalues, hermitian_function, HERMITIAN_INPUT_TOL};
pub use entropy::{entropy_of_spectrum, matrix_entropy, shannon_entropy, von_neumann_entropy, ENTROPY_CUTOFF};
pub use layout::{partial_trace, partial_trace_raw, permute_sites, permute_vector, SubsystemLayout};
pub use matrix::{kron, kron_all, ComplexMatrix};
pub(crate) use matrix::kron_unchecked;
pub use ortho::orthonormalize_columns;
pub use random::{random_density_matrix, random_ginibre, random_hermitian, random_probabilities, random_unitary};
pub(crate) use random::symmetrize;

/// Default cap on any Hilbert-space dimension.
pub const DEFAULT_MAX_DIM: usize = 1024;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "DENSECODE_MAX_DIM";

/// The active dimension cap.
pub fn max_dim() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&d: &usize| d > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}
