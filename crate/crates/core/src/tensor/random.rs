//! Seeded random fixtures: states, unitaries, Hermitian operators and
//! probability vectors.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::tensor::{orthonormalize_columns, ComplexMatrix, DensityMatrix};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Ginibre matrix with standard normal entries.
pub fn random_ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Full-rank mixed state `G G^dagger / tr` from a Ginibre matrix.
pub fn random_density_matrix(dim: usize, rng: &mut impl Rng) -> DensityMatrix {
    let g = random_ginibre(dim, dim, rng);
    let m = g.matmul(&g.adjoint());
    let tr = m.trace().re;
    let mut m = m.scale_real(1.0 / tr);
    symmetrize(&mut m);
    DensityMatrix::from_matrix_unchecked(m)
}

/// Haar-distributed unitary (Gram-Schmidt of a Ginibre matrix).
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    orthonormalize_columns(&random_ginibre(dim, dim, rng))
}

/// Hermitian matrix with Gaussian entries.
pub fn random_hermitian(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = random_ginibre(dim, dim, rng);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Probability vector drawn uniformly from the simplex.
pub fn random_probabilities(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Forces exact Hermitian symmetry.
pub(crate) fn symmetrize(m: &mut ComplexMatrix) {
    let n = m.rows();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}
