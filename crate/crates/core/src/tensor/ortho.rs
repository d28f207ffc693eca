use num_complex::Complex64;

use crate::tensor::ComplexMatrix;

/// Orthonormalizes the columns of a tall matrix by modified Gram-Schmidt
/// with one full re-orthogonalization pass. Columns that collapse to zero
/// are replaced by the first standard basis vector orthogonal to the rest.
pub fn orthonormalize_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    assert!(cols <= rows, "cannot orthonormalize {cols} columns in dimension {rows}");
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v: Vec<Complex64> = (0..rows).map(|i| m[(i, j)]).collect();
        let original = norm(&v);
        for _ in 0..2 {
            project_out(&mut v, &basis);
        }
        let mut n = norm(&v);
        if n <= 1e-12 * original.max(1.0) {
            v = fallback_vector(rows, &basis);
            n = norm(&v);
        }
        v.iter_mut().for_each(|z| *z /= n);
        basis.push(v);
    }
    ComplexMatrix::from_fn(rows, cols, |i, j| basis[j][i])
}

fn project_out(v: &mut [Complex64], basis: &[Vec<Complex64>]) {
    for b in basis {
        let c: Complex64 = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum();
        for (y, x) in v.iter_mut().zip(b) {
            *y -= c * x;
        }
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn fallback_vector(rows: usize, basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    (0..rows)
        .map(|k| {
            let mut e = vec![Complex64::new(0.0, 0.0); rows];
            e[k] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                project_out(&mut e, basis);
            }
            e
        })
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .expect("rows > 0")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::random_ginibre;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn columns_become_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_ginibre(12, 4, &mut rng);
        let q = orthonormalize_columns(&g);
        let gram = q.adjoint().matmul(&q);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn degenerate_columns_are_completed() {
        let m = ComplexMatrix::from_real(3, 2, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let q = orthonormalize_columns(&m);
        assert!(q.adjoint().matmul(&q).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-14);
    }
}
