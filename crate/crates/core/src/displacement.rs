//! Generalized displacement (Heisenberg-Weyl) operators
//! `V_mn = sum_k exp(2 pi i k n / d) |k><k+m mod d|`, their algebra, and the
//! complete set of local encoding unitaries built from them.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{max_dim, ComplexMatrix, SubsystemLayout};

/// Upper bound on `D_A^2`, the size of a local encoding set.
pub const MAX_ENCODING_SET: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DisplacementLabel {
    pub d: usize,
    pub m: usize,
    pub n: usize,
}

impl DisplacementLabel {
    pub fn new(d: usize, m: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter(format!("dimension {d} is below 2")));
        }
        if m >= d || n >= d {
            return Err(Error::Parameter(format!("label ({m}, {n}) out of range for d = {d}")));
        }
        Ok(Self { d, m, n })
    }

    /// Index of the label in lexicographic `(m, n)` order.
    pub fn index(&self) -> usize {
        self.m * self.d + self.n
    }

    pub fn from_index(d: usize, index: usize) -> Self {
        Self { d, m: index / d, n: index % d }
    }
}

/// `exp(2 pi i k / d)` with `k` reduced modulo `d` first.
pub(crate) fn root_of_unity(k: i64, d: usize) -> Complex64 {
    let r = k.rem_euclid(d as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / d as f64)
}

/// Dense matrix of `V_mn`.
pub fn displacement_op(label: DisplacementLabel) -> ComplexMatrix {
    Monomial::displacement(label).to_dense()
}

/// A matrix with exactly one nonzero entry per row:
/// `M[a, perm[a]] = phase[a]`. Displacement operators and their tensor
/// products have this form, which makes conjugation `M X M^dagger` cost
/// `O(dim^2)`.
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Monomial {
    pub perm: Vec<usize>,
    pub phase: Vec<Complex64>,
}

impl Monomial {
    pub fn displacement(label: DisplacementLabel) -> Self {
        let d = label.d;
        Self {
            perm: (0..d).map(|k| (k + label.m) % d).collect(),
            phase: (0..d).map(|k| root_of_unity((k * label.n) as i64, d)).collect(),
        }
    }

    /// Tensor product over `dims` with `labels[s]` on site `s` (identity for
    /// `None`).
    pub fn on_sites(dims: &[usize], labels: &[Option<(usize, usize)>]) -> Self {
        debug_assert_eq!(dims.len(), labels.len());
        let total: usize = dims.iter().product();
        let mut perm = Vec::with_capacity(total);
        let mut phase = Vec::with_capacity(total);
        let mut digits = vec![0usize; dims.len()];
        for _ in 0..total {
            let mut target = 0usize;
            let mut ph = Complex64::new(1.0, 0.0);
            for (s, (&d, &x)) in dims.iter().zip(&digits).enumerate() {
                match labels[s] {
                    Some((m, n)) => {
                        target = target * d + (x + m) % d;
                        if n != 0 {
                            ph *= root_of_unity((x * n) as i64, d);
                        }
                    }
                    None => target = target * d + x,
                }
            }
            perm.push(target);
            phase.push(ph);
            for s in (0..digits.len()).rev() {
                digits[s] += 1;
                if digits[s] < dims[s] {
                    break;
                }
                digits[s] = 0;
            }
        }
        Self { perm, phase }
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (a, (&p, &ph)) in self.perm.iter().zip(&self.phase).enumerate() {
            m[(a, p)] = ph;
        }
        m
    }

    /// `out += weight * M x M^dagger`
    pub fn conjugate_accumulate(&self, x: &ComplexMatrix, weight: f64, out: &mut ComplexMatrix) {
        let n = self.dim();
        let src = x.as_slice();
        let dst = out.as_mut_slice();
        for a in 0..n {
            let pa = self.phase[a] * weight;
            let row = self.perm[a] * n;
            let out_row = &mut dst[a * n..(a + 1) * n];
            for (b, o) in out_row.iter_mut().enumerate() {
                *o += pa * self.phase[b].conj() * src[row + self.perm[b]];
            }
        }
    }

    /// `M x` for any `x` with `dim` rows.
    pub fn left_mul(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let cols = x.cols();
        let src = x.as_slice();
        let mut data = Vec::with_capacity(self.dim() * cols);
        for (&p, &ph) in self.perm.iter().zip(&self.phase) {
            data.extend(src[p * cols..(p + 1) * cols].iter().map(|v| ph * v));
        }
        ComplexMatrix::from_raw(self.dim(), cols, data)
    }

    pub fn conjugate(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(x.rows(), x.cols());
        self.conjugate_accumulate(x, 1.0, &mut out);
        out
    }
}

/// Maximum deviations found by [`verify_displacement_algebra`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlgebraReport {
    pub d: usize,
    /// `tr[V_mn V_m'n'^dagger] = d delta delta`
    pub orthogonality: f64,
    /// `V_mn V_m'n' = w^(n'm - nm') V_m'n' V_mn`
    pub commutation: f64,
    /// `V_mn V_m'n' = w^(n'm) V_(m+m')(n+n')`
    pub product: f64,
    /// `V V^dagger = I`
    pub unitarity: f64,
}

impl AlgebraReport {
    pub fn max_deviation(&self) -> f64 {
        self.orthogonality.max(self.commutation).max(self.product).max(self.unitarity)
    }
}

/// Exhaustively checks the displacement-operator identities over all label
/// pairs in dimension `d`.
pub fn verify_displacement_algebra(d: usize) -> Result<AlgebraReport> {
    if d < 2 || d > max_dim() {
        return Err(Error::Parameter(format!("dimension {d} outside [2, {}]", max_dim())));
    }
    let ops: Vec<ComplexMatrix> = (0..d * d)
        .map(|i| displacement_op(DisplacementLabel::from_index(d, i)))
        .collect();
    let identity = ComplexMatrix::identity(d);
    let mut report = AlgebraReport { d, orthogonality: 0.0, commutation: 0.0, product: 0.0, unitarity: 0.0 };
    for (i, v) in ops.iter().enumerate() {
        report.unitarity = report.unitarity.max(v.matmul(&v.adjoint()).max_abs_diff(&identity));
        let (m, n) = (i / d, i % d);
        for (j, w) in ops.iter().enumerate() {
            let (mp, np) = (j / d, j % d);
            let expected = if i == j { d as f64 } else { 0.0 };
            let overlap = w.hs_inner(v);
            report.orthogonality = report.orthogonality.max((overlap - Complex64::new(expected, 0.0)).norm());

            let vw = v.matmul(w);
            let wv = w.matmul(v);
            let comm_phase = root_of_unity((np * m) as i64 - (n * mp) as i64, d);
            report.commutation = report.commutation.max(vw.max_abs_diff(&wv.scale(comm_phase)));

            let sum = &ops[((m + mp) % d) * d + (n + np) % d];
            let prod_phase = root_of_unity((np * m) as i64, d);
            report.product = report.product.max(vw.max_abs_diff(&sum.scale(prod_phase)));
        }
    }
    Ok(report)
}

/// All `D_A^2` products `V_{i_1} ⊗ ... ⊗ V_{i_k}` over the senders, in
/// lexicographic order of `(m_1, n_1, ..., m_k, n_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalEncodingSet {
    sender_dims: Vec<usize>,
    labels: Vec<Vec<(usize, usize)>>,
}

/// Builds the local encoding set for the given sender dimensions.
pub fn local_encoding_set(sender_dims: &[usize]) -> Result<LocalEncodingSet> {
    if sender_dims.is_empty() || sender_dims.iter().any(|&d| d < 2) {
        return Err(Error::Parameter(format!("invalid sender dimensions {sender_dims:?}")));
    }
    let count = sender_dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d * d))
        .unwrap_or(usize::MAX);
    if count > MAX_ENCODING_SET {
        return Err(Error::SizeLimit { requested: count, limit: MAX_ENCODING_SET });
    }
    let mut labels: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for &d in sender_dims {
        labels = labels
            .into_iter()
            .flat_map(|prefix| {
                (0..d * d).map(move |i| {
                    let mut next = prefix.clone();
                    next.push((i / d, i % d));
                    next
                })
            })
            .collect();
    }
    Ok(LocalEncodingSet { sender_dims: sender_dims.to_vec(), labels })
}

impl LocalEncodingSet {
    pub fn sender_dims(&self) -> &[usize] {
        &self.sender_dims
    }

    pub fn sender_dim(&self) -> usize {
        self.sender_dims.iter().product()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Vec<(usize, usize)>] {
        &self.labels
    }

    /// Dense `D_A x D_A` operator `Ṽ_i`.
    pub fn operator(&self, i: usize) -> ComplexMatrix {
        self.monomial(i).to_dense()
    }

    pub fn operators(&self) -> Vec<ComplexMatrix> {
        (0..self.len()).map(|i| self.operator(i)).collect()
    }

    pub(crate) fn monomial(&self, i: usize) -> Monomial {
        let labels: Vec<Option<(usize, usize)>> = self.labels[i].iter().copied().map(Some).collect();
        Monomial::on_sites(&self.sender_dims, &labels)
    }

    /// `Ṽ_i ⊗ I` on the full layout.
    pub(crate) fn embedded_monomial(&self, i: usize, layout: &SubsystemLayout) -> Monomial {
        let mut labels: Vec<Option<(usize, usize)>> = self.labels[i].iter().copied().map(Some).collect();
        labels.resize(layout.num_sites(), None);
        Monomial::on_sites(&layout.site_dims(), &labels)
    }

    /// Gram matrix `G_ij = tr[Ṽ_i Ṽ_j^dagger]`; equals `D_A I` for a
    /// complete orthogonal set.
    pub fn gram_matrix(&self) -> ComplexMatrix {
        let ops = self.operators();
        let n = ops.len();
        ComplexMatrix::from_fn(n, n, |i, j| ops[j].hs_inner(&ops[i]))
    }

    /// `max |tr[Ṽ_i Ṽ_j^dagger] - D_A delta_ij|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        let target = ComplexMatrix::identity(self.len()).scale_real(self.sender_dim() as f64);
        self.gram_matrix().max_abs_diff(&target)
    }
}

/// `(1/D_A^2) sum_i Ṽ_i x Ṽ_i^dagger`, summed pairwise in index order.
pub fn twirl(set: &LocalEncodingSet, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = set.sender_dim();
    if !x.is_square() || x.rows() != dim {
        return Err(Error::Layout(format!(
            "operator is {}x{}, encoding set acts on dimension {dim}",
            x.rows(),
            x.cols()
        )));
    }
    let monomials: Vec<Monomial> = (0..set.len()).map(|i| set.monomial(i)).collect();
    let sum = pairwise_sum(&monomials, x);
    Ok(sum.scale_real(1.0 / set.len() as f64))
}

fn pairwise_sum(ops: &[Monomial], x: &ComplexMatrix) -> ComplexMatrix {
    if ops.len() <= 8 {
        let mut acc = ComplexMatrix::zeros(x.rows(), x.cols());
        for op in ops {
            op.conjugate_accumulate(x, 1.0, &mut acc);
        }
        return acc;
    }
    let (left, right) = ops.split_at(ops.len() / 2);
    &pairwise_sum(left, x) + &pairwise_sum(right, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{random_hermitian, random_unitary};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(rows: usize, entries: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, rows, entries).unwrap()
    }

    #[test]
    fn qubit_displacements_match_paulis() {
        let x = displacement_op(DisplacementLabel::new(2, 1, 0).unwrap());
        assert!(x.max_abs_diff(&real(2, &[0.0, 1.0, 1.0, 0.0])) < 1e-15);
        let z = displacement_op(DisplacementLabel::new(2, 0, 1).unwrap());
        assert!(z.max_abs_diff(&real(2, &[1.0, 0.0, 0.0, -1.0])) < 1e-15);
        let i = displacement_op(DisplacementLabel::new(2, 0, 0).unwrap());
        assert_eq!(i, ComplexMatrix::identity(2));
        // phase kept exactly as defined: V_11 = [[0, 1], [-1, 0]]
        let v11 = displacement_op(DisplacementLabel::new(2, 1, 1).unwrap());
        assert!(v11.max_abs_diff(&real(2, &[0.0, 1.0, -1.0, 0.0])) < 1e-15);
    }

    #[test]
    fn label_validation() {
        assert!(DisplacementLabel::new(2, 2, 0).is_err());
        assert!(DisplacementLabel::new(1, 0, 0).is_err());
    }

    #[test]
    fn trace_is_d_only_for_identity() {
        for d in 2..=5 {
            for i in 0..d * d {
                let label = DisplacementLabel::from_index(d, i);
                let tr = displacement_op(label).trace();
                let expected = if i == 0 { d as f64 } else { 0.0 };
                assert!((tr - Complex64::new(expected, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn algebra_holds_for_small_dims() {
        let r2 = verify_displacement_algebra(2).unwrap();
        assert!(r2.max_deviation() <= 1e-14, "{r2:?}");
        let r3 = verify_displacement_algebra(3).unwrap();
        assert!(r3.max_deviation() <= 1e-13, "{r3:?}");
        for d in 4..=5 {
            assert!(verify_displacement_algebra(d).unwrap().unitarity <= 1e-13);
        }
    }

    #[test]
    fn qubit_gram_matrix_is_twice_identity() {
        let set = local_encoding_set(&[2]).unwrap();
        assert!(set.gram_matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(2.0)) < 1e-15);
    }

    #[test]
    fn encoding_set_enumeration() {
        let one = local_encoding_set(&[2]).unwrap();
        let expected = [
            real(2, &[1.0, 0.0, 0.0, 1.0]),
            real(2, &[1.0, 0.0, 0.0, -1.0]),
            real(2, &[0.0, 1.0, 1.0, 0.0]),
            real(2, &[0.0, 1.0, -1.0, 0.0]),
        ];
        for (i, e) in expected.iter().enumerate() {
            assert!(one.operator(i).max_abs_diff(e) < 1e-15, "operator {i}");
        }
        let two = local_encoding_set(&[2, 2]).unwrap();
        assert_eq!(two.len(), 16);
        assert!(two.orthogonality_deviation() < 1e-13);
        let mixed = local_encoding_set(&[2, 3]).unwrap();
        assert_eq!(mixed.len(), 36);
        assert!(mixed.orthogonality_deviation() < 1e-12);
        assert!(matches!(local_encoding_set(&[9, 9]), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn monomial_conjugation_matches_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let dims = [2, 3];
        let labels = [Some((1, 1)), Some((2, 1))];
        let mono = Monomial::on_sites(&dims, &labels);
        let dense = displacement_op(DisplacementLabel::new(2, 1, 1).unwrap())
            .kron(&displacement_op(DisplacementLabel::new(3, 2, 1).unwrap()))
            .unwrap();
        assert!(mono.to_dense().max_abs_diff(&dense) < 1e-15);
        let x = random_hermitian(6, &mut rng);
        assert!(mono.conjugate(&x).max_abs_diff(&x.conjugate_by(&dense)) < 1e-13);
        let u = random_unitary(6, &mut rng);
        assert!(mono.left_mul(&u).max_abs_diff(&dense.matmul(&u)) < 1e-14);
    }

    #[test]
    fn twirl_examples() {
        let set = local_encoding_set(&[2]).unwrap();
        let id = ComplexMatrix::identity(2);
        assert!(twirl(&set, &id).unwrap().max_abs_diff(&id) < 1e-15);
        let x = real(2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(twirl(&set, &x).unwrap().max_abs() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let set3 = local_encoding_set(&[3]).unwrap();
        let h = random_hermitian(3, &mut rng);
        // brute-force oracle: dense conjugation by each of the 9 operators
        let mut brute = ComplexMatrix::zeros(3, 3);
        for v in set3.operators() {
            brute.add_scaled(1.0 / 9.0, &h.conjugate_by(&v));
        }
        let expected = ComplexMatrix::identity(3).scale(h.trace() / 3.0);
        assert!(brute.max_abs_diff(&expected) < 1e-13);
        assert!(twirl(&set3, &h).unwrap().max_abs_diff(&expected) < 1e-13);
        assert!(matches!(twirl(&set3, &id), Err(Error::Layout(_))));
    }

    #[test]
    fn twirl_is_a_central_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let set = local_encoding_set(&[2, 3]).unwrap();
        for _ in 0..5 {
            let x = random_hermitian(6, &mut rng);
            let t = twirl(&set, &x).unwrap();
            assert!(twirl(&set, &t).unwrap().max_abs_diff(&t) < 1e-10);
            let r = random_unitary(6, &mut rng);
            let comm = &t.matmul(&r) - &r.matmul(&t);
            assert!(comm.max_abs() < 1e-9);
        }
    }
}
