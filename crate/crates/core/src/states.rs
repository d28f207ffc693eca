//! Resource states: generalized Bell states, Bell-diagonal mixtures, GHZ
//! states and multi-copy assemblies with all sender sites grouped first.

use num_complex::Complex64;

use crate::displacement::{displacement_op, DisplacementLabel};
use crate::error::{Error, Result};
use crate::tensor::{kron_all, max_dim, permute_sites, permute_vector, ComplexMatrix, DensityMatrix, SubsystemLayout};

/// Label `(m, n)` of the Bell state `(V_mn ⊗ I)|Φ00>`.
pub type BellLabel = DisplacementLabel;

/// Displacement labels of the qubit Paulis `σ_0..σ_3` (up to phase).
pub const PAULI_LABELS: [(usize, usize); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];

fn check_dim(total: usize) -> Result<()> {
    let limit = max_dim();
    if total > limit {
        return Err(Error::SizeLimit { requested: total, limit });
    }
    Ok(())
}

/// `|Φ00> = d^{-1/2} sum_j |jj>`.
pub fn bell_vector(d: usize) -> Result<Vec<Complex64>> {
    if d < 2 {
        return Err(Error::Parameter(format!("Bell dimension {d} is below 2")));
    }
    check_dim(d * d)?;
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        v[j * d + j] = amp;
    }
    Ok(v)
}

pub fn bell_state(d: usize) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(&bell_vector(d)?)
}

/// `(V_mn ⊗ I)|Φ00>`.
pub fn bell_basis_vector(label: BellLabel) -> Result<Vec<Complex64>> {
    let d = label.d;
    let phi = bell_vector(d)?;
    let op = displacement_op(label).kron(&ComplexMatrix::identity(d))?;
    Ok(op.mul_vec(&phi))
}

pub fn bell_basis_state(label: BellLabel) -> Result<DensityMatrix> {
    DensityMatrix::from_pure(&bell_basis_vector(label)?)
}

/// Weights `p_n` of the mixture `sum_n p_n ρ_n` over the two-qubit Bell
/// states `ρ_n = (σ_n ⊗ I)|Φ00><Φ00|(σ_n ⊗ I)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellDiagonalSpec {
    weights: [f64; 4],
}

impl BellDiagonalSpec {
    pub fn new(weights: [f64; 4]) -> Result<Self> {
        if weights.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::Probability(format!("negative Bell weight in {weights:?}")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Probability(format!("Bell weights sum to {total}")));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> [f64; 4] {
        self.weights
    }
}

pub fn bell_diagonal(spec: &BellDiagonalSpec) -> Result<DensityMatrix> {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (&p, &(a, b)) in spec.weights.iter().zip(&PAULI_LABELS) {
        if p > 0.0 {
            let v = bell_basis_vector(DisplacementLabel::new(2, a, b)?)?;
            m.add_scaled(p, &ComplexMatrix::outer(&v));
        }
    }
    DensityMatrix::new(m)
}

/// `(|0...0> + |1...1>)/sqrt(2)` on `parties` qubits.
pub fn ghz_state(parties: usize) -> Result<DensityMatrix> {
    if parties < 2 {
        return Err(Error::Parameter(format!("GHZ needs at least 2 parties, got {parties}")));
    }
    let dim = 1usize.checked_shl(parties as u32).filter(|_| parties < usize::BITS as usize);
    let dim = dim.ok_or(Error::SizeLimit { requested: usize::MAX, limit: max_dim() })?;
    check_dim(dim)?;
    let mut v = vec![Complex64::new(0.0, 0.0); dim];
    v[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    v[dim - 1] = v[0];
    DensityMatrix::from_pure(&v)
}

/// `k` copies of a one-sender state `ρ^{ab}`, reordered from the Kronecker
/// order `a_1 b_1 a_2 b_2 ...` to `a_1 ... a_k b_1 ... b_k`. The returned
/// layout has `k` senders and `k` receiver factors.
pub fn assemble_copies(
    single: &DensityMatrix,
    single_layout: &SubsystemLayout,
    copies: usize,
) -> Result<(DensityMatrix, SubsystemLayout)> {
    if single_layout.num_senders() != 1 || single_layout.receiver_dims().len() != 1 {
        return Err(Error::Layout("assemble_copies expects a two-site (a, b) layout".into()));
    }
    if single.dim() != single_layout.total_dim() {
        return Err(Error::Layout("state does not match its layout".into()));
    }
    if copies == 0 {
        return Err(Error::Parameter("copies must be at least 1".into()));
    }
    let (da, db) = (single_layout.sender_dims()[0], single_layout.receiver_dims()[0]);
    let layout = SubsystemLayout::with_receiver_factors(vec![da; copies], vec![db; copies])?;
    if copies == 1 {
        return Ok((single.clone(), layout));
    }
    let interleaved = kron_all(std::iter::repeat_n(single.matrix(), copies))?;
    let dims: Vec<usize> = (0..copies).flat_map(|_| [da, db]).collect();
    let perm: Vec<usize> = (0..copies).map(|j| 2 * j).chain((0..copies).map(|j| 2 * j + 1)).collect();
    let grouped = permute_sites(&interleaved, &dims, &perm)?;
    Ok((DensityMatrix::from_matrix_unchecked(grouped), layout))
}

/// `|Φ00>^{a_1 b_1} ⊗ ... ⊗ |Φ00>^{a_k b_k}` with copy `j` of dimension
/// `dims[j]`, reordered to `a_1 .. a_k b_1 .. b_k`.
pub fn bell_copies_vector(dims: &[usize]) -> Result<Vec<Complex64>> {
    if dims.is_empty() {
        return Err(Error::Parameter("at least one Bell copy is required".into()));
    }
    let total = dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d * d)).unwrap_or(usize::MAX);
    check_dim(total)?;
    let columns = dims
        .iter()
        .map(|&d| bell_vector(d).and_then(|v| ComplexMatrix::new(d * d, 1, v)))
        .collect::<Result<Vec<_>>>()?;
    let joint = kron_all(&columns)?;
    let k = dims.len();
    let interleaved: Vec<usize> = dims.iter().flat_map(|&d| [d, d]).collect();
    let perm: Vec<usize> = (0..k).map(|j| 2 * j).chain((0..k).map(|j| 2 * j + 1)).collect();
    permute_vector(joint.as_slice(), &interleaved, &perm)
}

/// Bell copies of possibly different dimensions with their layout: senders
/// `a_j` first, then one receiver factor `b_j` per copy.
pub fn bell_copies(dims: &[usize]) -> Result<(DensityMatrix, SubsystemLayout)> {
    let psi = bell_copies_vector(dims)?;
    let layout = SubsystemLayout::with_receiver_factors(dims.to_vec(), dims.to_vec())?;
    Ok((DensityMatrix::from_pure(&psi)?, layout))
}
