use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tensor::{max_dim, ComplexMatrix, DensityMatrix};

/// Sender slots followed by the receiver.
///
/// The receiver may itself be a product of several factors (for example the
/// `k` receiver halves of `k` Bell pairs). Every factor, sender or receiver,
/// is a *site*; sites are numbered senders first, then receiver factors, in
/// Kronecker order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsystemLayout {
    sender_dims: Vec<usize>,
    receiver_dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new(sender_dims: Vec<usize>, receiver_dim: usize) -> Result<Self> {
        Self::with_receiver_factors(sender_dims, vec![receiver_dim])
    }

    pub fn with_receiver_factors(sender_dims: Vec<usize>, receiver_dims: Vec<usize>) -> Result<Self> {
        if sender_dims.is_empty() {
            return Err(Error::Layout("at least one sender is required".into()));
        }
        if receiver_dims.is_empty() {
            return Err(Error::Layout("the receiver needs at least one factor".into()));
        }
        if let Some(&d) = sender_dims.iter().chain(&receiver_dims).find(|&&d| d < 2) {
            return Err(Error::Layout(format!("local dimension {d} is below 2")));
        }
        let total = sender_dims
            .iter()
            .chain(&receiver_dims)
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .unwrap_or(usize::MAX);
        let limit = max_dim();
        if total > limit {
            return Err(Error::SizeLimit { requested: total, limit });
        }
        Ok(Self { sender_dims, receiver_dims })
    }

    pub fn sender_dims(&self) -> &[usize] {
        &self.sender_dims
    }

    pub fn receiver_dims(&self) -> &[usize] {
        &self.receiver_dims
    }

    pub fn num_senders(&self) -> usize {
        self.sender_dims.len()
    }

    /// `D_A`, the joint dimension of all senders.
    pub fn sender_dim(&self) -> usize {
        self.sender_dims.iter().product()
    }

    /// `d_b`, the joint dimension of all receiver factors.
    pub fn receiver_dim(&self) -> usize {
        self.receiver_dims.iter().product()
    }

    pub fn total_dim(&self) -> usize {
        self.sender_dim() * self.receiver_dim()
    }

    pub fn site_dims(&self) -> Vec<usize> {
        self.sender_dims.iter().chain(&self.receiver_dims).copied().collect()
    }

    pub fn num_sites(&self) -> usize {
        self.sender_dims.len() + self.receiver_dims.len()
    }

    pub fn sender_sites(&self) -> Vec<usize> {
        (0..self.sender_dims.len()).collect()
    }

    pub fn receiver_sites(&self) -> Vec<usize> {
        (self.sender_dims.len()..self.num_sites()).collect()
    }
}

/// Reduced state on the `keep` sites (kept in ascending order).
pub fn partial_trace(rho: &DensityMatrix, layout: &SubsystemLayout, keep: &[usize]) -> Result<DensityMatrix> {
    if rho.dim() != layout.total_dim() {
        return Err(Error::Layout(format!(
            "state dimension {} does not match layout dimension {}",
            rho.dim(),
            layout.total_dim()
        )));
    }
    let reduced = partial_trace_raw(rho.matrix(), &layout.site_dims(), keep)?;
    Ok(DensityMatrix::from_matrix_unchecked(reduced))
}

/// Partial trace on a bare matrix with the given site dimensions.
pub fn partial_trace_raw(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::Layout(format!(
            "matrix is {}x{}, sites multiply to {total}",
            m.rows(),
            m.cols()
        )));
    }
    if keep.is_empty() {
        return Err(Error::Layout("keep set is empty".into()));
    }
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::Layout(format!("duplicate sites in keep set {keep:?}")));
    }
    if let Some(&s) = kept.iter().find(|&&s| s >= dims.len()) {
        return Err(Error::Layout(format!("site {s} out of range for {} sites", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|s| !kept.contains(s)).collect();

    let strides = site_strides(dims);
    let keep_offsets = offsets(&kept, dims, &strides);
    let trace_offsets = offsets(&traced, dims, &strides);
    let k = keep_offsets.len();
    let mut out = ComplexMatrix::zeros(k, k);
    for (i, &oi) in keep_offsets.iter().enumerate() {
        for (j, &oj) in keep_offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &t in &trace_offsets {
                acc += m[(oi + t, oj + t)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok(out)
}

/// Reorders sites: site `s` of the output is site `perm[s]` of the input.
pub fn permute_sites(m: &ComplexMatrix, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
    let map = permutation_map(dims, perm)?;
    if !m.is_square() || m.rows() != map.len() {
        return Err(Error::Layout("matrix does not match the site dimensions".into()));
    }
    Ok(ComplexMatrix::from_fn(map.len(), map.len(), |a, b| m[(map[a], map[b])]))
}

/// Same reordering as [`permute_sites`] for a state vector.
pub fn permute_vector(v: &[Complex64], dims: &[usize], perm: &[usize]) -> Result<Vec<Complex64>> {
    let map = permutation_map(dims, perm)?;
    if v.len() != map.len() {
        return Err(Error::Layout("vector does not match the site dimensions".into()));
    }
    Ok(map.iter().map(|&i| v[i]).collect())
}

/// `map[new_index] = old_index` for the site permutation `perm`.
fn permutation_map(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; dims.len()];
    if perm.len() != dims.len() {
        return Err(Error::Layout(format!("permutation {perm:?} has wrong length")));
    }
    for &p in perm {
        if p >= dims.len() || seen[p] {
            return Err(Error::Layout(format!("{perm:?} is not a permutation")));
        }
        seen[p] = true;
    }
    let old_strides = site_strides(dims);
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let total: usize = dims.iter().product();
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    for _ in 0..total {
        map.push(digits.iter().zip(perm).map(|(&x, &p)| x * old_strides[p]).sum());
        for s in (0..digits.len()).rev() {
            digits[s] += 1;
            if digits[s] < new_dims[s] {
                break;
            }
            digits[s] = 0;
        }
    }
    Ok(map)
}

fn site_strides(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; dims.len()];
    for s in (0..dims.len().saturating_sub(1)).rev() {
        strides[s] = strides[s + 1] * dims[s + 1];
    }
    strides
}

/// Flat offsets of every multi-index over `sites`, ascending in those sites.
fn offsets(sites: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize];
    for &s in sites {
        out = out
            .iter()
            .flat_map(|&base| (0..dims[s]).map(move |x| base + x * strides[s]))
            .collect();
    }
    out
}
