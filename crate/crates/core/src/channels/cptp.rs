use num_complex::Complex64;

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::tensor::{permute_sites, ComplexMatrix, DensityMatrix, SubsystemLayout};

/// Kraus completeness tolerance.
pub const KRAUS_TOL: f64 = 1e-9;

/// Completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct CptpMap {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl CptpMap {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::Channel("no Kraus operators".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != out_dim || k.cols() != in_dim) {
            return Err(Error::Channel("Kraus operators have inconsistent shapes".into()));
        }
        let mut completeness = ComplexMatrix::zeros(in_dim, in_dim);
        for k in &kraus {
            completeness = &completeness + &k.adjoint().matmul(k);
        }
        let dev = completeness.max_abs_diff(&ComplexMatrix::identity(in_dim));
        if dev > KRAUS_TOL {
            return Err(Error::Channel(format!("Kraus operators are not trace preserving (deviation {dev:.3e})")));
        }
        Ok(Self { in_dim, out_dim, kraus })
    }

    pub(crate) fn from_kraus_unchecked(kraus: Vec<ComplexMatrix>) -> Self {
        let (out_dim, in_dim) = (kraus[0].rows(), kraus[0].cols());
        Self { in_dim, out_dim, kraus }
    }

    /// Conjugation by a single unitary.
    pub fn from_unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Kraus operators `K_e = (<e| ⊗ I) V` of an isometry `V` whose rows are
    /// ordered environment-major: row `e * out_dim + i`.
    pub fn from_isometry(v: &ComplexMatrix, env_dim: usize) -> Result<Self> {
        if env_dim == 0 || !v.rows().is_multiple_of(env_dim) {
            return Err(Error::Channel(format!(
                "isometry with {} rows cannot split into environment dimension {env_dim}",
                v.rows()
            )));
        }
        let out = v.rows() / env_dim;
        let kraus = (0..env_dim)
            .map(|e| ComplexMatrix::from_fn(out, v.cols(), |i, j| v[(e * out + i, j)]))
            .collect();
        Self::new(kraus)
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// `Γ ⊗ Γ'`
    pub fn tensor(&self, other: &CptpMap) -> Result<CptpMap> {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kron(b)?);
            }
        }
        Ok(Self::from_kraus_unchecked(kraus))
    }

    /// `ξ ↦ U Γ(ξ) U^†`
    pub fn followed_by_unitary(&self, u: &ComplexMatrix) -> CptpMap {
        Self::from_kraus_unchecked(self.kraus.iter().map(|k| u.matmul(k)).collect())
    }

    /// Attaches the map to layout sites.
    pub fn on_sites(&self, sites: Vec<usize>) -> SiteChannel {
        SiteChannel { map: self.clone(), sites }
    }

    /// `Σ K x K^†` for an operator on exactly `in_dim`.
    pub fn apply_local(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out = &out + &x.conjugate_by(k);
        }
        out
    }
}

/// A CPTP map acting on a subset of layout sites, identity elsewhere.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteChannel {
    map: CptpMap,
    sites: Vec<usize>,
}

impl SiteChannel {
    pub fn map(&self) -> &CptpMap {
        &self.map
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }
}

impl Channel for SiteChannel {
    fn apply_raw(&self, x: &ComplexMatrix, layout: &SubsystemLayout) -> Result<ComplexMatrix> {
        apply_kraus_on_sites(self.map.kraus(), x, &layout.site_dims(), &self.sites)
    }
}

/// Applies `map` to the given sites of `rho`.
pub fn apply_cptp(map: &CptpMap, rho: &DensityMatrix, sites: &[usize], layout: &SubsystemLayout) -> Result<DensityMatrix> {
    if rho.dim() != layout.total_dim() {
        return Err(Error::Layout("state does not match the layout".into()));
    }
    let out = apply_kraus_on_sites(map.kraus(), rho.matrix(), &layout.site_dims(), sites)?;
    DensityMatrix::new(out)
}

/// `Σ (K ⊗ I) x (K ⊗ I)^†` with `K` acting on `sites` of a space with
/// site dimensions `dims`.
pub(crate) fn apply_kraus_on_sites(
    kraus: &[ComplexMatrix],
    x: &ComplexMatrix,
    dims: &[usize],
    sites: &[usize],
) -> Result<ComplexMatrix> {
    let total: usize = dims.iter().product();
    if !x.is_square() || x.rows() != total {
        return Err(Error::Layout("operator does not match the layout".into()));
    }
    if sites.is_empty() {
        return Err(Error::Layout("no sites selected".into()));
    }
    let mut seen = vec![false; dims.len()];
    for &s in sites {
        if s >= dims.len() || seen[s] {
            return Err(Error::Layout(format!("invalid site list {sites:?}")));
        }
        seen[s] = true;
    }
    let local: usize = sites.iter().map(|&s| dims[s]).product();
    let first = &kraus[0];
    if first.cols() != local || first.rows() != local {
        return Err(Error::Layout(format!(
            "map of shape {}x{} does not fit sites of dimension {local}",
            first.rows(),
            first.cols()
        )));
    }
    let leading = sites.iter().enumerate().all(|(i, &s)| i == s);
    if leading {
        return Ok(apply_leading(kraus, x, total / local));
    }
    let perm: Vec<usize> = sites.iter().copied().chain((0..dims.len()).filter(|s| !seen[*s])).collect();
    let moved = permute_sites(x, dims, &perm)?;
    let permuted_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let out = apply_leading(kraus, &moved, total / local);
    let mut inverse = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inverse[p] = i;
    }
    permute_sites(&out, &permuted_dims, &inverse)
}

/// Kraus operators acting on the leading factor of a `local x rest` split.
pub(crate) fn apply_leading(kraus: &[ComplexMatrix], x: &ComplexMatrix, rest: usize) -> ComplexMatrix {
    let n = x.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for k in kraus {
        let y = left_mul_leading(k, x, rest);
        add_right_mul_leading_adjoint(&y, k, rest, &mut out);
    }
    out
}

/// `(K ⊗ I_rest) x`
fn left_mul_leading(k: &ComplexMatrix, x: &ComplexMatrix, rest: usize) -> ComplexMatrix {
    let n = x.cols();
    let local = k.rows();
    let src = x.as_slice();
    let mut out = ComplexMatrix::zeros(local * rest, n);
    let dst = out.as_mut_slice();
    for a in 0..local {
        for c in 0..k.cols() {
            let kac = k[(a, c)];
            if kac == Complex64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..rest {
                let src_row = &src[(c * rest + r) * n..(c * rest + r + 1) * n];
                let dst_row = &mut dst[(a * rest + r) * n..(a * rest + r + 1) * n];
                for (o, v) in dst_row.iter_mut().zip(src_row) {
                    *o += kac * v;
                }
            }
        }
    }
    out
}

/// `out += y (K ⊗ I_rest)^†`
fn add_right_mul_leading_adjoint(y: &ComplexMatrix, k: &ComplexMatrix, rest: usize, out: &mut ComplexMatrix) {
    let rows = y.rows();
    let local = k.rows();
    let inner = k.cols();
    let n_out = local * rest;
    let src = y.as_slice();
    let n_in = inner * rest;
    let dst = out.as_mut_slice();
    for row in 0..rows {
        let src_row = &src[row * n_in..(row + 1) * n_in];
        let dst_row = &mut dst[row * n_out..(row + 1) * n_out];
        for a in 0..local {
            for c in 0..inner {
                let kc = k[(a, c)].conj();
                if kc == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r in 0..rest {
                    dst_row[a * rest + r] += src_row[c * rest + r] * kc;
                }
            }
        }
    }
}
