use num_complex::Complex64;
use rand::Rng;

use crate::capacity::closed_form::square_root_dim;
use crate::capacity::ensemble::UNITARY_TOL;
use crate::channels::{apply_leading, depolarizing_probs, uncorrelated_probs, Channel};
use crate::displacement::local_encoding_set;
use crate::error::{Error, Result};
use crate::states::bell_copies_vector;
use crate::tensor::{
    random_unitary, von_neumann_entropy, ComplexMatrix, DensityMatrix, SubsystemLayout,
};

/// Upper bound on `pairs × dimension` work in [`lemma2_orthogonality_check`].
const LEMMA2_WORK_LIMIT: usize = 1 << 30;

/// Pairwise overlaps of the encoded Bell-copy states
/// `π_L = (Ṽ_L U ⊗ I) |Φ><Φ| (Ṽ_L U ⊗ I)^†`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lemma2Report {
    /// `max |tr(π_L π_L')|` over distinct labels.
    pub max_cross_trace: f64,
    /// `max ‖π_L π_L'‖_max` over distinct labels.
    pub max_cross_product: f64,
    /// `max |tr(π_L π_L) − 1|`.
    pub purity_deviation: f64,
    /// Number of ordered label pairs examined.
    pub pairs: usize,
}

/// Exhaustive check that the `D_A^2` states obtained by encoding `k` Bell
/// copies with `Ṽ_L U` are mutually orthogonal, for any unitary `u` on the
/// senders. For pure states `π π' = |ψ><ψ|ψ'><ψ'|`, so both the trace and the
/// entrywise product norm follow from the overlaps `<ψ|ψ'>`.
pub fn lemma2_orthogonality_check(dims: &[usize], u: &ComplexMatrix) -> Result<Lemma2Report> {
    let set = local_encoding_set(dims)?;
    let da = set.sender_dim();
    if !u.is_square() || u.rows() != da {
        return Err(Error::Layout(format!("unitary is {}x{}, senders span {da}", u.rows(), u.cols())));
    }
    let dev = u.adjoint().matmul(u).max_abs_diff(&ComplexMatrix::identity(da));
    if dev > UNITARY_TOL {
        return Err(Error::Parameter(format!("sender operator is not unitary (deviation {dev:.3e})")));
    }
    let layout = SubsystemLayout::with_receiver_factors(dims.to_vec(), dims.to_vec())?;
    let total = layout.total_dim();
    let count = set.len();
    let work = count.saturating_mul(count).saturating_mul(total);
    if work > LEMMA2_WORK_LIMIT {
        return Err(Error::SizeLimit { requested: work, limit: LEMMA2_WORK_LIMIT });
    }

    let psi = bell_copies_vector(dims)?;
    let base = ComplexMatrix::from_raw(total, 1, left_mul_vector(u, &psi, layout.receiver_dim()));
    let states: Vec<Vec<Complex64>> = (0..count)
        .map(|i| set.embedded_monomial(i, &layout).left_mul(&base).as_slice().to_vec())
        .collect();
    let peaks: Vec<f64> = states.iter().map(|s| s.iter().fold(0.0, |m: f64, z| m.max(z.norm()))).collect();

    let mut report = Lemma2Report { max_cross_trace: 0.0, max_cross_product: 0.0, purity_deviation: 0.0, pairs: 0 };
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
            let trace = overlap.norm_sqr();
            report.pairs += 1;
            if i == j {
                report.purity_deviation = report.purity_deviation.max((trace - 1.0).abs());
            } else {
                report.max_cross_trace = report.max_cross_trace.max(trace);
                report.max_cross_product = report.max_cross_product.max(overlap.norm() * peaks[i] * peaks[j]);
            }
        }
    }
    Ok(report)
}

/// `(U ⊗ I_rest) v`
fn left_mul_vector(u: &ComplexMatrix, v: &[Complex64], rest: usize) -> Vec<Complex64> {
    let local = u.rows();
    let mut out = vec![Complex64::new(0.0, 0.0); local * rest];
    for a in 0..local {
        for c in 0..u.cols() {
            let w = u[(a, c)];
            for r in 0..rest {
                out[a * rest + r] += w * v[c * rest + r];
            }
        }
    }
    out
}

/// `max |S(Λ((U ⊗ I) ρ (U ⊗ I)^†)) − S(Λ(ρ))|` over `trials` Haar-random
/// `U` on the first site, with independent depolarizing noise of strength
/// `p` on both sites of a `d x d` state.
pub fn depolarizing_invariance_check(rho_ab: &DensityMatrix, p: f64, trials: usize, rng: &mut impl Rng) -> Result<f64> {
    let d = square_root_dim(rho_ab.dim())?;
    let layout = SubsystemLayout::new(vec![d], d)?;
    let dep = depolarizing_probs(d, p)?;
    let channel = uncorrelated_probs(&[dep.clone(), dep])?;
    let reference = von_neumann_entropy(&channel.apply(rho_ab, &layout)?);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let u = random_unitary(d, rng);
        let rotated = DensityMatrix::new(apply_leading(&[u], rho_ab.matrix(), d))?;
        let s = von_neumann_entropy(&channel.apply(&rotated, &layout)?);
        worst = worst.max((s - reference).abs());
    }
    Ok(worst)
}
