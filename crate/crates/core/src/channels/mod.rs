//! Covariant noisy channels: joint Pauli channels with pairwise correlation
//! degrees, depolarizing and fully correlated special cases, Kraus-form
//! CPTP maps and a numerical covariance certifier.

mod covariance;
mod cptp;
mod pauli;

pub use covariance::verify_covariance;
pub use cptp::{apply_cptp, CptpMap, SiteChannel, KRAUS_TOL};
pub(crate) use cptp::apply_leading;
pub use pauli::{
    correlated_probs, depolarizing_probs, fully_correlated_probs, uncorrelated_probs, CorrelationSpec,
    PauliChannelSpec, SinglePartyPauliSpec, MAX_JOINT_ENTRIES,
};

use crate::error::{Error, Result};
use crate::tensor::{symmetrize, ComplexMatrix, DensityMatrix, SubsystemLayout};

/// A quantum channel acting on states of a [`SubsystemLayout`].
pub trait Channel: Send + Sync {
    /// Applies the channel to an arbitrary operator on the full layout.
    fn apply_raw(&self, x: &ComplexMatrix, layout: &SubsystemLayout) -> Result<ComplexMatrix>;

    /// Applies the channel to a state and re-validates the output.
    fn apply(&self, rho: &DensityMatrix, layout: &SubsystemLayout) -> Result<DensityMatrix> {
        if rho.dim() != layout.total_dim() {
            return Err(Error::Layout(format!(
                "state dimension {} does not match layout dimension {}",
                rho.dim(),
                layout.total_dim()
            )));
        }
        let mut out = self.apply_raw(rho.matrix(), layout)?;
        symmetrize(&mut out);
        DensityMatrix::new(out)
    }
}

impl<C: Channel + ?Sized> Channel for &C {
    fn apply_raw(&self, x: &ComplexMatrix, layout: &SubsystemLayout) -> Result<ComplexMatrix> {
        (**self).apply_raw(x, layout)
    }
}

/// `Λ^P(ρ)`, skipping zero-probability terms.
pub fn apply_pauli(spec: &PauliChannelSpec, rho: &DensityMatrix, layout: &SubsystemLayout) -> Result<DensityMatrix> {
    spec.apply(rho, layout)
}
