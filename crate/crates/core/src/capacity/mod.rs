//! Superdense coding capacities: Holevo quantities of encoding ensembles,
//! output-entropy minimization over unitary and CPTP encoders, closed forms
//! for the solvable state/channel families, and numerical checks of the
//! structural lemmas behind them.

mod checks;
mod closed_form;
mod ensemble;
mod minimize;
mod search;

pub use checks::{depolarizing_invariance_check, lemma2_orthogonality_check, Lemma2Report};
pub use closed_form::{
    closed_form_bd_fully_correlated, closed_form_bell_correlated, closed_form_depolarizing,
    closed_form_ghz_fully_correlated,
};
pub use ensemble::{
    attaining_ensemble, holevo, holevo_terms, Encoder, EncodingEnsemble, HolevoTerms, ENSEMBLE_PROB_TOL, UNITARY_TOL,
};
pub use search::{capacity_covariant, capacity_nonunitary, COVARIANCE_TOL, HOLEVO_CHECK_TOL};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether encoders factor over the senders or act jointly on them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EncodingMode {
    #[default]
    Local,
    Global,
}

/// Settings of the multi-restart output-entropy minimizer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Restarts per search stage; restart 0 always starts at the identity.
    pub restarts: usize,
    /// Iteration cap of a single descent.
    pub max_iters: usize,
    /// Entropy decrease below which an iteration counts as stalled.
    pub convergence_tol: f64,
    /// Central finite-difference step.
    pub fd_step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 16, max_iters: 500, convergence_tol: 1e-8, fd_step: 1e-5, seed: 42 }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::Parameter("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::Parameter("max_iters must be at least 1".into()));
        }
        if !(self.convergence_tol > 0.0) || !(self.fd_step > 0.0) {
            return Err(Error::Parameter("convergence_tol and fd_step must be positive".into()));
        }
        Ok(())
    }
}

/// Encoder family searched by a stage of the optimizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    LocalUnitary = 0,
    GlobalUnitary = 1,
    LocalCptp = 2,
    GlobalCptp = 3,
}

/// Result of one restart.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestartRecord {
    pub stage: Stage,
    pub restart: usize,
    /// Output entropy reached, in bits.
    pub entropy: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Capacity together with its three terms and optimizer diagnostics.
///
/// `capacity_bits = log_da + receiver_entropy_bits − min_output_entropy_bits`.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacityReport {
    pub capacity_bits: f64,
    /// `log2 D_A`
    pub log_da: f64,
    /// `S(Λ_b(ρ_b))`
    pub receiver_entropy_bits: f64,
    pub min_output_entropy_bits: f64,
    /// Holevo quantity of the attaining ensemble built from `encoder_at_min`.
    pub holevo_bits: f64,
    pub mode: EncodingMode,
    pub optimizer_trace: Vec<RestartRecord>,
    pub encoder_at_min: Encoder,
}

impl CapacityReport {
    /// `|capacity − (log D_A + S_b − S_min)|`, zero up to rounding.
    pub fn bookkeeping_residual(&self) -> f64 {
        (self.capacity_bits - (self.log_da + self.receiver_entropy_bits - self.min_output_entropy_bits)).abs()
    }
}
