use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::capacity::ensemble::{attaining_ensemble, holevo, Encoder};
use crate::capacity::minimize::{minimize, MinimizeSettings};
use crate::capacity::{CapacityReport, EncodingMode, OptimizerConfig, RestartRecord, Stage};
use crate::channels::{apply_leading, verify_covariance, Channel, CptpMap};
use crate::displacement::{local_encoding_set, LocalEncodingSet};
use crate::error::{Error, Result};
use crate::tensor::{
    entropy_of_spectrum, herm_expm, hermitian_eigenvalues, kron_unchecked, matrix_entropy, orthonormalize_columns,
    partial_trace_raw, random_ginibre, random_unitary, symmetrize, ComplexMatrix, DensityMatrix, SubsystemLayout,
};
use num_complex::Complex64;

/// Covariance certification threshold applied before optimizing.
pub const COVARIANCE_TOL: f64 = 1e-8;
/// Allowed gap between the reported capacity and the Holevo quantity of the
/// attaining ensemble.
pub const HOLEVO_CHECK_TOL: f64 = 1e-6;
const CERTIFY_TRIALS: usize = 2;
const CERTIFY_STREAM: u64 = u64::MAX;

/// State, channel and layout of one optimization problem.
struct Problem<'a> {
    rho: &'a ComplexMatrix,
    channel: &'a dyn Channel,
    layout: &'a SubsystemLayout,
}

impl Problem<'_> {
    fn output(&self, kraus: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        let encoded = apply_leading(kraus, self.rho, self.layout.receiver_dim());
        let mut out = self.channel.apply_raw(&encoded, self.layout)?;
        symmetrize(&mut out);
        Ok(out)
    }

    fn entropy(&self, kraus: &[ComplexMatrix]) -> f64 {
        self.output(kraus)
            .and_then(|out| hermitian_eigenvalues(&out))
            .map(|spec| entropy_of_spectrum(&spec))
            .unwrap_or(f64::INFINITY)
    }
}

/// How each factor of the encoder is parameterized.
#[derive(Clone, Copy, Debug)]
enum Kind {
    /// `base · exp(iH)` with `H` from `d^2` reals.
    Unitary,
    /// Columns of `base + Δ` orthonormalized, `Δ` from `2·d·env·d` reals.
    Isometry { env: usize },
}

impl Kind {
    fn params(self, d: usize) -> usize {
        match self {
            Kind::Unitary => d * d,
            Kind::Isometry { env } => 2 * d * env * d,
        }
    }

    fn identity_base(self, d: usize) -> ComplexMatrix {
        match self {
            Kind::Unitary => ComplexMatrix::identity(d),
            Kind::Isometry { env } => embed_unitary(&ComplexMatrix::identity(d), env),
        }
    }

    fn random_base(self, d: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        match self {
            Kind::Unitary => random_unitary(d, rng),
            Kind::Isometry { env } => orthonormalize_columns(&random_ginibre(d * env, d, rng)),
        }
    }

    /// Kraus operators of one factor at parameters `theta`.
    fn factor_kraus(self, base: &ComplexMatrix, theta: &[f64]) -> Option<Vec<ComplexMatrix>> {
        match self {
            Kind::Unitary => {
                let h = hermitian_from_params(base.cols(), theta);
                Some(vec![base.matmul(&herm_expm(&h).ok()?)])
            }
            Kind::Isometry { env } => {
                let d = base.cols();
                let shifted = ComplexMatrix::from_fn(base.rows(), d, |i, j| {
                    let k = 2 * (i * d + j);
                    base[(i, j)] + Complex64::new(theta[k], theta[k + 1])
                });
                if shifted.as_slice().iter().any(|z| !z.is_finite()) {
                    return None;
                }
                let v = orthonormalize_columns(&shifted);
                Some((0..env).map(|e| ComplexMatrix::from_fn(d, d, |i, j| v[(e * d + i, j)])).collect())
            }
        }
    }
}

/// `[U; 0; ...; 0]`, an isometry with environment `env` whose only
/// nonzero Kraus operator is `U`.
fn embed_unitary(u: &ComplexMatrix, env: usize) -> ComplexMatrix {
    let d = u.cols();
    ComplexMatrix::from_fn(d * env, d, |i, j| if i < d { u[(i, j)] } else { Complex64::new(0.0, 0.0) })
}

/// Hermitian matrix from `d^2` reals: the diagonal, then `(re, im)` of the
/// upper triangle in row order.
fn hermitian_from_params(d: usize, theta: &[f64]) -> ComplexMatrix {
    let mut h = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = Complex64::new(theta[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in i + 1..d {
            let z = Complex64::new(theta[k], theta[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// Encoder family: a tensor product of parameterized factors.
struct Family {
    kind: Kind,
    bases: Vec<ComplexMatrix>,
}

impl Family {
    fn num_params(&self) -> usize {
        self.bases.iter().map(|b| self.kind.params(b.cols())).sum()
    }

    fn kraus(&self, theta: &[f64]) -> Option<Vec<ComplexMatrix>> {
        let mut ops = vec![ComplexMatrix::identity(1)];
        let mut offset = 0;
        for base in &self.bases {
            let n = self.kind.params(base.cols());
            let factor = self.kind.factor_kraus(base, &theta[offset..offset + n])?;
            offset += n;
            ops = ops.iter().flat_map(|a| factor.iter().map(move |b| kron_unchecked(a, b))).collect();
        }
        Some(ops)
    }

    /// Per-factor matrices at `theta`, used to warm-start later stages.
    fn factors(&self, theta: &[f64]) -> Option<Vec<ComplexMatrix>> {
        let mut offset = 0;
        self.bases
            .iter()
            .map(|base| {
                let n = self.kind.params(base.cols());
                let ops = self.kind.factor_kraus(base, &theta[offset..offset + n])?;
                offset += n;
                Some(ops.into_iter().next().expect("factor has at least one Kraus operator"))
            })
            .collect()
    }
}

struct StageOutcome {
    kraus: Vec<ComplexMatrix>,
    /// Unitary factors at the optimum (unitary stages only).
    factors: Vec<ComplexMatrix>,
    entropy: f64,
    trace: Vec<RestartRecord>,
}

fn restart_rng(seed: u64, stage: Stage, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stage as u64) << 32) | restart as u64);
    rng
}

/// Minimizes the output entropy over one encoder family. Restart 0 starts
/// at the identity, restart 1 at `warm` when given, the rest at random
/// points drawn from their own RNG stream.
fn run_stage(
    problem: &Problem,
    stage: Stage,
    kind: Kind,
    factor_dims: &[usize],
    warm: Option<Vec<ComplexMatrix>>,
    cfg: &OptimizerConfig,
) -> Result<StageOutcome> {
    let settings = MinimizeSettings { max_iters: cfg.max_iters, tol: cfg.convergence_tol, fd_step: cfg.fd_step };
    let mut best: Option<(f64, Family, Vec<f64>)> = None;
    // the warm start always runs, even with a single configured restart
    let runs = cfg.restarts.max(1 + usize::from(warm.is_some()));
    let mut trace = Vec::with_capacity(runs);
    for restart in 0..runs {
        let bases = match (restart, &warm) {
            (0, _) => factor_dims.iter().map(|&d| kind.identity_base(d)).collect(),
            (1, Some(w)) => w.clone(),
            _ => {
                let mut rng = restart_rng(cfg.seed, stage, restart);
                factor_dims.iter().map(|&d| kind.random_base(d, &mut rng)).collect()
            }
        };
        let family = Family { kind, bases };
        let objective = |theta: &[f64]| family.kraus(theta).map_or(f64::INFINITY, |k| problem.entropy(&k));
        let found = minimize(&objective, vec![0.0; family.num_params()], settings);
        trace.push(RestartRecord {
            stage,
            restart,
            entropy: found.value,
            converged: found.converged,
            iterations: found.iterations,
        });
        // strict comparison keeps the lowest restart id on ties
        if found.converged && best.as_ref().is_none_or(|(v, _, _)| found.value < *v) {
            best = Some((found.value, family, found.x));
        }
    }
    let Some((_, family, theta)) = best else {
        return Err(Error::OptimizerDiverged { restarts: runs });
    };
    let kraus = family.kraus(&theta).ok_or_else(|| Error::Numerical("optimum is not finite".into()))?;
    let factors = match kind {
        Kind::Unitary => family.factors(&theta).unwrap_or_default(),
        Kind::Isometry { .. } => Vec::new(),
    };
    let entropy = problem.entropy(&kraus);
    Ok(StageOutcome { kraus, factors, entropy, trace })
}

fn check_inputs(
    rho: &DensityMatrix,
    channel: &dyn Channel,
    layout: &SubsystemLayout,
    cfg: &OptimizerConfig,
) -> Result<LocalEncodingSet> {
    cfg.validate()?;
    if rho.dim() != layout.total_dim() {
        return Err(Error::Layout(format!(
            "state dimension {} does not match layout dimension {}",
            rho.dim(),
            layout.total_dim()
        )));
    }
    let set = local_encoding_set(layout.sender_dims())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(CERTIFY_STREAM);
    let deviation = verify_covariance(channel, &set, layout, CERTIFY_TRIALS, &mut rng)?;
    if deviation > COVARIANCE_TOL {
        return Err(Error::NonCovariantChannel { deviation });
    }
    Ok(set)
}

/// Unitary stages: local, then global warm-started from the local optimum.
fn unitary_stages(problem: &Problem, mode: EncodingMode, cfg: &OptimizerConfig) -> Result<StageOutcome> {
    let layout = problem.layout;
    let local = run_stage(problem, Stage::LocalUnitary, Kind::Unitary, layout.sender_dims(), None, cfg)?;
    match mode {
        EncodingMode::Local => Ok(local),
        EncodingMode::Global => {
            let joint = local.factors.iter().skip(1).fold(local.factors[0].clone(), |acc, f| kron_unchecked(&acc, f));
            let mut global =
                run_stage(problem, Stage::GlobalUnitary, Kind::Unitary, &[layout.sender_dim()], Some(vec![joint]), cfg)?;
            let mut trace = local.trace;
            trace.append(&mut global.trace);
            global.trace = trace;
            Ok(global)
        }
    }
}

fn finish(
    problem: &Problem,
    set: &LocalEncodingSet,
    encoder: Encoder,
    mode: EncodingMode,
    trace: Vec<RestartRecord>,
) -> Result<CapacityReport> {
    let layout = problem.layout;
    let out = problem.output(encoder.kraus())?;
    let min_output_entropy_bits = matrix_entropy(&out)?;
    let receiver = partial_trace_raw(&out, &layout.site_dims(), &layout.receiver_sites())?;
    let receiver_entropy_bits = matrix_entropy(&receiver)?;
    let log_da = (layout.sender_dim() as f64).log2();
    let capacity_bits = log_da + receiver_entropy_bits - min_output_entropy_bits;

    let rho = DensityMatrix::from_matrix_unchecked(problem.rho.clone());
    let holevo_bits = holevo(&attaining_ensemble(&encoder, set)?, problem.channel, &rho, layout)?;
    if (holevo_bits - capacity_bits).abs() > HOLEVO_CHECK_TOL {
        return Err(Error::Numerical(format!(
            "attaining ensemble reaches {holevo_bits:.12} bits, capacity formula gives {capacity_bits:.12}"
        )));
    }
    Ok(CapacityReport {
        capacity_bits,
        log_da,
        receiver_entropy_bits,
        min_output_entropy_bits,
        holevo_bits,
        mode,
        optimizer_trace: trace,
        encoder_at_min: encoder,
    })
}

/// Superdense coding capacity with unitary encoding:
/// `log D_A + S(Λ_b(ρ_b)) − min_U S(Λ((U ⊗ I) ρ (U ⊗ I)^†))`, minimizing over
/// products of local unitaries or over global unitaries on the senders.
///
/// The channel must be covariant under the local displacement set; this is
/// certified numerically first. The capacity is cross-checked against the
/// Holevo quantity of the attaining ensemble.
pub fn capacity_covariant(
    rho: &DensityMatrix,
    channel: &dyn Channel,
    layout: &SubsystemLayout,
    mode: EncodingMode,
    cfg: &OptimizerConfig,
) -> Result<CapacityReport> {
    let set = check_inputs(rho, channel, layout, cfg)?;
    let problem = Problem { rho: rho.matrix(), channel, layout };
    let outcome = unitary_stages(&problem, mode, cfg)?;
    let u = outcome.kraus.into_iter().next().expect("unitary stage yields one operator");
    finish(&problem, &set, Encoder::Unitary(u), mode, outcome.trace)
}

/// Capacity with a CPTP pre-processing before the unitary encoding, searched
/// over Stinespring isometries with environment dimension `env_dim`: one
/// isometry per sender in local mode, a joint one in global mode.
///
/// The search is warm-started from the unitary optimum of the same mode, so
/// the result is never below [`capacity_covariant`].
pub fn capacity_nonunitary(
    rho: &DensityMatrix,
    channel: &dyn Channel,
    layout: &SubsystemLayout,
    mode: EncodingMode,
    env_dim: usize,
    cfg: &OptimizerConfig,
) -> Result<CapacityReport> {
    let factor_dims = match mode {
        EncodingMode::Local => layout.sender_dims().to_vec(),
        EncodingMode::Global => vec![layout.sender_dim()],
    };
    let max_env = factor_dims.iter().map(|d| d * d).min().unwrap_or(1);
    if env_dim == 0 || env_dim > max_env {
        return Err(Error::Parameter(format!("environment dimension {env_dim} is outside 1..={max_env}")));
    }
    let set = check_inputs(rho, channel, layout, cfg)?;
    let problem = Problem { rho: rho.matrix(), channel, layout };
    let unitary = unitary_stages(&problem, mode, cfg)?;
    let warm = match mode {
        EncodingMode::Local => unitary.factors.iter().map(|u| embed_unitary(u, env_dim)).collect(),
        EncodingMode::Global => vec![embed_unitary(&unitary.kraus[0], env_dim)],
    };
    let stage = match mode {
        EncodingMode::Local => Stage::LocalCptp,
        EncodingMode::Global => Stage::GlobalCptp,
    };
    let mut cptp = run_stage(&problem, stage, Kind::Isometry { env: env_dim }, &factor_dims, Some(warm), cfg)?;
    let mut trace = unitary.trace;
    trace.append(&mut cptp.trace);
    let kraus = if cptp.entropy <= unitary.entropy { cptp.kraus } else { unitary.kraus };
    finish(&problem, &set, Encoder::Cptp(CptpMap::from_kraus_unchecked(kraus)), mode, trace)
}
