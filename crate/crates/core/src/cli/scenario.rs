use crate::capacity::{
    capacity_covariant, capacity_nonunitary, closed_form_bd_fully_correlated, closed_form_bell_correlated,
    closed_form_depolarizing, closed_form_ghz_fully_correlated,
};
use crate::channels::{depolarizing_probs, fully_correlated_probs, uncorrelated_probs, PauliChannelSpec};
use crate::cli::config::{MuConfig, ScenarioConfig, ScenarioKind};
use crate::cli::output::ResultRow;
use crate::error::{Error, Result};
use crate::states::{assemble_copies, bell_copies, bell_diagonal, bell_state, ghz_state, BellDiagonalSpec};
use crate::tensor::{DensityMatrix, SubsystemLayout};

/// Largest allowed gap between closed form and optimizer.
pub const AGREEMENT_TOL: f64 = 1e-6;

/// Parameters accepted by [`run_sweep`].
pub const SWEEP_PARAMS: [&str; 4] = ["p", "mu", "copies", "k"];

struct Prepared {
    rho: DensityMatrix,
    layout: SubsystemLayout,
    channel: PauliChannelSpec,
    closed_form: Option<f64>,
}

fn prepare(cfg: &ScenarioConfig) -> Result<Prepared> {
    let k = cfg.copies();
    match cfg.scenario {
        ScenarioKind::BellCorrelated => {
            let dims = cfg.dims.clone().unwrap_or_else(|| vec![cfg.d.unwrap_or(2); k]);
            let (rho, layout) = bell_copies(&dims)?;
            let channel = cfg.channel.as_ref().expect("validated").build()?;
            let closed_form = Some(closed_form_bell_correlated(&channel, &dims)?);
            Ok(Prepared { rho, layout, channel, closed_form })
        }
        ScenarioKind::BellDiagonalFull => {
            let spec = BellDiagonalSpec::new(cfg.weights.expect("validated"))?;
            let (rho, layout) = assemble_copies(&bell_diagonal(&spec)?, &SubsystemLayout::new(vec![2], 2)?, k)?;
            let channel = fully_correlated_probs(2 * k, cfg.q.expect("validated"))?;
            Ok(Prepared { rho, layout, channel, closed_form: Some(closed_form_bd_fully_correlated(k, &spec)) })
        }
        ScenarioKind::GhzFull => {
            let half = cfg.k.expect("validated");
            let rho = ghz_state(2 * half)?;
            let layout = SubsystemLayout::new(vec![2; 2 * half - 1], 2)?;
            let channel = fully_correlated_probs(2 * half, cfg.q.expect("validated"))?;
            Ok(Prepared { rho, layout, channel, closed_form: Some(closed_form_ghz_fully_correlated(half)?) })
        }
        ScenarioKind::Depolarizing => {
            let d = cfg.d.unwrap_or(2);
            let p = cfg.p.expect("validated");
            let single = bell_state(d)?;
            let (rho, layout) = assemble_copies(&single, &SubsystemLayout::new(vec![d], d)?, k)?;
            let channel = uncorrelated_probs(&vec![depolarizing_probs(d, p)?; 2 * k])?;
            Ok(Prepared { rho, layout, channel, closed_form: Some(closed_form_depolarizing(&single, p, k)?) })
        }
        ScenarioKind::Custom => {
            let rho = cfg.state.as_ref().expect("validated").build()?;
            let layout = SubsystemLayout::with_receiver_factors(
                cfg.senders.clone().expect("validated"),
                cfg.receivers.clone().expect("validated"),
            )?;
            let channel = cfg.channel.as_ref().expect("validated").build()?;
            Ok(Prepared { rho, layout, channel, closed_form: None })
        }
    }
}

fn evaluate(cfg: &ScenarioConfig, param: &str, value: Option<f64>) -> Result<ResultRow> {
    let prepared = prepare(cfg)?;
    let opt = cfg.optimizer_config();
    let report = capacity_covariant(&prepared.rho, &prepared.channel, &prepared.layout, cfg.mode, &opt)?;
    let nonunitary_bits = match cfg.env_dim {
        Some(env) => Some(
            capacity_nonunitary(&prepared.rho, &prepared.channel, &prepared.layout, cfg.mode, env, &opt)?
                .capacity_bits,
        ),
        None => None,
    };
    let optimizer_bits = report.capacity_bits;
    let agreement = prepared.closed_form.is_none_or(|c| (c - optimizer_bits).abs() <= AGREEMENT_TOL);
    Ok(ResultRow {
        scenario: cfg.scenario.name().to_string(),
        param: param.to_string(),
        value,
        capacity_bits: prepared.closed_form.unwrap_or(optimizer_bits),
        closed_form_bits: prepared.closed_form,
        optimizer_bits,
        receiver_entropy_bits: report.receiver_entropy_bits,
        min_output_entropy_bits: report.min_output_entropy_bits,
        holevo_bits: report.holevo_bits,
        nonunitary_bits,
        agreement,
    })
}

fn with_context<T>(cfg: &ScenarioConfig, result: Result<T>) -> Result<T> {
    result.map_err(|e| Error::Scenario { scenario: cfg.scenario.name().to_string(), source: Box::new(e) })
}

/// Runs one scenario and returns its single result row.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    with_context(cfg, evaluate(cfg, "", None)).map(|row| vec![row])
}

/// `cfg` with `param` set to `value`.
pub fn with_param(cfg: &ScenarioConfig, param: &str, value: f64) -> Result<ScenarioConfig> {
    let mut out = cfg.clone();
    let integer = || -> Result<usize> {
        if value < 1.0 || value.fract() != 0.0 {
            return Err(Error::Config(format!("`{param}` must be a positive integer, got {value}")));
        }
        Ok(value as usize)
    };
    match param {
        "p" if cfg.scenario == ScenarioKind::Depolarizing => out.p = Some(value),
        "p" => match out.channel.as_mut() {
            Some(ch) if ch.joint.is_none() => ch.p = Some(value),
            _ => return Err(Error::Config("`p` sweeps need the depolarizing scenario or a `channel`".into())),
        },
        "mu" => match out.channel.as_mut() {
            Some(ch) if ch.joint.is_none() => ch.mu = Some(MuConfig::Uniform(value)),
            _ => return Err(Error::Config("`mu` sweeps need a `channel` without `joint`".into())),
        },
        "copies" => {
            out.copies = Some(integer()?);
            out.dims = None;
            if let Some(ch) = out.channel.as_mut() {
                ch.parties = Some(integer()?);
            }
        }
        "k" => out.k = Some(integer()?),
        other => {
            return Err(Error::Config(format!("unknown sweep parameter `{other}`, expected one of {SWEEP_PARAMS:?}")))
        }
    }
    out.validate()?;
    Ok(out)
}

/// Evaluates `steps + 1` evenly spaced values of `param` from `from` to
/// `to`, rows in sweep order.
pub fn run_sweep(cfg: &ScenarioConfig, param: &str, from: f64, to: f64, steps: usize) -> Result<Vec<ResultRow>> {
    if steps == 0 {
        return Err(Error::Config("`steps` must be at least 1".into()));
    }
    if !from.is_finite() || !to.is_finite() {
        return Err(Error::Config("sweep bounds must be finite".into()));
    }
    let values: Vec<f64> = (0..=steps).map(|i| from + (to - from) * i as f64 / steps as f64).collect();
    // validate every point before computing any of them
    let configs = values.iter().map(|&v| with_param(cfg, param, v)).collect::<Result<Vec<_>>>()?;
    configs
        .iter()
        .zip(&values)
        .map(|(c, &v)| with_context(c, evaluate(c, param, Some(v))))
        .collect()
}
