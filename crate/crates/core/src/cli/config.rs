use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::capacity::{EncodingMode, OptimizerConfig};
use crate::channels::{
    correlated_probs, depolarizing_probs, CorrelationSpec, PauliChannelSpec, SinglePartyPauliSpec,
};
use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, DensityMatrix};

pub const DEFAULT_SEED: u64 = 42;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

/// Named scenario families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    /// `k` Bell copies, correlated Pauli noise on the senders.
    BellCorrelated,
    /// `k` two-qubit Bell-diagonal copies, fully correlated noise on all qubits.
    BellDiagonalFull,
    /// `2k`-qubit GHZ state, fully correlated noise on all qubits.
    GhzFull,
    /// `k` Bell copies, independent depolarizing noise on every site.
    Depolarizing,
    /// Explicit state, layout and channel; no closed form.
    Custom,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::BellCorrelated => "bell-correlated",
            ScenarioKind::BellDiagonalFull => "bell-diagonal-full",
            ScenarioKind::GhzFull => "ghz-full",
            ScenarioKind::Depolarizing => "depolarizing",
            ScenarioKind::Custom => "custom",
        }
    }
}

/// Correlation degrees: one value for every pair, or a symmetric table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuConfig {
    Uniform(f64),
    Table(Vec<Vec<f64>>),
}

/// A Pauli channel, given either by single-party tables plus correlation
/// degrees or by an explicit joint tensor.
///
/// Single-party tables are indexed `m * d + n`. One table is reused for
/// every party. `p` is shorthand for depolarizing tables.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub parties: Option<usize>,
    pub d: Option<usize>,
    pub singles: Option<Vec<Vec<f64>>>,
    pub p: Option<f64>,
    pub mu: Option<MuConfig>,
    pub joint: Option<Vec<f64>>,
    pub shape: Option<Vec<usize>>,
    /// Layout sites of the parties, in party order.
    pub acts_on: Option<Vec<usize>>,
}

impl ChannelConfig {
    pub fn build(&self) -> Result<PauliChannelSpec> {
        let spec = match (&self.joint, &self.shape) {
            (Some(joint), Some(shape)) => {
                if self.singles.is_some() || self.p.is_some() || self.mu.is_some() {
                    return Err(Error::Config("channel: `joint` excludes `singles`, `p` and `mu`".into()));
                }
                PauliChannelSpec::from_joint(shape.clone(), joint.clone())?
            }
            (Some(_), None) | (None, Some(_)) => {
                return Err(Error::Config("channel: `joint` and `shape` must be given together".into()))
            }
            (None, None) => self.build_correlated()?,
        };
        match &self.acts_on {
            Some(sites) => spec.acting_on(sites.clone()),
            None => Ok(spec),
        }
    }

    fn build_correlated(&self) -> Result<PauliChannelSpec> {
        let parties = self
            .parties
            .ok_or_else(|| Error::Config("channel: `parties` is required without `joint`".into()))?;
        let d = self.d.unwrap_or(2);
        let single = |q: &Vec<f64>| SinglePartyPauliSpec::new(d, q.clone());
        let singles: Vec<SinglePartyPauliSpec> = match (&self.singles, self.p) {
            (Some(_), Some(_)) => return Err(Error::Config("channel: give `singles` or `p`, not both".into())),
            (Some(tables), None) if tables.len() == 1 => vec![single(&tables[0])?; parties],
            (Some(tables), None) if tables.len() == parties => tables.iter().map(single).collect::<Result<_>>()?,
            (Some(tables), None) => {
                return Err(Error::Config(format!("channel: {} single tables for {parties} parties", tables.len())))
            }
            (None, Some(p)) => vec![depolarizing_probs(d, p)?; parties],
            (None, None) => vec![SinglePartyPauliSpec::noiseless(d)?; parties],
        };
        let corr = match &self.mu {
            None => CorrelationSpec::uniform(parties, 0.0)?,
            Some(MuConfig::Uniform(mu)) => CorrelationSpec::uniform(parties, *mu)?,
            Some(MuConfig::Table(table)) => CorrelationSpec::from_table(table)?,
        };
        correlated_probs(&singles, &corr)
    }
}

/// Explicit resource state for the `custom` scenario.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub real: Vec<Vec<f64>>,
    pub imag: Option<Vec<Vec<f64>>>,
}

impl MatrixConfig {
    pub fn build(&self) -> Result<DensityMatrix> {
        let n = self.real.len();
        if self.real.iter().any(|row| row.len() != n) {
            return Err(Error::Config("state: `real` must be a square table".into()));
        }
        if let Some(imag) = &self.imag {
            if imag.len() != n || imag.iter().any(|row| row.len() != n) {
                return Err(Error::Config("state: `imag` must match the shape of `real`".into()));
            }
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| {
            let im = self.imag.as_ref().map_or(0.0, |t| t[i][j]);
            num_complex::Complex64::new(self.real[i][j], im)
        });
        DensityMatrix::new(m)
    }
}

/// One scenario run, read from a JSON document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    /// Seeds every random draw of the run; overrides `optimizer.seed`.
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub mode: EncodingMode,
    pub optimizer: Option<OptimizerConfig>,
    /// CSV destination used when no `--out` flag is given.
    pub output: Option<PathBuf>,
    /// Number of copies `k` (default 1).
    pub copies: Option<usize>,
    /// Local dimension shared by all copies (default 2).
    pub d: Option<usize>,
    /// Per-copy dimensions, overriding `d` and `copies`.
    pub dims: Option<Vec<usize>>,
    /// Bell-diagonal weights over `σ_0..σ_3`.
    pub weights: Option<[f64; 4]>,
    /// Fully correlated channel weights over `σ_0..σ_3`.
    pub q: Option<[f64; 4]>,
    /// Depolarizing strength.
    pub p: Option<f64>,
    /// GHZ half-party count: the state has `2k` qubits.
    pub k: Option<usize>,
    pub channel: Option<ChannelConfig>,
    pub state: Option<MatrixConfig>,
    pub senders: Option<Vec<usize>>,
    pub receivers: Option<Vec<usize>>,
    /// Also search CPTP pre-processings with this environment dimension.
    pub env_dim: Option<usize>,
}

impl ScenarioConfig {
    /// Optimizer settings with the scenario seed applied.
    pub fn optimizer_config(&self) -> OptimizerConfig {
        OptimizerConfig { seed: self.seed, ..self.optimizer.clone().unwrap_or_default() }
    }

    pub fn copies(&self) -> usize {
        self.copies.unwrap_or(1)
    }

    fn require<T: Copy>(&self, value: Option<T>, field: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config(format!("scenario {} requires `{field}`", self.scenario.name())))
    }

    /// Checks the fields the chosen scenario needs, before any computation.
    pub fn validate(&self) -> Result<()> {
        self.optimizer_config().validate()?;
        if self.copies == Some(0) {
            return Err(Error::Config("`copies` must be at least 1".into()));
        }
        match self.scenario {
            ScenarioKind::BellCorrelated => {
                if self.channel.is_none() {
                    return Err(Error::Config("scenario bell-correlated requires `channel`".into()));
                }
            }
            ScenarioKind::BellDiagonalFull => {
                self.require(self.weights, "weights")?;
                self.require(self.q, "q")?;
            }
            ScenarioKind::GhzFull => {
                if self.require(self.k, "k")? == 0 {
                    return Err(Error::Config("`k` must be at least 1".into()));
                }
                self.require(self.q, "q")?;
            }
            ScenarioKind::Depolarizing => {
                let p = self.require(self.p, "p")?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::Config(format!("`p` = {p} is outside [0, 1]")));
                }
            }
            ScenarioKind::Custom => {
                if self.state.is_none() || self.senders.is_none() || self.receivers.is_none() || self.channel.is_none() {
                    return Err(Error::Config(
                        "scenario custom requires `state`, `senders`, `receivers` and `channel`".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parses a scenario document, reporting the line, column and field path of
/// the first problem.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let mut de = serde_json::Deserializer::from_str(text);
    let cfg: ScenarioConfig = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Config(format!("line {}, column {}, field `{path}`: {inner}", inner.line(), inner.column()))
    })?;
    de.end().map_err(|e| Error::Config(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text).map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_ghz_config() {
        let cfg = parse_config(r#"{"scenario": "ghz-full", "k": 2, "q": [0.4, 0.3, 0.2, 0.1]}"#).unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::GhzFull);
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.mode, EncodingMode::Local);
        assert_eq!(cfg.optimizer_config().restarts, 16);
    }

    #[test]
    fn parse_errors_carry_position_and_field() {
        let text = "{\n  \"scenario\": \"ghz-full\",\n  \"k\": \"two\"\n}";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("field `k`"), "{err}");

        let text = "{\n  \"scenario\": \"depolarizing\",\n  \"p\": 0.1,\n  \"optimizer\": {\"restart\": 3}\n}";
        let err = parse_config(text).unwrap_err().to_string();
        assert!(err.contains("line 4") && err.contains("optimizer"), "{err}");
    }

    #[test]
    fn scenario_preconditions_are_checked() {
        let err = parse_config(r#"{"scenario": "depolarizing"}"#).unwrap_err().to_string();
        assert!(err.contains("`p`"), "{err}");
        assert!(parse_config(r#"{"scenario": "depolarizing", "p": 1.5}"#).is_err());
        assert!(parse_config(r#"{"scenario": "ghz-full", "k": 0, "q": [1, 0, 0, 0]}"#).is_err());
        assert!(parse_config(r#"{"scenario": "custom", "channel": {"parties": 1}}"#).is_err());
        assert!(parse_config(r#"{"scenario": "bell-correlated", "optimizer": {"restarts": 0}, "channel": {"parties": 1}}"#)
            .is_err());
    }

    #[test]
    fn channel_forms() {
        let uniform: ChannelConfig =
            serde_json::from_str(r#"{"parties": 2, "singles": [[0.7, 0.1, 0.1, 0.1]], "mu": 1.0}"#).unwrap();
        let spec = uniform.build().unwrap();
        assert_eq!(spec.num_parties(), 2);
        assert!((spec.probability(&[(0, 1), (0, 1)]) - 0.1).abs() < 1e-15);
        assert_eq!(spec.probability(&[(0, 1), (1, 0)]), 0.0);

        let joint: ChannelConfig = serde_json::from_str(r#"{"joint": [0.5, 0.5, 0, 0], "shape": [2]}"#).unwrap();
        assert_eq!(joint.build().unwrap().joint(), &[0.5, 0.5, 0.0, 0.0]);

        let dep: ChannelConfig = serde_json::from_str(r#"{"parties": 1, "d": 3, "p": 0.9, "acts_on": [1]}"#).unwrap();
        let spec = dep.build().unwrap();
        assert_eq!(spec.acts_on(), &[1]);
        assert!((spec.probability(&[(0, 0)]) - (0.1 + 0.1)).abs() < 1e-15);

        let half: ChannelConfig = serde_json::from_str(r#"{"joint": [1, 0, 0, 0]}"#).unwrap();
        assert!(half.build().is_err());
        let both: ChannelConfig = serde_json::from_str(r#"{"parties": 1, "p": 0.1, "singles": [[1, 0, 0, 0]]}"#).unwrap();
        assert!(both.build().is_err());
    }

    #[test]
    fn explicit_state() {
        let m: MatrixConfig = serde_json::from_str(r#"{"real": [[0.5, 0], [0, 0.5]]}"#).unwrap();
        assert_eq!(m.build().unwrap(), DensityMatrix::maximally_mixed(2));
        let bad: MatrixConfig = serde_json::from_str(r#"{"real": [[1, 0]]}"#).unwrap();
        assert!(bad.build().is_err());
    }
}
