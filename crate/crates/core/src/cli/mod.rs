//! Command-line front end: scenario runner, parameter sweeps and the
//! verification suites.

mod config;
mod output;
mod scenario;
mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

pub use config::{
    load_config, parse_config, ChannelConfig, MatrixConfig, MuConfig, ScenarioConfig, ScenarioKind, DEFAULT_SEED,
};
pub use output::{read_csv, write_csv, write_json, ResultRow, CSV_COLUMNS, CSV_HEADER};
pub use scenario::{run_scenario, run_sweep, with_param, AGREEMENT_TOL, SWEEP_PARAMS};
pub use verify::{run_verify, CheckResult, Suite, VerifyReport};

use crate::error::Result;

/// Exit status when every check or agreement flag passed.
pub const EXIT_OK: u8 = 0;
/// Exit status when a check or agreement flag failed.
pub const EXIT_FAILED: u8 = 1;
/// Exit status for usage, config and computation errors.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "densecode-lab", version, about = "Dense-coding capacity of noisy covariant channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one scenario.
    Capacity {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        sink: Sink,
    },
    /// Evaluate a scenario over evenly spaced values of one parameter.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// One of p, mu, copies, k.
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        /// Number of intervals; the sweep has `steps + 1` points.
        #[arg(long)]
        steps: usize,
        #[command(flatten)]
        sink: Sink,
    },
    /// Run numerical identity checks and report deviations.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Debug, clap::Args)]
pub struct Sink {
    /// Write CSV here, overriding the config's `output`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print rows as JSON on stdout.
    #[arg(long)]
    json: bool,
    /// Override the config's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn load(path: &Path, sink: &Sink) -> Result<ScenarioConfig> {
    let mut cfg = load_config(path)?;
    if let Some(seed) = sink.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn emit(rows: &[ResultRow], cfg: &ScenarioConfig, sink: &Sink, out: &mut dyn Write) -> Result<u8> {
    let file = sink.out.as_ref().or(cfg.output.as_ref());
    if let Some(path) = file {
        write_csv(rows, std::io::BufWriter::new(std::fs::File::create(path)?))?;
    }
    if sink.json {
        write_json(rows, &mut *out)?;
    } else if file.is_none() {
        write_csv(rows, &mut *out)?;
    }
    Ok(if rows.iter().all(|r| r.agreement) { EXIT_OK } else { EXIT_FAILED })
}

fn execute(command: Command, out: &mut dyn Write) -> Result<u8> {
    match command {
        Command::Capacity { config, sink } => {
            let cfg = load(&config, &sink)?;
            let rows = run_scenario(&cfg)?;
            emit(&rows, &cfg, &sink, out)
        }
        Command::Sweep { config, param, from, to, steps, sink } => {
            let cfg = load(&config, &sink)?;
            let rows = run_sweep(&cfg, &param, from, to, steps)?;
            emit(&rows, &cfg, &sink, out)
        }
        Command::Verify { suite, seed } => {
            let report = run_verify(suite, seed)?;
            write!(out, "{report}")?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_cli(std::iter::once("densecode-lab").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(&[]).0, EXIT_ERROR);
        assert_eq!(run(&["verify", "--suite", "nope"]).0, EXIT_ERROR);
        let (code, _, err) = run(&["capacity", "--config", "/nonexistent/cfg.json"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.starts_with("error:"), "{err}");
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("capacity") && out.contains("sweep") && out.contains("verify"));
    }

    #[test]
    fn verify_lemma2() {
        let (code, out, _) = run(&["verify", "--suite", "lemma2", "--seed", "5"]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(out.starts_with("verify seed=5\n"));
        assert!(out.ends_with("3 checks, 0 failed\n"));
    }

    #[test]
    fn capacity_writes_csv_and_json() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("ghz.json");
        let csv_path = dir.path().join("ghz.csv");
        std::fs::write(&cfg, r#"{"scenario": "ghz-full", "k": 1, "q": [0.4, 0.3, 0.2, 0.1], "optimizer": {"restarts": 2}}"#)
            .unwrap();
        let cfg = cfg.to_str().unwrap();
        let (code, out, _) = run(&["capacity", "--config", cfg, "--out", csv_path.to_str().unwrap(), "--json"]);
        assert_eq!(code, EXIT_OK);
        let json: Vec<ResultRow> = serde_json::from_str(&out).unwrap();
        let csv = read_csv(std::fs::File::open(&csv_path).unwrap()).unwrap();
        assert_eq!(json, csv);
        assert_eq!(csv[0].capacity_bits, 2.0);

        let (code, out, _) = run(&["capacity", "--config", cfg]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(read_csv(out.as_bytes()).unwrap(), csv);
    }
}
