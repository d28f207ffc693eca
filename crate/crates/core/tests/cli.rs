use std::path::PathBuf;
use std::process::{Command, Output};

use densecode::cli::{read_csv, ResultRow};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densecode-lab")).args(args).output().expect("binary runs")
}

fn rows(out: &Output) -> Vec<ResultRow> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    read_csv(out.stdout.as_slice()).expect("valid csv")
}

#[test]
fn ghz_config_gives_four_bits() {
    let rows = rows(&lab(&["capacity", "--config", config("ghz_full.json").to_str().unwrap()]));
    assert_eq!(rows.len(), 1);
    assert!((rows[0].capacity_bits - 4.0).abs() < 1e-9);
    assert!(rows[0].agreement);
}

#[test]
fn bell_diagonal_config_matches_shannon_value() {
    let rows = rows(&lab(&["capacity", "--config", config("bell_diagonal_full.json").to_str().unwrap()]));
    let w: [f64; 4] = [0.4, 0.3, 0.2, 0.1];
    let oracle = 2.0 + w.iter().map(|x| x * x.log2()).sum::<f64>();
    assert!((rows[0].capacity_bits - oracle).abs() < 1e-12);
    assert!((rows[0].capacity_bits - 0.153561).abs() < 5e-7);
}

#[test]
fn depolarizing_sweep_is_monotone() {
    let out = lab(&[
        "sweep", "--config", config("depolarizing.json").to_str().unwrap(),
        "--param", "p", "--from", "0", "--to", "1", "--steps", "10",
    ]);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("# densecode-lab v1\n"));
    let rows = rows(&out);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.agreement));
    assert!(rows.windows(2).all(|w| w[1].capacity_bits <= w[0].capacity_bits + 1e-12));
    assert!((rows[0].capacity_bits - 2.0).abs() < 1e-12 && rows[10].capacity_bits.abs() < 1e-9);
}

#[test]
fn remaining_configs_run() {
    for name in ["bell_correlated.json", "custom_mixed.json"] {
        let out = lab(&["capacity", "--config", config(name).to_str().unwrap(), "--json"]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        let rows: Vec<ResultRow> = serde_json::from_slice(&out.stdout).unwrap();
        assert!(rows[0].agreement, "{name}");
    }
    let custom: Vec<ResultRow> =
        serde_json::from_slice(&lab(&["capacity", "--config", config("custom_mixed.json").to_str().unwrap(), "--json"]).stdout)
            .unwrap();
    assert!(custom[0].nonunitary_bits.unwrap() >= custom[0].capacity_bits - 1e-6);
}

#[test]
fn bad_config_reports_position_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"scenario\": \"ghz-full\",\n  \"q\": [0.5, 0.5, 0, 0],\n  \"kk\": 2\n}\n").unwrap();
    let out = lab(&["capacity", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4") && err.contains("kk"), "{err}");
}

#[test]
fn verify_is_deterministic_and_seeded() {
    let a = lab(&["verify", "--suite", "twirl", "--seed", "9"]);
    let b = lab(&["verify", "--suite", "twirl", "--seed", "9"]);
    let c = lab(&["verify", "--suite", "twirl", "--seed", "10"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn max_dim_env_var_caps_dimensions() {
    let out = Command::new(env!("CARGO_BIN_EXE_densecode-lab"))
        .args(["capacity", "--config", config("ghz_full.json").to_str().unwrap()])
        .env("DENSECODE_MAX_DIM", "8")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit 8"));
}
