// Driving the scenario runner from a JSON config and writing CSV.

use densecode::cli::{parse_config, read_csv, run_sweep, write_csv};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = parse_config(
        r#"{
            "scenario": "depolarizing",
            "p": 0.0,
            "d": 2,
            "optimizer": {"restarts": 2}
        }"#,
    )?;
    let rows = run_sweep(&cfg, "p", 0.0, 1.0, 10)?;

    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    print!("{}", String::from_utf8(csv.clone())?);

    if read_csv(csv.as_slice())? != rows {
        return Err("CSV round trip changed the rows".into());
    }
    if rows.windows(2).any(|w| w[1].capacity_bits > w[0].capacity_bits + 1e-12) {
        return Err("capacity increased with noise".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("scenario_sweep failed");
}
