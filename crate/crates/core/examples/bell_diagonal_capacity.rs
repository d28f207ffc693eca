// A Bell-diagonal pair under fully correlated noise: the noise drops out and
// the capacity is 2 minus the Shannon entropy of the state weights.

use densecode::capacity::{capacity_covariant, closed_form_bd_fully_correlated, EncodingMode, OptimizerConfig};
use densecode::channels::fully_correlated_probs;
use densecode::states::{bell_diagonal, BellDiagonalSpec};
use densecode::tensor::SubsystemLayout;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let spec = BellDiagonalSpec::new([0.4, 0.3, 0.2, 0.1])?;
    let rho = bell_diagonal(&spec)?;
    let layout = SubsystemLayout::new(vec![2], 2)?;
    let closed = closed_form_bd_fully_correlated(1, &spec);
    println!("closed form: {closed:.6} bits");

    let cfg = OptimizerConfig { restarts: 4, ..Default::default() };
    for q in [[1.0, 0.0, 0.0, 0.0], [0.25; 4], [0.1, 0.6, 0.2, 0.1]] {
        let channel = fully_correlated_probs(2, q)?;
        let c = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &cfg)?.capacity_bits;
        println!("q={q:?}: optimizer {c:.6} bits");
        if (c - closed).abs() > 1e-5 {
            return Err("fully correlated noise changed the capacity".into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("bell_diagonal_capacity failed");
}
