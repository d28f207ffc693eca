// A four-qubit GHZ state with three senders and one receiver: fully
// correlated noise acts like no noise at all.

use densecode::capacity::{capacity_covariant, closed_form_ghz_fully_correlated, EncodingMode, OptimizerConfig};
use densecode::channels::{fully_correlated_probs, Channel};
use densecode::states::ghz_state;
use densecode::tensor::{von_neumann_entropy, SubsystemLayout};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rho = ghz_state(4)?;
    let layout = SubsystemLayout::new(vec![2, 2, 2], 2)?;
    let channel = fully_correlated_probs(4, [0.3, 0.3, 0.2, 0.2])?;

    let untouched = von_neumann_entropy(&channel.apply(&rho, &layout)?);
    println!("output entropy without encoding: {untouched:.3e}");

    let report = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &OptimizerConfig::default())?;
    let closed = closed_form_ghz_fully_correlated(2)?;
    println!("capacity {:.6} bits, closed form {closed}", report.capacity_bits);
    if (report.capacity_bits - closed).abs() > 1e-6 || untouched > 1e-9 {
        return Err("GHZ capacity is not 4 bits".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("ghz_capacity failed");
}
