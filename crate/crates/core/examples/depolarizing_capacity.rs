// Depolarizing noise on both halves of a Bell pair: closed form against the
// optimizer, and additivity over copies.

use densecode::capacity::{capacity_covariant, closed_form_depolarizing, EncodingMode, OptimizerConfig};
use densecode::channels::{depolarizing_probs, uncorrelated_probs};
use densecode::states::bell_state;
use densecode::tensor::SubsystemLayout;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let rho = bell_state(2)?;
    let layout = SubsystemLayout::new(vec![2], 2)?;
    let cfg = OptimizerConfig { restarts: 4, ..Default::default() };

    for p in [0.0, 0.25, 0.5, 1.0] {
        let dep = depolarizing_probs(2, p)?;
        let channel = uncorrelated_probs(&[dep.clone(), dep])?;
        let closed = closed_form_depolarizing(&rho, p, 1)?;
        let optimized = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &cfg)?.capacity_bits;
        let two = closed_form_depolarizing(&rho, p, 2)?;
        println!("p={p}: closed {closed:.6}, optimizer {optimized:.6}, two copies {two:.6} bits");
        if (closed - optimized).abs() > 1e-5 || (two - 2.0 * closed).abs() > 1e-9 {
            return Err(format!("depolarizing capacity mismatch at p={p}").into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("depolarizing_capacity failed");
}
