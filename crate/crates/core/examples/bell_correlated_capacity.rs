// Two Bell pairs sent through correlated Pauli noise on the senders: the
// closed form against the optimizer and the attaining ensemble.

use densecode::capacity::{
    attaining_ensemble, capacity_covariant, closed_form_bell_correlated, holevo, EncodingMode, Encoder,
    OptimizerConfig,
};
use densecode::channels::{correlated_probs, CorrelationSpec, SinglePartyPauliSpec};
use densecode::displacement::local_encoding_set;
use densecode::states::bell_copies;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dims = [2, 2];
    let (rho, layout) = bell_copies(&dims)?;
    let set = local_encoding_set(&dims)?;
    let single = SinglePartyPauliSpec::from_pauli_weights([0.8, 0.1, 0.05, 0.05])?;
    let cfg = OptimizerConfig { restarts: 4, ..Default::default() };

    for mu in [0.0, 0.5, 1.0] {
        let channel = correlated_probs(&[single.clone(), single.clone()], &CorrelationSpec::uniform(2, mu)?)?;
        let closed = closed_form_bell_correlated(&channel, &dims)?;
        let chi = holevo(&attaining_ensemble(&Encoder::identity(4), &set)?, &channel, &rho, &layout)?;
        let report = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &cfg)?;
        println!(
            "mu={mu}: closed form {closed:.6}, Holevo {chi:.6}, optimizer {:.6} bits",
            report.capacity_bits
        );
        if (closed - chi).abs() > 1e-8 || (closed - report.capacity_bits).abs() > 1e-5 {
            return Err(format!("capacities disagree at mu={mu}").into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("bell_correlated_capacity failed");
}
