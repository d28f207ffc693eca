// Local unitaries, global unitaries and general CPTP pre-processing on a
// random mixed state: each class can only help.

use densecode::capacity::{capacity_covariant, capacity_nonunitary, EncodingMode, OptimizerConfig};
use densecode::channels::{correlated_probs, CorrelationSpec, SinglePartyPauliSpec};
use densecode::tensor::{random_density_matrix, SubsystemLayout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let layout = SubsystemLayout::new(vec![2, 2], 2)?;
    let rho = random_density_matrix(layout.total_dim(), &mut rng);
    let single = SinglePartyPauliSpec::from_pauli_weights([0.9, 0.05, 0.03, 0.02])?;
    let channel = correlated_probs(&[single.clone(), single], &CorrelationSpec::uniform(2, 0.6)?)?;
    let cfg = OptimizerConfig { restarts: 4, ..Default::default() };

    let local = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &cfg)?.capacity_bits;
    let global = capacity_covariant(&rho, &channel, &layout, EncodingMode::Global, &cfg)?.capacity_bits;
    let cptp = capacity_nonunitary(&rho, &channel, &layout, EncodingMode::Global, 2, &cfg)?.capacity_bits;
    println!("local {local:.6} <= global {global:.6} <= cptp {cptp:.6} bits");
    if local > global + 1e-6 || global > cptp + 1e-6 {
        return Err("encoding hierarchy violated".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("encoding_hierarchy failed");
}
