// Building correlated Pauli channels and certifying their covariance.

use densecode::channels::{
    correlated_probs, fully_correlated_probs, uncorrelated_probs, verify_covariance, CorrelationSpec,
    SinglePartyPauliSpec,
};
use densecode::displacement::local_encoding_set;
use densecode::tensor::SubsystemLayout;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = SinglePartyPauliSpec::from_pauli_weights([0.7, 0.1, 0.1, 0.1])?;
    let b = SinglePartyPauliSpec::from_pauli_weights([0.85, 0.05, 0.05, 0.05])?;

    for mu in [0.0, 0.5, 1.0] {
        let spec = correlated_probs(&[a.clone(), b.clone()], &CorrelationSpec::uniform(2, mu)?)?;
        let same_flip = spec.probability(&[(1, 0), (1, 0)]);
        println!("mu={mu}: P(X on both) = {same_flip:.4}, total = {:.12}", spec.joint().iter().sum::<f64>());
    }

    // the product tensor is the mu = 0 end of the interpolation
    let product = uncorrelated_probs(&[a.clone(), b.clone()])?;
    let mu0 = correlated_probs(&[a, b], &CorrelationSpec::uniform(2, 0.0)?)?;
    if product.joint() != mu0.joint() {
        return Err("mu = 0 differs from the product tensor".into());
    }

    let layout = SubsystemLayout::new(vec![2], 2)?;
    let set = local_encoding_set(&[2])?;
    let full = fully_correlated_probs(2, [0.4, 0.3, 0.2, 0.1])?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let dev = verify_covariance(&full, &set, &layout, 20, &mut rng)?;
    println!("fully correlated channel: covariance deviation {dev:.3e}");
    if dev > 1e-10 {
        return Err("Pauli channel is not covariant".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().expect("correlated_pauli_noise failed");
}
