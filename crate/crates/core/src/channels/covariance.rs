use rand::Rng;

use crate::channels::Channel;
use crate::displacement::LocalEncodingSet;
use crate::error::{Error, Result};
use crate::tensor::{random_density_matrix, SubsystemLayout};

/// `max ‖Λ(ṼρṼ†) − ṼΛ(ρ)Ṽ†‖_max` over `trials` random states and every
/// encoder `Ṽ ⊗ I` of the set.
pub fn verify_covariance(
    channel: &dyn Channel,
    set: &LocalEncodingSet,
    layout: &SubsystemLayout,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    if set.sender_dims() != layout.sender_dims() {
        return Err(Error::Layout(format!(
            "encoding set for senders {:?} does not match layout senders {:?}",
            set.sender_dims(),
            layout.sender_dims()
        )));
    }
    let encoders: Vec<_> = (0..set.len()).map(|i| set.embedded_monomial(i, layout)).collect();
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let rho = random_density_matrix(layout.total_dim(), rng);
        let out = channel.apply_raw(rho.matrix(), layout)?;
        for v in &encoders {
            let lhs = channel.apply_raw(&v.conjugate(rho.matrix()), layout)?;
            let rhs = v.conjugate(&out);
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{
        correlated_probs, depolarizing_probs, CorrelationSpec, CptpMap, PauliChannelSpec, SinglePartyPauliSpec,
    };
    use crate::displacement::local_encoding_set;
    use crate::tensor::{random_probabilities, ComplexMatrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_channel_is_exactly_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let layout = SubsystemLayout::new(vec![2], 2).unwrap();
        let spec = PauliChannelSpec::noiseless(vec![2, 2]).unwrap();
        let set = local_encoding_set(&[2]).unwrap();
        assert_eq!(verify_covariance(&spec, &set, &layout, 3, &mut rng).unwrap(), 0.0);
    }

    #[test]
    fn single_sender_pauli_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let layout = SubsystemLayout::new(vec![2], 2).unwrap();
        let singles: Vec<_> = (0..2)
            .map(|_| SinglePartyPauliSpec::new(2, random_probabilities(4, &mut rng)).unwrap())
            .collect();
        let spec = correlated_probs(&singles, &CorrelationSpec::uniform(2, 0.3).unwrap()).unwrap();
        let set = local_encoding_set(&[2]).unwrap();
        assert!(verify_covariance(&spec, &set, &layout, 5, &mut rng).unwrap() <= 1e-12);
    }

    #[test]
    fn correlated_two_sender_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let layout = SubsystemLayout::new(vec![2, 2], 2).unwrap();
        let singles: Vec<_> = (0..3).map(|_| depolarizing_probs(2, 0.3).unwrap()).collect();
        let spec = correlated_probs(&singles, &CorrelationSpec::uniform(3, 0.7).unwrap()).unwrap();
        let set = local_encoding_set(&[2, 2]).unwrap();
        assert!(verify_covariance(&spec, &set, &layout, 4, &mut rng).unwrap() <= 1e-11);
    }

    #[test]
    fn amplitude_damping_is_not_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let layout = SubsystemLayout::new(vec![2], 2).unwrap();
        let g: f64 = 0.5;
        let k0 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, (1.0 - g).sqrt()]).unwrap();
        let k1 = ComplexMatrix::from_real(2, 2, &[0.0, g.sqrt(), 0.0, 0.0]).unwrap();
        let channel = CptpMap::new(vec![k0, k1]).unwrap().on_sites(vec![0]);
        let set = local_encoding_set(&[2]).unwrap();
        assert!(verify_covariance(&channel, &set, &layout, 2, &mut rng).unwrap() > 1e-3);
    }
}
