use crate::channels::{depolarizing_probs, uncorrelated_probs, Channel, PauliChannelSpec};
use crate::error::{Error, Result};
use crate::states::BellDiagonalSpec;
use crate::tensor::{entropy_of_spectrum, partial_trace, shannon_entropy, von_neumann_entropy, DensityMatrix, SubsystemLayout};

/// `Σ_j log2 d_j^2 − H(q)` for Bell copies `|Φ00>^{a_j b_j}` whose senders
/// `0..k` pass through a Pauli channel with joint tensor `q`. `dims` lists
/// the sender dimensions `d_j`.
pub fn closed_form_bell_correlated(spec: &PauliChannelSpec, dims: &[usize]) -> Result<f64> {
    for (&site, &d) in spec.acts_on().iter().zip(spec.party_dims()) {
        match dims.get(site) {
            None => {
                return Err(Error::Parameter(format!(
                    "channel acts on site {site}, outside the {} senders",
                    dims.len()
                )))
            }
            Some(&dj) if dj != d => {
                return Err(Error::Parameter(format!("channel party of dimension {d} on sender {site} of dimension {dj}")))
            }
            Some(_) => {}
        }
    }
    let dense: f64 = dims.iter().map(|&d| 2.0 * (d as f64).log2()).sum();
    Ok(dense - shannon_entropy(spec.joint())?)
}

/// `k (2 − S(ρ_Bd))` for `k` copies of a two-qubit Bell-diagonal state under
/// the fully correlated Pauli channel. The Bell basis is orthonormal, so
/// `S(ρ_Bd)` is the Shannon entropy of the weights.
pub fn closed_form_bd_fully_correlated(copies: usize, spec: &BellDiagonalSpec) -> f64 {
    copies as f64 * (2.0 - entropy_of_spectrum(&spec.weights()))
}

/// `2k` for the `2k`-party GHZ state under the fully correlated channel.
pub fn closed_form_ghz_fully_correlated(k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Parameter("GHZ closed form needs k >= 1".into()));
    }
    Ok(2.0 * k as f64)
}

/// `k (log2 d + S(Λ_b(ρ_b)) − S(Λ_ab(ρ_ab)))` with independent depolarizing
/// noise of strength `p` on both sites of a `d x d` state.
pub fn closed_form_depolarizing(rho_ab: &DensityMatrix, p: f64, copies: usize) -> Result<f64> {
    let d = square_root_dim(rho_ab.dim())?;
    let layout = SubsystemLayout::new(vec![d], d)?;
    let dep = depolarizing_probs(d, p)?;
    let channel = uncorrelated_probs(&[dep.clone(), dep])?;
    let out = channel.apply(rho_ab, &layout)?;
    let receiver = partial_trace(&out, &layout, &[1])?;
    let single = (d as f64).log2() + von_neumann_entropy(&receiver) - von_neumann_entropy(&out);
    Ok(copies as f64 * single)
}

/// Local dimension of a two-site state with equal factors.
pub(crate) fn square_root_dim(total: usize) -> Result<usize> {
    let d = (total as f64).sqrt().round() as usize;
    if d < 2 || d * d != total {
        return Err(Error::Parameter(format!("dimension {total} is not d x d with d >= 2")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{correlated_probs, fully_correlated_probs, CorrelationSpec, SinglePartyPauliSpec};
    use crate::states::bell_state;

    #[test]
    fn noiseless_bell_gives_two_bits() {
        let spec = PauliChannelSpec::noiseless(vec![2]).unwrap();
        assert!((closed_form_bell_correlated(&spec, &[2]).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn uncorrelated_copies_are_additive() {
        let single = SinglePartyPauliSpec::from_pauli_weights([0.7, 0.1, 0.15, 0.05]).unwrap();
        let h: f64 = single.probabilities().iter().map(|&q| -q * q.log2()).sum();
        let spec = correlated_probs(&[single.clone(), single.clone(), single], &CorrelationSpec::uniform(3, 0.0).unwrap())
            .unwrap();
        let c = closed_form_bell_correlated(&spec, &[2, 2, 2]).unwrap();
        assert!((c - 3.0 * (2.0 - h)).abs() < 1e-12);
    }

    #[test]
    fn fully_correlated_uniform_two_copies() {
        // four equiprobable joint labels, H = 2: 2 log2 4 - 2
        let spec = fully_correlated_probs(2, [0.25; 4]).unwrap();
        assert!((closed_form_bell_correlated(&spec, &[2, 2]).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn receiver_noise_is_rejected() {
        let spec = PauliChannelSpec::noiseless(vec![2]).unwrap().acting_on(vec![1]).unwrap();
        assert!(matches!(closed_form_bell_correlated(&spec, &[2]), Err(Error::Parameter(_))));
    }

    #[test]
    fn bell_diagonal_examples() {
        let pure = BellDiagonalSpec::new([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(closed_form_bd_fully_correlated(3, &pure), 6.0);
        let mixed = BellDiagonalSpec::new([0.25; 4]).unwrap();
        assert!(closed_form_bd_fully_correlated(1, &mixed).abs() < 1e-15);
        let spec = BellDiagonalSpec::new([0.4, 0.3, 0.2, 0.1]).unwrap();
        assert!((closed_form_bd_fully_correlated(1, &spec) - 0.15356065532898455).abs() < 1e-12);
    }

    #[test]
    fn ghz_examples() {
        assert_eq!(closed_form_ghz_fully_correlated(1).unwrap(), 2.0);
        assert_eq!(closed_form_ghz_fully_correlated(2).unwrap(), 4.0);
        assert!(closed_form_ghz_fully_correlated(0).is_err());
    }

    #[test]
    fn depolarizing_examples() {
        let bell = bell_state(2).unwrap();
        assert!((closed_form_depolarizing(&bell, 0.0, 3).unwrap() - 6.0).abs() < 1e-12);
        assert!(closed_form_depolarizing(&bell, 1.0, 2).unwrap().abs() < 1e-12);
        let bad = DensityMatrix::maximally_mixed(8);
        assert!(matches!(closed_form_depolarizing(&bad, 0.5, 1), Err(Error::Parameter(_))));
    }
}
