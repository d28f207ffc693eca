use densecode::capacity::{
    attaining_ensemble, capacity_covariant, closed_form_bd_fully_correlated, closed_form_bell_correlated,
    closed_form_depolarizing, holevo, holevo_terms, EncodingMode, Encoder, OptimizerConfig,
};
use densecode::channels::{
    correlated_probs, fully_correlated_probs, uncorrelated_probs, verify_covariance, Channel, CorrelationSpec,
    PauliChannelSpec, SinglePartyPauliSpec,
};
use densecode::cli::{read_csv, write_csv, ResultRow};
use densecode::displacement::{local_encoding_set, twirl};
use densecode::states::{bell_copies, bell_state, BellDiagonalSpec};
use densecode::tensor::{
    partial_trace, random_density_matrix, random_ginibre, random_unitary, von_neumann_entropy, ComplexMatrix,
    SubsystemLayout,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn distribution(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("all zero", |raw| {
        let total: f64 = raw.iter().sum();
        (total > 1e-3).then(|| raw.iter().map(|x| x / total).collect())
    })
}

fn weights4() -> impl Strategy<Value = [f64; 4]> {
    distribution(4).prop_map(|v| [v[0], v[1], v[2], v[3]])
}

fn quick() -> OptimizerConfig {
    OptimizerConfig { restarts: 3, ..Default::default() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One qubit sender, one qubit receiver, random state and random two-site
/// Pauli tensor.
fn two_qubit_problem(seed: u64, joint: Vec<f64>) -> (densecode::tensor::DensityMatrix, PauliChannelSpec, SubsystemLayout) {
    let layout = SubsystemLayout::new(vec![2], 2).unwrap();
    let rho = random_density_matrix(4, &mut rng(seed));
    (rho, PauliChannelSpec::from_joint(vec![2, 2], joint).unwrap(), layout)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bipartite_tensor_matches_two_use_formula(q1 in distribution(4), q2 in distribution(4), mu in 0.0f64..=1.0) {
        let a = SinglePartyPauliSpec::new(2, q1.clone()).unwrap();
        let b = SinglePartyPauliSpec::new(2, q2.clone()).unwrap();
        let spec = correlated_probs(&[a, b], &CorrelationSpec::uniform(2, mu).unwrap()).unwrap();
        for (i, &a) in q1.iter().enumerate() {
            for (j, &b) in q2.iter().enumerate() {
                let delta = if i == j { a } else { 0.0 };
                let oracle = (1.0 - mu) * a * b + mu * delta;
                prop_assert!((spec.joint()[i * 4 + j] - oracle).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn correlated_tensor_is_a_distribution(
        singles in prop::collection::vec(distribution(4), 3),
        mu in prop::collection::vec(0.0f64..=1.0, 3),
    ) {
        let singles: Vec<_> = singles.into_iter().map(|q| SinglePartyPauliSpec::new(2, q).unwrap()).collect();
        let spec = correlated_probs(&singles, &CorrelationSpec::from_pairs(3, mu).unwrap()).unwrap();
        let total: f64 = spec.joint().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
        prop_assert!(spec.joint().iter().all(|&p| p >= 0.0));
    }

    #[test]
    fn correlation_extremes(w in weights4(), other in distribution(4), parties in 2usize..=4) {
        let first = SinglePartyPauliSpec::from_pauli_weights(w).unwrap();
        let mut singles = vec![first];
        singles.extend((1..parties).map(|_| SinglePartyPauliSpec::new(2, other.clone()).unwrap()));

        let full = correlated_probs(&singles, &CorrelationSpec::uniform(parties, 1.0).unwrap()).unwrap();
        let oracle = fully_correlated_probs(parties, w).unwrap();
        let dev = full.joint().iter().zip(oracle.joint()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        prop_assert!(dev <= 1e-15);

        // μ = 0 is the outer product, computed here by hand
        let none = correlated_probs(&singles, &CorrelationSpec::uniform(parties, 0.0).unwrap()).unwrap();
        for (idx, &p) in none.joint().iter().enumerate() {
            let mut rest = idx;
            let mut prod = 1.0;
            for s in singles.iter().rev() {
                prod *= s.probabilities()[rest % 4];
                rest /= 4;
            }
            prop_assert!((p - prod).abs() <= 1e-15);
        }
    }

    #[test]
    fn twirl_is_completely_depolarizing(d in 2usize..=4, seed in any::<u64>()) {
        let set = local_encoding_set(&[d]).unwrap();
        let x = random_ginibre(d, d, &mut rng(seed));
        let expected = ComplexMatrix::identity(d).scale(x.trace() / d as f64);
        prop_assert!(twirl(&set, &x).unwrap().max_abs_diff(&expected) <= 1e-10);
    }

    #[test]
    fn entropy_is_bounded(dim in 1usize..=8, seed in any::<u64>()) {
        let s = von_neumann_entropy(&random_density_matrix(dim, &mut rng(seed)));
        prop_assert!(s >= 0.0 && s <= (dim as f64).log2() + 1e-12);
    }

    #[test]
    fn random_pauli_channels_are_covariant(joint in distribution(64), seed in any::<u64>()) {
        let spec = PauliChannelSpec::from_joint(vec![2, 2, 2], joint).unwrap();
        let layout = SubsystemLayout::with_receiver_factors(vec![2, 2], vec![2]).unwrap();
        let set = local_encoding_set(&[2, 2]).unwrap();
        prop_assert!(verify_covariance(&spec, &set, &layout, 2, &mut rng(seed)).unwrap() <= 1e-10);
    }

    #[test]
    fn depolarizing_closed_form_is_additive(p in 0.0f64..=1.0, d in 2usize..=3, k in 1usize..=4) {
        let rho = bell_state(d).unwrap();
        let one = closed_form_depolarizing(&rho, p, 1).unwrap();
        prop_assert!((closed_form_depolarizing(&rho, p, k).unwrap() - k as f64 * one).abs() <= 1e-9);
        prop_assert!(one >= -1e-12 && one <= 2.0 * (d as f64).log2() + 1e-12);
    }

    #[test]
    fn bell_diagonal_closed_form_is_additive(w in weights4(), k in 1usize..=4) {
        let spec = BellDiagonalSpec::new(w).unwrap();
        let one = closed_form_bd_fully_correlated(1, &spec);
        prop_assert!((closed_form_bd_fully_correlated(k, &spec) - k as f64 * one).abs() <= 1e-9);
    }

    #[test]
    fn csv_round_trip_is_exact(
        values in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 8),
        flags in prop::collection::vec(any::<bool>(), 2),
    ) {
        let row = ResultRow {
            scenario: "custom".into(),
            param: "mu".into(),
            value: flags[0].then_some(values[0]),
            capacity_bits: values[1],
            closed_form_bits: flags[1].then_some(values[2]),
            optimizer_bits: values[3],
            receiver_entropy_bits: values[4],
            min_output_entropy_bits: values[5],
            holevo_bits: values[6],
            nonunitary_bits: Some(values[7]),
            agreement: flags[0],
        };
        let mut buf = Vec::new();
        write_csv(std::slice::from_ref(&row), &mut buf).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), 1);
        // bitwise, so that -0.0 and 0.0 are told apart
        let bits = |r: &ResultRow| {
            [r.value, Some(r.capacity_bits), r.closed_form_bits, Some(r.optimizer_bits),
             Some(r.receiver_entropy_bits), Some(r.min_output_entropy_bits), Some(r.holevo_bits), r.nonunitary_bits]
                .map(|x| x.map(f64::to_bits))
        };
        prop_assert_eq!(bits(&back[0]), bits(&row));
        prop_assert_eq!(&back[0], &row);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn capacity_bounds_every_ensemble_and_is_attained(joint in distribution(16), seed in any::<u64>()) {
        let (rho, channel, layout) = two_qubit_problem(seed, joint);
        let report = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &quick()).unwrap();
        prop_assert!((report.holevo_bits - report.capacity_bits).abs() <= 1e-6);
        prop_assert!(report.bookkeeping_residual() <= 1e-12);
        prop_assert!(report.capacity_bits <= 2.0 + 1e-9);

        let set = local_encoding_set(&[2]).unwrap();
        let mut r = rng(seed ^ 0x5eed);
        for _ in 0..3 {
            let u = Encoder::Unitary(random_unitary(2, &mut r));
            let chi = holevo(&attaining_ensemble(&u, &set).unwrap(), &channel, &rho, &layout).unwrap();
            prop_assert!(chi <= report.capacity_bits + 1e-6, "chi {} > C {}", chi, report.capacity_bits);
        }
    }

    #[test]
    fn ensemble_average_is_twirled_on_the_senders(joint in distribution(16), seed in any::<u64>()) {
        let (rho, channel, layout) = two_qubit_problem(seed, joint);
        let set = local_encoding_set(&[2]).unwrap();
        let u = Encoder::Unitary(random_unitary(2, &mut rng(seed.wrapping_add(1))));
        let terms = holevo_terms(&attaining_ensemble(&u, &set).unwrap(), &channel, &rho, &layout).unwrap();
        let receiver = partial_trace(&channel.apply(&rho, &layout).unwrap(), &layout, &layout.receiver_sites()).unwrap();
        let oracle = 1.0 + von_neumann_entropy(&receiver);
        prop_assert!((terms.average_output_entropy - oracle).abs() <= 1e-9);
    }

    #[test]
    fn same_seed_same_report(joint in distribution(16), seed in any::<u64>()) {
        let (rho, channel, layout) = two_qubit_problem(seed, joint);
        let cfg = OptimizerConfig { seed, ..quick() };
        let a = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &cfg).unwrap();
        let b = capacity_covariant(&rho, &channel, &layout, EncodingMode::Local, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn bell_closed_form_equals_identity_holevo(
        singles in prop::collection::vec(distribution(4), 2),
        mu in 0.0f64..=1.0,
    ) {
        let (rho, layout) = bell_copies(&[2, 2]).unwrap();
        let singles: Vec<_> = singles.into_iter().map(|q| SinglePartyPauliSpec::new(2, q).unwrap()).collect();
        let channel = correlated_probs(&singles, &CorrelationSpec::uniform(2, mu).unwrap()).unwrap();
        let set = local_encoding_set(&[2, 2]).unwrap();
        let chi = holevo(&attaining_ensemble(&Encoder::identity(4), &set).unwrap(), &channel, &rho, &layout).unwrap();
        prop_assert!((closed_form_bell_correlated(&channel, &[2, 2]).unwrap() - chi).abs() <= 1e-8);
    }

    #[test]
    fn uncorrelated_noise_is_the_product_channel(q1 in distribution(4), q2 in distribution(4), seed in any::<u64>()) {
        let a = SinglePartyPauliSpec::new(2, q1).unwrap();
        let b = SinglePartyPauliSpec::new(2, q2).unwrap();
        let layout = SubsystemLayout::new(vec![2], 2).unwrap();
        let rho = random_density_matrix(4, &mut rng(seed));
        let joint = uncorrelated_probs(&[a.clone(), b.clone()]).unwrap().apply(&rho, &layout).unwrap();
        let noiseless = |n: usize| SinglePartyPauliSpec::noiseless(n).unwrap();
        let first = uncorrelated_probs(&[a, noiseless(2)]).unwrap();
        let second = uncorrelated_probs(&[noiseless(2), b]).unwrap();
        let sequential = second.apply(&first.apply(&rho, &layout).unwrap(), &layout).unwrap();
        prop_assert!(joint.matrix().max_abs_diff(sequential.matrix()) <= 1e-14);
    }
}
