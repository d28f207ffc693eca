use std::sync::{Arc, OnceLock};

use crate::channels::Channel;
use crate::displacement::Monomial;
use crate::error::{Error, Result};
use crate::states::PAULI_LABELS;
use crate::tensor::{ComplexMatrix, SubsystemLayout};

/// Cap on the number of entries of a dense joint probability tensor.
pub const MAX_JOINT_ENTRIES: usize = 16_000_000;

/// Partially correlated pairs beyond this make the subset expansion too large.
const MAX_FREE_PAIRS: usize = 20;

/// Single-party Pauli probabilities `q_mn`, stored at index `m * d + n`.
#[derive(Clone, Debug, PartialEq)]
pub struct SinglePartyPauliSpec {
    d: usize,
    q: Vec<f64>,
}

impl SinglePartyPauliSpec {
    pub fn new(d: usize, q: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::Parameter(format!("dimension {d} is below 2")));
        }
        if q.len() != d * d {
            return Err(Error::Probability(format!("expected {} probabilities, got {}", d * d, q.len())));
        }
        check_distribution(&q, 1e-12)?;
        Ok(Self { d, q })
    }

    pub fn noiseless(d: usize) -> Result<Self> {
        let mut q = vec![0.0; d * d];
        q[0] = 1.0;
        Self::new(d, q)
    }

    /// Qubit channel from weights of `σ_0, σ_1, σ_2, σ_3`.
    pub fn from_pauli_weights(weights: [f64; 4]) -> Result<Self> {
        let mut q = vec![0.0; 4];
        for (&w, &(m, n)) in weights.iter().zip(&PAULI_LABELS) {
            q[m * 2 + n] = w;
        }
        Self::new(2, q)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.q
    }

    pub fn q(&self, m: usize, n: usize) -> f64 {
        self.q[m * self.d + n]
    }
}

/// Pairwise correlation degrees `μ_jl ∈ [0, 1]` between parties.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationSpec {
    parties: usize,
    mu: Vec<f64>,
}

impl CorrelationSpec {
    /// From a symmetric `parties x parties` table; the diagonal is ignored.
    pub fn from_table(table: &[Vec<f64>]) -> Result<Self> {
        let parties = table.len();
        if table.iter().any(|row| row.len() != parties) {
            return Err(Error::Parameter("correlation table must be square".into()));
        }
        let mut mu = Vec::new();
        for (j, row) in table.iter().enumerate() {
            for (l, &x) in row.iter().enumerate().skip(j + 1) {
                if (x - table[l][j]).abs() > 1e-12 {
                    return Err(Error::Parameter(format!("correlation table is not symmetric at ({j}, {l})")));
                }
                mu.push(x);
            }
        }
        Self::from_pairs(parties, mu)
    }

    /// From the upper triangle in row order `(0,1), (0,2), ..., (P-2,P-1)`.
    pub fn from_pairs(parties: usize, mu: Vec<f64>) -> Result<Self> {
        if parties == 0 {
            return Err(Error::Parameter("correlation spec needs at least one party".into()));
        }
        if mu.len() != parties * (parties - 1) / 2 {
            return Err(Error::Parameter(format!(
                "{parties} parties need {} correlation degrees, got {}",
                parties * (parties - 1) / 2,
                mu.len()
            )));
        }
        if let Some(x) = mu.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::Parameter(format!("correlation degree {x} outside [0, 1]")));
        }
        Ok(Self { parties, mu })
    }

    pub fn uniform(parties: usize, mu: f64) -> Result<Self> {
        Self::from_pairs(parties, vec![mu; parties * parties.saturating_sub(1) / 2])
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn get(&self, j: usize, l: usize) -> f64 {
        let (a, b) = if j < l { (j, l) } else { (l, j) };
        assert!(a != b && b < self.parties, "invalid pair ({j}, {l})");
        let offset: usize = (0..a).map(|r| self.parties - 1 - r).sum();
        self.mu[offset + (b - a - 1)]
    }

    fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.parties).flat_map(|j| (j + 1..self.parties).map(move |l| (j, l))).collect()
    }
}

/// Joint Pauli channel `Σ q_{m_i n_i} (V ⊗ ... ⊗ V) ξ (V ⊗ ... ⊗ V)^†`.
///
/// Parties are mapped onto layout sites by `acts_on`; sites outside that
/// list are left untouched.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliChannelSpec {
    party_dims: Vec<usize>,
    joint: Vec<f64>,
    acts_on: Vec<usize>,
    terms: Vec<(f64, Vec<(usize, usize)>)>,
    cache: MonomialCache,
}

type TermMonomials = Arc<[(f64, Monomial)]>;

/// Term monomials for the site dimensions they were first built for.
#[derive(Default)]
struct MonomialCache(OnceLock<(Vec<usize>, TermMonomials)>);

impl Clone for MonomialCache {
    fn clone(&self) -> Self {
        let lock = OnceLock::new();
        if let Some(v) = self.0.get() {
            let _ = lock.set(v.clone());
        }
        Self(lock)
    }
}

impl std::fmt::Debug for MonomialCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("MonomialCache")
    }
}

impl PartialEq for MonomialCache {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl PauliChannelSpec {
    /// `joint` is indexed lexicographically by `(m_1, n_1, ..., m_P, n_P)`.
    pub fn from_joint(party_dims: Vec<usize>, joint: Vec<f64>) -> Result<Self> {
        if party_dims.is_empty() || party_dims.iter().any(|&d| d < 2) {
            return Err(Error::Parameter(format!("invalid party dimensions {party_dims:?}")));
        }
        let expected = joint_len(&party_dims)?;
        if joint.len() != expected {
            return Err(Error::Probability(format!("expected {expected} joint entries, got {}", joint.len())));
        }
        check_distribution(&joint, 1e-10)?;
        let terms = joint
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(idx, &p)| (p, decode_labels(idx, &party_dims)))
            .collect();
        let acts_on = (0..party_dims.len()).collect();
        Ok(Self { party_dims, joint, acts_on, terms, cache: MonomialCache::default() })
    }

    /// The identity channel on parties of the given dimensions.
    pub fn noiseless(party_dims: Vec<usize>) -> Result<Self> {
        let mut joint = vec![0.0; joint_len(&party_dims)?];
        joint[0] = 1.0;
        Self::from_joint(party_dims, joint)
    }

    /// Maps party `j` onto layout site `sites[j]`.
    pub fn acting_on(mut self, sites: Vec<usize>) -> Result<Self> {
        if sites.len() != self.party_dims.len() {
            return Err(Error::Layout(format!(
                "{} parties cannot act on {} sites",
                self.party_dims.len(),
                sites.len()
            )));
        }
        let mut sorted = sites.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != sites.len() {
            return Err(Error::Layout(format!("duplicate sites in {sites:?}")));
        }
        self.acts_on = sites;
        self.cache = MonomialCache::default();
        Ok(self)
    }

    pub fn party_dims(&self) -> &[usize] {
        &self.party_dims
    }

    pub fn num_parties(&self) -> usize {
        self.party_dims.len()
    }

    pub fn joint(&self) -> &[f64] {
        &self.joint
    }

    pub fn acts_on(&self) -> &[usize] {
        &self.acts_on
    }

    /// Nonzero `(probability, labels)` terms in index order.
    pub fn terms(&self) -> &[(f64, Vec<(usize, usize)>)] {
        &self.terms
    }

    pub fn probability(&self, labels: &[(usize, usize)]) -> f64 {
        let idx = labels
            .iter()
            .zip(&self.party_dims)
            .fold(0usize, |acc, (&(m, n), &d)| acc * d * d + m * d + n);
        self.joint[idx]
    }

    pub fn touches(&self, site: usize) -> bool {
        self.acts_on.contains(&site)
    }

    fn check_layout(&self, layout: &SubsystemLayout) -> Result<Vec<usize>> {
        let dims = layout.site_dims();
        for (&site, &d) in self.acts_on.iter().zip(&self.party_dims) {
            match dims.get(site) {
                Some(&sd) if sd == d => {}
                Some(&sd) => {
                    return Err(Error::Layout(format!(
                        "channel party of dimension {d} mapped to site {site} of dimension {sd}"
                    )))
                }
                None => return Err(Error::Layout(format!("site {site} not in layout"))),
            }
        }
        Ok(dims)
    }

    /// Full-space monomial of each nonzero term, cached for the first layout
    /// seen.
    pub(crate) fn term_monomials(&self, layout: &SubsystemLayout) -> Result<TermMonomials> {
        let dims = self.check_layout(layout)?;
        if let Some((cached_dims, monomials)) = self.cache.0.get() {
            if *cached_dims == dims {
                return Ok(Arc::clone(monomials));
            }
        }
        let monomials: TermMonomials = self
            .terms
            .iter()
            .map(|(p, labels)| {
                let mut site_labels = vec![None; dims.len()];
                for (&site, &label) in self.acts_on.iter().zip(labels) {
                    site_labels[site] = Some(label);
                }
                (*p, Monomial::on_sites(&dims, &site_labels))
            })
            .collect();
        let _ = self.cache.0.set((dims, Arc::clone(&monomials)));
        Ok(monomials)
    }
}

impl Channel for PauliChannelSpec {
    fn apply_raw(&self, x: &ComplexMatrix, layout: &SubsystemLayout) -> Result<ComplexMatrix> {
        if !x.is_square() || x.rows() != layout.total_dim() {
            return Err(Error::Layout("operator does not match the layout".into()));
        }
        let mut out = ComplexMatrix::zeros(x.rows(), x.cols());
        for (p, mono) in self.term_monomials(layout)?.iter() {
            mono.conjugate_accumulate(x, *p, &mut out);
        }
        Ok(out)
    }
}

/// Joint tensor of the correlated Pauli channel.
///
/// Every subset `T` of party pairs contributes with weight
/// `Π_{e∈T} μ_e Π_{e∉T} (1 − μ_e)`. Within each connected component of `T`
/// all parties carry the same label, drawn from the single-party table of
/// the component's lowest-index party. Pairs with `μ ∈ {0, 1}` are fixed, so
/// only the partially correlated pairs are enumerated.
pub fn correlated_probs(singles: &[SinglePartyPauliSpec], corr: &CorrelationSpec) -> Result<PauliChannelSpec> {
    let parties = singles.len();
    if parties == 0 {
        return Err(Error::Parameter("at least one party is required".into()));
    }
    if corr.parties() != parties {
        return Err(Error::Parameter(format!(
            "{parties} single-party tables but {} parties in the correlation spec",
            corr.parties()
        )));
    }
    let d = singles[0].d();
    if singles.iter().any(|s| s.d() != d) {
        return Err(Error::Layout("correlated parties must share one dimension".into()));
    }
    let party_dims = vec![d; parties];
    let len = joint_len(&party_dims)?;
    let labels = d * d;

    let pairs = corr.pairs();
    let mut fixed_on = Vec::new();
    let mut free = Vec::new();
    for &(j, l) in &pairs {
        let mu = corr.get(j, l);
        if mu == 1.0 {
            fixed_on.push((j, l));
        } else if mu > 0.0 {
            free.push((j, l, mu));
        }
    }
    if free.len() > MAX_FREE_PAIRS {
        return Err(Error::Parameter(format!(
            "{} partially correlated pairs exceed the limit of {MAX_FREE_PAIRS}",
            free.len()
        )));
    }

    let strides: Vec<usize> = (0..parties).map(|j| labels.pow((parties - 1 - j) as u32)).collect();
    let mut joint = vec![0.0; len];
    for mask in 0u64..(1u64 << free.len()) {
        let mut weight = 1.0;
        let mut uf = UnionFind::new(parties);
        for &(j, l) in &fixed_on {
            uf.union(j, l);
        }
        for (bit, &(j, l, mu)) in free.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                weight *= mu;
                uf.union(j, l);
            } else {
                weight *= 1.0 - mu;
            }
        }
        if weight == 0.0 {
            continue;
        }
        // component representative = lowest-index member (union keeps the min as root)
        let roots: Vec<usize> = (0..parties).map(|j| uf.find(j)).collect();
        let mut reps: Vec<usize> = roots.clone();
        reps.sort_unstable();
        reps.dedup();
        let comp_of: Vec<usize> = roots.iter().map(|r| reps.binary_search(r).unwrap()).collect();

        let mut assignment = vec![0usize; reps.len()];
        loop {
            let value = reps
                .iter()
                .zip(&assignment)
                .fold(weight, |acc, (&rep, &lab)| acc * singles[rep].probabilities()[lab]);
            if value != 0.0 {
                let idx: usize = (0..parties).map(|j| assignment[comp_of[j]] * strides[j]).sum();
                joint[idx] += value;
            }
            if !advance(&mut assignment, labels) {
                break;
            }
        }
    }
    PauliChannelSpec::from_joint(party_dims, joint)
}

/// Independent noise: the outer product of the single-party tables.
pub fn uncorrelated_probs(singles: &[SinglePartyPauliSpec]) -> Result<PauliChannelSpec> {
    correlated_probs(singles, &CorrelationSpec::uniform(singles.len(), 0.0)?)
}

/// `q_00 = 1 − p + p/d²`, every other `q_mn = p/d²`.
pub fn depolarizing_probs(d: usize, p: f64) -> Result<SinglePartyPauliSpec> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("depolarizing strength {p} outside [0, 1]")));
    }
    let uniform = p / (d * d) as f64;
    let mut q = vec![uniform; d * d];
    q[0] = 1.0 - p + uniform;
    SinglePartyPauliSpec::new(d, q)
}

/// Qubit channel applying the same `σ_m` to every party with probability `q_m`.
pub fn fully_correlated_probs(parties: usize, q: [f64; 4]) -> Result<PauliChannelSpec> {
    if parties == 0 {
        return Err(Error::Parameter("at least one party is required".into()));
    }
    check_distribution(&q, 1e-12)?;
    let party_dims = vec![2; parties];
    let mut joint = vec![0.0; joint_len(&party_dims)?];
    for (&w, &(m, n)) in q.iter().zip(&PAULI_LABELS) {
        let label = m * 2 + n;
        let idx = (0..parties).fold(0usize, |acc, _| acc * 4 + label);
        joint[idx] += w;
    }
    PauliChannelSpec::from_joint(party_dims, joint)
}

fn joint_len(party_dims: &[usize]) -> Result<usize> {
    let len = party_dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d * d))
        .unwrap_or(usize::MAX);
    if len > MAX_JOINT_ENTRIES {
        return Err(Error::SizeLimit { requested: len, limit: MAX_JOINT_ENTRIES });
    }
    Ok(len)
}

fn check_distribution(p: &[f64], tol: f64) -> Result<()> {
    if let Some(x) = p.iter().find(|&&x| !(x >= 0.0)) {
        return Err(Error::Probability(format!("negative or invalid probability {x}")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::Probability(format!("probabilities sum to {total}")));
    }
    Ok(())
}

fn decode_labels(mut idx: usize, party_dims: &[usize]) -> Vec<(usize, usize)> {
    let mut labels = vec![(0, 0); party_dims.len()];
    for (slot, &d) in labels.iter_mut().zip(party_dims).rev() {
        let local = idx % (d * d);
        idx /= d * d;
        *slot = (local / d, local % d);
    }
    labels
}

/// Odometer increment; returns false after the last assignment.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for x in digits.iter_mut().rev() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        self.parent[x] = root;
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::random_probabilities;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit(q: [f64; 4]) -> SinglePartyPauliSpec {
        SinglePartyPauliSpec::new(2, q.to_vec()).unwrap()
    }

    /// Brute-force expansion over every subset of the three pairs of a
    /// three-party channel, written out term by term.
    fn three_party_oracle(s: &[SinglePartyPauliSpec; 3], mu: [f64; 3]) -> Vec<f64> {
        let (m12, m13, m23) = (mu[0], mu[1], mu[2]);
        let q = |j: usize, a: usize| s[j].probabilities()[a];
        let mut out = vec![0.0; 64];
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let (ab, ac, bc) = ((a == b) as u8 as f64, (a == c) as u8 as f64, (b == c) as u8 as f64);
                    let v = (1.0 - m12) * (1.0 - m13) * (1.0 - m23) * q(0, a) * q(1, b) * q(2, c)
                        + m12 * (1.0 - m13) * (1.0 - m23) * ab * q(0, a) * q(2, c)
                        + (1.0 - m12) * m13 * (1.0 - m23) * ac * q(0, a) * q(1, b)
                        + (1.0 - m12) * (1.0 - m13) * m23 * bc * q(0, a) * q(1, b)
                        + m12 * m13 * (1.0 - m23) * ab * ac * q(0, a)
                        + m12 * (1.0 - m13) * m23 * ab * bc * q(0, a)
                        + (1.0 - m12) * m13 * m23 * ac * bc * q(0, a)
                        + m12 * m13 * m23 * ab * ac * q(0, a);
                    out[a * 16 + b * 4 + c] = v;
                }
            }
        }
        out
    }

    #[test]
    fn bipartite_limits() {
        let a = qubit([0.7, 0.1, 0.15, 0.05]);
        let b = qubit([0.4, 0.3, 0.2, 0.1]);
        let prod = correlated_probs(&[a.clone(), b.clone()], &CorrelationSpec::uniform(2, 0.0).unwrap()).unwrap();
        let full = correlated_probs(&[a.clone(), b.clone()], &CorrelationSpec::uniform(2, 1.0).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let pa = a.probabilities()[i];
                let pb = b.probabilities()[j];
                assert_eq!(prod.joint()[i * 4 + j], pa * pb);
                let diag = if i == j { pa } else { 0.0 };
                assert_eq!(full.joint()[i * 4 + j], diag);
            }
        }
    }

    #[test]
    fn bipartite_formula_at_intermediate_mu() {
        let a = qubit([0.7, 0.1, 0.15, 0.05]);
        let b = qubit([0.4, 0.3, 0.2, 0.1]);
        let mu = 0.35;
        let spec = correlated_probs(&[a.clone(), b.clone()], &CorrelationSpec::uniform(2, mu).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = (1.0 - mu) * a.probabilities()[i] * b.probabilities()[j]
                    + if i == j { mu * a.probabilities()[i] } else { 0.0 };
                assert!((spec.joint()[i * 4 + j] - expected).abs() < 1e-16);
            }
        }
    }

    #[test]
    fn three_parties_uniform_singles_half_correlation() {
        let s = qubit([0.25; 4]);
        let singles = [s.clone(), s.clone(), s];
        let spec = correlated_probs(&singles, &CorrelationSpec::uniform(3, 0.5).unwrap()).unwrap();
        let oracle = three_party_oracle(&singles, [0.5; 3]);
        let total: f64 = spec.joint().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
        for (x, y) in spec.joint().iter().zip(&oracle) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn three_parties_match_oracle_for_random_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..20 {
            let singles: [SinglePartyPauliSpec; 3] =
                std::array::from_fn(|_| SinglePartyPauliSpec::new(2, random_probabilities(4, &mut rng)).unwrap());
            let mu: [f64; 3] = std::array::from_fn(|_| rand::Rng::random(&mut rng));
            let spec = correlated_probs(&singles, &CorrelationSpec::from_pairs(3, mu.to_vec()).unwrap()).unwrap();
            for (x, y) in spec.joint().iter().zip(&three_party_oracle(&singles, mu)) {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn fully_correlated_matches_mu_one() {
        let q = [0.5, 0.2, 0.2, 0.1];
        let direct = fully_correlated_probs(3, q).unwrap();
        let single = SinglePartyPauliSpec::from_pauli_weights(q).unwrap();
        let via_mu =
            correlated_probs(&vec![single; 3], &CorrelationSpec::uniform(3, 1.0).unwrap()).unwrap();
        assert_eq!(direct.joint(), via_mu.joint());

        let two = fully_correlated_probs(2, [0.5, 0.0, 0.0, 0.5]).unwrap();
        let nonzero: Vec<f64> = two.joint().iter().copied().filter(|&x| x > 0.0).collect();
        assert_eq!(nonzero, vec![0.5, 0.5]);
        assert!(fully_correlated_probs(2, [0.5, 0.5, 0.5, 0.0]).is_err());
    }

    #[test]
    fn depolarizing_examples() {
        assert_eq!(depolarizing_probs(2, 0.0).unwrap().probabilities(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(depolarizing_probs(2, 1.0).unwrap().probabilities(), &[0.25; 4]);
        assert_eq!(depolarizing_probs(2, 0.5).unwrap().probabilities(), &[0.625, 0.125, 0.125, 0.125]);
        assert!(matches!(depolarizing_probs(2, 1.5), Err(Error::Parameter(_))));
    }

    #[test]
    fn rejects_mixed_dimensions_and_bad_tables() {
        let a = SinglePartyPauliSpec::noiseless(2).unwrap();
        let b = SinglePartyPauliSpec::noiseless(3).unwrap();
        let corr = CorrelationSpec::uniform(2, 0.5).unwrap();
        assert!(matches!(correlated_probs(&[a, b], &corr), Err(Error::Layout(_))));
        assert!(SinglePartyPauliSpec::new(2, vec![0.5, 0.5, 0.5, -0.5]).is_err());
        assert!(CorrelationSpec::from_pairs(3, vec![0.5, 1.5, 0.0]).is_err());
        assert!(CorrelationSpec::from_table(&[vec![0.0, 0.2], vec![0.3, 0.0]]).is_err());
    }

    #[test]
    fn correlation_table_lookup() {
        let c = CorrelationSpec::from_table(&[
            vec![0.0, 0.1, 0.2],
            vec![0.1, 0.0, 0.3],
            vec![0.2, 0.3, 0.0],
        ])
        .unwrap();
        assert_eq!((c.get(0, 1), c.get(2, 0), c.get(1, 2)), (0.1, 0.2, 0.3));
    }

    proptest! {
        #[test]
        fn correlated_tensor_is_a_distribution(
            seed in any::<u64>(),
            parties in 2usize..=4,
            d in 2usize..=3,
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let singles: Vec<SinglePartyPauliSpec> = (0..parties)
                .map(|_| SinglePartyPauliSpec::new(d, random_probabilities(d * d, &mut rng)).unwrap())
                .collect();
            let mu: Vec<f64> = (0..parties * (parties - 1) / 2).map(|_| rand::Rng::random(&mut rng)).collect();
            let spec = correlated_probs(&singles, &CorrelationSpec::from_pairs(parties, mu).unwrap()).unwrap();
            let total: f64 = spec.joint().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(spec.joint().iter().all(|&x| x >= 0.0));
        }
    }
}
