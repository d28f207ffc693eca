use crate::channels::{apply_leading, Channel, CptpMap};
use crate::displacement::LocalEncodingSet;
use crate::error::{Error, Result};
use crate::tensor::{matrix_entropy, symmetrize, ComplexMatrix, DensityMatrix, SubsystemLayout};

/// Tolerance for the unitarity check of ensemble members.
pub const UNITARY_TOL: f64 = 1e-9;
/// Tolerance for the normalization of ensemble probabilities.
pub const ENSEMBLE_PROB_TOL: f64 = 1e-10;

/// An encoding applied by the senders, acting on their joint space of
/// dimension `D_A` and as the identity on the receiver.
#[derive(Clone, Debug, PartialEq)]
pub enum Encoder {
    Unitary(ComplexMatrix),
    Cptp(CptpMap),
}

impl Encoder {
    pub fn identity(dim: usize) -> Self {
        Encoder::Unitary(ComplexMatrix::identity(dim))
    }

    /// Dimension of the sender space the encoder acts on.
    pub fn dim(&self) -> usize {
        match self {
            Encoder::Unitary(u) => u.cols(),
            Encoder::Cptp(map) => map.in_dim(),
        }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        match self {
            Encoder::Unitary(u) => std::slice::from_ref(u),
            Encoder::Cptp(map) => map.kraus(),
        }
    }

    /// Represents a unitary encoder as a one-operator Kraus map.
    pub fn to_cptp(&self) -> CptpMap {
        match self {
            Encoder::Unitary(u) => CptpMap::from_kraus_unchecked(vec![u.clone()]),
            Encoder::Cptp(map) => map.clone(),
        }
    }

    /// `(E ⊗ id_b)(x)` on an operator of the full layout.
    pub fn encode(&self, x: &ComplexMatrix, layout: &SubsystemLayout) -> Result<ComplexMatrix> {
        let da = layout.sender_dim();
        if self.dim() != da {
            return Err(Error::Layout(format!("encoder acts on dimension {}, senders span {da}", self.dim())));
        }
        if !x.is_square() || x.rows() != layout.total_dim() {
            return Err(Error::Layout("operator does not match the layout".into()));
        }
        Ok(apply_leading(self.kraus(), x, layout.receiver_dim()))
    }

    fn validate(&self) -> Result<()> {
        match self {
            Encoder::Unitary(u) => {
                if !u.is_square() {
                    return Err(Error::Parameter(format!("encoder is {}x{}, not square", u.rows(), u.cols())));
                }
                let dev = u.adjoint().matmul(u).max_abs_diff(&ComplexMatrix::identity(u.cols()));
                if dev > UNITARY_TOL {
                    return Err(Error::Parameter(format!("encoder is not unitary (deviation {dev:.3e})")));
                }
            }
            Encoder::Cptp(map) => {
                if map.in_dim() != map.out_dim() {
                    return Err(Error::Parameter(format!(
                        "encoder maps dimension {} to {}",
                        map.in_dim(),
                        map.out_dim()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `{p_i, E_i}`: probabilities with encoders on the sender space.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodingEnsemble {
    members: Vec<(f64, Encoder)>,
}

impl EncodingEnsemble {
    pub fn new(members: Vec<(f64, Encoder)>) -> Result<Self> {
        let Some((_, first)) = members.first() else {
            return Err(Error::Probability("empty ensemble".into()));
        };
        let dim = first.dim();
        let mut total = 0.0;
        for (p, enc) in &members {
            if !(*p >= 0.0) {
                return Err(Error::Probability(format!("ensemble probability {p} is negative")));
            }
            total += p;
            enc.validate()?;
            if enc.dim() != dim {
                return Err(Error::Layout("ensemble members act on different dimensions".into()));
            }
        }
        if (total - 1.0).abs() > ENSEMBLE_PROB_TOL {
            return Err(Error::Probability(format!("ensemble probabilities sum to {total}")));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[(f64, Encoder)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].1.dim()
    }
}

/// Decomposition of the Holevo quantity into its two terms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HolevoTerms {
    /// `S(Σ p_i Λ(ρ_i))`
    pub average_output_entropy: f64,
    /// `Σ p_i S(Λ(ρ_i))`
    pub mean_member_entropy: f64,
}

impl HolevoTerms {
    pub fn chi(&self) -> f64 {
        self.average_output_entropy - self.mean_member_entropy
    }
}

/// Both Holevo terms for the ensemble `{p_i, (E_i ⊗ id)(ρ)}` sent through `channel`.
pub fn holevo_terms(
    ensemble: &EncodingEnsemble,
    channel: &dyn Channel,
    rho: &DensityMatrix,
    layout: &SubsystemLayout,
) -> Result<HolevoTerms> {
    if rho.dim() != layout.total_dim() {
        return Err(Error::Layout(format!(
            "state dimension {} does not match layout dimension {}",
            rho.dim(),
            layout.total_dim()
        )));
    }
    let n = layout.total_dim();
    let mut average = ComplexMatrix::zeros(n, n);
    let mut mean_entropy = 0.0;
    for (p, enc) in &ensemble.members {
        if *p == 0.0 {
            continue;
        }
        let mut out = channel.apply_raw(&enc.encode(rho.matrix(), layout)?, layout)?;
        symmetrize(&mut out);
        mean_entropy += p * matrix_entropy(&out)?;
        average.add_scaled(*p, &out);
    }
    Ok(HolevoTerms { average_output_entropy: matrix_entropy(&average)?, mean_member_entropy: mean_entropy })
}

/// Holevo quantity `χ = S(Σ p_i Λ(ρ_i)) − Σ p_i S(Λ(ρ_i))` in bits.
pub fn holevo(
    ensemble: &EncodingEnsemble,
    channel: &dyn Channel,
    rho: &DensityMatrix,
    layout: &SubsystemLayout,
) -> Result<f64> {
    holevo_terms(ensemble, channel, rho, layout).map(|t| t.chi())
}

/// Uniform ensemble `{Ṽ_i E_min, 1/D_A^2}` over the local encoding set.
pub fn attaining_ensemble(encoder: &Encoder, set: &LocalEncodingSet) -> Result<EncodingEnsemble> {
    if encoder.dim() != set.sender_dim() {
        return Err(Error::Layout(format!(
            "encoder acts on dimension {}, encoding set on {}",
            encoder.dim(),
            set.sender_dim()
        )));
    }
    encoder.validate()?;
    let p = 1.0 / set.len() as f64;
    let members = (0..set.len())
        .map(|i| {
            let v = set.monomial(i);
            let enc = match encoder {
                Encoder::Unitary(u) => Encoder::Unitary(v.left_mul(u)),
                Encoder::Cptp(map) => {
                    Encoder::Cptp(CptpMap::from_kraus_unchecked(map.kraus().iter().map(|k| v.left_mul(k)).collect()))
                }
            };
            (p, enc)
        })
        .collect();
    Ok(EncodingEnsemble { members })
}
