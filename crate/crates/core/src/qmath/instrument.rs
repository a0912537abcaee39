use super::eigen::eigh;
use super::state::{validate_effect, DensityMatrix, Effect};
use super::{ComplexMatrix, QmathError};
use crate::tol;

/// A quantum instrument given by Kraus operators, one non-empty list per
/// outcome, jointly trace preserving.
#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    dim: usize,
    kraus: Vec<Vec<ComplexMatrix>>,
    effects: Vec<Effect>,
}

pub fn validate_instrument(kraus_sets: Vec<Vec<ComplexMatrix>>) -> Result<Instrument, QmathError> {
    let first = kraus_sets
        .first()
        .and_then(|set| set.first())
        .ok_or(QmathError::EmptyInstrument)?;
    let dim = first.dim();
    let mut total = ComplexMatrix::zeros(dim);
    let mut effects = Vec::with_capacity(kraus_sets.len());
    for (r, set) in kraus_sets.iter().enumerate() {
        if set.is_empty() {
            return Err(QmathError::EmptyOutcome { outcome: r });
        }
        let mut e = ComplexMatrix::zeros(dim);
        for k in set {
            if k.dim() != dim {
                return Err(QmathError::DimensionMismatch {
                    expected: dim,
                    found: k.dim(),
                });
            }
            e = &e + &(&k.adjoint() * k);
        }
        total = &total + &e;
        effects.push(e);
    }
    let deviation = total.max_abs_diff(&ComplexMatrix::identity(dim));
    if deviation > tol::TRACE_PRESERVING {
        return Err(QmathError::NotTracePreserving {
            deviation,
            tolerance: tol::TRACE_PRESERVING,
        });
    }
    let effects = effects
        .into_iter()
        .map(validate_effect)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Instrument {
        dim,
        kraus: kraus_sets,
        effects,
    })
}

impl Instrument {
    /// One Kraus operator per outcome.
    pub fn from_kraus(ops: Vec<ComplexMatrix>) -> Result<Self, QmathError> {
        validate_instrument(ops.into_iter().map(|k| vec![k]).collect())
    }

    /// Projective measurement in the computational basis of `dim` levels.
    pub fn computational(dim: usize) -> Self {
        Self::from_kraus(
            (0..dim)
                .map(|i| ComplexMatrix::ket_bra(dim, i, i))
                .collect(),
        )
        .expect("basis projectors form an instrument")
    }

    /// Measure-and-prepare instrument: outcome `r` occurs with probability
    /// `tr(E_r rho)` and leaves the system in `posts[r]`.
    pub fn measure_and_prepare(
        effects: &[Effect],
        posts: &[DensityMatrix],
    ) -> Result<Self, QmathError> {
        if effects.len() != posts.len() || effects.is_empty() {
            return Err(QmathError::OutcomeCountMismatch {
                expected: effects.len(),
                found: posts.len(),
            });
        }
        let dim = effects[0].dim();
        let mut sets = Vec::with_capacity(effects.len());
        for (e, post) in effects.iter().zip(posts) {
            if e.dim() != dim || post.dim() != dim {
                return Err(QmathError::DimensionMismatch {
                    expected: dim,
                    found: post.dim(),
                });
            }
            let ee = eigh(e.matrix());
            let pe = eigh(post.matrix());
            let mut set = Vec::new();
            for (j, &lam) in pe.values.iter().enumerate() {
                for (k, &mu) in ee.values.iter().enumerate() {
                    let w = lam.max(0.0) * mu.max(0.0);
                    if w <= 0.0 {
                        continue;
                    }
                    let k_op = ComplexMatrix::outer(&pe.vector(j), &ee.vector(k));
                    set.push(k_op.scale(w.sqrt()));
                }
            }
            if set.is_empty() {
                set.push(ComplexMatrix::zeros(dim));
            }
            sets.push(set);
        }
        validate_instrument(sets)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.kraus.len()
    }

    pub fn kraus(&self, outcome: usize) -> &[ComplexMatrix] {
        &self.kraus[outcome]
    }

    pub fn kraus_sets(&self) -> &[Vec<ComplexMatrix>] {
        &self.kraus
    }

    /// Induced effects `E_r = sum_k K^dag K`.
    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    /// The completely positive map of outcome `r` applied to an arbitrary
    /// (possibly subnormalized) operator.
    pub fn apply_map(
        &self,
        state: &ComplexMatrix,
        outcome: usize,
    ) -> Result<ComplexMatrix, QmathError> {
        if state.dim() != self.dim {
            return Err(QmathError::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        let set = self
            .kraus
            .get(outcome)
            .ok_or(QmathError::OutcomeOutOfRange {
                outcome,
                outcomes: self.kraus.len(),
            })?;
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in set {
            out = &out + &k.conjugate(state);
        }
        Ok(out)
    }

    /// Embeds into a larger space. Extra basis states are routed to `|0>`
    /// under outcome 0 so all outputs stay in the original subspace.
    pub fn embed(&self, dim: usize) -> Result<Self, QmathError> {
        if dim < self.dim {
            return Err(QmathError::DimensionMismatch {
                expected: self.dim,
                found: dim,
            });
        }
        let mut sets: Vec<Vec<ComplexMatrix>> = self
            .kraus
            .iter()
            .map(|set| set.iter().map(|k| k.pad_to(dim)).collect())
            .collect();
        for extra in self.dim..dim {
            sets[0].push(ComplexMatrix::ket_bra(dim, 0, extra));
        }
        validate_instrument(sets)
    }
}

/// Result of applying one outcome branch of an instrument.
#[derive(Clone, Debug)]
pub struct Branch {
    /// Unnormalized post-measurement operator.
    pub state: ComplexMatrix,
    pub probability: f64,
}

impl Branch {
    /// The renormalized post-measurement state, when the branch has
    /// non-negligible probability.
    pub fn normalized(&self) -> Option<DensityMatrix> {
        if self.probability <= tol::ZERO_PROB {
            return None;
        }
        DensityMatrix::new(self.state.scale(1.0 / self.probability)).ok()
    }
}

pub fn apply_instrument(
    rho: &DensityMatrix,
    inst: &Instrument,
    outcome: usize,
) -> Result<Branch, QmathError> {
    let state = inst.apply_map(rho.matrix(), outcome)?;
    let probability = state.trace().re;
    Ok(Branch { state, probability })
}

/// An initial state together with `S` instruments on the same space.
///
/// Repeating a setting reuses the identical instrument.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemModel {
    initial: DensityMatrix,
    instruments: Vec<Instrument>,
}

impl SystemModel {
    pub fn new(initial: DensityMatrix, instruments: Vec<Instrument>) -> Result<Self, QmathError> {
        let first = instruments.first().ok_or(QmathError::NoInstruments)?;
        let dim = initial.dim();
        let outcomes = first.outcomes();
        for inst in &instruments {
            if inst.dim() != dim {
                return Err(QmathError::DimensionMismatch {
                    expected: dim,
                    found: inst.dim(),
                });
            }
            if inst.outcomes() != outcomes {
                return Err(QmathError::OutcomeCountMismatch {
                    expected: outcomes,
                    found: inst.outcomes(),
                });
            }
        }
        Ok(Self {
            initial,
            instruments,
        })
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn instruments(&self) -> &[Instrument] {
        &self.instruments
    }

    pub fn instrument(&self, setting: usize) -> &Instrument {
        &self.instruments[setting]
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }

    pub fn settings(&self) -> usize {
        self.instruments.len()
    }

    pub fn outcomes(&self) -> usize {
        self.instruments[0].outcomes()
    }

    /// Same model on a `dim`-level space; see [`Instrument::embed`].
    pub fn embed(&self, dim: usize) -> Result<Self, QmathError> {
        let initial = DensityMatrix::new(self.initial.matrix().pad_to(dim))?;
        let instruments = self
            .instruments
            .iter()
            .map(|i| i.embed(dim))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(initial, instruments)
    }
}
