//! Quantum realizations: simulating measurement sequences on a
//! [`SystemModel`], the qutrit-style realization of `L = 2` vertices, direct
//! sums for mixtures, and a few named protocols.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::correlations::{
    encode, named_vertex, Behavior, ConvexDecomposition, CorrelationError, DeterministicVertex,
    Scenario,
};
use crate::qmath::{ComplexMatrix, DensityMatrix, Instrument, QmathError, SystemModel};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RealizeError {
    #[error(transparent)]
    Qmath(#[from] QmathError),
    #[error(transparent)]
    Correlation(#[from] CorrelationError),
    #[error("setting {setting} out of range for {settings} settings")]
    DimensionMismatch { setting: usize, settings: usize },
    #[error("empty setting sequence")]
    EmptySequence,
    #[error("only sequences of length 2 are supported (got {length})")]
    UnsupportedLength { length: usize },
    #[error("decomposition has no components with positive weight")]
    EmptyDecomposition,
}

/// Outcome distribution of one fixed setting sequence. `probs` is indexed
/// by the outcome sequence read as a base-`R` number, first outcome most
/// significant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceOutcomeDistribution {
    pub settings: Vec<usize>,
    pub probs: Vec<f64>,
}

impl SequenceOutcomeDistribution {
    pub fn prob(&self, outcomes: &[usize], r: usize) -> f64 {
        self.probs[encode(outcomes, r)]
    }
}

fn check_settings(sys: &SystemModel, settings: &[usize]) -> Result<(), RealizeError> {
    if settings.is_empty() {
        return Err(RealizeError::EmptySequence);
    }
    if let Some(&bad) = settings.iter().find(|&&x| x >= sys.settings()) {
        return Err(RealizeError::DimensionMismatch {
            setting: bad,
            settings: sys.settings(),
        });
    }
    Ok(())
}

/// Probabilities `tr(I_{a_L|x_L}(... I_{a_1|x_1}(rho) ...))`, chaining
/// unnormalized states.
pub fn run_sequence(
    sys: &SystemModel,
    settings: &[usize],
) -> Result<SequenceOutcomeDistribution, RealizeError> {
    check_settings(sys, settings)?;
    let mut states = vec![sys.initial().matrix().clone()];
    for &x in settings {
        let inst = sys.instrument(x);
        let mut next = Vec::with_capacity(states.len() * inst.outcomes());
        for st in &states {
            for r in 0..inst.outcomes() {
                next.push(if is_zero(st) {
                    st.clone()
                } else {
                    inst.apply_map(st, r)?
                });
            }
        }
        states = next;
    }
    Ok(SequenceOutcomeDistribution {
        settings: settings.to_vec(),
        probs: states.iter().map(|s| s.trace().re).collect(),
    })
}

fn is_zero(m: &ComplexMatrix) -> bool {
    m.as_slice().iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

/// The full length-`L` behavior of a system, sharing intermediate states
/// between setting sequences with a common prefix.
pub fn full_behavior(sys: &SystemModel, length: usize) -> Result<Behavior, RealizeError> {
    let scenario = Scenario::new(length, sys.outcomes(), sys.settings())?;
    let mut b = Behavior::zeros(scenario);
    let mut walk = Walk {
        sys,
        scenario,
        behavior: &mut b,
    };
    walk.visit(sys.initial().matrix(), 0, 0, 0)?;
    Ok(b)
}

struct Walk<'a> {
    sys: &'a SystemModel,
    scenario: Scenario,
    behavior: &'a mut Behavior,
}

impl Walk<'_> {
    fn visit(
        &mut self,
        state: &ComplexMatrix,
        depth: usize,
        x_idx: usize,
        a_idx: usize,
    ) -> Result<(), RealizeError> {
        let s = self.scenario;
        if depth == s.length() {
            self.behavior.block_mut(x_idx)[a_idx] = state.trace().re;
            return Ok(());
        }
        // Zero branches contribute zero to every descendant entry.
        if is_zero(state) {
            return Ok(());
        }
        let remaining = s.length() - depth - 1;
        let xs = s.settings().pow(remaining as u32);
        let rs = s.outcomes().pow(remaining as u32);
        for x in 0..s.settings() {
            let inst = self.sys.instrument(x);
            for r in 0..s.outcomes() {
                let next = inst.apply_map(state, r)?;
                // Children fill contiguous index ranges: the digits chosen
                // so far are the most significant ones.
                self.visit(&next, depth + 1, x_idx + x * xs, a_idx + r * rs)?;
            }
        }
        Ok(())
    }
}

/// A system of dimension `S + 1` whose length-2 behavior is exactly a
/// given vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexRealization {
    pub system: SystemModel,
    pub vertex: DeterministicVertex,
}

/// Realizes an `L = 2` vertex on `S + 1` levels. The first measurement with
/// setting `s` reads its outcome off `|0>` and moves the state to `|s+1>`;
/// the second reads its outcome off `|s'+1>`.
pub fn qutrit_vertex_realization(
    v: &DeterministicVertex,
) -> Result<VertexRealization, RealizeError> {
    let s = *v.scenario();
    if s.length() != 2 {
        return Err(RealizeError::UnsupportedLength { length: s.length() });
    }
    let dim = s.settings() + 1;
    let instruments = (0..s.settings())
        .map(|x| {
            // a_0 = first-step outcome, a_{x'+1} = outcome after x'.
            let labels: Vec<usize> = std::iter::once(v.outcome(&[x]))
                .chain((0..s.settings()).map(|xp| v.outcome(&[xp, x])))
                .collect();
            let u = swap(dim, 0, x + 1);
            let kraus = (0..s.outcomes())
                .map(|r| {
                    let diag: Vec<f64> = labels
                        .iter()
                        .map(|&l| if l == r { 1.0 } else { 0.0 })
                        .collect();
                    &u * &ComplexMatrix::diagonal(&diag)
                })
                .collect();
            Instrument::from_kraus(kraus)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let system = SystemModel::new(DensityMatrix::basis(dim, 0), instruments)?;
    Ok(VertexRealization {
        system,
        vertex: v.clone(),
    })
}

/// Permutation matrix exchanging basis states `i` and `j`.
fn swap(dim: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim);
    for k in 0..dim {
        let image = if k == i {
            j
        } else if k == j {
            i
        } else {
            k
        };
        m[(image, k)] = 1.0.into();
    }
    m
}

/// Direct sum of vertex realizations, with initial state
/// `sum_e w_e |0_e><0_e|`. Zero-weight components are dropped.
pub fn mixture_realization(decomp: &ConvexDecomposition) -> Result<SystemModel, RealizeError> {
    let s = decomp.scenario();
    if s.length() != 2 {
        return Err(RealizeError::UnsupportedLength { length: s.length() });
    }
    let parts: Vec<(f64, SystemModel)> = decomp
        .components()
        .iter()
        .filter(|c| c.weight > 0.0)
        .map(|c| Ok((c.weight, qutrit_vertex_realization(&c.vertex)?.system)))
        .collect::<Result<_, RealizeError>>()?;
    if parts.is_empty() {
        return Err(RealizeError::EmptyDecomposition);
    }
    let block = s.settings() + 1;
    let dim = block * parts.len();
    let mut initial = vec![0.0; dim];
    for (e, (w, _)) in parts.iter().enumerate() {
        initial[e * block] = *w;
    }
    let total: f64 = initial.iter().sum();
    for w in &mut initial {
        *w /= total;
    }
    let instruments = (0..s.settings())
        .map(|x| {
            let kraus = (0..s.outcomes())
                .map(|r| {
                    let blocks: Vec<&ComplexMatrix> = parts
                        .iter()
                        .map(|(_, sys)| &sys.instrument(x).kraus(r)[0])
                        .collect();
                    ComplexMatrix::direct_sum(&blocks)
                })
                .collect();
            Instrument::from_kraus(kraus)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let initial = DensityMatrix::new(ComplexMatrix::diagonal(&initial))?;
    Ok(SystemModel::new(initial, instruments)?)
}

pub const CANONICAL_PROTOCOLS: [&str; 4] = ["qubit-B1-3", "qubit-B2-3", "qutrit-e1", "qutrit-e3"];

/// A named protocol from [`CANONICAL_PROTOCOLS`].
pub fn canonical_protocol(name: &str) -> Option<SystemModel> {
    let ket = |d: usize, i: usize, j: usize| ComplexMatrix::ket_bra(d, i, j);
    let build = |initial: DensityMatrix, insts: Vec<Vec<ComplexMatrix>>| {
        let insts = insts
            .into_iter()
            .map(|k| Instrument::from_kraus(k).expect("valid protocol instrument"))
            .collect();
        SystemModel::new(initial, insts).expect("valid protocol")
    };
    match name {
        // Setting 0 always reports 0 and flips the state; setting 1 is a
        // projective sigma_z measurement.
        "qubit-B1-3" => Some(build(
            DensityMatrix::basis(2, 0),
            vec![
                vec![ComplexMatrix::pauli_x(), ComplexMatrix::zeros(2)],
                vec![ket(2, 0, 0), ket(2, 1, 1)],
            ],
        )),
        // Setting 0 always reports 0 and leaves the state alone; setting 1
        // reports the sigma_z outcome and prepares |1>.
        "qubit-B2-3" => Some(build(
            DensityMatrix::basis(2, 0),
            vec![
                vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2)],
                vec![ket(2, 1, 0), ket(2, 1, 1)],
            ],
        )),
        // Three-level protocol: setting 0 returns "1" on |2>, setting 1
        // returns "1" on |1>; afterwards |0> is exchanged with |1> or |2>.
        "qutrit-e1" => {
            let u0 = swap(3, 0, 1);
            let u1 = swap(3, 0, 2);
            Some(build(
                DensityMatrix::basis(3, 0),
                vec![
                    vec![
                        &u0 * &ComplexMatrix::diagonal(&[1.0, 1.0, 0.0]),
                        &u0 * &ComplexMatrix::diagonal(&[0.0, 0.0, 1.0]),
                    ],
                    vec![
                        &u1 * &ComplexMatrix::diagonal(&[1.0, 0.0, 1.0]),
                        &u1 * &ComplexMatrix::diagonal(&[0.0, 1.0, 0.0]),
                    ],
                ],
            ))
        }
        "qutrit-e3" => Some(
            qutrit_vertex_realization(&named_vertex("e3").expect("named vertex"))
                .expect("L = 2 vertex")
                .system,
        ),
        _ => None,
    }
}

/// All named protocols, in [`CANONICAL_PROTOCOLS`] order.
pub fn canonical_protocols() -> Vec<(&'static str, SystemModel)> {
    CANONICAL_PROTOCOLS
        .iter()
        .map(|&n| (n, canonical_protocol(n).expect("listed protocol")))
        .collect()
}
