use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::behavior::{check_membership, Behavior};
use super::scenario::{encode, Scenario};
use super::CorrelationError;

/// Default limit on how many vertices may be materialized at once.
pub const DEFAULT_VERTEX_CAP: usize = 1_000_000;

/// A deterministic point of the polytope: one fixed outcome per context,
/// where a context is a setting prefix `x_1..x_t`. The outcome history of
/// a context is implied by the earlier assignments.
///
/// Vertices are numbered by reading the outcomes as base-`R` digits in
/// context order (level first, then lexicographic prefix), most significant
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DeterministicVertex {
    scenario: Scenario,
    outcomes: Vec<usize>,
}

impl DeterministicVertex {
    pub fn new(scenario: Scenario, outcomes: Vec<usize>) -> Result<Self, CorrelationError> {
        if outcomes.len() != scenario.contexts() {
            return Err(CorrelationError::ShapeMismatch {
                expected: scenario.contexts(),
                found: outcomes.len(),
            });
        }
        if let Some(&bad) = outcomes.iter().find(|&&o| o >= scenario.outcomes()) {
            return Err(CorrelationError::OutcomeOutOfRange {
                outcome: bad,
                outcomes: scenario.outcomes(),
            });
        }
        Ok(Self { scenario, outcomes })
    }

    pub fn from_index(scenario: Scenario, index: usize) -> Result<Self, CorrelationError> {
        if BigUint::from(index) >= scenario.vertex_count() {
            return Err(CorrelationError::IndexOutOfRange {
                index,
                count: scenario.vertex_count(),
            });
        }
        let r = scenario.outcomes();
        let mut outcomes = vec![0; scenario.contexts()];
        let mut rest = index;
        for slot in outcomes.iter_mut().rev() {
            *slot = rest % r;
            rest /= r;
        }
        Ok(Self { scenario, outcomes })
    }

    /// Position in the enumeration order.
    pub fn index(&self) -> BigUint {
        let r = BigUint::from(self.scenario.outcomes());
        self.outcomes
            .iter()
            .fold(BigUint::from(0u32), |acc, &o| acc * &r + BigUint::from(o))
    }

    pub(crate) fn index_usize(&self) -> Option<usize> {
        self.index().to_usize()
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Outcomes in context order.
    pub fn assignment(&self) -> &[usize] {
        &self.outcomes
    }

    /// The outcome assigned after the setting prefix `prefix`.
    pub fn outcome(&self, prefix: &[usize]) -> usize {
        self.outcomes[self.scenario.context_index(prefix)]
    }

    /// Outcome sequence produced along a full or partial setting sequence.
    pub fn run(&self, settings: &[usize]) -> Vec<usize> {
        (1..=settings.len())
            .map(|t| self.outcome(&settings[..t]))
            .collect()
    }

    /// The 0/1 behavior of this vertex.
    pub fn behavior(&self) -> Behavior {
        let s = self.scenario;
        let mut b = Behavior::zeros(s);
        for x in 0..s.setting_sequences() {
            let xs = s.setting_sequence(x);
            let a = encode(&self.run(&xs), s.outcomes());
            b.block_mut(x)[a] = 1.0;
        }
        b
    }

    /// Recovers the vertex from a 0/1 member behavior.
    pub fn from_behavior(b: &Behavior) -> Result<Self, CorrelationError> {
        let s = *b.scenario();
        if !check_membership(b).is_member() || b.table().iter().any(|&p| p != 0.0 && p != 1.0) {
            return Err(CorrelationError::NotDeterministic);
        }
        let mut outcomes = vec![0; s.contexts()];
        for x in 0..s.setting_sequences() {
            let a = b
                .block(x)
                .iter()
                .position(|&p| p == 1.0)
                .ok_or(CorrelationError::NotDeterministic)?;
            let xs = s.setting_sequence(x);
            let os = s.outcome_sequence(a);
            for t in 1..=s.length() {
                outcomes[s.context_index(&xs[..t])] = os[t - 1];
            }
        }
        Self::new(s, outcomes)
    }

    /// Vertex with unit entries `p(a b | x y) = 1` for the listed
    /// `(a, b, x, y)` tuples of an `L = 2` scenario.
    pub fn from_unit_entries(
        scenario: Scenario,
        entries: &[([usize; 2], [usize; 2])],
    ) -> Result<Self, CorrelationError> {
        let mut b = Behavior::zeros(scenario);
        if scenario.length() != 2 {
            return Err(CorrelationError::NotDeterministic);
        }
        for (a, x) in entries {
            b.set(a, x, 1.0);
        }
        Self::from_behavior(&b)
    }
}

/// The four named vertices `e1..e4` of the (2,2,2) scenario.
pub fn named_vertex(name: &str) -> Option<DeterministicVertex> {
    let entries: [([usize; 2], [usize; 2]); 4] = match name {
        "e1" => [
            ([0, 0], [0, 0]),
            ([0, 0], [1, 1]),
            ([0, 1], [0, 1]),
            ([0, 1], [1, 0]),
        ],
        "e2" => [
            ([0, 1], [0, 0]),
            ([0, 1], [1, 1]),
            ([0, 0], [0, 1]),
            ([0, 0], [1, 0]),
        ],
        "e3" => [
            ([0, 1], [0, 0]),
            ([0, 0], [1, 1]),
            ([0, 1], [0, 1]),
            ([0, 1], [1, 0]),
        ],
        "e4" => [
            ([0, 1], [0, 0]),
            ([0, 1], [1, 1]),
            ([0, 1], [0, 1]),
            ([0, 0], [1, 0]),
        ],
        _ => return None,
    };
    Some(
        DeterministicVertex::from_unit_entries(Scenario::simplest(), &entries)
            .expect("named vertices are deterministic members"),
    )
}

pub const NAMED_VERTICES: [&str; 4] = ["e1", "e2", "e3", "e4"];

pub fn count_vertices(s: &Scenario) -> BigUint {
    s.vertex_count()
}

pub fn enumerate_vertices(
    s: &Scenario,
    cap: usize,
) -> Result<Vec<DeterministicVertex>, CorrelationError> {
    let count = s.vertex_count();
    let n = count.to_usize().filter(|&n| n <= cap).ok_or_else(|| {
        CorrelationError::TooManyVertices {
            count: count.clone(),
            cap,
        }
    })?;
    let r = s.outcomes();
    let mut out = Vec::with_capacity(n);
    let mut digits = vec![0usize; s.contexts()];
    for _ in 0..n {
        out.push(DeterministicVertex {
            scenario: *s,
            outcomes: digits.clone(),
        });
        // Increment the base-R counter, last context fastest.
        for d in digits.iter_mut().rev() {
            *d += 1;
            if *d < r {
                break;
            }
            *d = 0;
        }
    }
    Ok(out)
}

pub fn vertex_behavior(v: &DeterministicVertex) -> Behavior {
    v.behavior()
}
