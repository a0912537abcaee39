use std::fmt;

use super::scenario::{digit_string, encode, Scenario};
use super::CorrelationError;
use crate::tol;

/// Full table `p(a_1..a_L | x_1..x_L)`, dense and row-major: one block of
/// `R^L` outcome probabilities per setting sequence, both in lexicographic
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Behavior {
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self, CorrelationError> {
        let expected = scenario.setting_sequences() * scenario.outcome_sequences();
        if table.len() != expected {
            return Err(CorrelationError::ShapeMismatch {
                expected,
                found: table.len(),
            });
        }
        Ok(Self { scenario, table })
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let n = scenario.setting_sequences() * scenario.outcome_sequences();
        let p = 1.0 / scenario.outcome_sequences() as f64;
        Self {
            scenario,
            table: vec![p; n],
        }
    }

    pub fn zeros(scenario: Scenario) -> Self {
        let n = scenario.setting_sequences() * scenario.outcome_sequences();
        Self {
            scenario,
            table: vec![0.0; n],
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn block(&self, settings_index: usize) -> &[f64] {
        let w = self.scenario.outcome_sequences();
        &self.table[settings_index * w..(settings_index + 1) * w]
    }

    pub fn block_mut(&mut self, settings_index: usize) -> &mut [f64] {
        let w = self.scenario.outcome_sequences();
        &mut self.table[settings_index * w..(settings_index + 1) * w]
    }

    pub fn at(&self, settings_index: usize, outcomes_index: usize) -> f64 {
        self.table[settings_index * self.scenario.outcome_sequences() + outcomes_index]
    }

    /// `p(outcomes | settings)` for explicit sequences.
    pub fn get(&self, outcomes: &[usize], settings: &[usize]) -> f64 {
        let s = &self.scenario;
        assert_eq!(outcomes.len(), s.length());
        assert_eq!(settings.len(), s.length());
        self.at(
            encode(settings, s.settings()),
            encode(outcomes, s.outcomes()),
        )
    }

    pub fn set(&mut self, outcomes: &[usize], settings: &[usize], value: f64) {
        let s = self.scenario;
        let idx =
            encode(settings, s.settings()) * s.outcome_sequences() + encode(outcomes, s.outcomes());
        self.table[idx] = value;
    }

    /// `weight * self + (1 - weight) * other`
    pub fn mix(&self, weight: f64, other: &Behavior) -> Result<Behavior, CorrelationError> {
        self.ensure_same_scenario(other)?;
        Ok(Self {
            scenario: self.scenario,
            table: self
                .table
                .iter()
                .zip(&other.table)
                .map(|(a, b)| weight * a + (1.0 - weight) * b)
                .collect(),
        })
    }

    pub fn max_abs_diff(&self, other: &Behavior) -> Result<f64, CorrelationError> {
        self.ensure_same_scenario(other)?;
        Ok(self
            .table
            .iter()
            .zip(&other.table)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }

    pub(crate) fn ensure_same_scenario(&self, other: &Behavior) -> Result<(), CorrelationError> {
        if self.scenario != other.scenario {
            return Err(CorrelationError::ScenarioMismatch);
        }
        Ok(())
    }

    /// Sums out outcomes after step `t` for every full setting sequence.
    /// Result is indexed `[settings_index * R^t + outcome_prefix_index]`.
    fn level_sums(&self, t: usize) -> Vec<f64> {
        let s = &self.scenario;
        let tail = s.outcomes().pow((s.length() - t) as u32);
        let head = s.outcomes().pow(t as u32);
        let mut out = vec![0.0; s.setting_sequences() * head];
        for x in 0..s.setting_sequences() {
            let block = self.block(x);
            for (h, slot) in out[x * head..(x + 1) * head].iter_mut().enumerate() {
                *slot = block[h * tail..(h + 1) * tail].iter().sum();
            }
        }
        out
    }

    /// Marginal `p(a_1..a_t | x_1..x_t)` as a row-major table indexed by
    /// setting prefix then outcome prefix. Later settings are fixed to 0,
    /// which is only meaningful for members of the polytope.
    pub(crate) fn prefix_marginal(&self, t: usize) -> Vec<f64> {
        let s = &self.scenario;
        let sums = self.level_sums(t);
        let head = s.outcomes().pow(t as u32);
        let stride = s.settings().pow((s.length() - t) as u32);
        let prefixes = s.settings().pow(t as u32);
        let mut out = Vec::with_capacity(prefixes * head);
        for xp in 0..prefixes {
            let x = xp * stride;
            out.extend_from_slice(&sums[x * head..(x + 1) * head]);
        }
        out
    }
}

/// A single constraint violated by a table.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Negative {
        settings: Vec<usize>,
        outcomes: Vec<usize>,
        value: f64,
    },
    Normalization {
        settings: Vec<usize>,
        sum: f64,
    },
    /// The level-`level` marginal of `outcomes` differs between two setting
    /// sequences that agree on the first `level` settings.
    ArrowOfTime {
        level: usize,
        outcomes: Vec<usize>,
        settings: Vec<usize>,
        reference: Vec<usize>,
        deviation: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Negative {
                settings,
                outcomes,
                value,
            } => write!(
                f,
                "negative entry p({}|{}) = {value:e}",
                digit_string(outcomes),
                digit_string(settings)
            ),
            Violation::Normalization { settings, sum } => write!(
                f,
                "block {} sums to {sum} instead of 1",
                digit_string(settings)
            ),
            Violation::ArrowOfTime {
                level,
                outcomes,
                settings,
                reference,
                deviation,
            } => write!(
                f,
                "arrow of time at t={level}: marginal of {} differs between settings {} and {} by {deviation:e}",
                digit_string(outcomes),
                digit_string(settings),
                digit_string(reference)
            ),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct MembershipReport {
    pub violations: Vec<Violation>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count_arrow_of_time(&self) -> usize {
        self.violations
            .iter()
            .filter(|v| matches!(v, Violation::ArrowOfTime { .. }))
            .count()
    }
}

/// Positivity, normalization and the arrow-of-time equalities at every
/// truncation level.
pub fn check_membership(b: &Behavior) -> MembershipReport {
    let s = b.scenario();
    let mut violations = Vec::new();

    for x in 0..s.setting_sequences() {
        let block = b.block(x);
        for (a, &p) in block.iter().enumerate() {
            if p < -tol::ZERO_PROB || !p.is_finite() {
                violations.push(Violation::Negative {
                    settings: s.setting_sequence(x),
                    outcomes: s.outcome_sequence(a),
                    value: p,
                });
            }
        }
        let sum: f64 = block.iter().sum();
        if (sum - 1.0).abs() > tol::BEHAVIOR || !sum.is_finite() {
            violations.push(Violation::Normalization {
                settings: s.setting_sequence(x),
                sum,
            });
        }
    }

    for t in 1..s.length() {
        let sums = b.level_sums(t);
        let head = s.outcomes().pow(t as u32);
        let stride = s.settings().pow((s.length() - t) as u32);
        for x in 0..s.setting_sequences() {
            let reference = x - x % stride;
            if reference == x {
                continue;
            }
            for h in 0..head {
                let deviation = (sums[x * head + h] - sums[reference * head + h]).abs();
                if deviation > tol::BEHAVIOR {
                    let full = s.setting_sequence(x);
                    violations.push(Violation::ArrowOfTime {
                        level: t,
                        outcomes: super::scenario::decode(h, s.outcomes(), t),
                        settings: full,
                        reference: s.setting_sequence(reference),
                        deviation,
                    });
                }
            }
        }
    }
    MembershipReport { violations }
}

pub(crate) fn require_member(b: &Behavior) -> Result<(), CorrelationError> {
    let report = check_membership(b);
    match report.violations.first() {
        None => Ok(()),
        Some(first) => Err(CorrelationError::NotAMember {
            violations: report.violations.len(),
            first: first.to_string(),
        }),
    }
}

/// The length-`t` behavior obtained by summing out later outcomes.
pub fn marginal(b: &Behavior, t: usize) -> Result<Behavior, CorrelationError> {
    let s = b.scenario();
    if t == 0 || t > s.length() {
        return Err(CorrelationError::InvalidLevel {
            level: t,
            length: s.length(),
        });
    }
    require_member(b)?;
    Behavior::new(s.with_length(t)?, b.prefix_marginal(t))
}
