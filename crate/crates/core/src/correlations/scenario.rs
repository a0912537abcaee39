use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::CorrelationError;

/// Upper limit on the number of deterministic contexts. Keeps the exact
/// vertex count a few megabytes at most.
const MAX_CONTEXTS: usize = 1 << 24;

/// Sequence length `L`, outcomes per measurement `R`, settings per step `S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scenario {
    length: usize,
    outcomes: usize,
    settings: usize,
    setting_sequences: usize,
    outcome_sequences: usize,
    contexts: usize,
}

impl Scenario {
    pub fn new(length: usize, outcomes: usize, settings: usize) -> Result<Self, CorrelationError> {
        if length == 0 || outcomes < 2 || settings < 2 {
            return Err(CorrelationError::InvalidScenario {
                length,
                outcomes,
                settings,
            });
        }
        let too_large = || CorrelationError::ScenarioTooLarge {
            length,
            outcomes,
            settings,
        };
        let setting_sequences = checked_pow(settings, length).ok_or_else(too_large)?;
        let outcome_sequences = checked_pow(outcomes, length).ok_or_else(too_large)?;
        setting_sequences
            .checked_mul(outcome_sequences)
            .ok_or_else(too_large)?;
        // S + S^2 + ... + S^L
        let mut contexts = 0usize;
        let mut level = 1usize;
        for _ in 0..length {
            level = level.checked_mul(settings).ok_or_else(too_large)?;
            contexts = contexts.checked_add(level).ok_or_else(too_large)?;
        }
        if contexts > MAX_CONTEXTS {
            return Err(too_large());
        }
        Ok(Self {
            length,
            outcomes,
            settings,
            setting_sequences,
            outcome_sequences,
            contexts,
        })
    }

    /// The (2,2,2) scenario of two dichotomic measurements at two times.
    pub fn simplest() -> Self {
        Self::new(2, 2, 2).expect("valid scenario")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    /// `S^L`
    pub fn setting_sequences(&self) -> usize {
        self.setting_sequences
    }

    /// `R^L`
    pub fn outcome_sequences(&self) -> usize {
        self.outcome_sequences
    }

    /// Number of deterministic contexts, one per setting prefix of length
    /// `1..=L`.
    pub fn contexts(&self) -> usize {
        self.contexts
    }

    /// Index of the first context at level `t` (1-based).
    pub fn context_offset(&self, t: usize) -> usize {
        (1..t).map(|k| self.settings.pow(k as u32)).sum()
    }

    /// Splits a context index into its level and setting prefix.
    pub fn context_at(&self, mut index: usize) -> (usize, Vec<usize>) {
        let mut t = 1;
        let mut width = self.settings;
        while index >= width {
            index -= width;
            t += 1;
            width *= self.settings;
        }
        (t, decode(index, self.settings, t))
    }

    pub fn context_index(&self, prefix: &[usize]) -> usize {
        self.context_offset(prefix.len()) + encode(prefix, self.settings)
    }

    /// Same (R, S) with a different length.
    pub fn with_length(&self, length: usize) -> Result<Self, CorrelationError> {
        Self::new(length, self.outcomes, self.settings)
    }

    /// Setting sequences in lexicographic order.
    pub fn setting_sequence(&self, index: usize) -> Vec<usize> {
        decode(index, self.settings, self.length)
    }

    pub fn outcome_sequence(&self, index: usize) -> Vec<usize> {
        decode(index, self.outcomes, self.length)
    }

    /// `(R^S)^((S^L - 1)/(S - 1))` as the level-by-level product
    /// `prod_{i<L} (R^S)^(S^i)`.
    pub fn vertex_count(&self) -> BigUint {
        let per_prefix = BigUint::from(self.outcomes).pow(self.settings as u32);
        let mut count = BigUint::from(1u32);
        let mut prefixes = 1usize;
        for _ in 0..self.length {
            count *= per_prefix.pow(prefixes as u32);
            prefixes *= self.settings;
        }
        count
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<usize> {
    let mut acc = 1usize;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Big-endian base-`base` digits: first element most significant.
pub fn encode(digits: &[usize], base: usize) -> usize {
    digits.iter().fold(0, |acc, &d| acc * base + d)
}

pub fn decode(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

/// Renders a sequence as a digit string, e.g. `[0, 1] -> "01"`.
pub fn digit_string(seq: &[usize]) -> String {
    seq.iter()
        .map(|&d| char::from_digit(d as u32, 10).expect("single digit"))
        .collect()
}

pub fn parse_digits(s: &str, base: usize) -> Option<Vec<usize>> {
    s.chars()
        .map(|c| c.to_digit(10).map(|d| d as usize).filter(|&d| d < base))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate() {
        assert!(Scenario::new(0, 2, 2).is_err());
        assert!(Scenario::new(2, 1, 2).is_err());
        assert!(Scenario::new(2, 2, 1).is_err());
        assert!(matches!(
            Scenario::new(40, 2, 2),
            Err(CorrelationError::ScenarioTooLarge { .. })
        ));
    }

    #[test]
    fn context_indexing_round_trips() {
        let s = Scenario::new(3, 2, 3).unwrap();
        assert_eq!(s.contexts(), 3 + 9 + 27);
        for i in 0..s.contexts() {
            let (t, prefix) = s.context_at(i);
            assert_eq!(prefix.len(), t);
            assert_eq!(s.context_index(&prefix), i);
        }
    }

    #[test]
    fn digits() {
        assert_eq!(encode(&[1, 0, 1], 2), 5);
        assert_eq!(decode(5, 2, 3), vec![1, 0, 1]);
        assert_eq!(digit_string(&[0, 2]), "02");
        assert_eq!(parse_digits("02", 3), Some(vec![0, 2]));
        assert_eq!(parse_digits("03", 3), None);
    }

    #[test]
    fn count_matches_closed_form() {
        for &(l, r, s) in &[
            (1, 2, 2),
            (2, 2, 2),
            (2, 3, 2),
            (2, 2, 3),
            (3, 2, 2),
            (3, 3, 3),
        ] {
            let sc = Scenario::new(l, r, s).unwrap();
            let exp = (s.pow(l as u32) - 1) / (s - 1);
            let closed = BigUint::from(r as u32).pow((s * exp) as u32);
            assert_eq!(sc.vertex_count(), closed);
        }
    }
}
