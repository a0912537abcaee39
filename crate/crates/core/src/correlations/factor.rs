use super::behavior::{require_member, Behavior};
use super::scenario::{digit_string, encode, Scenario};
use super::CorrelationError;
use crate::tol;

/// The chain `p(a|x), p(b|a x y), p(c|a b x y z), ...`.
///
/// Level `t` (1-based) stores, for every setting prefix `x_1..x_t` and
/// outcome history `a_1..a_{t-1}`, a distribution over `a_t`, laid out as
/// `[(prefix * R^(t-1) + history) * R + a_t]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalChain {
    scenario: Scenario,
    levels: Vec<Vec<f64>>,
}

impl ConditionalChain {
    pub fn new(scenario: Scenario, levels: Vec<Vec<f64>>) -> Result<Self, CorrelationError> {
        if levels.len() != scenario.length() {
            return Err(CorrelationError::ShapeMismatch {
                expected: scenario.length(),
                found: levels.len(),
            });
        }
        for (i, level) in levels.iter().enumerate() {
            let expected = Self::level_len(&scenario, i + 1);
            if level.len() != expected {
                return Err(CorrelationError::ShapeMismatch {
                    expected,
                    found: level.len(),
                });
            }
        }
        Ok(Self { scenario, levels })
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let p = 1.0 / scenario.outcomes() as f64;
        let levels = (1..=scenario.length())
            .map(|t| vec![p; Self::level_len(&scenario, t)])
            .collect();
        Self { scenario, levels }
    }

    fn level_len(s: &Scenario, t: usize) -> usize {
        s.settings().pow(t as u32) * s.outcomes().pow(t as u32)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn level(&self, t: usize) -> &[f64] {
        &self.levels[t - 1]
    }

    pub fn level_mut(&mut self, t: usize) -> &mut [f64] {
        &mut self.levels[t - 1]
    }

    /// Distribution of `a_t` given the setting prefix `x_1..x_t` and the
    /// outcome history `a_1..a_{t-1}`.
    pub fn distribution(&self, settings: &[usize], history: &[usize]) -> &[f64] {
        let t = settings.len();
        assert_eq!(history.len() + 1, t);
        let s = &self.scenario;
        let r = s.outcomes();
        let row = encode(settings, s.settings()) * r.pow((t - 1) as u32) + encode(history, r);
        &self.levels[t - 1][row * r..(row + 1) * r]
    }

    /// Checks every conditional is a probability distribution.
    pub fn validate(&self) -> Result<(), CorrelationError> {
        let s = &self.scenario;
        let r = s.outcomes();
        for (i, level) in self.levels.iter().enumerate() {
            let t = i + 1;
            for (row, dist) in level.chunks(r).enumerate() {
                let sum: f64 = dist.iter().sum();
                let negative = dist.iter().any(|&p| p < -tol::ZERO_PROB || !p.is_finite());
                if negative || (sum - 1.0).abs() > tol::BEHAVIOR {
                    let hist_count = r.pow((t - 1) as u32);
                    let prefix = super::scenario::decode(row / hist_count, s.settings(), t);
                    let history = super::scenario::decode(row % hist_count, r, t - 1);
                    return Err(CorrelationError::UnnormalizedConditional {
                        level: t,
                        context: format!(
                            "x={};a={}",
                            digit_string(&prefix),
                            digit_string(&history)
                        ),
                        sum,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Writes a member behavior as its chain of conditionals. Histories of
/// probability zero get the uniform distribution, so every conditional is a
/// genuine distribution and recomposition is still exact.
pub fn factorize(b: &Behavior) -> Result<ConditionalChain, CorrelationError> {
    require_member(b)?;
    let s = *b.scenario();
    let r = s.outcomes();
    let uniform = 1.0 / r as f64;
    let mut levels = Vec::with_capacity(s.length());
    for t in 1..=s.length() {
        // Marginal rows: one per (setting prefix, outcome history), each
        // holding the joint probabilities of the R continuations a_t.
        let joint = if t == s.length() {
            b.table().to_vec()
        } else {
            b.prefix_marginal(t)
        };
        let mut level = Vec::with_capacity(joint.len());
        for row in joint.chunks(r) {
            let sum: f64 = row.iter().sum();
            if sum > tol::ZERO_PROB {
                level.extend(row.iter().map(|p| p.max(0.0) / sum));
            } else {
                level.extend(std::iter::repeat_n(uniform, r));
            }
        }
        levels.push(level);
    }
    ConditionalChain::new(s, levels)
}

/// Builds `p(a|x) = prod_t p(a_t | a_<t, x_<=t)`; satisfies the arrow of
/// time by construction.
pub fn compose_from_conditionals(chain: &ConditionalChain) -> Result<Behavior, CorrelationError> {
    chain.validate()?;
    let s = *chain.scenario();
    let mut b = Behavior::zeros(s);
    for x in 0..s.setting_sequences() {
        let xs = s.setting_sequence(x);
        for a in 0..s.outcome_sequences() {
            let os = s.outcome_sequence(a);
            let mut p = 1.0;
            for t in 1..=s.length() {
                p *= chain.distribution(&xs[..t], &os[..t - 1])[os[t - 1]];
                if p == 0.0 {
                    break;
                }
            }
            b.block_mut(x)[a] = p;
        }
    }
    Ok(b)
}
