use super::behavior::Behavior;
use super::factor::{factorize, ConditionalChain};
use super::scenario::Scenario;
use super::vertex::DeterministicVertex;
use super::CorrelationError;
use crate::tol;

#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub vertex: DeterministicVertex,
}

/// A behavior written as a convex combination of deterministic vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexDecomposition {
    scenario: Scenario,
    components: Vec<Component>,
}

impl ConvexDecomposition {
    pub fn new(scenario: Scenario, components: Vec<Component>) -> Result<Self, CorrelationError> {
        if components.is_empty() {
            return Err(CorrelationError::EmptyDecomposition);
        }
        for c in &components {
            if *c.vertex.scenario() != scenario {
                return Err(CorrelationError::ScenarioMismatch);
            }
            if c.weight.is_nan() || c.weight < 0.0 {
                return Err(CorrelationError::InvalidWeights { total: c.weight });
            }
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > tol::BEHAVIOR {
            return Err(CorrelationError::InvalidWeights { total });
        }
        Ok(Self {
            scenario,
            components,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    /// `sum_v w_v * behavior(v)`
    pub fn reconstruct(&self) -> Behavior {
        let s = self.scenario;
        let mut b = Behavior::zeros(s);
        for c in &self.components {
            for x in 0..s.setting_sequences() {
                let xs = s.setting_sequence(x);
                let a = super::scenario::encode(&c.vertex.run(&xs), s.outcomes());
                b.block_mut(x)[a] += c.weight;
            }
        }
        b
    }
}

/// Convex decomposition of a member behavior. The weight of a vertex is the
/// product, over all contexts, of the conditional probability of the
/// outcome it assigns there. Zero-weight vertices are omitted; at most
/// `cap` components are produced.
pub fn decompose_behavior(
    b: &Behavior,
    cap: usize,
) -> Result<ConvexDecomposition, CorrelationError> {
    let chain = factorize(b)?;
    let s = *b.scenario();
    let mut search = Search {
        chain: &chain,
        scenario: s,
        assignment: vec![0; s.contexts()],
        components: Vec::new(),
        cap,
    };
    search.visit(0, 1.0)?;
    ConvexDecomposition::new(s, search.components)
}

struct Search<'a> {
    chain: &'a ConditionalChain,
    scenario: Scenario,
    assignment: Vec<usize>,
    components: Vec<Component>,
    cap: usize,
}

impl Search<'_> {
    fn visit(&mut self, ctx: usize, weight: f64) -> Result<(), CorrelationError> {
        if ctx == self.scenario.contexts() {
            if self.components.len() == self.cap {
                return Err(CorrelationError::TooManyVertices {
                    count: self.scenario.vertex_count(),
                    cap: self.cap,
                });
            }
            let vertex = DeterministicVertex::new(self.scenario, self.assignment.clone())?;
            self.components.push(Component { weight, vertex });
            return Ok(());
        }
        let (t, prefix) = self.scenario.context_at(ctx);
        // Contexts of shorter prefixes come first, so the history is known.
        let history: Vec<usize> = (1..t)
            .map(|k| self.assignment[self.scenario.context_index(&prefix[..k])])
            .collect();
        let dist = self.chain.distribution(&prefix, &history).to_vec();
        for (o, p) in dist.into_iter().enumerate() {
            let w = weight * p;
            if w == 0.0 {
                continue;
            }
            self.assignment[ctx] = o;
            self.visit(ctx + 1, w)?;
        }
        Ok(())
    }
}
