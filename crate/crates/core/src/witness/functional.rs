use serde::{Deserialize, Serialize};

use super::WitnessError;
use crate::correlations::{digit_string, parse_digits, Behavior, Scenario};

/// One coefficient `coeff * p(outcomes | settings)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub outcomes: Vec<usize>,
    pub settings: Vec<usize>,
    pub coeff: f64,
}

/// A linear functional on behaviors.
#[derive(Clone, Debug, PartialEq)]
pub struct WitnessFunctional {
    name: String,
    scenario: Scenario,
    terms: Vec<Term>,
}

impl WitnessFunctional {
    pub fn new(
        name: impl Into<String>,
        scenario: Scenario,
        terms: Vec<Term>,
    ) -> Result<Self, WitnessError> {
        for (i, t) in terms.iter().enumerate() {
            let path = format!("terms[{i}]");
            if t.outcomes.len() != scenario.length() || t.settings.len() != scenario.length() {
                return Err(WitnessError::Schema {
                    path,
                    message: format!("sequences must have length {}", scenario.length()),
                });
            }
            if t.outcomes.iter().any(|&a| a >= scenario.outcomes())
                || t.settings.iter().any(|&x| x >= scenario.settings())
            {
                return Err(WitnessError::Schema {
                    path,
                    message: "outcome or setting out of range".into(),
                });
            }
            if !t.coeff.is_finite() {
                return Err(WitnessError::Schema {
                    path: format!("{path}.coeff"),
                    message: "coefficient must be finite".into(),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            scenario,
            terms,
        })
    }

    /// Unit coefficients on the given `(a b | x y)` entries.
    fn unit(name: &str, entries: [([usize; 2], [usize; 2]); 4]) -> Self {
        let terms = entries
            .iter()
            .map(|(a, x)| Term {
                outcomes: a.to_vec(),
                settings: x.to_vec(),
                coeff: 1.0,
            })
            .collect();
        Self::new(name, Scenario::simplest(), terms).expect("valid builtin")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Dense coefficient table laid out like a behavior table.
    pub fn coefficients(&self) -> Vec<f64> {
        let s = self.scenario;
        let mut c = vec![0.0; s.setting_sequences() * s.outcome_sequences()];
        for t in &self.terms {
            let x = crate::correlations::encode(&t.settings, s.settings());
            let a = crate::correlations::encode(&t.outcomes, s.outcomes());
            c[x * s.outcome_sequences() + a] += t.coeff;
        }
        c
    }
}

pub const BUILTIN_NAMES: [&str; 4] = ["B1", "B2", "B3", "B4"];

/// `B1..B4`, each the sum of the four unit entries of the vertex `e1..e4`.
pub fn builtin_functionals() -> Vec<WitnessFunctional> {
    BUILTIN_NAMES
        .iter()
        .map(|n| builtin_functional(n).expect("listed builtin"))
        .collect()
}

pub fn builtin_functional(name: &str) -> Option<WitnessFunctional> {
    let entries = match name {
        "B1" => [
            ([0, 0], [0, 0]),
            ([0, 0], [1, 1]),
            ([0, 1], [0, 1]),
            ([0, 1], [1, 0]),
        ],
        "B2" => [
            ([0, 1], [0, 0]),
            ([0, 1], [1, 1]),
            ([0, 0], [0, 1]),
            ([0, 0], [1, 0]),
        ],
        "B3" => [
            ([0, 1], [0, 0]),
            ([0, 0], [1, 1]),
            ([0, 1], [0, 1]),
            ([0, 1], [1, 0]),
        ],
        "B4" => [
            ([0, 1], [0, 0]),
            ([0, 1], [1, 1]),
            ([0, 1], [0, 1]),
            ([0, 0], [1, 0]),
        ],
        _ => return None,
    };
    Some(WitnessFunctional::unit(name, entries))
}

/// `sum_terms coeff * p(a | x)`
pub fn evaluate(f: &WitnessFunctional, b: &Behavior) -> Result<f64, WitnessError> {
    if f.scenario != *b.scenario() {
        return Err(WitnessError::ScenarioMismatch);
    }
    Ok(f.terms
        .iter()
        .map(|t| t.coeff * b.get(&t.outcomes, &t.settings))
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub a: String,
    pub x: String,
    pub coeff: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(rename = "R", default = "two")]
    pub outcomes: usize,
    #[serde(rename = "S", default = "two")]
    pub settings: usize,
    pub terms: Vec<TermDoc>,
}

fn two() -> usize {
    2
}

impl WitnessFunctional {
    pub fn to_doc(&self) -> WitnessDoc {
        WitnessDoc {
            name: Some(self.name.clone()),
            length: self.scenario.length(),
            outcomes: self.scenario.outcomes(),
            settings: self.scenario.settings(),
            terms: self
                .terms
                .iter()
                .map(|t| TermDoc {
                    a: digit_string(&t.outcomes),
                    x: digit_string(&t.settings),
                    coeff: t.coeff,
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &WitnessDoc) -> Result<Self, WitnessError> {
        let scenario = Scenario::new(doc.length, doc.outcomes, doc.settings).map_err(|e| {
            WitnessError::Schema {
                path: "L/R/S".into(),
                message: e.to_string(),
            }
        })?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (i, t) in doc.terms.iter().enumerate() {
            let parse = |field: &str, s: &str, base: usize| {
                parse_digits(s, base)
                    .filter(|v| v.len() == doc.length)
                    .ok_or_else(|| WitnessError::Schema {
                        path: format!("terms[{i}].{field}"),
                        message: format!("expected {} digits below {base}", doc.length),
                    })
            };
            terms.push(Term {
                outcomes: parse("a", &t.a, doc.outcomes)?,
                settings: parse("x", &t.x, doc.settings)?,
                coeff: t.coeff,
            });
        }
        Self::new(
            doc.name.clone().unwrap_or_else(|| "custom".into()),
            scenario,
            terms,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, WitnessError> {
        let doc: WitnessDoc = serde_json::from_str(text).map_err(|e| WitnessError::Schema {
            path: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::from_doc(&doc)
    }
}
