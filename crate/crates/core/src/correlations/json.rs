//! JSON encodings for behaviors, vertices and decompositions.
//!
//! Sequences are written as digit strings (`"01"` for `x=0, y=1`), so these
//! encodings are limited to at most ten outcomes and settings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::decompose::{Component, ConvexDecomposition};
use super::scenario::{digit_string, parse_digits, Scenario};
use super::vertex::DeterministicVertex;
use super::{Behavior, CorrelationError};

fn schema(path: impl Into<String>, message: impl Into<String>) -> CorrelationError {
    CorrelationError::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn scenario_from(l: usize, r: usize, s: usize) -> Result<Scenario, CorrelationError> {
    let sc = Scenario::new(l, r, s).map_err(|e| schema("L/R/S", e.to_string()))?;
    if r > 10 || s > 10 {
        return Err(schema(
            "R/S",
            "digit-string encoding supports at most 10 values",
        ));
    }
    Ok(sc)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, CorrelationError> {
    serde_json::from_str(text).map_err(|e| {
        schema(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorDoc {
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(rename = "R")]
    pub outcomes: usize,
    #[serde(rename = "S")]
    pub settings: usize,
    pub table: BTreeMap<String, Vec<f64>>,
}

impl Behavior {
    pub fn to_doc(&self) -> BehaviorDoc {
        let s = self.scenario();
        let table = (0..s.setting_sequences())
            .map(|x| (digit_string(&s.setting_sequence(x)), self.block(x).to_vec()))
            .collect();
        BehaviorDoc {
            length: s.length(),
            outcomes: s.outcomes(),
            settings: s.settings(),
            table,
        }
    }

    pub fn from_doc(doc: &BehaviorDoc) -> Result<Self, CorrelationError> {
        let s = scenario_from(doc.length, doc.outcomes, doc.settings)?;
        let mut b = Behavior::zeros(s);
        for x in 0..s.setting_sequences() {
            let key = digit_string(&s.setting_sequence(x));
            let row = doc
                .table
                .get(&key)
                .ok_or_else(|| schema(format!("table.{key}"), "missing setting sequence"))?;
            if row.len() != s.outcome_sequences() {
                return Err(schema(
                    format!("table.{key}"),
                    format!(
                        "expected {} probabilities, found {}",
                        s.outcome_sequences(),
                        row.len()
                    ),
                ));
            }
            b.block_mut(x).copy_from_slice(row);
        }
        if let Some(extra) = doc
            .table
            .keys()
            .find(|k| k.len() != s.length() || parse_digits(k, s.settings()).is_none())
        {
            return Err(schema(format!("table.{extra}"), "not a setting sequence"));
        }
        Ok(b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, CorrelationError> {
        Self::from_doc(&parse_json(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(rename = "R")]
    pub outcomes: usize,
    #[serde(rename = "S")]
    pub settings: usize,
    /// Keys like `"t=2;x=01;a=0"`: level, setting prefix, outcome history.
    pub assignment: BTreeMap<String, usize>,
}

fn context_key(v: &DeterministicVertex, prefix: &[usize]) -> String {
    let t = prefix.len();
    let history = v.run(&prefix[..t - 1]);
    format!(
        "t={t};x={};a={}",
        digit_string(prefix),
        digit_string(&history)
    )
}

impl DeterministicVertex {
    pub fn to_doc(&self) -> VertexDoc {
        let s = self.scenario();
        let assignment = (0..s.contexts())
            .map(|c| {
                let (_, prefix) = s.context_at(c);
                (context_key(self, &prefix), self.assignment()[c])
            })
            .collect();
        VertexDoc {
            length: s.length(),
            outcomes: s.outcomes(),
            settings: s.settings(),
            assignment,
        }
    }

    pub fn from_doc(doc: &VertexDoc) -> Result<Self, CorrelationError> {
        let s = scenario_from(doc.length, doc.outcomes, doc.settings)?;
        // Read by (level, prefix); histories are checked afterwards.
        let mut by_prefix: BTreeMap<Vec<usize>, (String, usize)> = BTreeMap::new();
        for (key, &o) in &doc.assignment {
            let path = format!("assignment.{key}");
            let parts: Vec<&str> = key.split(';').collect();
            let field = |i: usize, name: &str| -> Result<&str, CorrelationError> {
                parts
                    .get(i)
                    .and_then(|p| p.strip_prefix(name))
                    .ok_or_else(|| schema(path.clone(), "expected key of the form t=..;x=..;a=.."))
            };
            let t: usize = field(0, "t=")?
                .parse()
                .map_err(|_| schema(path.clone(), "bad level"))?;
            let prefix = parse_digits(field(1, "x=")?, s.settings())
                .filter(|p| p.len() == t && t >= 1 && t <= s.length())
                .ok_or_else(|| schema(path.clone(), "bad setting prefix"))?;
            if parts.len() != 3 {
                return Err(schema(path, "expected key of the form t=..;x=..;a=.."));
            }
            if o >= s.outcomes() {
                return Err(schema(path, format!("outcome {o} out of range")));
            }
            if by_prefix.insert(prefix, (key.clone(), o)).is_some() {
                return Err(schema(path, "duplicate context"));
            }
        }
        if by_prefix.len() != s.contexts() {
            return Err(schema(
                "assignment",
                format!(
                    "expected {} contexts, found {}",
                    s.contexts(),
                    by_prefix.len()
                ),
            ));
        }
        let mut outcomes = vec![0; s.contexts()];
        for (prefix, (_, o)) in &by_prefix {
            outcomes[s.context_index(prefix)] = *o;
        }
        let v = DeterministicVertex::new(s, outcomes)?;
        for (prefix, (key, _)) in &by_prefix {
            if context_key(&v, prefix) != *key {
                return Err(schema(
                    format!("assignment.{key}"),
                    format!(
                        "outcome history inconsistent; expected {}",
                        context_key(&v, prefix)
                    ),
                ));
            }
        }
        Ok(v)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, CorrelationError> {
        Self::from_doc(&parse_json(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDoc {
    pub weight: f64,
    pub assignment: BTreeMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecompositionDoc {
    #[serde(rename = "L")]
    pub length: usize,
    #[serde(rename = "R")]
    pub outcomes: usize,
    #[serde(rename = "S")]
    pub settings: usize,
    pub components: Vec<ComponentDoc>,
}

impl ConvexDecomposition {
    pub fn to_doc(&self) -> DecompositionDoc {
        let s = self.scenario();
        DecompositionDoc {
            length: s.length(),
            outcomes: s.outcomes(),
            settings: s.settings(),
            components: self
                .components()
                .iter()
                .map(|c| ComponentDoc {
                    weight: c.weight,
                    assignment: c.vertex.to_doc().assignment,
                })
                .collect(),
        }
    }

    pub fn from_doc(doc: &DecompositionDoc) -> Result<Self, CorrelationError> {
        let s = scenario_from(doc.length, doc.outcomes, doc.settings)?;
        let mut components = Vec::with_capacity(doc.components.len());
        for (i, c) in doc.components.iter().enumerate() {
            let vdoc = VertexDoc {
                length: doc.length,
                outcomes: doc.outcomes,
                settings: doc.settings,
                assignment: c.assignment.clone(),
            };
            let vertex = DeterministicVertex::from_doc(&vdoc).map_err(|e| match e {
                CorrelationError::Schema { path, message } => {
                    schema(format!("components[{i}].{path}"), message)
                }
                other => other,
            })?;
            components.push(Component {
                weight: c.weight,
                vertex,
            });
        }
        ConvexDecomposition::new(s, components)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, CorrelationError> {
        Self::from_doc(&parse_json(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlations::decompose_behavior;
    use crate::correlations::vertex::{enumerate_vertices, named_vertex, DEFAULT_VERTEX_CAP};

    #[test]
    fn vertex_keys() {
        let doc = named_vertex("e1").unwrap().to_doc();
        assert_eq!(doc.assignment["t=1;x=0;a="], 0);
        assert_eq!(doc.assignment["t=2;x=01;a=0"], 1);
        assert_eq!(doc.assignment["t=2;x=10;a=0"], 1);
        assert_eq!(doc.assignment.len(), 6);
    }

    #[test]
    fn vertices_round_trip() {
        let s = Scenario::new(2, 3, 3).unwrap();
        for v in enumerate_vertices(&s, DEFAULT_VERTEX_CAP)
            .unwrap()
            .iter()
            .step_by(1001)
        {
            assert_eq!(&DeterministicVertex::from_json(&v.to_json()).unwrap(), v);
        }
    }

    #[test]
    fn inconsistent_history_rejected() {
        let mut doc = named_vertex("e1").unwrap().to_doc();
        let o = doc.assignment.remove("t=2;x=01;a=0").unwrap();
        doc.assignment.insert("t=2;x=01;a=1".into(), o);
        match DeterministicVertex::from_doc(&doc) {
            Err(CorrelationError::Schema { path, .. }) => {
                assert_eq!(path, "assignment.t=2;x=01;a=1")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn behavior_and_decomposition_round_trip() {
        let e1 = named_vertex("e1").unwrap().behavior();
        let e3 = named_vertex("e3").unwrap().behavior();
        let b = e1
            .mix(0.3, &e3)
            .unwrap()
            .mix(0.8, &Behavior::uniform(Scenario::simplest()))
            .unwrap();
        assert_eq!(Behavior::from_json(&b.to_json()).unwrap(), b);
        let d = decompose_behavior(&b, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(ConvexDecomposition::from_json(&d.to_json()).unwrap(), d);
    }

    #[test]
    fn behavior_schema_errors() {
        let text = r#"{"L":1,"R":2,"S":2,"table":{"0":[1.0,0.0]}}"#;
        match Behavior::from_json(text) {
            Err(CorrelationError::Schema { path, .. }) => assert_eq!(path, "table.1"),
            other => panic!("unexpected {other:?}"),
        }
        let text = r#"{"L":1,"R":2,"S":2,"table":{"0":[1.0,0.0],"1":[1.0]}}"#;
        assert!(matches!(
            Behavior::from_json(text),
            Err(CorrelationError::Schema { .. })
        ));
    }
}
