//! JSON encoding of matrices and system models.
//!
//! Matrices are flat row-major arrays of `[re, im]` pairs. A system model is
//! `{ "dim": d, "initial": matrix, "instruments": [ { "kraus": [[matrix, ...], ...] } ] }`
//! with one Kraus list per outcome.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::instrument::{validate_instrument, SystemModel};
use super::state::DensityMatrix;
use super::{ComplexMatrix, QmathError};

pub type MatrixDoc = Vec<[f64; 2]>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstrumentDoc {
    pub kraus: Vec<Vec<MatrixDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemModelDoc {
    pub dim: usize,
    pub initial: MatrixDoc,
    pub instruments: Vec<InstrumentDoc>,
}

pub fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

pub fn matrix_from_doc(
    doc: &MatrixDoc,
    dim: usize,
    path: &str,
) -> Result<ComplexMatrix, QmathError> {
    if doc.len() != dim * dim {
        return Err(QmathError::Schema {
            path: path.to_string(),
            message: format!(
                "expected {} entries for dim {dim}, found {}",
                dim * dim,
                doc.len()
            ),
        });
    }
    let data = doc
        .iter()
        .map(|[re, im]| Complex64::new(*re, *im))
        .collect();
    ComplexMatrix::new(dim, data).map_err(|e| QmathError::Schema {
        path: path.to_string(),
        message: e.to_string(),
    })
}

impl SystemModel {
    pub fn to_doc(&self) -> SystemModelDoc {
        SystemModelDoc {
            dim: self.dim(),
            initial: matrix_to_doc(self.initial().matrix()),
            instruments: self
                .instruments()
                .iter()
                .map(|inst| InstrumentDoc {
                    kraus: inst
                        .kraus_sets()
                        .iter()
                        .map(|set| set.iter().map(matrix_to_doc).collect())
                        .collect(),
                })
                .collect(),
        }
    }

    /// Validates a parsed document; errors carry the offending field path.
    pub fn from_doc(doc: &SystemModelDoc) -> Result<Self, QmathError> {
        let wrap = |path: String| {
            move |e: QmathError| match e {
                e @ QmathError::Schema { .. } => e,
                other => QmathError::Schema {
                    path: path.clone(),
                    message: other.to_string(),
                },
            }
        };
        if doc.dim == 0 {
            return Err(QmathError::Schema {
                path: "dim".into(),
                message: "dimension must be positive".into(),
            });
        }
        let initial = matrix_from_doc(&doc.initial, doc.dim, "initial")?;
        let initial = DensityMatrix::new(initial).map_err(wrap("initial".into()))?;
        let mut instruments = Vec::with_capacity(doc.instruments.len());
        for (s, inst) in doc.instruments.iter().enumerate() {
            let mut sets = Vec::with_capacity(inst.kraus.len());
            for (r, set) in inst.kraus.iter().enumerate() {
                let mut ops = Vec::with_capacity(set.len());
                for (k, m) in set.iter().enumerate() {
                    let path = format!("instruments[{s}].kraus[{r}][{k}]");
                    ops.push(matrix_from_doc(m, doc.dim, &path)?);
                }
                sets.push(ops);
            }
            let inst = validate_instrument(sets).map_err(wrap(format!("instruments[{s}]")))?;
            instruments.push(inst);
        }
        SystemModel::new(initial, instruments).map_err(wrap("instruments".into()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, QmathError> {
        let doc: SystemModelDoc = serde_json::from_str(text).map_err(|e| QmathError::Schema {
            path: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        Self::from_doc(&doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::random::random_system;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip_is_lossless() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for dim in 2..5 {
            let sys = random_system(&mut rng, dim, 2, 3);
            let back = SystemModel::from_json(&sys.to_json()).unwrap();
            assert_eq!(back, sys);
        }
    }

    #[test]
    fn schema_errors_name_the_field() {
        let text = r#"{"dim":2,"initial":[[1,0],[0,0],[0,0],[0,0]],
            "instruments":[{"kraus":[[ [[1,0],[0,0],[0,0]] ]]}]}"#;
        match SystemModel::from_json(text).unwrap_err() {
            QmathError::Schema { path, .. } => assert_eq!(path, "instruments[0].kraus[0][0]"),
            other => panic!("unexpected {other:?}"),
        }
        let text = r#"{"dim":2,"initial":[[1,0],[0,0],[0,0],[0,0]],
            "instruments":[{"kraus":[[ [[1,0],[0,0],[0,0],[0,0]] ]]}]}"#;
        match SystemModel::from_json(text).unwrap_err() {
            QmathError::Schema { path, message } => {
                assert_eq!(path, "instruments[0]");
                assert!(message.contains("trace preserving"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
