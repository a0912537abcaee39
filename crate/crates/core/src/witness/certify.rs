use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::bounds::{
    c3_bound, epsilon_cap, epsilon_lower_bound, B2_CAP, B2_CONJECTURED, B4_CAP, C1,
};
use super::functional::{builtin_functionals, evaluate};
use super::WitnessError;
use crate::correlations::{check_membership, Behavior, CorrelationError, Scenario};
use crate::text::format_significant;
use crate::tol;

/// Values above the qubit bound by more than this count as violations.
pub const EXCEED_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    QubitCompatible,
    DimensionAboveTwo,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::QubitCompatible => "qubit-compatible",
            Verdict::DimensionAboveTwo => "dimension > 2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundStatus {
    /// The qubit maximum itself is known.
    Exact,
    /// Only a proven cap is known; the qubit maximum is believed lower.
    Cap,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub name: String,
    pub value: f64,
    /// Proven qubit bound used for the verdict and the epsilon bound.
    pub bound: f64,
    pub bound_status: BoundStatus,
    pub verdict: Verdict,
    pub epsilon_lower_bound: f64,
    pub epsilon_cap: f64,
    /// Numerically supported qubit maximum, when only a cap is proven.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjectured_bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exceeds_conjectured: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub exceed: f64,
    pub membership: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub witnesses: Vec<WitnessReport>,
    /// `dimension-above-two` when any witness exceeds its proven bound.
    pub verdict: Verdict,
    /// Largest of the per-witness epsilon lower bounds.
    pub epsilon_lower_bound: f64,
    pub tolerances: Tolerances,
}

/// Evaluates `B1..B4` on a `(2,2,2)` behavior and compares them with the
/// qubit bounds. `B1` and `B3` use their exact qubit maxima; `B2` and `B4`
/// use the proven caps 3.5 and `2 + sqrt 2`, with the numerically supported
/// maxima reported alongside.
pub fn certify(b: &Behavior) -> Result<CertificationReport, WitnessError> {
    if *b.scenario() != Scenario::simplest() {
        return Err(WitnessError::ScenarioMismatch);
    }
    let report = check_membership(b);
    if !report.is_member() {
        return Err(CorrelationError::NotAMember {
            violations: report.violations.len(),
            first: report.violations[0].to_string(),
        }
        .into());
    }
    let c3 = c3_bound()?.value;
    let bounds = [
        (C1, BoundStatus::Exact, None),
        (B2_CAP, BoundStatus::Cap, Some(B2_CONJECTURED)),
        (c3, BoundStatus::Exact, None),
        (B4_CAP, BoundStatus::Cap, Some(c3)),
    ];
    let witnesses: Vec<WitnessReport> = builtin_functionals()
        .iter()
        .zip(bounds)
        .map(|(f, (bound, bound_status, conjectured))| {
            let value = evaluate(f, b)?;
            let verdict = if value > bound + EXCEED_TOL {
                Verdict::DimensionAboveTwo
            } else {
                Verdict::QubitCompatible
            };
            Ok(WitnessReport {
                name: f.name().to_string(),
                value,
                bound,
                bound_status,
                verdict,
                epsilon_lower_bound: epsilon_lower_bound(value, bound),
                epsilon_cap: epsilon_cap(bound),
                conjectured_bound: conjectured,
                exceeds_conjectured: conjectured.map(|c| value > c + EXCEED_TOL),
            })
        })
        .collect::<Result<_, WitnessError>>()?;
    let verdict = if witnesses
        .iter()
        .any(|w| w.verdict == Verdict::DimensionAboveTwo)
    {
        Verdict::DimensionAboveTwo
    } else {
        Verdict::QubitCompatible
    };
    let epsilon_lower_bound = witnesses
        .iter()
        .map(|w| w.epsilon_lower_bound)
        .fold(0.0, f64::max);
    Ok(CertificationReport {
        witnesses,
        verdict,
        epsilon_lower_bound,
        tolerances: Tolerances {
            exceed: EXCEED_TOL,
            membership: tol::BEHAVIOR,
        },
    })
}

impl CertificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Plain-text table, numbers to 12 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<8}{:>16}{:>16}{:>8}{:>20}{:>16}{:>16}",
            "witness", "value", "qubit bound", "kind", "verdict", "eps >=", "eps cap"
        );
        for w in &self.witnesses {
            let kind = match w.bound_status {
                BoundStatus::Exact => "exact",
                BoundStatus::Cap => "cap",
            };
            let _ = writeln!(
                out,
                "{:<8}{:>16}{:>16}{:>8}{:>20}{:>16}{:>16}",
                w.name,
                format_significant(w.value),
                format_significant(w.bound),
                kind,
                w.verdict.label(),
                format_significant(w.epsilon_lower_bound),
                format_significant(w.epsilon_cap),
            );
        }
        for w in &self.witnesses {
            if let (Some(c), Some(ex)) = (w.conjectured_bound, w.exceeds_conjectured) {
                let _ = writeln!(
                    out,
                    "note: {} numerically supported qubit maximum {} ({})",
                    w.name,
                    format_significant(c),
                    if ex { "exceeded" } else { "not exceeded" }
                );
            }
        }
        let _ = writeln!(out, "verdict: {}", self.verdict.label());
        let _ = writeln!(
            out,
            "epsilon >= {}",
            format_significant(self.epsilon_lower_bound)
        );
        out
    }
}
