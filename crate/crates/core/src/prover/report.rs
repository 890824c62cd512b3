use std::fmt::{self, Write as _};

use serde::{Serialize, Serializer};

use crate::models::StatePoint;
use crate::polyalg::Polynomial;
use crate::ratfun::RationalFunction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Proved,
    Refuted,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proved => "proved",
            Status::Refuted => "refuted",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// Both sides evaluated at one state, with
/// `residual = |lhs - rhs| / (1 + |lhs| + |rhs|)`.
#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub model: String,
    pub state: StatePoint,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl Residual {
    pub fn new(model: &str, state: StatePoint, lhs: f64, rhs: f64) -> Self {
        Residual {
            model: model.to_string(),
            state,
            lhs,
            rhs,
            residual: (lhs - rhs).abs() / (1.0 + lhs.abs() + rhs.abs()),
        }
    }
}

/// A numeric evaluation that could not be carried out.
#[derive(Debug, Clone, Serialize)]
pub struct SkippedEval {
    pub model: String,
    pub state: StatePoint,
    pub reason: String,
}

fn as_text<T: fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn as_texts<T: fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub status: Status,
    #[serde(serialize_with = "as_text")]
    pub lhs: RationalFunction,
    #[serde(serialize_with = "as_text")]
    pub rhs: RationalFunction,
    #[serde(serialize_with = "as_text")]
    pub reduced_difference: Polynomial,
    #[serde(serialize_with = "as_texts")]
    pub side_conditions: Vec<Polynomial>,
    pub numeric_residuals: Vec<Residual>,
    pub skipped: Vec<SkippedEval>,
}

impl VerificationReport {
    pub fn max_residual(&self) -> f64 {
        self.numeric_residuals
            .iter()
            .map(|r| r.residual)
            .fold(0.0, f64::max)
    }

    /// Deterministic key/value text.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "identity: {}", self.identity);
        let _ = writeln!(out, "status: {}", self.status);
        let _ = writeln!(out, "lhs: {}", self.lhs);
        let _ = writeln!(out, "rhs: {}", self.rhs);
        let _ = writeln!(out, "reduced_difference: {}", self.reduced_difference);
        let conds: Vec<String> = self
            .side_conditions
            .iter()
            .map(|c| format!("{c} != 0"))
            .collect();
        let _ = writeln!(
            out,
            "side_conditions: {}",
            if conds.is_empty() {
                "none".to_string()
            } else {
                conds.join("; ")
            }
        );
        let _ = writeln!(out, "max_residual: {:e}", self.max_residual());
        let _ = writeln!(out, "residuals:");
        for r in &self.numeric_residuals {
            let _ = writeln!(
                out,
                "  {} at {}: lhs={:.12e} rhs={:.12e} residual={:.3e}",
                r.model, r.state, r.lhs, r.rhs, r.residual
            );
        }
        for s in &self.skipped {
            let _ = writeln!(out, "  {} at {}: skipped ({})", s.model, s.state, s.reason);
        }
        out
    }
}
