//! Symbolic-versus-oracle comparisons over many coded derivatives.
//!
//! A spec whose coordinates are singular at the state has no value there.
//! Both sides must then agree that it is singular; a value on one side and
//! a singularity on the other is a failure.

use serde::Serialize;

use super::{oracle, GasModel, StatePoint};
use crate::derivcalc::DerivSpec;
use crate::par::{self, Execution};
use crate::{Error, Result};

/// One coded derivative evaluated both ways;
/// `deviation = |symbolic - numeric| / (1 + |symbolic|)`.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub spec: String,
    pub symbolic: f64,
    pub numeric: f64,
    pub deviation: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Compared(Comparison),
    /// Both sides report singular coordinates.
    Undefined {
        spec: String,
    },
}

fn symbolic_value(model: &GasModel, spec: &DerivSpec, s: StatePoint) -> Result<f64> {
    let valuation = model.valuation(s)?;
    valuation.check_coordinates(spec)?;
    valuation.eval(&spec.expand()?)
}

fn numeric_value(model: &GasModel, spec: &DerivSpec, s: StatePoint) -> Result<f64> {
    match spec {
        DerivSpec::Triple(t) => oracle::oracle_triple(model, t, s),
        DerivSpec::Jacobian(j) => oracle::oracle_jacobian(model, j, s),
        DerivSpec::Second(d) => oracle::oracle_second(model, d, s),
    }
}

pub fn compare(model: &GasModel, spec: &DerivSpec, s: StatePoint) -> Result<Outcome> {
    match (
        symbolic_value(model, spec, s),
        numeric_value(model, spec, s),
    ) {
        (Ok(symbolic), Ok(numeric)) => Ok(Outcome::Compared(Comparison {
            spec: spec.to_string(),
            symbolic,
            numeric,
            deviation: (symbolic - numeric).abs() / (1.0 + symbolic.abs()),
        })),
        (Err(Error::DegenerateCoordinates(_)), Err(Error::DegenerateCoordinates(_))) => {
            Ok(Outcome::Undefined {
                spec: spec.to_string(),
            })
        }
        (Err(e @ Error::DegenerateCoordinates(_)), Ok(v)) => Err(Error::DegenerateCoordinates(
            format!("{e}; the oracle gives {v:e}"),
        )),
        (Ok(v), Err(e @ Error::DegenerateCoordinates(_))) => Err(Error::DegenerateCoordinates(
            format!("{e}; the symbolic value is {v:e}"),
        )),
        (Err(e), _) | (_, Err(e)) => Err(e),
    }
}

pub fn sweep(
    model: &GasModel,
    specs: &[DerivSpec],
    s: StatePoint,
    exec: Execution,
) -> Vec<Result<Outcome>> {
    par::map(exec, specs, |spec| compare(model, spec, s))
}

/// Summary of a sweep: the worst row plus counts.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub compared: usize,
    pub undefined: Vec<String>,
    pub errors: Vec<String>,
    pub worst: Option<Comparison>,
    pub tolerance: f64,
    pub failures: usize,
}

impl SweepSummary {
    pub fn new(rows: Vec<Result<Outcome>>, tolerance: f64) -> Self {
        let mut summary = SweepSummary {
            compared: 0,
            undefined: Vec::new(),
            errors: Vec::new(),
            worst: None,
            tolerance,
            failures: 0,
        };
        for row in rows {
            match row {
                Ok(Outcome::Compared(c)) => {
                    summary.compared += 1;
                    if !(c.deviation <= tolerance) {
                        summary.failures += 1;
                    }
                    if summary
                        .worst
                        .as_ref()
                        .is_none_or(|w| !(c.deviation <= w.deviation))
                    {
                        summary.worst = Some(c);
                    }
                }
                Ok(Outcome::Undefined { spec }) => summary.undefined.push(spec),
                Err(e) => summary.errors.push(e.to_string()),
            }
        }
        summary
    }

    pub fn pass(&self) -> bool {
        self.failures == 0 && self.errors.is_empty()
    }

    pub fn max_deviation(&self) -> f64 {
        self.worst.as_ref().map_or(0.0, |w| w.deviation)
    }
}
