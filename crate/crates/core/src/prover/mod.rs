//! Identity proving by reduction modulo the Maxwell-constraint ideal.
//!
//! An identity `lhs = rhs` is proved when the numerator of `lhs - rhs`
//! (after cross-multiplying) lies in the ideal generated by
//! `M = f1*g2 - f2*g1 - 1` and its two total derivatives. Reduction is
//! sound but not complete, so failure to reduce to zero is only a refutation
//! when the numeric gas models disagree as well.

mod discovery;
mod report;

use std::fmt;
use std::sync::LazyLock;

use serde::Serialize;

pub use discovery::{
    builtin_reference_basis, builtin_system, discover, DISCOVERY_REFERENCE, DISCOVERY_RELATIONS,
};
pub use report::{Residual, SkippedEval, Status, VerificationReport};

use crate::cli::expr::{self, BinOp, Expression};
use crate::derivcalc::{DerivTriple, QuantityCode};
use crate::models::{GasModel, StatePoint};
use crate::par::{self, Execution};
use crate::polyalg::{buchberger, GroebnerBasis, MonomialOrder, Polynomial};
use crate::ratfun::{Axis, PrimitiveSymbol, RationalFunction};
use crate::{Error, Result};

/// Scaled residual above which numerics refute an identity.
pub const REFUTATION_THRESHOLD: f64 = 1e-6;
/// Scaled residual below which numerics confirm a proved identity.
pub const CONFIRMATION_THRESHOLD: f64 = 1e-8;

/// `M`, its prolongations `MX`, `MY` and their reduced grlex basis.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    m: Polynomial,
    mx: Polynomial,
    my: Polynomial,
    basis: GroebnerBasis,
}

static SHARED: LazyLock<ConstraintSystem> = LazyLock::new(ConstraintSystem::new);

impl ConstraintSystem {
    pub fn new() -> Self {
        use PrimitiveSymbol::*;
        let p = |s: PrimitiveSymbol| s.poly();
        let one = Polynomial::one(crate::ratfun::primitive_vars());
        let m = &(&(&p(F1) * &p(G2)) - &(&p(F2) * &p(G1))) - &one;
        let mx = &(&(&p(F11) * &p(G2)) + &(&p(F1) * &p(G12)))
            - &(&(&p(F12) * &p(G1)) + &(&p(F2) * &p(G11)));
        let my = &(&(&p(F12) * &p(G2)) + &(&p(F1) * &p(G22)))
            - &(&(&p(F22) * &p(G1)) + &(&p(F2) * &p(G12)));
        assert_eq!(
            crate::ratfun::poly_total_derivative(&m, Axis::X).as_ref(),
            Ok(&mx),
            "MX is the x-prolongation of M"
        );
        assert_eq!(
            crate::ratfun::poly_total_derivative(&m, Axis::Y).as_ref(),
            Ok(&my),
            "MY is the y-prolongation of M"
        );
        let basis = buchberger(&[m.clone(), mx.clone(), my.clone()], MonomialOrder::Grlex)
            .expect("nonzero generators");
        ConstraintSystem { m, mx, my, basis }
    }

    /// Process-wide instance; the basis is computed on first use.
    pub fn shared() -> &'static ConstraintSystem {
        &SHARED
    }

    /// No side relations at all: proofs must hold identically.
    pub fn unconstrained() -> Self {
        let vars = crate::ratfun::primitive_vars();
        ConstraintSystem {
            m: Polynomial::zero(vars),
            mx: Polynomial::zero(vars),
            my: Polynomial::zero(vars),
            basis: GroebnerBasis::from_parts(Vec::new(), MonomialOrder::Grlex, true),
        }
    }

    pub fn m(&self) -> &Polynomial {
        &self.m
    }

    pub fn mx(&self) -> &Polynomial {
        &self.mx
    }

    pub fn my(&self) -> &Polynomial {
        &self.my
    }

    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn reduce_poly(&self, p: &Polynomial) -> Polynomial {
        self.basis.reduce(p)
    }

    /// Reduces numerator and denominator separately and renormalizes.
    pub fn reduce(&self, rf: &RationalFunction) -> Result<RationalFunction> {
        let den = self.reduce_poly(rf.denominator());
        if den.is_zero() {
            return Err(Error::DegenerateCoordinates(format!(
                "denominator of {rf} vanishes modulo the constraint ideal"
            )));
        }
        RationalFunction::new(self.reduce_poly(rf.numerator()), den)
    }

    /// True when `a` and `b` agree modulo the ideal.
    pub fn equivalent(&self, a: &RationalFunction, b: &RationalFunction) -> bool {
        self.reduce_poly(&cross_difference(a, b)).is_zero()
    }
}

impl Default for ConstraintSystem {
    fn default() -> Self {
        Self::new()
    }
}

/// `a.num * b.den - b.num * a.den`.
pub fn cross_difference(a: &RationalFunction, b: &RationalFunction) -> Polynomial {
    &(a.numerator() * b.denominator()) - &(b.numerator() * a.denominator())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedQuantity {
    Cv,
    Cp,
    Gamma,
    CpMinusCv,
}

impl NamedQuantity {
    pub fn name(self) -> &'static str {
        match self {
            NamedQuantity::Cv => "cv",
            NamedQuantity::Cp => "cp",
            NamedQuantity::Gamma => "gamma",
            NamedQuantity::CpMinusCv => "cp_minus_cv",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Self::Cv, Self::Cp, Self::Gamma, Self::CpMinusCv]
            .into_iter()
            .find(|q| q.name() == name)
    }
}

impl std::str::FromStr for NamedQuantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s).ok_or_else(|| Error::usage(format!("unknown quantity '{s}'")))
    }
}

/// Heat capacities and their combinations as expressions:
/// `cv = T*D(4,3,2)`, `cp = T*D(4,3,1)`, `gamma = cp/cv`,
/// `cp_minus_cv = cp - cv`.
pub fn named_quantity(q: NamedQuantity) -> Expression {
    let t = || Expression::Value(QuantityCode::T);
    let heat = |c: u8| {
        Expression::binary(
            BinOp::Mul,
            t(),
            Expression::Triple(DerivTriple::from_codes(4, 3, c).expect("valid")),
        )
    };
    match q {
        NamedQuantity::Cv => heat(2),
        NamedQuantity::Cp => heat(1),
        NamedQuantity::Gamma => Expression::binary(
            BinOp::Div,
            Expression::Quantity(NamedQuantity::Cp),
            Expression::Quantity(NamedQuantity::Cv),
        ),
        NamedQuantity::CpMinusCv => Expression::binary(
            BinOp::Sub,
            Expression::Quantity(NamedQuantity::Cp),
            Expression::Quantity(NamedQuantity::Cv),
        ),
    }
}

pub fn named_quantity_by_name(name: &str) -> Result<Expression> {
    Ok(named_quantity(name.parse()?))
}

/// `lhs = rhs` with a free-text label.
#[derive(Debug, Clone, PartialEq)]
pub struct Identity {
    pub lhs: Expression,
    pub rhs: Expression,
    pub label: String,
}

impl Identity {
    pub fn new(lhs: Expression, rhs: Expression, label: impl Into<String>) -> Self {
        Identity {
            lhs,
            rhs,
            label: label.into(),
        }
    }

    /// Parses `"LHS = RHS"`; error positions refer to the whole line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.splitn(2, '=');
        let lhs_text = parts.next().unwrap_or("");
        let Some(rhs_text) = parts.next() else {
            return Err(Error::parse(text.chars().count() + 1, "expected '='"));
        };
        if let Some(i) = rhs_text.find('=') {
            let pos = lhs_text.chars().count() + 1 + rhs_text[..i].chars().count();
            return Err(Error::parse(pos + 1, "more than one '='"));
        }
        let lhs = expr::parse_at(lhs_text, 0)?;
        let rhs = expr::parse_at(rhs_text, lhs_text.chars().count() + 1)?;
        Ok(Identity {
            lhs,
            rhs,
            label: text.trim().to_string(),
        })
    }

    pub fn swapped(&self) -> Identity {
        Identity {
            lhs: self.rhs.clone(),
            rhs: self.lhs.clone(),
            label: format!("{} = {}", self.rhs, self.lhs),
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Parses an identity file: one `LHS = RHS` per line, `#` comments.
pub fn parse_identity_file(text: &str) -> Result<Vec<Identity>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            (!line.is_empty()).then(|| {
                Identity::parse(line).map_err(|e| match e {
                    Error::Parse { position, message } => {
                        Error::parse(position, format!("line {}: {message}", i + 1))
                    }
                    other => other,
                })
            })
        })
        .collect()
}

/// Verifies one identity: symbolic reduction first, then a residual table
/// over every `(model, state)` pair.
pub fn verify(
    id: &Identity,
    cs: &ConstraintSystem,
    models: &[GasModel],
    states: &[StatePoint],
) -> Result<VerificationReport> {
    let lhs = id.lhs.expand_with_conditions()?;
    let rhs = id.rhs.expand_with_conditions()?;

    let mut side_conditions: Vec<Polynomial> = Vec::new();
    for c in lhs.side_conditions.iter().chain(&rhs.side_conditions) {
        let reduced = cs.reduce_poly(c);
        if reduced.is_zero() {
            return Err(Error::DegenerateCoordinates(format!(
                "denominator {c} vanishes modulo the constraint ideal"
            )));
        }
        if reduced.as_constant().is_none() && !side_conditions.contains(&reduced) {
            side_conditions.push(reduced);
        }
    }

    let difference = cross_difference(&lhs.value, &rhs.value);
    let reduced_difference = cs.reduce_poly(&difference);

    let mut residuals = Vec::new();
    let mut skipped = Vec::new();
    for model in models {
        for &state in states {
            let vals = model
                .valuation(state)
                .and_then(|v| Ok((v.eval(&lhs.value)?, v.eval(&rhs.value)?)));
            match vals {
                Ok((l, r)) => residuals.push(Residual::new(model.name(), state, l, r)),
                Err(e) => skipped.push(SkippedEval {
                    model: model.name().to_string(),
                    state,
                    reason: e.to_string(),
                }),
            }
        }
    }

    let status = if reduced_difference.is_zero() {
        Status::Proved
    } else if residuals.iter().any(|r| r.residual > REFUTATION_THRESHOLD) {
        Status::Refuted
    } else {
        Status::Inconclusive
    };

    Ok(VerificationReport {
        identity: if id.label.is_empty() {
            id.to_string()
        } else {
            id.label.clone()
        },
        status,
        lhs: lhs.value,
        rhs: rhs.value,
        reduced_difference,
        side_conditions,
        numeric_residuals: residuals,
        skipped,
    })
}

/// Verifies a batch; results come back in input order.
pub fn verify_batch(
    ids: &[Identity],
    cs: &ConstraintSystem,
    models: &[GasModel],
    states: &[StatePoint],
    exec: Execution,
) -> Vec<Result<VerificationReport>> {
    par::map(exec, ids, |id| verify(id, cs, models, states))
}

/// The four Maxwell relations.
pub fn maxwell_relations() -> Vec<Identity> {
    [
        ("D(3,1,4)", "D(2,4,1)"),
        ("D(3,2,4)", "-D(1,4,2)"),
        ("D(4,2,3)", "D(1,3,2)"),
        ("D(4,1,3)", "-D(2,3,1)"),
    ]
    .into_iter()
    .map(|(l, r)| {
        Identity::new(
            expr::parse(l).expect("static"),
            expr::parse(r).expect("static"),
            format!("{l} = {r}"),
        )
    })
    .collect()
}

/// Default models for numeric cross-checks.
pub fn default_models() -> Vec<GasModel> {
    vec![
        GasModel::ideal_gas(5.0 / 3.0).expect("valid"),
        GasModel::ideal_gas(7.0 / 5.0).expect("valid"),
        GasModel::van_der_waals(1.0, 0.5, 7.0 / 5.0).expect("valid"),
    ]
}

/// 3×3 grid inside the domain of every default model.
pub fn default_states() -> Vec<StatePoint> {
    crate::models::grid(
        &crate::models::linspace(1.5, 4.0, 3),
        &crate::models::linspace(1.0, 3.0, 3),
    )
}

/// `gamma` at a state next to the reciprocal form `f2*g1/(f1*g2)`.
#[derive(Debug, Clone, Serialize)]
pub struct GammaCheck {
    pub model: String,
    pub state: StatePoint,
    pub gamma: f64,
    pub reciprocal_form: f64,
}

pub fn gamma_check(model: &GasModel, states: &[StatePoint]) -> Result<Vec<GammaCheck>> {
    use PrimitiveSymbol::*;
    let gamma = named_quantity(NamedQuantity::Gamma).expand()?;
    let s = RationalFunction::symbol;
    let reciprocal = s(F2).mul(&s(G1)).div(&s(F1).mul(&s(G2)))?;
    states
        .iter()
        .map(|&state| {
            let v = model.valuation(state)?;
            Ok(GammaCheck {
                model: model.name().to_string(),
                state,
                gamma: v.eval(&gamma)?,
                reciprocal_form: v.eval(&reciprocal)?,
            })
        })
        .collect()
}
