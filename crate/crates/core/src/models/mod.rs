//! Concrete gas models with closed-form state functions.
//!
//! Each model gives temperature `u = f(x, y)` and entropy `v = g(x, y)` in
//! pressure/volume coordinates together with analytic partials up to second
//! order, normalized so that `f1*g2 - f2*g1 = 1`. The finite-difference
//! oracle in [`oracle`] only ever looks at the values of `u` and `v`.

// `!(a <= b)` style checks are deliberate: NaN has to fail them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod oracle;
mod quadrature;
pub mod sweep;

use std::fmt;

use serde::Serialize;

use crate::derivcalc::DerivSpec;
use crate::par::{self, Execution};
use crate::ratfun::{PrimitiveSymbol, RationalFunction};
use crate::{Error, Result};

pub use quadrature::adaptive_simpson;

/// Tolerance of the synthesis-model quadrature for φ.
pub const QUADRATURE_TOL: f64 = 1e-10;
/// Reference point of φ; only derivatives of φ matter.
pub const QUADRATURE_ORIGIN: f64 = 1.0;
/// Largest |J - 1| tolerated when a synthesis valuation is built.
pub const SYNTHESIS_J_TOL: f64 = 1e-6;
/// Relative cancellation below which a denominator counts as zero.
pub const DEGENERATE_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatePoint {
    pub x: f64,
    pub y: f64,
}

impl StatePoint {
    pub fn new(x: f64, y: f64) -> Self {
        StatePoint { x, y }
    }
}

impl fmt::Display for StatePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Inclusive linear grid from the `"x0:x1:n,y0:y1:m"` syntax, x-major.
pub fn parse_grid(text: &str) -> Result<Vec<StatePoint>> {
    let mut axes = text.split(',');
    let (Some(xs), Some(ys), None) = (axes.next(), axes.next(), axes.next()) else {
        return Err(Error::usage(format!(
            "grid '{text}' is not x0:x1:n,y0:y1:m"
        )));
    };
    let xs = parse_range(xs)?;
    let ys = parse_range(ys)?;
    Ok(grid(&xs, &ys))
}

fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.trim().split(':').collect();
    let bad = || Error::usage(format!("range '{text}' is not start:end:count"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(linspace(a, b, n))
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn grid(xs: &[f64], ys: &[f64]) -> Vec<StatePoint> {
    xs.iter()
        .flat_map(|&x| ys.iter().map(move |&y| StatePoint { x, y }))
        .collect()
}

/// Numeric values of the 14 primitives at one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimitiveValuation {
    pub values: [f64; 14],
}

impl PrimitiveValuation {
    pub fn get(&self, s: PrimitiveSymbol) -> f64 {
        self.values[s.index()]
    }

    /// `f1*g2 - f2*g1`.
    pub fn jacobian(&self) -> f64 {
        use PrimitiveSymbol::*;
        self.get(F1) * self.get(G2) - self.get(F2) * self.get(G1)
    }

    /// Fails when a coordinate pair of `spec` has a numerically vanishing
    /// Jacobian at this state, where the derivative does not exist.
    pub fn check_coordinates(&self, spec: &DerivSpec) -> Result<()> {
        for (a, b) in spec.coordinate_pairs() {
            let det = crate::derivcalc::coordinate_det(a, b);
            let (d, mag) = det.numerator().eval_f64_magnitude(&self.values);
            if !(d.abs() > DEGENERATE_REL * mag) {
                return Err(Error::DegenerateCoordinates(format!(
                    "coordinates ({a},{b}) of {spec} are singular here (det {d:e})"
                )));
            }
        }
        Ok(())
    }

    /// Evaluates a rational function. A denominator that cancels to below
    /// `DEGENERATE_REL` times the sum of its absolute terms is treated as a
    /// degenerate coordinate change.
    pub fn eval(&self, rf: &RationalFunction) -> Result<f64> {
        let n = rf.numerator().eval_f64(&self.values);
        let (d, mag) = rf.denominator().eval_f64_magnitude(&self.values);
        if !(d.abs() > DEGENERATE_REL * mag) {
            return Err(Error::DegenerateCoordinates(format!(
                "denominator of {rf} evaluates to {d:e}"
            )));
        }
        Ok(n / d)
    }
}

/// Polynomial γ(w) = c0 + c1 w + c2 w² + ... for the synthesis model.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaFn {
    coeffs: Vec<f64>,
}

impl GammaFn {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::usage("gamma function needs finite coefficients"));
        }
        Ok(GammaFn { coeffs })
    }

    pub fn constant(gamma: f64) -> Self {
        GammaFn {
            coeffs: vec![gamma],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// (γ, γ', γ'') at `w`.
    pub fn eval(&self, w: f64) -> (f64, f64, f64) {
        let (mut p, mut d1, mut d2) = (0.0, 0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            d2 = d2 * w + 2.0 * d1;
            d1 = d1 * w + p;
            p = p * w + c;
        }
        (p, d1, d2)
    }

    /// φ'(w) = 1/(γ(w) - 1), or a domain error where γ ≤ 1.
    fn phi_prime(&self, w: f64) -> Result<f64> {
        let g = self.eval(w).0;
        if !(g > 1.0) {
            return Err(Error::Domain(format!("gamma({w}) = {g} is not > 1")));
        }
        Ok(1.0 / (g - 1.0))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    Ideal { gamma: f64 },
    VanDerWaals { a: f64, b: f64, gamma: f64 },
    Synthesis { gamma: GammaFn, a: f64, b: f64 },
}

/// A gas model with its own temperature/entropy gauge.
#[derive(Debug, Clone, PartialEq)]
pub struct GasModel {
    name: String,
    kind: ModelKind,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 1.0 {
        Ok(())
    } else {
        Err(Error::usage(format!("gamma must be > 1, got {gamma}")))
    }
}

fn check_ab(a: f64, b: f64) -> Result<()> {
    if a.is_finite() && b.is_finite() && a >= 0.0 && b >= 0.0 {
        Ok(())
    } else {
        Err(Error::usage(format!(
            "need a >= 0 and b >= 0, got a={a}, b={b}"
        )))
    }
}

impl GasModel {
    /// `u = x y`, `v = (ln x + γ ln y)/(γ - 1)`.
    pub fn ideal_gas(gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        Ok(GasModel {
            name: format!("ideal(gamma={})", fmt_num(gamma)),
            kind: ModelKind::Ideal { gamma },
        })
    }

    /// With `P = x + a/y²`, `Q = y - b`: `u = P Q`,
    /// `v = (ln P + γ ln Q)/(γ - 1)`.
    pub fn van_der_waals(a: f64, b: f64, gamma: f64) -> Result<Self> {
        check_gamma(gamma)?;
        check_ab(a, b)?;
        Ok(GasModel {
            name: format!(
                "vdw(a={},b={},gamma={})",
                fmt_num(a),
                fmt_num(b),
                fmt_num(gamma)
            ),
            kind: ModelKind::VanDerWaals { a, b, gamma },
        })
    }

    /// With `w = (x + a/y²)(y - b)`: `u = φ(w)` where `φ' = 1/(γ(w) - 1)`
    /// and `φ(1) = 0`, and `v = (γ(w) - 1) ln(y - b)`. `a = b = 0` is the
    /// Feynman gas.
    pub fn synthesis(gamma: GammaFn, a: f64, b: f64) -> Result<Self> {
        check_ab(a, b)?;
        if gamma.coeffs.len() == 1 && !(gamma.coeffs[0] > 1.0) {
            return Err(Error::Domain(format!(
                "constant gamma {} is not > 1",
                gamma.coeffs[0]
            )));
        }
        let coeffs: Vec<String> = gamma.coeffs.iter().map(|c| fmt_num(*c)).collect();
        Ok(GasModel {
            name: format!(
                "synthesis(gamma=[{}],a={},b={})",
                coeffs.join(","),
                fmt_num(a),
                fmt_num(b)
            ),
            kind: ModelKind::Synthesis { gamma, a, b },
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    /// How the additive and multiplicative freedom in `u`, `v` is fixed.
    pub fn gauge(&self) -> &'static str {
        match self.kind {
            ModelKind::Ideal { .. } => "u = x*y; v = (ln x + gamma ln y)/(gamma-1)",
            ModelKind::VanDerWaals { .. } => "u = w; v = (ln P + gamma ln Q)/(gamma-1)",
            ModelKind::Synthesis { .. } => "u = phi(w), phi(1) = 0; v = (gamma(w)-1) ln(y-b)",
        }
    }

    /// Grid on which the model is routinely checked.
    pub fn default_grid(&self) -> Vec<StatePoint> {
        match self.kind {
            ModelKind::VanDerWaals { .. } => grid(&linspace(1.5, 4.0, 5), &linspace(1.0, 3.0, 5)),
            _ => grid(&linspace(1.0, 3.0, 5), &linspace(1.0, 3.0, 5)),
        }
    }

    pub fn check_domain(&self, s: StatePoint) -> Result<()> {
        let bad = |why: &str| Err(Error::Domain(format!("{} at {s}: {why}", self.name)));
        if !(s.x.is_finite() && s.y.is_finite()) {
            return bad("non-finite coordinate");
        }
        match &self.kind {
            ModelKind::Ideal { .. } => {
                if !(s.x > 0.0 && s.y > 0.0) {
                    return bad("need x > 0 and y > 0");
                }
            }
            ModelKind::VanDerWaals { a, b, .. } | ModelKind::Synthesis { a, b, .. } => {
                if !(s.y > *b && s.y > 0.0) {
                    return bad("need y > b");
                }
                if !(s.x + a / (s.y * s.y) > 0.0) {
                    return bad("need x + a/y^2 > 0");
                }
            }
        }
        Ok(())
    }

    /// Values of `u` and `v` only.
    pub fn state_functions(&self, s: StatePoint) -> Result<(f64, f64)> {
        self.check_domain(s)?;
        Ok(match &self.kind {
            ModelKind::Ideal { gamma } => {
                (s.x * s.y, (s.x.ln() + gamma * s.y.ln()) / (gamma - 1.0))
            }
            ModelKind::VanDerWaals { a, b, gamma } => {
                let p = s.x + a / (s.y * s.y);
                let q = s.y - b;
                (p * q, (p.ln() + gamma * q.ln()) / (gamma - 1.0))
            }
            ModelKind::Synthesis { gamma, a, b } => {
                let w = (s.x + a / (s.y * s.y)) * (s.y - b);
                let u = self.phi(gamma, w)?;
                (u, (gamma.eval(w).0 - 1.0) * (s.y - b).ln())
            }
        })
    }

    fn phi(&self, gamma: &GammaFn, w: f64) -> Result<f64> {
        if gamma.coeffs.len() == 1 {
            return Ok((w - QUADRATURE_ORIGIN) * gamma.phi_prime(w)?);
        }
        adaptive_simpson(
            &|t| gamma.phi_prime(t),
            QUADRATURE_ORIGIN,
            w,
            QUADRATURE_TOL,
        )
    }

    /// f, g and their analytic partials up to second order.
    pub fn valuation(&self, s: StatePoint) -> Result<PrimitiveValuation> {
        self.check_domain(s)?;
        let (x, y) = (s.x, s.y);
        // [f, f1, f2, f11, f12, f22] and the same for g
        let (fv, gv): ([f64; 6], [f64; 6]) = match &self.kind {
            ModelKind::Ideal { gamma } => {
                let k = 1.0 / (gamma - 1.0);
                (
                    [x * y, y, x, 0.0, 1.0, 0.0],
                    [
                        k * (x.ln() + gamma * y.ln()),
                        k / x,
                        k * gamma / y,
                        -k / (x * x),
                        0.0,
                        -k * gamma / (y * y),
                    ],
                )
            }
            ModelKind::VanDerWaals { a, b, gamma } => {
                let k = 1.0 / (gamma - 1.0);
                let p = x + a / (y * y);
                let py = -2.0 * a / (y * y * y);
                let pyy = 6.0 * a / (y * y * y * y);
                let q = y - b;
                (
                    [p * q, q, py * q + p, 0.0, 1.0, pyy * q + 2.0 * py],
                    [
                        k * (p.ln() + gamma * q.ln()),
                        k / p,
                        k * (py / p + gamma / q),
                        -k / (p * p),
                        -k * py / (p * p),
                        k * (pyy / p - py * py / (p * p) - gamma / (q * q)),
                    ],
                )
            }
            ModelKind::Synthesis { gamma, a, b } => {
                let p = x + a / (y * y);
                let py = -2.0 * a / (y * y * y);
                let pyy = 6.0 * a / (y * y * y * y);
                let q = y - b;
                let w = p * q;
                let (wx, wy) = (q, py * q + p);
                let (wxx, wxy, wyy) = (0.0, 1.0, pyy * q + 2.0 * py);
                let (gm, g1, g2) = gamma.eval(w);
                let d1 = gamma.phi_prime(w)?;
                let d2 = -g1 * d1 * d1;
                let u = self.phi(gamma, w)?;
                let l = q.ln();
                let (ly, lyy) = (1.0 / q, -1.0 / (q * q));
                (
                    [
                        u,
                        d1 * wx,
                        d1 * wy,
                        d2 * wx * wx + d1 * wxx,
                        d2 * wx * wy + d1 * wxy,
                        d2 * wy * wy + d1 * wyy,
                    ],
                    [
                        (gm - 1.0) * l,
                        g1 * wx * l,
                        g1 * wy * l + (gm - 1.0) * ly,
                        g2 * wx * wx * l + g1 * wxx * l,
                        g2 * wx * wy * l + g1 * wxy * l + g1 * wx * ly,
                        g2 * wy * wy * l + g1 * wyy * l + 2.0 * g1 * wy * ly + (gm - 1.0) * lyy,
                    ],
                )
            }
        };
        let v = PrimitiveValuation {
            values: [
                x, y, fv[0], gv[0], fv[1], fv[2], gv[1], gv[2], fv[3], fv[4], fv[5], gv[3], gv[4],
                gv[5],
            ],
        };
        if let ModelKind::Synthesis { .. } = self.kind {
            let j = v.jacobian();
            if !((j - 1.0).abs() <= SYNTHESIS_J_TOL) {
                return Err(Error::Domain(format!(
                    "{}: Jacobian {j} at {s} is not 1",
                    self.name
                )));
            }
        }
        Ok(v)
    }

    /// Evaluates an expanded quantity at a state.
    pub fn eval_quantity(&self, rf: &RationalFunction, s: StatePoint) -> Result<f64> {
        self.valuation(s)?.eval(rf)
    }
}

fn fmt_num(v: f64) -> String {
    // short forms for the common rational parameters
    for den in [1.0, 2.0, 3.0, 4.0, 5.0] {
        let n = v * den;
        if (n - n.round()).abs() < 1e-12 && n.abs() < 1e9 {
            return if den == 1.0 {
                format!("{}", n.round())
            } else {
                format!("{}/{}", n.round(), den)
            };
        }
    }
    format!("{v}")
}

impl fmt::Display for GasModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Outcome of a Maxwell-constraint check over a set of states.
#[derive(Debug, Clone, Serialize)]
pub struct JacobianReport {
    pub model: String,
    pub states: usize,
    /// max |f1 g2 - f2 g1 - 1| from the analytic partials
    pub max_deviation: f64,
    pub worst_state: Option<StatePoint>,
    /// the same quantity from finite differences of u and v alone
    pub max_deviation_fd: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn check_jacobian(
    model: &GasModel,
    states: &[StatePoint],
    tol: f64,
    exec: Execution,
) -> Result<JacobianReport> {
    let rows = par::map(exec, states, |&s| -> Result<(f64, f64)> {
        let analytic = (model.valuation(s)?.jacobian() - 1.0).abs();
        let g = oracle::Gradients::at(model, s)?;
        let fd = (g.det(
            crate::derivcalc::QuantityCode::T,
            crate::derivcalc::QuantityCode::S,
        ) - 1.0)
            .abs();
        Ok((analytic, fd))
    });
    let mut max_dev = 0.0f64;
    let mut max_fd = 0.0f64;
    let mut worst = None;
    for (row, s) in rows.into_iter().zip(states) {
        let (a, fd) = row?;
        if a > max_dev || worst.is_none() {
            max_dev = max_dev.max(a);
            worst = Some(*s);
        }
        max_fd = max_fd.max(fd);
    }
    Ok(JacobianReport {
        model: model.name.clone(),
        states: states.len(),
        max_deviation: max_dev,
        worst_state: worst,
        max_deviation_fd: max_fd,
        tolerance: tol,
        pass: max_dev <= tol,
    })
}
