//! Finite-difference oracle for coded derivatives.
//!
//! Works only from the values of `u` and `v`: no base-partial table, no
//! symbolic algebra. Energy functions enter through their one-forms
//!
//! ```text
//! dE13 = -v du + y dx    dE14 = u dv + y dx
//! dE23 = -v du - x dy    dE24 = u dv - x dy
//! ```
//!
//! integrated along straight segments from the base point with a
//! Stieltjes trapezoid rule.

use crate::derivcalc::{DerivTriple, JacobianSpec, QuantityCode, SecondDerivSpec};
use crate::{Error, Result};

use super::{GasModel, StatePoint};

/// Substeps of the trapezoid rule on each integration segment.
const SEGMENT_STEPS: usize = 4;
/// Relative size below which a numeric Jacobian counts as singular:
/// `|det| <= SINGULAR_REL * (|a_x b_y| + |a_y b_x|)`.
pub const SINGULAR_REL: f64 = 1e-8;

/// Central-difference step for first derivatives: ε^(1/3)·max(1, |c|).
pub fn step(coord: f64) -> f64 {
    f64::EPSILON.cbrt() * coord.abs().max(1.0)
}

/// Step for differencing a quantity that is itself a finite-difference
/// estimate: ε^(1/5)·max(1, |c|), so the inner noise is not amplified.
pub fn outer_step(coord: f64) -> f64 {
    f64::EPSILON.powf(0.2) * coord.abs().max(1.0)
}

/// One central difference refined by a single Richardson step.
pub fn richardson<F>(h: f64, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let d = |f: &mut F, h: f64| -> Result<f64> { Ok((f(h)? - f(-h)?) / (2.0 * h)) };
    let coarse = d(&mut f, h)?;
    let fine = d(&mut f, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Values of all eight quantities near a base point; energies are measured
/// from their value at the base point.
struct LocalField<'a> {
    model: &'a GasModel,
    base: StatePoint,
    base_uv: (f64, f64),
}

impl<'a> LocalField<'a> {
    fn new(model: &'a GasModel, base: StatePoint) -> Result<Self> {
        Ok(LocalField {
            model,
            base,
            base_uv: model.state_functions(base)?,
        })
    }

    fn values(&self, p: StatePoint) -> Result<[f64; 8]> {
        let (u, v) = self.model.state_functions(p)?;
        // trapezoid sums of the four one-forms along base -> p
        let mut e = [0.0f64; 4];
        let (mut x0, mut y0) = (self.base.x, self.base.y);
        let (mut u0, mut v0) = self.base_uv;
        for i in 1..=SEGMENT_STEPS {
            let t = i as f64 / SEGMENT_STEPS as f64;
            let (x1, y1) = (
                self.base.x + t * (p.x - self.base.x),
                self.base.y + t * (p.y - self.base.y),
            );
            let (u1, v1) = if i == SEGMENT_STEPS {
                (u, v)
            } else {
                self.model.state_functions(StatePoint::new(x1, y1))?
            };
            let (um, vm) = (0.5 * (u0 + u1), 0.5 * (v0 + v1));
            let (xm, ym) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            let (du, dv, dx, dy) = (u1 - u0, v1 - v0, x1 - x0, y1 - y0);
            e[0] += -vm * du + ym * dx;
            e[1] += um * dv + ym * dx;
            e[2] += -vm * du - xm * dy;
            e[3] += um * dv - xm * dy;
            (x0, y0, u0, v0) = (x1, y1, u1, v1);
        }
        Ok([p.x, p.y, u, v, e[0], e[1], e[2], e[3]])
    }
}

/// Numeric gradients `(∂q/∂x, ∂q/∂y)` of all eight quantities at one state.
#[derive(Debug, Clone, Copy)]
pub struct Gradients {
    pub state: StatePoint,
    grads: [[f64; 2]; 8],
}

impl Gradients {
    pub fn at(model: &GasModel, s: StatePoint) -> Result<Self> {
        let field = LocalField::new(model, s)?;
        let mut grads = [[0.0; 2]; 8];
        for axis in 0..2 {
            let h = step(if axis == 0 { s.x } else { s.y });
            let at = |d: f64| {
                if axis == 0 {
                    StatePoint::new(s.x + d, s.y)
                } else {
                    StatePoint::new(s.x, s.y + d)
                }
            };
            let plus = [field.values(at(h))?, field.values(at(h / 2.0))?];
            let minus = [field.values(at(-h))?, field.values(at(-h / 2.0))?];
            for (k, g) in grads.iter_mut().enumerate() {
                let coarse = (plus[0][k] - minus[0][k]) / (2.0 * h);
                let fine = (plus[1][k] - minus[1][k]) / h;
                g[axis] = (4.0 * fine - coarse) / 3.0;
            }
        }
        Ok(Gradients { state: s, grads })
    }

    pub fn gradient(&self, q: QuantityCode) -> [f64; 2] {
        self.grads[q.value() as usize - 1]
    }

    /// `det ∂(a, b)/∂(x, y)`.
    pub fn det(&self, a: QuantityCode, b: QuantityCode) -> f64 {
        let ga = self.gradient(a);
        let gb = self.gradient(b);
        ga[0] * gb[1] - ga[1] * gb[0]
    }

    /// [`Gradients::det`], or an error when it is zero up to differencing noise.
    pub fn nonsingular_det(&self, a: QuantityCode, b: QuantityCode) -> Result<f64> {
        let ga = self.gradient(a);
        let gb = self.gradient(b);
        let det = ga[0] * gb[1] - ga[1] * gb[0];
        let mag = (ga[0] * gb[1]).abs() + (ga[1] * gb[0]).abs();
        if !(det.abs() > SINGULAR_REL * mag) {
            return Err(Error::DegenerateCoordinates(format!(
                "numeric Jacobian of ({a},{b}) at {} is singular (det {det:e})",
                self.state
            )));
        }
        Ok(det)
    }

    pub fn jacobian(&self, j: &JacobianSpec) -> Result<f64> {
        let den = self.nonsingular_det(j.c, j.d)?;
        Ok(self.det(j.a, j.b) / den)
    }

    /// `(a,b,c) = det ∂(a,c) / det ∂(b,c)`.
    pub fn triple(&self, t: &DerivTriple) -> Result<f64> {
        self.jacobian(&JacobianSpec {
            a: t.a,
            b: t.c,
            c: t.b,
            d: t.c,
        })
    }
}

pub fn oracle_triple(model: &GasModel, t: &DerivTriple, s: StatePoint) -> Result<f64> {
    Gradients::at(model, s)?.triple(t)
}

pub fn oracle_jacobian(model: &GasModel, j: &JacobianSpec, s: StatePoint) -> Result<f64> {
    Gradients::at(model, s)?.jacobian(j)
}

/// `((a,b,c),d,e)`: the inner triple is sampled by [`oracle_triple`] around
/// `s` and differenced again with [`outer_step`].
pub fn oracle_second(model: &GasModel, spec: &SecondDerivSpec, s: StatePoint) -> Result<f64> {
    let center = Gradients::at(model, s)?;
    center.nonsingular_det(spec.inner.b, spec.inner.c)?;
    let den = center.nonsingular_det(spec.d, spec.e)?;
    let phi = |p: StatePoint| oracle_triple(model, &spec.inner, p);
    let phi_x = richardson(outer_step(s.x), |d| phi(StatePoint::new(s.x + d, s.y)))?;
    let phi_y = richardson(outer_step(s.y), |d| phi(StatePoint::new(s.x, s.y + d)))?;
    let ge = center.gradient(spec.e);
    Ok((phi_x * ge[1] - phi_y * ge[0]) / den)
}
