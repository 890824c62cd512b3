//! The coded derivative calculus.
//!
//! Quantities are numbered 1..=8 (p, V, T, S, Φ, W, F, E). A triple
//! `(a,b,c)` is ∂a/∂b at constant c, `[a,b;c,d]` is the Jacobian of
//! `(c,d) ↦ (a,b)`, and `((a,b,c),d,e)` differentiates a triple once more.
//! Everything is expressed through the base partials `(a,1,2)`, `(a,2,1)`
//! along the pressure/volume coordinates.

use std::fmt;
use std::sync::LazyLock;

use crate::par::{self, Execution};
use crate::ratfun::{Axis, PrimitiveSymbol, RationalFunction};
use crate::{Error, Result};

/// One of the eight coded quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantityCode(u8);

impl QuantityCode {
    pub const P: QuantityCode = QuantityCode(1);
    pub const V: QuantityCode = QuantityCode(2);
    pub const T: QuantityCode = QuantityCode(3);
    pub const S: QuantityCode = QuantityCode(4);

    const ALIASES: [&'static str; 8] = ["p", "V", "T", "S", "Phi", "W", "F", "E"];

    pub fn new(value: u8) -> Result<Self> {
        if (1..=8).contains(&value) {
            Ok(QuantityCode(value))
        } else {
            Err(Error::usage(format!("quantity code {value} outside 1..8")))
        }
    }

    pub fn all() -> impl Iterator<Item = QuantityCode> + Clone {
        (1..=8).map(QuantityCode)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// The thermodynamic letter: p, V, T, S, Phi, W, F, E.
    pub fn alias(self) -> &'static str {
        Self::ALIASES[self.0 as usize - 1]
    }

    /// Accepts a digit 1..8 or one of the letter aliases.
    pub fn parse(text: &str) -> Option<Self> {
        if let Ok(v) = text.parse::<u8>() {
            return Self::new(v).ok();
        }
        Self::ALIASES
            .iter()
            .position(|a| *a == text)
            .map(|i| QuantityCode(i as u8 + 1))
    }

    pub fn is_energy(self) -> bool {
        self.0 >= 5
    }
}

impl fmt::Display for QuantityCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(a,b,c)`: derivative of `a` with respect to `b` holding `c` fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DerivTriple {
    pub a: QuantityCode,
    pub b: QuantityCode,
    pub c: QuantityCode,
}

impl DerivTriple {
    pub fn new(a: QuantityCode, b: QuantityCode, c: QuantityCode) -> Result<Self> {
        if b == c {
            return Err(Error::usage(format!(
                "coordinates must be distinct in ({a},{b},{c})"
            )));
        }
        Ok(DerivTriple { a, b, c })
    }

    pub fn from_codes(a: u8, b: u8, c: u8) -> Result<Self> {
        Self::new(
            QuantityCode::new(a)?,
            QuantityCode::new(b)?,
            QuantityCode::new(c)?,
        )
    }

    pub fn is_strict(&self) -> bool {
        self.a != self.b && self.a != self.c
    }
}

impl fmt::Display for DerivTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// `[a,b;c,d]`: Jacobian determinant of `(c,d) ↦ (a,b)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JacobianSpec {
    pub a: QuantityCode,
    pub b: QuantityCode,
    pub c: QuantityCode,
    pub d: QuantityCode,
}

impl JacobianSpec {
    pub fn new(a: QuantityCode, b: QuantityCode, c: QuantityCode, d: QuantityCode) -> Result<Self> {
        if c == d {
            return Err(Error::usage(format!(
                "target coordinates must be distinct in [{a},{b};{c},{d}]"
            )));
        }
        Ok(JacobianSpec { a, b, c, d })
    }

    pub fn from_codes(a: u8, b: u8, c: u8, d: u8) -> Result<Self> {
        Self::new(
            QuantityCode::new(a)?,
            QuantityCode::new(b)?,
            QuantityCode::new(c)?,
            QuantityCode::new(d)?,
        )
    }
}

impl fmt::Display for JacobianSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{};{},{}]", self.a, self.b, self.c, self.d)
    }
}

/// `((a,b,c),d,e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SecondDerivSpec {
    pub inner: DerivTriple,
    pub d: QuantityCode,
    pub e: QuantityCode,
}

impl SecondDerivSpec {
    pub fn new(inner: DerivTriple, d: QuantityCode, e: QuantityCode) -> Result<Self> {
        if d == e {
            return Err(Error::usage(format!(
                "coordinates must be distinct in ({inner},{d},{e})"
            )));
        }
        Ok(SecondDerivSpec { inner, d, e })
    }

    pub fn from_codes(a: u8, b: u8, c: u8, d: u8, e: u8) -> Result<Self> {
        Self::new(
            DerivTriple::from_codes(a, b, c)?,
            QuantityCode::new(d)?,
            QuantityCode::new(e)?,
        )
    }
}

impl fmt::Display for SecondDerivSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.inner, self.d, self.e)
    }
}

/// Any coded derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivSpec {
    Triple(DerivTriple),
    Jacobian(JacobianSpec),
    Second(SecondDerivSpec),
}

impl DerivSpec {
    /// Coordinate pairs the spec differentiates against; the value is
    /// defined only where each pair has a nonzero Jacobian.
    pub fn coordinate_pairs(&self) -> Vec<(QuantityCode, QuantityCode)> {
        match self {
            DerivSpec::Triple(t) => vec![(t.b, t.c)],
            DerivSpec::Jacobian(j) => vec![(j.c, j.d)],
            DerivSpec::Second(s) => vec![(s.inner.b, s.inner.c), (s.d, s.e)],
        }
    }

    pub fn expand(&self) -> Result<RationalFunction> {
        match self {
            DerivSpec::Triple(t) => deriv_triple(t),
            DerivSpec::Jacobian(j) => jacobian(j),
            DerivSpec::Second(s) => second_deriv(s),
        }
    }
}

impl fmt::Display for DerivSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DerivSpec::Triple(t) => t.fmt(f),
            DerivSpec::Jacobian(j) => j.fmt(f),
            DerivSpec::Second(s) => s.fmt(f),
        }
    }
}

static BASE_TABLE: LazyLock<Vec<[RationalFunction; 2]>> = LazyLock::new(|| {
    use PrimitiveSymbol::*;
    let s = RationalFunction::symbol;
    let k = RationalFunction::from_int;
    vec![
        // 1 = p = x
        [k(1), k(0)],
        // 2 = V = y
        [k(0), k(1)],
        // 3 = T = u
        [s(F1), s(F2)],
        // 4 = S = v
        [s(G1), s(G2)],
        // 5: dE13 = (y - v f1) dx - f2 v dy
        [s(Y).sub(&s(G).mul(&s(F1))), s(G).mul(&s(F2)).neg()],
        // 6: dE14 = (u g1 + y) dx + u g2 dy
        [s(Y).add(&s(F).mul(&s(G1))), s(F).mul(&s(G2))],
        // 7: dE23 = -v f1 dx + (-x - v f2) dy
        [s(G).mul(&s(F1)).neg(), s(X).neg().sub(&s(G).mul(&s(F2)))],
        // 8: dE24 = u g1 dx + (u g2 - x) dy
        [s(F).mul(&s(G1)), s(X).neg().add(&s(F).mul(&s(G2)))],
    ]
});

/// Base partial `(a,1,2)` for `Axis::X`, `(a,2,1)` for `Axis::Y`.
pub fn base_partial(a: QuantityCode, axis: Axis) -> RationalFunction {
    let row = &BASE_TABLE[a.0 as usize - 1];
    match axis {
        Axis::X => row[0].clone(),
        Axis::Y => row[1].clone(),
    }
}

/// `det ∂(a,b)/∂(x,y)`, a polynomial in the primitives.
pub fn coordinate_det(a: QuantityCode, b: QuantityCode) -> RationalFunction {
    let ax = base_partial(a, Axis::X);
    let ay = base_partial(a, Axis::Y);
    let bx = base_partial(b, Axis::X);
    let by = base_partial(b, Axis::Y);
    ax.mul(&by).sub(&ay.mul(&bx))
}

/// `[a,b;c,d] = det ∂(a,b)/∂(x,y) / det ∂(c,d)/∂(x,y)`.
pub fn jacobian(spec: &JacobianSpec) -> Result<RationalFunction> {
    let den = coordinate_det(spec.c, spec.d);
    if den.is_zero() {
        return Err(Error::DegenerateCoordinates(format!(
            "denominator of {spec} vanishes identically"
        )));
    }
    if spec.a == spec.b {
        return Ok(RationalFunction::zero());
    }
    coordinate_det(spec.a, spec.b).div(&den)
}

/// `(a,b,c) = [a,c;b,c]`.
pub fn deriv_triple(t: &DerivTriple) -> Result<RationalFunction> {
    jacobian(&JacobianSpec {
        a: t.a,
        b: t.c,
        c: t.b,
        d: t.c,
    })
}

/// `((a,b,c),d,e)` by the chain rule: with φ = (a,b,c),
/// `(φ_x (e,2,1) − φ_y (e,1,2)) / ((d,1,2)(e,2,1) − (d,2,1)(e,1,2))`.
pub fn second_deriv(s: &SecondDerivSpec) -> Result<RationalFunction> {
    let den = coordinate_det(s.d, s.e);
    if den.is_zero() {
        return Err(Error::DegenerateCoordinates(format!(
            "denominator of {s} vanishes identically"
        )));
    }
    let phi = deriv_triple(&s.inner)?;
    let phi_x = phi.total_derivative(Axis::X)?;
    let phi_y = phi.total_derivative(Axis::Y)?;
    let num = phi_x
        .mul(&base_partial(s.e, Axis::Y))
        .sub(&phi_y.mul(&base_partial(s.e, Axis::X)));
    num.div(&den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumKind {
    Triples,
    Jacobians,
    Seconds,
}

impl std::str::FromStr for EnumKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triples" => Ok(EnumKind::Triples),
            "jacobians" => Ok(EnumKind::Jacobians),
            "seconds" => Ok(EnumKind::Seconds),
            other => Err(Error::usage(format!(
                "unknown kind '{other}' (expected triples, jacobians or seconds)"
            ))),
        }
    }
}

/// Triples with `a`, `b`, `c` pairwise distinct.
pub fn strict_triples() -> impl Iterator<Item = DerivTriple> + Clone {
    let q = QuantityCode::all();
    q.clone().flat_map(move |a| {
        let q2 = QuantityCode::all();
        QuantityCode::all().flat_map(move |b| {
            q2.clone()
                .filter(move |&c| a != b && a != c && b != c)
                .map(move |c| DerivTriple { a, b, c })
        })
    })
}

/// Jacobians with all four indices pairwise distinct.
pub fn strict_jacobians() -> impl Iterator<Item = JacobianSpec> + Clone {
    strict_triples().flat_map(|t| {
        QuantityCode::all()
            .filter(move |&d| d != t.a && d != t.b && d != t.c)
            .map(move |d| JacobianSpec {
                a: t.a,
                b: t.b,
                c: t.c,
                d,
            })
    })
}

/// Second derivatives over strict inner triples and every ordered pair
/// `d ≠ e`.
pub fn strict_seconds() -> impl Iterator<Item = SecondDerivSpec> + Clone {
    strict_triples().flat_map(|inner| {
        QuantityCode::all().flat_map(move |d| {
            QuantityCode::all()
                .filter(move |&e| e != d)
                .map(move |e| SecondDerivSpec { inner, d, e })
        })
    })
}

/// The count and a fresh stream of the specs of one kind.
pub fn enumerate(kind: EnumKind) -> (usize, Box<dyn Iterator<Item = DerivSpec> + Send>) {
    match kind {
        EnumKind::Triples => (336, Box::new(strict_triples().map(DerivSpec::Triple))),
        EnumKind::Jacobians => (1680, Box::new(strict_jacobians().map(DerivSpec::Jacobian))),
        EnumKind::Seconds => (18_816, Box::new(strict_seconds().map(DerivSpec::Second))),
    }
}

/// Expands a batch of specs, preserving order.
pub fn expand_all(specs: &[DerivSpec], exec: Execution) -> Vec<Result<RationalFunction>> {
    par::map(exec, specs, DerivSpec::expand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use PrimitiveSymbol::*;

    fn s(p: PrimitiveSymbol) -> RationalFunction {
        RationalFunction::symbol(p)
    }

    fn q(v: u8) -> QuantityCode {
        QuantityCode::new(v).unwrap()
    }

    fn triple(a: u8, b: u8, c: u8) -> RationalFunction {
        deriv_triple(&DerivTriple::from_codes(a, b, c).unwrap()).unwrap()
    }

    #[test]
    fn base_partials() {
        assert_eq!(base_partial(q(3), Axis::X), s(F1));
        assert_eq!(base_partial(q(5), Axis::X), s(Y).sub(&s(G).mul(&s(F1))));
        assert!(base_partial(q(1), Axis::Y).is_zero());
        assert_eq!(base_partial(q(8), Axis::Y).to_string(), "f*g2 - x");
    }

    #[test]
    fn jacobian_examples() {
        let j = jacobian(&JacobianSpec::from_codes(3, 4, 1, 2).unwrap()).unwrap();
        assert_eq!(j, s(F1).mul(&s(G2)).sub(&s(F2).mul(&s(G1))));
        let j = jacobian(&JacobianSpec::from_codes(3, 2, 4, 1).unwrap()).unwrap();
        assert_eq!(j, s(F1).div(&s(G2)).unwrap().neg());
        for (a, b) in [(1, 2), (3, 4), (5, 8), (6, 7)] {
            let j = jacobian(&JacobianSpec::from_codes(a, b, a, b).unwrap()).unwrap();
            assert_eq!(j, RationalFunction::one());
        }
        let j = jacobian(&JacobianSpec::from_codes(5, 5, 1, 2).unwrap()).unwrap();
        assert!(j.is_zero());
    }

    #[test]
    fn triple_examples() {
        assert_eq!(triple(3, 1, 2), s(F1));
        assert_eq!(triple(2, 1, 4), s(G1).div(&s(G2)).unwrap().neg());
        assert_eq!(triple(2, 1, 4).to_string(), "-g1 / g2");
        // G2 over the unreduced Jacobian; the prover turns it into G2
        assert_eq!(triple(1, 3, 4).to_string(), "g2 / (f1*g2 - f2*g1)");
        assert_eq!(triple(3, 3, 4), RationalFunction::one());
        assert!(triple(4, 3, 4).is_zero());
    }

    #[test]
    fn tabulated_first_derivatives_without_constraint() {
        // Entries that hold identically (no J = 1 needed).
        assert_eq!(triple(3, 2, 1), s(F2));
        assert_eq!(triple(4, 1, 2), s(G1));
        assert_eq!(triple(4, 2, 1), s(G2));
        assert_eq!(triple(3, 4, 1), s(F2).div(&s(G2)).unwrap());
        assert_eq!(triple(2, 4, 1), s(G2).recip().unwrap());
    }

    #[test]
    fn invalid_specs() {
        assert!(DerivTriple::from_codes(3, 1, 1).is_err());
        assert!(JacobianSpec::from_codes(1, 2, 3, 3).is_err());
        assert!(SecondDerivSpec::from_codes(3, 1, 2, 4, 4).is_err());
        assert!(QuantityCode::new(0).is_err());
        assert!(QuantityCode::new(9).is_err());
    }

    #[test]
    fn aliases() {
        let names = ["p", "V", "T", "S", "Phi", "W", "F", "E"];
        for (i, n) in names.iter().enumerate() {
            assert_eq!(QuantityCode::parse(n), Some(q(i as u8 + 1)));
            assert_eq!(
                QuantityCode::parse(&(i + 1).to_string()),
                Some(q(i as u8 + 1))
            );
        }
        assert_eq!(QuantityCode::parse("G"), None);
    }

    #[test]
    fn second_derivative_examples() {
        let dd = |a, b, c, d, e| {
            second_deriv(&SecondDerivSpec::from_codes(a, b, c, d, e).unwrap()).unwrap()
        };
        assert_eq!(dd(3, 1, 2, 2, 1), s(F12));
        assert_eq!(dd(3, 1, 2, 1, 2), s(F11));
        // ((8,1,2),3,4) over the unreduced Jacobian
        let num = s(F1)
            .mul(&s(G1))
            .add(&s(F).mul(&s(G11)))
            .mul(&s(G2))
            .sub(&s(F2).mul(&s(G1)).add(&s(F).mul(&s(G12))).mul(&s(G1)));
        let j = s(F1).mul(&s(G2)).sub(&s(F2).mul(&s(G1)));
        assert_eq!(dd(8, 1, 2, 3, 4), num.div(&j).unwrap());
    }

    #[test]
    fn no_coordinate_pair_is_symbolically_degenerate() {
        for c in QuantityCode::all() {
            for d in QuantityCode::all().filter(|&d| d != c) {
                assert!(!coordinate_det(c, d).is_zero(), "[{c},{d}] degenerate");
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(strict_triples().count(), 336);
        assert_eq!(strict_jacobians().count(), 1680);
        assert_eq!(strict_seconds().count(), 18_816);
        for kind in [EnumKind::Triples, EnumKind::Jacobians, EnumKind::Seconds] {
            let (n, it) = enumerate(kind);
            assert_eq!(n, it.count());
        }
    }

    #[test]
    fn first_order_results_stay_first_order() {
        for t in strict_triples() {
            let r = deriv_triple(&t).unwrap();
            assert!(r.is_first_order(), "{t} -> {r}");
        }
    }
}
