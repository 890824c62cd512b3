//! Rational functions over the fixed primitive alphabet and the total
//! derivative along the two coordinate axes.

mod gcd;

use std::fmt;
use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use gcd::gcd;

use crate::polyalg::{exact_div, MonomialOrder, Polynomial, VariableSet};
use crate::{Error, Result};

/// The 14 primitives: coordinates, the two state functions and their
/// partials up to second order. `F12`/`G12` stand for both mixed partials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PrimitiveSymbol {
    X,
    Y,
    F,
    G,
    F1,
    F2,
    G1,
    G2,
    F11,
    F12,
    F22,
    G11,
    G12,
    G22,
}

impl PrimitiveSymbol {
    pub const ALL: [PrimitiveSymbol; 14] = [
        Self::X,
        Self::Y,
        Self::F,
        Self::G,
        Self::F1,
        Self::F2,
        Self::G1,
        Self::G2,
        Self::F11,
        Self::F12,
        Self::F22,
        Self::G11,
        Self::G12,
        Self::G22,
    ];

    /// Position in the primitive [`VariableSet`].
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::X => "x",
            Self::Y => "y",
            Self::F => "f",
            Self::G => "g",
            Self::F1 => "f1",
            Self::F2 => "f2",
            Self::G1 => "g1",
            Self::G2 => "g2",
            Self::F11 => "f11",
            Self::F12 => "f12",
            Self::F22 => "f22",
            Self::G11 => "g11",
            Self::G12 => "g12",
            Self::G22 => "g22",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn is_second_order(self) -> bool {
        self.index() >= Self::F11.index()
    }

    /// Derivation table entry: `None` for second-order symbols.
    pub fn derivative(self, axis: Axis) -> Option<Derived> {
        use Derived::{One as I, Symbol as S, Zero as O};
        use PrimitiveSymbol::*;
        Some(match (self, axis) {
            (X, Axis::X) => I,
            (X, Axis::Y) => O,
            (Y, Axis::X) => O,
            (Y, Axis::Y) => I,
            (F, Axis::X) => S(F1),
            (F, Axis::Y) => S(F2),
            (G, Axis::X) => S(G1),
            (G, Axis::Y) => S(G2),
            (F1, Axis::X) => S(F11),
            (F1, Axis::Y) => S(F12),
            (F2, Axis::X) => S(F12),
            (F2, Axis::Y) => S(F22),
            (G1, Axis::X) => S(G11),
            (G1, Axis::Y) => S(G12),
            (G2, Axis::X) => S(G12),
            (G2, Axis::Y) => S(G22),
            _ => return None,
        })
    }

    pub fn poly(self) -> Polynomial {
        Polynomial::var(primitive_vars(), self.index())
    }
}

impl fmt::Display for PrimitiveSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derived {
    Zero,
    One,
    Symbol(PrimitiveSymbol),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

static PRIMITIVE_VARS: LazyLock<Arc<VariableSet>> = LazyLock::new(|| {
    Arc::new(VariableSet::new(PrimitiveSymbol::ALL.map(PrimitiveSymbol::name)).expect("distinct"))
});

/// The shared variable set of the primitive alphabet, in precedence order
/// x, y, f, g, f1, f2, g1, g2, f11, f12, f22, g11, g12, g22.
pub fn primitive_vars() -> &'static Arc<VariableSet> {
    &PRIMITIVE_VARS
}

/// The derivation table as polynomials, for callers that want the map form.
pub fn derivation_table(sym: PrimitiveSymbol, axis: Axis) -> Result<Polynomial> {
    let vars = primitive_vars();
    match sym.derivative(axis) {
        Some(Derived::Zero) => Ok(Polynomial::zero(vars)),
        Some(Derived::One) => Ok(Polynomial::one(vars)),
        Some(Derived::Symbol(s)) => Ok(s.poly()),
        None => Err(Error::OrderCapExceeded(sym.name().to_string())),
    }
}

/// Total derivative of a polynomial in the primitives along `axis`.
pub fn poly_total_derivative(p: &Polynomial, axis: Axis) -> Result<Polynomial> {
    let mut acc = Polynomial::zero(p.vars());
    for v in p.support() {
        let sym = PrimitiveSymbol::from_index(v).expect("primitive alphabet");
        let d = derivation_table(sym, axis)?;
        if d.is_zero() {
            continue;
        }
        acc = &acc + &(&p.partial(v) * &d);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Quotient of two polynomials over the primitive alphabet, kept in lowest
/// terms with an integer-primitive denominator whose leading coefficient
/// (grlex) is positive.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        num.check_same_vars(&den)?;
        Ok(Self::normalize(num, den))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let den = Polynomial::one(p.vars());
        RationalFunction { num: p, den }
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero(primitive_vars()))
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(Polynomial::from_int(primitive_vars(), n))
    }

    pub fn from_rational(c: BigRational) -> Self {
        Self::from_poly(Polynomial::constant(primitive_vars(), c))
    }

    pub fn symbol(s: PrimitiveSymbol) -> Self {
        Self::from_poly(s.poly())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn normalize(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::scaled(num, den);
        }
        if den.as_constant().is_some() {
            return Self::scaled(num, den);
        }
        let g = gcd(&num, &den);
        if g.is_one() {
            Self::scaled(num, den)
        } else {
            Self::scaled(
                exact_div(&num, &g).expect("gcd divides numerator"),
                exact_div(&den, &g).expect("gcd divides denominator"),
            )
        }
    }

    /// Fixes the denominator scale of an already coprime pair.
    fn scaled(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return RationalFunction {
                den: Polynomial::one(num.vars()),
                num,
            };
        }
        let s = primitive_scale(&den);
        if s.is_one() {
            RationalFunction { num, den }
        } else {
            RationalFunction {
                num: num.scale(&s),
                den: den.scale(&s),
            }
        }
    }

    /// `(an/ad) * (bn/bd)` for coprime pairs: cancel `an` against `bd` and
    /// `bn` against `ad`; the product is then in lowest terms.
    fn cross_reduced(an: &Polynomial, ad: &Polynomial, bn: &Polynomial, bd: &Polynomial) -> Self {
        let cancel = |n: &Polynomial, d: &Polynomial| {
            let g = gcd(n, d);
            if g.is_one() {
                (n.clone(), d.clone())
            } else {
                (
                    exact_div(n, &g).expect("gcd divides"),
                    exact_div(d, &g).expect("gcd divides"),
                )
            }
        };
        let (an, bd) = cancel(an, bd);
        let (bn, ad) = cancel(bn, ad);
        Self::scaled(&an * &bn, &ad * &bd)
    }

    /// Checked arithmetic; `Div` by zero gives [`Error::DivisionByZero`].
    pub fn try_op(&self, rhs: &RationalFunction, op: RfOp) -> Result<Self> {
        self.num.check_same_vars(&rhs.num)?;
        Ok(match op {
            RfOp::Add | RfOp::Sub => {
                // Henrici: only the common part of the denominators can cancel
                let g = gcd(&self.den, &rhs.den);
                let (da, db) = if g.is_one() {
                    (self.den.clone(), rhs.den.clone())
                } else {
                    (
                        exact_div(&self.den, &g).expect("gcd divides"),
                        exact_div(&rhs.den, &g).expect("gcd divides"),
                    )
                };
                let cross = &self.num * &db;
                let other = &rhs.num * &da;
                let t = if op == RfOp::Add {
                    &cross + &other
                } else {
                    &cross - &other
                };
                if g.is_one() {
                    Self::scaled(t, &da * &db)
                } else {
                    let g2 = gcd(&t, &g);
                    if g2.is_one() {
                        Self::scaled(t, &(&da * &db) * &g)
                    } else {
                        let rest = exact_div(&g, &g2).expect("gcd divides");
                        Self::scaled(
                            exact_div(&t, &g2).expect("gcd divides"),
                            &(&da * &db) * &rest,
                        )
                    }
                }
            }
            RfOp::Mul => Self::cross_reduced(&self.num, &self.den, &rhs.num, &rhs.den),
            RfOp::Div => {
                if rhs.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                Self::cross_reduced(&self.num, &self.den, &rhs.den, &rhs.num)
            }
        })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.try_op(rhs, RfOp::Add).expect("same alphabet")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.try_op(rhs, RfOp::Sub).expect("same alphabet")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.try_op(rhs, RfOp::Mul).expect("same alphabet")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.try_op(rhs, RfOp::Div)
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().div(self)
    }

    pub fn pow(&self, exp: u32) -> Self {
        // lowest terms survive powers, only the scale needs fixing
        Self::normalize(self.num.pow(exp), self.den.pow(exp))
    }

    /// Equality free of any side relation: cross-multiplied difference is
    /// the zero polynomial.
    pub fn rf_equal(&self, other: &Self) -> bool {
        (&(&self.num * &other.den) - &(&other.num * &self.den)).is_zero()
    }

    /// Quotient rule with the derivation table.
    pub fn total_derivative(&self, axis: Axis) -> Result<Self> {
        let dn = poly_total_derivative(&self.num, axis)?;
        if self.den.as_constant().is_some() {
            return Ok(Self::normalize(dn, self.den.clone()));
        }
        let dd = poly_total_derivative(&self.den, axis)?;
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        Ok(Self::normalize(num, self.den.pow(2)))
    }

    /// Numeric value at a valuation indexed like [`PrimitiveSymbol::ALL`].
    /// Returns the numerator and denominator values separately.
    pub fn eval_parts(&self, values: &[f64; 14]) -> (f64, f64) {
        (self.num.eval_f64(values), self.den.eval_f64(values))
    }

    /// The primitives this function mentions.
    pub fn symbols(&self) -> Vec<PrimitiveSymbol> {
        let mut s = self.num.support();
        s.extend(self.den.support());
        s.sort_unstable();
        s.dedup();
        s.into_iter()
            .filter_map(PrimitiveSymbol::from_index)
            .collect()
    }

    pub fn is_first_order(&self) -> bool {
        self.symbols().iter().all(|s| !s.is_second_order())
    }
}

/// Scalar turning `den` into an integer polynomial with coprime coefficients
/// and a positive grlex-leading coefficient.
fn primitive_scale(den: &Polynomial) -> BigRational {
    let mut lcm_den = BigInt::one();
    let mut gcd_num = BigInt::zero();
    for (_, c) in den.terms() {
        lcm_den = lcm_den.lcm(c.denom());
        gcd_num = gcd_num.gcd(c.numer());
    }
    let mut s = BigRational::new(lcm_den, gcd_num);
    let lc = den
        .leading_coefficient(MonomialOrder::Grlex)
        .expect("nonzero denominator");
    if lc.is_negative() {
        s = -s;
    }
    s
}

fn wrap(p: &Polynomial) -> String {
    let s = p.to_string();
    if p.num_terms() > 1 || (p.num_terms() == 1 && s.contains('*')) {
        format!("({s})")
    } else {
        s
    }
}

/// `num / den`, with `den` omitted when 1. Sides with more than one factor
/// are parenthesized so the text reads back through the expression parser.
impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        write!(f, "{num} / {}", wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
