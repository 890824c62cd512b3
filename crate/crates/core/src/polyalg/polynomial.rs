use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Monomial, MonomialOrder, VariableSet};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Terms live in a `BTreeMap` keyed by [`Monomial`] (lex order); zero
/// coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial {
    vars: Arc<VariableSet>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars)
            && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(vars: &Arc<VariableSet>) -> Self {
        Polynomial {
            vars: Arc::clone(vars),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<VariableSet>) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn constant(vars: &Arc<VariableSet>, c: BigRational) -> Self {
        Self::from_terms(vars, [(Monomial::one(), c)])
    }

    pub fn from_int(vars: &Arc<VariableSet>, c: i64) -> Self {
        Self::constant(vars, BigRational::from_integer(BigInt::from(c)))
    }

    pub fn var(vars: &Arc<VariableSet>, index: usize) -> Self {
        assert!(index < vars.len(), "variable index out of range");
        Self::from_terms(vars, [(Monomial::var(index), BigRational::one())])
    }

    pub fn var_named(vars: &Arc<VariableSet>, name: &str) -> Result<Self> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| Error::usage(format!("unknown variable '{name}'")))?;
        Ok(Self::var(vars, idx))
    }

    pub fn monomial(vars: &Arc<VariableSet>, m: Monomial, c: BigRational) -> Self {
        Self::from_terms(vars, [(m, c)])
    }

    /// Collects terms, summing repeated monomials and dropping zeros.
    pub fn from_terms(
        vars: &Arc<VariableSet>,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            if let Some(v) = m.max_var() {
                assert!(v < vars.len(), "monomial outside variable set");
            }
            add_term(&mut map, m, c);
        }
        Polynomial {
            vars: Arc::clone(vars),
            terms: map,
        }
    }

    pub fn vars(&self) -> &Arc<VariableSet> {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .first_key_value()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    /// The value if this polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self
                .terms
                .first_key_value()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Iterates terms in ascending lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> + '_ {
        self.terms.iter()
    }

    /// Terms sorted descending under `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        if order != MonomialOrder::Lex {
            v.sort_by(|a, b| order.cmp(a.0, b.0));
        }
        v.reverse();
        v
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &BigRational)> {
        match order {
            MonomialOrder::Lex => self.terms.last_key_value(),
            _ => self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0)),
        }
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Monomial> {
        self.leading_term(order).map(|(m, _)| m)
    }

    pub fn leading_coefficient(&self, order: MonomialOrder) -> Option<&BigRational> {
        self.leading_term(order).map(|(_, c)| c)
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_coefficient(order) {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip()),
            _ => self.clone(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Polynomial {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(t, v)| (t.mul(m), v * c)).collect(),
        }
    }

    /// The checked form of `+`, `-`, `*`: mismatched variable sets are a
    /// usage error instead of a panic.
    pub fn try_op(&self, rhs: &Polynomial, op: PolyOp) -> Result<Polynomial> {
        self.check_same_vars(rhs)?;
        Ok(match op {
            PolyOp::Add => self.add_impl(rhs, false),
            PolyOp::Sub => self.add_impl(rhs, true),
            PolyOp::Mul => self.mul_impl(rhs),
        })
    }

    pub(crate) fn check_same_vars(&self, rhs: &Polynomial) -> Result<()> {
        if Arc::ptr_eq(&self.vars, &rhs.vars) || self.vars == rhs.vars {
            Ok(())
        } else {
            Err(Error::usage("polynomials are over different variable sets"))
        }
    }

    fn add_impl(&self, rhs: &Polynomial, negate: bool) -> Polynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let c = if negate { -c } else { c.clone() };
            add_term(&mut terms, m.clone(), c);
        }
        Polynomial {
            vars: Arc::clone(&self.vars),
            terms,
        }
    }

    fn mul_impl(&self, rhs: &Polynomial) -> Polynomial {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                add_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        Polynomial {
            vars: Arc::clone(&self.vars),
            terms,
        }
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.vars);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Evaluates with `f64` arithmetic; `values` is indexed by variable.
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (v, e) in m.powers() {
                    t *= values[v].powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Value at `values` together with the sum of the absolute term values,
    /// which bounds the rounding error of the sum.
    pub fn eval_f64_magnitude(&self, values: &[f64]) -> (f64, f64) {
        self.terms.iter().fold((0.0, 0.0), |(sum, mag), (m, c)| {
            let mut t = c.to_f64().unwrap_or(f64::NAN);
            for (v, e) in m.powers() {
                t *= values[v].powi(e as i32);
            }
            (sum + t, mag + t.abs())
        })
    }

    /// Indices of the variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.powers().map(|(v, _)| v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    /// Views the polynomial as univariate in `var`: exponent -> coefficient.
    pub fn coefficients_in(&self, var: usize) -> BTreeMap<u32, Polynomial> {
        let mut out: BTreeMap<u32, BTreeMap<Monomial, BigRational>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(var);
            out.entry(e).or_default().insert(rest, c.clone());
        }
        out.into_iter()
            .map(|(e, terms)| {
                (
                    e,
                    Polynomial {
                        vars: Arc::clone(&self.vars),
                        terms,
                    },
                )
            })
            .collect()
    }

    /// Partial derivative with respect to one variable.
    pub fn partial(&self, var: usize) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var);
            if e == 0 {
                return None;
            }
            let (_, rest) = m.split_off(var);
            let m2 = rest.mul(&Monomial::var_pow(var, e - 1));
            Some((m2, c * BigRational::from_integer(BigInt::from(e))))
        });
        Polynomial::from_terms(&self.vars, terms)
    }

    /// Renders terms descending under `order`, e.g. `3/2*x^2*y - x + 1`.
    pub fn render(&self, order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.sorted_terms(order).into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let abs = c.abs();
            let mono = self.render_monomial(m);
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&mono),
                (false, true) => out.push_str(&render_rational(&abs)),
                (false, false) => {
                    out.push_str(&render_rational(&abs));
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        m.powers()
            .map(|(v, e)| {
                let name = self.vars.name(v);
                if e == 1 {
                    name.to_string()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn render_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn add_term(map: &mut BTreeMap<Monomial, BigRational>, m: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Canonical text: grlex, the order used for all displayed output.
impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(MonomialOrder::Grlex))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        /// Panics when the operands use different variable sets; use
        /// [`Polynomial::try_op`] for a checked variant.
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.try_op(rhs, $op).expect("variable set mismatch")
            }
        }

        impl std::ops::$tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, PolyOp::Add);
forward_binop!(Sub, sub, PolyOp::Sub);
forward_binop!(Mul, mul, PolyOp::Mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            vars: Arc::clone(&self.vars),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}
