//! Expression language for identities.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := int | symbol | D(i,i,i) | J(i,i;i,i) | DD(i,i,i;i,i) | '(' expr ')'
//! idx    := 1..8 | p | V | T | S | Phi | W | F | E
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::derivcalc::{
    deriv_triple, jacobian, second_deriv, DerivTriple, JacobianSpec, QuantityCode, SecondDerivSpec,
};
use crate::polyalg::Polynomial;
use crate::prover::{named_quantity, NamedQuantity};
use crate::ratfun::{PrimitiveSymbol, RationalFunction};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Integer(BigInt),
    Symbol(PrimitiveSymbol),
    /// p, V, T, S written by name; codes 5..8 have no value of their own.
    Value(QuantityCode),
    Triple(DerivTriple),
    Jacobian(JacobianSpec),
    Second(SecondDerivSpec),
    Quantity(NamedQuantity),
    Neg(Box<Expression>),
    Binary(BinOp, Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, u32),
}

/// An expanded expression plus every denominator met on the way, each of
/// which has to be nonzero for the expansion to mean anything.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub value: RationalFunction,
    pub side_conditions: Vec<Polynomial>,
}

impl Expression {
    pub fn parse(text: &str) -> Result<Expression> {
        parse(text)
    }

    pub fn binary(op: BinOp, lhs: Expression, rhs: Expression) -> Expression {
        Expression::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Expands to a rational function over the primitives.
    pub fn expand(&self) -> Result<RationalFunction> {
        Ok(self.expand_with_conditions()?.value)
    }

    pub fn expand_with_conditions(&self) -> Result<Expansion> {
        let mut conds = Vec::new();
        let value = self.expand_into(&mut conds)?;
        let mut side_conditions: Vec<Polynomial> = Vec::new();
        for c in conds {
            if c.as_constant().is_none() && !side_conditions.contains(&c) {
                side_conditions.push(c);
            }
        }
        Ok(Expansion {
            value,
            side_conditions,
        })
    }

    fn expand_into(&self, conds: &mut Vec<Polynomial>) -> Result<RationalFunction> {
        let coded = |r: RationalFunction, conds: &mut Vec<Polynomial>| {
            conds.push(r.denominator().clone());
            r
        };
        Ok(match self {
            Expression::Integer(n) => {
                RationalFunction::from_rational(BigRational::from_integer(n.clone()))
            }
            Expression::Symbol(s) => RationalFunction::symbol(*s),
            Expression::Value(q) => match q.value() {
                1 => RationalFunction::symbol(PrimitiveSymbol::X),
                2 => RationalFunction::symbol(PrimitiveSymbol::Y),
                3 => RationalFunction::symbol(PrimitiveSymbol::F),
                4 => RationalFunction::symbol(PrimitiveSymbol::G),
                v => return Err(Error::UnsupportedQuantity(v)),
            },
            Expression::Triple(t) => coded(deriv_triple(t)?, conds),
            Expression::Jacobian(j) => coded(jacobian(j)?, conds),
            Expression::Second(s) => coded(second_deriv(s)?, conds),
            Expression::Quantity(q) => named_quantity(*q).expand_into(conds)?,
            Expression::Neg(e) => e.expand_into(conds)?.neg(),
            Expression::Pow(e, k) => e.expand_into(conds)?.pow(*k),
            Expression::Binary(op, l, r) => {
                let l = l.expand_into(conds)?;
                let r = r.expand_into(conds)?;
                match op {
                    BinOp::Add => l.add(&r),
                    BinOp::Sub => l.sub(&r),
                    BinOp::Mul => l.mul(&r),
                    BinOp::Div => {
                        conds.push(r.numerator().clone());
                        l.div(&r)?
                    }
                }
            }
        })
    }
}

/// Renders with explicit parentheses around every compound operand; the
/// output parses back to the same tree shape.
impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Integer(n) => write!(f, "{n}"),
            Expression::Symbol(s) => write!(f, "{s}"),
            Expression::Value(q) => write!(f, "{}", q.alias()),
            Expression::Triple(t) => write!(f, "D({},{},{})", t.a, t.b, t.c),
            Expression::Jacobian(j) => write!(f, "J({},{};{},{})", j.a, j.b, j.c, j.d),
            Expression::Second(s) => write!(
                f,
                "DD({},{},{};{},{})",
                s.inner.a, s.inner.b, s.inner.c, s.d, s.e
            ),
            Expression::Quantity(q) => write!(f, "{}", q.name()),
            Expression::Neg(e) => write!(f, "-{}", Paren(e)),
            Expression::Pow(e, k) => write!(f, "{}^{k}", Paren(e)),
            Expression::Binary(op, l, r) => write!(f, "{} {} {}", Paren(l), op.symbol(), Paren(r)),
        }
    }
}

struct Paren<'a>(&'a Expression);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expression::Neg(_) | Expression::Pow(..) | Expression::Binary(..) => {
                write!(f, "({})", self.0)
            }
            Expression::Integer(n) if n.sign() == num_bigint::Sign::Minus => {
                write!(f, "({})", self.0)
            }
            e => write!(f, "{e}"),
        }
    }
}

pub fn parse(text: &str) -> Result<Expression> {
    parse_at(text, 0)
}

/// Parses `text` reporting positions shifted by `offset` characters.
pub(crate) fn parse_at(text: &str, offset: usize) -> Result<Expression> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        offset,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    offset: usize,
}

impl Parser {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.offset + self.pos + 1, msg)
    }

    fn error_at(&self, pos: usize, msg: impl Into<String>) -> Error {
        Error::parse(self.offset + pos + 1, msg)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Expression> {
        let mut lhs = self.term()?;
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expression::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expression> {
        let mut lhs = self.factor()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expression::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expression> {
        if self.peek() == Some('-') {
            self.pos += 1;
            return Ok(Expression::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.error("expected unsigned integer exponent"));
            }
            let k: u32 = digits
                .parse()
                .map_err(|_| self.error_at(start, "exponent too large"))?;
            return Ok(Expression::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn base(&mut self) -> Result<Expression> {
        let start = match self.peek() {
            None => return Err(self.error("unexpected end of input")),
            Some(_) => self.pos,
        };
        let c = self.chars[start];
        if c == '(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        if c.is_ascii_digit() {
            let d = self.digits();
            if self.chars.get(self.pos) == Some(&'.') {
                return Err(self.error_at(start, "floating literals are not allowed; use a/b"));
            }
            return Ok(Expression::Integer(d.parse().expect("digits")));
        }
        if c.is_ascii_alphabetic() {
            let name = self.ident();
            if matches!(name.as_str(), "D" | "J" | "DD") && self.peek() == Some('(') {
                self.pos += 1;
                return self.coded(&name, start);
            }
            return symbol(&name)
                .ok_or_else(|| self.error_at(start, format!("unknown symbol '{name}'")));
        }
        Err(self.error(format!("unexpected '{c}'")))
    }

    fn index(&mut self) -> Result<QuantityCode> {
        self.skip_ws();
        let start = self.pos;
        let tok = match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_digit() => self.digits(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            _ => return Err(self.error("expected index 1..8 or p, V, T, S, Phi, W, F, E")),
        };
        QuantityCode::parse(&tok)
            .ok_or_else(|| self.error_at(start, format!("invalid index '{tok}'")))
    }

    fn coded(&mut self, name: &str, start: usize) -> Result<Expression> {
        let a = self.index()?;
        self.expect(',')?;
        let b = self.index()?;
        // Distinctness violations surface as usage errors; pin them to the call.
        let at = self.offset + start + 1;
        let distinct = move |e: Error| match e {
            Error::Usage(m) => Error::parse(at, m),
            other => other,
        };
        match name {
            "D" => {
                self.expect(',')?;
                let c = self.index()?;
                self.expect(')')?;
                Ok(Expression::Triple(
                    DerivTriple::new(a, b, c).map_err(distinct)?,
                ))
            }
            "J" => {
                self.expect(';')?;
                let c = self.index()?;
                self.expect(',')?;
                let d = self.index()?;
                self.expect(')')?;
                Ok(Expression::Jacobian(
                    JacobianSpec::new(a, b, c, d).map_err(distinct)?,
                ))
            }
            _ => {
                self.expect(',')?;
                let c = self.index()?;
                self.expect(';')?;
                let d = self.index()?;
                self.expect(',')?;
                let e = self.index()?;
                self.expect(')')?;
                let inner = DerivTriple::new(a, b, c).map_err(distinct)?;
                Ok(Expression::Second(
                    SecondDerivSpec::new(inner, d, e).map_err(distinct)?,
                ))
            }
        }
    }
}

fn symbol(name: &str) -> Option<Expression> {
    if let Some(s) = PrimitiveSymbol::from_name(name) {
        return Some(Expression::Symbol(s));
    }
    match name {
        "p" | "V" | "T" | "S" => QuantityCode::parse(name).map(Expression::Value),
        _ => NamedQuantity::from_name(name)
            .filter(|q| *q != NamedQuantity::CpMinusCv)
            .map(Expression::Quantity),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aliases_parse_like_digits() {
        assert_eq!(parse("D(T,p,V)").unwrap(), parse("D(3,1,2)").unwrap());
        assert_eq!(parse("J(Phi,W;F,E)").unwrap(), parse("J(5,6;7,8)").unwrap());
        assert_eq!(
            parse("DD(E,p,V;T,S)").unwrap(),
            parse("DD(8,1,2;3,4)").unwrap()
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("cp - cv").unwrap();
        assert!(matches!(
            e,
            Expression::Binary(BinOp::Sub, ref l, ref r)
                if **l == Expression::Quantity(NamedQuantity::Cp) && **r == Expression::Quantity(NamedQuantity::Cv)
        ));
        assert_eq!(
            parse("1 - 2 - 3").unwrap().expand().unwrap(),
            RationalFunction::from_int(-4)
        );
        assert_eq!(
            parse("8/2/2").unwrap().expand().unwrap(),
            RationalFunction::from_int(2)
        );
        assert_eq!(
            parse("2*3^2").unwrap().expand().unwrap(),
            RationalFunction::from_int(18)
        );
        assert_eq!(
            parse("-2^2").unwrap().expand().unwrap(),
            RationalFunction::from_int(-4)
        );
        assert_eq!(
            parse(" ( 1+ 2 ) *3").unwrap().expand().unwrap(),
            RationalFunction::from_int(9)
        );
    }

    #[test]
    fn distinct_coordinates_required() {
        match parse("D(3,1,1)") {
            Err(Error::Parse { position, message }) => {
                assert_eq!(position, 1);
                assert!(message.contains("distinct"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse("J(1,2;3,3)").is_err());
        assert!(parse("DD(3,1,2;4,4)").is_err());
        // a may coincide with a coordinate
        assert!(parse("D(3,3,4)").is_ok());
    }

    #[test]
    fn error_positions() {
        let pos = |t: &str| match parse(t) {
            Err(Error::Parse { position, .. }) => position,
            other => panic!("{other:?}"),
        };
        assert_eq!(pos("D(9,1,2)"), 3);
        assert_eq!(pos("1.5 * f"), 1);
        assert_eq!(pos("f + * g"), 5);
        assert_eq!(pos("f + q"), 5);
        assert_eq!(pos("(f"), 3);
        assert_eq!(pos("f)"), 2);
        assert_eq!(pos("F"), 1);
    }

    #[test]
    fn named_values_map_to_primitives() {
        assert_eq!(
            parse("T").unwrap().expand().unwrap(),
            RationalFunction::symbol(PrimitiveSymbol::F)
        );
        assert_eq!(parse("p*V").unwrap().expand().unwrap().to_string(), "x*y");
        assert_eq!(
            Expression::Value(QuantityCode::new(6).unwrap()).expand(),
            Err(Error::UnsupportedQuantity(6))
        );
    }

    #[test]
    fn render_round_trip() {
        for t in [
            "cp - cv",
            "-(f1 + 2)^3 / D(2,1,4)",
            "J(3,4;1,2) * (x - -y)",
            "DD(3,1,2;2,1)",
            "T * D(p,T,V)",
        ] {
            let e = parse(t).unwrap();
            let again = parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{t} -> {e}");
        }
    }

    #[test]
    fn side_conditions_collected() {
        let e = parse("f / (f1 - g1) + D(2,1,4)")
            .unwrap()
            .expand_with_conditions()
            .unwrap();
        let names: Vec<String> = e.side_conditions.iter().map(|p| p.to_string()).collect();
        assert_eq!(names, ["f1 - g1", "g2"]);
    }
}
