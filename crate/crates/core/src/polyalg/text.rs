//! Canonical polynomial text and relation files.
//!
//! ```text
//! # comment
//! vars: x y z
//! 3/2*x^2*y - x + 1
//! ```

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Monomial, Polynomial, VariableSet};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RelationFile {
    pub vars: Arc<VariableSet>,
    pub relations: Vec<Polynomial>,
}

/// Parses one polynomial in canonical syntax: terms joined by `+`/`-`, each
/// term a `*`-separated product of an optional rational coefficient `a` or
/// `a/b` and variables with optional `^k`.
pub fn parse_polynomial(text: &str, vars: &Arc<VariableSet>) -> Result<Polynomial> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        vars,
    };
    let poly = p.polynomial()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

/// Reads a relation file. The `vars:` header must precede the first
/// relation; blank lines and `#` comments are ignored.
pub fn parse_relation_file(text: &str) -> Result<RelationFile> {
    let mut vars: Option<Arc<VariableSet>> = None;
    let mut relations = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vars:") {
            if vars.is_some() {
                return Err(Error::usage(format!(
                    "line {}: second vars header",
                    lineno + 1
                )));
            }
            vars = Some(Arc::new(VariableSet::new(rest.split_whitespace())?));
            continue;
        }
        let v = vars.as_ref().ok_or_else(|| {
            Error::usage(format!("line {}: relation before vars header", lineno + 1))
        })?;
        let p = parse_polynomial(line, v).map_err(|e| match e {
            Error::Parse { position, message } => {
                Error::parse(position, format!("line {}: {message}", lineno + 1))
            }
            other => other,
        })?;
        relations.push(p);
    }
    let vars = vars.ok_or_else(|| Error::usage("relation file has no vars header"))?;
    Ok(RelationFile { vars, relations })
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    vars: &'a Arc<VariableSet>,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::parse(self.pos + 1, msg)
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

    fn polynomial(&mut self) -> Result<Polynomial> {
        let mut terms: Vec<(Monomial, BigRational)> = Vec::new();
        let mut sign = match self.peek() {
            Some('-') => {
                self.pos += 1;
                -BigRational::one()
            }
            Some('+') => {
                self.pos += 1;
                BigRational::one()
            }
            _ => BigRational::one(),
        };
        loop {
            let (m, c) = self.term()?;
            terms.push((m, c * &sign));
            match self.peek() {
                Some('+') => sign = BigRational::one(),
                Some('-') => sign = -BigRational::one(),
                _ => break,
            }
            self.pos += 1;
        }
        Ok(Polynomial::from_terms(self.vars, terms))
    }

    fn term(&mut self) -> Result<(Monomial, BigRational)> {
        let mut coeff = BigRational::one();
        let mut mono = Monomial::one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    let mut value = BigRational::from_integer(n);
                    if self.peek() == Some('/') {
                        self.pos += 1;
                        if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                            return Err(self.error("expected integer denominator"));
                        }
                        let d = self.integer()?;
                        if d.is_zero() {
                            return Err(self.error("zero denominator"));
                        }
                        value /= BigRational::from_integer(d);
                    }
                    coeff *= value;
                }
                Some(c) if c.is_alphabetic() || c == '_' => {
                    let start = self.pos;
                    let name = self.identifier();
                    let idx = self.vars.index_of(&name).ok_or_else(|| {
                        Error::parse(start + 1, format!("unknown variable '{name}'"))
                    })?;
                    let mut exp = 1u32;
                    if self.peek() == Some('^') {
                        self.pos += 1;
                        exp = self
                            .integer()?
                            .try_into()
                            .map_err(|_| self.error("exponent too large"))?;
                    }
                    mono = mono.mul(&Monomial::var_pow(idx, exp));
                }
                _ => return Err(self.error("expected coefficient or variable")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((mono, coeff));
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_alphanumeric() || *c == '_')
        {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::MonomialOrder;

    #[test]
    fn parse_and_render_agree() {
        let v = Arc::new(VariableSet::new(["x", "y"]).unwrap());
        for text in [
            "3/2*x^2*y - x - 1/2",
            "x^2 - y^2",
            "-x",
            "0",
            "1",
            "y^3 + x",
        ] {
            let p = parse_polynomial(text, &v).unwrap();
            assert_eq!(p.render(MonomialOrder::Grlex), text);
        }
        let p = parse_polynomial(" 2 * x * x - 4/2*x^2 ", &v).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn parse_errors_carry_positions() {
        let v = Arc::new(VariableSet::new(["x"]).unwrap());
        match parse_polynomial("x + z", &v) {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 5),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial("x +", &v).is_err());
        assert!(parse_polynomial("1/0*x", &v).is_err());
    }

    #[test]
    fn relation_file() {
        let f = parse_relation_file("# demo\nvars: a b\na*b - 1  # trailing\n\nb^2 - a\n").unwrap();
        assert_eq!(f.vars.names(), ["a", "b"]);
        assert_eq!(f.relations.len(), 2);
        assert!(parse_relation_file("a - 1\n").is_err());
        assert!(parse_relation_file("vars: a a\n").is_err());
    }
}
