//! Exact multivariate polynomials over the rationals, multivariate division
//! and reduced Gröbner bases via Buchberger's algorithm.
//!
//! Floating point never enters this module; membership answers are exact.

mod division;
mod groebner;
mod monomial;
mod polynomial;
mod text;

use std::collections::HashMap;

pub use division::{divide, exact_div, normal_form, Division};
pub use groebner::{buchberger, is_groebner, is_member, s_polynomial, GroebnerBasis};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{PolyOp, Polynomial};
pub use text::{parse_polynomial, parse_relation_file, RelationFile};

use crate::{Error, Result};

/// Ordered list of distinct variable names. Position 0 has the highest
/// precedence in every monomial order.
#[derive(Debug, Clone)]
pub struct VariableSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl VariableSet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() {
                return Err(Error::usage("empty variable name"));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::usage(format!("duplicate variable '{n}'")));
            }
        }
        Ok(VariableSet { names, index })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

impl PartialEq for VariableSet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}

impl Eq for VariableSet {}
