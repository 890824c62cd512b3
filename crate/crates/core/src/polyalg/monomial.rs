use std::cmp::Ordering;
use std::fmt;

/// A power product, stored sparsely as `(variable index, exponent)` pairs
/// sorted by variable index. Zero exponents are never stored.
///
/// Variable index 0 has the highest precedence. The derived `Ord` is *not*
/// used; the `Ord` impl below is the pure lexicographic order so that a
/// `BTreeMap<Monomial, _>` iterates from lex-smallest to lex-largest.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    powers: Vec<(u32, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { powers: Vec::new() }
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u32) -> Self {
        if exp == 0 {
            return Self::one();
        }
        Monomial {
            powers: vec![(index as u32, exp)],
        }
    }

    /// Builds a monomial from arbitrary pairs; repeated variables are merged.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut powers: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(v, e)| (v as u32, e))
            .collect();
        powers.sort_unstable_by_key(|&(v, _)| v);
        let mut merged: Vec<(u32, u32)> = Vec::with_capacity(powers.len());
        for (v, e) in powers {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { powers: merged }
    }

    pub fn is_one(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.powers
            .binary_search_by_key(&(var as u32), |&(v, _)| v)
            .map(|i| self.powers[i].1)
            .unwrap_or(0)
    }

    /// Iterates `(variable index, exponent)` with nonzero exponents.
    pub fn powers(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.powers.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn max_var(&self) -> Option<usize> {
        self.powers.last().map(|&(v, _)| v as usize)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| a + b)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.merge(other, u32::max)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.merge(other, u32::min)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for &(v, e) in &self.powers {
            while j < other.powers.len() && other.powers[j].0 < v {
                j += 1;
            }
            match other.powers.get(j) {
                Some(&(w, f)) if w == v && f >= e => j += 1,
                _ => return false,
            }
        }
        true
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(self.merge(other, |a, b| a - b))
    }

    /// True when the two monomials share no variable.
    pub fn coprime(&self, other: &Monomial) -> bool {
        self.gcd(other).is_one()
    }

    /// Removes `var` entirely, returning its exponent and the rest.
    pub fn split_off(&self, var: usize) -> (u32, Monomial) {
        let e = self.exponent(var);
        let rest = Monomial {
            powers: self
                .powers
                .iter()
                .copied()
                .filter(|&(v, _)| v as usize != var)
                .collect(),
        };
        (e, rest)
    }

    fn merge(&self, other: &Monomial, op: impl Fn(u32, u32) -> u32) -> Monomial {
        let (a, b) = (&self.powers, &other.powers);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let (v, e) = match (a.get(i), b.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) if va == vb => {
                    i += 1;
                    j += 1;
                    (va, op(ea, eb))
                }
                (Some(&(va, ea)), Some(&(vb, _))) if va < vb => {
                    i += 1;
                    (va, op(ea, 0))
                }
                (Some(_), Some(&(vb, eb))) => {
                    j += 1;
                    (vb, op(0, eb))
                }
                (Some(&(va, ea)), None) => {
                    i += 1;
                    (va, op(ea, 0))
                }
                (None, Some(&(vb, eb))) => {
                    j += 1;
                    (vb, op(0, eb))
                }
                (None, None) => unreachable!(),
            };
            if e > 0 {
                out.push((v, e));
            }
        }
        Monomial { powers: out }
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        for (&(va, ea), &(vb, eb)) in self.powers.iter().zip(&other.powers) {
            if va != vb {
                // the side holding the higher-precedence variable is larger
                return if va < vb {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
            if ea != eb {
                return ea.cmp(&eb);
            }
        }
        self.powers.len().cmp(&other.powers.len())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .powers
            .iter()
            .map(|&(v, e)| {
                if e == 1 {
                    format!("v{v}")
                } else {
                    format!("v{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Admissible monomial orders. Ties between variables are broken by their
/// position in the [`VariableSet`](super::VariableSet): earlier is larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    #[default]
    Lex,
    Grlex,
}

impl MonomialOrder {
    pub fn cmp(self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.lex_cmp(b),
            MonomialOrder::Grlex => a.degree().cmp(&b.degree()).then_with(|| a.lex_cmp(b)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MonomialOrder::Lex => "lex",
            MonomialOrder::Grlex => "grlex",
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grlex" => Ok(MonomialOrder::Grlex),
            other => Err(crate::Error::usage(format!(
                "unknown monomial order '{other}' (expected lex or grlex)"
            ))),
        }
    }
}
