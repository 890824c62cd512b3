use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{Monomial, MonomialOrder, Polynomial};

/// Quotients and remainder of a multivariate division:
/// `p = sum(quotients[i] * divisors[i]) + remainder`.
#[derive(Debug, Clone)]
pub struct Division {
    pub quotients: Vec<Polynomial>,
    pub remainder: Polynomial,
}

/// Monomial keyed by an explicit order so a `BTreeMap` pops the leading term.
#[derive(Clone, PartialEq, Eq)]
struct Keyed {
    m: Monomial,
    order: MonomialOrder,
}

impl Ord for Keyed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order.cmp(&self.m, &other.m)
    }
}

impl PartialOrd for Keyed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Divisor {
    lm: Monomial,
    lc_inv: BigRational,
    tail: Vec<(Monomial, BigRational)>,
}

/// Full multivariate division. Each step uses the first divisor (in list
/// order) whose leading monomial divides the current leading term; terms no
/// divisor can touch move to the remainder.
pub fn divide(p: &Polynomial, divisors: &[Polynomial], order: MonomialOrder) -> Division {
    let vars = p.vars();
    let prepared: Vec<Option<Divisor>> = divisors
        .iter()
        .map(|d| {
            let (lm, lc) = d.leading_term(order)?;
            Some(Divisor {
                lm: lm.clone(),
                lc_inv: lc.recip(),
                tail: d
                    .terms()
                    .filter(|(m, _)| *m != lm)
                    .map(|(m, c)| (m.clone(), c.clone()))
                    .collect(),
            })
        })
        .collect();

    let mut work: BTreeMap<Keyed, BigRational> = p
        .terms()
        .map(|(m, c)| {
            (
                Keyed {
                    m: m.clone(),
                    order,
                },
                c.clone(),
            )
        })
        .collect();
    let mut quotients: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); divisors.len()];
    let mut remainder: Vec<(Monomial, BigRational)> = Vec::new();

    while let Some((key, c)) = work.pop_last() {
        let hit = prepared.iter().enumerate().find_map(|(i, d)| {
            let d = d.as_ref()?;
            key.m.div(&d.lm).map(|factor| (i, d, factor))
        });
        match hit {
            Some((i, d, factor)) => {
                let q = &c * &d.lc_inv;
                for (tm, tc) in &d.tail {
                    let k = Keyed {
                        m: tm.mul(&factor),
                        order,
                    };
                    let delta = -(&q * tc);
                    match work.entry(k) {
                        std::collections::btree_map::Entry::Vacant(e) => {
                            e.insert(delta);
                        }
                        std::collections::btree_map::Entry::Occupied(mut e) => {
                            *e.get_mut() += delta;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
                quotients[i].push((factor, q));
            }
            None => remainder.push((key.m, c)),
        }
    }

    Division {
        quotients: quotients
            .into_iter()
            .map(|t| Polynomial::from_terms(vars, t))
            .collect(),
        remainder: Polynomial::from_terms(vars, remainder),
    }
}

/// Remainder of [`divide`]. With no divisors `p` comes back unchanged.
pub fn normal_form(p: &Polynomial, divisors: &[Polynomial], order: MonomialOrder) -> Polynomial {
    if divisors.is_empty() {
        return p.clone();
    }
    divide(p, divisors, order).remainder
}

/// `a / b` when `b` divides `a` exactly.
pub fn exact_div(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    if b.is_zero() {
        return None;
    }
    let d = divide(a, std::slice::from_ref(b), MonomialOrder::Lex);
    if d.remainder.is_zero() {
        d.quotients.into_iter().next()
    } else {
        None
    }
}
