//! Buchberger completion with the normal selection strategy.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use num_traits::One;

use super::{normal_form, Monomial, MonomialOrder, Polynomial};
use crate::par::{self, Execution};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    reduced: bool,
}

impl GroebnerBasis {
    /// Wraps polynomials the caller already knows to form a Gröbner basis.
    pub fn from_parts(generators: Vec<Polynomial>, order: MonomialOrder, reduced: bool) -> Self {
        GroebnerBasis {
            generators,
            order,
            reduced,
        }
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn reduce(&self, p: &Polynomial) -> Polynomial {
        normal_form(p, &self.generators, self.order)
    }

    /// Reduced bases of the same ideal under the same order are identical,
    /// so ideal equality is plain equality of the generator lists.
    pub fn same_ideal(&self, other: &GroebnerBasis) -> bool {
        self.reduced
            && other.reduced
            && self.order == other.order
            && self.generators == other.generators
    }
}

/// `S(p, q) = (L/lt(p))·p − (L/lt(q))·q` with `L` the lcm of the leading
/// monomials.
pub fn s_polynomial(p: &Polynomial, q: &Polynomial, order: MonomialOrder) -> Result<Polynomial> {
    p.check_same_vars(q)?;
    let ((mp, cp), (mq, cq)) = match (p.leading_term(order), q.leading_term(order)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::usage("S-polynomial of a zero polynomial")),
    };
    let l = mp.lcm(mq);
    let fp = l.div(mp).expect("lcm divisible");
    let fq = l.div(mq).expect("lcm divisible");
    Ok(&p.mul_monomial(&fp, &cp.recip()) - &q.mul_monomial(&fq, &cq.recip()))
}

/// Computes the reduced Gröbner basis of the ideal generated by `generators`.
///
/// Pairs are processed smallest-lcm first (ties by index); pairs with
/// coprime leading monomials and pairs covered by Buchberger's chain
/// criterion are skipped. Output is monic, autoreduced and sorted by
/// descending leading monomial.
pub fn buchberger(generators: &[Polynomial], order: MonomialOrder) -> Result<GroebnerBasis> {
    let first = generators
        .first()
        .ok_or_else(|| Error::usage("buchberger needs at least one generator"))?;
    let mut basis: Vec<Polynomial> = Vec::with_capacity(generators.len());
    for g in generators {
        first.check_same_vars(g)?;
        if g.is_zero() {
            return Err(Error::usage("zero generator"));
        }
        basis.push(g.monic(order));
    }
    let mut lms: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_monomial(order).unwrap().clone())
        .collect();

    let mut queue: BTreeSet<Pair> = BTreeSet::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(&mut queue, &mut pending, &lms, order, i, j);
        }
    }

    while let Some(Pair { lcm, i, j, .. }) = queue.pop_first() {
        pending.remove(&(i, j));
        if lms[i].coprime(&lms[j]) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lms[k].divides(&lcm)
                && !pending.contains(&ordered(i, k))
                && !pending.contains(&ordered(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order)?;
        let r = normal_form(&s, &basis, order);
        if r.is_zero() {
            continue;
        }
        let r = r.monic(order);
        let n = basis.len();
        lms.push(r.leading_monomial(order).unwrap().clone());
        basis.push(r);
        for k in 0..n {
            push_pair(&mut queue, &mut pending, &lms, order, k, n);
        }
    }

    Ok(GroebnerBasis {
        generators: autoreduce(basis, order),
        order,
        reduced: true,
    })
}

/// A critical pair ordered by the lcm of its leading monomials, then by index.
#[derive(PartialEq, Eq)]
struct Pair {
    lcm: Monomial,
    order: MonomialOrder,
    i: usize,
    j: usize,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order
            .cmp(&self.lcm, &other.lcm)
            .then((self.i, self.j).cmp(&(other.i, other.j)))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn push_pair(
    queue: &mut BTreeSet<Pair>,
    pending: &mut HashSet<(usize, usize)>,
    lms: &[Monomial],
    order: MonomialOrder,
    i: usize,
    j: usize,
) {
    queue.insert(Pair {
        lcm: lms[i].lcm(&lms[j]),
        order,
        i,
        j,
    });
    pending.insert((i, j));
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Minimalizes then interreduces a Gröbner basis.
fn autoreduce(mut basis: Vec<Polynomial>, order: MonomialOrder) -> Vec<Polynomial> {
    basis.sort_by(|a, b| {
        order.cmp(
            a.leading_monomial(order).unwrap(),
            b.leading_monomial(order).unwrap(),
        )
    });
    let mut minimal: Vec<Polynomial> = Vec::with_capacity(basis.len());
    for g in basis {
        let lm = g.leading_monomial(order).unwrap();
        if !minimal
            .iter()
            .any(|h| h.leading_monomial(order).unwrap().divides(lm))
        {
            minimal.push(g);
        }
    }
    let mut reduced: Vec<Polynomial> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Polynomial> = minimal
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let lm = minimal[i].leading_monomial(order).unwrap().clone();
            let lc = minimal[i].leading_coefficient(order).unwrap().clone();
            // the leading term is irreducible by a minimal basis; reduce the tail
            let tail = &minimal[i] - &Polynomial::monomial(minimal[i].vars(), lm.clone(), lc);
            let t = normal_form(&tail, &others, order);
            &Polynomial::monomial(minimal[i].vars(), lm, num_rational::BigRational::one()) + &t
        })
        .collect();
    reduced.reverse();
    reduced
}

/// True iff `p` reduces to zero modulo `basis`.
pub fn is_member(p: &Polynomial, basis: &GroebnerBasis) -> bool {
    basis.reduce(p).is_zero()
}

/// Buchberger's criterion: every S-polynomial of a pair reduces to zero.
pub fn is_groebner(polys: &[Polynomial], order: MonomialOrder, exec: Execution) -> bool {
    let pairs: Vec<(usize, usize)> = (0..polys.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    par::map(exec, &pairs, |&(i, j)| {
        match s_polynomial(&polys[i], &polys[j], order) {
            Ok(s) => normal_form(&s, polys, order).is_zero(),
            Err(_) => false,
        }
    })
    .into_iter()
    .all(|ok| ok)
}
