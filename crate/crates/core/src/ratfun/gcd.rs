//! Multivariate GCD over Q by recursive content / primitive-part splitting
//! and primitive pseudo-remainder sequences.

use crate::polyalg::{exact_div, MonomialOrder, Polynomial};

/// Greatest common divisor, monic under lex. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    gcd_rec(a, b).monic(MonomialOrder::Lex)
}

fn gcd_rec(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return Polynomial::one(a.vars());
    }
    if a == b {
        return a.clone();
    }
    if a.num_terms() == 1 {
        return monomial_gcd(a, b);
    }
    if b.num_terms() == 1 {
        return monomial_gcd(b, a);
    }
    let sa = a.support();
    let sb = b.support();
    // a variable present on one side only cannot occur in the gcd
    if let Some(&v) = sa.iter().find(|v| sb.binary_search(v).is_err()) {
        return fold_coefficients(b.clone(), a, v);
    }
    if let Some(&v) = sb.iter().find(|v| sa.binary_search(v).is_err()) {
        return fold_coefficients(a.clone(), b, v);
    }
    let v = *sa
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .expect("nonconstant");
    if let Some(g) = trial_division(a, b) {
        return g;
    }
    let ca = content(a, v);
    let cb = content(b, v);
    let c = gcd_rec(&ca, &cb);
    let pa = exact_div(a, &ca).expect("content divides");
    let pb = exact_div(b, &cb).expect("content divides");
    &c * &primitive_prs(pa, pb, v)
}

/// `b` when it divides `a` exactly, or `a` when it divides `b`.
fn trial_division(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    let (big, small) = if a.total_degree() >= b.total_degree() {
        (a, b)
    } else {
        (b, a)
    };
    exact_div(big, small).map(|_| small.clone())
}

/// gcd of a single term with `p`: the common power product of all terms.
fn monomial_gcd(term: &Polynomial, p: &Polynomial) -> Polynomial {
    let m = p.terms().fold(
        term.terms().next().expect("one term").0.clone(),
        |acc, (m, _)| acc.gcd(m),
    );
    Polynomial::monomial(
        p.vars(),
        m,
        num_rational::BigRational::from_integer(1.into()),
    )
}

/// `gcd(seed, coefficients of p in var)`, stopping once it is constant.
fn fold_coefficients(seed: Polynomial, p: &Polynomial, var: usize) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p.coefficients_in(var).into_values().collect();
    coeffs.sort_by_key(Polynomial::num_terms);
    let mut g = seed;
    for c in coeffs {
        g = gcd_rec(&g, &c);
        if g.as_constant().is_some() {
            return Polynomial::one(p.vars());
        }
        g = g.monic(MonomialOrder::Lex);
    }
    g
}

/// GCD of the coefficients of `p` viewed as a polynomial in `var`.
fn content(p: &Polynomial, var: usize) -> Polynomial {
    let mut coeffs: Vec<Polynomial> = p.coefficients_in(var).into_values().collect();
    coeffs.sort_by_key(Polynomial::num_terms);
    let first = coeffs.remove(0);
    let mut g = first.monic(MonomialOrder::Lex);
    for c in coeffs {
        if g.as_constant().is_some() {
            break;
        }
        g = gcd_rec(&g, &c).monic(MonomialOrder::Lex);
    }
    if g.as_constant().is_some() {
        Polynomial::one(p.vars())
    } else {
        g
    }
}

fn primitive_part(p: &Polynomial, var: usize) -> Polynomial {
    let c = content(p, var);
    exact_div(p, &c)
        .expect("content divides")
        .monic(MonomialOrder::Lex)
}

/// GCD of two polynomials that are primitive in `var`.
fn primitive_prs(a: Polynomial, b: Polynomial, var: usize) -> Polynomial {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_remainder(&a, &b, var);
        if r.is_zero() {
            return primitive_part(&b, var);
        }
        if r.degree_in(var) == 0 {
            return Polynomial::one(a.vars());
        }
        a = b;
        b = primitive_part(&r, var);
    }
}

fn pseudo_remainder(a: &Polynomial, b: &Polynomial, var: usize) -> Polynomial {
    let db = b.degree_in(var);
    let lcb = b
        .coefficients_in(var)
        .remove(&db)
        .expect("leading coefficient");
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lcr = r
            .coefficients_in(var)
            .remove(&dr)
            .expect("leading coefficient");
        let shift = crate::polyalg::Monomial::var_pow(var, dr - db);
        let t = (&lcr * b).mul_monomial(&shift, &num_rational::BigRational::from_integer(1.into()));
        r = &(&lcb * &r) - &t;
        debug_assert!(r.is_zero() || r.degree_in(var) < dr);
    }
    r
}
