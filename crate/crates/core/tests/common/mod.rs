//! Randomized property suites shared by the `acceptance` and `properties`
//! targets. Each suite runs a fixed number of cases from a deterministic
//! ChaCha-seeded runner and reports the first counterexample.

#![allow(dead_code, clippy::eq_op)]

use std::sync::{Arc, LazyLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use thermocalc::cli::expr::{self, BinOp, Expression};
use thermocalc::derivcalc::{deriv_triple, jacobian, DerivTriple, JacobianSpec, QuantityCode};
use thermocalc::par::Execution;
use thermocalc::polyalg::{
    buchberger, is_groebner, is_member, normal_form, Monomial, MonomialOrder, Polynomial,
    VariableSet,
};
use thermocalc::prover::{verify, ConstraintSystem, Identity};
use thermocalc::ratfun::{Axis, PrimitiveSymbol, RationalFunction};

pub static XYZ: LazyLock<Arc<VariableSet>> =
    LazyLock::new(|| Arc::new(VariableSet::new(["x", "y", "z"]).unwrap()));

/// Runs `test` on `cases` inputs; returns the number of cases or the
/// shrunk counterexample.
pub fn check<S, F>(cases: u32, strategy: S, test: F) -> Result<u32, String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner =
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner
        .run(&strategy, test)
        .map(|()| cases)
        .map_err(|e| e.to_string())
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

/// Up to `terms` terms of degree at most `deg` in x, y, z.
pub fn poly(terms: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((rational(), [0..=deg, 0..=deg, 0..=deg]), 0..=terms).prop_map(
        move |ts| {
            Polynomial::from_terms(
                &XYZ,
                ts.into_iter().map(|(c, e)| {
                    // cap the total degree so Buchberger inputs stay small
                    let mut budget = deg;
                    let pairs: Vec<(usize, u32)> = e
                        .iter()
                        .enumerate()
                        .map(|(v, &k)| {
                            let k = k.min(budget);
                            budget -= k;
                            (v, k)
                        })
                        .collect();
                    (Monomial::from_pairs(pairs), c)
                }),
            )
        },
    )
}

pub fn nonzero_poly(terms: usize, deg: u32) -> impl Strategy<Value = Polynomial> {
    poly(terms, deg).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![Just(MonomialOrder::Lex), Just(MonomialOrder::Grlex)]
}

fn symbol() -> impl Strategy<Value = PrimitiveSymbol> {
    (0usize..14).prop_map(|i| PrimitiveSymbol::from_index(i).unwrap())
}

/// Small polynomial in a few primitives.
fn primitive_poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((-3i64..=3, symbol(), symbol()), 1..=3).prop_map(|ts| {
        ts.into_iter()
            .map(|(c, a, b)| {
                RationalFunction::from_int(c)
                    .mul(&RationalFunction::symbol(a))
                    .mul(&RationalFunction::symbol(b))
                    .numerator()
                    .clone()
            })
            .fold(
                Polynomial::one(thermocalc::ratfun::primitive_vars()),
                |acc, p| &acc + &p,
            )
    })
}

pub fn rational_function() -> impl Strategy<Value = RationalFunction> {
    (
        primitive_poly(),
        primitive_poly().prop_filter("nonzero", |p| !p.is_zero()),
    )
        .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn code() -> impl Strategy<Value = u8> {
    1u8..=8
}

pub fn distinct3() -> impl Strategy<Value = (u8, u8, u8)> {
    (code(), code(), code()).prop_filter("distinct", |(a, b, c)| a != b && a != c && b != c)
}

pub fn distinct4() -> impl Strategy<Value = (u8, u8, u8, u8)> {
    (code(), code(), code(), code()).prop_filter("distinct", |(a, b, c, d)| {
        a != b && a != c && a != d && b != c && b != d && c != d
    })
}

fn t(a: u8, b: u8, c: u8) -> RationalFunction {
    deriv_triple(&DerivTriple::from_codes(a, b, c).unwrap()).unwrap()
}

fn j(a: u8, b: u8, c: u8, d: u8) -> RationalFunction {
    jacobian(&JacobianSpec::from_codes(a, b, c, d).unwrap()).unwrap()
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(TestCaseError::fail(format!($($msg)+)));
        }
    };
}

// ---- polynomial ring ----

pub fn ring_axioms(cases: u32) -> Result<u32, String> {
    check(cases, (poly(4, 3), poly(4, 3), poly(4, 3)), |(a, b, c)| {
        let zero = Polynomial::zero(&XYZ);
        let one = Polynomial::one(&XYZ);
        ensure!(&a + &b == &b + &a, "add commutes");
        ensure!(&a * &b == &b * &a, "mul commutes");
        ensure!(&(&a + &b) + &c == &a + &(&b + &c), "add associates");
        ensure!(&(&a * &b) * &c == &a * &(&b * &c), "mul associates");
        ensure!(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributes");
        ensure!(&a + &zero == a && &a * &one == a, "identities");
        ensure!((&a - &a).is_zero() && (&a + &(-&a)).is_zero(), "inverse");
        Ok(())
    })
}

pub fn normal_form_idempotent(cases: u32) -> Result<u32, String> {
    check(
        cases,
        (
            poly(5, 3),
            prop::collection::vec(nonzero_poly(3, 2), 1..=3),
            order(),
        ),
        |(p, divisors, ord)| {
            let r = normal_form(&p, &divisors, ord);
            ensure!(normal_form(&r, &divisors, ord) == r, "NF(NF(p)) = NF(p)");
            // no remainder term is divisible by a leading monomial
            for (m, _) in r.terms() {
                for d in &divisors {
                    ensure!(
                        !d.leading_monomial(ord).unwrap().divides(m),
                        "remainder term {m:?} reducible"
                    );
                }
            }
            Ok(())
        },
    )
}

pub fn reduced_basis_unique(cases: u32) -> Result<u32, String> {
    check(
        cases,
        (
            prop::collection::vec(nonzero_poly(3, 2), 1..=3),
            nonzero_poly(2, 1),
            order(),
        ),
        |(gens, mult, ord)| {
            let gb = buchberger(&gens, ord).unwrap();
            ensure!(
                is_groebner(gb.generators(), ord, Execution::Sequential),
                "output is a Gröbner basis"
            );
            let mut reversed = gens.clone();
            reversed.reverse();
            ensure!(
                buchberger(&reversed, ord).unwrap() == gb,
                "order of generators matters"
            );
            let mut extended = gens.clone();
            extended.push(&gens[0] * &mult);
            ensure!(
                buchberger(&extended, ord).unwrap() == gb,
                "redundant generator changes the basis"
            );
            ensure!(
                buchberger(gb.generators(), ord).unwrap() == gb,
                "basis is not a fixed point"
            );
            for g in &gens {
                ensure!(is_member(g, &gb), "generator not in ideal");
            }
            Ok(())
        },
    )
}

pub fn derivative_laws(cases: u32) -> Result<u32, String> {
    check(cases, (distinct4(), code()), |((a, b, c, d), e)| {
        let one = RationalFunction::one();
        // reciprocal: (a,b,c)(b,a,c) = 1
        ensure!(
            t(a, b, c).mul(&t(b, a, c)) == one,
            "reciprocal ({a},{b},{c})"
        );
        // antisymmetry of Jacobians in each pair
        ensure!(
            j(a, b, c, d) == j(b, a, c, d).neg(),
            "antisymmetric numerator"
        );
        ensure!(
            j(a, b, c, d) == j(a, b, d, c).neg(),
            "antisymmetric denominator"
        );
        // chain: (a,b,c)(b,d,c) = (a,d,c)
        ensure!(t(a, b, c).mul(&t(b, d, c)) == t(a, d, c), "chain rule");
        // triple product: (a,b,c)(b,c,a)(c,a,b) = -1
        ensure!(
            t(a, b, c).mul(&t(b, c, a)).mul(&t(c, a, b)) == one.neg(),
            "triple product"
        );
        // (a,b,c) with a repeated denominator index collapses
        if e != b && e != c {
            ensure!(j(e, c, b, c) == t(e, b, c), "(e,b,c) = [e,c;b,c]");
        }
        Ok(())
    })
}

// ---- further properties ----

pub fn lex_grlex_membership_agree(cases: u32) -> Result<u32, String> {
    check(
        cases,
        (
            prop::collection::vec(nonzero_poly(3, 2), 1..=2),
            poly(2, 1),
            poly(3, 2),
        ),
        |(gens, k, other)| {
            let lex = buchberger(&gens, MonomialOrder::Lex).unwrap();
            let grlex = buchberger(&gens, MonomialOrder::Grlex).unwrap();
            let member = &gens[0] * &k;
            ensure!(
                is_member(&member, &lex) && is_member(&member, &grlex),
                "ideal element missed"
            );
            ensure!(
                is_member(&other, &lex) == is_member(&other, &grlex),
                "orders disagree on {other}"
            );
            Ok(())
        },
    )
}

pub fn difference_with_normal_form_in_ideal(cases: u32) -> Result<u32, String> {
    check(
        cases,
        (
            poly(4, 3),
            prop::collection::vec(nonzero_poly(3, 2), 1..=2),
            order(),
        ),
        |(p, gens, ord)| {
            let gb = buchberger(&gens, ord).unwrap();
            let r = gb.reduce(&p);
            ensure!(is_member(&(&p - &r), &gb), "p - NF(p) outside the ideal");
            Ok(())
        },
    )
}

pub fn field_axioms(cases: u32) -> Result<u32, String> {
    check(
        cases,
        (
            rational_function(),
            rational_function(),
            rational_function(),
        ),
        |(a, b, c)| {
            ensure!(
                a.add(&b) == b.add(&a) && a.mul(&b) == b.mul(&a),
                "commutative"
            );
            ensure!(a.add(&b).add(&c) == a.add(&b.add(&c)), "add associates");
            ensure!(a.mul(&b).mul(&c) == a.mul(&b.mul(&c)), "mul associates");
            ensure!(
                a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)),
                "distributes"
            );
            ensure!(a.sub(&a).is_zero(), "additive inverse");
            if !a.is_zero() {
                ensure!(
                    a.mul(&a.recip().unwrap()) == RationalFunction::one(),
                    "multiplicative inverse"
                );
            }
            // normalized form is canonical
            let renormalized =
                RationalFunction::new(a.numerator().clone(), a.denominator().clone()).unwrap();
            ensure!(renormalized == a, "normalization idempotent");
            Ok(())
        },
    )
}

pub fn leibniz_rule(cases: u32) -> Result<u32, String> {
    let first_order = || rational_function().prop_filter("first order", |r| r.is_first_order());
    check(cases, (first_order(), first_order()), |(a, b)| {
        for axis in [Axis::X, Axis::Y] {
            let lhs = a.mul(&b).total_derivative(axis).unwrap();
            let rhs = a
                .total_derivative(axis)
                .unwrap()
                .mul(&b)
                .add(&a.mul(&b.total_derivative(axis).unwrap()));
            ensure!(lhs == rhs, "product rule along {axis:?}");
        }
        Ok(())
    })
}

fn leaf() -> impl Strategy<Value = Expression> {
    prop_oneof![
        (0u32..5).prop_map(|n| Expression::Integer(n.into())),
        symbol().prop_map(Expression::Symbol),
        (1u8..=4).prop_map(|v| Expression::Value(QuantityCode::new(v).unwrap())),
        distinct3()
            .prop_map(|(a, b, c)| Expression::Triple(DerivTriple::from_codes(a, b, c).unwrap())),
    ]
}

pub fn expression() -> impl Strategy<Value = Expression> {
    leaf().prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expression::Neg(Box::new(e))),
            (inner.clone(), 1u32..3).prop_map(|(e, k)| Expression::Pow(Box::new(e), k)),
            (
                inner.clone(),
                inner,
                prop_oneof![Just(BinOp::Add), Just(BinOp::Sub), Just(BinOp::Mul)]
            )
                .prop_map(|(l, r, op)| Expression::binary(op, l, r)),
        ]
    })
}

pub fn render_round_trip(cases: u32) -> Result<u32, String> {
    check(cases, expression(), |e| {
        let text = e.to_string();
        let back =
            expr::parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        ensure!(back == e, "tree changed: {text}");
        ensure!(
            back.expand().unwrap() == e.expand().unwrap(),
            "expansion changed: {text}"
        );
        Ok(())
    })
}

pub fn verify_invariances(cases: u32) -> Result<u32, String> {
    let side = (distinct3(), distinct3()).prop_map(|((a, b, c), (d, e, f))| {
        let lhs = Expression::Triple(DerivTriple::from_codes(a, b, c).unwrap());
        let rhs = Expression::Triple(DerivTriple::from_codes(d, e, f).unwrap());
        (lhs, rhs)
    });
    check(cases, (side, symbol()), |((lhs, rhs), s)| {
        let cs = ConstraintSystem::shared();
        let id = Identity::new(lhs.clone(), rhs.clone(), "");
        let base = verify(&id, cs, &[], &[]).unwrap().status;
        let swapped = verify(&id.swapped(), cs, &[], &[]).unwrap().status;
        ensure!(base == swapped, "swap changed {id}");
        let k = || Expression::Symbol(s);
        let scaled = Identity::new(
            Expression::binary(BinOp::Mul, k(), lhs.clone()),
            Expression::binary(BinOp::Mul, k(), rhs.clone()),
            "",
        );
        ensure!(
            verify(&scaled, cs, &[], &[]).unwrap().status == base,
            "scaling changed {id}"
        );
        Ok(())
    })
}
