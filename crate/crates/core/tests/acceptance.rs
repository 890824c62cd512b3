//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use clap::Parser;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use thermocalc::cli::commands::{compare_with_reference, run, Cli, SECOND_TOL, TRIPLE_TOL};
use thermocalc::cli::expr::Expression;
use thermocalc::derivcalc::{
    base_partial, enumerate, strict_jacobians, strict_seconds, strict_triples, DerivSpec, EnumKind,
    QuantityCode,
};
use thermocalc::models::sweep::{sweep, SweepSummary};
use thermocalc::models::{check_jacobian, GammaFn, GasModel, StatePoint};
use thermocalc::par::Execution;
use thermocalc::polyalg::{is_member, parse_polynomial, MonomialOrder};
use thermocalc::prover::{
    self, builtin_system, discover, gamma_check, maxwell_relations, verify, verify_batch,
    ConstraintSystem, Identity, Status, CONFIRMATION_THRESHOLD,
};
use thermocalc::ratfun::{Axis, RationalFunction};

type Outcome = Result<String, String>;
type Suite = fn(u32) -> Result<u32, String>;
type Criterion = fn() -> Outcome;

fn rf(text: &str) -> RationalFunction {
    Expression::parse(text).unwrap().expand().unwrap()
}

fn within(limit: Duration, start: Instant) -> Result<String, String> {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{:.2}s", t.as_secs_f64()))
    } else {
        Err(format!(
            "took {:.2}s, limit {}s",
            t.as_secs_f64(),
            limit.as_secs()
        ))
    }
}

fn base_table() -> Outcome {
    let start = Instant::now();
    let expected = [
        ("1", "0"),
        ("0", "1"),
        ("f1", "f2"),
        ("g1", "g2"),
        ("y - g*f1", "-g*f2"),
        ("y + f*g1", "f*g2"),
        ("-g*f1", "-x - g*f2"),
        ("f*g1", "-x + f*g2"),
    ];
    let mut mismatches = Vec::new();
    for (code, (dx, dy)) in (1u8..=8).zip(expected) {
        let q = QuantityCode::new(code).unwrap();
        for (axis, want, (b, c)) in [(Axis::X, dx, (1, 2)), (Axis::Y, dy, (2, 1))] {
            let via_table = base_partial(q, axis);
            let via_triple = rf(&format!("D({code},{b},{c})"));
            if via_table != rf(want) || via_triple != rf(want) {
                mismatches.push(format!("({code},{b},{c}) = {via_triple}, want {want}"));
            }
        }
    }
    if !mismatches.is_empty() {
        return Err(mismatches.join("; "));
    }
    Ok(format!(
        "16/16 exact, {}",
        within(Duration::from_secs(1), start)?
    ))
}

fn maxwell() -> Outcome {
    let start = Instant::now();
    let models = prover::default_models();
    let states = prover::default_states();
    let reports = verify_batch(
        &maxwell_relations(),
        ConstraintSystem::shared(),
        &models,
        &states,
        Execution::Parallel,
    );
    let mut worst = 0.0f64;
    for r in reports {
        let r = r.map_err(|e| e.to_string())?;
        if r.status != Status::Proved || !r.reduced_difference.is_zero() {
            return Err(format!("{} is {}", r.identity, r.status));
        }
        let expected = models.len() * states.len();
        if r.numeric_residuals.len() != expected {
            return Err(format!(
                "{}: {} residuals, want {expected}",
                r.identity,
                r.numeric_residuals.len()
            ));
        }
        if r.max_residual() >= CONFIRMATION_THRESHOLD {
            return Err(format!("{}: residual {:e}", r.identity, r.max_residual()));
        }
        worst = worst.max(r.max_residual());
    }
    Ok(format!(
        "4/4 proved, {} models x {} states, max residual {worst:.1e}, {}",
        models.len(),
        states.len(),
        within(Duration::from_secs(5), start)?
    ))
}

fn worked_identity() -> Outcome {
    let cs = ConstraintSystem::shared();
    let want = rf("f/(f1*f2)");
    let lhs = cs.reduce(&rf("cp - cv")).map_err(|e| e.to_string())?;
    let rhs = cs
        .reduce(&rf("T*D(1,3,2)*D(2,3,1)"))
        .map_err(|e| e.to_string())?;
    if lhs != want || rhs != want {
        return Err(format!("lhs {lhs}, rhs {rhs}"));
    }
    let id = Identity::parse("cp - cv = T*D(1,3,2)*D(2,3,1)").unwrap();
    let r = verify(
        &id,
        cs,
        &prover::default_models(),
        &prover::default_states(),
    )
    .map_err(|e| e.to_string())?;
    if r.status != Status::Proved {
        return Err(format!("identity is {}", r.status));
    }
    Ok(format!("both sides reduce to {want}; identity proved"))
}

fn cli_count(kind: &str) -> Result<usize, String> {
    let cli = Cli::try_parse_from(["thermocalc", "enumerate", kind]).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    run(&cli, &mut out).map_err(|e| e.to_string())?;
    String::from_utf8(out)
        .unwrap()
        .trim()
        .parse()
        .map_err(|e| format!("{e}"))
}

fn counts() -> Outcome {
    let direct = [
        strict_triples().count(),
        strict_jacobians().count(),
        strict_seconds().count(),
    ];
    let reported = [
        enumerate(EnumKind::Triples).0,
        enumerate(EnumKind::Jacobians).0,
        enumerate(EnumKind::Seconds).0,
    ];
    let cli = [
        cli_count("triples")?,
        cli_count("jacobians")?,
        cli_count("seconds")?,
    ];
    let want = [336, 1680, 18_816];
    if direct != want || reported != want || cli != want {
        return Err(format!(
            "direct {direct:?}, enumerate {reported:?}, cli {cli:?}"
        ));
    }
    Ok("336 triples, 1680 jacobians, 18816 second derivatives".into())
}

fn summarize(label: &str, s: &SweepSummary) -> Result<String, String> {
    let line = format!(
        "{label}: {} compared, {} undefined on both sides, max deviation {:.1e}",
        s.compared,
        s.undefined.len(),
        s.max_deviation()
    );
    if !s.pass() {
        let worst = s
            .worst
            .as_ref()
            .map_or(String::new(), |w| format!(" worst {}", w.spec));
        return Err(format!(
            "{line}; {} over {:e}, errors {:?}{worst}",
            s.failures, s.tolerance, s.errors
        ));
    }
    Ok(line)
}

fn oracle_sweep() -> Outcome {
    let start = Instant::now();
    let ideal = GasModel::ideal_gas(5.0 / 3.0).unwrap();
    let at = StatePoint::new(2.0, 3.0);

    let triples: Vec<DerivSpec> = enumerate(EnumKind::Triples).1.collect();
    let s = SweepSummary::new(sweep(&ideal, &triples, at, Execution::Parallel), TRIPLE_TOL);
    let first = summarize("triples", &s)?;
    if s.compared + s.undefined.len() != 336 {
        return Err(format!("{first}; not all 336 triples accounted for"));
    }
    let undefined = s.undefined.join(" ");

    let all: Vec<DerivSpec> = enumerate(EnumKind::Seconds).1.collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e2d);
    let picked: Vec<DerivSpec> = sample(&mut rng, all.len(), 200)
        .into_iter()
        .map(|i| all[i])
        .collect();
    let s = SweepSummary::new(sweep(&ideal, &picked, at, Execution::Parallel), SECOND_TOL);
    let second = summarize("200 sampled seconds", &s)?;
    Ok(format!(
        "{first}; {second}; {}\n    undefined triples: {undefined}",
        within(Duration::from_secs(30), start)?
    ))
}

fn groebner() -> Outcome {
    let start = Instant::now();
    let sys = builtin_system();
    if sys.relations.len() != 29 || sys.vars.len() != 40 {
        return Err(format!(
            "{} relations over {} variables",
            sys.relations.len(),
            sys.vars.len()
        ));
    }
    let gb = discover(&sys.relations, MonomialOrder::Lex).map_err(|e| e.to_string())?;
    for text in [
        "x521 - x621 - x721 + x821",
        "x231 + x413",
        "x1 - x621 + x821",
    ] {
        let p = parse_polynomial(text, &sys.vars).map_err(|e| e.to_string())?;
        if !is_member(&p, &gb) {
            return Err(format!("{text} does not reduce to 0"));
        }
    }
    let cmp = compare_with_reference(&gb).map_err(|e| e.to_string())?;
    if cmp.missing != 0 || cmp.extra != 0 {
        return Err(format!(
            "{} printed elements outside the computed ideal, {} computed elements outside the printed ideal",
            cmp.missing, cmp.extra
        ));
    }
    Ok(format!(
        "{} basis elements; all {} printed elements reduce to 0 and vice versa, {}",
        gb.len(),
        cmp.reference_len,
        within(Duration::from_secs(60), start)?
    ))
}

fn jacobian_invariant() -> Outcome {
    let synthesis = GasModel::synthesis(GammaFn::new(vec![1.4, 0.01]).unwrap(), 0.0, 0.0).unwrap();
    let cases = [
        (GasModel::ideal_gas(5.0 / 3.0).unwrap(), 1e-9),
        (GasModel::van_der_waals(1.0, 0.5, 7.0 / 5.0).unwrap(), 1e-9),
        (synthesis, 1e-6),
    ];
    let mut parts = Vec::new();
    for (m, tol) in &cases {
        let r = check_jacobian(m, &m.default_grid(), *tol, Execution::Parallel)
            .map_err(|e| e.to_string())?;
        let part = format!("{} {:.1e} <= {tol:e}", m.name(), r.max_deviation);
        if !r.pass {
            return Err(part);
        }
        parts.push(part);
    }
    Ok(parts.join(", "))
}

fn gamma() -> Outcome {
    let ideal = GasModel::ideal_gas(5.0 / 3.0).unwrap();
    let states = [
        StatePoint::new(1.0, 1.0),
        StatePoint::new(2.0, 3.0),
        StatePoint::new(3.0, 1.5),
    ];
    let rows = gamma_check(&ideal, &states).map_err(|e| e.to_string())?;
    for g in &rows {
        if (g.gamma - 5.0 / 3.0).abs() > 1e-9 {
            return Err(format!("gamma {} at {}", g.gamma, g.state));
        }
    }
    let recip = rows[0].reciprocal_form;
    Ok(format!(
        "f1*g2/(f2*g1) = 5/3 at {} states; flagged: the printed f2*g1/(f1*g2) gives {recip:.6} = 1/gamma",
        rows.len()
    ))
}

fn properties() -> Outcome {
    let start = Instant::now();
    let suites: [(&str, Suite); 4] = [
        ("ring axioms", common::ring_axioms),
        ("normal-form idempotence", common::normal_form_idempotent),
        ("reduced-basis uniqueness", common::reduced_basis_unique),
        ("derivative laws", common::derivative_laws),
    ];
    let mut parts = Vec::new();
    for (name, suite) in suites {
        let n = suite(500).map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name} {n}"));
    }
    Ok(format!(
        "{}, {}",
        parts.join(", "),
        within(Duration::from_secs(60), start)?
    ))
}

fn main() {
    let criteria: [(&str, Criterion); 9] = [
        ("base partial table", base_table),
        ("maxwell relations", maxwell),
        ("cp - cv identity", worked_identity),
        ("enumeration counts", counts),
        ("oracle sweep", oracle_sweep),
        ("groebner reproduction", groebner),
        ("jacobian invariant", jacobian_invariant),
        ("gamma", gamma),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
