//! Subcommands of the `thermocalc` binary.
//!
//! [`run`] writes the report to the given sink and returns the process exit
//! status; errors are left to the caller so `main` can print a diagnostic.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cli::expr;
use crate::derivcalc::{enumerate, expand_all, DerivSpec, EnumKind};
use crate::models::sweep::{sweep, SweepSummary};
use crate::models::{check_jacobian, parse_grid, GammaFn, GasModel, StatePoint, SYNTHESIS_J_TOL};
use crate::par::Execution;
use crate::polyalg::{
    buchberger, is_member, parse_relation_file, GroebnerBasis, MonomialOrder, RelationFile,
};
use crate::prover::{
    self, builtin_reference_basis, builtin_system, discover, gamma_check, maxwell_relations,
    parse_identity_file, verify_batch, ConstraintSystem, Identity, Status, VerificationReport,
};
use crate::{Error, Result};

#[derive(Debug, Parser)]
#[command(
    name = "thermocalc",
    version,
    about = "Coded thermodynamic partial derivatives, identity proofs and Gröbner discovery"
)]
pub struct Cli {
    /// Run every sweep on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expand an expression to the primitive alphabet.
    Expand {
        expression: String,
        /// Reduce modulo the constraint ideal.
        #[arg(long)]
        reduce: bool,
    },
    /// Prove or refute identities given inline or in a file.
    Verify {
        /// An identity such as "D(3,1,4) = D(2,4,1)".
        identity: Option<String>,
        /// File with one identity per line.
        #[arg(short, long, conflicts_with = "identity")]
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        /// States as "x0:x1:n,y0:y1:m" for the numeric cross-check.
        #[arg(long)]
        grid: Option<String>,
    },
    /// Evaluate an expression on a gas model.
    Eval {
        #[command(flatten)]
        model: ModelArgs,
        /// State "x,y".
        #[arg(long)]
        at: String,
        expression: String,
    },
    /// Reduced Gröbner basis of a relation file.
    Groebner {
        file: PathBuf,
        #[arg(long, default_value = "lex")]
        order: MonomialOrder,
    },
    /// Run the built-in discovery system and compare with the reference basis.
    Discover {
        #[arg(long, default_value = "lex")]
        order: MonomialOrder,
    },
    /// Count or list coded derivatives.
    Enumerate {
        /// triples, jacobians or seconds
        kind: EnumKind,
        #[arg(long)]
        list: bool,
    },
    /// Verify the four Maxwell relations.
    Maxwell {
        #[arg(long)]
        json: bool,
    },
    /// Numeric-versus-symbolic sweep over every coded derivative.
    Selftest,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// ideal, vdw or synthesis
    #[arg(long, default_value = "ideal")]
    pub model: String,
    /// Adiabatic index, e.g. 5/3 or 1.4.
    #[arg(long, default_value = "5/3")]
    pub gamma: String,
    #[arg(long, default_value = "0")]
    pub a: String,
    #[arg(long, default_value = "0")]
    pub b: String,
    /// Polynomial gamma(w) coefficients "c0,c1,..." for the synthesis model.
    #[arg(long)]
    pub gamma_coeffs: Option<String>,
}

impl ModelArgs {
    pub fn build(&self) -> Result<GasModel> {
        let gamma = parse_number(&self.gamma)?;
        let a = parse_number(&self.a)?;
        let b = parse_number(&self.b)?;
        match self.model.as_str() {
            "ideal" => GasModel::ideal_gas(gamma),
            "vdw" => GasModel::van_der_waals(a, b, gamma),
            "synthesis" => {
                let g = match &self.gamma_coeffs {
                    Some(list) => GammaFn::new(
                        list.split(',')
                            .map(|c| parse_number(c.trim()))
                            .collect::<Result<_>>()?,
                    )?,
                    None => GammaFn::constant(gamma),
                };
                GasModel::synthesis(g, a, b)
            }
            other => Err(Error::usage(format!(
                "unknown model '{other}' (expected ideal, vdw or synthesis)"
            ))),
        }
    }
}

/// Parses a decimal or an integer fraction `a/b`.
pub fn parse_number(text: &str) -> Result<f64> {
    let bad = || Error::usage(format!("invalid number '{text}'"));
    let v = match text.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(Error::DivisionByZero);
            }
            n / d
        }
        None => text.trim().parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

pub fn parse_state(text: &str) -> Result<StatePoint> {
    let (x, y) = text
        .split_once(',')
        .ok_or_else(|| Error::usage(format!("state '{text}' must be x,y")))?;
    Ok(StatePoint::new(parse_number(x)?, parse_number(y)?))
}

/// Rounds to 12 significant digits and prints the shortest form.
pub fn format_value(v: f64) -> String {
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    format!("{rounded}")
}

fn io(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Executes `cli`, writing the report to `out`. Returns the exit status.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match &cli.command {
        Command::Expand { expression, reduce } => {
            let mut rf = expr::parse(expression)?.expand()?;
            if *reduce {
                rf = ConstraintSystem::shared().reduce(&rf)?;
            }
            writeln!(out, "{rf}").map_err(io)?;
            Ok(0)
        }
        Command::Verify {
            identity,
            file,
            json,
            grid,
        } => {
            let ids = match (identity, file) {
                (Some(text), None) => vec![Identity::parse(text)?],
                (None, Some(path)) => parse_identity_file(&read(path)?)?,
                _ => return Err(Error::usage("verify needs an identity or --file")),
            };
            let states = match grid {
                Some(g) => parse_grid(g)?,
                None => prover::default_states(),
            };
            let reports = verify_batch(
                &ids,
                ConstraintSystem::shared(),
                &prover::default_models(),
                &states,
                exec,
            )
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            write_reports(out, &reports, *json)
        }
        Command::Eval {
            model,
            at,
            expression,
        } => {
            let model = model.build()?;
            let state = parse_state(at)?;
            let rf = expr::parse(expression)?.expand()?;
            writeln!(out, "{}", format_value(model.eval_quantity(&rf, state)?)).map_err(io)?;
            Ok(0)
        }
        Command::Groebner { file, order } => {
            let sys = parse_relation_file(&read(file)?)?;
            if sys.relations.is_empty() {
                return Err(Error::usage(format!("{}: no relations", file.display())));
            }
            let gb = buchberger(&sys.relations, *order)?;
            write_basis(out, &sys, &gb)?;
            Ok(0)
        }
        Command::Discover { order } => {
            let sys = builtin_system();
            let gb = discover(&sys.relations, *order)?;
            write_basis(out, &sys, &gb)?;
            let cmp = compare_with_reference(&gb)?;
            writeln!(
                out,
                "# reference elements not in the computed ideal: {}",
                cmp.missing
            )
            .map_err(io)?;
            writeln!(
                out,
                "# computed elements not in the reference ideal: {}",
                cmp.extra
            )
            .map_err(io)?;
            Ok(if cmp.missing == 0 && cmp.extra == 0 {
                0
            } else {
                1
            })
        }
        Command::Enumerate { kind, list } => {
            let (count, specs) = enumerate(*kind);
            if *list {
                for spec in specs {
                    writeln!(out, "{spec}").map_err(io)?;
                }
            } else {
                writeln!(out, "{count}").map_err(io)?;
            }
            Ok(0)
        }
        Command::Maxwell { json } => {
            let reports = verify_batch(
                &maxwell_relations(),
                ConstraintSystem::shared(),
                &prover::default_models(),
                &prover::default_states(),
                exec,
            )
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            write_reports(out, &reports, *json)
        }
        Command::Selftest => {
            let checks = selftest(exec)?;
            for c in &checks {
                writeln!(
                    out,
                    "{} {}: {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )
                .map_err(io)?;
            }
            Ok(if checks.iter().all(|c| c.pass) { 0 } else { 1 })
        }
    }
}

fn write_reports(out: &mut dyn Write, reports: &[VerificationReport], json: bool) -> Result<i32> {
    let proved = reports
        .iter()
        .filter(|r| r.status == Status::Proved)
        .count();
    if json {
        let text = serde_json::to_string_pretty(reports).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{text}").map_err(io)?;
    } else {
        for r in reports {
            writeln!(out, "{}", r.to_text()).map_err(io)?;
        }
        writeln!(out, "proved: {proved}/{}", reports.len()).map_err(io)?;
    }
    Ok(if proved == reports.len() { 0 } else { 1 })
}

/// Prints a basis as a relation file that `groebner` can read back.
fn write_basis(out: &mut dyn Write, sys: &RelationFile, gb: &GroebnerBasis) -> Result<()> {
    writeln!(
        out,
        "# reduced {} basis, {} elements",
        gb.order().name(),
        gb.len()
    )
    .map_err(io)?;
    writeln!(out, "vars: {}", sys.vars.names().join(" ")).map_err(io)?;
    for g in gb.generators() {
        writeln!(out, "{}", g.render(gb.order())).map_err(io)?;
    }
    Ok(())
}

/// Two-way ideal membership between a computed basis and the reference set.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceComparison {
    pub reference_len: usize,
    pub missing: usize,
    pub extra: usize,
}

pub fn compare_with_reference(gb: &GroebnerBasis) -> Result<ReferenceComparison> {
    let reference = builtin_reference_basis();
    let missing = reference
        .relations
        .iter()
        .filter(|p| !is_member(p, gb))
        .count();
    let ref_gb = buchberger(&reference.relations, gb.order())?;
    let extra = gb
        .generators()
        .iter()
        .filter(|p| !is_member(p, &ref_gb))
        .count();
    Ok(ReferenceComparison {
        reference_len: reference.relations.len(),
        missing,
        extra,
    })
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: &str, pass: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        pass,
        detail,
    }
}

/// Tolerances of the oracle sweeps.
pub const TRIPLE_TOL: f64 = 1e-5;
pub const SECOND_TOL: f64 = 1e-4;

fn sweep_check(
    name: &str,
    model: &GasModel,
    specs: &[DerivSpec],
    tol: f64,
    exec: Execution,
) -> Check {
    let s = SweepSummary::new(sweep(model, specs, StatePoint::new(2.0, 3.0), exec), tol);
    let worst = s
        .worst
        .as_ref()
        .map_or(String::new(), |w| format!(" at {}", w.spec));
    check(
        name,
        s.pass(),
        format!(
            "{} compared, {} singular on both sides, {} over {tol:e}, {} errors, max deviation {:.2e}{worst}",
            s.compared,
            s.undefined.len(),
            s.failures,
            s.errors.len(),
            s.max_deviation()
        ),
    )
}

/// Runs every numeric and symbolic consistency check.
pub fn selftest(exec: Execution) -> Result<Vec<Check>> {
    let ideal = GasModel::ideal_gas(5.0 / 3.0)?;
    let mut checks = Vec::new();

    let mut maxwell_ok = 0;
    let mut worst = 0.0f64;
    for r in verify_batch(
        &maxwell_relations(),
        ConstraintSystem::shared(),
        &prover::default_models(),
        &prover::default_states(),
        exec,
    ) {
        let r = r?;
        worst = worst.max(r.max_residual());
        if r.status == Status::Proved && r.max_residual() < prover::CONFIRMATION_THRESHOLD {
            maxwell_ok += 1;
        }
    }
    checks.push(check(
        "maxwell",
        maxwell_ok == 4,
        format!("{maxwell_ok}/4 proved, max residual {worst:.2e}"),
    ));

    for kind in [EnumKind::Triples, EnumKind::Jacobians, EnumKind::Seconds] {
        let (count, specs) = enumerate(kind);
        let specs: Vec<DerivSpec> = specs.collect();
        let expanded = expand_all(&specs, exec);
        let failed = expanded.iter().filter(|r| r.is_err()).count();
        checks.push(check(
            &format!("expand {}", kind_name(kind)),
            failed == 0 && specs.len() == count,
            format!("{} expanded, {failed} failed", specs.len()),
        ));
        let tol = if kind == EnumKind::Seconds {
            SECOND_TOL
        } else {
            TRIPLE_TOL
        };
        checks.push(sweep_check(
            &format!("oracle {}", kind_name(kind)),
            &ideal,
            &specs,
            tol,
            exec,
        ));
    }

    let synthesis = GasModel::synthesis(GammaFn::new(vec![1.4, 0.01])?, 0.0, 0.0)?;
    let models = [
        (GasModel::ideal_gas(5.0 / 3.0)?, 1e-9),
        (GasModel::van_der_waals(1.0, 0.5, 7.0 / 5.0)?, 1e-9),
        (synthesis, SYNTHESIS_J_TOL),
    ];
    for (m, tol) in &models {
        let r = check_jacobian(m, &m.default_grid(), *tol, exec)?;
        checks.push(check(
            &format!("jacobian {}", m.name()),
            r.pass,
            format!("max |J-1| {:.2e} over {} states", r.max_deviation, r.states),
        ));
    }

    let states = [
        StatePoint::new(1.0, 1.0),
        StatePoint::new(2.0, 3.0),
        StatePoint::new(3.0, 1.5),
    ];
    let gammas = gamma_check(&ideal, &states)?;
    let gamma_ok = gammas.iter().all(|g| (g.gamma - 5.0 / 3.0).abs() < 1e-9);
    let recip = gammas.first().map_or(f64::NAN, |g| g.reciprocal_form);
    checks.push(check(
        "gamma",
        gamma_ok,
        format!(
            "cp/cv = f1*g2/(f2*g1) gives 5/3 at {} states; the printed form f2*g1/(f1*g2) gives {} (discrepancy flagged)",
            gammas.len(),
            format_value(recip)
        ),
    ));

    let sys = builtin_system();
    let gb = discover(&sys.relations, MonomialOrder::Lex)?;
    let cmp = compare_with_reference(&gb)?;
    checks.push(check(
        "discovery",
        cmp.missing == 0 && cmp.extra == 0,
        format!(
            "{} basis elements; {}/{} reference elements in the ideal, {} computed elements outside the reference ideal",
            gb.len(),
            cmp.reference_len - cmp.missing,
            cmp.reference_len,
            cmp.extra
        ),
    ));
    Ok(checks)
}

fn kind_name(kind: EnumKind) -> &'static str {
    match kind {
        EnumKind::Triples => "triples",
        EnumKind::Jacobians => "jacobians",
        EnumKind::Seconds => "seconds",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let cli =
            Cli::try_parse_from(std::iter::once("thermocalc").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let code = run(&cli, &mut buf).unwrap();
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn numbers_and_states() {
        assert_eq!(parse_number("5/3").unwrap(), 5.0 / 3.0);
        assert_eq!(parse_number("1.4").unwrap(), 1.4);
        assert!(parse_number("x").is_err());
        assert!(matches!(parse_number("1/0"), Err(Error::DivisionByZero)));
        assert_eq!(parse_state("2,3").unwrap(), StatePoint::new(2.0, 3.0));
        assert_eq!(format_value(0.9999999999999998), "1");
        assert_eq!(format_value(2.5), "2.5");
    }

    #[test]
    fn expand_examples() {
        assert_eq!(run_args(&["expand", "D(2,1,4)"]).1, "-g1 / g2\n");
        assert_eq!(run_args(&["expand", "--reduce", "J(3,4;1,2)"]).1, "1\n");
        assert_eq!(run_args(&["expand", "DD(3,1,2;2,1)"]).1, "f12\n");
    }

    #[test]
    fn eval_cp_minus_cv() {
        let (code, out) = run_args(&[
            "eval", "--model", "ideal", "--gamma", "5/3", "--at", "2,3", "cp - cv",
        ]);
        assert_eq!((code, out.as_str()), (0, "1\n"));
    }

    #[test]
    fn model_flags_are_validated() {
        let bad = ModelArgs {
            model: "plasma".into(),
            gamma: "5/3".into(),
            a: "0".into(),
            b: "0".into(),
            gamma_coeffs: None,
        };
        assert!(matches!(bad.build(), Err(Error::Usage(_))));
    }

    #[test]
    fn verify_exit_status() {
        assert_eq!(run_args(&["verify", "D(3,1,4) = D(2,4,1)"]).0, 0);
        let (code, out) = run_args(&["verify", "cp = cv"]);
        assert_eq!(code, 1);
        assert!(out.contains("status: refuted"));
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(run_args(&["enumerate", "jacobians"]).1, "1680\n");
        let (_, listed) = run_args(&["enumerate", "triples", "--list"]);
        assert_eq!(listed.lines().count(), 336);
        assert_eq!(listed.lines().next(), Some("(1,2,3)"));
    }
}
