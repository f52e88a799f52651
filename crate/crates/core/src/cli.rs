//! Command-line frontend.
//!
//! Every verb prints a single JSON document on stdout:
//! `{"ok":true,"result":...}` with exit code 0, or
//! `{"ok":false,"error":{"kind":...,"detail":...}}` with exit code 1 for
//! domain errors and 2 for usage errors. Operators are rendered in the
//! operator DSL and expressions in the scalar grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::coords::{self, CoordChange};
use crate::densalg::{parse_op, DensOp, Density};
use crate::duval::{duval_ovsienko_map, WeightedOp2};
use crate::error::{Error, Result};
use crate::riccati::{extract_coefficients, factorize_second_order};
use crate::sturm::{self, AffinePair, FactorizationOutcome, GenSL, Sign};
use crate::symexpr::{fmt_rational, parse_expr, parse_rational, EqualityConfig, Expr, Interval, Rational};

#[derive(Parser, Debug)]
#[command(name = "densfact", about = "Differential operators on densities on the line")]
struct Cli {
    /// Seed for the sampling of identity tests.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative tolerance of identity tests.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Number of sample points of identity tests.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Sampling interval, `lo:hi`.
    #[arg(long, global = true, value_parser = parse_domain)]
    domain: Option<Interval>,
    /// Read the single input term from a file instead of the command line.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Normal form of an operator.
    Normalize { op: Option<String> },
    /// Composition `a ∘ b`.
    Mul { a: String, b: String },
    /// Formal adjoint.
    Adjoint { op: Option<String> },
    /// `a ∘ b - b ∘ a`.
    Commutator { a: String, b: String },
    /// Weight of a homogeneous operator.
    Weight { op: Option<String> },
    /// The pencil member acting on densities of weight `--lambda`.
    Restrict {
        op: Option<String>,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        lambda: Rational,
    },
    /// Applies an operator to the density `profile |dx|^weight`.
    Apply {
        op: Option<String>,
        #[arg(long)]
        profile: String,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        weight: Rational,
    },
    /// Sturm-Liouville operator with coefficients gamma and theta.
    SlBuild(GslArgs),
    /// Potential u of the Sturm-Liouville operator.
    SlPotential(GslArgs),
    /// The invariant (gamma^2 - theta)^(-1/4).
    SlPsi(GslArgs),
    /// Factorization into two first-order factors, or its obstruction.
    SlFactor {
        #[command(flatten)]
        g: GslArgs,
        #[arg(long, default_value = "+", value_parser = ["+", "-", "both"], allow_hyphen_values = true)]
        sign: String,
        /// Kernel element of `d^2 + u` completing a degenerate outcome.
        #[arg(long, allow_hyphen_values = true)]
        kernel: Option<String>,
    },
    /// Factorization up to a zeroth-order remainder t^2 f.
    SlIncomplete {
        #[command(flatten)]
        g: GslArgs,
        #[arg(long, default_value = "+", value_parser = ["+", "-", "both"], allow_hyphen_values = true)]
        sign: String,
    },
    /// Factorization of a monic weight-2 second-order operator.
    Factor2 {
        op: Option<String>,
        #[arg(long, default_value = "+", value_parser = ["+", "-", "both"], allow_hyphen_values = true)]
        sign: String,
    },
    /// Schwarzian derivative of a map.
    Schwarzian { expr: Option<String> },
    /// Transformation of (gamma, theta) under `x -> map`.
    Transform {
        #[command(flatten)]
        g: GslArgs,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Checks that (gamma^2 - theta)|dx|^2 is carried along by the map.
    PsiCheck {
        #[command(flatten)]
        g: GslArgs,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Moves `a2 d^2 + a1 d + a0` from weight `--mu` to weight `--lambda`.
    Duval {
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        #[arg(long, allow_hyphen_values = true)]
        a0: String,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        mu: Rational,
        #[arg(long, value_parser = parse_rat, allow_hyphen_values = true)]
        lambda: Rational,
    },
}

#[derive(Args, Debug)]
struct GslArgs {
    #[arg(long, allow_hyphen_values = true)]
    gamma: String,
    #[arg(long, allow_hyphen_values = true)]
    theta: String,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// The new coordinate as a function of the old one.
    #[arg(long = "map", allow_hyphen_values = true)]
    forward: String,
    #[arg(long, allow_hyphen_values = true)]
    inverse: Option<String>,
}

fn parse_rat(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

fn parse_domain(s: &str) -> std::result::Result<Interval, String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad upper bound `{hi}`"))?;
    Interval::new(lo, hi).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code together with the text for stdout.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (0, e.to_string().trim_end().to_string()),
                _ => (2, error_doc("usage", e.to_string().trim_end())),
            };
        }
    };
    match dispatch(&cli) {
        Ok(v) => (0, json!({"ok": true, "result": v}).to_string()),
        Err(Failure::Usage(msg)) => (2, error_doc("usage", &msg)),
        Err(Failure::Domain(e)) => (1, error_doc(e.kind(), &e.to_string())),
    }
}

fn error_doc(kind: &str, detail: &str) -> String {
    json!({"ok": false, "error": {"kind": kind, "detail": detail}}).to_string()
}

fn config(cli: &Cli) -> Result<EqualityConfig> {
    let d = EqualityConfig::default();
    EqualityConfig::new(
        cli.samples.unwrap_or(d.sample_count()),
        cli.domain.unwrap_or(d.domain()),
        cli.tol.unwrap_or(d.tolerance()),
        d.max_rejects(),
        cli.seed.unwrap_or(d.rng_seed()),
    )
}

fn term(cli: &Cli, arg: &Option<String>) -> std::result::Result<String, Failure> {
    match (arg, &cli.file) {
        (Some(t), None) => Ok(t.clone()),
        (None, Some(path)) => std::fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display()))),
        (Some(_), Some(_)) => Err(Failure::Usage("give the input either inline or with --file, not both".into())),
        (None, None) => Err(Failure::Usage("missing input term".into())),
    }
}

fn expr(s: &str) -> Result<Expr> {
    Ok(parse_expr(s)?.simplify())
}

fn show(e: &Expr) -> Value {
    Value::String(e.pretty())
}

fn rat_json(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

fn op_json(a: &DensOp) -> Value {
    json!({"op": a.to_dsl(), "weight": fmt_rational(a.weight())})
}

fn pair_json(p: &AffinePair) -> Value {
    json!({"c0": show(&p.c0), "c1": show(&p.c1)})
}

fn gsl(g: &GslArgs) -> Result<GenSL> {
    Ok(GenSL::new(expr(&g.gamma)?, expr(&g.theta)?))
}

fn coord(m: &MapArgs, cfg: &EqualityConfig) -> Result<CoordChange> {
    let inverse = m.inverse.as_deref().map(expr).transpose()?;
    let c = CoordChange::new(expr(&m.forward)?, inverse)?;
    c.validate(cfg)?;
    Ok(c)
}

fn signs(s: &str) -> Vec<Sign> {
    match s {
        "+" => vec![Sign::Plus],
        "-" => vec![Sign::Minus],
        _ => Sign::both().to_vec(),
    }
}

fn outcome_json(out: &FactorizationOutcome, lambda_hat: bool) -> Value {
    match out {
        FactorizationOutcome::Complete { alpha, beta } => {
            let mut v = json!({"tag": "complete", "alpha": pair_json(alpha), "beta": pair_json(beta)});
            if lambda_hat {
                let (b0, b1) = beta.in_lambda_hat();
                v["b0"] = show(&b0);
                v["b1"] = show(&b1);
            }
            v
        }
        FactorizationOutcome::Degenerate(d) => json!({
            "tag": "degenerate",
            "beta1": show(&d.beta1),
            "shift": show(&d.shift),
            "potential": show(&d.potential),
        }),
        FactorizationOutcome::Obstructed { residual } => json!({"tag": "obstructed", "residual": show(residual)}),
    }
}

/// A single result for one sign, or `{"branches": [...]}` for both.
fn per_sign(sign: &str, mut f: impl FnMut(Sign) -> Result<Value>) -> Result<Value> {
    let chosen = signs(sign);
    if chosen.len() == 1 {
        return f(chosen[0]);
    }
    let mut branches = Vec::new();
    for s in chosen {
        branches.push(json!({"sign": s.as_str(), "outcome": f(s)?}));
    }
    Ok(json!({ "branches": branches }))
}

fn dispatch(cli: &Cli) -> std::result::Result<Value, Failure> {
    let cfg = config(cli)?;
    let value = match &cli.verb {
        Verb::Normalize { op } => op_json(&parse_op(&term(cli, op)?)?),
        Verb::Mul { a, b } => op_json(&parse_op(a)?.multiply(&parse_op(b)?)),
        Verb::Adjoint { op } => op_json(&parse_op(&term(cli, op)?)?.adjoint()),
        Verb::Commutator { a, b } => op_json(&parse_op(a)?.commutator(&parse_op(b)?)),
        Verb::Weight { op } => rat_json(parse_op(&term(cli, op)?)?.weight()),
        Verb::Restrict { op, lambda } => {
            let s = parse_op(&term(cli, op)?)?.restrict(lambda);
            json!({"op": s.to_dsl(), "weight_in": rat_json(&s.weight_in), "weight_out": rat_json(&s.weight_out)})
        }
        Verb::Apply { op, profile, weight } => {
            let rho = Density::new(weight.clone(), expr(profile)?);
            let out = parse_op(&term(cli, op)?)?.apply(&rho);
            json!({"profile": show(&out.profile), "weight": rat_json(&out.weight)})
        }
        Verb::SlBuild(g) => op_json(&sturm::build_gsl(&gsl(g)?)),
        Verb::SlPotential(g) => show(&sturm::potential(&gsl(g)?)),
        Verb::SlPsi(g) => show(&sturm::psi_invariant(&gsl(g)?, &cfg)?),
        Verb::SlFactor { g, sign, kernel } => {
            let g = gsl(g)?;
            let kernel = kernel.as_deref().map(expr).transpose()?;
            per_sign(sign, |s| {
                let mut out = sturm::factorize_gsl(&g, s, &cfg)?;
                if let (FactorizationOutcome::Degenerate(d), Some(phi)) = (&out, &kernel) {
                    out = d.complete(phi, &cfg)?;
                }
                Ok(outcome_json(&out, true))
            })?
        }
        Verb::SlIncomplete { g, sign } => {
            let g = gsl(g)?;
            per_sign(sign, |s| {
                let inc = sturm::factorize_incomplete(&g, s, &cfg)?;
                Ok(json!({
                    "b0": show(&inc.b0),
                    "b1": show(&inc.b1),
                    "f": show(&inc.f),
                    "alpha": pair_json(&inc.alpha),
                    "beta": pair_json(&inc.beta),
                }))
            })?
        }
        Verb::Factor2 { op, sign } => {
            let d = extract_coefficients(&parse_op(&term(cli, op)?)?)?;
            per_sign(sign, |s| Ok(outcome_json(&factorize_second_order(&d, s, &cfg)?, false)))?
        }
        Verb::Schwarzian { expr: e } => show(&coords::schwarzian(&expr(&term(cli, e)?)?)?),
        Verb::Transform { g, map } => {
            let moved = coords::transform_gsl(&gsl(g)?, &coord(map, &cfg)?)?;
            json!({
                "gamma": show(&moved.gamma),
                "theta": show(&moved.theta),
                "potential": show(&sturm::potential(&moved)),
            })
        }
        Verb::PsiCheck { g, map } => Value::Bool(coords::check_psi_invariance(&gsl(g)?, &coord(map, &cfg)?, &cfg)?),
        Verb::Duval { a2, a1, a0, mu, lambda } => {
            let src = WeightedOp2::new(expr(a2)?, expr(a1)?, expr(a0)?, mu.clone());
            let out = duval_ovsienko_map(&src, lambda)?;
            json!({"a2": show(&out.a2), "a1": show(&out.a1), "a0": show(&out.a0), "weight": rat_json(&out.weight)})
        }
    };
    Ok(value)
}
