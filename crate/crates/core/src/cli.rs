//! Command-line front end.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{AodeError, Result};
use crate::numbers::field::{degree_cap, with_degree_cap};
use crate::numbers::json::value_to_json;
use crate::poly::{parse_polynomial, parse_tuple, validate_input, BiPoly, Point};
use crate::puiseux::{default_bound, places_at};
use crate::solver::{classify, constant_solutions, critical_set, direct_method, solve_at};

#[derive(Parser, Debug)]
#[command(name = "aode", version, about = "Formal power series solutions of F(y, y') = 0")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Non-constant solutions with a given initial tuple.
    Solve(WithTuple),
    /// Classify all initial tuples by their number of solutions.
    Classify(Common),
    /// Places of the curve centered at a point.
    Places(WithTuple),
    /// The critical set V(F, y') ∪ V(F, dF/dy').
    Critical(Common),
    /// Constant solutions.
    Constants(Common),
    /// Solution by the separant recursion (simple points only).
    Direct(WithTuple),
    /// The truncation bound 2(deg_y F - 1) deg_y' F + 1.
    Bound(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// The equation, a polynomial in y and y'.
    #[arg(long, allow_hyphen_values = true)]
    pub ode: String,
    /// Truncation order.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub order: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum absolute degree of algebraic extensions.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub degree_cap: Option<u64>,
    /// Worker threads for classification.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: u64,
}

#[derive(Args, Debug, Clone)]
pub struct WithTuple {
    /// Initial tuple "c0, c1".
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Rendered output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

/// Parses the arguments (including the program name) and runs the command.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.command),
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code: 2 }
            }
        }
    }
}

pub fn run(cmd: &Command) -> Outcome {
    let common = match cmd {
        Command::Solve(w) | Command::Places(w) | Command::Direct(w) => &w.common,
        Command::Classify(c) | Command::Critical(c) | Command::Constants(c) | Command::Bound(c) => c,
    };
    let cap = common.degree_cap.map(|c| c as usize).unwrap_or_else(degree_cap);
    match with_degree_cap(cap, || dispatch(cmd, common)) {
        Ok(mut s) => {
            if !s.ends_with('\n') {
                s.push('\n');
            }
            Outcome { stdout: s, stderr: String::new(), code: 0 }
        }
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}

fn load(src: &str) -> Result<BiPoly> {
    let f = parse_polynomial(src)?;
    validate_input(&f)?;
    Ok(f)
}

fn tuple(src: &str) -> Result<Point> {
    let (c0, c1) = parse_tuple(src)?;
    Ok(Point::new(c0, c1))
}

fn emit(format: Format, text: impl FnOnce() -> String, json: impl FnOnce() -> Result<Value>) -> Result<String> {
    match format {
        Format::Text => Ok(text()),
        Format::Json => Ok(json()?.to_string()),
    }
}

fn dispatch(cmd: &Command, common: &Common) -> Result<String> {
    let f = load(&common.ode)?;
    let order = common.order.map(|n| n as usize);
    let fmt = common.format;
    match cmd {
        Command::Solve(w) => {
            let c = tuple(&w.at)?;
            let n = match order {
                Some(n) => n,
                None => match f.multiplicity_at(&c.y, &c.z) {
                    Ok(m) => 2 * m,
                    Err(AodeError::PointNotOnCurve) => 1,
                    Err(e) => return Err(e),
                },
            };
            let sols = solve_at(&f, &c, n)?;
            emit(
                fmt,
                || {
                    if sols.is_empty() {
                        format!("no non-constant solutions at {c}")
                    } else {
                        sols.iter().map(|s| s.render()).collect::<Vec<_>>().join("\n")
                    }
                },
                || Ok(Value::Array(sols.iter().map(|s| s.to_json()).collect())),
            )
        }
        Command::Classify(_) => {
            let cl = classify(&f, order.unwrap_or(1), common.jobs as usize)?;
            emit(fmt, || cl.render(), || Ok(cl.to_json()))
        }
        Command::Places(w) => {
            let c = tuple(&w.at)?;
            let places = places_at(&f, &c, order.unwrap_or_else(|| default_bound(&f)))?;
            emit(
                fmt,
                || {
                    places
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            let (t0, t1) = p.tangent().expect("certified at construction");
                            format!(
                                "P{}: A = {}, B = {}; e = {}, order = {}, tangent = ({}, {}), kind = {}",
                                i + 1,
                                p.a(),
                                p.b(),
                                p.e(),
                                p.order().expect("certified at construction"),
                                t0,
                                t1,
                                p.ramification_kind().expect("certified at construction").as_str()
                            )
                        })
                        .collect::<Vec<_>>()
                        .join("\n")
                },
                || Ok(Value::Array(places.iter().map(|p| p.to_json()).collect::<Result<_>>()?)),
            )
        }
        Command::Critical(_) => {
            let cs = critical_set(&f)?;
            emit(
                fmt,
                || cs.iter().map(|c| c.render()).collect::<Vec<_>>().join("\n"),
                || Ok(Value::Array(cs.iter().map(|c| c.to_json()).collect())),
            )
        }
        Command::Constants(_) => {
            let cs = constant_solutions(&f)?;
            emit(
                fmt,
                || {
                    if cs.is_empty() {
                        "no constant solutions".to_string()
                    } else {
                        cs.iter().map(|c| format!("y(t) = {c}")).collect::<Vec<_>>().join("\n")
                    }
                },
                || Ok(json!(cs.iter().map(value_to_json).collect::<Vec<_>>())),
            )
        }
        Command::Direct(w) => {
            let c = tuple(&w.at)?;
            let s = direct_method(&f, &c, order.unwrap_or(2 * f.multiplicity_at(&c.y, &c.z)?))?;
            emit(fmt, || s.render(), || Ok(s.to_json()))
        }
        Command::Bound(_) => {
            let b = default_bound(&f);
            emit(fmt, || b.to_string(), || Ok(json!(b)))
        }
    }
}
