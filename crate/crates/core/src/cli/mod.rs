//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 indeterminate or
//! unsupported computation, 3 parse or usage error.

pub mod parse;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::cubic::{build_cubic_context, verify_cubic_detailed};
use crate::error::{Error, Result};
use crate::formalcat::{check_spherical, mutate_left, mutate_right, serre_in, Context, Gen, ObjExpr};
use crate::mukai::{ch_sheaf, mukai_pairing, restricted_vector};
use crate::nodal::{build_context, build_quadric_context, kernel_generator_in, relative_serre, verify_dim_detailed, NodalSetup};
use crate::quadric::cohomology;
use crate::report::VerificationReport;

pub use parse::{parse_expr, parse_sheaf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INDETERMINATE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "nodal-kernel", version, about = "Exact Hom, mutation and Serre computations for nodal blow-ups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    Right,
    Left,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sheaf cohomology of a line or spinor bundle on a quadric.
    Cohom {
        #[arg(long)]
        quadric: u32,
        expr: String,
    },
    /// Graded Hom between two objects of a context.
    Hom {
        #[arg(long)]
        context: String,
        from: String,
        to: String,
    },
    /// Mutation of an object through an exceptional object.
    Mutate {
        #[arg(long)]
        context: String,
        #[arg(long, value_enum)]
        dir: Direction,
        #[arg(long)]
        through: String,
        expr: String,
    },
    /// Serre functor of the admissible piece, or the relative one.
    Serre {
        #[arg(long)]
        context: String,
        #[arg(long)]
        relative: bool,
        expr: String,
    },
    /// Kernel generator and its sphericity.
    Kernel {
        #[arg(long)]
        dim: i64,
    },
    /// Full verification for a range of dimensions `a..b` (inclusive).
    Verify {
        #[arg(long)]
        dims: String,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// The nodal cubic fourfold replay.
    Cubic4 {
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Mukai vector on the degree-6 K3 surface of a sheaf on the 3-dimensional quadric.
    Mukai { expr: String },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidDimension(_)
        | Error::InvalidQuadricDim(_)
        | Error::ParityMismatch { .. } => EXIT_USAGE,
        _ => EXIT_INDETERMINATE,
    }
}

/// Parses `a..b` (inclusive).
pub fn parse_dims(text: &str) -> Result<(i64, i64)> {
    let bad = |column| Error::Parse {
        column,
        message: "expected a range a..b".into(),
    };
    let (a, b) = text.split_once("..").ok_or_else(|| bad(1))?;
    let lo = a.trim().parse().map_err(|_| bad(1))?;
    let hi = b.trim().parse().map_err(|_| bad(a.chars().count() + 3))?;
    Ok((lo, hi))
}

/// Resolves `nodal:d`, `quadric:n` or `cubic`.
pub fn context_by_name(name: &str) -> Result<Context> {
    let usage = || Error::Parse {
        column: 1,
        message: format!("unknown context '{name}' (expected nodal:d, quadric:n or cubic)"),
    };
    if name == "cubic" {
        return build_cubic_context();
    }
    let (kind, value) = name.split_once(':').ok_or_else(usage)?;
    let value: i64 = value.parse().map_err(|_| usage())?;
    match kind {
        "nodal" => build_context(value),
        "quadric" => {
            let n = u32::try_from(value)
                .ok()
                .filter(|&n| n >= 1)
                .ok_or(Error::InvalidQuadricDim(value))?;
            build_quadric_context(n)
        }
        _ => Err(usage()),
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Undefined(e.to_string()))?;
    std::fs::write(path, text + "\n")
        .map_err(|e| Error::Undefined(format!("cannot write {}: {e}", path.display())))
}

/// Runs a command line; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<i32> {
    let mut lines: Vec<String> = Vec::new();
    let code = match cmd {
        Command::Cohom { quadric, expr } => {
            if *quadric == 0 {
                return Err(Error::InvalidQuadricDim(0));
            }
            let f = parse_sheaf(expr)?;
            lines.push(cohomology(*quadric, f)?.render());
            EXIT_OK
        }
        Command::Hom { context, from, to } => {
            let (a, b) = (parse_expr(from)?, parse_expr(to)?);
            let ctx = context_by_name(context)?;
            lines.push(ctx.hom(&a, &b)?.render());
            EXIT_OK
        }
        Command::Mutate { context, dir, through, expr } => {
            let (e, f) = (parse_expr(through)?, parse_expr(expr)?);
            let ctx = context_by_name(context)?;
            let (r, _) = match dir {
                Direction::Right => mutate_right(&ctx, &e, &f)?,
                Direction::Left => mutate_left(&ctx, &e, &f)?,
            };
            lines.push(r.render());
            EXIT_OK
        }
        Command::Serre { context, relative, expr } => {
            let f = parse_expr(expr)?;
            let ctx = context_by_name(context)?;
            let (r, _) = if *relative {
                relative_serre(&ctx, &f)?
            } else {
                serre_in(&ctx, ctx.perp(), &f)?
            };
            lines.push(r.render());
            EXIT_OK
        }
        Command::Kernel { dim } => {
            let setup = NodalSetup::new(*dim)?;
            let ctx = build_context(*dim)?;
            let (t, kctx) = kernel_generator_in(&ctx, &setup)?;
            let k = setup.spherical_degree();
            let report = check_spherical(&kctx, kctx.perp(), &t, k)?;
            let verdict = if report.pass { "pass" } else { "fail" };
            lines.push(format!("{}, {k}-spherical: {verdict}", t.render()));
            if report.pass {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Command::Verify { dims, json } => {
            let (lo, hi) = parse_dims(dims)?;
            if lo < 2 {
                return Err(Error::InvalidDimension(lo));
            }
            let results: Vec<(VerificationReport, Vec<Error>)> =
                (lo..=hi).into_par_iter().map(verify_dim_detailed).collect();
            for (r, _) in &results {
                let passed = r.items.iter().filter(|i| i.pass).count();
                let verdict = if r.all_pass { "pass" } else { "FAIL" };
                lines.push(format!("dim {:>2}: {passed}/{} items  {verdict}", r.dim, r.items.len()));
                for i in r.items.iter().filter(|i| !i.pass) {
                    lines.push(format!("  {}: expected {}, got {}", i.id, i.expected, i.got));
                }
            }
            let all_pass = results.iter().all(|(r, _)| r.all_pass);
            lines.push(format!("all_pass: {all_pass}"));
            if let Some(path) = json {
                let reports: Vec<&VerificationReport> = results.iter().map(|(r, _)| r).collect();
                write_json(path, &reports)?;
            }
            let indeterminate = results.iter().flat_map(|(_, e)| e).any(|e| exit_code(e) == EXIT_INDETERMINATE);
            if all_pass {
                EXIT_OK
            } else if indeterminate {
                EXIT_INDETERMINATE
            } else {
                EXIT_FAIL
            }
        }
        Command::Cubic4 { json } => {
            let (r, errors) = verify_cubic_detailed();
            for i in &r.items {
                let verdict = if i.pass { "pass" } else { "FAIL" };
                lines.push(format!("{:<28} {verdict}  {}", i.id, i.got));
            }
            lines.push("trace:".to_string());
            for (k, t) in r.trace.iter().enumerate() {
                let evidence = t.hom_evidence.as_ref().map(|g| format!("  Hom = {}", g.render())).unwrap_or_default();
                lines.push(format!("  {}. {} [{}] -> {}{evidence}", k + 1, t.step, t.rule, t.result));
            }
            lines.push(format!("all_pass: {}", r.all_pass));
            if let Some(path) = json {
                write_json(path, &r)?;
            }
            if r.all_pass {
                EXIT_OK
            } else if errors.iter().any(|e| exit_code(e) == EXIT_INDETERMINATE) {
                EXIT_INDETERMINATE
            } else {
                EXIT_FAIL
            }
        }
        Command::Mukai { expr } => {
            let f = match parse_expr(expr)? {
                ObjExpr::Gen(Gen::Sheaf(f) | Gen::Pull(f)) => f,
                other => {
                    return Err(Error::Parse {
                        column: 1,
                        message: format!("expected a sheaf F or t*F, got {}", other.render()),
                    })
                }
            };
            let v = restricted_vector(f)?;
            lines.push(format!("ch = {}", ch_sheaf(3, f)?));
            lines.push(format!("v = {v}"));
            lines.push(format!("<v,v> = {}", mukai_pairing(v, v)));
            EXIT_OK
        }
    };
    for l in lines {
        writeln!(out, "{l}").map_err(|e| Error::Undefined(e.to_string()))?;
    }
    Ok(code)
}
