//! Command-line front end. [`run`] takes the argument list and output sinks
//! and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::error::{Error, Result};
use crate::perm::Permutation;
use crate::reduce::reduce_pair;
use crate::shuffle::{iter_shuffles, shuffles_with_k_descents};
use crate::stats::{self, Statistic};
use crate::verify::{self, CompatMode, IdentityKind, Limits, Outcome, Report, MAX_TOTAL_ENV};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "shufcompat",
    version,
    about = "Permutation statistics over shuffle sets"
)]
pub struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value = "text")]
    pub format: Format,

    /// Print wall time after verification reports
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a statistic on a permutation
    Stat {
        statistic: Statistic,
        perm: Permutation,
    },
    /// List the shuffles of two permutations with disjoint domains
    Shuffles {
        pi: Permutation,
        sigma: Permutation,
        /// Keep only shuffles with exactly this many descents
        #[arg(long)]
        descents: Option<usize>,
    },
    /// Distribution of a statistic over a shuffle set
    Dist {
        statistic: Statistic,
        pi: Permutation,
        sigma: Permutation,
    },
    /// Reduce a pair to its canonical form and print the bijection trace
    Reduce {
        statistic: Statistic,
        pi: Permutation,
        sigma: Permutation,
    },
    /// Check shuffle compatibility exhaustively for fixed lengths
    Verify {
        statistic: Statistic,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "reduced_pi")]
        mode: CompatMode,
    },
    /// Replay a reduction on every shuffle and audit it
    Audit {
        statistic: Statistic,
        pi: Permutation,
        sigma: Permutation,
    },
    /// Check a generating-function identity (maj, maj_des, word_base)
    Identity {
        which: IdentityKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Search for a witness of non-compatibility
    Counterexample {
        statistic: Statistic,
        /// Largest m+n searched
        #[arg(long)]
        max: usize,
    },
    /// Exhaustive evidence for the compatibility of (udr, pk, des)
    Conjecture {
        which: ConjectureKind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConjectureKind {
    UdrPkDes,
}

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit_json(out: &mut dyn Write, v: &serde_json::Value) -> Result<()> {
    let s = serde_json::to_string_pretty(v).expect("json renders");
    writeln!(out, "{s}").map_err(io_err)
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidArgument(format!("write failed: {e}"))
}

fn report_code(r: &Report) -> i32 {
    match r.outcome {
        Outcome::Pass => EXIT_OK,
        Outcome::Fail => EXIT_FAIL,
        Outcome::Refused => EXIT_USAGE,
    }
}

fn emit_report(cli: &Cli, out: &mut dyn Write, r: &Report) -> Result<i32> {
    match cli.format {
        Format::Text => {
            writeln!(out, "{r}").map_err(io_err)?;
            if cli.timing {
                writeln!(out, "elapsed: {:.3?}", r.elapsed).map_err(io_err)?;
            }
        }
        Format::Json => {
            let mut v = r.to_json();
            if cli.timing {
                v["elapsed_seconds"] = json!(r.elapsed.as_secs_f64());
            }
            emit_json(out, &v)?;
        }
    }
    Ok(report_code(r))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io_err);
    match &cli.command {
        Command::Stat { statistic, perm } => {
            let v = stats::evaluate(statistic, perm);
            match cli.format {
                Format::Text => w(out, v.to_string())?,
                Format::Json => emit_json(
                    out,
                    &json!({"statistic": statistic, "permutation": perm, "value": v.to_string()}),
                )?,
            }
        }
        Command::Shuffles {
            pi,
            sigma,
            descents,
        } => {
            pi.ensure_disjoint(sigma)?;
            let list: Box<dyn Iterator<Item = Permutation>> = match descents {
                Some(k) => Box::new(shuffles_with_k_descents(pi, sigma, *k)?.into_iter()),
                None => Box::new(iter_shuffles(pi, sigma)?),
            };
            match cli.format {
                Format::Text => {
                    for t in list {
                        w(out, t.to_string())?;
                    }
                }
                Format::Json => emit_json(out, &json!(list.collect::<Vec<_>>()))?,
            }
        }
        Command::Dist {
            statistic,
            pi,
            sigma,
        } => {
            let dist: stats::Distribution = iter_shuffles(pi, sigma)?
                .map(|t| statistic.evaluate(&t))
                .collect();
            match cli.format {
                Format::Text => w(out, dist.to_string())?,
                Format::Json => emit_json(
                    out,
                    &json!({"statistic": statistic, "pi": pi, "sigma": sigma, "distribution": dist}),
                )?,
            }
        }
        Command::Reduce {
            statistic,
            pi,
            sigma,
        } => {
            let red = reduce_pair(statistic, pi, sigma)?;
            match cli.format {
                Format::Text => {
                    if !red.normalization.is_empty() {
                        w(out, format!("normalization\n{}", red.normalization))?;
                    }
                    w(out, format!("reduction\n{}", red.pipeline))?;
                    w(out, format!("canonical pair {}", red.target()))?;
                }
                Format::Json => {
                    let mut v = serde_json::to_value(&red).expect("reduction serializes");
                    v["canonical_pair"] = json!(red.target());
                    emit_json(out, &v)?;
                }
            }
        }
        Command::Verify {
            statistic,
            m,
            n,
            mode,
        } => {
            let r = verify::check_compatibility(statistic, *m, *n, *mode, &limits()?)?;
            return emit_report(cli, out, &r);
        }
        Command::Audit {
            statistic,
            pi,
            sigma,
        } => {
            let r = verify::check_bijection_pipeline(statistic, pi, sigma)?;
            return emit_report(cli, out, &r);
        }
        Command::Identity { which, m, n } => {
            let r = verify::check_identity(*which, *m, *n, &limits()?)?;
            return emit_report(cli, out, &r);
        }
        Command::Counterexample { statistic, max } => {
            let r = verify::find_counterexample(statistic, *max, &limits()?)?;
            return emit_report(cli, out, &r);
        }
        Command::Conjecture {
            which: ConjectureKind::UdrPkDes,
            m,
            n,
        } => {
            let r = verify::check_conjecture_udr_pk_des(*m, *n, &limits()?)?;
            return emit_report(cli, out, &r);
        }
    }
    Ok(EXIT_OK)
}

fn limits() -> Result<Limits> {
    Limits::from_env().map_err(|e| Error::InvalidArgument(format!("{e} (from {MAX_TOTAL_ENV})")))
}
