mod commands;
mod config;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use bnint::{AxiomTag, RuleId, Tuple};
use clap::{Parser, Subcommand};

use commands::{Exit, Outcome, SporadicArgs, EXIT_INPUT};
use config::GlobalOpts;

/// Checks the combinatorial reductions behind interpolation for
/// Brill-Noether curves.
///
/// Exit codes: 0 success or holds, 1 input error, 2 mathematical
/// exception, 3 reproduction mismatch, 4 irreducible.
#[derive(Debug, Parser)]
#[command(name = "bnint", version, about, long_about = None)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, clap::Args)]
struct Triple {
    #[arg(allow_negative_numbers = true)]
    d: i64,
    #[arg(allow_negative_numbers = true)]
    g: i64,
    #[arg(allow_negative_numbers = true)]
    r: i64,
}

#[derive(Debug, Clone, Copy, clap::Args)]
struct Five {
    #[arg(allow_negative_numbers = true)]
    d: i64,
    #[arg(allow_negative_numbers = true)]
    g: i64,
    #[arg(allow_negative_numbers = true)]
    r: i64,
    #[arg(allow_negative_numbers = true)]
    l: i64,
    #[arg(allow_negative_numbers = true)]
    m: i64,
}

impl From<Five> for Tuple {
    fn from(f: Five) -> Self {
        Tuple::new(f.d, f.g, f.r, f.l, f.m)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Does interpolation hold for a general BN-curve of degree d and genus g in P^r?
    Check(Triple),
    /// Number of general points a BN-curve passes through.
    MaxPoints(Triple),
    /// Is (d, g, r, l, m) a good tuple?
    Good(Five),
    /// The slope defect delta of (d, g, r, l, m).
    Delta(Five),
    /// Reduce every sporadic tuple and compare the irreducible ones with the table.
    Sporadic {
        /// constants.json whose `sporadic30` is the expected table.
        #[arg(long)]
        expected: Option<PathBuf>,
        /// Leave a rule out of the search (repeatable).
        #[arg(long = "disable-rule")]
        disable_rule: Vec<RuleId>,
        /// Largest r searched.
        #[arg(long, default_value_t = 13)]
        rmax: i64,
        /// Also write every examined tuple as CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check that every good tuple with large r reduces.
    #[command(alias = "coverage")]
    Thm14 {
        #[arg(long, default_value_t = 14)]
        rmin: i64,
        #[arg(long)]
        rmax: i64,
    },
    /// Build and re-check a certificate for (d, g, r, l, m).
    Certify {
        #[command(flatten)]
        tuple: Five,
        /// Write the certificate JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Drop a built-in axiom family (repeatable).
        #[arg(long = "without-axiom")]
        without_axiom: Vec<AxiomTag>,
    },
    /// Re-check a certificate file.
    Verify { path: PathBuf },
    /// Is a collection of modification types erasable?
    Erasable {
        #[arg(long)]
        r: u32,
        /// Strongly general type `i,j=count` (repeatable).
        #[arg(long = "s", value_parser = commands::parse_type_count)]
        strong: Vec<(u32, u32, u32)>,
        /// Weakly general type `i,j=count` (repeatable).
        #[arg(long = "w", value_parser = commands::parse_type_count)]
        weak: Vec<(u32, u32, u32)>,
    },
    /// Print the embedded tables as constants.json.
    DumpConstants,
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>)> {
    let mut s = cli.opts.settings()?;
    if let Some(n) = s.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let out = match cli.command {
        Command::Check(t) => commands::check(&s, t.d, t.g, t.r)?,
        Command::MaxPoints(t) => commands::max_points_cmd(&s, t.d, t.g, t.r)?,
        Command::Good(t) => commands::good_cmd(&s, t.into())?,
        Command::Delta(t) => commands::delta_cmd(&s, t.into())?,
        Command::Sporadic {
            expected,
            disable_rule,
            rmax,
            csv,
        } => commands::sporadic(
            &s,
            SporadicArgs {
                expected: expected.as_deref(),
                disabled: &disable_rule,
                r_max: rmax,
                csv: csv.as_deref(),
            },
        )?,
        Command::Thm14 { rmin, rmax } => commands::thm14(&s, rmin, rmax)?,
        Command::Certify {
            tuple,
            json,
            without_axiom,
        } => {
            for tag in without_axiom {
                s.axioms = s.axioms.without(tag);
            }
            commands::certify(&s, tuple.into(), json.as_deref())?
        }
        Command::Verify { path } => commands::verify(&s, &path)?,
        Command::Erasable { r, strong, weak } => commands::erasable(&s, r, &strong, &weak)?,
        Command::DumpConstants => commands::dump_constants(&s)?,
    };
    Ok((out, s.output))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok((out, path)) => {
            let written = match path {
                Some(p) => std::fs::write(&p, &out.text)
                    .map_err(|e| format!("writing {}: {e}", p.display())),
                None => std::io::stdout()
                    .write_all(out.text.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            let code = e.downcast_ref::<Exit>().map_or(EXIT_INPUT, |x| x.code);
            eprintln!("{e:#}");
            ExitCode::from(code)
        }
    }
}
