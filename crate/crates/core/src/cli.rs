//! The `modlift` command line.
//!
//! Exit codes: 0 lift / success, 1 no-lift or table mismatch, 2 invalid input, 3 I/O failure,
//! 4 resource cap exceeded, 5 internal consistency failure.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classify::{classification_table, mismatches, render_json, render_text, TableOptions, SUPPORTED_Q};
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::io::{GroupCache, MatrixFile};
use crate::lift::{
    lift_to_precision_with, witness_validate, DirectClosure, GroupProvider, LiftConfig, LiftPath, DEFAULT_UNKNOWN_CAP,
};
use crate::pascal::pascal_lemma_check;
use crate::sl2::RepresentationSpec;

pub const EXIT_LIFT: i32 = 0;
pub const EXIT_NO_LIFT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

const MAX_PRECISION: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "modlift", version, about = "Lifting SL2(q) modules from F_p to Z/p^sZ")]
pub struct Cli {
    /// Accept field sizes outside 2, 3, 4, 5, 7, 8, 9.
    #[arg(long, global = true)]
    pub allow_large: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the generator images of a module as matrix files.
    Rep(RepArgs),
    /// Decide whether a module lifts.
    Check(CheckArgs),
    /// Decide every module for every field size up to --max-q.
    Table(TableArgs),
    /// Verify the Pascal-matrix entry identities.
    Pascal(PascalArgs),
}

#[derive(Args, Debug)]
pub struct RepArgs {
    #[arg(long)]
    pub q: u64,
    /// V1..Vp, Lambda; `*` for the dual, `^k` for a Frobenius twist.
    #[arg(long)]
    pub module: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub module: String,
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    #[arg(long, default_value = "borel", value_parser = parse_path)]
    pub path: LiftPath,
    /// Directory for the generator images of the lift.
    #[arg(long)]
    pub emit_witness: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_UNKNOWN_CAP)]
    pub unknown_cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    #[arg(long, default_value_t = 9)]
    pub max_q: u64,
    #[arg(long, default_value_t = 2)]
    pub s: u32,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Compare against the reference classification and exit 1 on any difference.
    #[arg(long)]
    pub expected: bool,
    #[arg(long, default_value = "borel", value_parser = parse_path)]
    pub path: LiftPath,
    #[arg(long, default_value_t = DEFAULT_UNKNOWN_CAP)]
    pub unknown_cap: usize,
    /// Add wall time per cell.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Args, Debug)]
pub struct PascalArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub lmax: usize,
}

fn parse_path(s: &str) -> std::result::Result<LiftPath, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io(_) => EXIT_IO,
        Error::ClosureCapExceeded { .. } | Error::UnknownCapExceeded { .. } | Error::SearchCapExceeded { .. } => EXIT_CAP,
        Error::PathDisagreement(_) | Error::Invariant(_) => EXIT_INTERNAL,
        _ => EXIT_INVALID,
    }
}

fn check_field_size(q: u64, allow_large: bool) -> Result<()> {
    if prime_power(q).is_none() {
        return Err(Error::InvalidParameter(format!("{q} is not a prime power")));
    }
    if !allow_large && !SUPPORTED_Q.contains(&q) {
        return Err(Error::InvalidParameter(format!("q = {q} needs --allow-large")));
    }
    Ok(())
}

fn check_precision(s: u32) -> Result<()> {
    if !(2..=MAX_PRECISION).contains(&s) {
        return Err(Error::InvalidParameter(format!("--s must be between 2 and {MAX_PRECISION}")));
    }
    Ok(())
}

fn provider() -> Result<Box<dyn GroupProvider>> {
    Ok(match GroupCache::from_env()? {
        Some(cache) => Box::new(cache),
        None => Box::new(DirectClosure::default()),
    })
}

fn write_matrices(dir: &Path, named: &[(&str, MatrixFile)]) -> Result<()> {
    fs::create_dir_all(dir)?;
    for (name, file) in named {
        let path = dir.join(format!("{name}.json"));
        file.write(&path)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_rep(args: &RepArgs, allow_large: bool) -> Result<i32> {
    check_field_size(args.q, allow_large)?;
    let spec = RepresentationSpec::parse(args.q, &args.module)?;
    let images = spec.generator_images()?;
    let files: Vec<(&str, MatrixFile)> = images
        .named()
        .iter()
        .map(|(name, m)| (*name, MatrixFile::from_matrix(m, Some(spec.r), Some(format!("{spec} {name}")))))
        .collect();
    write_matrices(&args.out, &files)?;
    Ok(EXIT_LIFT)
}

fn cmd_check(args: &CheckArgs, allow_large: bool) -> Result<i32> {
    check_field_size(args.q, allow_large)?;
    check_precision(args.s)?;
    let spec = RepresentationSpec::parse(args.q, &args.module)?;
    let config = LiftConfig { target: args.s, path: args.path, unknown_cap: args.unknown_cap, ..LiftConfig::default() };
    let report = lift_to_precision_with(&spec, &config, provider()?.as_ref())?;

    println!("{spec}: {}", report.decision);
    println!("precision: {} of {}", report.achieved_precision, report.target);
    for outcome in &report.outcomes {
        println!("path {}: |G| = {}", outcome.path, outcome.group_order);
        for level in &outcome.levels {
            let s = &level.stats;
            println!(
                "  level {} -> {}: {} unknowns ({} nominal), {} equations, rank {}, {}",
                level.level,
                level.level + 1,
                s.unknowns,
                s.nominal_unknowns,
                s.equations,
                s.rank,
                match s.nullity {
                    Some(k) => format!("nullity {k}"),
                    None => "inconsistent".to_string(),
                }
            );
        }
    }

    if let Some(dir) = &args.emit_witness {
        match &report.witness {
            Some(witness) => {
                if !witness_validate(witness) {
                    return Err(Error::Invariant("witness failed validation".into()));
                }
                let names: &[&str] = match report.authoritative().path {
                    LiftPath::Full => &["alpha", "beta", "gamma"],
                    _ => &["alpha", "gamma"],
                };
                let files: Vec<(&str, MatrixFile)> = names
                    .iter()
                    .zip(witness.generator_images())
                    .map(|(name, m)| (*name, MatrixFile::from_matrix(&m, Some(spec.r), Some(format!("{spec} {name} lift")))))
                    .collect();
                write_matrices(dir, &files)?;
            }
            None => println!("no witness to emit"),
        }
    }
    Ok(if report.decision.is_liftable() { EXIT_LIFT } else { EXIT_NO_LIFT })
}

fn cmd_table(args: &TableArgs, allow_large: bool) -> Result<i32> {
    check_precision(args.s)?;
    let options = TableOptions {
        max_q: args.max_q,
        target: args.s,
        path: args.path,
        allow_large,
        unknown_cap: args.unknown_cap,
        timings: args.timings,
    };
    let rows = classification_table(&options, provider()?.as_ref())?;
    match args.format {
        Format::Text => print!("{}", render_text(&rows)),
        Format::Json => print!("{}", render_json(&rows)?),
    }
    if !args.expected {
        return Ok(EXIT_LIFT);
    }
    let diffs = mismatches(&rows)?;
    for d in &diffs {
        eprintln!("mismatch: q = {} {}: expected {}, got {}", d.q, d.module, d.expected, d.actual);
    }
    eprintln!("{} of {} cells match the reference table", rows.len() - diffs.len(), rows.len());
    Ok(if diffs.is_empty() { EXIT_LIFT } else { EXIT_NO_LIFT })
}

fn cmd_pascal(args: &PascalArgs) -> Result<i32> {
    if args.n < 3 || args.lmax == 0 || args.lmax + 2 > args.n {
        return Err(Error::InvalidParameter(format!("need n >= 3 and 1 <= lmax <= n - 2, got n = {}, lmax = {}", args.n, args.lmax)));
    }
    let mut all = true;
    for ell in 1..=args.lmax {
        let report = pascal_lemma_check(args.n, ell)?;
        for check in &report.checks {
            println!("l = {ell}: {check}");
        }
        all &= report.all_passed();
    }
    println!("{}", if all { "all identities hold" } else { "some identities fail" });
    Ok(if all { EXIT_LIFT } else { EXIT_NO_LIFT })
}

pub fn dispatch(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Rep(args) => cmd_rep(args, cli.allow_large),
        Command::Check(args) => cmd_check(args, cli.allow_large),
        Command::Table(args) => cmd_table(args, cli.allow_large),
        Command::Pascal(args) => cmd_pascal(args),
    }
}

/// Parses `args` (program name first) and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_LIFT };
        }
    };
    match dispatch(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}
