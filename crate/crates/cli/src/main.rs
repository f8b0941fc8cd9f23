use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use parcohom_cli::{parse_character, parse_ops, run, to_json, CliError, Command, JobSpec, Suite};
use parcohom_core::hecke::ActsOn;
use parcohom_core::modgrp::GroupTag;

#[derive(Parser)]
#[command(name = "parcohom", version, about = "Parabolic cohomology of congruence subgroups over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimensions of H^1 and H^1_par.
    Cohomology(Common),
    /// Matrices of T_n (and optionally <d>) on H^1 and H^1_par.
    HeckeMatrix(Common),
    /// The algebra generated by T_1..T_B.
    HeckeAlgebra(Common),
    /// Hecke eigenvalue systems on the full and parabolic cohomology.
    EigenSystems(Common),
    /// Weight-one eigenforms mod p from weight p.
    WeightOne(Common),
    /// Run a verification suite.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    level: u64,
    /// Coefficients V_{k-2}.
    #[arg(long, default_value_t = 2)]
    weight: u32,
    #[arg(long)]
    prime: u64,
    #[arg(long, default_value = "gamma1", value_parser = parse_group)]
    group: GroupTag,
    /// `quadratic`, `trivial` or values on the standard generators of (Z/N)^*.
    #[arg(long)]
    character: Option<String>,
    /// `n`, `a..b` or `a,b,c`.
    #[arg(long)]
    op: Option<String>,
    #[arg(long)]
    bound: Option<u64>,
    #[arg(long)]
    output_bound: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "parabolic", value_parser = parse_on)]
    on: ActsOn,
    /// Second level M (Shapiro).
    #[arg(long)]
    modulus: Option<u64>,
    #[arg(long)]
    diamond: Option<u64>,
    #[arg(long)]
    mult: Option<u64>,
    #[arg(long)]
    twist: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    primes: Vec<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Zero the timing field so that output is byte-for-byte reproducible.
    #[arg(long)]
    stable: bool,
}

fn parse_group(s: &str) -> Result<GroupTag, String> {
    match s.to_ascii_lowercase().as_str() {
        "gamma1" | "g1" => Ok(GroupTag::Gamma1),
        "gamma0" | "g0" => Ok(GroupTag::Gamma0),
        _ => Err(format!("unknown group `{s}` (expected gamma0 or gamma1)")),
    }
}

fn parse_on(s: &str) -> Result<ActsOn, String> {
    match s {
        "full" => Ok(ActsOn::Full),
        "parabolic" | "par" => Ok(ActsOn::Parabolic),
        _ => Err(format!("unknown space `{s}` (expected full or parabolic)")),
    }
}

fn job_of(command: Command, suite: Option<Suite>, c: Common) -> Result<(JobSpec, bool), CliError> {
    let mut job = JobSpec::new(command, c.level, c.weight, c.prime);
    job.group = c.group;
    if let Some(s) = &c.character {
        job.character = Some(parse_character(s, c.level, c.prime)?);
    }
    if let Some(s) = &c.op {
        job.ops = parse_ops(s)?;
    }
    job.bound = c.bound;
    job.output_bound = c.output_bound;
    job.seed = c.seed;
    job.acts_on = c.on;
    job.suite = suite;
    job.modulus = c.modulus;
    job.diamond = c.diamond;
    job.mult = c.mult;
    job.twist = c.twist;
    job.primes = c.primes;
    job.out = c.out;
    job.cache = c.cache;
    Ok((job, c.stable))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let parsed = match cli.command {
        Cmd::Cohomology(c) => job_of(Command::Cohomology, None, c),
        Cmd::HeckeMatrix(c) => job_of(Command::HeckeMatrix, None, c),
        Cmd::HeckeAlgebra(c) => job_of(Command::HeckeAlgebra, None, c),
        Cmd::EigenSystems(c) => job_of(Command::EigenSystems, None, c),
        Cmd::WeightOne(c) => job_of(Command::WeightOne, None, c),
        Cmd::Verify { suite, common } => job_of(Command::Verify, Some(suite), common),
    };
    match parsed.and_then(|(job, stable)| execute(&job, stable)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(job: &JobSpec, stable: bool) -> Result<u8, CliError> {
    let env = run(job)?;
    let text = to_json(&env, stable)?;
    match &job.out {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => {
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    match env.payload.verification() {
        Some(false) => {
            eprintln!("verification failed");
            Ok(3)
        }
        _ => Ok(0),
    }
}
