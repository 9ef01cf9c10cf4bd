use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pframe::config::DEFAULT_SEED;
use pframe::oracle::GenMode;
use pframe::{ExponentMode, PIndex, SearchConfig, TheoremTag};
use pframe_cli::{cmd_analyze, cmd_check, cmd_gen, cmd_verify, exit, parse_seed_range, GenArgs, Outcome, VerifyArgs};

/// Perturbation bounds for frames and p-approximate Schauder frames.
#[derive(Parser, Debug)]
#[command(name = "pframe", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Slack for bracketing comparisons and for refuting an inequality.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    /// Width below which an operator norm enclosure counts as exact.
    #[arg(long, global = true, default_value_t = 1e-9)]
    exact_tol: f64,
    /// Relative singular value threshold for singularity.
    #[arg(long, global = true, default_value_t = 1e-10)]
    singular_tol: f64,
    /// Sphere samples for norm lower bounds and counterexample searches.
    #[arg(long, global = true, default_value_t = 4096)]
    samples: usize,
    /// Sphere samples for the brute-force oracles.
    #[arg(long, global = true, default_value_t = 8192)]
    oracle_samples: usize,
    #[arg(long, global = true, env = "PFRAME_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Write the JSON document here instead of standard output.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Exponent used for the corollary's λ (default: as stated, or conjugate with --strict when p ≠ 2).
    #[arg(long, global = true)]
    exponent_mode: Option<ExponentMode>,
    #[arg(long, global = true)]
    strict: bool,
    /// Record wall-clock timings (makes output nondeterministic).
    #[arg(long, global = true)]
    timings: bool,
}

impl Global {
    fn config(&self) -> SearchConfig {
        let mut cfg = SearchConfig::default().with_seed(self.seed);
        cfg.samples = self.samples;
        cfg.oracle_samples = self.oracle_samples;
        cfg.tol.bracket = self.tol;
        cfg.tol.exact = self.exact_tol;
        cfg.tol.singular = self.singular_tol;
        cfg
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ASF status, bounds and operator norms of an instance.
    Analyze { path: PathBuf },
    /// Check one theorem's hypotheses and predicted bounds on an instance.
    Check {
        path: PathBuf,
        #[arg(long)]
        theorem: TheoremTag,
    },
    /// Bracket a theorem on seeded random instances.
    Verify {
        /// Inclusive range `a..b`.
        #[arg(long, default_value = "1..100")]
        seeds: String,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value = "2")]
        p: PIndex,
        #[arg(long, default_value_t = 0.05)]
        scale: f64,
        #[arg(long)]
        theorem: TheoremTag,
        #[arg(long)]
        mode: Option<GenMode>,
    },
    /// Write a seeded random instance.
    Gen {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value = "2")]
        p: PIndex,
        #[arg(long, default_value_t = 0.05)]
        scale: f64,
        /// Defaults to `hilbert` for p = 2 and `general` otherwise.
        #[arg(long)]
        mode: Option<GenMode>,
        /// Shape the drawn constants for this theorem.
        #[arg(long)]
        theorem: Option<TheoremTag>,
    },
}

fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let cfg = g.config();
    match &cli.command {
        Command::Analyze { path } => cmd_analyze(path, &cfg),
        Command::Check { path, theorem } => cmd_check(path, *theorem, g.exponent_mode, g.strict, g.timings, &cfg),
        Command::Verify {
            seeds,
            dim,
            count,
            p,
            scale,
            theorem,
            mode,
        } => cmd_verify(
            &VerifyArgs {
                seeds: parse_seed_range(seeds)?,
                dim: *dim,
                count: *count,
                p: *p,
                scale: *scale,
                theorem: *theorem,
                mode: *mode,
                exponent_mode: g.exponent_mode,
                strict: g.strict,
            },
            &cfg,
        ),
        Command::Gen {
            dim,
            count,
            p,
            scale,
            mode,
            theorem,
        } => cmd_gen(
            &GenArgs {
                seed: g.seed,
                dim: *dim,
                count: *count,
                p: *p,
                scale: *scale,
                mode: mode.unwrap_or(if *p == PIndex::TWO {
                    GenMode::HilbertCanonical
                } else {
                    GenMode::GeneralPasf
                }),
                theorem: *theorem,
            },
            &cfg,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(exit::USAGE_OR_IO as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|out| {
        match &cli.global.output {
            Some(path) => fs::write(path, &out.json).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{}", out.json),
        }
        Ok(out.exit_code)
    });
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit::USAGE_OR_IO as u8)
        }
    }
}
