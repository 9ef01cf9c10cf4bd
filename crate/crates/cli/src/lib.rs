//! Command implementations behind the `pframe` binary.
//!
//! Each command returns the JSON it would emit together with its exit code,
//! so the binary only handles argument parsing and output.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use pframe::io::{
    parse_instance, to_json, AnalyzeReport, InstanceFile, Provenance, ReportFile, SeedFailure, VerifyReport,
};
use pframe::oracle::{bracket_test_with_mode, random_instance_with, GenMode, GenOptions, Instance, Timings};
use pframe::{hilbert_frame_bounds, ExponentMode, PIndex, SearchConfig, TheoremTag, VerdictStatus};

pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const USAGE_OR_IO: i32 = 1;
    pub const NOT_ASF: i32 = 2;
    pub const FALSIFIED: i32 = 3;
    pub const UNDECIDED: i32 = 4;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub json: String,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    file.to_instance().with_context(|| format!("invalid instance {}", path.display()))
}

fn emit<T: serde::Serialize>(command: &str, cfg: &SearchConfig, report: T, exit_code: i32) -> Result<Outcome> {
    let file = ReportFile {
        provenance: Provenance::new(command, cfg),
        report,
    };
    Ok(Outcome {
        exit_code,
        json: to_json(&file)?,
    })
}

/// ASF status, bound enclosures and operator norms of the unperturbed pair.
pub fn cmd_analyze(path: &Path, cfg: &SearchConfig) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let fp = &inst.fp;
    let is_asf = fp.is_asf(cfg.tol.singular);
    let (bounds, norms) = if is_asf {
        (Some(fp.asf_bounds(cfg)?), Some(fp.theta_norms(cfg)?))
    } else {
        (None, None)
    };
    let hilbert_bounds = (fp.p() == PIndex::TWO && fp.x_norm() == PIndex::TWO)
        .then(|| hilbert_frame_bounds(fp.synthesis(), cfg.tol.singular).ok())
        .flatten();
    let report = AnalyzeReport {
        p: fp.p(),
        x_norm: fp.x_norm(),
        dim: fp.dim(),
        count: fp.len(),
        is_asf,
        bounds,
        norms,
        hilbert_bounds,
    };
    let code = if is_asf { exit::SUCCESS } else { exit::NOT_ASF };
    emit("analyze", cfg, report, code)
}

/// Checks one theorem's hypotheses on an instance file and, when they hold,
/// brackets the perturbed pair.
pub fn cmd_check(
    path: &Path,
    theorem: TheoremTag,
    mode: Option<ExponentMode>,
    strict: bool,
    timings: bool,
    cfg: &SearchConfig,
) -> Result<Outcome> {
    let inst = read_instance(path)?;
    let mode = mode.unwrap_or_else(|| ExponentMode::resolve(inst.fp.p(), strict));
    let start = Instant::now();
    let mut report = bracket_test_with_mode(&inst, theorem, mode, cfg);
    if timings {
        report.timings = Some(Timings {
            total_ms: start.elapsed().as_secs_f64() * 1e3,
        });
    }
    let unperturbed_ok = if theorem.is_hilbert() {
        hilbert_frame_bounds(inst.fp.synthesis(), cfg.tol.singular).is_ok()
    } else {
        inst.fp.is_asf(cfg.tol.singular)
    };
    let code = match &report.error {
        Some(_) if !unperturbed_ok => exit::NOT_ASF,
        Some(_) => exit::USAGE_OR_IO,
        None => match report.condition_status() {
            VerdictStatus::Falsified => exit::FALSIFIED,
            _ if report.hypotheses_hold => exit::SUCCESS,
            _ => exit::UNDECIDED,
        },
    };
    emit("check", cfg, report, code)
}

/// Inclusive seed range `a..b`, or a single seed.
pub fn parse_seed_range(text: &str) -> Result<(u64, u64)> {
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (a.trim(), b.trim().trim_start_matches('=')),
        None => (text.trim(), text.trim()),
    };
    let (a, b): (u64, u64) = (
        a.parse().with_context(|| format!("bad seed `{a}`"))?,
        b.parse().with_context(|| format!("bad seed `{b}`"))?,
    );
    if a > b {
        bail!("empty seed range {a}..{b}");
    }
    Ok((a, b))
}

/// Default generator for a theorem: the Hilbert-space theorems perturb
/// canonical Hilbert frames, the others general pairs.
pub fn default_mode(theorem: TheoremTag, p: PIndex) -> GenMode {
    if theorem.is_hilbert() && p == PIndex::TWO {
        GenMode::HilbertCanonical
    } else {
        GenMode::GeneralPasf
    }
}

/// Generator options matching a theorem's parameters: `β` does not occur in
/// the two-parameter Hilbert theorem.
pub fn gen_options(theorem: TheoremTag) -> GenOptions {
    let mut opts = GenOptions::default();
    if theorem == TheoremTag::Pw2 {
        opts.caps.beta = 0.0;
    }
    opts
}

#[derive(Debug, Clone)]
pub struct VerifyArgs {
    pub seeds: (u64, u64),
    pub dim: usize,
    pub count: usize,
    pub p: PIndex,
    pub scale: f64,
    pub theorem: TheoremTag,
    pub mode: Option<GenMode>,
    pub exponent_mode: Option<ExponentMode>,
    pub strict: bool,
}

/// Generates one instance per seed and brackets each.
pub fn cmd_verify(args: &VerifyArgs, cfg: &SearchConfig) -> Result<Outcome> {
    let mode = args.mode.unwrap_or_else(|| default_mode(args.theorem, args.p));
    let exponent = args
        .exponent_mode
        .unwrap_or_else(|| ExponentMode::resolve(args.p, args.strict));
    let opts = gen_options(args.theorem);
    let (start, end) = args.seeds;
    let mut agg = VerifyReport {
        theorem: args.theorem,
        mode,
        p: args.p,
        dim: args.dim,
        count: args.count,
        scale: args.scale,
        seed_start: start,
        seed_end: end,
        trials: 0,
        generated: 0,
        hypotheses_held: 0,
        bracket_ok: 0,
        certified_violations: 0,
        not_certified: 0,
        worst_lower_margin: None,
        worst_upper_margin: None,
        violating_seeds: Vec::new(),
        generation_failures: Vec::new(),
    };
    for seed in start..=end {
        agg.trials += 1;
        let cfg = cfg.with_seed(seed);
        let inst = match random_instance_with(seed, args.dim, args.count, args.p, args.scale, mode, &opts, &cfg) {
            Ok(inst) => inst,
            Err(e) => {
                agg.generation_failures.push(SeedFailure {
                    seed,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        agg.generated += 1;
        let rep = bracket_test_with_mode(&inst, args.theorem, exponent, &cfg);
        if !rep.hypotheses_hold {
            agg.not_certified += 1;
            continue;
        }
        agg.hypotheses_held += 1;
        if rep.bracket_ok == Some(true) {
            agg.bracket_ok += 1;
        } else {
            agg.certified_violations += 1;
            agg.violating_seeds.push(seed);
        }
        let worst = |acc: Option<f64>, m: Option<f64>| match (acc, m) {
            (Some(a), Some(m)) => Some(a.min(m)),
            (a, m) => a.or(m),
        };
        agg.worst_lower_margin = worst(agg.worst_lower_margin, rep.lower_margin);
        agg.worst_upper_margin = worst(agg.worst_upper_margin, rep.upper_margin);
    }
    let code = if agg.certified_violations == 0 {
        exit::SUCCESS
    } else {
        exit::FALSIFIED
    };
    emit("verify", cfg, agg, code)
}

#[derive(Debug, Clone)]
pub struct GenArgs {
    pub seed: u64,
    pub dim: usize,
    pub count: usize,
    pub p: PIndex,
    pub scale: f64,
    pub mode: GenMode,
    pub theorem: Option<TheoremTag>,
}

/// Writes a seeded random instance in the instance-file format.
pub fn cmd_gen(args: &GenArgs, cfg: &SearchConfig) -> Result<Outcome> {
    let opts = args.theorem.map(gen_options).unwrap_or_default();
    let inst = random_instance_with(
        args.seed,
        args.dim,
        args.count,
        args.p,
        args.scale,
        args.mode,
        &opts,
        &cfg.with_seed(args.seed),
    )?;
    Ok(Outcome {
        exit_code: exit::SUCCESS,
        json: to_json(&InstanceFile::from_instance(&inst))?,
    })
}
