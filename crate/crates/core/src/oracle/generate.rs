//! Seeded random instances whose hypotheses hold by construction.
//!
//! Perturbations are built so that each hypothesis has a known splitting:
//! `Ω = ((1−α₀)T − E)/(1+β₀)` gives `T − Ω = α₀T + β₀Ω + E`, and likewise
//! for `G` against `F`. The constants `γ` and `t` are then set 10% above the
//! larger of the brute-force oracle value and the certificate bound, and the
//! perturbation is halved until the theorem's admissibility condition holds.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::oracles::{best_gamma_oracle, best_t_oracle};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::frames::{hilbert_frame_bounds, FramePair};
use crate::normed::{Matrix, PIndex};
use crate::search::{self, salt};
use crate::theorems::{
    analysis_certificate_bound, main_predicted_bounds, pw3_predicted, synthesis_certificate_bound,
    PerturbationParams,
};

/// Margin applied to oracle-derived constants.
pub(crate) const INFLATION: f64 = 1.1;
/// Largest accepted condition number of the frame operator.
const MAX_CONDITION: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GenMode {
    /// `F = Tᵀ`, `G = F`, `p = 2`: only the vectors are perturbed.
    HilbertCanonical,
    /// Independent `F`, `T`; both families perturbed.
    GeneralPasf,
}

impl fmt::Display for GenMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenMode::HilbertCanonical => "hilbert",
            GenMode::GeneralPasf => "general",
        })
    }
}

impl FromStr for GenMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "hilbert" | "hilbert_canonical" => Ok(GenMode::HilbertCanonical),
            "general" | "general_pasf" => Ok(GenMode::GeneralPasf),
            other => Err(Error::InvalidInput(format!("unknown generation mode `{other}`"))),
        }
    }
}

/// Multipliers of the perturbation scale bounding each drawn constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamCaps {
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub s: f64,
}

impl Default for ParamCaps {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
            r: 1.0,
            s: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenOptions {
    pub caps: ParamCaps,
    /// Fresh draws of the unperturbed pair before giving up.
    pub max_attempts: usize,
    /// Halvings of the perturbation per draw.
    pub max_halvings: usize,
}

impl Default for GenOptions {
    fn default() -> Self {
        Self {
            caps: ParamCaps::default(),
            max_attempts: 20,
            max_halvings: 20,
        }
    }
}

/// An unperturbed pair, its perturbation and the hypothesis constants.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub fp: FramePair,
    pub g: Matrix,
    pub omega: Matrix,
    pub params: PerturbationParams,
    pub seed: u64,
}

impl Instance {
    pub fn new(fp: FramePair, g: Matrix, omega: Matrix, params: PerturbationParams, seed: u64) -> Result<Self> {
        if g.shape() != fp.analysis().shape() || omega.shape() != fp.synthesis().shape() {
            return Err(Error::DimensionMismatch(
                "perturbed pair must have the shapes of the original pair".into(),
            ));
        }
        params.validate()?;
        Ok(Self {
            fp,
            g,
            omega,
            params,
            seed,
        })
    }

    /// The unperturbed pair with `G = F`, `Ω = T` and zero constants.
    pub fn unperturbed(fp: FramePair, seed: u64) -> Self {
        let (g, omega) = (fp.analysis().clone(), fp.synthesis().clone());
        Self {
            fp,
            g,
            omega,
            params: PerturbationParams::default(),
            seed,
        }
    }

    pub fn x_norm(&self) -> PIndex {
        self.fp.x_norm()
    }

    pub fn perturbed_pair(&self) -> Result<FramePair> {
        self.fp.perturbed(self.g.clone(), self.omega.clone())
    }
}

fn gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn uniform(rng: &mut ChaCha8Rng, hi: f64) -> f64 {
    rng.random::<f64>() * hi
}

/// `R = ((1−a)X − E)/(1+b)`, so that `X − R = aX + bR + E`.
fn split_perturbation(x: &Matrix, e: &Matrix, a: f64, b: f64) -> Matrix {
    (x * (1.0 - a) - e) / (1.0 + b)
}

/// Drawn perturbation directions and constants at unit scale.
struct Draw {
    e_synthesis: Matrix,
    e_analysis: Matrix,
    alpha: f64,
    beta: f64,
    r: f64,
    s: f64,
}

impl Draw {
    fn new(rng: &mut ChaCha8Rng, d: usize, n: usize, caps: &ParamCaps) -> Self {
        // Entries scaled by 1/√(dN) keep the perturbation norm of order one.
        let unit = 1.0 / ((d * n) as f64).sqrt();
        Self {
            e_synthesis: gaussian(rng, d, n) * unit,
            e_analysis: gaussian(rng, n, d) * unit,
            alpha: uniform(rng, caps.alpha),
            beta: uniform(rng, caps.beta),
            r: uniform(rng, caps.r),
            s: uniform(rng, caps.s),
        }
    }
}

/// Bounded below 1 so strict hypotheses stay satisfiable at large scales.
fn capped(v: f64) -> f64 {
    v.min(0.9)
}

fn well_conditioned(s: &Matrix) -> bool {
    let sv = s.singular_values();
    let (lo, hi) = (sv.min(), sv.max());
    hi > 0.0 && hi / lo <= MAX_CONDITION
}

/// Deterministic instance from `seed` with default options.
pub fn random_instance(seed: u64, d: usize, n: usize, p: PIndex, scale: f64, mode: GenMode) -> Result<Instance> {
    random_instance_with(seed, d, n, p, scale, mode, &GenOptions::default(), &SearchConfig::default())
}

#[allow(clippy::too_many_arguments)]
pub fn random_instance_with(
    seed: u64,
    d: usize,
    n: usize,
    p: PIndex,
    scale: f64,
    mode: GenMode,
    opts: &GenOptions,
    cfg: &SearchConfig,
) -> Result<Instance> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidInput(format!("dimension {d} and count {n} must be positive")));
    }
    if p.is_infinite() {
        return Err(Error::InfiniteFrameIndex(p.value()));
    }
    if !(scale.is_finite() && scale >= 0.0) {
        return Err(Error::InvalidInput(format!("perturbation scale must be finite and nonnegative, got {scale}")));
    }
    if mode == GenMode::HilbertCanonical && p != PIndex::TWO {
        return Err(Error::InvalidInput("Hilbert instances need p = 2".into()));
    }
    let cfg = cfg.with_seed(seed);
    let mut rng = search::rng(seed, salt::GENERATE);
    let mut last_reason = String::from("no frame pair drawn");
    for _ in 0..opts.max_attempts.max(1) {
        let t = gaussian(&mut rng, d, n);
        let f = match mode {
            GenMode::HilbertCanonical => t.transpose(),
            GenMode::GeneralPasf => gaussian(&mut rng, n, d),
        };
        let draw = Draw::new(&mut rng, d, n, &opts.caps);
        if !well_conditioned(&(&t * &f)) {
            last_reason = "frame operator ill-conditioned".into();
            continue;
        }
        let fp = FramePair::new(f, t, p)?;
        let mut factor = scale;
        for _ in 0..=opts.max_halvings {
            let inst = match mode {
                GenMode::HilbertCanonical => hilbert_candidate(&fp, &draw, factor, seed, &cfg)?,
                GenMode::GeneralPasf => general_candidate(&fp, &draw, factor, seed, &cfg)?,
            };
            match inst {
                Ok(inst) => return Ok(inst),
                Err(reason) => last_reason = reason,
            }
            factor *= 0.5;
        }
    }
    Err(Error::GenerationFailed {
        attempts: opts.max_attempts.max(1),
        reason: last_reason,
    })
}

type Candidate = std::result::Result<Instance, String>;

fn hilbert_candidate(fp: &FramePair, draw: &Draw, factor: f64, seed: u64, cfg: &SearchConfig) -> Result<Candidate> {
    let t = fp.synthesis();
    let (alpha, beta) = (capped(factor * draw.alpha), capped(factor * draw.beta));
    let omega = split_perturbation(t, &(&draw.e_synthesis * factor), alpha, beta);
    let two = PIndex::TWO;
    let gamma = INFLATION
        * best_gamma_oracle(t, &omega, two, two, alpha, beta, cfg)
            .value
            .max(synthesis_certificate_bound(t, &omega, two, two, alpha, beta));
    let bounds = hilbert_frame_bounds(t, cfg.tol.singular)?;
    let c: f64 = (t - &omega).column_iter().map(|col| col.norm_squared()).sum();
    if c >= bounds.lower {
        return Ok(Err(format!("perturbation energy {c:.3e} not below frame bound {:.3e}", bounds.lower)));
    }
    let (holds, _) = pw3_predicted(bounds.lower, bounds.upper, alpha, beta, gamma)?;
    if !holds {
        return Ok(Err("coefficient condition not admissible".into()));
    }
    let params = PerturbationParams {
        alpha,
        beta,
        gamma,
        ..Default::default()
    };
    Ok(Ok(Instance::new(fp.clone(), fp.analysis().clone(), omega, params, seed)?))
}

fn general_candidate(fp: &FramePair, draw: &Draw, factor: f64, seed: u64, cfg: &SearchConfig) -> Result<Candidate> {
    let (f, t, p, x) = (fp.analysis(), fp.synthesis(), fp.p(), fp.x_norm());
    let (alpha, beta) = (capped(factor * draw.alpha), capped(factor * draw.beta));
    let (r, s) = (capped(factor * draw.r), capped(factor * draw.s));
    let omega = split_perturbation(t, &(&draw.e_synthesis * factor), alpha, beta);
    let g = split_perturbation(f, &(&draw.e_analysis * factor), r, s);
    let gamma = INFLATION
        * best_gamma_oracle(t, &omega, p, x, alpha, beta, cfg)
            .value
            .max(synthesis_certificate_bound(t, &omega, p, x, alpha, beta));
    let t_const = INFLATION
        * best_t_oracle(f, &g, p, x, r, s, cfg)
            .value
            .max(analysis_certificate_bound(f, &g, p, x, r, s));
    let params = PerturbationParams {
        r,
        s,
        t: t_const,
        alpha,
        beta,
        gamma,
    };
    let prediction = main_predicted_bounds(fp, &params, cfg)?;
    if !prediction.admissible {
        return Ok(Err(format!(
            "main theorem not admissible (effective alpha {:.3e})",
            prediction.effective_alpha
        )));
    }
    Ok(Ok(Instance::new(fp.clone(), g, omega, params, seed)?))
}
