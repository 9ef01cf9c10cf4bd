//! Bracket tests: run a theorem's hypothesis checks on an instance and, when
//! they hold, compare its predicted bounds with the oracle's actual bounds.

use serde::{Deserialize, Serialize};

use super::generate::{Instance, INFLATION};
use super::oracles::{actual_bounds_oracle, best_gamma_oracle};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::frames::{hilbert_frame_bounds, numerical_rank, AsfBounds, FramePair, HilbertFrameBounds, ThetaNorms};
use crate::normed::{Matrix, PIndex};
use crate::theorems::{
    analysis_condition, corollary_check, main_predicted_bounds, pw1_check, pw2_predicted, pw3_predicted,
    summable_conditions_check, synthesis_certificate_bound, synthesis_condition, ConditionVerdict, CorollaryOutcome,
    ExponentMode, PerturbationParams, PredictedBounds, SummableOutcome, TheoremTag, VerdictStatus,
};

/// Bounds of the perturbed pair: unsquared ASF bounds, or squared Hilbert
/// frame bounds for the Hilbert-space theorems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ActualBounds {
    Asf(AsfBounds),
    Hilbert(HilbertFrameBounds),
}

impl ActualBounds {
    pub fn lower(&self) -> f64 {
        match self {
            ActualBounds::Asf(b) => b.lower.lo,
            ActualBounds::Hilbert(b) => b.lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match self {
            ActualBounds::Asf(b) => b.upper.hi,
            ActualBounds::Hilbert(b) => b.upper,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedVerdict {
    pub name: String,
    pub verdict: ConditionVerdict,
}

/// Extra checks made when a canonical Hilbert pair is run through the
/// main theorem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpecializationCheck {
    pub analysis_is_transpose: bool,
    pub omega_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_frame_bounds: Option<HilbertFrameBounds>,
    /// Whether the perturbed vectors form a frame; only judged when the
    /// main theorem's hypotheses hold.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_claim_ok: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: TheoremTag,
    pub p: PIndex,
    pub x_norm: PIndex,
    pub seed: u64,
    pub params: PerturbationParams,
    #[serde(default)]
    pub conditions: Vec<NamedVerdict>,
    pub admissible: bool,
    /// Every condition certified and the admissibility inequality met.
    pub hypotheses_hold: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted: Option<PredictedBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub actual: Option<ActualBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbed_is_asf: Option<bool>,
    /// Defined only when `hypotheses_hold`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bracket_ok: Option<bool>,
    /// `actual.lower − predicted.lower`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_margin: Option<f64>,
    /// `predicted.upper − actual.upper`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms: Option<ThetaNorms>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corollary: Option<CorollaryOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summable: Option<SummableOutcome>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub specialization: Option<SpecializationCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl VerificationReport {
    fn empty(inst: &Instance, theorem: TheoremTag) -> Self {
        Self {
            theorem,
            p: inst.fp.p(),
            x_norm: inst.fp.x_norm(),
            seed: inst.seed,
            params: inst.params,
            conditions: Vec::new(),
            admissible: false,
            hypotheses_hold: false,
            predicted: None,
            actual: None,
            perturbed_is_asf: None,
            bracket_ok: None,
            lower_margin: None,
            upper_margin: None,
            norms: None,
            corollary: None,
            summable: None,
            specialization: None,
            warnings: Vec::new(),
            error: None,
            timings: None,
        }
    }

    /// Hypotheses certified but the conclusion failed.
    pub fn is_certified_violation(&self) -> bool {
        self.hypotheses_hold && self.bracket_ok == Some(false)
    }

    /// Worst status among the conditions.
    pub fn condition_status(&self) -> VerdictStatus {
        let statuses = self.conditions.iter().map(|c| c.verdict.status);
        if statuses.clone().any(|s| s == VerdictStatus::Falsified) {
            VerdictStatus::Falsified
        } else if statuses.clone().any(|s| s == VerdictStatus::Undecided) {
            VerdictStatus::Undecided
        } else {
            VerdictStatus::Certified
        }
    }

    fn push(&mut self, name: &str, verdict: ConditionVerdict) {
        self.conditions.push(NamedVerdict {
            name: name.to_string(),
            verdict,
        });
    }
}

/// A strict scalar inequality `slack > 0`, decided exactly.
fn scalar_verdict(slack: f64) -> ConditionVerdict {
    ConditionVerdict {
        status: if slack > 0.0 {
            VerdictStatus::Certified
        } else {
            VerdictStatus::Falsified
        },
        witness: None,
        margin: slack,
        diagnostics: None,
    }
}

/// Runs `tag` on `inst`, reading the corollary with the default exponent.
pub fn bracket_test(inst: &Instance, tag: TheoremTag, cfg: &SearchConfig) -> VerificationReport {
    bracket_test_with_mode(inst, tag, ExponentMode::resolve(inst.fp.p(), false), cfg)
}

pub fn bracket_test_with_mode(
    inst: &Instance,
    tag: TheoremTag,
    mode: ExponentMode,
    cfg: &SearchConfig,
) -> VerificationReport {
    let mut rep = VerificationReport::empty(inst, tag);
    let outcome = match tag {
        TheoremTag::Pw1 | TheoremTag::Pw2 | TheoremTag::Pw3 => hilbert_hypotheses(inst, tag, cfg, &mut rep),
        TheoremTag::Main => main_hypotheses(inst, cfg, &mut rep),
        TheoremTag::Corollary => corollary_hypotheses(inst, mode, cfg, &mut rep),
        TheoremTag::Summable => summable_hypotheses(inst, cfg, &mut rep),
    }
    .and_then(|()| {
        rep.hypotheses_hold = rep.admissible && rep.conditions.iter().all(|c| c.verdict.is_certified());
        if rep.hypotheses_hold {
            conclude(inst, tag, cfg, &mut rep)
        } else {
            Ok(())
        }
    });
    if let Err(e) = outcome {
        rep.error = Some(e.to_string());
    }
    rep
}

fn hilbert_hypotheses(inst: &Instance, tag: TheoremTag, cfg: &SearchConfig, rep: &mut VerificationReport) -> Result<()> {
    let (t, omega) = (inst.fp.synthesis(), &inst.omega);
    let bounds = hilbert_frame_bounds(t, cfg.tol.singular)?;
    let prm = inst.params;
    let two = PIndex::TWO;
    match tag {
        TheoremTag::Pw1 => {
            let out = pw1_check(t, omega, cfg.tol.singular)?;
            rep.push("energy", scalar_verdict(out.frame_bounds.lower - out.c));
            rep.admissible = out.holds;
            rep.predicted = Some(out.predicted);
        }
        TheoremTag::Pw2 => {
            if prm.beta > 0.0 {
                rep.warnings.push("beta is not a parameter of pw2 and is ignored".into());
            }
            let coeff = PerturbationParams { beta: 0.0, ..prm };
            rep.push("coefficients", synthesis_condition(t, omega, two, two, &coeff, cfg)?);
            let (ok, pb) = pw2_predicted(bounds.lower, bounds.upper, prm.alpha, prm.gamma)?;
            rep.admissible = ok;
            rep.predicted = Some(pb);
        }
        _ => {
            rep.push("coefficients", synthesis_condition(t, omega, two, two, &prm, cfg)?);
            let (ok, pb) = pw3_predicted(bounds.lower, bounds.upper, prm.alpha, prm.beta, prm.gamma)?;
            rep.admissible = ok;
            rep.predicted = Some(pb);
        }
    }
    Ok(())
}

fn main_hypotheses(inst: &Instance, cfg: &SearchConfig, rep: &mut VerificationReport) -> Result<()> {
    let fp = &inst.fp;
    let (p, x) = (fp.p(), fp.x_norm());
    let prm = &inst.params;
    if prm.s >= 1.0 {
        rep.push("analysis", scalar_verdict(1.0 - prm.s));
    } else {
        rep.push("analysis", analysis_condition(fp.analysis(), &inst.g, p, x, prm, cfg)?);
    }
    rep.push("synthesis", synthesis_condition(fp.synthesis(), &inst.omega, p, x, prm, cfg)?);
    let pred = main_predicted_bounds(fp, prm, cfg)?;
    rep.admissible = pred.admissible;
    rep.predicted = pred.bounds;
    rep.norms = Some(pred.norms);
    Ok(())
}

fn corollary_hypotheses(
    inst: &Instance,
    mode: ExponentMode,
    cfg: &SearchConfig,
    rep: &mut VerificationReport,
) -> Result<()> {
    let out = corollary_check(&inst.fp, &inst.g, &inst.omega, mode, cfg)?;
    rep.push("lambda", scalar_verdict(1.0 - out.gamma * out.norms.analysis_inverse.hi));
    rep.admissible = out.holds;
    rep.predicted = out.bounds;
    rep.norms = Some(out.norms);
    rep.warnings.extend(out.warning.clone());
    rep.corollary = Some(out);
    Ok(())
}

fn summable_hypotheses(inst: &Instance, cfg: &SearchConfig, rep: &mut VerificationReport) -> Result<()> {
    let fp = &inst.fp;
    let (p, x) = (fp.p(), fp.x_norm());
    let prm = &inst.params;
    let out = summable_conditions_check(fp, &inst.g, &inst.omega, prm, cfg)?;
    let best_sum = out.sums.iter().copied().fold(f64::INFINITY, f64::min);
    rep.push("summability", scalar_verdict(1.0 - best_sum));
    if prm.s < 1.0 {
        rep.push("analysis", analysis_condition(fp.analysis(), &inst.g, p, x, prm, cfg)?);
    }
    rep.push("synthesis", synthesis_condition(fp.synthesis(), &inst.omega, p, x, prm, cfg)?);
    rep.admissible = out.bounds.is_some();
    rep.predicted = out.bounds;
    rep.summable = Some(out);
    Ok(())
}

/// Measures the perturbed pair and compares with the prediction.
fn conclude(inst: &Instance, tag: TheoremTag, cfg: &SearchConfig, rep: &mut VerificationReport) -> Result<()> {
    let actual = if tag.is_hilbert() {
        match hilbert_frame_bounds(&inst.omega, cfg.tol.singular) {
            Ok(b) => Some(ActualBounds::Hilbert(b)),
            Err(Error::NotAFrame { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        let perturbed = inst.perturbed_pair()?;
        match actual_bounds_oracle(&perturbed, cfg) {
            Ok(b) => Some(ActualBounds::Asf(b)),
            Err(Error::NotAnAsf) => None,
            Err(e) => return Err(e),
        }
    };
    rep.perturbed_is_asf = Some(actual.is_some());
    let (Some(actual), Some(predicted)) = (actual, rep.predicted) else {
        rep.bracket_ok = Some(false);
        return Ok(());
    };
    let eps = cfg.tol.bracket;
    rep.lower_margin = predicted.lower.map(|l| actual.lower() - l);
    rep.upper_margin = Some(predicted.upper - actual.upper());
    rep.bracket_ok = Some(rep.lower_margin.is_none_or(|m| m >= -eps) && rep.upper_margin.is_some_and(|m| m >= -eps));
    rep.actual = Some(actual);
    Ok(())
}

/// Runs the canonical pair of `t` with `G = F` through the main theorem and
/// checks that `F = Tᵀ` and, when the hypotheses hold, that `Ω` is a frame.
///
/// `γ` is taken 10% above the larger of the oracle and certificate values
/// for `α = β = 0`; the remaining constants are zero.
pub fn hilbert_specialization_test(t: &Matrix, omega: &Matrix, cfg: &SearchConfig) -> VerificationReport {
    let built = FramePair::canonical_hilbert(t.clone()).and_then(|fp| {
        let two = PIndex::TWO;
        if omega.shape() != t.shape() {
            return Err(Error::DimensionMismatch("Omega must have the shape of T".into()));
        }
        let gamma = best_gamma_oracle(t, omega, two, two, 0.0, 0.0, cfg)
            .value
            .max(synthesis_certificate_bound(t, omega, two, two, 0.0, 0.0));
        let params = PerturbationParams {
            gamma: INFLATION * gamma,
            ..Default::default()
        };
        Instance::new(fp.clone(), fp.analysis().clone(), omega.clone(), params, cfg.seed)
    });
    let inst = match built {
        Ok(inst) => inst,
        Err(e) => {
            let fallback = Instance::unperturbed(
                FramePair::new(t.transpose(), t.clone(), PIndex::TWO)
                    .unwrap_or_else(|_| FramePair::new(Matrix::identity(1, 1), Matrix::identity(1, 1), PIndex::TWO).unwrap()),
                cfg.seed,
            );
            let mut rep = VerificationReport::empty(&fallback, TheoremTag::Main);
            rep.error = Some(e.to_string());
            return rep;
        }
    };
    let mut rep = bracket_test(&inst, TheoremTag::Main, cfg);
    let omega_rank = numerical_rank(omega, cfg.tol.singular);
    let omega_frame_bounds = hilbert_frame_bounds(omega, cfg.tol.singular).ok();
    rep.specialization = Some(SpecializationCheck {
        analysis_is_transpose: inst.fp.analysis() == &t.transpose(),
        omega_rank,
        omega_frame_bounds,
        frame_claim_ok: rep
            .hypotheses_hold
            .then_some(omega_rank == t.nrows() && omega_frame_bounds.is_some()),
    });
    rep
}
