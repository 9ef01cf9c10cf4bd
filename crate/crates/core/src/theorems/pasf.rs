//! Perturbation of p-approximate Schauder frames.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{PerturbationParams, PredictedBounds, TheoremTag};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::frames::{FramePair, ThetaNorms};
use crate::normed::{dual_norm, pnorm, Matrix, PIndex, Vector};

/// Result of evaluating the main perturbation theorem on a pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainPrediction {
    pub admissible: bool,
    /// `α + γ‖θ_f S⁻¹‖`, using the upper end of the enclosure.
    pub effective_alpha: f64,
    pub norms: ThetaNorms,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<PredictedBounds>,
}

/// Lower and upper bound formulas of the main theorem at conservative norm ends.
fn main_formulas(norms: &ThetaNorms, prm: &PerturbationParams) -> (f64, f64, f64) {
    let effective_alpha = prm.alpha + prm.gamma * norms.analysis_inverse.hi;
    let lower = (1.0 - effective_alpha) / ((1.0 + prm.beta) * norms.frame_inverse.hi);
    let synthesis = (1.0 + prm.alpha) / (1.0 - prm.beta) * norms.synthesis.hi + prm.gamma / (1.0 - prm.beta);
    let analysis = (1.0 + prm.r) / (1.0 - prm.s) * norms.analysis.hi + prm.t / (1.0 - prm.s);
    (effective_alpha, lower, synthesis * analysis)
}

/// Admissibility `max(α + γ‖θ_f S⁻¹‖, β, s) < 1` and the predicted ASF bounds
/// `(1 − (α + γ‖θ_f S⁻¹‖)) / ((1+β)‖S⁻¹‖)` and
/// `((1+α)/(1−β)‖θ_τ‖ + γ/(1−β)) · ((1+r)/(1−s)‖θ_f‖ + t/(1−s))`.
pub fn main_predicted_bounds(fp: &FramePair, params: &PerturbationParams, cfg: &SearchConfig) -> Result<MainPrediction> {
    params.validate()?;
    let norms = fp.theta_norms(cfg)?;
    let (effective_alpha, lower, upper) = main_formulas(&norms, params);
    let admissible = effective_alpha < 1.0 && params.beta < 1.0 && params.s < 1.0;
    Ok(MainPrediction {
        admissible,
        effective_alpha,
        norms,
        bounds: admissible.then_some(PredictedBounds {
            lower: Some(lower),
            upper,
            theorem: TheoremTag::Main,
        }),
    })
}

/// Exponent used to aggregate `‖τ_n − ω_n‖` in the corollary.
///
/// The corollary's condition sums `‖τ_n − ω_n‖^p`, while the Hölder step
/// that justifies it needs the conjugate exponent `q`. Both readings are
/// available; they coincide at `p = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExponentMode {
    AsStated,
    Conjugate,
}

impl ExponentMode {
    /// Conjugate only when requested strictly and it actually differs.
    pub fn resolve(p: PIndex, strict: bool) -> Self {
        if strict && p != PIndex::TWO {
            ExponentMode::Conjugate
        } else {
            ExponentMode::AsStated
        }
    }

    pub fn exponent(self, p: PIndex) -> PIndex {
        match self {
            ExponentMode::AsStated => p,
            ExponentMode::Conjugate => p.conjugate(),
        }
    }
}

impl fmt::Display for ExponentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExponentMode::AsStated => "as-stated",
            ExponentMode::Conjugate => "conjugate",
        })
    }
}

impl FromStr for ExponentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-stated" | "p" => Ok(ExponentMode::AsStated),
            "conjugate" | "q" => Ok(ExponentMode::Conjugate),
            other => Err(Error::InvalidInput(format!("unknown exponent mode `{other}`"))),
        }
    }
}

pub const EXPONENT_WARNING: &str = "corollary condition sums ||tau_n - omega_n||^p but the Hoelder step needs the \
conjugate exponent q; for p != 2 the two readings give different lambda";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryOutcome {
    /// λ under the selected exponent.
    pub lambda: f64,
    pub lambda_as_stated: f64,
    pub lambda_conjugate: f64,
    pub exponent: PIndex,
    /// `λ^(1/e)`, playing the role of γ.
    pub gamma: f64,
    /// `Σ‖f_n − g_n‖` in the dual norm.
    pub fn_gap: f64,
    pub holds: bool,
    pub norms: ThetaNorms,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<PredictedBounds>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

fn column_diff_norms(t: &Matrix, omega: &Matrix, x_norm: PIndex) -> Vec<f64> {
    (t - omega)
        .column_iter()
        .map(|c| pnorm(c.as_slice(), x_norm))
        .collect()
}

/// `(Σ vᵉ, (Σ vᵉ)^(1/e))`, with `(max v, max v)` for `e = ∞`.
fn aggregate(values: &[f64], e: PIndex) -> (f64, f64) {
    let norm = pnorm(values, e);
    if e.is_infinite() {
        (norm, norm)
    } else {
        (values.iter().map(|v| v.powf(e.value())).sum(), norm)
    }
}

fn check_perturbation_shapes(fp: &FramePair, g: &Matrix, omega: &Matrix) -> Result<()> {
    if g.shape() != fp.analysis().shape() || omega.shape() != fp.synthesis().shape() {
        return Err(Error::DimensionMismatch(
            "perturbed pair must have the shapes of the original pair".into(),
        ));
    }
    Ok(())
}

fn analysis_gap(fp: &FramePair, g: &Matrix) -> f64 {
    let diff = fp.analysis() - g;
    diff.row_iter()
        .map(|r| dual_norm(r.transpose().as_slice(), fp.x_norm()))
        .sum()
}

/// The summable-perturbation corollary: `Σ‖f_n − g_n‖ < ∞` and
/// `λ < 1/‖θ_f S⁻¹‖ᵉ` give bounds `(1 − λ^(1/e)‖θ_f S⁻¹‖)/‖S⁻¹‖` and
/// `(‖θ_τ‖ + λ^(1/e))(‖θ_f‖ + Σ‖f_n − g_n‖)`.
pub fn corollary_check(
    fp: &FramePair,
    g: &Matrix,
    omega: &Matrix,
    mode: ExponentMode,
    cfg: &SearchConfig,
) -> Result<CorollaryOutcome> {
    check_perturbation_shapes(fp, g, omega)?;
    let norms = fp.theta_norms(cfg)?;
    let diffs = column_diff_norms(fp.synthesis(), omega, fp.x_norm());
    let p = fp.p();
    let (lambda_as_stated, _) = aggregate(&diffs, p);
    let (lambda_conjugate, _) = aggregate(&diffs, p.conjugate());
    let exponent = mode.exponent(p);
    let (lambda, gamma) = aggregate(&diffs, exponent);
    let fn_gap = analysis_gap(fp, g);

    let params = PerturbationParams {
        t: fn_gap,
        gamma,
        ..Default::default()
    };
    let (effective_alpha, lower, upper) = main_formulas(&norms, &params);
    let holds = effective_alpha < 1.0;
    Ok(CorollaryOutcome {
        lambda,
        lambda_as_stated,
        lambda_conjugate,
        exponent,
        gamma,
        fn_gap,
        holds,
        norms,
        bounds: holds.then_some(PredictedBounds {
            lower: Some(lower),
            upper,
            theorem: TheoremTag::Corollary,
        }),
        warning: (p != PIndex::TWO).then(|| EXPONENT_WARNING.to_string()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummableOutcome {
    pub sums: [f64; 4],
    pub holds: [bool; 4],
    /// Upper bound only; present when `max(β, s) < 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<PredictedBounds>,
}

impl SummableOutcome {
    pub fn any_holds(&self) -> bool {
        self.holds.iter().any(|&h| h)
    }
}

/// Evaluates the four summability conditions, any one of which makes the
/// perturbed pair a p-ASF, together with the upper-bound formula.
pub fn summable_conditions_check(
    fp: &FramePair,
    g: &Matrix,
    omega: &Matrix,
    params: &PerturbationParams,
    cfg: &SearchConfig,
) -> Result<SummableOutcome> {
    check_perturbation_shapes(fp, g, omega)?;
    params.validate()?;
    let s_inv = fp.frame_operator_inverse(cfg.tol.singular)?;
    let x = fp.x_norm();
    let (f, t) = (fp.analysis(), fp.synthesis());
    let s_inv_t = s_inv.transpose();

    // Row functional h composed with S⁻¹ has coefficient row hᵀ S⁻¹ = (S⁻ᵀ h)ᵀ.
    let dual = |row: Vector| dual_norm(row.as_slice(), x);
    let dual_after = |row: Vector| dual_norm((&s_inv_t * row).as_slice(), x);
    let vnorm = |v: Vector| pnorm(v.as_slice(), x);

    let mut sums = [0.0; 4];
    for n in 0..fp.len() {
        let f_n: Vector = f.row(n).transpose();
        let g_n: Vector = g.row(n).transpose();
        let fg_n = &f_n - &g_n;
        let tau: Vector = t.column(n).into_owned();
        let om: Vector = omega.column(n).into_owned();
        let d_n = &tau - &om;

        let fg = dual(fg_n.clone());
        let s_d = vnorm(&s_inv * &d_n);
        sums[0] += fg * vnorm(&s_inv * &tau) + dual(g_n.clone()) * s_d;
        sums[1] += fg * vnorm(&s_inv * &om) + dual(f_n.clone()) * s_d;
        let fg_s = dual_after(fg_n);
        let d = vnorm(d_n);
        sums[2] += fg_s * vnorm(tau) + dual_after(g_n) * d;
        sums[3] += fg_s * vnorm(om) + dual_after(f_n) * d;
    }
    let holds = sums.map(|s| s < 1.0);

    let bounds = if params.beta < 1.0 && params.s < 1.0 {
        let norms = fp.theta_norms(cfg)?;
        let (_, _, upper) = main_formulas(&norms, params);
        Some(PredictedBounds {
            lower: None,
            upper,
            theorem: TheoremTag::Summable,
        })
    } else {
        None
    };
    Ok(SummableOutcome { sums, holds, bounds })
}
