//! Perturbation of frames for Hilbert spaces, in the squared-bound sense.

use serde::{Deserialize, Serialize};

use super::{PredictedBounds, TheoremTag};
use crate::error::{Error, Result};
use crate::frames::{hilbert_frame_bounds, HilbertFrameBounds};
use crate::normed::{pnorm, Matrix, PIndex};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pw1Outcome {
    /// `Σ‖τ_n − ω_n‖²`
    pub c: f64,
    pub holds: bool,
    pub predicted: PredictedBounds,
    /// Optimal bounds of the unperturbed frame.
    pub frame_bounds: HilbertFrameBounds,
}

fn check_bounds(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::NonpositiveBounds { a, b });
    }
    Ok(())
}

fn check_nonnegative(values: &[(&str, f64)]) -> Result<()> {
    for &(name, v) in values {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::InvalidParams(format!("{name} = {v}")));
        }
    }
    Ok(())
}

/// Perturbation by total squared distance: holds when `c = Σ‖τ_n − ω_n‖² < a`.
///
/// Bounds `a(1 − √(c/a))²` and `b(1 + √(c/b))²` are evaluated as the
/// `α = 0, γ = √c` case of [`pw2_predicted`].
pub fn pw1_check(t: &Matrix, omega: &Matrix, tol: f64) -> Result<Pw1Outcome> {
    if t.shape() != omega.shape() {
        return Err(Error::DimensionMismatch("T and Omega must have the same shape".into()));
    }
    let frame_bounds = hilbert_frame_bounds(t, tol)?;
    let c: f64 = (t - omega)
        .column_iter()
        .map(|col| pnorm(col.as_slice(), PIndex::TWO).powi(2))
        .sum();
    let (_, mut predicted) = pw2_predicted(frame_bounds.lower, frame_bounds.upper, 0.0, c.sqrt())?;
    predicted.theorem = TheoremTag::Pw1;
    Ok(Pw1Outcome {
        c,
        holds: c < frame_bounds.lower,
        predicted,
        frame_bounds,
    })
}

/// Condition `α + γ/√a < 1`; bounds `a(1 − (α + γ/√a))²` and `b(1 + (α + γ/√b))²`.
pub fn pw2_predicted(a: f64, b: f64, alpha: f64, gamma: f64) -> Result<(bool, PredictedBounds)> {
    check_bounds(a, b)?;
    check_nonnegative(&[("alpha", alpha), ("gamma", gamma)])?;
    let lower_shift = alpha + gamma / a.sqrt();
    let upper_shift = alpha + gamma / b.sqrt();
    Ok((
        lower_shift < 1.0,
        PredictedBounds {
            lower: Some(a * (1.0 - lower_shift).powi(2)),
            upper: b * (1.0 + upper_shift).powi(2),
            theorem: TheoremTag::Pw2,
        },
    ))
}

/// Condition `max(α + γ/√a, β) < 1`; bounds
/// `a(1 − (α+β+γ/√a)/(1+β))²` and `b(1 + (α+β+γ/√b)/(1−β))²`.
pub fn pw3_predicted(a: f64, b: f64, alpha: f64, beta: f64, gamma: f64) -> Result<(bool, PredictedBounds)> {
    check_bounds(a, b)?;
    check_nonnegative(&[("alpha", alpha), ("beta", beta), ("gamma", gamma)])?;
    let holds = alpha + gamma / a.sqrt() < 1.0 && beta < 1.0;
    let lower_shift = (alpha + beta + gamma / a.sqrt()) / (1.0 + beta);
    let upper_shift = (alpha + beta + gamma / b.sqrt()) / (1.0 - beta);
    Ok((
        holds,
        PredictedBounds {
            lower: Some(a * (1.0 - lower_shift).powi(2)),
            upper: b * (1.0 + upper_shift).powi(2),
            theorem: TheoremTag::Pw3,
        },
    ))
}
