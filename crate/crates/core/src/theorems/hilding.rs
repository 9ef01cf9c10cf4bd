use serde::{Deserialize, Serialize};

use super::conditions::{falsify, FalsifyBudget};
use super::ConditionVerdict;
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::normed::{invert, opnorm, opnorm_upper, pnorm, Matrix, PIndex, Vector};

/// Conclusions for `V` when `‖Ux − Vx‖ ≤ α‖Ux‖ + β‖Vx‖` holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HildingResult {
    pub invertible: bool,
    /// `(1−α)/(1+β)`: lower factor in `‖Vx‖ ≥ gain_lo·‖Ux‖`.
    pub gain_lo: f64,
    /// `(1+α)/(1−β)`: upper factor in `‖Vx‖ ≤ gain_hi·‖Ux‖`.
    pub gain_hi: f64,
    /// `((1+β)/(1−α))·‖U⁻¹‖`, bounding `‖V⁻¹‖`.
    pub inv_norm_bound: f64,
}

/// Checks the two-sided perturbation inequality between `U` and `V` in ℓᵖ.
///
/// With `W = VU⁻¹` and `y = Ux`, the inequality holds whenever
/// `‖I − W‖ ≤ (α+β)/(1+β)`, since `‖Wy‖ ≥ ‖y‖ − ‖(I−W)y‖`. That bound is
/// the certificate; sampled unit vectors supply witnesses.
pub fn hilding_check(
    u: &Matrix,
    v: &Matrix,
    alpha: f64,
    beta: f64,
    p: PIndex,
    cfg: &SearchConfig,
) -> Result<(ConditionVerdict, HildingResult)> {
    if !(0.0..1.0).contains(&alpha) || !(0.0..1.0).contains(&beta) {
        return Err(Error::AlphaBetaOutOfRange { alpha, beta });
    }
    if u.shape() != v.shape() {
        return Err(Error::DimensionMismatch(format!(
            "U is {}x{} but V is {}x{}",
            u.nrows(),
            u.ncols(),
            v.nrows(),
            v.ncols()
        )));
    }
    let u_inv = invert(u, cfg.tol.singular).map_err(|e| match e {
        Error::Singular { .. } => Error::USingular,
        other => other,
    })?;
    let n = u.nrows();
    let residual = Matrix::identity(n, n) - v * &u_inv;
    let slack = (alpha + beta) / (1.0 + beta) - opnorm_upper(&residual, p, p);

    let diff = u - v;
    let certified = slack >= -cfg.tol.exact;
    let budget = FalsifyBudget::for_verdict(certified, cfg);
    let (worst, witness) = falsify(n, p, budget, cfg, |x| {
        let x = Vector::from_column_slice(x);
        let lhs = pnorm((&diff * &x).as_slice(), p);
        let rhs = alpha * pnorm((u * &x).as_slice(), p) + beta * pnorm((v * &x).as_slice(), p);
        (lhs - rhs, 1)
    });
    let verdict = ConditionVerdict::decide(slack, worst, witness, cfg.tol.exact, cfg.tol.bracket);

    let result = HildingResult {
        invertible: verdict.is_certified(),
        gain_lo: (1.0 - alpha) / (1.0 + beta),
        gain_hi: (1.0 + alpha) / (1.0 - beta),
        inv_norm_bound: (1.0 + beta) / (1.0 - alpha) * opnorm(&u_inv, p, p, cfg)?.hi,
    };
    Ok((verdict, result))
}
