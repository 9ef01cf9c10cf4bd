//! Pairs of functionals and vectors on `(ℝᵈ, ‖·‖_X)` and their operators.
//!
//! A [`FramePair`] stores the functionals `f_n` as the rows of an `N×d`
//! analysis matrix and the vectors `τ_n` as the columns of a `d×N`
//! synthesis matrix. The coefficient space is `ℓᵖ` of length `N`; the norm
//! on the underlying space defaults to the same index and can be chosen
//! separately with [`FramePair::with_x_norm`].

use serde::{Deserialize, Serialize};

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::normed::{ensure_finite, invert, min_gain, opnorm, BoundInterval, Matrix, PIndex, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct FramePair {
    analysis: Matrix,
    synthesis: Matrix,
    p: PIndex,
    x_norm: PIndex,
}

/// Unsquared bounds `a‖x‖ ≤ ‖S x‖ ≤ b‖x‖`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsfBounds {
    pub lower: BoundInterval,
    pub upper: BoundInterval,
}

/// Squared-sense bounds `a‖h‖² ≤ Σ|⟨h, τ_n⟩|² ≤ b‖h‖²` of a Hilbert frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertFrameBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Enclosures of the operator norms entering the perturbation bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaNorms {
    /// `‖θ_f‖ : X → ℓᵖ`
    pub analysis: BoundInterval,
    /// `‖θ_τ‖ : ℓᵖ → X`
    pub synthesis: BoundInterval,
    /// `‖θ_f S⁻¹‖ : X → ℓᵖ`
    pub analysis_inverse: BoundInterval,
    /// `‖S⁻¹‖ : X → X`
    pub frame_inverse: BoundInterval,
}

impl FramePair {
    pub fn new(analysis: Matrix, synthesis: Matrix, p: PIndex) -> Result<Self> {
        if p.is_infinite() {
            return Err(Error::InfiniteFrameIndex(p.value()));
        }
        let (n, d) = analysis.shape();
        if synthesis.shape() != (d, n) {
            return Err(Error::DimensionMismatch(format!(
                "analysis is {n}x{d}, so synthesis must be {d}x{n}, got {}x{}",
                synthesis.nrows(),
                synthesis.ncols()
            )));
        }
        if n == 0 || d == 0 {
            return Err(Error::DimensionMismatch("empty frame pair".into()));
        }
        ensure_finite(&analysis, "analysis matrix")?;
        ensure_finite(&synthesis, "synthesis matrix")?;
        Ok(Self {
            analysis,
            synthesis,
            p,
            x_norm: p,
        })
    }

    /// Canonical pair of a Hilbert frame: `f_n = ⟨·, τ_n⟩`, `p = 2`.
    pub fn canonical_hilbert(synthesis: Matrix) -> Result<Self> {
        Self::new(synthesis.transpose(), synthesis, PIndex::TWO)
    }

    pub fn with_x_norm(mut self, x_norm: PIndex) -> Self {
        self.x_norm = x_norm;
        self
    }

    /// The same structure with different functionals and vectors.
    pub fn perturbed(&self, analysis: Matrix, synthesis: Matrix) -> Result<Self> {
        Ok(Self::new(analysis, synthesis, self.p)?.with_x_norm(self.x_norm))
    }

    pub fn analysis(&self) -> &Matrix {
        &self.analysis
    }

    pub fn synthesis(&self) -> &Matrix {
        &self.synthesis
    }

    pub fn p(&self) -> PIndex {
        self.p
    }

    pub fn x_norm(&self) -> PIndex {
        self.x_norm
    }

    pub fn dim(&self) -> usize {
        self.analysis.ncols()
    }

    pub fn len(&self) -> usize {
        self.analysis.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `θ_f x = (f_n(x))_n`.
    pub fn analyze(&self, x: &[f64]) -> Result<Vector> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "expected a vector of length {}, got {}",
                self.dim(),
                x.len()
            )));
        }
        Ok(&self.analysis * Vector::from_column_slice(x))
    }

    /// `θ_τ c = Σ c_n τ_n`.
    pub fn synthesize(&self, c: &[f64]) -> Result<Vector> {
        if c.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                self.len(),
                c.len()
            )));
        }
        Ok(&self.synthesis * Vector::from_column_slice(c))
    }

    /// `S = θ_τ θ_f`, i.e. `x ↦ Σ f_n(x) τ_n`.
    pub fn frame_operator(&self) -> Matrix {
        &self.synthesis * &self.analysis
    }

    pub fn is_asf(&self, tol: f64) -> bool {
        invert(&self.frame_operator(), tol).is_ok()
    }

    pub fn frame_operator_inverse(&self, tol: f64) -> Result<Matrix> {
        invert(&self.frame_operator(), tol).map_err(|e| match e {
            Error::Singular { .. } => Error::NotAnAsf,
            other => other,
        })
    }

    pub fn asf_bounds(&self, cfg: &SearchConfig) -> Result<AsfBounds> {
        let s = self.frame_operator();
        let x = self.x_norm;
        let lower = min_gain(&s, x, x, cfg)?;
        if lower.hi == 0.0 {
            return Err(Error::NotAnAsf);
        }
        Ok(AsfBounds {
            lower,
            upper: opnorm(&s, x, x, cfg)?,
        })
    }

    pub fn theta_norms(&self, cfg: &SearchConfig) -> Result<ThetaNorms> {
        let s_inv = self.frame_operator_inverse(cfg.tol.singular)?;
        let (x, p) = (self.x_norm, self.p);
        Ok(ThetaNorms {
            analysis: opnorm(&self.analysis, x, p, cfg)?,
            synthesis: opnorm(&self.synthesis, p, x, cfg)?,
            analysis_inverse: opnorm(&(&self.analysis * &s_inv), x, p, cfg)?,
            frame_inverse: opnorm(&s_inv, x, x, cfg)?,
        })
    }
}

/// Optimal squared frame bounds `(λ_min(TTᵀ), λ_max(TTᵀ))` of the columns of `t`.
pub fn hilbert_frame_bounds(t: &Matrix, tol: f64) -> Result<HilbertFrameBounds> {
    if t.is_empty() {
        return Err(Error::DimensionMismatch("empty family".into()));
    }
    let gram = t * t.transpose();
    let eig = gram.symmetric_eigen().eigenvalues;
    let (lo, hi) = (eig.min().max(0.0), eig.max());
    let ratio = if hi > 0.0 { lo / hi } else { 0.0 };
    if !(ratio >= tol) {
        return Err(Error::NotAFrame { ratio });
    }
    Ok(HilbertFrameBounds { lower: lo, upper: hi })
}

/// Numerical rank of `m` at the relative singular value threshold `tol`.
pub fn numerical_rank(m: &Matrix, tol: f64) -> usize {
    let sv = m.singular_values();
    let cut = tol * sv.max();
    sv.iter().filter(|&&s| s > cut).count()
}
