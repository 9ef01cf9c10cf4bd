//! Perturbation bounds for frames and p-approximate Schauder frames on
//! finite-dimensional ℓᵖ spaces, with brute-force verification.
//!
//! * [`normed`]: ℓᵖ norms, operator norm enclosures, inversion.
//! * [`frames`]: frame pairs, their analysis/synthesis/frame operators and bounds.
//! * [`theorems`]: perturbation hypotheses and predicted-bound formulas.
//! * [`oracle`]: independent sampling oracles, instance generation and bracket tests.
//! * [`io`]: JSON instance and report files.

pub mod config;
pub mod error;
pub mod frames;
pub mod io;
pub mod normed;
pub mod oracle;
mod search;
pub mod theorems;

pub use config::{SearchConfig, Tolerances};
pub use error::{Error, Result};
pub use frames::{hilbert_frame_bounds, AsfBounds, FramePair, HilbertFrameBounds, ThetaNorms};
pub use normed::{BoundInterval, Matrix, PIndex, Vector};
pub use theorems::{ConditionVerdict, ExponentMode, PerturbationParams, PredictedBounds, TheoremTag, VerdictStatus};
