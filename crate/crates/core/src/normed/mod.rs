//! Dense real vectors and matrices measured in ℓᵖ norms.
//!
//! Operator norms between ℓᵖ spaces are reported as [`BoundInterval`]s:
//! exact for the (2,2), (1,·) and (·,∞) cases and enclosed otherwise, with a
//! sampled lower end and an upper end built from interpolation and
//! factorization bounds.

mod index;
mod interval;
mod norms;
mod opnorm;

pub use index::PIndex;
pub use interval::BoundInterval;
pub use norms::{dual_norm, pnorm, prefix_norms};
pub use opnorm::{invert, min_gain, opnorm, opnorm_upper};

pub(crate) use norms::{abs_pow, root};

use crate::error::{Error, Result};

pub type Matrix = nalgebra::DMatrix<f64>;
pub type Vector = nalgebra::DVector<f64>;

/// `out = M x` without allocating; `M` is column-major.
#[inline]
pub(crate) fn matvec_into(m: &Matrix, x: &[f64], out: &mut [f64]) {
    let rows = m.nrows();
    out.iter_mut().for_each(|v| *v = 0.0);
    for (col, &xj) in m.as_slice().chunks_exact(rows).zip(x) {
        if xj != 0.0 {
            for (o, &a) in out.iter_mut().zip(col) {
                *o += a * xj;
            }
        }
    }
}

/// Rejects matrices containing NaN or infinite entries.
pub fn ensure_finite(m: &Matrix, what: &'static str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}
