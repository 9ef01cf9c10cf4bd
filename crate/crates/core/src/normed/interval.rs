use serde::{Deserialize, Serialize};

/// Enclosure `[lo, hi]` of a norm or bound.
///
/// `exact` marks values computed in closed form; their width is at
/// machine level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInterval {
    pub lo: f64,
    pub hi: f64,
    pub exact: bool,
}

impl BoundInterval {
    pub fn exact(value: f64) -> Self {
        Self {
            lo: value,
            hi: value,
            exact: true,
        }
    }

    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "interval [{lo}, {hi}] is reversed");
        Self {
            lo,
            hi,
            exact: false,
        }
    }

    /// A point estimate that carries no certificate, e.g. a sampled extremum.
    pub fn estimate(value: f64) -> Self {
        Self::new(value, value)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, value: f64, slack: f64) -> bool {
        self.lo - slack <= value && value <= self.hi + slack
    }

    /// Enclosure of `1/v` for `v` in a positive interval.
    pub fn reciprocal(&self) -> Self {
        Self {
            lo: 1.0 / self.hi,
            hi: 1.0 / self.lo,
            exact: self.exact,
        }
    }
}
