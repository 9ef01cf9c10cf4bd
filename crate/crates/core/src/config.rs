use serde::{Deserialize, Serialize};

/// Numerical tolerances shared by every routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Width allowed for intervals reported as exact.
    pub exact: f64,
    /// Slack used by every bracketing and certificate comparison.
    pub bracket: f64,
    /// Relative singular value threshold: `sigma_min < singular * sigma_max` is singular.
    pub singular: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            exact: 1e-9,
            bracket: 1e-7,
            singular: 1e-10,
        }
    }
}

/// Budgets and seed for the randomized sphere searches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Sphere samples for operator norm lower bounds and falsification searches.
    pub samples: usize,
    /// Power-iteration ascent steps applied to each of the best candidates.
    pub ascent_steps: usize,
    /// Number of best samples handed to the ascent or refinement stage.
    pub candidates: usize,
    /// Sphere samples used by the brute-force oracles.
    pub oracle_samples: usize,
    /// Maximum coordinate-descent sweeps in oracle refinement.
    pub refine_steps: usize,
    pub seed: u64,
    pub tol: Tolerances,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: 1 << 12,
            ascent_steps: 50,
            candidates: 8,
            oracle_samples: 1 << 13,
            refine_steps: 200,
            seed: DEFAULT_SEED,
            tol: Tolerances::default(),
        }
    }
}

impl SearchConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub const DEFAULT_SEED: u64 = 20_210_101;
