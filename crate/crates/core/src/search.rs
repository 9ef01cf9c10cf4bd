//! Seeded sampling and local refinement on unit ℓᵖ spheres.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::normed::{pnorm, PIndex};

/// Per-purpose salts so that independent searches sharing a seed draw
/// different streams.
pub(crate) mod salt {
    pub const OPNORM: u64 = 0x6f70_6e6f_726d;
    pub const FALSIFY: u64 = 0x6661_6c73_6966;
    pub const ORACLE_BOUNDS: u64 = 0x6f72_6163_6c65;
    pub const ORACLE_GAMMA: u64 = 0x6761_6d6d_61;
    pub const ORACLE_T: u64 = 0x745f_6f72_6163;
    pub const GENERATE: u64 = 0x6765_6e65_7261;
}

pub(crate) fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.rotate_left(17))
}

/// Scales `x` to unit `p`-norm. Returns false for the zero vector.
pub(crate) fn normalize(x: &mut [f64], p: PIndex) -> bool {
    let n = pnorm(x, p);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= n);
    true
}

/// Fills `x` with a random direction scaled to the unit `p`-sphere.
pub(crate) fn random_unit(rng: &mut ChaCha8Rng, x: &mut [f64], p: PIndex) {
    loop {
        for v in x.iter_mut() {
            *v = StandardNormal.sample(rng);
        }
        if normalize(x, p) {
            return;
        }
    }
}

/// The `k` highest-scoring vectors seen so far.
pub(crate) struct TopK {
    k: usize,
    items: Vec<(f64, Vec<f64>)>,
}

impl TopK {
    pub fn new(k: usize) -> Self {
        Self {
            k: k.max(1),
            items: Vec::with_capacity(k + 1),
        }
    }

    pub fn offer(&mut self, score: f64, x: &[f64]) {
        if !score.is_finite() {
            return;
        }
        if self.items.len() == self.k && score <= self.items[self.k - 1].0 {
            return;
        }
        let pos = self.items.partition_point(|(s, _)| *s >= score);
        self.items.insert(pos, (score, x.to_vec()));
        self.items.truncate(self.k);
    }

    pub fn into_vec(self) -> Vec<(f64, Vec<f64>)> {
        self.items
    }
}

/// Coordinate-wise hill climbing of `objective` over the unit `p`-sphere.
///
/// `objective` is evaluated on normalized vectors only. The step halves
/// whenever a full sweep fails to improve; the search ends after
/// `max_sweeps` sweeps or once the step falls below `1e-10`.
pub(crate) fn refine_coordinates<F>(x: &mut Vec<f64>, p: PIndex, max_sweeps: usize, mut objective: F) -> f64
where
    F: FnMut(&[f64]) -> f64,
{
    if !normalize(x, p) {
        return f64::NEG_INFINITY;
    }
    let mut best = objective(x);
    let mut step = 0.25;
    let mut trial = x.clone();
    for _ in 0..max_sweeps {
        let start = best;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                trial.copy_from_slice(x);
                trial[i] += dir * step;
                if !normalize(&mut trial, p) {
                    continue;
                }
                let v = objective(&trial);
                if v > best {
                    best = v;
                    x.copy_from_slice(&trial);
                    break;
                }
            }
        }
        if best > start {
            if best - start <= 1e-10 * best.abs() {
                break;
            }
        } else {
            step *= 0.5;
            if step < 1e-10 {
                break;
            }
        }
    }
    best
}
