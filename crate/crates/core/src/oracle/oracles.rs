//! Brute-force sphere searches, independent of the certificate and
//! singular-value code paths.

use serde::{Deserialize, Serialize};

use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::frames::{AsfBounds, FramePair};
use crate::normed::{abs_pow, invert, matvec_into, pnorm, prefix_norms, root, BoundInterval, Matrix, PIndex};
use crate::search::{self, salt, TopK};

/// Largest value of a sphere objective found by an oracle, with its location.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleMax {
    pub value: f64,
    /// Prefix length attaining the value; ties go to the longer prefix.
    pub prefix: usize,
    pub vector: Vec<f64>,
}

/// Samples the unit `p`-sphere of `ℝ^dim` (basis vectors first), then refines
/// the best candidates by coordinate search. `objective` returns a value and
/// the prefix attaining it.
fn sphere_max<F>(dim: usize, p: PIndex, seed_salt: u64, cfg: &SearchConfig, mut objective: F) -> OracleMax
where
    F: FnMut(&[f64]) -> (f64, usize),
{
    let mut best = OracleMax {
        value: f64::NEG_INFINITY,
        prefix: 0,
        vector: vec![0.0; dim],
    };
    let mut top = TopK::new(cfg.candidates);
    let mut x = vec![0.0; dim];
    let consider = |x: &[f64], best: &mut OracleMax, top: &mut TopK, objective: &mut F| {
        let (v, m) = objective(x);
        if v > best.value || (v == best.value && m > best.prefix) {
            best.value = v;
            best.prefix = m;
            best.vector.copy_from_slice(x);
        }
        top.offer(v, x);
    };
    for j in 0..dim {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[j] = 1.0;
        consider(&x, &mut best, &mut top, &mut objective);
    }
    let mut rng = search::rng(cfg.seed, seed_salt);
    for _ in 0..cfg.oracle_samples {
        search::random_unit(&mut rng, &mut x, p);
        consider(&x, &mut best, &mut top, &mut objective);
    }
    for (_, mut cand) in top.into_vec() {
        search::refine_coordinates(&mut cand, p, cfg.refine_steps, |x| objective(x).0);
        consider(&cand, &mut best, &mut TopK::new(1), &mut objective);
    }
    best
}

/// Sampled `min` and `max` of `‖Sx‖_X` over the unit sphere of `X`.
///
/// The minimum is searched as `‖y‖_X / ‖S⁻¹y‖_X`, whose worst case is the
/// maximum of a smooth gain rather than a flat valley. Both ends are
/// estimates taken at actual points: the minimum can only overestimate the
/// true infimum and the maximum can only underestimate the supremum.
pub fn actual_bounds_oracle(fp: &FramePair, cfg: &SearchConfig) -> Result<AsfBounds> {
    if !fp.is_asf(cfg.tol.singular) {
        return Err(Error::NotAnAsf);
    }
    let s: Matrix = fp.frame_operator();
    let s_inv = invert(&s, cfg.tol.singular)?;
    let x_norm = fp.x_norm();
    let d = fp.dim();
    let mut y = vec![0.0; d];
    let mut gain = |m: &Matrix, x: &[f64]| {
        matvec_into(m, x, &mut y);
        pnorm(&y, x_norm)
    };
    let hi = sphere_max(d, x_norm, salt::ORACLE_BOUNDS, cfg, |x| (gain(&s, x), 1)).value;
    let inv = sphere_max(d, x_norm, salt::ORACLE_BOUNDS.rotate_left(1), cfg, |x| (gain(&s_inv, x), 1)).value;
    Ok(AsfBounds {
        lower: BoundInterval::estimate(1.0 / inv),
        upper: BoundInterval::estimate(hi),
    })
}

/// Smallest `γ` observed to be needed in
/// `‖Σ_{n≤m} c_n(τ_n−ω_n)‖ ≤ α‖Σ_{n≤m} c_nτ_n‖ + γ‖c_{≤m}‖_p + β‖Σ_{n≤m} c_nω_n‖`,
/// maximized over sampled coefficient vectors and all prefixes (clamped at 0).
pub fn best_gamma_oracle(
    t: &Matrix,
    omega: &Matrix,
    p: PIndex,
    x_norm: PIndex,
    alpha: f64,
    beta: f64,
    cfg: &SearchConfig,
) -> OracleMax {
    let (d, n) = t.shape();
    let pv = p.value();
    let (mut sd, mut st, mut so) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let mut best = sphere_max(n, p, salt::ORACLE_GAMMA, cfg, |c| {
        sd.iter_mut().chain(st.iter_mut()).chain(so.iter_mut()).for_each(|v| *v = 0.0);
        let mut mass = 0.0;
        let mut best = (f64::NEG_INFINITY, 0);
        for (j, &cj) in c.iter().enumerate() {
            mass = if p.is_infinite() { f64::max(mass, cj.abs()) } else { mass + abs_pow(cj, pv) };
            for i in 0..d {
                let (tv, ov) = (t[(i, j)], omega[(i, j)]);
                st[i] += cj * tv;
                so[i] += cj * ov;
                sd[i] += cj * (tv - ov);
            }
            if mass == 0.0 {
                continue;
            }
            let scale = if p.is_infinite() { mass } else { root(mass, pv) };
            let v = (pnorm(&sd, x_norm) - alpha * pnorm(&st, x_norm) - beta * pnorm(&so, x_norm)) / scale;
            if v >= best.0 {
                best = (v, j + 1);
            }
        }
        best
    });
    best.value = best.value.max(0.0);
    best
}

/// Smallest `t` observed to be needed in
/// `‖Σ_{n≤m}(f_n−g_n)(x)e_n‖_p ≤ r‖Σ_{n≤m} f_n(x)e_n‖_p + t‖x‖ + s‖Σ_{n≤m} g_n(x)e_n‖_p`,
/// maximized over sampled unit `x` and all prefixes (clamped at 0).
pub fn best_t_oracle(
    f: &Matrix,
    g: &Matrix,
    p: PIndex,
    x_norm: PIndex,
    r: f64,
    s: f64,
    cfg: &SearchConfig,
) -> OracleMax {
    let (n, d) = f.shape();
    let (mut u, mut v) = (vec![0.0; n], vec![0.0; n]);
    let mut diff = vec![0.0; n];
    let (mut nd, mut nu, mut nv) = (Vec::new(), Vec::new(), Vec::new());
    let mut best = sphere_max(d, x_norm, salt::ORACLE_T, cfg, |x| {
        matvec_into(f, x, &mut u);
        matvec_into(g, x, &mut v);
        for k in 0..n {
            diff[k] = u[k] - v[k];
        }
        prefix_norms(&diff, p, &mut nd);
        prefix_norms(&u, p, &mut nu);
        prefix_norms(&v, p, &mut nv);
        let mut best = (f64::NEG_INFINITY, 0);
        for m in 0..n {
            let val = nd[m] - r * nu[m] - s * nv[m];
            if val >= best.0 {
                best = (val, m + 1);
            }
        }
        best
    });
    best.value = best.value.max(0.0);
    best
}
