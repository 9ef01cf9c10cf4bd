use super::{ConditionVerdict, PerturbationParams, Witness};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::normed::{abs_pow, matvec_into, opnorm_upper, pnorm, prefix_norms, root, Matrix, PIndex};
use crate::search::{self, salt, TopK};

/// How hard to look for a counterexample.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FalsifyBudget {
    pub samples: usize,
    pub candidates: usize,
    pub sweeps: usize,
}

impl FalsifyBudget {
    /// A certified inequality gets a light consistency probe; anything else
    /// gets the full search.
    pub fn for_verdict(certified: bool, cfg: &SearchConfig) -> Self {
        if certified {
            Self {
                samples: 64,
                candidates: 0,
                sweeps: 0,
            }
        } else {
            Self {
                samples: cfg.samples,
                candidates: cfg.candidates.min(4),
                sweeps: cfg.refine_steps,
            }
        }
    }
}

/// Maximizes `objective` over the unit `p`-sphere of `ℝ^dim`.
///
/// `objective` returns the violation at a unit vector and the prefix length
/// attaining it. Returns the largest violation found with its witness.
pub(crate) fn falsify<F>(
    dim: usize,
    p: PIndex,
    budget: FalsifyBudget,
    cfg: &SearchConfig,
    mut objective: F,
) -> (f64, Option<Witness>)
where
    F: FnMut(&[f64]) -> (f64, usize),
{
    let mut best = f64::NEG_INFINITY;
    let mut best_x = vec![0.0; dim];
    let mut best_m = 0;
    let mut top = TopK::new(budget.candidates);
    let mut consider = |x: &[f64], best: &mut f64, best_x: &mut Vec<f64>, best_m: &mut usize, top: &mut TopK| {
        let (v, m) = objective(x);
        if v > *best + 1e-12 * (1.0 + best.abs()) || !best.is_finite() {
            *best = v;
            best_x.copy_from_slice(x);
            *best_m = m;
        }
        top.offer(v, x);
    };

    let mut x = vec![0.0; dim];
    for j in 0..dim {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[j] = 1.0;
        consider(&x, &mut best, &mut best_x, &mut best_m, &mut top);
    }
    let mut rng = search::rng(cfg.seed, salt::FALSIFY);
    for _ in 0..budget.samples {
        search::random_unit(&mut rng, &mut x, p);
        consider(&x, &mut best, &mut best_x, &mut best_m, &mut top);
    }
    if budget.candidates > 0 {
        for (_, mut cand) in top.into_vec() {
            let v = search::refine_coordinates(&mut cand, p, budget.sweeps, |x| objective(x).0);
            if v > best + 1e-12 * (1.0 + best.abs()) {
                let (v, m) = objective(&cand);
                best = v;
                best_x = cand;
                best_m = m;
            }
        }
    }
    let witness = best.is_finite().then(|| Witness {
        vector: best_x,
        prefix: best_m,
        violation: best,
    });
    (best, witness)
}

fn check_same_shape(a: &Matrix, b: &Matrix, what: &str) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch(format!(
            "{what}: {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    Ok(())
}

/// Coefficient pairs `(κ, μ)` with `|κ| ≤ a`, `|μ| ≤ b` tried by the certificates.
fn splittings(a: f64, b: f64) -> Vec<(f64, f64)> {
    let ks: &[f64] = if a > 0.0 { &[0.0, 1.0, -1.0] } else { &[0.0] };
    let ms: &[f64] = if b > 0.0 { &[0.0, 1.0, -1.0] } else { &[0.0] };
    ks.iter()
        .flat_map(|k| ms.iter().map(move |m| (k * a, m * b)))
        .collect()
}

/// Smallest `t` the analysis certificate can prove for the given `r, s`:
/// the minimum over `|κ| ≤ r`, `|μ| ≤ s` of `‖(F−G) − κF − μG‖_{X→ℓᵖ}` (upper enclosure).
pub fn analysis_certificate_bound(f: &Matrix, g: &Matrix, p: PIndex, x_norm: PIndex, r: f64, s: f64) -> f64 {
    let diff = f - g;
    splittings(r, s)
        .into_iter()
        .map(|(k, m)| opnorm_upper(&(&diff - f * k - g * m), x_norm, p))
        .fold(f64::INFINITY, f64::min)
}

/// Smallest `γ` the synthesis certificate can prove for the given `α, β`:
/// the maximum over prefixes `m` of the minimum over `|κ| ≤ α`, `|μ| ≤ β`
/// of `‖D_m − κT_m − μΩ_m‖_{ℓᵖ→X}` (upper enclosure).
pub fn synthesis_certificate_bound(
    t: &Matrix,
    omega: &Matrix,
    p: PIndex,
    x_norm: PIndex,
    alpha: f64,
    beta: f64,
) -> f64 {
    let diff = t - omega;
    let splits = splittings(alpha, beta);
    let mut bound = 0.0f64;
    for m in 1..=t.ncols() {
        let dm = diff.columns(0, m);
        let tm = t.columns(0, m);
        let om = omega.columns(0, m);
        let best = splits
            .iter()
            .map(|&(k, mu)| opnorm_upper(&(dm - tm * k - om * mu), p, x_norm))
            .fold(f64::INFINITY, f64::min);
        bound = bound.max(best);
    }
    bound
}

/// Checks `‖Σ_{n≤m}(f_n−g_n)(x)e_n‖_p ≤ r‖Σ_{n≤m} f_n(x)e_n‖_p + t‖x‖ + s‖Σ_{n≤m} g_n(x)e_n‖_p`
/// for every `x` and every prefix `m`.
///
/// Certificate: for some `|κ| ≤ r`, `|μ| ≤ s`, the operator
/// `R = (F−G) − κF − μG` satisfies `‖R‖_{X→ℓᵖ} ≤ t`. Because prefix ℓᵖ
/// norms grow with `m`, the full matrix covers every prefix.
pub fn analysis_condition(
    f: &Matrix,
    g: &Matrix,
    p: PIndex,
    x_norm: PIndex,
    params: &PerturbationParams,
    cfg: &SearchConfig,
) -> Result<ConditionVerdict> {
    check_same_shape(f, g, "analysis matrices")?;
    params.validate()?;
    if params.s >= 1.0 {
        return Err(Error::SOutOfRange(params.s));
    }
    let &PerturbationParams { r, s, t, .. } = params;
    let diff = f - g;
    let slack = t - analysis_certificate_bound(f, g, p, x_norm, r, s);

    let n = f.nrows();
    let (mut y, mut u, mut v) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let (mut ny, mut nu, mut nv) = (Vec::new(), Vec::new(), Vec::new());
    let budget = FalsifyBudget::for_verdict(slack >= -cfg.tol.exact, cfg);
    let (worst, witness) = falsify(f.ncols(), x_norm, budget, cfg, |x| {
        matvec_into(&diff, x, &mut y);
        matvec_into(f, x, &mut u);
        matvec_into(g, x, &mut v);
        prefix_norms(&y, p, &mut ny);
        prefix_norms(&u, p, &mut nu);
        prefix_norms(&v, p, &mut nv);
        let mut best = (f64::NEG_INFINITY, 0);
        for m in 0..n {
            let viol = ny[m] - r * nu[m] - t - s * nv[m];
            if viol > best.0 {
                best = (viol, m + 1);
            }
        }
        best
    });
    Ok(ConditionVerdict::decide(slack, worst, witness, cfg.tol.exact, cfg.tol.bracket))
}

/// Checks `‖Σ_{n≤m} c_n(τ_n−ω_n)‖ ≤ α‖Σ_{n≤m} c_nτ_n‖ + γ‖c‖_p + β‖Σ_{n≤m} c_nω_n‖`
/// for every coefficient vector and every prefix `m`.
///
/// The norm on the vectors is not monotone in `m` for a fixed `c`, so the
/// certificate `‖D_m − κT_m − μΩ_m‖_{ℓᵖ→X} ≤ γ` (with `|κ| ≤ α`, `|μ| ≤ β`)
/// is checked on every column prefix.
pub fn synthesis_condition(
    t: &Matrix,
    omega: &Matrix,
    p: PIndex,
    x_norm: PIndex,
    params: &PerturbationParams,
    cfg: &SearchConfig,
) -> Result<ConditionVerdict> {
    check_same_shape(t, omega, "synthesis matrices")?;
    params.validate()?;
    let &PerturbationParams {
        alpha, beta, gamma, ..
    } = params;
    let diff = t - omega;
    let (d, n) = t.shape();
    let slack = gamma - synthesis_certificate_bound(t, omega, p, x_norm, alpha, beta);

    let pv = p.value();
    let (mut ad, mut at, mut ao) = (vec![0.0; d], vec![0.0; d], vec![0.0; d]);
    let budget = FalsifyBudget::for_verdict(slack >= -cfg.tol.exact, cfg);
    let (worst, witness) = falsify(n, p, budget, cfg, |c| {
        ad.iter_mut().chain(at.iter_mut()).chain(ao.iter_mut()).for_each(|v| *v = 0.0);
        let mut acc = 0.0;
        let mut best = (f64::NEG_INFINITY, 0);
        for (j, &cj) in c.iter().enumerate() {
            acc += abs_pow(cj, pv);
            if cj != 0.0 {
                for i in 0..d {
                    ad[i] += cj * diff[(i, j)];
                    at[i] += cj * t[(i, j)];
                    ao[i] += cj * omega[(i, j)];
                }
            }
            if acc == 0.0 {
                continue;
            }
            let lhs = pnorm(&ad, x_norm) - alpha * pnorm(&at, x_norm) - beta * pnorm(&ao, x_norm);
            let viol = lhs / root(acc, pv) - gamma;
            if viol > best.0 {
                best = (viol, j + 1);
            }
        }
        best
    });
    let witness = witness.map(|mut w| {
        w.vector[w.prefix..].iter_mut().for_each(|v| *v = 0.0);
        search::normalize(&mut w.vector, p);
        w
    });
    Ok(ConditionVerdict::decide(slack, worst, witness, cfg.tol.exact, cfg.tol.bracket))
}
