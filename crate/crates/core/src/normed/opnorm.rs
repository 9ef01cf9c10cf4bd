use super::{dual_norm, pnorm, BoundInterval, Matrix, PIndex};
use crate::config::SearchConfig;
use crate::error::{Error, Result};
use crate::search::{self, salt, TopK};

fn max_column_norm(m: &Matrix, p: PIndex) -> f64 {
    m.column_iter()
        .map(|c| pnorm(c.as_slice(), p))
        .fold(0.0, f64::max)
}

fn max_row_dual_norm(m: &Matrix, p_in: PIndex) -> f64 {
    let mut row = vec![0.0; m.ncols()];
    let mut best = 0.0f64;
    for i in 0..m.nrows() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = m[(i, j)];
        }
        best = best.max(dual_norm(&row, p_in));
    }
    best
}

fn spectral_norm(m: &Matrix) -> f64 {
    m.singular_values().max()
}

/// `‖I : ℓ_from^n → ℓ_to^n‖ = n^max(0, 1/to − 1/from)`.
fn inclusion(n: usize, from: PIndex, to: PIndex) -> f64 {
    let e = (to.reciprocal() - from.reciprocal()).max(0.0);
    if e == 0.0 {
        1.0
    } else {
        (n as f64).powf(e)
    }
}

fn exact_norm(m: &Matrix, p_in: PIndex, p_out: PIndex) -> Option<f64> {
    if p_in == PIndex::ONE {
        Some(max_column_norm(m, p_out))
    } else if p_out.is_infinite() {
        Some(max_row_dual_norm(m, p_in))
    } else if p_in == PIndex::TWO && p_out == PIndex::TWO {
        Some(spectral_norm(m))
    } else {
        None
    }
}

struct Anchors {
    one: f64,
    two: f64,
    inf: f64,
}

impl Anchors {
    fn of(m: &Matrix) -> Self {
        Self {
            one: max_column_norm(m, PIndex::ONE),
            two: spectral_norm(m),
            inf: max_row_dual_norm(m, PIndex::INFINITY),
        }
    }

    /// Riesz–Thorin bounds on `‖M‖_{p→p}` through the exactly computable
    /// 1→1, 2→2 and ∞→∞ norms. Valid for real matrices because the real
    /// norm never exceeds the complex one, and the three anchors coincide
    /// over ℝ and ℂ.
    fn diagonal(&self, p: PIndex) -> f64 {
        let t = p.reciprocal();
        let mut best = self.one.powf(t) * self.inf.powf(1.0 - t);
        if t >= 0.5 {
            let theta = 2.0 * (1.0 - t);
            best = best.min(self.one.powf(1.0 - theta) * self.two.powf(theta));
        } else {
            let theta = 1.0 - 2.0 * t;
            best = best.min(self.two.powf(1.0 - theta) * self.inf.powf(theta));
        }
        best
    }
}

/// A guaranteed upper bound on `‖M‖_{p_in→p_out}`; exact where a closed form exists.
pub fn opnorm_upper(m: &Matrix, p_in: PIndex, p_out: PIndex) -> f64 {
    if let Some(v) = exact_norm(m, p_in, p_out) {
        return v;
    }
    let (n_out, n_in) = m.shape();
    let a = Anchors::of(m);
    let candidates = [
        inclusion(n_in, p_in, PIndex::ONE) * max_column_norm(m, p_out),
        max_row_dual_norm(m, p_in) * inclusion(n_out, PIndex::INFINITY, p_out),
        inclusion(n_in, p_in, PIndex::TWO) * a.two * inclusion(n_out, PIndex::TWO, p_out),
        a.diagonal(p_in) * inclusion(n_out, p_in, p_out),
        inclusion(n_in, p_in, p_out) * a.diagonal(p_out),
    ];
    candidates.into_iter().fold(f64::INFINITY, f64::min)
}

/// `sign(v)·|v|^e`, the Hölder dual direction; `e = 0` gives the sign vector.
fn dual_direction(v: &[f64], e: f64, out: &mut [f64]) {
    for (o, &x) in out.iter_mut().zip(v) {
        *o = if x == 0.0 {
            0.0
        } else if e == 0.0 {
            x.signum()
        } else {
            x.signum() * x.abs().powf(e)
        };
    }
}

/// Power iteration for ℓᵖ→ℓʳ norms: `x ← ψ_{p'}(Mᵀ ψ_r(Mx))`.
fn power_ascent(m: &Matrix, x: &mut [f64], p_in: PIndex, p_out: PIndex, steps: usize) -> f64 {
    let mt = m.transpose();
    let e_out = p_out.value() - 1.0;
    let e_in = p_in.conjugate().value() - 1.0;
    let ratio_of = |x: &[f64]| pnorm((m * nalgebra::DVector::from_column_slice(x)).as_slice(), p_out);
    let mut best = ratio_of(x);
    let mut w = vec![0.0; m.nrows()];
    let mut next = vec![0.0; m.ncols()];
    for _ in 0..steps {
        let y = m * nalgebra::DVector::from_column_slice(x);
        dual_direction(y.as_slice(), e_out, &mut w);
        let z = &mt * nalgebra::DVector::from_column_slice(&w);
        dual_direction(z.as_slice(), e_in, &mut next);
        if !search::normalize(&mut next, p_in) {
            break;
        }
        let r = ratio_of(&next);
        if r <= best * (1.0 + 1e-15) {
            break;
        }
        best = r;
        x.copy_from_slice(&next);
    }
    best
}

fn sampled_lower(m: &Matrix, p_in: PIndex, p_out: PIndex, cfg: &SearchConfig) -> f64 {
    let n = m.ncols();
    let mut top = TopK::new(cfg.candidates);
    let mut x = vec![0.0; n];
    let eval = |x: &[f64], top: &mut TopK| {
        let y = m * nalgebra::DVector::from_column_slice(x);
        top.offer(pnorm(y.as_slice(), p_out), x);
    };
    for j in 0..n {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[j] = 1.0;
        eval(&x, &mut top);
    }
    let svd = m.clone().svd(false, true);
    if let Some(vt) = svd.v_t {
        let mut v: Vec<f64> = vt.row(0).iter().copied().collect();
        if search::normalize(&mut v, p_in) {
            eval(&v, &mut top);
        }
    }
    let mut rng = search::rng(cfg.seed, salt::OPNORM);
    for _ in 0..cfg.samples {
        search::random_unit(&mut rng, &mut x, p_in);
        eval(&x, &mut top);
    }
    top.into_vec()
        .into_iter()
        .map(|(score, mut x)| score.max(power_ascent(m, &mut x, p_in, p_out, cfg.ascent_steps)))
        .fold(0.0, f64::max)
}

/// Enclosure of `sup_{x≠0} ‖Mx‖_{p_out} / ‖x‖_{p_in}`.
pub fn opnorm(m: &Matrix, p_in: PIndex, p_out: PIndex, cfg: &SearchConfig) -> Result<BoundInterval> {
    if m.is_empty() {
        return Err(Error::DimensionMismatch("operator norm of an empty matrix".into()));
    }
    if let Some(v) = exact_norm(m, p_in, p_out) {
        return Ok(BoundInterval::exact(v));
    }
    let hi = opnorm_upper(m, p_in, p_out);
    let lo = sampled_lower(m, p_in, p_out, cfg).min(hi);
    Ok(BoundInterval {
        lo,
        hi,
        exact: hi - lo <= cfg.tol.exact,
    })
}

/// Inverse of a square matrix, rejecting `σ_min < tol·σ_max`.
pub fn invert(m: &Matrix, tol: f64) -> Result<Matrix> {
    if !m.is_square() || m.is_empty() {
        return Err(Error::DimensionMismatch(format!(
            "cannot invert a {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    let sv = m.singular_values();
    let (smin, smax) = (sv.min(), sv.max());
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    if !(ratio >= tol) {
        return Err(Error::Singular { ratio });
    }
    m.clone()
        .try_inverse()
        .ok_or(Error::Singular { ratio })
}

/// Enclosure of `inf_{x≠0} ‖Mx‖_{p_out} / ‖x‖_{p_in}`.
///
/// For invertible square `M` this is `1/‖M⁻¹‖_{p_out→p_in}`; a singular `M`
/// has gain exactly zero.
pub fn min_gain(m: &Matrix, p_in: PIndex, p_out: PIndex, cfg: &SearchConfig) -> Result<BoundInterval> {
    if !m.is_square() {
        let hi = opnorm(m, p_in, p_out, cfg)?.hi;
        return Ok(BoundInterval::new(0.0, hi));
    }
    match invert(m, cfg.tol.singular) {
        Ok(inv) => Ok(opnorm(&inv, p_out, p_in, cfg)?.reciprocal()),
        Err(Error::Singular { .. }) => Ok(BoundInterval::exact(0.0)),
        Err(e) => Err(e),
    }
}
