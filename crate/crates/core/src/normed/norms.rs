use super::PIndex;

/// `|x|^p` with fast paths for the exponents used most.
#[inline]
pub(crate) fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if p == 1.0 {
        a
    } else if p == 2.0 {
        a * a
    } else if p == 3.0 {
        a * a * a
    } else if p == 1.5 {
        a * a.sqrt()
    } else {
        a.powf(p)
    }
}

/// `s^(1/p)`, the inverse of [`abs_pow`] on sums.
#[inline]
pub(crate) fn root(s: f64, p: f64) -> f64 {
    if p == 1.0 {
        s
    } else if p == 2.0 {
        s.sqrt()
    } else if p == 3.0 {
        s.cbrt()
    } else {
        s.powf(1.0 / p)
    }
}

/// The ℓᵖ norm `(Σ|vᵢ|ᵖ)^(1/p)`, or `max|vᵢ|` for `p = ∞`.
pub fn pnorm(v: &[f64], p: PIndex) -> f64 {
    if p.is_infinite() {
        return v.iter().fold(0.0, |m, x| m.max(x.abs()));
    }
    let p = p.value();
    root(v.iter().map(|&x| abs_pow(x, p)).sum(), p)
}

/// Norm of the functional `x ↦ ⟨f, x⟩` on `(ℝᵈ, ‖·‖_p)`: the conjugate norm of `f`.
pub fn dual_norm(f: &[f64], p: PIndex) -> f64 {
    pnorm(f, p.conjugate())
}

/// Norms of every prefix `v[..m]`, `m = 1..=len`, written into `out`.
pub fn prefix_norms(v: &[f64], p: PIndex, out: &mut Vec<f64>) {
    out.clear();
    if p.is_infinite() {
        let mut m = 0.0f64;
        for x in v {
            m = m.max(x.abs());
            out.push(m);
        }
        return;
    }
    let p = p.value();
    let mut acc = 0.0;
    for &x in v {
        acc += abs_pow(x, p);
        out.push(root(acc, p));
    }
}
