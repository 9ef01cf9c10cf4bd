//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use nalgebra::DMatrix;
use pframe::config::Tolerances;
use pframe::io::{from_json, to_json, Provenance, ReportFile};
use pframe::normed::{invert, opnorm, opnorm_upper, pnorm};
use pframe::oracle::{
    actual_bounds_oracle, best_t_oracle, bracket_test, bracket_test_with_mode, random_instance_with, ActualBounds,
    GenMode, GenOptions, NamedVerdict, SpecializationCheck, Timings, VerificationReport,
};
use pframe::theorems::{
    corollary_check, hilding_check, pw1_check, pw2_predicted, pw3_predicted, CorollaryOutcome, SummableOutcome, Witness,
};
use pframe::{
    AsfBounds, BoundInterval, ConditionVerdict, ExponentMode, FramePair, HilbertFrameBounds, Matrix, PIndex,
    PerturbationParams, PredictedBounds, SearchConfig, TheoremTag, ThetaNorms, VerdictStatus,
};
use pframe_cli::gen_options;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Verdict {
    pass: bool,
    detail: String,
}

fn cfg_with_tol(bracket: f64) -> SearchConfig {
    SearchConfig {
        tol: Tolerances {
            bracket,
            ..Tolerances::default()
        },
        ..SearchConfig::default()
    }
}

/// `(d, N)` with `d ∈ {2,3,4}` and `N ∈ {d..2d}`.
fn hilbert_shape(seed: u64) -> (usize, usize) {
    let d = 2 + (seed % 3) as usize;
    (d, d + (seed / 3) as usize % (d + 1))
}

/// `p ∈ {1, 1.5, 2, 3}`, `d ≤ 8`, `N ≤ 16`.
fn general_shape(seed: u64) -> (PIndex, usize, usize) {
    let p = [1.0, 1.5, 2.0, 3.0][(seed % 4) as usize];
    let d = 2 + (seed / 4 % 7) as usize;
    let n = d + (seed / 28 % (17 - d as u64)) as usize;
    (PIndex::new(p).unwrap(), d, n)
}

fn eigen_bounds(t: &Matrix) -> (f64, f64) {
    let eig = (t * t.transpose()).symmetric_eigen().eigenvalues;
    (eig.min(), eig.max())
}

const TRIALS: u64 = 1000;
const HILBERT_SCALE: f64 = 0.1;
const GENERAL_SCALE: f64 = 0.05;

fn pw1_bracketing() -> Verdict {
    let start = Instant::now();
    let tol = 1e-7;
    let cfg = cfg_with_tol(tol);
    let (mut held, mut violations, mut disagreements, mut failed) = (0, 0, 0, 0);
    for seed in 0..TRIALS {
        let (d, n) = hilbert_shape(seed);
        let cfg = cfg.with_seed(seed);
        let opts = GenOptions::default();
        let Ok(inst) = random_instance_with(seed, d, n, PIndex::TWO, HILBERT_SCALE, GenMode::HilbertCanonical, &opts, &cfg)
        else {
            failed += 1;
            continue;
        };
        let t = inst.fp.synthesis();
        let (a, b) = eigen_bounds(t);
        let c: f64 = (t - &inst.omega).iter().map(|v| v * v).sum();
        if c >= a {
            continue;
        }
        held += 1;
        let lower = a * (1.0 - (c / a).sqrt()).powi(2);
        let upper = b * (1.0 + (c / b).sqrt()).powi(2);
        let (lo, hi) = eigen_bounds(&inst.omega);
        let ok = lower <= lo + tol && hi <= upper + tol;
        if !ok {
            violations += 1;
        }
        let rep = bracket_test(&inst, TheoremTag::Pw1, &cfg);
        if rep.bracket_ok != Some(ok) {
            disagreements += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Verdict {
        pass: held == TRIALS && violations == 0 && disagreements == 0 && secs < 10.0,
        detail: format!(
            "{held}/{TRIALS} with c < a, {violations} violations, {disagreements} tool/oracle disagreements, \
             {failed} generation failures, {secs:.1}s (limit 10s)"
        ),
    }
}

/// One ensemble: even seeds draw `β = 0` and are checked against the
/// two-constant formula, odd seeds against the three-constant one.
fn pw2_pw3_bracketing() -> Verdict {
    let start = Instant::now();
    let cfg = cfg_with_tol(1e-7);
    let mut held = [0u64; 2];
    let mut violations = [0u64; 2];
    let mut failed = 0;
    let mut identity_worst = 0.0f64;
    let mut identity_bits = true;
    for seed in 0..TRIALS {
        let tag = if seed % 2 == 0 { TheoremTag::Pw2 } else { TheoremTag::Pw3 };
        let k = (seed % 2) as usize;
        let (d, n) = hilbert_shape(seed);
        let cfg = cfg.with_seed(seed);
        let Ok(inst) = random_instance_with(
            seed,
            d,
            n,
            PIndex::TWO,
            HILBERT_SCALE,
            GenMode::HilbertCanonical,
            &gen_options(tag),
            &cfg,
        ) else {
            failed += 1;
            continue;
        };
        let (a, b) = eigen_bounds(inst.fp.synthesis());
        let PerturbationParams {
            alpha, beta, gamma, ..
        } = inst.params;
        let (_, two) = pw2_predicted(a, b, alpha, gamma).unwrap();
        let (_, three) = pw3_predicted(a, b, alpha, 0.0, gamma).unwrap();
        let (l2, l3) = (two.lower.unwrap(), three.lower.unwrap());
        identity_worst = identity_worst.max((l2 - l3).abs()).max((two.upper - three.upper).abs());
        identity_bits &= l2.to_bits() == l3.to_bits() && two.upper.to_bits() == three.upper.to_bits();

        let rep = bracket_test(&inst, tag, &cfg);
        if !rep.hypotheses_hold {
            continue;
        }
        held[k] += 1;
        // Formula evaluated independently from the eigenvalues.
        let beta = if tag == TheoremTag::Pw2 { 0.0 } else { beta };
        let lower = a * (1.0 - (alpha + beta + gamma / a.sqrt()) / (1.0 + beta)).powi(2);
        let upper = b * (1.0 + (alpha + beta + gamma / b.sqrt()) / (1.0 - beta)).powi(2);
        let (lo, hi) = eigen_bounds(&inst.omega);
        if !(lower <= lo + cfg.tol.bracket && hi <= upper + cfg.tol.bracket) || rep.bracket_ok != Some(true) {
            violations[k] += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let per_tag = TRIALS / 2;
    let pass = violations == [0, 0]
        && held.iter().all(|&h| h * 100 >= per_tag * 99)
        && identity_worst <= 1e-12
        && identity_bits
        && secs < 10.0;
    Verdict {
        pass,
        detail: format!(
            "pw2: {}/{per_tag} certified, {} violations; pw3: {}/{per_tag} certified, {} violations; \
             {failed} generation failures; beta=0 identity max diff {identity_worst:.1e} (bitwise {}); \
             {secs:.1}s (limit 10s)",
            held[0],
            violations[0],
            held[1],
            violations[1],
            if identity_bits { "equal" } else { "different" }
        ),
    }
}

fn main_bracketing() -> Verdict {
    let start = Instant::now();
    let cfg = cfg_with_tol(1e-6);
    let (mut held, mut failed) = (0u64, 0);
    let mut violating = Vec::new();
    let mut unperturbed_functionals_ok = 0;
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    for seed in 0..TRIALS {
        let (p, d, n) = general_shape(seed);
        let cfg = cfg.with_seed(seed);
        let Ok(mut inst) =
            random_instance_with(seed, d, n, p, GENERAL_SCALE, GenMode::GeneralPasf, &GenOptions::default(), &cfg)
        else {
            failed += 1;
            continue;
        };
        let rep = bracket_test(&inst, TheoremTag::Main, &cfg);
        if !rep.hypotheses_hold {
            continue;
        }
        held += 1;
        worst_lower = worst_lower.min(rep.lower_margin.unwrap_or(f64::NEG_INFINITY));
        worst_upper = worst_upper.min(rep.upper_margin.unwrap_or(f64::NEG_INFINITY));
        if rep.bracket_ok != Some(true) {
            violating.push(seed);
            // Same instance with the functionals left unperturbed.
            inst.g = inst.fp.analysis().clone();
            if bracket_test(&inst, TheoremTag::Main, &cfg).bracket_ok == Some(true) {
                unperturbed_functionals_ok += 1;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let shown: Vec<String> = violating.iter().take(8).map(u64::to_string).collect();
    Verdict {
        pass: violating.is_empty() && held * 100 >= TRIALS * 99 && secs < 60.0,
        detail: format!(
            "{held}/{TRIALS} certified, {} certified violations (seeds {}{}), worst lower margin {worst_lower:.3e}, \
             worst upper margin {worst_upper:.3e}; {unperturbed_functionals_ok}/{} violators bracket once G = F; \
             {failed} generation failures; {secs:.1}s (limit 60s)",
            violating.len(),
            shown.join(","),
            if violating.len() > shown.len() { ",..." } else { "" },
            violating.len()
        ),
    }
}

fn gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Matrix {
    DMatrix::from_fn(r, c, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn hilding_sandwich() -> Verdict {
    let start = Instant::now();
    let tol = 1e-7;
    let cfg = cfg_with_tol(tol);
    let indices = [1.0, 1.5, 2.0, 3.0, f64::INFINITY];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut built, mut certified, mut sandwich_fail, mut inverse_fail) = (0, 0, 0, 0);
    let mut x = Vec::new();
    while built < 500 {
        let d = rng.random_range(2..=6);
        let p = PIndex::new(indices[built % indices.len()]).unwrap();
        let u = gaussian(&mut rng, d, d);
        let sv = u.singular_values();
        if sv.max() / sv.min() > 1e3 {
            continue;
        }
        let r = gaussian(&mut rng, d, d);
        let r = &r / opnorm_upper(&r, p, p);
        let (alpha0, beta, delta) = (rng.random_range(0.0..0.3), rng.random_range(0.0..0.3), rng.random_range(0.0..0.2));
        // U − V = α₀U + βV + δRU with ‖R‖ ≤ 1.
        let v = (&u * (1.0 - alpha0) - &r * &u * delta) / (1.0 + beta);
        let u_inv = invert(&u, 1e-12).unwrap();
        let residual = opnorm_upper(&(Matrix::identity(d, d) - &v * &u_inv), p, p);
        let alpha = (alpha0 + delta).max(residual * (1.0 + beta) - beta) * (1.0 + 1e-12);
        if alpha >= 1.0 {
            continue;
        }
        built += 1;
        let cfg = cfg.with_seed(built as u64);
        let (verdict, res) = hilding_check(&u, &v, alpha, beta, p, &cfg).unwrap();
        if verdict.status != VerdictStatus::Certified {
            continue;
        }
        certified += 1;
        let mut bad = false;
        for _ in 0..10_000 {
            x.clear();
            x.extend((0..d).map(|_| rng.sample::<f64, _>(StandardNormal)));
            let scale = pnorm(&x, p);
            let xv = nalgebra::DVector::from_iterator(d, x.iter().map(|v| v / scale));
            let ux = pnorm((&u * &xv).as_slice(), p);
            let vx = pnorm((&v * &xv).as_slice(), p);
            bad |= res.gain_lo * ux > vx + tol || vx > res.gain_hi * ux + tol;
        }
        sandwich_fail += usize::from(bad);
        let v_inv = invert(&v, 1e-12).unwrap();
        if opnorm(&v_inv, p, p, &cfg).unwrap().lo > res.inv_norm_bound + tol {
            inverse_fail += 1;
        }
    }
    let u = Matrix::identity(2, 2);
    let v = nalgebra::dmatrix![1.0, 0.0; 0.0, 0.5];
    let (verdict, res) = hilding_check(&u, &v, 0.5, 0.0, PIndex::TWO, &cfg).unwrap();
    let actual = opnorm(&invert(&v, 1e-12).unwrap(), PIndex::TWO, PIndex::TWO, &cfg).unwrap().hi;
    let worked = verdict.status == VerdictStatus::Certified && (res.inv_norm_bound - 2.0).abs() <= 1e-9 && (actual - 2.0).abs() <= 1e-9;
    Verdict {
        pass: certified >= 495 && sandwich_fail == 0 && inverse_fail == 0 && worked,
        detail: format!(
            "{certified}/500 certified, {sandwich_fail} sandwich failures over 10^4 samples each, \
             {inverse_fail} inverse-norm failures; worked example bound {:.12}, actual {actual:.12}; {:.1}s",
            res.inv_norm_bound,
            start.elapsed().as_secs_f64()
        ),
    }
}

fn corollary_exponents() -> Verdict {
    let cfg = SearchConfig::default();
    let mut notes = Vec::new();
    let mut pass = true;
    let opts = GenOptions::default();
    for seed in [11u64, 12, 13] {
        let inst = random_instance_with(seed, 3, 5, PIndex::TWO, GENERAL_SCALE, GenMode::GeneralPasf, &opts, &cfg).unwrap();
        let a = to_json(&bracket_test_with_mode(&inst, TheoremTag::Corollary, ExponentMode::AsStated, &cfg)).unwrap();
        let b = to_json(&bracket_test_with_mode(&inst, TheoremTag::Corollary, ExponentMode::Conjugate, &cfg)).unwrap();
        pass &= a == b;
    }
    notes.push(format!("p=2 reports byte-identical: {pass}"));
    for p in [1.5, 3.0] {
        let p = PIndex::new(p).unwrap();
        let inst = random_instance_with(5, 3, 5, p, GENERAL_SCALE, GenMode::GeneralPasf, &opts, &cfg).unwrap();
        let reps: Vec<VerificationReport> = [ExponentMode::AsStated, ExponentMode::Conjugate]
            .into_iter()
            .map(|m| bracket_test_with_mode(&inst, TheoremTag::Corollary, m, &cfg))
            .collect();
        let lambdas: Vec<f64> = reps.iter().map(|r| r.corollary.as_ref().unwrap().lambda).collect();
        let warned = reps.iter().all(|r| !r.warnings.is_empty() && r.corollary.as_ref().unwrap().warning.is_some());
        let both = reps
            .iter()
            .all(|r| r.corollary.as_ref().is_some_and(|c| c.lambda_as_stated == lambdas[0] && c.lambda_conjugate == lambdas[1]));
        pass &= lambdas[0] != lambdas[1] && warned && both;
        notes.push(format!(
            "p={p}: lambda {:.6e} vs {:.6e}, warning {}",
            lambdas[0],
            lambdas[1],
            if warned { "present" } else { "missing" }
        ));
    }
    Verdict {
        pass,
        detail: notes.join("; "),
    }
}

fn oracle_cross_validation() -> Verdict {
    let cfg = SearchConfig::default();
    let opts = GenOptions::default();
    let (mut worst_bounds, mut worst_t) = (0.0f64, 0.0f64);
    let mut prefix_ok = true;
    for seed in 0..200u64 {
        let d = 2 + (seed % 7) as usize;
        let n = d + (seed / 7 % 4) as usize;
        let cfg = cfg.with_seed(seed);
        let inst = random_instance_with(seed, d, n, PIndex::TWO, 0.0, GenMode::GeneralPasf, &opts, &cfg).unwrap();
        let sampled = actual_bounds_oracle(&inst.fp, &cfg).unwrap();
        let sv = inst.fp.frame_operator().singular_values();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
        worst_bounds = worst_bounds.max(rel(sampled.lower.lo, sv.min())).max(rel(sampled.upper.hi, sv.max()));
    }
    for seed in 0..200u64 {
        let (p, d, n) = general_shape(seed);
        let (d, n) = (d.min(5), n.min(8));
        let cfg = cfg.with_seed(seed);
        let inst = random_instance_with(seed, d, n.max(d), p, GENERAL_SCALE, GenMode::GeneralPasf, &opts, &cfg).unwrap();
        let (f, g) = (inst.fp.analysis(), &inst.g);
        let oracle = best_t_oracle(f, g, p, p, 0.0, 0.0, &cfg);
        let enc = opnorm(&(f - g), p, p, &cfg).unwrap();
        let scale = enc.hi.max(f64::MIN_POSITIVE);
        let dist = if oracle.value < enc.lo {
            enc.lo - oracle.value
        } else if oracle.value > enc.hi {
            oracle.value - enc.hi
        } else {
            0.0
        };
        worst_t = worst_t.max(dist / scale).max((oracle.value - enc.lo).abs() / scale);
        prefix_ok &= oracle.prefix == f.nrows();
    }
    Verdict {
        pass: worst_bounds <= 1e-4 && worst_t <= 1e-4 && prefix_ok,
        detail: format!(
            "sampled vs singular-value bounds max rel err {worst_bounds:.2e} (200 operators); best_t vs opnorm max rel \
             err {worst_t:.2e} (200 instances); maximizing prefix always N: {prefix_ok}"
        ),
    }
}

fn micro_instance() -> Verdict {
    let cfg = SearchConfig::default();
    let i2 = Matrix::identity(2, 2);
    let omega = nalgebra::dmatrix![1.0, 0.0; 0.3, 1.0];
    let fp = FramePair::canonical_hilbert(i2.clone()).unwrap();
    let pw1 = pw1_check(&i2, &omega, cfg.tol.singular).unwrap();
    let cor = corollary_check(&fp, &i2, &omega, ExponentMode::AsStated, &cfg).unwrap();
    let hb = pframe::hilbert_frame_bounds(&omega, cfg.tol.singular).unwrap();
    let asf = actual_bounds_oracle(&fp.perturbed(i2.clone(), omega.clone()).unwrap(), &cfg).unwrap();
    let cb = cor.bounds.unwrap();
    let checks = [
        ("c", pw1.c, 0.09),
        ("lambda", cor.lambda, 0.09),
        ("pw1 lower", pw1.predicted.lower.unwrap(), 0.49),
        ("pw1 upper", pw1.predicted.upper, 1.69),
        ("corollary lower", cb.lower.unwrap(), 0.7),
        ("corollary upper", cb.upper, 1.3),
        ("hilbert lower", hb.lower, 0.7416),
        ("hilbert upper", hb.upper, 1.3484),
        ("asf lower", asf.lower.lo, 0.8612),
        ("asf upper", asf.upper.hi, 1.1612),
    ];
    let bad: Vec<String> = checks
        .iter()
        .filter(|(_, got, want)| (got - want).abs() > 1e-3)
        .map(|(name, got, want)| format!("{name}={got} (want {want})"))
        .collect();
    Verdict {
        pass: bad.is_empty(),
        detail: if bad.is_empty() {
            format!("all {} values within 1e-3", checks.len())
        } else {
            bad.join(", ")
        },
    }
}

fn run_binary(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_pframe"))
        .args(args)
        .env_remove("PFRAME_SEED")
        .output()
        .expect("binary runs");
    out.stdout
}

fn finite() -> impl Strategy<Value = f64> {
    use proptest::num::f64::{NEGATIVE, NORMAL, POSITIVE, SUBNORMAL, ZERO};
    POSITIVE | NEGATIVE | NORMAL | SUBNORMAL | ZERO
}

fn index() -> impl Strategy<Value = PIndex> {
    prop_oneof![
        prop::sample::select(vec![1.0, 1.5, 2.0, 3.0, f64::INFINITY]),
        1.0f64..1e6,
    ]
    .prop_map(|p| PIndex::new(p).unwrap())
}

fn text() -> impl Strategy<Value = String> {
    "[a-zA-Z0-9 _.\"\\\\/\u{e9}\u{3bb}-]{0,24}"
}

fn interval() -> impl Strategy<Value = BoundInterval> {
    (finite(), finite(), any::<bool>()).prop_map(|(lo, hi, exact)| BoundInterval { lo, hi, exact })
}

fn tag() -> impl Strategy<Value = TheoremTag> {
    prop::sample::select(TheoremTag::ALL.to_vec())
}

fn predicted() -> impl Strategy<Value = PredictedBounds> {
    (prop::option::of(finite()), finite(), tag()).prop_map(|(lower, upper, theorem)| PredictedBounds {
        lower,
        upper,
        theorem,
    })
}

fn norms() -> impl Strategy<Value = ThetaNorms> {
    (interval(), interval(), interval(), interval()).prop_map(|(a, b, c, d)| ThetaNorms {
        analysis: a,
        synthesis: b,
        analysis_inverse: c,
        frame_inverse: d,
    })
}

fn verdict() -> impl Strategy<Value = NamedVerdict> {
    let witness = (prop::collection::vec(finite(), 0..5), 0usize..20, finite())
        .prop_map(|(vector, prefix, violation)| Witness { vector, prefix, violation });
    (
        text(),
        prop::sample::select(vec![VerdictStatus::Certified, VerdictStatus::Falsified, VerdictStatus::Undecided]),
        prop::option::of(witness),
        finite(),
        prop::option::of(text()),
    )
        .prop_map(|(name, status, witness, margin, diagnostics)| NamedVerdict {
            name,
            verdict: ConditionVerdict {
                status,
                witness,
                margin,
                diagnostics,
            },
        })
}

fn corollary() -> impl Strategy<Value = CorollaryOutcome> {
    (
        prop::array::uniform5(finite()),
        index(),
        any::<bool>(),
        norms(),
        prop::option::of(predicted()),
        prop::option::of(text()),
    )
        .prop_map(|(v, exponent, holds, norms, bounds, warning)| CorollaryOutcome {
            lambda: v[0],
            lambda_as_stated: v[1],
            lambda_conjugate: v[2],
            exponent,
            gamma: v[3],
            fn_gap: v[4],
            holds,
            norms,
            bounds,
            warning,
        })
}

fn actual() -> impl Strategy<Value = ActualBounds> {
    prop_oneof![
        (interval(), interval()).prop_map(|(lower, upper)| ActualBounds::Asf(AsfBounds { lower, upper })),
        (finite(), finite()).prop_map(|(lower, upper)| ActualBounds::Hilbert(HilbertFrameBounds { lower, upper })),
    ]
}

fn report() -> impl Strategy<Value = VerificationReport> {
    let head = (
        tag(),
        index(),
        index(),
        any::<u64>(),
        prop::array::uniform6(finite()),
        prop::collection::vec(verdict(), 0..4),
        prop::array::uniform2(any::<bool>()),
    );
    let middle = (
        prop::option::of(predicted()),
        prop::option::of(actual()),
        prop::option::of(any::<bool>()),
        prop::option::of(any::<bool>()),
        prop::option::of(finite()),
        prop::option::of(finite()),
        prop::option::of(norms()),
    );
    let summable = (prop::array::uniform4(finite()), prop::array::uniform4(any::<bool>()), prop::option::of(predicted()))
        .prop_map(|(sums, holds, bounds)| SummableOutcome { sums, holds, bounds });
    let specialization = (any::<bool>(), 0usize..10, prop::option::of((finite(), finite())), prop::option::of(any::<bool>()))
        .prop_map(|(t, rank, hb, ok)| SpecializationCheck {
            analysis_is_transpose: t,
            omega_rank: rank,
            omega_frame_bounds: hb.map(|(lower, upper)| HilbertFrameBounds { lower, upper }),
            frame_claim_ok: ok,
        });
    let tail = (
        prop::option::of(corollary()),
        prop::option::of(summable),
        prop::option::of(specialization),
        prop::collection::vec(text(), 0..3),
        prop::option::of(text()),
        prop::option::of(finite().prop_map(|total_ms| Timings { total_ms })),
    );
    (head, middle, tail).prop_map(|(h, m, t)| VerificationReport {
        theorem: h.0,
        p: h.1,
        x_norm: h.2,
        seed: h.3,
        params: PerturbationParams {
            r: h.4[0],
            s: h.4[1],
            t: h.4[2],
            alpha: h.4[3],
            beta: h.4[4],
            gamma: h.4[5],
        },
        conditions: h.5,
        admissible: h.6[0],
        hypotheses_hold: h.6[1],
        predicted: m.0,
        actual: m.1,
        perturbed_is_asf: m.2,
        bracket_ok: m.3,
        lower_margin: m.4,
        upper_margin: m.5,
        norms: m.6,
        corollary: t.0,
        summable: t.1,
        specialization: t.2,
        warnings: t.3,
        error: t.4,
        timings: t.5,
    })
}

fn report_file() -> impl Strategy<Value = ReportFile<VerificationReport>> {
    (report(), text(), any::<u64>(), 1usize..100_000, prop::array::uniform3(finite()))
        .prop_map(|(report, command, seed, samples, tols)| {
            let mut cfg = SearchConfig::default().with_seed(seed);
            cfg.samples = samples;
            cfg.tol = Tolerances {
                exact: tols[0],
                bracket: tols[1],
                singular: tols[2],
            };
            ReportFile {
                provenance: Provenance::new(&command, &cfg),
                report,
            }
        })
}

fn determinism_and_format() -> Verdict {
    let gen = [
        "gen", "--seed", "3", "--dim", "3", "--count", "5", "--p", "1.5", "--scale", "0.05", "--mode", "general",
    ];
    let verify = [
        "verify", "--seeds", "1..20", "--dim", "2", "--count", "3", "--p", "2", "--theorem", "pw3",
    ];
    let gen_same = run_binary(&gen) == run_binary(&gen);
    let verify_same = run_binary(&verify) == run_binary(&verify);

    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 1000,
            failure_persistence: None,
            ..Config::default()
        },
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    let round_trip = runner.run(&report_file(), |file| {
        let text = to_json(&file).unwrap();
        let back: ReportFile<VerificationReport> = from_json(&text).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert_eq!(to_json(&back).unwrap(), text);
        Ok(())
    });
    let round_trip_ok = round_trip.is_ok();
    let mut detail = format!(
        "gen byte-identical: {gen_same}; verify byte-identical: {verify_same}; 1000 fuzzed report round trips: {}",
        if round_trip_ok { "ok" } else { "failed" }
    );
    if let Err(e) = round_trip {
        detail.push_str(&format!(" ({e})"));
    }
    Verdict {
        pass: gen_same && verify_same && round_trip_ok,
        detail,
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("PW1 bracketing", pw1_bracketing),
        ("PW2/PW3 bracketing", pw2_pw3_bracketing),
        ("main theorem bracketing", main_bracketing),
        ("Hilding sandwich", hilding_sandwich),
        ("corollary exponent handling", corollary_exponents),
        ("oracle cross-validation", oracle_cross_validation),
        ("worked micro-instance", micro_instance),
        ("determinism and format", determinism_and_format),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let v = run();
        println!("{} [{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, i + 1, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
