use rand::Rng;
use rayon::prelude::*;

use crate::distributions::{
    direct_product, escort, expand_zero, make_dist, uniform, JointDist, Normalization, ProbDist,
};
use crate::entropies::{conditional_with, CompositionRule, EntropyParams, System};
use crate::error::{domain, Error, Result};
use crate::generators::{kn_mean, MeanGenerator, PseudoAddGenerator};
use crate::sampling::{dim_in, dirichlet_uniform, random_joint, stream_id, trial_rng};

use super::report::{CheckKind, CheckRecord, Expectation, GaussianProduct, Reference, Witness};
use super::{
    Subject, TrialConfig, LIMIT_OFFSET, MEAN_AGREEMENT_TOLERANCE, MEAN_GAP_THRESHOLD,
};

/// Largest uniform distribution the power-law check will build.
const MAX_OUTCOMES: usize = 1_000_000;

/// Errors and NaN count as unbounded residuals.
fn score(r: Result<f64>) -> f64 {
    match r {
        Ok(v) if !v.is_nan() => v,
        _ => f64::INFINITY,
    }
}

/// Runs `n` trials in parallel and returns the worst residual with the
/// inputs that produced it. Ties go to the smaller trial index.
fn worst<I, D, R>(n: usize, draw: D, residual: R) -> (f64, I)
where
    D: Fn(usize) -> I + Sync,
    R: Fn(&I) -> f64 + Sync,
{
    let (res, idx) = (0..n)
        .into_par_iter()
        .map(|i| (residual(&draw(i)), i))
        .reduce(
            || (f64::NEG_INFINITY, usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    (res, draw(idx))
}

fn dist(v: &[f64]) -> Result<ProbDist> {
    make_dist(v, Normalization::Strict)
}

fn axiom(system: System, n: u8) -> String {
    format!("{system}{n}")
}

#[allow(clippy::too_many_arguments)]
fn record(
    check: CheckKind,
    axiom: String,
    system: System,
    subject: Option<&Subject>,
    trials: usize,
    tolerance: f64,
    expect: Expectation,
    max_residual: f64,
    witness: Witness,
) -> CheckRecord {
    CheckRecord {
        check,
        axiom,
        system,
        subject: subject.cloned(),
        trials,
        tolerance,
        expect,
        max_residual,
        passed: expect.judge(max_residual, tolerance),
        witness,
    }
}

/// The composition rule to use for `subject` under `system`.
///
/// The generalized system and its two-parameter specialization share one
/// rule, so either label is accepted for those families.
pub fn rule_for(system: System, subject: &Subject) -> Result<CompositionRule> {
    let rule = subject.rule();
    let ok = rule.system == system
        || matches!((rule.system, system), (System::Sm, System::Gsk) | (System::Gsk, System::Sm));
    if !ok {
        return domain(format!(
            "{} is characterized under {}, not {system}",
            subject.label(),
            rule.system
        ));
    }
    Ok(CompositionRule { system, ..rule })
}

// Residuals. Each check and `replay` go through these, so a witness
// reproduces its record's residual bit for bit.

fn maximality_residual(s: &Subject, p: &ProbDist) -> Result<f64> {
    Ok(s.value(p)? - s.value(&uniform(p.len())?)?)
}

fn expandability_residual(s: &Subject, p: &ProbDist) -> Result<f64> {
    Ok((s.value(&expand_zero(p))? - s.value(p)?).abs())
}

fn continuity_residual(s: &Subject, p: &[f64], delta: &[f64]) -> Result<f64> {
    if p.len() != delta.len() {
        return domain("perturbation length does not match the distribution");
    }
    let moved: Vec<f64> = p.iter().zip(delta).map(|(a, d)| a + d).collect();
    let step: f64 = delta.iter().map(|d| d.abs()).sum();
    Ok((s.value(&dist(&moved)?)? - s.value(&dist(p)?)?).abs() / step)
}

fn composition_residual(s: &Subject, rule: &CompositionRule, j: &JointDist) -> Result<f64> {
    let marginal = j.decompose().marginal;
    let cond = conditional_with(j, rule, |q| s.value(q))?;
    let rhs = rule.combine(s.value(&marginal)?, cond)?;
    Ok((s.value(&j.flatten())? - rhs).abs())
}

fn additivity_residual(s: &Subject, rule: &CompositionRule, p: &ProbDist, q: &ProbDist) -> Result<f64> {
    let joint = s.value(&direct_product(p, q).flatten())?;
    Ok((joint - rule.combine(s.value(p)?, s.value(q)?)?).abs())
}

fn uniform_value(s: &Subject, r: usize) -> Result<f64> {
    if r > MAX_OUTCOMES {
        return Err(Error::Range(format!(
            "uniform distribution on {r} outcomes exceeds the cap of {MAX_OUTCOMES}"
        )));
    }
    s.value(&uniform(r)?)
}

fn pow_outcomes(r: usize, m: usize) -> Result<usize> {
    u32::try_from(m)
        .ok()
        .and_then(|m| r.checked_pow(m))
        .filter(|n| *n <= MAX_OUTCOMES)
        .ok_or_else(|| Error::Range(format!("{r}^{m} outcomes exceeds the cap of {MAX_OUTCOMES}")))
}

/// `|L(r^m) − (L(r) ⊞ … ⊞ L(r))|` with `m` terms, where `⊞` is `+` when
/// `additive` and the subject's pseudo-addition otherwise.
fn power_law_residual(s: &Subject, r: usize, m: usize, additive: bool) -> Result<f64> {
    let lr = uniform_value(s, r)?;
    let lhs = uniform_value(s, pow_outcomes(r, m)?)?;
    let rhs = if additive {
        m as f64 * lr
    } else {
        let h = s.generator();
        (1..m).fold(lr, |acc, _| h.combine(acc, lr))
    };
    Ok((lhs - rhs).abs())
}

fn monotonicity_residual(s: &Subject, r: usize) -> Result<f64> {
    Ok(uniform_value(s, r)? - uniform_value(s, r + 1)?)
}

fn normalization_residual(s: &Subject, target: f64) -> Result<f64> {
    Ok((s.value(&uniform(2)?)? - target).abs())
}

fn reference_value(reference: &Reference, p: &ProbDist) -> Result<f64> {
    match reference {
        Reference::Family(e) => e.value(p),
        Reference::Product { gaussian_product: GaussianProduct { q, gamma } } => {
            let prod: f64 = p
                .iter()
                .filter(|pk| *pk > 0.0)
                .map(|pk| pk.powf((q - 1.0) * pk))
                .product();
            Ok((prod - 1.0) / gamma)
        }
    }
}

fn reduction_residual(s: &Subject, p: &ProbDist, reference: &Reference) -> Result<f64> {
    Ok((s.value(p)? - reference_value(reference, p)?).abs())
}

fn mean_gap_residual(
    weights: &ProbDist,
    values: &[f64],
    lambda: f64,
    shift: f64,
    h: &PseudoAddGenerator,
) -> Result<f64> {
    let f = MeanGenerator::exponential_order(lambda)?;
    let fy = f.shifted(shift)?;
    let inner = values.iter().map(|&v| h.invert(v)).collect::<Result<Vec<_>>>()?;
    let a = h.eval(kn_mean(&f, weights, &inner)?)?;
    let b = h.eval(kn_mean(&fy, weights, &inner)?)?;
    Ok((a - b).abs())
}

/// Recomputes the residual of `rec` from its witness.
pub fn replay(rec: &CheckRecord) -> Result<f64> {
    let subject = || {
        rec.subject
            .as_ref()
            .ok_or_else(|| Error::Domain("record has no subject".into()))
    };
    let r = match (&rec.check, &rec.witness) {
        (CheckKind::Maximality, Witness::Simplex { p }) => maximality_residual(subject()?, &dist(p)?),
        (CheckKind::Expandability, Witness::Simplex { p }) => {
            expandability_residual(subject()?, &dist(p)?)
        }
        (CheckKind::Continuity, Witness::Perturbation { p, delta }) => {
            continuity_residual(subject()?, p, delta)
        }
        (CheckKind::Composition, Witness::Joint { cells }) => {
            let s = subject()?;
            let rule = rule_for(rec.system, s)?;
            composition_residual(s, &rule, &JointDist::new(cells, Normalization::Strict)?)
        }
        (CheckKind::Additivity, Witness::Product { p, q }) => {
            let s = subject()?;
            let rule = rule_for(rec.system, s)?;
            additivity_residual(s, &rule, &dist(p)?, &dist(q)?)
        }
        (CheckKind::PowerLaw, Witness::PowerLaw { r, m }) => {
            let s = subject()?;
            power_law_residual(s, *r, *m, is_additive(s))
        }
        (CheckKind::PowerLawAdditive, Witness::PowerLaw { r, m }) => {
            power_law_residual(subject()?, *r, *m, true)
        }
        (CheckKind::Monotonicity, Witness::PowerLaw { r, .. }) => {
            monotonicity_residual(subject()?, *r)
        }
        (CheckKind::Normalization, Witness::Normalization { target }) => {
            normalization_residual(subject()?, *target)
        }
        (CheckKind::Reduction, Witness::Reduction { p, reference }) => {
            reduction_residual(subject()?, &dist(p)?, reference)
        }
        (CheckKind::MeanGap, Witness::MeanGap { weights, values, lambda, shift, h }) => {
            mean_gap_residual(&dist(weights)?, values, *lambda, *shift, h)
        }
        (check, _) => return domain(format!("witness does not fit a {} record", check.as_str())),
    };
    Ok(score(r))
}

fn is_additive(s: &Subject) -> bool {
    matches!(s.generator(), PseudoAddGenerator::Linear { .. })
}

/// Simplex trials: `cfg.simplex_trials` Dirichlet draws for every dimension in `cfg.simplex_dims`.
fn simplex_draw(cfg: &TrialConfig, stream: &str, i: usize) -> ProbDist {
    let n = cfg.simplex_dims.0 + i / cfg.simplex_trials;
    dirichlet_uniform(&mut trial_rng(cfg.seed, stream_id(stream), i as u64), n)
}

fn simplex_count(cfg: &TrialConfig) -> usize {
    (cfg.simplex_dims.1 - cfg.simplex_dims.0 + 1) * cfg.simplex_trials
}

/// `max H(P) − H(uniform(n))` over random `P`.
pub fn check_maximality(subject: &Subject, cfg: &TrialConfig) -> CheckRecord {
    let n = simplex_count(cfg);
    let (res, p) = worst(
        n,
        |i| simplex_draw(cfg, "maximality", i),
        |p| score(maximality_residual(subject, p)),
    );
    let system = subject.rule().system;
    record(
        CheckKind::Maximality,
        axiom(system, 2),
        system,
        Some(subject),
        n,
        cfg.exact_tolerance,
        Expectation::Within,
        res,
        Witness::Simplex { p: p.into_vec() },
    )
}

/// `max |H(P, 0) − H(P)|` over random `P`.
pub fn check_expandability(subject: &Subject, cfg: &TrialConfig) -> CheckRecord {
    let n = simplex_count(cfg);
    let (res, p) = worst(
        n,
        |i| simplex_draw(cfg, "expandability", i),
        |p| score(expandability_residual(subject, p)),
    );
    let system = subject.rule().system;
    record(
        CheckKind::Expandability,
        axiom(system, 3),
        system,
        Some(subject),
        n,
        cfg.exact_tolerance,
        Expectation::Within,
        res,
        Witness::Simplex { p: p.into_vec() },
    )
}

/// Finite-difference modulus `|H(P+δ) − H(P)| / ‖δ‖₁` at interior points.
///
/// Points are `(D + U)/2` for a Dirichlet draw `D` and the uniform `U`, so
/// every entry is at least `1/(2n)`. `δ` sums to zero with
/// `‖δ‖₁ = cfg.continuity_step`. The bound `cfg.continuity_bound` applies to
/// every family on the default grid; continuity itself cannot be falsified
/// by sampling, so this is a proxy.
pub fn check_continuity(subject: &Subject, cfg: &TrialConfig) -> CheckRecord {
    let draw = |i: usize| {
        let mut rng = trial_rng(cfg.seed, stream_id("continuity"), i as u64);
        let n = dim_in(&mut rng, cfg.simplex_dims.0.max(2), cfg.simplex_dims.1.max(2));
        let d = dirichlet_uniform(&mut rng, n);
        let p: Vec<f64> = d.iter().map(|x| 0.5 * x + 0.5 / n as f64).collect();
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        let centered: Vec<f64> = raw.iter().map(|x| x - mean).collect();
        let norm: f64 = centered.iter().map(|x| x.abs()).sum();
        let delta = centered.iter().map(|x| x * cfg.continuity_step / norm).collect();
        (p, delta)
    };
    let (res, (p, delta)) = worst(cfg.trials, draw, |(p, d): &(Vec<f64>, Vec<f64>)| {
        score(continuity_residual(subject, p, d))
    });
    let system = subject.rule().system;
    record(
        CheckKind::Continuity,
        axiom(system, 1),
        system,
        Some(subject),
        cfg.trials,
        cfg.continuity_bound,
        Expectation::Within,
        res,
        Witness::Perturbation { p, delta },
    )
}

/// `max |H(PQ) − (H(P) ⊞ H(Q|P))|` over random joints.
pub fn check_composition(system: System, subject: &Subject, cfg: &TrialConfig) -> Result<CheckRecord> {
    let rule = rule_for(system, subject)?;
    let (lo, hi) = cfg.joint_dims;
    let (res, j) = worst(
        cfg.trials,
        |i| {
            let mut rng = trial_rng(cfg.seed, stream_id("composition"), i as u64);
            let rows = dim_in(&mut rng, lo, hi);
            let cols = dim_in(&mut rng, lo, hi);
            random_joint(&mut rng, rows, cols)
        },
        |j| score(composition_residual(subject, &rule, j)),
    );
    Ok(record(
        CheckKind::Composition,
        axiom(system, 4),
        system,
        Some(subject),
        cfg.trials,
        cfg.tolerance,
        Expectation::Within,
        res,
        Witness::Joint { cells: j.to_rows() },
    ))
}

/// `max |H(P⋆Q) − (H(P) ⊞ H(Q))|` over random independent pairs.
pub fn check_additivity(system: System, subject: &Subject, cfg: &TrialConfig) -> Result<CheckRecord> {
    let rule = rule_for(system, subject)?;
    let (lo, hi) = cfg.joint_dims;
    let (res, (p, q)) = worst(
        cfg.trials,
        |i| {
            let mut rng = trial_rng(cfg.seed, stream_id("additivity"), i as u64);
            let n = dim_in(&mut rng, lo, hi);
            let m = dim_in(&mut rng, lo, hi);
            (dirichlet_uniform(&mut rng, n), dirichlet_uniform(&mut rng, m))
        },
        |(p, q)| score(additivity_residual(subject, &rule, p, q)),
    );
    Ok(record(
        CheckKind::Additivity,
        "additivity".into(),
        system,
        Some(subject),
        cfg.trials,
        cfg.tolerance,
        Expectation::Within,
        res,
        Witness::Product {
            p: p.into_vec(),
            q: q.into_vec(),
        },
    ))
}

fn grid_worst<F>(pairs: &[(usize, usize)], f: F) -> (f64, (usize, usize))
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    worst(pairs.len(), |i| pairs[i], |&(r, m)| f(r, m))
}

/// The power law of the uniform functional `L(r) = H(uniform(r))` for
/// `2 ≤ r ≤ r_max`, `2 ≤ m ≤ m_max`, plus monotonicity of `L` on
/// `1..=r_max²`.
///
/// Additive subjects are checked against `L(r^m) = m·L(r)`. Subjects with a
/// γ-exponential generator are checked against the m-fold pseudo-sum and,
/// separately, are expected to violate the additive form.
pub fn check_power_law(subject: &Subject, r_max: usize, m_max: usize, tol: f64) -> Result<Vec<CheckRecord>> {
    if r_max < 2 || m_max < 2 {
        return domain("power-law ranges need r_max, m_max >= 2");
    }
    let pairs: Vec<(usize, usize)> = (2..=r_max)
        .flat_map(|r| (2..=m_max).map(move |m| (r, m)))
        .collect();
    for &(r, m) in &pairs {
        pow_outcomes(r, m)?;
    }
    let system = subject.rule().system;
    let additive = is_additive(subject);
    let mut out = Vec::new();

    let (res, (r, m)) = grid_worst(&pairs, |r, m| score(power_law_residual(subject, r, m, additive)));
    out.push(record(
        CheckKind::PowerLaw,
        "power-law".into(),
        system,
        Some(subject),
        pairs.len(),
        tol,
        Expectation::Within,
        res,
        Witness::PowerLaw { r, m },
    ));

    if !additive {
        let (res, (r, m)) = grid_worst(&pairs, |r, m| score(power_law_residual(subject, r, m, true)));
        out.push(record(
            CheckKind::PowerLawAdditive,
            "power-law".into(),
            system,
            Some(subject),
            pairs.len(),
            tol,
            Expectation::Exceeds,
            res,
            Witness::PowerLaw { r, m },
        ));
    }

    let rs: Vec<(usize, usize)> = (1..r_max * r_max).map(|r| (r, 1)).collect();
    let (res, (r, m)) = grid_worst(&rs, |r, _| score(monotonicity_residual(subject, r)));
    out.push(record(
        CheckKind::Monotonicity,
        "power-law".into(),
        system,
        Some(subject),
        rs.len(),
        tol,
        Expectation::Within,
        res,
        Witness::PowerLaw { r, m },
    ));
    Ok(out)
}

/// `|H(½, ½) − h(1)|` for subjects with a normalization target.
pub fn check_normalization(system: System, subject: &Subject, tol: f64) -> Option<CheckRecord> {
    let target = subject.normalization_target()?;
    let res = score(normalization_residual(subject, target));
    Some(record(
        CheckKind::Normalization,
        axiom(system, 5),
        system,
        Some(subject),
        1,
        tol,
        Expectation::Within,
        res,
        Witness::Normalization { target },
    ))
}

fn reduction_record(
    subject: EntropyParams,
    reference: Reference,
    tol: f64,
    label: &str,
    cfg: &TrialConfig,
) -> CheckRecord {
    let subject = Subject::from(subject);
    let (res, p) = worst(
        cfg.trials,
        |i| {
            let mut rng = trial_rng(cfg.seed, stream_id("reduction"), i as u64);
            let n = dim_in(&mut rng, cfg.simplex_dims.0, cfg.simplex_dims.1);
            dirichlet_uniform(&mut rng, n)
        },
        |p| score(reduction_residual(&subject, p, &reference)),
    );
    let system = subject.rule().system;
    record(
        CheckKind::Reduction,
        label.into(),
        system,
        Some(&subject),
        cfg.trials,
        tol,
        Expectation::Within,
        res,
        Witness::Reduction {
            p: p.into_vec(),
            reference,
        },
    )
}

/// The reduction lattice between families, over `cfg.trials` random
/// distributions per edge, plus limit checks at distance `1e-7` from the
/// branch points.
pub fn check_reductions(cfg: &TrialConfig) -> Result<Vec<CheckRecord>> {
    cfg.validate()?;
    let tol = cfg.reduction_tolerance;
    let lim = cfg.limit_tolerance;
    let fam = Reference::Family;
    let conventions = |x: f64| [1.0 - x, (1.0 - x).exp2() - 1.0];
    let mut out = Vec::new();
    for &a in &cfg.grid.alphas {
        for g in conventions(a) {
            out.push(reduction_record(
                EntropyParams::sharma_mittal(a, a, g)?,
                fam(EntropyParams::tsallis(a, g, -1.0)?),
                tol,
                "sm-to-tsallis",
                cfg,
            ));
        }
        out.push(reduction_record(
            EntropyParams::sharma_mittal(1.0, a, 0.0)?,
            fam(EntropyParams::renyi(a)?),
            tol,
            "sm-to-renyi",
            cfg,
        ));
        out.push(reduction_record(
            EntropyParams::nath(-1.0, 1.0 - a, a)?,
            fam(EntropyParams::renyi(a)?),
            tol,
            "nath-to-renyi",
            cfg,
        ));
    }
    for &q in &cfg.grid.qs {
        for g in conventions(q) {
            out.push(reduction_record(
                EntropyParams::sharma_mittal(q, 1.0, g)?,
                Reference::Product {
                    gaussian_product: GaussianProduct { q, gamma: g },
                },
                tol,
                "sm-to-gaussian",
                cfg,
            ));
            for &a in &cfg.grid.alphas {
                let h = PseudoAddGenerator::for_q(q, g)?;
                out.push(reduction_record(
                    EntropyParams::generalized(h, -1.0, 1.0 - a, a)?,
                    fam(EntropyParams::sharma_mittal(q, a, g)?),
                    tol,
                    "generalized-to-sm",
                    cfg,
                ));
            }
        }
    }
    for sign in [-1.0, 1.0] {
        let x = 1.0 + sign * LIMIT_OFFSET;
        out.push(reduction_record(
            EntropyParams::renyi(x)?,
            fam(EntropyParams::shannon(-1.0)?),
            lim,
            "renyi-limit",
            cfg,
        ));
        for &a in &cfg.grid.alphas {
            out.push(reduction_record(
                EntropyParams::sharma_mittal(x, a, (1.0 - x).exp2() - 1.0)?,
                fam(EntropyParams::renyi(a)?),
                lim,
                "sm-q-limit",
                cfg,
            ));
        }
        for &q in &cfg.grid.qs {
            let g = (1.0 - q).exp2() - 1.0;
            out.push(reduction_record(
                EntropyParams::sharma_mittal(q, x, g)?,
                fam(EntropyParams::gaussian(q, g)?),
                lim,
                "sm-alpha-limit",
                cfg,
            ));
        }
    }
    Ok(out)
}

/// Generator `h` and shift `y` of the mean-gap demonstration.
pub const MEAN_GAP_H: PseudoAddGenerator = PseudoAddGenerator::GammaExp {
    lambda: -1.0,
    gamma: -0.5,
};
pub const MEAN_GAP_SHIFT: f64 = 1.0;

/// Compares the `h`-scale means generated by `f(x) = 2^{λx} − 1` and by its
/// reflected shift `f_y(x) = f(−x − y)`.
///
/// Weights are α-escorts of Dirichlet draws of dimension 2 to 6; values are
/// `h(u)` with `u` uniform in `[0, 10]`. For `λ ≠ 0` the record passes when
/// some draw separates the means by more than `1e-3`; for `λ = 0` it passes
/// when every draw agrees within `1e-10`.
pub fn mean_gap_demo(lambda: f64, alpha: f64, cfg: &TrialConfig) -> Result<CheckRecord> {
    mean_gap_demo_with(lambda, alpha, MEAN_GAP_H, MEAN_GAP_SHIFT, cfg)
}

pub fn mean_gap_demo_with(
    lambda: f64,
    alpha: f64,
    h: PseudoAddGenerator,
    shift: f64,
    cfg: &TrialConfig,
) -> Result<CheckRecord> {
    cfg.validate()?;
    h.validate()?;
    MeanGenerator::exponential_order(lambda)?.shifted(shift)?;
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("escort order must be positive, got {alpha}"));
    }
    let (res, (weights, values)) = worst(
        cfg.trials,
        |i| {
            let mut rng = trial_rng(cfg.seed, stream_id("mean-gap"), i as u64);
            let n = dim_in(&mut rng, 2, 6);
            let w = escort(&dirichlet_uniform(&mut rng, n), alpha).expect("validated order");
            let v: Vec<f64> = (0..n)
                .map(|_| h.eval(rng.random_range(0.0..=10.0)).unwrap_or(f64::NAN))
                .collect();
            (w, v)
        },
        |(w, v)| score(mean_gap_residual(w, v, lambda, shift, &h)),
    );
    let (tol, expect) = if lambda == 0.0 {
        (MEAN_AGREEMENT_TOLERANCE, Expectation::Within)
    } else {
        (MEAN_GAP_THRESHOLD, Expectation::Exceeds)
    };
    Ok(record(
        CheckKind::MeanGap,
        "mean-gap".into(),
        System::Gsk,
        None,
        cfg.trials,
        tol,
        expect,
        res,
        Witness::MeanGap {
            weights: weights.into_vec(),
            values,
            lambda,
            shift,
            h,
        },
    ))
}
