//! Seeded, replayable verification of the axiom systems.
//!
//! Each check draws its inputs from per-trial generators (see
//! [`crate::sampling`]), keeps the worst residual together with the inputs
//! that produced it, and records whether the residual meets the declared
//! tolerance. Trials run in parallel; the max-reduction breaks ties by trial
//! index, so the report does not depend on scheduling.

mod checks;
mod report;

use serde::{Deserialize, Serialize};

pub use checks::{
    check_additivity, check_composition, check_continuity, check_expandability,
    check_maximality, check_normalization, check_power_law, check_reductions, mean_gap_demo,
    mean_gap_demo_with, replay, rule_for,
};
pub use report::{
    AxiomReport, CheckKind, CheckRecord, Expectation, GaussianProduct, Reference, Witness,
    REPORT_VERSION,
};

use crate::distributions::ProbDist;
use crate::entropies::{shannon_bits, CompositionRule, EntropyParams, Family, System};
use crate::error::{domain, Result};
use crate::generators::PseudoAddGenerator;

/// Tolerance for algebraic identities (composition, additivity, power law).
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-9;
/// Tolerance for identities that hold term by term (expandability, maximality, normalization).
pub const EXACT_TOLERANCE: f64 = 1e-12;
/// Tolerance for closed-form reductions between families.
pub const REDUCTION_TOLERANCE: f64 = 1e-10;
/// Tolerance for limits taken at distance 1e-7 from the branch point.
pub const LIMIT_TOLERANCE: f64 = 1e-5;
/// Offset from the branch point used by limit checks.
pub const LIMIT_OFFSET: f64 = 1e-7;
/// Minimum gap counted as a disagreement between two quasi-linear means.
pub const MEAN_GAP_THRESHOLD: f64 = 1e-3;
/// Tolerance for agreement of means generated by affine generators.
pub const MEAN_AGREEMENT_TOLERANCE: f64 = 1e-10;

/// Functionals that violate specific axioms, used to show the checks can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Broken {
    /// `Σ p²`: largest at the vertices, smallest at the uniform distribution.
    SumOfSquares,
    /// Shannon entropy plus `1/n`: depends on the number of outcomes.
    SizePenalty,
    /// Shannon entropy plus the lowest mantissa bit of `p_1`: discontinuous everywhere.
    MantissaParity,
}

impl Broken {
    pub const ALL: [Broken; 3] = [Broken::SumOfSquares, Broken::SizePenalty, Broken::MantissaParity];

    pub fn as_str(&self) -> &'static str {
        match self {
            Broken::SumOfSquares => "sum-of-squares",
            Broken::SizePenalty => "size-penalty",
            Broken::MantissaParity => "mantissa-parity",
        }
    }

    pub fn parse(s: &str) -> Option<Broken> {
        Broken::ALL.into_iter().find(|b| b.as_str() == s)
    }

    fn value(&self, p: &ProbDist) -> f64 {
        match self {
            Broken::SumOfSquares => p.iter().map(|x| x * x).sum(),
            Broken::SizePenalty => shannon_bits(p.as_slice()) + 1.0 / p.len() as f64,
            Broken::MantissaParity => {
                shannon_bits(p.as_slice()) + (p.as_slice()[0].to_bits() & 1) as f64
            }
        }
    }
}

/// A functional under test: an entropy family or an injected broken functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Subject {
    Family(EntropyParams),
    Broken { broken: Broken },
}

impl From<EntropyParams> for Subject {
    fn from(p: EntropyParams) -> Self {
        Subject::Family(p)
    }
}

impl From<Broken> for Subject {
    fn from(b: Broken) -> Self {
        Subject::Broken { broken: b }
    }
}

impl Subject {
    pub fn value(&self, p: &ProbDist) -> Result<f64> {
        match self {
            Subject::Family(e) => e.value(p),
            Subject::Broken { broken } => Ok(broken.value(p)),
        }
    }

    /// The subject's own composition rule; broken functionals use SK.
    pub fn rule(&self) -> CompositionRule {
        match self {
            Subject::Family(e) => e.composition_rule(),
            Subject::Broken { .. } => CompositionRule::sk(),
        }
    }

    pub fn generator(&self) -> PseudoAddGenerator {
        self.rule().h
    }

    pub fn is_broken(&self) -> bool {
        matches!(self, Subject::Broken { .. })
    }

    /// Compact label with parameters, e.g. `renyi(alpha=2)`.
    pub fn label(&self) -> String {
        match self {
            Subject::Broken { broken } => format!("broken:{}", broken.as_str()),
            Subject::Family(e) => {
                let args = match *e.family() {
                    Family::Shannon { tau } => format!("tau={tau}"),
                    Family::Nath { tau, lambda, alpha } => {
                        format!("tau={tau},lambda={lambda},alpha={alpha}")
                    }
                    Family::Renyi { alpha } => format!("alpha={alpha}"),
                    Family::Tsallis { alpha, gamma, tau } => {
                        if gamma == 0.0 {
                            format!("alpha={alpha},gamma=0,tau={tau}")
                        } else {
                            format!("alpha={alpha},gamma={gamma}")
                        }
                    }
                    Family::SharmaMittal { q, alpha: 1.0, gamma } => {
                        format!("q={q},gamma={gamma}")
                    }
                    Family::SharmaMittal { q, alpha, gamma } => {
                        format!("q={q},alpha={alpha},gamma={gamma}")
                    }
                    Family::Generalized { h, lambda, alpha, .. } => match h {
                        PseudoAddGenerator::Linear { a } => {
                            format!("h=lin({a}),lambda={lambda},alpha={alpha}")
                        }
                        PseudoAddGenerator::GammaExp { lambda: l, gamma } => {
                            format!("h=exp({l},{gamma}),lambda={lambda},alpha={alpha}")
                        }
                    },
                };
                format!("{}({args})", e.name())
            }
        }
    }

    /// Target `h(1)` of the normalization axiom, for normalized Rényi-type
    /// subjects (`τ = −1`, `λ = 1 − α`). Broken functionals are held to `1`.
    pub fn normalization_target(&self) -> Option<f64> {
        let e = match self {
            Subject::Broken { .. } => return Some(1.0),
            Subject::Family(e) => e,
        };
        let renyi_type = match *e.family() {
            Family::Shannon { tau } => tau == -1.0,
            Family::Renyi { .. } | Family::SharmaMittal { .. } => true,
            Family::Nath { tau, lambda, alpha } | Family::Generalized { tau, lambda, alpha, .. } => {
                if lambda == 0.0 {
                    tau == -1.0
                } else {
                    lambda == 1.0 - alpha
                }
            }
            Family::Tsallis { gamma, tau, .. } => gamma != 0.0 || tau == -1.0,
        };
        if renyi_type {
            e.generator().eval(1.0).ok()
        } else {
            None
        }
    }
}

/// Parameter grid the suite sweeps.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub alphas: Vec<f64>,
    pub qs: Vec<f64>,
    pub taus: Vec<f64>,
}

impl Default for ParamGrid {
    fn default() -> Self {
        ParamGrid {
            alphas: vec![0.25, 0.5, 2.0, 4.0],
            qs: vec![0.5, 2.0],
            taus: vec![-1.0, -2.0],
        }
    }
}

/// Named γ conventions for a parameter `x` (α for Tsallis, q for the
/// two-parameter family): `1 − x` and `2^{1−x} − 1`.
fn gamma_conventions(x: f64) -> [f64; 2] {
    [1.0 - x, (1.0 - x).exp2() - 1.0]
}

impl ParamGrid {
    /// Every valid family/parameter combination of the grid, in a fixed order.
    pub fn subjects(&self) -> Vec<EntropyParams> {
        let mut out = Vec::new();
        let mut push = |r: Result<EntropyParams>| {
            if let Ok(e) = r {
                if !out.contains(&e) {
                    out.push(e);
                }
            }
        };
        for &tau in &self.taus {
            push(EntropyParams::shannon(tau));
        }
        for &a in &self.alphas {
            push(EntropyParams::renyi(a));
        }
        for &tau in &self.taus {
            push(EntropyParams::nath(tau, 0.0, 1.0));
        }
        for &a in &self.alphas {
            for lambda in [1.0 - a, 0.5 * (1.0 - a)] {
                push(EntropyParams::nath(-1.0, lambda, a));
            }
        }
        for &a in &self.alphas {
            for gamma in gamma_conventions(a) {
                push(EntropyParams::tsallis(a, gamma, -1.0));
            }
        }
        for &q in &self.qs {
            for gamma in gamma_conventions(q) {
                for &a in &self.alphas {
                    push(EntropyParams::sharma_mittal(q, a, gamma));
                }
                push(EntropyParams::gaussian(q, gamma));
            }
        }
        let hs = [
            PseudoAddGenerator::Linear { a: 2.0 },
            PseudoAddGenerator::GammaExp { lambda: 0.5, gamma: 1.0 },
            PseudoAddGenerator::GammaExp { lambda: -1.0, gamma: -0.5 },
        ];
        for h in hs {
            for &a in &self.alphas {
                push(EntropyParams::generalized(h, -1.0, 1.0 - a, a));
            }
        }
        out
    }
}

/// Settings shared by every check of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub seed: u64,
    /// Random joints or pairs per composition/additivity/continuity check.
    pub trials: usize,
    /// Random distributions per dimension for maximality and expandability.
    pub simplex_trials: usize,
    /// Inclusive range of row/column counts of random joints.
    pub joint_dims: (usize, usize),
    /// Inclusive range of dimensions for single-distribution checks.
    pub simplex_dims: (usize, usize),
    /// Tolerance for composition, additivity and power-law identities.
    pub tolerance: f64,
    pub exact_tolerance: f64,
    pub reduction_tolerance: f64,
    pub limit_tolerance: f64,
    /// Bound on `|H(P+δ) − H(P)| / ‖δ‖₁` at interior points.
    pub continuity_bound: f64,
    /// `‖δ‖₁` of continuity perturbations.
    pub continuity_step: f64,
    pub r_max: usize,
    pub m_max: usize,
    pub grid: ParamGrid,
    pub inject: Vec<Broken>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 42,
            trials: 1000,
            simplex_trials: 10_000,
            joint_dims: (2, 6),
            simplex_dims: (2, 10),
            tolerance: ALGEBRAIC_TOLERANCE,
            exact_tolerance: EXACT_TOLERANCE,
            reduction_tolerance: REDUCTION_TOLERANCE,
            limit_tolerance: LIMIT_TOLERANCE,
            continuity_bound: 1e4,
            continuity_step: 1e-6,
            r_max: 5,
            m_max: 5,
            grid: ParamGrid::default(),
            inject: Vec::new(),
        }
    }
}

impl TrialConfig {
    pub fn with_seed(seed: u64) -> Self {
        TrialConfig {
            seed,
            ..TrialConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.simplex_trials == 0 {
            return domain("trial counts must be at least 1");
        }
        let tols = [
            self.tolerance,
            self.exact_tolerance,
            self.reduction_tolerance,
            self.limit_tolerance,
            self.continuity_bound,
            self.continuity_step,
        ];
        if tols.iter().any(|t| !(*t > 0.0)) {
            return domain("tolerances must be positive");
        }
        for (lo, hi) in [self.joint_dims, self.simplex_dims] {
            if lo < 1 || lo > hi {
                return domain(format!("invalid dimension range {lo}..={hi}"));
            }
        }
        if self.r_max < 2 || self.m_max < 2 {
            return domain("power-law ranges need r_max, m_max >= 2");
        }
        Ok(())
    }
}

/// All checks that apply to one subject under `system`.
pub fn run_subject(subject: &Subject, system: System, cfg: &TrialConfig) -> Result<Vec<CheckRecord>> {
    cfg.validate()?;
    rule_for(system, subject)?;
    let mut out = vec![
        check_continuity(subject, cfg),
        check_maximality(subject, cfg),
        check_expandability(subject, cfg),
        check_composition(system, subject, cfg)?,
        check_additivity(system, subject, cfg)?,
    ];
    out.extend(check_power_law(subject, cfg.r_max, cfg.m_max, cfg.tolerance)?);
    if let Some(rec) = check_normalization(system, subject, cfg.exact_tolerance) {
        out.push(rec);
    }
    Ok(out)
}

/// The λ values of the mean-gap demonstration, with the escort order used for each.
pub const MEAN_GAP_LAMBDAS: [(f64, f64); 5] =
    [(-1.0, 2.0), (-0.5, 2.0), (0.0, 1.0), (0.5, 2.0), (1.0, 2.0)];

/// Every check for every grid subject, the injected functionals, the
/// reduction lattice and the mean-gap demonstration.
pub fn run_suite(cfg: &TrialConfig) -> Result<AxiomReport> {
    cfg.validate()?;
    let mut checks = Vec::new();
    for e in cfg.grid.subjects() {
        let subject = Subject::from(e);
        let system = subject.rule().system;
        checks.extend(run_subject(&subject, system, cfg)?);
    }
    for b in &cfg.inject {
        checks.extend(run_subject(&Subject::from(*b), System::Sk, cfg)?);
    }
    checks.extend(check_reductions(cfg)?);
    for (lambda, alpha) in MEAN_GAP_LAMBDAS {
        checks.push(mean_gap_demo(lambda, alpha, cfg)?);
    }
    Ok(AxiomReport::new("all", cfg.seed, cfg.trials, checks))
}
