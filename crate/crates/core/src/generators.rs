//! Generator functions for pseudo-additions and quasi-linear means.
//!
//! A [`PseudoAddGenerator`] `h` is increasing with `h(0) = 0` and induces the
//! operation `u ⊕ v = h(h⁻¹(u) + h⁻¹(v))`. For the γ-exponential class this is
//! `u + v + γuv`.
//!
//! A [`MeanGenerator`] `g` defines the Kolmogorov–Nagumo mean
//! `g⁻¹(Σ w_k g(x_k))`. Both classes use base-2 exponentials.
//!
//! The `Exp` variant of [`MeanGenerator`] covers two roles:
//!
//! | role                         | form                    | representation                 |
//! |------------------------------|-------------------------|--------------------------------|
//! | conditional-mean `f`, λ = 0  | `c·x + b`               | `Affine { c, b }`              |
//! | conditional-mean `f`, λ ≠ 0  | `(d·2^{λx} − 1)/γ`      | `Exp { d, gamma, lambda }`     |
//! | additivity class `g`, λ = 0  | `−c·x`                  | `Affine { c: −c, b: 0 }`       |
//! | additivity class `g`, λ ≠ 0  | `(2^{−λx} − 1)/γ`       | `Exp { d: 1, gamma, lambda: −λ }` |

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::distributions::ProbDist;
use crate::error::{domain, finite, Error, Result};
use crate::sampling::{dim_in, dirichlet_uniform, trial_rng};

/// `u ⊕_γ v = u + v + γuv`.
///
/// Evaluated as `u + v·(1 + γu)` with `|v| ≥ |u|` and a fused `1 + γu`, which
/// avoids cancellation when `u` sits near the saturation value `−1/γ`.
pub fn gamma_add(u: f64, v: f64, gamma: f64) -> f64 {
    let (u, v) = if u.abs() > v.abs() || (u.abs() == v.abs() && u > v) { (v, u) } else { (u, v) };
    u + v * gamma.mul_add(u, 1.0)
}

/// Generator `h` of a pseudo-addition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", try_from = "RawPseudoAdd")]
pub enum PseudoAddGenerator {
    /// `h(x) = a·x`, `a > 0`.
    Linear { a: f64 },
    /// `h(x) = (2^{λx} − 1)/γ`, `λγ > 0`.
    GammaExp { lambda: f64, gamma: f64 },
}

#[derive(Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
enum RawPseudoAdd {
    Linear { a: f64 },
    GammaExp { lambda: f64, gamma: f64 },
}

impl TryFrom<RawPseudoAdd> for PseudoAddGenerator {
    type Error = Error;

    fn try_from(raw: RawPseudoAdd) -> Result<Self> {
        match raw {
            RawPseudoAdd::Linear { a } => PseudoAddGenerator::linear(a),
            RawPseudoAdd::GammaExp { lambda, gamma } => PseudoAddGenerator::gamma_exp(lambda, gamma),
        }
    }
}

impl PseudoAddGenerator {
    /// The identity generator; induces ordinary addition.
    pub const IDENTITY: PseudoAddGenerator = PseudoAddGenerator::Linear { a: 1.0 };

    pub fn linear(a: f64) -> Result<Self> {
        let h = PseudoAddGenerator::Linear { a };
        h.validate().map(|_| h)
    }

    pub fn gamma_exp(lambda: f64, gamma: f64) -> Result<Self> {
        let h = PseudoAddGenerator::GammaExp { lambda, gamma };
        h.validate().map(|_| h)
    }

    /// The generator turning Rényi entropy into the two-parameter
    /// `(q, γ)` family: identity for `q = 1`, otherwise `(2^{(1−q)x} − 1)/γ`.
    pub fn for_q(q: f64, gamma: f64) -> Result<Self> {
        if q == 1.0 {
            Ok(Self::IDENTITY)
        } else {
            Self::gamma_exp(1.0 - q, gamma)
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            PseudoAddGenerator::Linear { a } if !(a > 0.0 && a.is_finite()) => {
                domain(format!("linear generator needs a > 0, got {a}"))
            }
            PseudoAddGenerator::GammaExp { lambda, gamma }
                if !(lambda.is_finite() && gamma.is_finite() && lambda * gamma > 0.0) =>
            {
                domain(format!(
                    "gamma-exponential generator needs lambda*gamma > 0, got lambda={lambda}, gamma={gamma}"
                ))
            }
            _ => Ok(()),
        }
    }

    /// `h(x)`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.validate()?;
        if !x.is_finite() {
            return domain(format!("generator argument is not finite ({x})"));
        }
        let y = match *self {
            PseudoAddGenerator::Linear { a } => a * x,
            PseudoAddGenerator::GammaExp { lambda, gamma } => (lambda * x * LN_2).exp_m1() / gamma,
        };
        finite(y, "h(x)")
    }

    /// `h⁻¹(y)`.
    pub fn invert(&self, y: f64) -> Result<f64> {
        self.validate()?;
        if !y.is_finite() {
            return domain(format!("generator value is not finite ({y})"));
        }
        match *self {
            PseudoAddGenerator::Linear { a } => finite(y / a, "h^-1(y)"),
            PseudoAddGenerator::GammaExp { lambda, gamma } => {
                let gy = gamma * y;
                if gy <= -1.0 {
                    return domain(format!("{y} is outside the range of h (gamma*y + 1 = {})", gy + 1.0));
                }
                finite(gy.ln_1p() / (lambda * LN_2), "h^-1(y)")
            }
        }
    }

    /// Closed form of the induced operation: `u + v` or `u ⊕_γ v`.
    pub fn combine(&self, u: f64, v: f64) -> f64 {
        match *self {
            PseudoAddGenerator::Linear { .. } => u + v,
            PseudoAddGenerator::GammaExp { gamma, .. } => gamma_add(u, v, gamma),
        }
    }

    /// The supremum of the range of `h` (infinite unless `λ < 0`).
    pub fn range_bound(&self) -> Option<f64> {
        match *self {
            PseudoAddGenerator::GammaExp { lambda, gamma } if lambda < 0.0 => Some(-1.0 / gamma),
            _ => None,
        }
    }
}

/// `h(x)`.
pub fn h_eval(h: &PseudoAddGenerator, x: f64) -> Result<f64> {
    h.eval(x)
}

/// `h⁻¹(y)`.
pub fn h_invert(h: &PseudoAddGenerator, y: f64) -> Result<f64> {
    h.invert(y)
}

/// `h(h⁻¹(u) + h⁻¹(v))`, the pseudo-addition induced by `h`.
///
/// For `GammaExp` the composition is carried out in natural-log coordinates,
/// where the `λ·ln 2` factors of `h` and `h⁻¹` cancel exactly.
pub fn induced_add(h: &PseudoAddGenerator, u: f64, v: f64) -> Result<f64> {
    let (x, y) = (h.invert(u)?, h.invert(v)?);
    match *h {
        PseudoAddGenerator::Linear { .. } => h.eval(x + y),
        PseudoAddGenerator::GammaExp { gamma, .. } => {
            let s = (gamma * u).ln_1p() + (gamma * v).ln_1p();
            finite(s.exp_m1() / gamma, "h(h^-1(u) + h^-1(v))")
        }
    }
}

/// Generator of a quasi-linear (Kolmogorov–Nagumo) mean.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case", try_from = "RawMean")]
pub enum MeanGenerator {
    /// `g(x) = c·x + b`, `c ≠ 0`.
    Affine { c: f64, b: f64 },
    /// `g(x) = (d·2^{λx} − 1)/γ`, with `d, γ, λ ≠ 0`.
    Exp { d: f64, gamma: f64, lambda: f64 },
}

#[derive(Deserialize)]
#[serde(tag = "variant", rename_all = "kebab-case")]
enum RawMean {
    Affine { c: f64, b: f64 },
    Exp { d: f64, gamma: f64, lambda: f64 },
}

impl TryFrom<RawMean> for MeanGenerator {
    type Error = Error;

    fn try_from(raw: RawMean) -> Result<Self> {
        match raw {
            RawMean::Affine { c, b } => MeanGenerator::affine(c, b),
            RawMean::Exp { d, gamma, lambda } => MeanGenerator::exp(d, gamma, lambda),
        }
    }
}

impl MeanGenerator {
    /// `g(x) = x`; generates the weighted arithmetic mean.
    pub const ARITHMETIC: MeanGenerator = MeanGenerator::Affine { c: 1.0, b: 0.0 };

    pub fn affine(c: f64, b: f64) -> Result<Self> {
        let g = MeanGenerator::Affine { c, b };
        g.validate().map(|_| g)
    }

    pub fn exp(d: f64, gamma: f64, lambda: f64) -> Result<Self> {
        let g = MeanGenerator::Exp { d, gamma, lambda };
        g.validate().map(|_| g)
    }

    /// Canonical conditional-mean generator for order `λ`: the identity at
    /// `λ = 0`, else `2^{λx} − 1`.
    pub fn exponential_order(lambda: f64) -> Result<Self> {
        if lambda == 0.0 {
            Ok(Self::ARITHMETIC)
        } else {
            Self::exp(1.0, 1.0, lambda)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MeanGenerator::Affine { c, b } => c != 0.0 && c.is_finite() && b.is_finite(),
            MeanGenerator::Exp { d, gamma, lambda } => [d, gamma, lambda]
                .iter()
                .all(|v| *v != 0.0 && v.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            domain(format!("mean generator is not invertible: {self:?}"))
        }
    }

    /// Exponential order `λ`, zero for affine generators. Two generators of
    /// the same order generate the same mean.
    pub fn order(&self) -> f64 {
        match *self {
            MeanGenerator::Affine { .. } => 0.0,
            MeanGenerator::Exp { lambda, .. } => lambda,
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.validate()?;
        let y = match *self {
            MeanGenerator::Affine { c, b } => c * x + b,
            MeanGenerator::Exp { d, gamma, lambda } => (d * (lambda * x).exp2() - 1.0) / gamma,
        };
        finite(y, "g(x)")
    }

    pub fn invert(&self, y: f64) -> Result<f64> {
        self.validate()?;
        match *self {
            MeanGenerator::Affine { c, b } => finite((y - b) / c, "g^-1(y)"),
            MeanGenerator::Exp { d, gamma, lambda } => {
                let arg = (gamma * y + 1.0) / d;
                if !(arg > 0.0) {
                    return domain(format!("{y} is outside the range of the mean generator"));
                }
                finite(arg.log2() / lambda, "g^-1(y)")
            }
        }
    }

    /// `x ↦ g(−x − y)`, the generator reflected and shifted by `y`.
    pub fn shifted(&self, y: f64) -> Result<Self> {
        match *self {
            MeanGenerator::Affine { c, b } => MeanGenerator::affine(-c, b - c * y),
            MeanGenerator::Exp { d, gamma, lambda } => {
                MeanGenerator::exp(d * (-lambda * y).exp2(), gamma, -lambda)
            }
        }
    }
}

/// Quasi-linear mean `g⁻¹(Σ_k w_k g(x_k))`.
///
/// Entries with zero weight are skipped, so their values may be anything
/// (including NaN for absent conditionals). The exponential case is evaluated
/// relative to the entry maximizing `λx`, which keeps every power in `(0, 1]`.
/// The result is clamped to the hull of the contributing values.
pub fn kn_mean(g: &MeanGenerator, weights: &ProbDist, values: &[f64]) -> Result<f64> {
    g.validate()?;
    if weights.len() != values.len() {
        return domain(format!(
            "{} weights but {} values",
            weights.len(),
            values.len()
        ));
    }
    let terms: Vec<(f64, f64)> = weights
        .iter()
        .zip(values.iter().copied())
        .filter(|(w, _)| *w > 0.0)
        .collect();
    if let Some((_, x)) = terms.iter().find(|(_, x)| !x.is_finite()) {
        return domain(format!("mean argument is not finite ({x})"));
    }
    let (lo, hi) = terms
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, x)| (lo.min(x), hi.max(x)));

    let lambda = g.order();
    let mean = if lambda == 0.0 {
        let pivot = terms[0].1;
        pivot + terms.iter().map(|&(w, x)| w * (x - pivot)).sum::<f64>()
    } else {
        let pivot = if lambda > 0.0 { hi } else { lo };
        let scale = lambda * LN_2;
        let s: f64 = terms
            .iter()
            .map(|&(w, x)| w * (scale * (x - pivot)).exp_m1())
            .sum();
        pivot + s.ln_1p() / scale
    };
    finite(mean.clamp(lo, hi), "quasi-linear mean")
}

/// Outcome of [`means_agree`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanAgreement {
    pub agree: bool,
    pub max_gap: f64,
    pub witness_weights: Vec<f64>,
    pub witness_values: Vec<f64>,
}

/// Compares the means generated by `g1` and `g2` over `trials` random draws:
/// flat-Dirichlet weights of dimension 2 to 6 and values uniform in `[0, 10]`.
pub fn means_agree(
    g1: &MeanGenerator,
    g2: &MeanGenerator,
    trials: usize,
    tol: f64,
    seed: u64,
) -> Result<MeanAgreement> {
    use rand::Rng;

    if trials == 0 {
        return domain("means_agree needs at least one trial");
    }
    let mut best = MeanAgreement {
        agree: true,
        max_gap: f64::NEG_INFINITY,
        witness_weights: Vec::new(),
        witness_values: Vec::new(),
    };
    for t in 0..trials as u64 {
        let mut rng = trial_rng(seed, 0x6d65_616e, t);
        let n = dim_in(&mut rng, 2, 6);
        let w = dirichlet_uniform(&mut rng, n);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=10.0)).collect();
        let gap = (kn_mean(g1, &w, &x)? - kn_mean(g2, &w, &x)?).abs();
        if gap > best.max_gap {
            best.max_gap = gap;
            best.witness_weights = w.into_vec();
            best.witness_values = x;
        }
    }
    best.agree = best.max_gap <= tol;
    Ok(best)
}
