//! Closed-form entropy families and their conditional entropies.
//!
//! All logarithms are base 2. Every family is a (possibly nonlinear)
//! transform of the Nath entropy
//!
//! ```text
//! N(P) = τ Σ p_k log₂ p_k          (λ = 0, α = 1)
//! N(P) = (1/λ) log₂ Σ p_k^α        (λ ≠ 0, λ(1 − α) > 0)
//! ```
//!
//! Rényi is `λ = 1 − α, τ = −1`; Havrda–Charvát–Tsallis is
//! `(2^{λN} − 1)/γ`; the two-parameter `(q, α)` family applies
//! `(2^{(1−q)x} − 1)/γ` to Rényi.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::distributions::{escort, JointDist, ProbDist};
use crate::error::{domain, finite, Error, Result};
use crate::generators::{induced_add, kn_mean, MeanGenerator, PseudoAddGenerator};

/// Half-width of the neighbourhood of `α = 1` (or `q = 1`) in which the
/// limit branch is used instead of the general formula.
pub const BRANCH_EPS: f64 = 1e-9;

/// Width around `α = 1` where power sums are accumulated as `Σ p(p^{α−1} − 1)`.
const NEAR_ONE: f64 = 0.25;

fn near_one(x: f64) -> bool {
    (x - 1.0).abs() < BRANCH_EPS
}

/// `−Σ p log₂ p` with `0 log 0 = 0`.
pub(crate) fn shannon_bits(p: &[f64]) -> f64 {
    -p.iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>()
}

/// `Σ p^α − 1`, accurate for α near 1.
fn power_sum_minus_one(p: &[f64], alpha: f64) -> f64 {
    if (alpha - 1.0).abs() <= NEAR_ONE {
        let e = alpha - 1.0;
        p.iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| x * (e * x.ln()).exp_m1())
            .sum()
    } else {
        (log2_power_sum(p, alpha) * LN_2).exp_m1()
    }
}

/// `log₂ Σ p^α` over the support of `p`.
///
/// Away from α = 1 the sum is taken relative to the largest entry
/// (`α log₂ p_max + log₂ Σ (p/p_max)^α`), so peaked inputs with large α neither overflow nor
/// underflow.
pub(crate) fn log2_power_sum(p: &[f64], alpha: f64) -> f64 {
    if (alpha - 1.0).abs() <= NEAR_ONE {
        return power_sum_minus_one(p, alpha).ln_1p() / LN_2;
    }
    let p_max = p.iter().copied().fold(0.0, f64::max);
    let s: f64 = p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| (x / p_max).powf(alpha))
        .sum();
    alpha * p_max.log2() + s.log2()
}

fn check_tau(tau: f64) -> Result<()> {
    if tau < 0.0 && tau.is_finite() {
        Ok(())
    } else {
        domain(format!("tau must be negative, got {tau}"))
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        domain(format!("alpha must be positive, got {alpha}"))
    }
}

fn check_nath(tau: f64, lambda: f64, alpha: f64) -> Result<()> {
    check_tau(tau)?;
    check_alpha(alpha)?;
    if !lambda.is_finite() {
        return domain(format!("lambda must be finite, got {lambda}"));
    }
    if lambda == 0.0 && alpha != 1.0 {
        return domain(format!("lambda = 0 requires alpha = 1, got alpha = {alpha}"));
    }
    if lambda != 0.0 && !(lambda * (1.0 - alpha) > 0.0) {
        return domain(format!(
            "lambda*(1 - alpha) must be positive, got lambda={lambda}, alpha={alpha}"
        ));
    }
    Ok(())
}

fn check_tsallis(alpha: f64, gamma: f64, tau: f64) -> Result<()> {
    check_alpha(alpha)?;
    if !gamma.is_finite() {
        return domain(format!("gamma must be finite, got {gamma}"));
    }
    if gamma == 0.0 {
        check_tau(tau)
    } else if gamma * (1.0 - alpha) > 0.0 {
        Ok(())
    } else {
        domain(format!(
            "gamma*(1 - alpha) must be positive, got gamma={gamma}, alpha={alpha}"
        ))
    }
}

fn check_q_gamma(q: f64, gamma: f64) -> Result<()> {
    if !(q.is_finite() && gamma.is_finite()) {
        return domain("q and gamma must be finite");
    }
    if q != 1.0 && !(gamma * (1.0 - q) > 0.0) {
        return domain(format!(
            "gamma*(1 - q) must be positive, got gamma={gamma}, q={q}"
        ));
    }
    Ok(())
}

// Kernels below assume validated parameters.

fn shannon_kernel(p: &[f64], tau: f64) -> f64 {
    -tau * shannon_bits(p)
}

fn renyi_kernel(p: &[f64], alpha: f64) -> f64 {
    if near_one(alpha) {
        shannon_bits(p)
    } else {
        log2_power_sum(p, alpha) / (1.0 - alpha)
    }
}

fn nath_kernel(p: &[f64], tau: f64, lambda: f64, alpha: f64) -> f64 {
    if lambda == 0.0 {
        shannon_kernel(p, tau)
    } else if near_one(alpha) {
        (1.0 - alpha) / lambda * shannon_bits(p)
    } else {
        log2_power_sum(p, alpha) / lambda
    }
}

fn tsallis_kernel(p: &[f64], alpha: f64, gamma: f64, tau: f64) -> f64 {
    if gamma == 0.0 {
        shannon_kernel(p, tau)
    } else {
        power_sum_minus_one(p, alpha) / gamma
    }
}

fn gaussian_kernel(p: &[f64], q: f64, gamma: f64) -> f64 {
    ((1.0 - q) * shannon_bits(p) * LN_2).exp_m1() / gamma
}

fn sharma_mittal_kernel(p: &[f64], q: f64, alpha: f64, gamma: f64) -> f64 {
    match (near_one(q), near_one(alpha)) {
        (true, true) => shannon_bits(p),
        (false, true) => gaussian_kernel(p, q, gamma),
        (true, false) => renyi_kernel(p, alpha),
        (false, false) => {
            let exponent = (q - 1.0) / (alpha - 1.0);
            (exponent * log2_power_sum(p, alpha) * LN_2).exp_m1() / gamma
        }
    }
}

/// Shannon entropy scaled by `−τ`: `τ Σ p_k log₂ p_k`, `τ < 0`.
pub fn shannon(p: &ProbDist, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    Ok(shannon_kernel(p.as_slice(), tau))
}

/// Nath entropy with parameters `(τ, λ, α)`.
pub fn nath(p: &ProbDist, tau: f64, lambda: f64, alpha: f64) -> Result<f64> {
    check_nath(tau, lambda, alpha)?;
    Ok(nath_kernel(p.as_slice(), tau, lambda, alpha))
}

/// Rényi entropy of order `α` in bits.
pub fn renyi(p: &ProbDist, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(renyi_kernel(p.as_slice(), alpha))
}

/// Havrda–Charvát–Tsallis entropy `(Σ p^α − 1)/γ`; `γ = 0` selects the
/// Shannon branch scaled by `τ`.
pub fn tsallis(p: &ProbDist, alpha: f64, gamma: f64, tau: f64) -> Result<f64> {
    check_tsallis(alpha, gamma, tau)?;
    Ok(tsallis_kernel(p.as_slice(), alpha, gamma, tau))
}

/// Two-parameter entropy `(1/γ)([Σ p^α]^{(q−1)/(α−1)} − 1)` with its
/// Shannon, Gaussian and Rényi limit branches.
pub fn sharma_mittal(p: &ProbDist, q: f64, alpha: f64, gamma: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_q_gamma(q, gamma)?;
    Ok(sharma_mittal_kernel(p.as_slice(), q, alpha, gamma))
}

/// Gaussian entropy `(1/γ)(Π p_k^{(q−1)p_k} − 1)`, `q ≠ 1`.
pub fn gaussian_entropy(p: &ProbDist, q: f64, gamma: f64) -> Result<f64> {
    if q == 1.0 {
        return domain("the Gaussian entropy requires q != 1");
    }
    check_q_gamma(q, gamma)?;
    Ok(gaussian_kernel(p.as_slice(), q, gamma))
}

/// `h(N(P))` for a pseudo-addition generator `h` and Nath parameters.
pub fn generalized(
    p: &ProbDist,
    h: &PseudoAddGenerator,
    tau: f64,
    lambda: f64,
    alpha: f64,
) -> Result<f64> {
    h.validate()?;
    check_nath(tau, lambda, alpha)?;
    h.eval(nath_kernel(p.as_slice(), tau, lambda, alpha))
}

/// Escort-weighted entropy generated by the additivity class of means:
///
/// ```text
/// λ = 0:  τ Σ_k p_k^{(α)} log₂ p_k
/// λ ≠ 0:  −(1/λ) log₂( Σ p_k^{α−τλ} / Σ p_k^α )
/// ```
pub fn biparametric(p: &ProbDist, tau: f64, lambda: f64, alpha: f64) -> Result<f64> {
    check_tau(tau)?;
    check_alpha(alpha)?;
    if !lambda.is_finite() {
        return domain(format!("lambda must be finite, got {lambda}"));
    }
    let shifted = alpha - tau * lambda;
    if !(shifted > 0.0) {
        return domain(format!("alpha - tau*lambda must be positive, got {shifted}"));
    }
    let v = if lambda == 0.0 {
        let w = escort(p, alpha)?;
        tau * w
            .iter()
            .zip(p.iter())
            .filter(|(wk, _)| *wk > 0.0)
            .map(|(wk, pk)| wk * pk.log2())
            .sum::<f64>()
    } else {
        let ps = p.as_slice();
        -(log2_power_sum(ps, shifted) - log2_power_sum(ps, alpha)) / lambda
    };
    finite(v, "biparametric entropy")
}

/// An entropy family together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Family {
    Shannon { tau: f64 },
    Nath { tau: f64, lambda: f64, alpha: f64 },
    Renyi { alpha: f64 },
    Tsallis { alpha: f64, gamma: f64, tau: f64 },
    SharmaMittal { q: f64, alpha: f64, gamma: f64 },
    Generalized { h: PseudoAddGenerator, tau: f64, lambda: f64, alpha: f64 },
}

/// Named γ conventions, reported as metadata only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `γ = 1 − α`
    Tsallis,
    /// `γ = 2^{1−α} − 1`
    HavrdaCharvat,
    /// `γ = 2^{1−q} − 1`
    SharmaMittal,
    /// `γ = 1 − q`
    FrankDaffertshofer,
}

/// A [`Family`] whose parameters satisfy the family's sign constraints.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct EntropyParams(Family);

impl TryFrom<Family> for EntropyParams {
    type Error = Error;

    fn try_from(f: Family) -> Result<Self> {
        EntropyParams::new(f)
    }
}

impl From<EntropyParams> for Family {
    fn from(p: EntropyParams) -> Family {
        p.0
    }
}

impl EntropyParams {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Shannon { tau } => check_tau(tau)?,
            Family::Nath { tau, lambda, alpha } => check_nath(tau, lambda, alpha)?,
            Family::Renyi { alpha } => check_alpha(alpha)?,
            Family::Tsallis { alpha, gamma, tau } => check_tsallis(alpha, gamma, tau)?,
            Family::SharmaMittal { q, alpha, gamma } => {
                check_alpha(alpha)?;
                check_q_gamma(q, gamma)?;
            }
            Family::Generalized { h, tau, lambda, alpha } => {
                h.validate()?;
                check_nath(tau, lambda, alpha)?;
            }
        }
        Ok(EntropyParams(family))
    }

    pub fn shannon(tau: f64) -> Result<Self> {
        Self::new(Family::Shannon { tau })
    }

    pub fn nath(tau: f64, lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(Family::Nath { tau, lambda, alpha })
    }

    pub fn renyi(alpha: f64) -> Result<Self> {
        Self::new(Family::Renyi { alpha })
    }

    pub fn tsallis(alpha: f64, gamma: f64, tau: f64) -> Result<Self> {
        Self::new(Family::Tsallis { alpha, gamma, tau })
    }

    pub fn sharma_mittal(q: f64, alpha: f64, gamma: f64) -> Result<Self> {
        Self::new(Family::SharmaMittal { q, alpha, gamma })
    }

    /// The `α = 1` member of the two-parameter family.
    pub fn gaussian(q: f64, gamma: f64) -> Result<Self> {
        if q == 1.0 {
            return domain("the Gaussian entropy requires q != 1");
        }
        Self::sharma_mittal(q, 1.0, gamma)
    }

    pub fn generalized(h: PseudoAddGenerator, tau: f64, lambda: f64, alpha: f64) -> Result<Self> {
        Self::new(Family::Generalized { h, tau, lambda, alpha })
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    /// Short family name used in reports and on the command line.
    pub fn name(&self) -> &'static str {
        match self.0 {
            Family::Shannon { .. } => "shannon",
            Family::Nath { .. } => "nath",
            Family::Renyi { .. } => "renyi",
            Family::Tsallis { .. } => "tsallis",
            Family::SharmaMittal { alpha: 1.0, .. } => "gaussian",
            Family::SharmaMittal { .. } => "sharma-mittal",
            Family::Generalized { .. } => "generalized",
        }
    }

    /// Which named γ convention the parameters follow, if any.
    pub fn convention(&self) -> Option<Convention> {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
        match self.0 {
            Family::Tsallis { alpha, gamma, .. } if gamma != 0.0 => {
                if close(gamma, 1.0 - alpha) {
                    Some(Convention::Tsallis)
                } else if close(gamma, (1.0 - alpha).exp2() - 1.0) {
                    Some(Convention::HavrdaCharvat)
                } else {
                    None
                }
            }
            Family::SharmaMittal { q, gamma, .. } if q != 1.0 => {
                if close(gamma, (1.0 - q).exp2() - 1.0) {
                    Some(Convention::SharmaMittal)
                } else if close(gamma, 1.0 - q) {
                    Some(Convention::FrankDaffertshofer)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Entropy of `p`.
    pub fn value(&self, p: &ProbDist) -> Result<f64> {
        let ps = p.as_slice();
        let v = match self.0 {
            Family::Shannon { tau } => shannon_kernel(ps, tau),
            Family::Nath { tau, lambda, alpha } => nath_kernel(ps, tau, lambda, alpha),
            Family::Renyi { alpha } => renyi_kernel(ps, alpha),
            Family::Tsallis { alpha, gamma, tau } => tsallis_kernel(ps, alpha, gamma, tau),
            Family::SharmaMittal { q, alpha, gamma } => sharma_mittal_kernel(ps, q, alpha, gamma),
            Family::Generalized { h, tau, lambda, alpha } => {
                return h.eval(nath_kernel(ps, tau, lambda, alpha))
            }
        };
        finite(v, "entropy")
    }

    /// The composition rule under which this family satisfies its fourth axiom.
    pub fn composition_rule(&self) -> CompositionRule {
        let order_mean = |alpha: f64, lambda: f64| {
            if alpha == 1.0 {
                MeanGenerator::ARITHMETIC
            } else {
                MeanGenerator::exponential_order(lambda).expect("nonzero order")
            }
        };
        match self.0 {
            Family::Shannon { .. } => CompositionRule::sk(),
            Family::Tsallis { gamma: 0.0, .. } => CompositionRule::sk(),
            Family::Nath { lambda, alpha, .. } => CompositionRule {
                system: System::Nsk,
                escort_order: alpha,
                mean: order_mean(alpha, lambda),
                h: PseudoAddGenerator::IDENTITY,
            },
            Family::Renyi { alpha } => CompositionRule {
                system: System::Nsk,
                escort_order: alpha,
                mean: order_mean(alpha, 1.0 - alpha),
                h: PseudoAddGenerator::IDENTITY,
            },
            Family::Tsallis { alpha, gamma, .. } => CompositionRule {
                system: System::Ask,
                escort_order: alpha,
                mean: MeanGenerator::ARITHMETIC,
                h: PseudoAddGenerator::gamma_exp(1.0 - alpha, gamma).expect("validated"),
            },
            Family::SharmaMittal { q, alpha, gamma } => CompositionRule {
                system: System::Sm,
                escort_order: alpha,
                mean: order_mean(alpha, 1.0 - alpha),
                h: PseudoAddGenerator::for_q(q, gamma).expect("validated"),
            },
            Family::Generalized { h, lambda, alpha, .. } => CompositionRule {
                system: System::Gsk,
                escort_order: alpha,
                mean: order_mean(alpha, lambda),
                h,
            },
        }
    }

    /// The generator `h` with `H = h(N)`; identity for the additive families.
    pub fn generator(&self) -> PseudoAddGenerator {
        self.composition_rule().h
    }
}

/// Axiom systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum System {
    /// Shannon–Khinchin: ordinary sum, linear mean, plain weights.
    #[serde(rename = "SK")]
    Sk,
    /// Quasi-linear escort mean with ordinary sum.
    #[serde(rename = "NSK")]
    Nsk,
    /// Linear escort mean with `⊕_γ`.
    #[serde(rename = "ASK")]
    Ask,
    /// Quasi-linear escort mean with a general pseudo-addition.
    #[serde(rename = "GSK")]
    Gsk,
    /// The generalized system with the γ-exponential generator `1 − q`.
    #[serde(rename = "SM")]
    Sm,
}

impl System {
    pub fn as_str(&self) -> &'static str {
        match self {
            System::Sk => "SK",
            System::Nsk => "NSK",
            System::Ask => "ASK",
            System::Gsk => "GSK",
            System::Sm => "SM",
        }
    }

    pub fn parse(s: &str) -> Option<System> {
        match s.to_ascii_uppercase().as_str() {
            "SK" => Some(System::Sk),
            "NSK" => Some(System::Nsk),
            "ASK" => Some(System::Ask),
            "GSK" => Some(System::Gsk),
            "SM" => Some(System::Sm),
            _ => None,
        }
    }
}

impl std::fmt::Display for System {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How a joint entropy splits into a marginal part and a conditional part.
///
/// * `SK`: `H(Q|P) = Σ p_k H(Q|k)`, combined by `+`.
/// * `NSK`: `H(Q|P) = f⁻¹(Σ p_k^{(α)} f(H(Q|k)))`, combined by `+`.
/// * `ASK`: `H(Q|P) = Σ p_k^{(α)} H(Q|k)`, combined by `⊕_γ`.
/// * `GSK`/`SM`: `H(Q|P) = h(f⁻¹(Σ p_k^{(α)} f(h⁻¹(H(Q|k)))))`, combined by
///   the pseudo-addition induced by `h`. This is the mean generated by
///   `g = f ∘ h⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CompositionRule {
    pub system: System,
    pub escort_order: f64,
    pub mean: MeanGenerator,
    pub h: PseudoAddGenerator,
}

impl CompositionRule {
    pub fn sk() -> Self {
        CompositionRule {
            system: System::Sk,
            escort_order: 1.0,
            mean: MeanGenerator::ARITHMETIC,
            h: PseudoAddGenerator::IDENTITY,
        }
    }

    pub fn nsk(alpha: f64, f: MeanGenerator) -> Result<Self> {
        check_alpha(alpha)?;
        f.validate()?;
        Ok(CompositionRule {
            system: System::Nsk,
            escort_order: alpha,
            mean: f,
            h: PseudoAddGenerator::IDENTITY,
        })
    }

    pub fn ask(alpha: f64, h: PseudoAddGenerator) -> Result<Self> {
        check_alpha(alpha)?;
        h.validate()?;
        Ok(CompositionRule {
            system: System::Ask,
            escort_order: alpha,
            mean: MeanGenerator::ARITHMETIC,
            h,
        })
    }

    pub fn gsk(alpha: f64, f: MeanGenerator, h: PseudoAddGenerator) -> Result<Self> {
        check_alpha(alpha)?;
        f.validate()?;
        h.validate()?;
        Ok(CompositionRule {
            system: System::Gsk,
            escort_order: alpha,
            mean: f,
            h,
        })
    }

    /// Combines a marginal entropy with a conditional one.
    pub fn combine(&self, marginal: f64, conditional: f64) -> Result<f64> {
        match self.system {
            System::Sk | System::Nsk => Ok(marginal + conditional),
            System::Ask => Ok(self.h.combine(marginal, conditional)),
            System::Gsk | System::Sm => induced_add(&self.h, marginal, conditional),
        }
    }
}

/// Conditional entropy `H(Q|P)` of a joint under `rule`, with the
/// per-row entropies `H(Q|k)` computed by `entropy`. Rows without mass are
/// skipped.
pub fn conditional_with<F>(joint: &JointDist, rule: &CompositionRule, mut entropy: F) -> Result<f64>
where
    F: FnMut(&ProbDist) -> Result<f64>,
{
    let d = joint.decompose();
    let mut values = Vec::with_capacity(d.conditionals.len());
    for c in &d.conditionals {
        values.push(match c {
            Some(q) => entropy(q)?,
            None => f64::NAN,
        });
    }
    match rule.system {
        System::Sk => kn_mean(&MeanGenerator::ARITHMETIC, &d.marginal, &values),
        System::Nsk => kn_mean(&rule.mean, &escort(&d.marginal, rule.escort_order)?, &values),
        System::Ask => kn_mean(
            &MeanGenerator::ARITHMETIC,
            &escort(&d.marginal, rule.escort_order)?,
            &values,
        ),
        System::Gsk | System::Sm => {
            let inner = values
                .iter()
                .map(|&v| if v.is_nan() { Ok(v) } else { rule.h.invert(v) })
                .collect::<Result<Vec<_>>>()?;
            let m = kn_mean(&rule.mean, &escort(&d.marginal, rule.escort_order)?, &inner)?;
            rule.h.eval(m)
        }
    }
}

/// Conditional entropy of `joint` for `params` under `rule`.
pub fn conditional(joint: &JointDist, params: &EntropyParams, rule: &CompositionRule) -> Result<f64> {
    conditional_with(joint, rule, |q| params.value(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{direct_product, expand_zero, make_dist, uniform, Normalization};

    fn dist(v: &[f64]) -> ProbDist {
        make_dist(v, Normalization::Strict).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    const LOG2_8_3: f64 = 1.415_037_499_278_843_8;

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&dist(&[0.5, 0.5]), -1.0).unwrap(), 1.0);
        assert_eq!(shannon(&uniform(4).unwrap(), -1.0).unwrap(), 2.0);
        assert_eq!(shannon(&dist(&[1.0, 0.0]), -1.0).unwrap(), 0.0);
        assert_eq!(shannon(&dist(&[0.5, 0.5]), -2.5).unwrap(), 2.5);
        assert!(shannon(&dist(&[0.5, 0.5]), 0.0).is_err());
        assert!(shannon(&dist(&[0.5, 0.5]), 1.0).is_err());
    }

    #[test]
    fn nath_examples() {
        let v = nath(&dist(&[0.5, 0.5]), -1.0, 2.0, 0.5).unwrap();
        assert!(close(v, 0.25, 1e-15), "{v}");
        for r in [2usize, 3, 7] {
            let v = nath(&uniform(r).unwrap(), -1.0, 1.5, 0.25).unwrap();
            assert!(close(v, 0.75 / 1.5 * (r as f64).log2(), 1e-14));
        }
        let v = nath(&dist(&[0.5, 0.25, 0.25]), -1.0, -1.0, 2.0).unwrap();
        assert!(close(v, LOG2_8_3, 1e-15));
        assert!(close(nath(&dist(&[0.5, 0.5]), -3.0, 0.0, 1.0).unwrap(), 3.0, 1e-15));
    }

    #[test]
    fn nath_constraints() {
        let p = dist(&[0.5, 0.5]);
        assert!(nath(&p, -1.0, 1.0, 2.0).is_err());
        assert!(nath(&p, -1.0, 0.0, 2.0).is_err());
        assert!(nath(&p, 1.0, 1.0, 0.5).is_err());
        assert!(nath(&p, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn renyi_examples() {
        let p = dist(&[0.5, 0.25, 0.25]);
        assert!(close(renyi(&p, 2.0).unwrap(), LOG2_8_3, 1e-15));
        for a in [0.1, 0.5, 1.0, 2.0, 7.0] {
            assert!(close(renyi(&uniform(8).unwrap(), a).unwrap(), 3.0, 1e-14));
        }
        assert!(close(renyi(&p, 1.0).unwrap(), shannon(&p, -1.0).unwrap(), 1e-10));
        assert!(renyi(&p, 0.0).is_err());
        assert!(renyi(&p, -2.0).is_err());
    }

    #[test]
    fn tsallis_examples() {
        let v = tsallis(&dist(&[0.5, 0.25, 0.25]), 2.0, -1.0, -1.0).unwrap();
        assert!(close(v, 0.625, 1e-15));
        assert!(close(tsallis(&dist(&[0.5, 0.5]), 2.0, -1.0, -1.0).unwrap(), 0.5, 1e-15));
        let p = dist(&[0.1, 0.2, 0.7]);
        assert_eq!(tsallis(&p, 2.0, 0.0, -1.0).unwrap(), shannon(&p, -1.0).unwrap());
        assert!(tsallis(&p, 2.0, 0.5, -1.0).is_err());
        assert!(tsallis(&p, 2.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn sharma_mittal_examples() {
        let v = sharma_mittal(&dist(&[0.5, 0.5]), 2.0, 2.0, -1.0).unwrap();
        assert!(close(v, 0.5, 1e-15));
        let p = dist(&[0.5, 0.25, 0.25]);
        assert!(close(sharma_mittal(&p, 1.0, 2.0, 123.0).unwrap(), LOG2_8_3, 1e-15));
        assert_eq!(sharma_mittal(&p, 1.0, 1.0, 0.0).unwrap(), shannon(&p, -1.0).unwrap());
        assert!(sharma_mittal(&p, 2.0, 2.0, 1.0).is_err());
        assert!(sharma_mittal(&p, 2.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn gaussian_examples() {
        let v = gaussian_entropy(&dist(&[0.5, 0.5]), 2.0, -0.5).unwrap();
        assert!(close(v, 1.0, 1e-15));
        assert_eq!(gaussian_entropy(&dist(&[1.0, 0.0]), 0.5, 0.25).unwrap(), 0.0);
        let p = dist(&[0.1, 0.2, 0.7]);
        let g = gaussian_entropy(&p, 3.0, -0.75).unwrap();
        assert!(close(g, sharma_mittal(&p, 3.0, 1.0, -0.75).unwrap(), 1e-12));
        assert!(gaussian_entropy(&p, 1.0, 0.5).is_err());
        assert!(gaussian_entropy(&p, 2.0, 0.5).is_err());
    }

    #[test]
    fn generalized_examples() {
        let p = dist(&[0.1, 0.2, 0.7]);
        let lin = PseudoAddGenerator::IDENTITY;
        assert_eq!(
            generalized(&p, &lin, -1.0, -1.0, 2.0).unwrap(),
            nath(&p, -1.0, -1.0, 2.0).unwrap()
        );
        let h = PseudoAddGenerator::gamma_exp(-1.0, -1.0).unwrap();
        let v = generalized(&dist(&[0.5, 0.5]), &h, -1.0, -1.0, 2.0).unwrap();
        assert!(close(v, 0.5, 1e-15));
        assert_eq!(generalized(&dist(&[1.0, 0.0, 0.0]), &h, -1.0, -1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn biparametric_examples() {
        let p = dist(&[0.5, 0.5]);
        assert!(close(biparametric(&p, -1.0, 1.0, 1.0).unwrap(), 1.0, 1e-15));
        let q = dist(&[0.1, 0.6, 0.3]);
        assert!(close(
            biparametric(&q, -2.0, 0.0, 1.0).unwrap(),
            shannon(&q, -2.0).unwrap(),
            1e-15
        ));
        for n in [2usize, 5, 9] {
            let u = uniform(n).unwrap();
            let v = biparametric(&u, -1.5, 0.4, 0.7).unwrap();
            assert!(close(v, 1.5 * (n as f64).log2(), 1e-13));
        }
        assert!(biparametric(&p, -1.0, -2.0, 1.0).is_err());
        assert!(biparametric(&p, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn biparametric_matches_nath_on_the_consistency_line() {
        let p = dist(&[0.15, 0.35, 0.5]);
        let (tau, alpha) = (-2.0, 0.4);
        let lambda = (alpha - 1.0) / tau;
        let b = biparametric(&p, tau, lambda, alpha).unwrap();
        assert!(close(b, nath(&p, tau, lambda, alpha).unwrap(), 1e-13));
    }

    #[test]
    fn biparametric_matches_kn_mean_of_log_probabilities() {
        let p = dist(&[0.15, 0.35, 0.5]);
        let (tau, lambda, alpha) = (-1.5, 0.6, 1.3);
        let g = MeanGenerator::exp(1.0, 2.0, -lambda).unwrap();
        let values: Vec<f64> = p.iter().map(|x| tau * x.log2()).collect();
        let m = kn_mean(&g, &escort(&p, alpha).unwrap(), &values).unwrap();
        assert!(close(biparametric(&p, tau, lambda, alpha).unwrap(), m, 1e-13));
    }

    #[test]
    fn conditional_examples() {
        let j = JointDist::new(&[vec![0.25, 0.25], vec![0.3, 0.2]], Normalization::Strict).unwrap();
        let sh = EntropyParams::shannon(-1.0).unwrap();
        let c = conditional(&j, &sh, &sh.composition_rule()).unwrap();
        assert!(close(c, 0.985_475_297_227_334_5, 1e-12), "{c}");

        let r = EntropyParams::renyi(2.0).unwrap();
        let c = conditional(&j, &r, &r.composition_rule()).unwrap();
        assert!(close(c, -(0.51f64).log2(), 1e-12), "{c}");
    }

    #[test]
    fn conditional_on_independent_joint_is_entropy_of_second_factor() {
        let p = dist(&[0.2, 0.8]);
        let q = dist(&[0.1, 0.3, 0.6]);
        let j = direct_product(&p, &q);
        for e in [
            EntropyParams::shannon(-1.0).unwrap(),
            EntropyParams::renyi(0.5).unwrap(),
            EntropyParams::nath(-1.0, 0.5, 0.25).unwrap(),
            EntropyParams::tsallis(2.0, -1.0, -1.0).unwrap(),
            EntropyParams::sharma_mittal(0.5, 3.0, 0.5).unwrap(),
        ] {
            let c = conditional(&j, &e, &e.composition_rule()).unwrap();
            assert!(close(c, e.value(&q).unwrap(), 1e-10), "{e:?}");
        }
    }

    #[test]
    fn conditional_skips_empty_rows() {
        let j = JointDist::new(&[vec![0.5, 0.5], vec![0.0, 0.0]], Normalization::Strict).unwrap();
        let r = EntropyParams::renyi(3.0).unwrap();
        let c = conditional(&j, &r, &r.composition_rule()).unwrap();
        assert!(close(c, 1.0, 1e-15));
    }

    #[test]
    fn params_validation_and_conventions() {
        assert!(EntropyParams::tsallis(2.0, 0.5, -1.0).is_err());
        assert!(EntropyParams::sharma_mittal(2.0, 2.0, 0.5).is_err());
        assert!(EntropyParams::gaussian(1.0, 0.5).is_err());
        let t = EntropyParams::tsallis(2.0, -1.0, -1.0).unwrap();
        assert_eq!(t.convention(), Some(Convention::Tsallis));
        let t = EntropyParams::tsallis(2.0, -0.5, -1.0).unwrap();
        assert_eq!(t.convention(), Some(Convention::HavrdaCharvat));
        let s = EntropyParams::sharma_mittal(2.0, 3.0, -0.5).unwrap();
        assert_eq!(s.convention(), Some(Convention::SharmaMittal));
        let s = EntropyParams::sharma_mittal(2.0, 3.0, -1.0).unwrap();
        assert_eq!(s.convention(), Some(Convention::FrankDaffertshofer));
        assert_eq!(EntropyParams::gaussian(2.0, -1.0).unwrap().name(), "gaussian");
    }

    #[test]
    fn params_serde_validates() {
        let e = EntropyParams::renyi(2.0).unwrap();
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(s, r#"{"family":"renyi","alpha":2.0}"#);
        assert_eq!(serde_json::from_str::<EntropyParams>(&s).unwrap(), e);
        assert!(serde_json::from_str::<EntropyParams>(r#"{"family":"renyi","alpha":-2.0}"#).is_err());
    }

    #[test]
    fn expandable_exactly() {
        let p = dist(&[0.1, 0.2, 0.7]);
        for e in [
            EntropyParams::shannon(-1.0).unwrap(),
            EntropyParams::renyi(0.5).unwrap(),
            EntropyParams::renyi(4.0).unwrap(),
            EntropyParams::tsallis(0.25, 0.75, -1.0).unwrap(),
            EntropyParams::gaussian(2.0, -1.0).unwrap(),
        ] {
            assert_eq!(e.value(&expand_zero(&p)).unwrap(), e.value(&p).unwrap());
        }
    }

    #[test]
    fn extreme_inputs_stay_finite() {
        let p = dist(&[1.0 - 1e-300, 1e-300]);
        for a in [0.01, 0.3, 1.0 + 1e-12, 50.0] {
            assert!(renyi(&p, a).unwrap().is_finite());
        }
        let tiny = make_dist(&[1.0, 5e-324], Normalization::Renormalize).unwrap();
        assert!(tsallis(&tiny, 0.02, 0.98, -1.0).unwrap().is_finite());
    }
}
