use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::entropies::{EntropyParams, System};
use crate::generators::PseudoAddGenerator;

use super::Subject;

/// Version of the JSON report layout.
pub const REPORT_VERSION: u32 = 1;

/// The property a record verifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Continuity,
    Maximality,
    Expandability,
    Composition,
    Additivity,
    PowerLaw,
    /// The ordinary-sum power law, expected to break for pseudo-additive families.
    PowerLawAdditive,
    Monotonicity,
    Normalization,
    Reduction,
    MeanGap,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::Continuity => "continuity",
            CheckKind::Maximality => "maximality",
            CheckKind::Expandability => "expandability",
            CheckKind::Composition => "composition",
            CheckKind::Additivity => "additivity",
            CheckKind::PowerLaw => "power-law",
            CheckKind::PowerLawAdditive => "power-law-additive",
            CheckKind::Monotonicity => "monotonicity",
            CheckKind::Normalization => "normalization",
            CheckKind::Reduction => "reduction",
            CheckKind::MeanGap => "mean-gap",
        }
    }
}

/// Whether the residual is expected to stay within the tolerance or to
/// exceed it (a counterexample the harness must find).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Within,
    Exceeds,
}

impl Expectation {
    pub fn judge(&self, residual: f64, tolerance: f64) -> bool {
        match self {
            Expectation::Within => residual <= tolerance,
            Expectation::Exceeds => residual > tolerance,
        }
    }
}

/// The reference side of a reduction check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Reference {
    Family(EntropyParams),
    /// `(1/γ)(Π p_k^{(q−1)p_k} − 1)` evaluated as a literal product.
    Product { gaussian_product: GaussianProduct },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianProduct {
    pub q: f64,
    pub gamma: f64,
}

/// Inputs that reproduce a record's worst residual.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    Simplex { p: Vec<f64> },
    Perturbation { p: Vec<f64>, delta: Vec<f64> },
    Joint { cells: Vec<Vec<f64>> },
    Product { p: Vec<f64>, q: Vec<f64> },
    PowerLaw { r: usize, m: usize },
    Normalization { target: f64 },
    Reduction { p: Vec<f64>, reference: Reference },
    MeanGap {
        weights: Vec<f64>,
        values: Vec<f64>,
        lambda: f64,
        shift: f64,
        h: PseudoAddGenerator,
    },
}

/// One verified property for one subject.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: CheckKind,
    /// Axiom label such as `NSK4`, or the check name for derived properties.
    pub axiom: String,
    pub system: System,
    pub subject: Option<Subject>,
    pub trials: usize,
    pub tolerance: f64,
    pub expect: Expectation,
    /// Largest residual seen; `null` in JSON when it is not finite.
    pub max_residual: f64,
    pub passed: bool,
    pub witness: Witness,
}

impl CheckRecord {
    pub fn subject_label(&self) -> String {
        match &self.subject {
            Some(s) => s.label(),
            None => match &self.witness {
                Witness::MeanGap { lambda, .. } => format!("mean-gap(lambda={lambda})"),
                _ => "-".to_string(),
            },
        }
    }
}

/// The outcome of a verification run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub version: u32,
    /// A system name, or `all` for a suite run.
    pub system: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

impl AxiomReport {
    pub fn new(system: impl Into<String>, seed: u64, trials: usize, checks: Vec<CheckRecord>) -> Self {
        AxiomReport {
            version: REPORT_VERSION,
            system: system.into(),
            seed,
            trials,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Fixed-width table, one line per record.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<18} {:<18} {:<4} {:<72} {:>7} {:>10} {:>8} {:<2} result",
            "check", "axiom", "sys", "subject", "trials", "max_resid", "tol", "expect"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<18} {:<18} {:<4} {:<72} {:>7} {:>10.3e} {:>8.1e} {:<2} {}",
                c.check.as_str(),
                c.axiom,
                c.system.as_str(),
                c.subject_label(),
                c.trials,
                c.max_residual,
                c.tolerance,
                match c.expect {
                    Expectation::Within => "<=",
                    Expectation::Exceeds => ">",
                },
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} checks, {} failed, seed {}: {}",
            self.checks.len(),
            failed,
            self.seed,
            if self.passed { "PASS" } else { "FAIL" }
        );
        out
    }
}
