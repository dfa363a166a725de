//! Generalized entropies built from pseudo-additions and quasi-linear means.
//!
//! The crate evaluates the Shannon, Nath, Rényi, Havrda–Charvát–Tsallis,
//! two-parameter (Sharma–Mittal / Frank–Daffertshofer), Gaussian and
//! `h ∘ Nath` entropies, the generator algebra behind them, and a seeded
//! harness that checks the axioms each family is characterized by
//! (maximality, expandability, composition, additivity, normalization).
//!
//! ```
//! use genentropy::{make_dist, renyi, Normalization};
//!
//! let p = make_dist(&[0.5, 0.25, 0.25], Normalization::Strict).unwrap();
//! let h = renyi(&p, 2.0).unwrap();
//! assert!((h - (8.0f64 / 3.0).log2()).abs() < 1e-15);
//! ```

// NaN parameters must fail validation, hence `!(x > 0.0)` rather than `x <= 0.0`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod distributions;
pub mod entropies;
pub mod error;
pub mod generators;
pub mod harness;
pub mod sampling;

pub use distributions::{
    direct_product, escort, expand_zero, make_dist, uniform, Decomposition, JointDist,
    Normalization, ProbDist,
};
pub use entropies::{
    biparametric, conditional, conditional_with, gaussian_entropy, generalized, nath, renyi,
    shannon, sharma_mittal, tsallis, CompositionRule, Convention, EntropyParams, Family, System,
};
pub use error::{Error, Result};
pub use generators::{
    gamma_add, h_eval, h_invert, induced_add, kn_mean, means_agree, MeanAgreement, MeanGenerator,
    PseudoAddGenerator,
};
