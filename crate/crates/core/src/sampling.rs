//! Seeded random draws used by the verification harness.
//!
//! Every trial owns its own generator derived from `(seed, stream, trial)`,
//! so a trial's inputs do not depend on how many trials ran before it or on
//! which thread ran it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use crate::distributions::{JointDist, Normalization, ProbDist};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit tag for a stream name.
pub fn stream_id(name: &str) -> u64 {
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Generator for trial `trial` of stream `stream` under `seed`.
pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ trial);
    ChaCha8Rng::seed_from_u64(key)
}

/// A draw from the flat Dirichlet(1, ..., 1) on `n` outcomes.
pub fn dirichlet_uniform<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ProbDist {
    loop {
        let weights: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        if weights.iter().sum::<f64>() > 0.0 {
            return ProbDist::from_weights(weights);
        }
    }
}

/// A joint drawn as a flat Dirichlet over `rows * cols` cells.
pub fn random_joint<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> JointDist {
    let flat = dirichlet_uniform(rng, rows * cols);
    JointDist::from_flat(rows, cols, flat.as_slice(), Normalization::Renormalize)
        .expect("dirichlet draw is a valid joint")
}

/// Uniform integer in the inclusive range `lo..=hi`.
pub fn dim_in<R: Rng + ?Sized>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.random_range(lo..=hi)
}
