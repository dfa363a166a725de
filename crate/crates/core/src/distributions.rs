//! Points on the probability simplex, joint distributions and the
//! transforms the composition axioms are phrased in: escort reweighting,
//! direct products and marginal/conditional decomposition.

use serde::Serialize;

use crate::error::{domain, Result};

/// Maximum deviation of the entry sum from 1 accepted in strict mode.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;

/// How [`make_dist`] treats inputs that do not sum to one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Normalization {
    /// Reject inputs whose sum differs from 1 by more than [`SIMPLEX_TOLERANCE`];
    /// accepted entries are stored unchanged.
    #[default]
    Strict,
    /// Divide by the sum. Only an all-zero input is rejected.
    Renormalize,
}

/// A finite probability distribution: nonnegative entries summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ProbDist {
    probs: Vec<f64>,
}

impl ProbDist {
    /// Builds a distribution from entries that are already known to be
    /// nonnegative with a positive sum, absorbing rounding by one division.
    pub(crate) fn from_weights(mut weights: Vec<f64>) -> Self {
        let sum: f64 = weights.iter().sum();
        if sum != 1.0 {
            weights.iter_mut().for_each(|w| *w /= sum);
        }
        ProbDist { probs: weights }
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.probs.iter().copied()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// Entries reordered by `order`, which must be a permutation of `0..n`.
    pub fn permuted(&self, order: &[usize]) -> Result<ProbDist> {
        let mut seen = vec![false; self.len()];
        if order.len() != self.len() {
            return domain("permutation length does not match the distribution");
        }
        for &i in order {
            if i >= self.len() || std::mem::replace(&mut seen[i], true) {
                return domain("order is not a permutation");
            }
        }
        Ok(ProbDist {
            probs: order.iter().map(|&i| self.probs[i]).collect(),
        })
    }
}

impl AsRef<[f64]> for ProbDist {
    fn as_ref(&self) -> &[f64] {
        &self.probs
    }
}

fn check_entries(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return domain("a distribution needs at least one entry");
    }
    for (i, &v) in values.iter().enumerate() {
        if !v.is_finite() {
            return domain(format!("entry {i} is not finite ({v})"));
        }
        if v < 0.0 {
            return domain(format!("entry {i} is negative ({v})"));
        }
    }
    Ok(values.iter().sum())
}

fn normalized(values: &[f64], mode: Normalization) -> Result<Vec<f64>> {
    let sum = check_entries(values)?;
    match mode {
        Normalization::Strict if (sum - 1.0).abs() > SIMPLEX_TOLERANCE => {
            domain(format!("entries sum to {sum}, not 1"))
        }
        Normalization::Strict => Ok(values.to_vec()),
        Normalization::Renormalize if sum == 0.0 => domain("all entries are zero"),
        Normalization::Renormalize => Ok(ProbDist::from_weights(values.to_vec()).probs),
    }
}

/// Validates `values` as a point of the simplex.
pub fn make_dist(values: &[f64], mode: Normalization) -> Result<ProbDist> {
    normalized(values, mode).map(|probs| ProbDist { probs })
}

/// The uniform distribution on `n` outcomes.
pub fn uniform(n: usize) -> Result<ProbDist> {
    if n == 0 {
        return domain("uniform distribution needs n >= 1");
    }
    Ok(ProbDist {
        probs: vec![1.0 / n as f64; n],
    })
}

/// The α-escort distribution `p_k^α / Σ_i p_i^α`.
///
/// Powers are taken in log space relative to the largest entry so that
/// large α on peaked inputs neither overflows nor underflows to an all-zero
/// vector. Zero entries stay zero.
pub fn escort(p: &ProbDist, alpha: f64) -> Result<ProbDist> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return domain(format!("escort order must be positive and finite, got {alpha}"));
    }
    if alpha == 1.0 {
        return Ok(p.clone());
    }
    let p_max = p.iter().fold(0.0, f64::max);
    let log_max = p_max.ln();
    let weights = p
        .iter()
        .map(|pk| {
            if pk > 0.0 {
                (alpha * (pk.ln() - log_max)).exp()
            } else {
                0.0
            }
        })
        .collect();
    Ok(ProbDist::from_weights(weights))
}

/// Appends one zero-probability outcome.
pub fn expand_zero(p: &ProbDist) -> ProbDist {
    let mut probs = p.probs.clone();
    probs.push(0.0);
    ProbDist { probs }
}

/// A joint distribution `r_ij` over `n × m` outcomes, stored row-major.
///
/// Row `i` collects the outcomes whose first component is `i`, so row sums
/// form the marginal and normalized rows the conditionals.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointDist {
    rows: usize,
    cols: usize,
    cells: Vec<f64>,
}

/// Marginal and conditionals of a [`JointDist`].
///
/// A conditional is `None` when its row carries no mass.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub marginal: ProbDist,
    pub conditionals: Vec<Option<ProbDist>>,
}

impl JointDist {
    /// Builds a joint from a rectangular grid.
    pub fn new(grid: &[Vec<f64>], mode: Normalization) -> Result<Self> {
        let rows = grid.len();
        if rows == 0 {
            return domain("a joint distribution needs at least one row");
        }
        let cols = grid[0].len();
        if grid.iter().any(|r| r.len() != cols) {
            return domain("joint distribution rows have different lengths");
        }
        let flat: Vec<f64> = grid.iter().flatten().copied().collect();
        JointDist::from_flat(rows, cols, &flat, mode)
    }

    /// Builds a joint from `rows * cols` row-major cells.
    pub fn from_flat(rows: usize, cols: usize, cells: &[f64], mode: Normalization) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return domain("joint dimensions must be positive");
        }
        if cells.len() != rows * cols {
            return domain(format!(
                "expected {} cells for a {rows}x{cols} joint, got {}",
                rows * cols,
                cells.len()
            ));
        }
        Ok(JointDist {
            rows,
            cols,
            cells: normalized(cells, mode)?,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    pub fn cell(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.cols + j]
    }

    /// The grid as nested rows.
    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.cells.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    /// All cells as one distribution of dimension `rows * cols`.
    pub fn flatten(&self) -> ProbDist {
        ProbDist {
            probs: self.cells.clone(),
        }
    }

    /// Row sums and row-normalized conditionals.
    pub fn decompose(&self) -> Decomposition {
        let row_sums: Vec<f64> = self
            .cells
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect();
        let conditionals = self
            .cells
            .chunks(self.cols)
            .zip(&row_sums)
            .map(|(r, &mass)| (mass > 0.0).then(|| ProbDist::from_weights(r.to_vec())))
            .collect();
        Decomposition {
            marginal: ProbDist::from_weights(row_sums),
            conditionals,
        }
    }
}

/// The independent joint `r_ij = p_i q_j`.
pub fn direct_product(p: &ProbDist, q: &ProbDist) -> JointDist {
    let cells = p
        .iter()
        .flat_map(|pi| q.iter().map(move |qj| pi * qj))
        .collect();
    JointDist {
        rows: p.len(),
        cols: q.len(),
        cells,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(v: &[f64]) -> ProbDist {
        make_dist(v, Normalization::Strict).unwrap()
    }

    #[test]
    fn make_dist_modes() {
        assert_eq!(dist(&[0.5, 0.5]).as_slice(), &[0.5, 0.5]);
        let r = make_dist(&[2.0, 1.0, 1.0], Normalization::Renormalize).unwrap();
        assert_eq!(r.as_slice(), &[0.5, 0.25, 0.25]);
        assert!(make_dist(&[0.5, 0.6], Normalization::Strict).is_err());
        assert!(make_dist(&[0.5, -0.1, 0.6], Normalization::Renormalize).is_err());
        assert!(make_dist(&[0.0, 0.0], Normalization::Renormalize).is_err());
        assert!(make_dist(&[], Normalization::Renormalize).is_err());
        assert!(make_dist(&[f64::NAN, 1.0], Normalization::Renormalize).is_err());
    }

    #[test]
    fn strict_accepts_sum_within_tolerance() {
        let p = make_dist(&[0.5, 0.5 + 5e-10], Normalization::Strict).unwrap();
        assert_eq!(p.as_slice(), &[0.5, 0.5 + 5e-10]);
    }

    #[test]
    fn uniform_values() {
        assert_eq!(uniform(2).unwrap().as_slice(), &[0.5, 0.5]);
        assert_eq!(uniform(4).unwrap().as_slice(), &[0.25; 4]);
        assert_eq!(uniform(1).unwrap().as_slice(), &[1.0]);
        assert!(uniform(0).is_err());
    }

    #[test]
    fn escort_examples() {
        let e = escort(&dist(&[0.5, 0.25, 0.25]), 2.0).unwrap();
        let expected = [2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0];
        for (a, b) in e.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
        let p = dist(&[0.2, 0.3, 0.5]);
        assert_eq!(escort(&p, 1.0).unwrap(), p);
        let u = uniform(5).unwrap();
        for a in [0.3, 2.0, 7.5] {
            for x in escort(&u, a).unwrap().iter() {
                assert!((x - 0.2).abs() < 1e-15);
            }
        }
        assert!(escort(&p, 0.0).is_err());
        assert!(escort(&p, -1.0).is_err());
    }

    #[test]
    fn escort_keeps_zeros_and_survives_extreme_orders() {
        let p = dist(&[0.999, 0.001, 0.0]);
        let e = escort(&p, 200.0).unwrap();
        assert_eq!(e.as_slice()[2], 0.0);
        assert!((e.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(e.as_slice()[0] > 0.999);
    }

    #[test]
    fn direct_product_examples() {
        let j = direct_product(&dist(&[0.5, 0.5]), &dist(&[0.5, 0.5]));
        assert_eq!(j.to_rows(), vec![vec![0.25, 0.25], vec![0.25, 0.25]]);
        let q = dist(&[0.6, 0.4]);
        let j = direct_product(&dist(&[1.0]), &q);
        assert_eq!((j.rows(), j.cols()), (1, 2));
        assert_eq!(j.row(0), q.as_slice());
        let j = direct_product(&dist(&[0.5, 0.5]), &q);
        assert_eq!(j.to_rows(), vec![vec![0.3, 0.2], vec![0.3, 0.2]]);
    }

    #[test]
    fn decompose_examples() {
        let j = JointDist::new(&[vec![0.25, 0.25], vec![0.3, 0.2]], Normalization::Strict).unwrap();
        let d = j.decompose();
        assert_eq!(d.marginal.as_slice(), &[0.5, 0.5]);
        assert_eq!(d.conditionals[0].as_ref().unwrap().as_slice(), &[0.5, 0.5]);
        let c1 = d.conditionals[1].as_ref().unwrap();
        assert!((c1.as_slice()[0] - 0.6).abs() < 1e-15);
        assert!((c1.as_slice()[1] - 0.4).abs() < 1e-15);

        let j = JointDist::new(&[vec![0.5, 0.5], vec![0.0, 0.0]], Normalization::Strict).unwrap();
        let d = j.decompose();
        assert_eq!(d.marginal.as_slice(), &[1.0, 0.0]);
        assert!(d.conditionals[1].is_none());
    }

    #[test]
    fn joint_rejects_ragged_and_invalid() {
        assert!(JointDist::new(&[vec![0.5], vec![0.25, 0.25]], Normalization::Strict).is_err());
        assert!(JointDist::new(&[], Normalization::Strict).is_err());
        assert!(JointDist::new(&[vec![0.5, 0.6]], Normalization::Strict).is_err());
        assert!(JointDist::from_flat(2, 2, &[0.25; 3], Normalization::Strict).is_err());
    }

    #[test]
    fn expand_zero_appends() {
        let p = dist(&[0.5, 0.5]);
        assert_eq!(expand_zero(&p).as_slice(), &[0.5, 0.5, 0.0]);
        assert_eq!(expand_zero(&expand_zero(&p)).as_slice(), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(expand_zero(&dist(&[1.0])).as_slice(), &[1.0, 0.0]);
    }

    #[test]
    fn permuted_validates_order() {
        let p = dist(&[0.2, 0.3, 0.5]);
        assert_eq!(p.permuted(&[2, 0, 1]).unwrap().as_slice(), &[0.5, 0.2, 0.3]);
        assert!(p.permuted(&[0, 0, 1]).is_err());
        assert!(p.permuted(&[0, 1]).is_err());
    }
}
