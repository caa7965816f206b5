use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How r·d is turned into a count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundingMode {
    #[default]
    HalfUp,
    Floor,
}

impl RoundingMode {
    /// max(1, round(ratio · n)).
    pub fn count(self, n: usize, ratio: f64) -> usize {
        // The offset absorbs representation error in products like 0.8 · 5.
        let raw = ratio * n as f64;
        let k = match self {
            RoundingMode::HalfUp => (raw + 0.5 + 1e-9).floor(),
            RoundingMode::Floor => (raw + 1e-9).floor(),
        };
        (k as usize).clamp(1, n.max(1))
    }
}

pub(crate) fn check_ratio(name: &str, r: f64) -> Result<()> {
    if r > 0.0 && r <= 1.0 {
        Ok(())
    } else {
        Err(Error::config(format!("{name} {r} not in (0, 1]")))
    }
}

/// round(r_n · n_train) indices (at least one) drawn uniformly with
/// replacement.
pub fn bootstrap_indices<R: Rng>(n_train: usize, r_n: f64, rng: &mut R) -> Result<Vec<usize>> {
    if n_train == 0 {
        return Err(Error::contract("bootstrap of an empty training set"));
    }
    check_ratio("sample ratio", r_n)?;
    let k = RoundingMode::HalfUp.count(n_train, r_n);
    Ok((0..k).map(|_| rng.gen_range(0..n_train)).collect())
}

/// max(1, round(r_f · d)) distinct feature indices, sorted.
pub fn subspace_indices<R: Rng>(d: usize, r_f: f64, mode: RoundingMode, rng: &mut R) -> Result<Vec<usize>> {
    if d == 0 {
        return Err(Error::contract("feature subspace of zero features"));
    }
    check_ratio("feature ratio", r_f)?;
    let k = mode.count(d, r_f);
    let mut idx = index::sample(rng, d, k).into_vec();
    idx.sort_unstable();
    Ok(idx)
}

/// `n` indices drawn with replacement, index i with probability ∝ weights[i].
pub fn weighted_bootstrap<R: Rng>(weights: &[f64], n: usize, rng: &mut R) -> Result<Vec<usize>> {
    let dist = WeightedIndex::new(weights).map_err(|e| Error::contract(format!("sample weights: {e}")))?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}
