use crate::error::{Error, Result};

/// Probability that at least `threshold` of `m` independent jurors, each
/// right with probability `p`, are right. Empty ranges give 0.
pub fn jury_probability_with_threshold(m: u32, p: f64, threshold: u32) -> Result<f64> {
    if m == 0 {
        return Err(Error::contract("jury of zero members"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::contract(format!("juror accuracy {p} not in [0, 1]")));
    }
    let mut total = 0.0;
    let mut binom = 1.0; // C(m, k), updated incrementally
    for k in 0..=m {
        if k > 0 {
            binom *= (m - k + 1) as f64 / k as f64;
        }
        if k >= threshold {
            total += binom * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32);
        }
    }
    Ok(total.min(1.0))
}

/// Σ_{k=⌈m/2⌉+1}^{m} C(m,k) p^k (1−p)^{m−k}, with the lower bound as
/// commonly printed. For odd m this excludes the bare majority; pass
/// `m / 2 + 1` to [`jury_probability_with_threshold`] for the usual
/// majority vote.
pub fn jury_probability(m: u32, p: f64) -> Result<f64> {
    jury_probability_with_threshold(m, p, m.div_ceil(2) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert!((jury_probability(3, 0.6).unwrap() - 0.216).abs() < 1e-15);
        assert_eq!(jury_probability(3, 1.0).unwrap(), 1.0);
        // ⌈1/2⌉ + 1 = 2 > 1: empty range.
        assert_eq!(jury_probability(1, 0.9).unwrap(), 0.0);
        let majority = jury_probability_with_threshold(3, 0.6, 2).unwrap();
        assert!((majority - (3.0 * 0.36 * 0.4 + 0.216)).abs() < 1e-15);
        assert!(jury_probability(0, 0.5).is_err());
        assert!(jury_probability(3, 1.5).is_err());
    }
}
