use ndarray::Array2;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;

use super::{Dataset, Targets};
use crate::error::{Error, Result};

/// A generated linear-regression dataset and the weights behind it.
#[derive(Debug, Clone)]
pub struct LinearData {
    pub dataset: Dataset,
    pub weights: Vec<f64>,
}

/// y = w·x + ε with w, x ~ U[−1, 1]^d and ε ~ N(0, sigma²).
///
/// `sigma` is the noise standard deviation. Draw order is fixed: the d
/// weights first, then per sample its d features followed by its noise.
pub fn generate_linear(n: usize, d: usize, sigma: f64, seed: u64) -> Result<LinearData> {
    if n == 0 || d == 0 {
        return Err(Error::config("linear dataset needs n >= 1 and d >= 1"));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::config(format!("noise level {sigma} must be finite and >= 0")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Uniform::new_inclusive(-1.0, 1.0);
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::config(e.to_string()))?;

    let weights: Vec<f64> = (0..d).map(|_| unit.sample(&mut rng)).collect();
    let mut flat = Vec::with_capacity(n * d);
    let mut y = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..d).map(|_| unit.sample(&mut rng)).collect();
        let eps = noise.sample(&mut rng);
        y.push(weights.iter().zip(&x).map(|(w, v)| w * v).sum::<f64>() + eps);
        flat.extend(x);
    }
    let features = Array2::from_shape_vec((n, d), flat).expect("n·d values");
    let names = (0..d).map(|j| format!("x{j}")).collect();
    let dataset = Dataset::new(features, Targets::Regression(y))?.with_feature_names(names)?;
    Ok(LinearData { dataset, weights })
}
