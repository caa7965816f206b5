use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::simcore::NoiseModel;

/// How a circuit's expectation values are obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    /// Exact expectation values from the final statevector.
    Exact,
    /// Finite-shot estimates from computational-basis sampling.
    Shots { shots: u64, seed: u64 },
    /// Averages over stochastic Pauli-fault trajectories.
    Noisy {
        noise: NoiseModel,
        trajectories: u32,
        seed: u64,
    },
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Shots { .. } => "shots",
            Backend::Noisy { .. } => "noisy",
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Backend::Exact)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Backend::Exact => Ok(()),
            Backend::Shots { shots, .. } => {
                if *shots == 0 {
                    Err(Error::config("shot backend needs at least one shot"))
                } else {
                    Ok(())
                }
            }
            Backend::Noisy {
                noise,
                trajectories,
                ..
            } => {
                noise.validate()?;
                if *trajectories == 0 {
                    Err(Error::config("noisy backend needs at least one trajectory"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Same backend on an independent random stream.
    pub fn derive(&self, salt: u64) -> Backend {
        match self {
            Backend::Exact => Backend::Exact,
            Backend::Shots { shots, seed } => Backend::Shots {
                shots: *shots,
                seed: derive_seed(*seed, salt),
            },
            Backend::Noisy {
                noise,
                trajectories,
                seed,
            } => Backend::Noisy {
                noise: noise.clone(),
                trajectories: *trajectories,
                seed: derive_seed(*seed, salt),
            },
        }
    }
}
