//! Classical ensembles of variational quantum neural networks.
//!
//! The crate is organized bottom-up:
//!
//! - [`simcore`]: statevector simulation, sampling and Pauli-trajectory noise
//! - [`qnn`]: the RY feature map + layered RX/CNOT/RZ ansatz, its evaluation
//!   backends, parameter-shift and adjoint gradients, and resource counts
//! - [`optim`]: losses, ADAM and the full-batch training loop
//! - [`ensemble`]: bagging / random subspace, AdaBoost.R2, SAMME.R and the
//!   combination rules
//! - [`data`]: synthetic data, CSV ingestion, min-max scaling and splitting

pub mod data;
pub mod ensemble;
mod error;
pub mod optim;
pub mod qnn;
pub mod seed;
pub mod simcore;

pub use error::{Error, Result};
