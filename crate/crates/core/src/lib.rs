//! Simulation and diagnostics for normal variance-mean Lévy processes built
//! from truncated shot-noise series of Gamma, tempered stable and generalised
//! inverse Gaussian subordinators.

pub mod bounds;
pub mod error;
pub mod mc;
pub mod nvm;
pub mod output;
pub mod rng;
pub mod sde;
pub mod specfun;
pub mod stats;
pub mod subordinators;

pub use error::{Error, Result};
