//! Generalized-mean p-value merging under dependence.
//!
//! This crate evaluates p-value combining statistics (weighted r-means,
//! Simes, Cauchy combination), samples dependent p-value vectors under a
//! range of copula models, computes closed-form distributions and
//! threshold corrections for the harmonic-mean p-value, and verifies
//! sub-uniformity claims by deterministic parallel Monte Carlo.

pub mod analytics;
pub mod copula;
pub mod error;
pub mod mc;
pub mod merge;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
pub use rng::RandomStream;
