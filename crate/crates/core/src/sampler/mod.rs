//! Deterministic seeded sampling: raw streams, uniform integers, standard
//! normals and correlated multivariate normals.

mod mvn;
mod rng;

pub use mvn::{cholesky_lower, MvnSpec};
pub use rng::{derive_seed, mix64, RngStream};
