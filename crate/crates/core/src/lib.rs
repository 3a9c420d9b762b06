//! Core engine for Monte Carlo studies of test-size distortion: distribution
//! functions, deterministic seeded sampling, OLS with t and F statistics,
//! scalar hypothesis tests with multiplicity analytics, and the three
//! experiment runners.

// Validations use `!(x > 0.0)` so NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the linear-algebra subscripts they implement.
#![allow(clippy::needless_range_loop)]

pub mod dist;
pub mod error;
pub mod experiments;
pub mod hyptests;
pub mod linmodel;
pub mod sampler;

pub use dist::DegreesOfFreedom;
pub use error::{Error, Result};
pub use experiments::CellStats;
pub use hyptests::{EventSet, TestResult};
pub use linmodel::{DesignMatrix, RegressionFit};
pub use sampler::{MvnSpec, RngStream};
