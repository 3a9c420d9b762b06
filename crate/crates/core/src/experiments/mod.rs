//! The three Monte Carlo studies and their deterministic replication runner.
//!
//! * `exp1` — event-battery p-hacking: draw uniform integers, test every
//!   event in a battery, track per-event and familywise rejections.
//! * `exp2` — max-|t| snooping vs the joint F test in a lag regression under
//!   a true null of no predictive content.
//! * `exp3` — post-model-selection inference: pretest a covariate, then test
//!   the main slope with the selected model's critical value.
//!
//! Each study runs `reps` independent replications; replication r always
//! draws from the stream `(cell seed, r)`, so results are identical for any
//! worker count and execution order.

mod exp1;
mod exp2;
mod exp3;
mod runner;

pub use exp1::{exp1_replication, run_exp1, Exp1Config, Exp1Replication, Exp1Report};
pub use exp2::{run_exp2, Exp2Cell, Exp2Config, Exp2Report};
pub use exp3::{run_exp3, Exp3Config, Exp3Curve, Exp3Report, Exp3Row};
pub use runner::run_replications;

use serde::{Deserialize, Serialize};

/// Default master seed used by configs when none is supplied.
pub const DEFAULT_SEED: u64 = 42;

/// Rejection tally for one cell of an experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellStats {
    pub rejections: u64,
    pub reps: u64,
}

impl CellStats {
    pub fn new(rejections: u64, reps: u64) -> Self {
        CellStats { rejections, reps }
    }

    /// Rejection frequency, exactly rejections/reps.
    pub fn frequency(&self) -> f64 {
        self.rejections as f64 / self.reps as f64
    }

    /// Monte Carlo standard error √(f(1−f)/reps).
    pub fn mc_se(&self) -> f64 {
        let f = self.frequency();
        (f * (1.0 - f) / self.reps as f64).sqrt()
    }
}
