//! Event-battery p-hacking study: per-event rejection rates and the
//! familywise rate of flagging at least one event, with the exact and
//! first-order multiplicity analytics attached. A chi-squared goodness-of-fit
//! test over all 100 cells runs as a companion in every replication.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::{run_replications, CellStats, DEFAULT_SEED};
use crate::hyptests::{
    bonferroni_bound, builtin_battery, chi_squared_gof, proportion_z_test, sidak_size, EventSet,
    TestResult,
};
use crate::sampler::RngStream;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Exp1Config {
    /// Draws per replication.
    pub n: u64,
    pub events: Vec<EventSet>,
    pub alpha: f64,
    pub reps: u64,
    pub seed: u64,
}

impl Default for Exp1Config {
    fn default() -> Self {
        Exp1Config {
            n: 100_000,
            events: builtin_battery(),
            alpha: 0.05,
            reps: 2_000,
            seed: DEFAULT_SEED,
        }
    }
}

impl Exp1Config {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("exp1: n must be at least 1"));
        }
        if self.reps == 0 {
            return Err(Error::config("exp1: reps must be at least 1"));
        }
        if self.events.is_empty() {
            return Err(Error::config("exp1: event battery must be non-empty"));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::config(format!(
                "exp1: alpha must lie in (0, 1], got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// One replication's raw outcomes.
#[derive(Debug, Clone)]
pub struct Exp1Replication {
    /// Rejection flag per event, in battery order.
    pub event_rejects: Vec<bool>,
    /// At least one event rejected (the familywise indicator).
    pub any_rejection: bool,
    /// Companion goodness-of-fit test over the 100 cells.
    pub chisq: TestResult,
}

/// Draw one sample and run the whole battery plus the goodness-of-fit
/// companion on it.
pub fn exp1_replication(cfg: &Exp1Config, rng: &mut RngStream) -> Result<Exp1Replication> {
    let mut hist = [0u64; 100];
    for _ in 0..cfg.n {
        let v = rng.uniform_int(1, 100)?;
        hist[v as usize - 1] += 1;
    }
    let event_rejects = cfg
        .events
        .iter()
        .map(|e| {
            proportion_z_test(e.count_in_histogram(&hist), cfg.n, e.prob(), cfg.alpha)
                .map(|r| r.reject)
        })
        .collect::<Result<Vec<bool>>>()?;
    let any_rejection = event_rejects.iter().any(|&b| b);
    let uniform = vec![1.0 / 100.0; 100];
    let chisq = chi_squared_gof(&hist, &uniform, cfg.alpha)?;
    Ok(Exp1Replication {
        event_rejects,
        any_rejection,
        chisq,
    })
}

#[derive(Debug, Clone)]
pub struct Exp1Report {
    pub config: Exp1Config,
    /// Rejection tallies per event, in battery order.
    pub event_cells: Vec<CellStats>,
    /// Familywise: at least one event rejected.
    pub fwer: CellStats,
    /// The chi-squared companion's rejection tally.
    pub chisq_gof: CellStats,
    /// Exact familywise size of K independent level-α tests.
    pub sidak: f64,
    /// First-order bound min(1, K·α).
    pub bonferroni: f64,
}

/// Run the battery study: per-event rejection tallies, the familywise
/// indicator and the goodness-of-fit companion over `cfg.reps` replications.
pub fn run_exp1(cfg: &Exp1Config, workers: usize) -> Result<Exp1Report> {
    cfg.validate()?;
    let counts = run_replications(cfg.reps, cfg.seed, workers, |_r, rng| {
        let rep = exp1_replication(cfg, rng)?;
        let mut out = rep.event_rejects;
        out.push(rep.any_rejection);
        out.push(rep.chisq.reject);
        Ok(out)
    })?;
    let k = cfg.events.len();
    let event_cells = counts[..k]
        .iter()
        .map(|&c| CellStats::new(c, cfg.reps))
        .collect();
    Ok(Exp1Report {
        event_cells,
        fwer: CellStats::new(counts[k], cfg.reps),
        chisq_gof: CellStats::new(counts[k + 1], cfg.reps),
        sidak: sidak_size(cfg.alpha, k as u32)?,
        bonferroni: bonferroni_bound(cfg.alpha, k as u32)?,
        config: cfg.clone(),
    })
}
