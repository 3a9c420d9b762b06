//! Max-|t| snooping vs the joint F test in a lag regression.
//!
//! Under the null, x and y are independent iid standard normal sequences.
//! Per replication the design regresses y_t on an intercept and k lags of x;
//! the snooping rule rejects when max |t_h| clears the single-test t critical
//! value, the valid rule when the joint F statistic clears F(k, n−k−1).
//! Every (k, replication) cell regenerates its data; both test levels are
//! evaluated on the same draw.

use serde::{Deserialize, Serialize};

use crate::dist::{f_quantile, student_t_quantile, DegreesOfFreedom};
use crate::error::{Error, Result};
use crate::experiments::{run_replications, CellStats, DEFAULT_SEED};
use crate::hyptests::sidak_size;
use crate::linmodel::{f_stat_subset_zero, max_abs_t, ols_fit, DesignMatrix};
use crate::sampler::derive_seed;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Exp2Config {
    pub n: usize,
    pub k_values: Vec<usize>,
    pub alphas: Vec<f64>,
    pub reps: u64,
    pub seed: u64,
}

impl Default for Exp2Config {
    fn default() -> Self {
        Exp2Config {
            n: 100,
            k_values: vec![2, 3, 4],
            alphas: vec![0.05, 0.10],
            reps: 10_000,
            seed: DEFAULT_SEED,
        }
    }
}

impl Exp2Config {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::config("exp2: reps must be at least 1"));
        }
        if self.k_values.is_empty() {
            return Err(Error::config("exp2: k list must be non-empty"));
        }
        if self.alphas.is_empty() {
            return Err(Error::config("exp2: alpha list must be non-empty"));
        }
        for &a in &self.alphas {
            if !(a > 0.0 && a < 1.0) {
                return Err(Error::config(format!(
                    "exp2: alpha must lie in (0, 1), got {a}"
                )));
            }
        }
        for &k in &self.k_values {
            if k == 0 {
                return Err(Error::config("exp2: k must be at least 1"));
            }
            if self.n <= k + 1 {
                return Err(Error::config(format!(
                    "exp2: need n > k + 1 for residual degrees of freedom, got n={}, k={k}",
                    self.n
                )));
            }
        }
        Ok(())
    }
}

/// One (α, k) grid cell with both decision rules' tallies.
#[derive(Debug, Clone)]
pub struct Exp2Cell {
    pub alpha: f64,
    pub k: usize,
    pub tmax: CellStats,
    pub f: CellStats,
    /// Exact size 1 − (1 − α)^k of the idealized independent max-test.
    pub analytic_sidak: f64,
}

#[derive(Debug, Clone)]
pub struct Exp2Report {
    pub config: Exp2Config,
    /// Cells ordered α-major, then by k.
    pub cells: Vec<Exp2Cell>,
}

impl Exp2Report {
    pub fn cell(&self, alpha: f64, k: usize) -> Option<&Exp2Cell> {
        self.cells.iter().find(|c| c.alpha == alpha && c.k == k)
    }
}

/// Run the snooping-vs-F size grid over every (alpha, k) cell.
pub fn run_exp2(cfg: &Exp2Config, workers: usize) -> Result<Exp2Report> {
    cfg.validate()?;
    let n = cfg.n;
    let n_alphas = cfg.alphas.len();

    // tallies[k_index] = per-alpha (tmax, f) rejection counts
    let mut tallies: Vec<Vec<u64>> = Vec::with_capacity(cfg.k_values.len());
    for &k in &cfg.k_values {
        let df = DegreesOfFreedom::new((n - k - 1) as f64)?;
        let mut t_crits = Vec::with_capacity(n_alphas);
        let mut f_crits = Vec::with_capacity(n_alphas);
        for &alpha in &cfg.alphas {
            t_crits.push(student_t_quantile(1.0 - alpha / 2.0, df)?);
            f_crits.push(f_quantile(
                1.0 - alpha,
                DegreesOfFreedom::new(k as f64)?,
                df,
            )?);
        }
        let slope_subset: Vec<usize> = (1..=k).collect();
        // Each k is its own cell with its own seed space.
        let cell_seed = derive_seed(cfg.seed, k as u64);
        let counts = run_replications(cfg.reps, cell_seed, workers, |_r, rng| {
            let x: Vec<f64> = (0..n + k - 1).map(|_| rng.standard_normal()).collect();
            let y: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
            let design = DesignMatrix::build_lag_matrix(&x, k, n)?;
            let fit = ols_fit(&design, &y)?;
            let tmax = max_abs_t(&fit, &slope_subset)?;
            let f = f_stat_subset_zero(&fit, &design, &y, &slope_subset)?;
            let mut out = Vec::with_capacity(2 * n_alphas);
            for a in 0..n_alphas {
                out.push(tmax > t_crits[a]);
                out.push(f > f_crits[a]);
            }
            Ok(out)
        })?;
        tallies.push(counts);
    }

    let mut cells = Vec::with_capacity(n_alphas * cfg.k_values.len());
    for (ai, &alpha) in cfg.alphas.iter().enumerate() {
        for (ki, &k) in cfg.k_values.iter().enumerate() {
            cells.push(Exp2Cell {
                alpha,
                k,
                tmax: CellStats::new(tallies[ki][2 * ai], cfg.reps),
                f: CellStats::new(tallies[ki][2 * ai + 1], cfg.reps),
                analytic_sidak: sidak_size(alpha, k as u32)?,
            });
        }
    }
    Ok(Exp2Report {
        config: cfg.clone(),
        cells,
    })
}
