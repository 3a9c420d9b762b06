//! Post-model-selection inference study.
//!
//! Data follow y = δ + β·x + γ·z + ε with (x, z, ε) jointly normal, x and z
//! correlated at ρ and ε independent with variance σ². A pretest of γ = 0 at
//! level α_U (critical value from t(n−3)) selects the restricted model
//! (drop z) or the unrestricted one; the null β = β₀ is then tested with
//! t(n−2) under (R) and t(n−3) under (U). The always-unrestricted test runs
//! as the benchmark series.
//!
//! One dataset is drawn per (γ, replication) and evaluated at every pretest
//! level. Cell seeds are derived from (ρ, |γ|), so the +γ and −γ cells of a
//! symmetric grid share their noise and the symmetry of the distortion curve
//! can be checked with paired draws.

use serde::{Deserialize, Serialize};

use crate::dist::{student_t_quantile, DegreesOfFreedom};
use crate::error::{Error, Result};
use crate::experiments::{run_replications, CellStats, DEFAULT_SEED};
use crate::linmodel::{ols_fit, t_stat, DesignMatrix};
use crate::sampler::{derive_seed, mix64, MvnSpec};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Exp3Config {
    pub n: usize,
    pub rhos: Vec<f64>,
    /// True slope on x (the tested null is β = beta0 with beta0 = beta_true).
    pub beta_true: f64,
    pub beta0: f64,
    pub delta_true: f64,
    pub error_variance: f64,
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub gamma_step: f64,
    /// Level of the β test.
    pub alpha: f64,
    /// Pretest levels for the γ selection step.
    pub alpha_u_levels: Vec<f64>,
    pub reps: u64,
    pub seed: u64,
}

impl Default for Exp3Config {
    fn default() -> Self {
        Exp3Config {
            n: 100,
            rhos: vec![0.5, 0.9],
            beta_true: 1.0,
            beta0: 1.0,
            delta_true: 0.0,
            error_variance: 0.5,
            gamma_min: -0.5,
            gamma_max: 0.5,
            gamma_step: 0.025,
            alpha: 0.05,
            alpha_u_levels: vec![0.01, 0.05, 0.10],
            reps: 5_000,
            seed: DEFAULT_SEED,
        }
    }
}

impl Exp3Config {
    pub fn validate(&self) -> Result<()> {
        if self.reps == 0 {
            return Err(Error::config("exp3: reps must be at least 1"));
        }
        if self.n < 4 {
            return Err(Error::config("exp3: need n >= 4 for t(n-3)"));
        }
        if self.rhos.is_empty() {
            return Err(Error::config("exp3: rho list must be non-empty"));
        }
        for &rho in &self.rhos {
            if !(rho.abs() < 1.0) {
                return Err(Error::config(format!(
                    "exp3: |rho| must be below 1, got {rho}"
                )));
            }
        }
        if !(self.error_variance > 0.0) {
            return Err(Error::config(format!(
                "exp3: error variance must be positive, got {}",
                self.error_variance
            )));
        }
        if !(self.gamma_step > 0.0) {
            return Err(Error::config("exp3: gamma step must be positive"));
        }
        if self.gamma_max < self.gamma_min {
            return Err(Error::config("exp3: gamma range is empty"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config(format!(
                "exp3: alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.alpha_u_levels.is_empty() {
            return Err(Error::config("exp3: alpha_u list must be non-empty"));
        }
        for &au in &self.alpha_u_levels {
            if !(au > 0.0 && au < 1.0) {
                return Err(Error::config(format!(
                    "exp3: alpha_u must lie in (0, 1), got {au}"
                )));
            }
        }
        if self.gamma_grid().len() > 100_000 {
            return Err(Error::config("exp3: gamma grid is implausibly large"));
        }
        Ok(())
    }

    /// The γ evaluation grid, snapped to a 1e-12 decimal lattice so a
    /// symmetric range yields exactly opposite values at ±γ.
    pub fn gamma_grid(&self) -> Vec<f64> {
        let count =
            ((self.gamma_max - self.gamma_min) / self.gamma_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| snap(self.gamma_min + i as f64 * self.gamma_step))
            .collect()
    }
}

fn snap(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// One grid row: rejection tallies per pretest level plus the benchmark.
#[derive(Debug, Clone)]
pub struct Exp3Row {
    pub gamma: f64,
    /// Post-model-selection tallies, parallel to `alpha_u_levels`.
    pub pms: Vec<CellStats>,
    /// Always-unrestricted benchmark.
    pub unrestricted: CellStats,
}

/// The full distortion curve for one ρ.
#[derive(Debug, Clone)]
pub struct Exp3Curve {
    pub rho: f64,
    pub rows: Vec<Exp3Row>,
}

#[derive(Debug, Clone)]
pub struct Exp3Report {
    pub config: Exp3Config,
    pub curves: Vec<Exp3Curve>,
}

/// Trace the rejection-frequency curves over the γ grid for every ρ.
pub fn run_exp3(cfg: &Exp3Config, workers: usize) -> Result<Exp3Report> {
    cfg.validate()?;
    let n = cfg.n;
    let grid = cfg.gamma_grid();
    let df_r = DegreesOfFreedom::new((n - 2) as f64)?;
    let df_u = DegreesOfFreedom::new((n - 3) as f64)?;
    let t_crit_r = student_t_quantile(1.0 - cfg.alpha / 2.0, df_r)?;
    let t_crit_u = student_t_quantile(1.0 - cfg.alpha / 2.0, df_u)?;
    let pretest_crits: Vec<f64> = cfg
        .alpha_u_levels
        .iter()
        .map(|&au| student_t_quantile(1.0 - au / 2.0, df_u))
        .collect::<Result<_>>()?;
    let n_levels = cfg.alpha_u_levels.len();

    let mut curves = Vec::with_capacity(cfg.rhos.len());
    for &rho in &cfg.rhos {
        let cov = vec![1.0, rho, 0.0, rho, 1.0, 0.0, 0.0, 0.0, cfg.error_variance];
        let spec = MvnSpec::new(vec![0.0; 3], cov)?;
        let mut rows = Vec::with_capacity(grid.len());
        for &gamma in &grid {
            // Pair +γ with −γ: the cell seed depends on |γ| only.
            let tag = mix64(rho.to_bits()) ^ mix64(gamma.abs().to_bits());
            let cell_seed = derive_seed(cfg.seed, tag);
            let counts = run_replications(cfg.reps, cell_seed, workers, |_r, rng| {
                let mut xs = vec![0.0; n];
                let mut zs = vec![0.0; n];
                let mut ys = vec![0.0; n];
                let mut triple = [0.0; 3];
                for i in 0..n {
                    spec.sample_into(rng, &mut triple);
                    xs[i] = triple[0];
                    zs[i] = triple[1];
                    ys[i] =
                        cfg.delta_true + cfg.beta_true * triple[0] + gamma * triple[1] + triple[2];
                }
                let design_u = DesignMatrix::from_columns(&[("x", &xs), ("z", &zs)])?;
                let fit_u = ols_fit(&design_u, &ys)?;
                let design_r = DesignMatrix::from_columns(&[("x", &xs)])?;
                let fit_r = ols_fit(&design_r, &ys)?;
                let t_gamma = fit_u.t_ratios[2];
                let t_beta_u = t_stat(&fit_u, 1, cfg.beta0)?;
                let t_beta_r = t_stat(&fit_r, 1, cfg.beta0)?;
                let mut out = Vec::with_capacity(n_levels + 1);
                for crit in &pretest_crits {
                    let keep_restricted = t_gamma.abs() <= *crit;
                    let reject = if keep_restricted {
                        t_beta_r.abs() > t_crit_r
                    } else {
                        t_beta_u.abs() > t_crit_u
                    };
                    out.push(reject);
                }
                out.push(t_beta_u.abs() > t_crit_u);
                Ok(out)
            })?;
            rows.push(Exp3Row {
                gamma,
                pms: counts[..n_levels]
                    .iter()
                    .map(|&c| CellStats::new(c, cfg.reps))
                    .collect(),
                unrestricted: CellStats::new(counts[n_levels], cfg.reps),
            });
        }
        curves.push(Exp3Curve { rho, rows });
    }
    Ok(Exp3Report {
        config: cfg.clone(),
        curves,
    })
}
