//! Ordinary least squares with coefficient t-ratios and joint F tests, plus
//! the lag-matrix construction used by the Granger-style regressions.
//!
//! Fits go through a Householder QR of the design matrix rather than the
//! normal equations; rank deficiency is detected from the R diagonal with a
//! relative pivot threshold and reported loudly.

use crate::error::{Error, Result};

/// Relative pivot threshold for the rank check: a diagonal entry of R below
/// `RANK_TOL` times the largest one fails the fit.
const RANK_TOL: f64 = 1e-10;

/// A regression design: n rows, p columns, first column identically one.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    n: usize,
    p: usize,
    /// Row-major n×p values.
    data: Vec<f64>,
    labels: Vec<String>,
}

impl DesignMatrix {
    /// Build a design from named regressor columns; the intercept column is
    /// prepended automatically.
    pub fn from_columns(columns: &[(&str, &[f64])]) -> Result<Self> {
        if columns.is_empty() {
            return Err(Error::domain("design needs at least one regressor"));
        }
        let n = columns[0].1.len();
        for (name, col) in columns {
            if col.len() != n {
                return Err(Error::domain(format!(
                    "column {name} has length {}, expected {n}",
                    col.len()
                )));
            }
        }
        // A square design is constructible (the lag builder produces one for
        // n = k + 1); fitting additionally requires n > p for the residual df.
        let p = columns.len() + 1;
        if n < p {
            return Err(Error::domain(format!(
                "need at least as many observations as parameters: n={n}, p={p}"
            )));
        }
        let mut data = vec![0.0; n * p];
        let mut labels = Vec::with_capacity(p);
        labels.push("intercept".to_string());
        for (j, (name, col)) in columns.iter().enumerate() {
            labels.push((*name).to_string());
            for i in 0..n {
                data[i * p + j + 1] = col[i];
            }
        }
        for i in 0..n {
            data[i * p] = 1.0;
        }
        Ok(DesignMatrix { n, p, data, labels })
    }

    /// Lag design for regressing y_t on [1, x_t, x_{t-1}, …, x_{t-k+1}].
    ///
    /// `series` must hold at least n + k − 1 values, the first k − 1 of which
    /// act as starting values; regression row t uses series index k − 1 + t.
    pub fn build_lag_matrix(series: &[f64], k: usize, n: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::domain("lag count k must be at least 1"));
        }
        if series.len() < n + k - 1 {
            return Err(Error::domain(format!(
                "series has {} values, need n + k - 1 = {}",
                series.len(),
                n + k - 1
            )));
        }
        let mut columns: Vec<(String, Vec<f64>)> = Vec::with_capacity(k);
        for h in 0..k {
            let name = if h == 0 {
                "x_t".to_string()
            } else {
                format!("x_t-{h}")
            };
            let col: Vec<f64> = (0..n).map(|t| series[k - 1 + t - h]).collect();
            columns.push((name, col));
        }
        let refs: Vec<(&str, &[f64])> = columns
            .iter()
            .map(|(name, col)| (name.as_str(), col.as_slice()))
            .collect();
        Self::from_columns(&refs)
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.p
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.p + j]
    }

    /// Copy of this design without the given (non-intercept) columns.
    fn drop_columns(&self, drop: &[usize]) -> DesignMatrix {
        let keep: Vec<usize> = (0..self.p).filter(|j| !drop.contains(j)).collect();
        let p = keep.len();
        let mut data = vec![0.0; self.n * p];
        for i in 0..self.n {
            for (jj, &j) in keep.iter().enumerate() {
                data[i * p + jj] = self.data[i * self.p + j];
            }
        }
        DesignMatrix {
            n: self.n,
            p,
            data,
            labels: keep.iter().map(|&j| self.labels[j].clone()).collect(),
        }
    }
}

/// The output of an OLS fit.
#[derive(Debug, Clone)]
pub struct RegressionFit {
    pub beta_hat: Vec<f64>,
    pub rss: f64,
    pub sigma2_hat: f64,
    pub se: Vec<f64>,
    /// t-ratios for H0: β_j = 0; NaN where the fit is perfect (se = 0).
    pub t_ratios: Vec<f64>,
    pub df_resid: usize,
    pub xtx_inv_diag: Vec<f64>,
}

/// Least squares fit of y on the design via Householder QR.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<RegressionFit> {
    let (n, p) = (x.n, x.p);
    if y.len() != n {
        return Err(Error::domain(format!(
            "response has length {}, design has {n} rows",
            y.len()
        )));
    }
    if n <= p {
        return Err(Error::domain(format!(
            "no residual degrees of freedom: n={n}, p={p}"
        )));
    }

    // Householder factorization of a working copy; qty accumulates Qᵀy.
    let mut a = x.data.clone();
    let mut qty = y.to_vec();
    for j in 0..p {
        // norm of the j-th column below the diagonal
        let mut norm = 0.0;
        for i in j..n {
            norm += a[i * p + j] * a[i * p + j];
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue; // exactly zero pivot; caught by the rank check below
        }
        let alpha = if a[j * p + j] > 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n - j];
        v[0] = a[j * p + j] - alpha;
        for i in (j + 1)..n {
            v[i - j] = a[i * p + j];
        }
        let vtv: f64 = v.iter().map(|t| t * t).sum();
        if vtv == 0.0 {
            continue;
        }
        a[j * p + j] = alpha;
        for i in (j + 1)..n {
            a[i * p + j] = 0.0;
        }
        for col in (j + 1)..p {
            let mut dot = 0.0;
            for i in j..n {
                dot += v[i - j] * a[i * p + col];
            }
            let scale = 2.0 * dot / vtv;
            for i in j..n {
                a[i * p + col] -= scale * v[i - j];
            }
        }
        let mut dot = 0.0;
        for i in j..n {
            dot += v[i - j] * qty[i];
        }
        let scale = 2.0 * dot / vtv;
        for i in j..n {
            qty[i] -= scale * v[i - j];
        }
    }

    // Rank check on the diagonal of R.
    let diag_max = (0..p).map(|j| a[j * p + j].abs()).fold(0.0f64, f64::max);
    let threshold = RANK_TOL * diag_max;
    for j in 0..p {
        let pivot = a[j * p + j].abs();
        if pivot <= threshold || pivot == 0.0 {
            return Err(Error::RankDeficient { pivot, threshold });
        }
    }

    // Back substitution for β.
    let mut beta = vec![0.0; p];
    for j in (0..p).rev() {
        let mut s = qty[j];
        for m in (j + 1)..p {
            s -= a[j * p + m] * beta[m];
        }
        beta[j] = s / a[j * p + j];
    }

    // Residuals against the original design.
    let mut rss = 0.0;
    for i in 0..n {
        let mut fit = 0.0;
        for j in 0..p {
            fit += x.data[i * p + j] * beta[j];
        }
        let r = y[i] - fit;
        rss += r * r;
    }

    // (XᵀX)⁻¹ = R⁻¹ R⁻ᵀ; only the diagonal is needed, i.e. squared row
    // norms of R⁻¹. Invert the upper triangle first.
    let mut rinv = vec![0.0; p * p];
    for j in (0..p).rev() {
        rinv[j * p + j] = 1.0 / a[j * p + j];
        for i in (0..j).rev() {
            let mut s = 0.0;
            for m in (i + 1)..=j {
                s += a[i * p + m] * rinv[m * p + j];
            }
            rinv[i * p + j] = -s / a[i * p + i];
        }
    }
    let xtx_inv_diag: Vec<f64> = (0..p)
        .map(|j| (j..p).map(|m| rinv[j * p + m] * rinv[j * p + m]).sum())
        .collect();

    let df_resid = n - p;
    let sigma2_hat = rss / df_resid as f64;
    let se: Vec<f64> = xtx_inv_diag
        .iter()
        .map(|d| (sigma2_hat * d).sqrt())
        .collect();
    let t_ratios: Vec<f64> = beta
        .iter()
        .zip(&se)
        .map(|(b, s)| if *s > 0.0 { b / s } else { f64::NAN })
        .collect();

    Ok(RegressionFit {
        beta_hat: beta,
        rss,
        sigma2_hat,
        se,
        t_ratios,
        df_resid,
        xtx_inv_diag,
    })
}

/// t statistic for H0: β_j = b0.
pub fn t_stat(fit: &RegressionFit, j: usize, b0: f64) -> Result<f64> {
    if j >= fit.se.len() {
        return Err(Error::domain(format!(
            "coefficient index {j} out of range (p = {})",
            fit.se.len()
        )));
    }
    if !(fit.se[j] > 0.0) {
        return Err(Error::DegenerateFit { index: j });
    }
    Ok((fit.beta_hat[j] - b0) / fit.se[j])
}

/// F statistic for the joint null that all coefficients in `subset` are zero.
///
/// Refits the restricted model with the subset columns removed and forms
/// ((rss_R − rss_U)/q) / (rss_U/(n − p)); under the null this is F(q, n − p).
pub fn f_stat_subset_zero(
    fit_u: &RegressionFit,
    x: &DesignMatrix,
    y: &[f64],
    subset: &[usize],
) -> Result<f64> {
    validate_subset(subset, x.p)?;
    let restricted = x.drop_columns(subset);
    let fit_r = ols_fit(&restricted, y)?;
    let q = subset.len() as f64;
    let num = (fit_r.rss - fit_u.rss) / q;
    let den = fit_u.rss / fit_u.df_resid as f64;
    Ok(num / den)
}

/// max |t_j| over a subset of coefficients.
pub fn max_abs_t(fit: &RegressionFit, subset: &[usize]) -> Result<f64> {
    validate_subset(subset, fit.t_ratios.len())?;
    Ok(subset
        .iter()
        .map(|&j| fit.t_ratios[j].abs())
        .fold(0.0, f64::max))
}

fn validate_subset(subset: &[usize], p: usize) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::domain("coefficient subset must be non-empty"));
    }
    for &j in subset {
        if j == 0 {
            return Err(Error::domain(
                "coefficient subset must not include the intercept",
            ));
        }
        if j >= p {
            return Err(Error::domain(format!(
                "coefficient index {j} out of range (p = {p})"
            )));
        }
    }
    Ok(())
}
