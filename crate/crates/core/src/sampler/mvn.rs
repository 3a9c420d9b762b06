//! Correlated multivariate normal sampling via Cholesky factorization.

use crate::error::{Error, Result};
use crate::sampler::RngStream;

/// Pivots below this are treated as negative-definite failures; pivots in
/// [-PIVOT_TOL, 0) are clamped to zero (semidefinite matrices are allowed).
const PIVOT_TOL: f64 = 1e-10;
const SYMMETRY_TOL: f64 = 1e-12;

/// Lower-triangular Cholesky factor of a symmetric positive semidefinite
/// matrix, given row-major with dimension `d`.
///
/// Plain O(d³) elimination; the experiments only need d = 3.
pub fn cholesky_lower(cov: &[f64], d: usize) -> Result<Vec<f64>> {
    if cov.len() != d * d {
        return Err(Error::domain(format!(
            "covariance buffer has {} entries, expected {}",
            cov.len(),
            d * d
        )));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            if (cov[i * d + j] - cov[j * d + i]).abs() > SYMMETRY_TOL {
                return Err(Error::domain(format!(
                    "covariance not symmetric at ({i}, {j}): {} vs {}",
                    cov[i * d + j],
                    cov[j * d + i]
                )));
            }
        }
    }
    let mut l = vec![0.0; d * d];
    for j in 0..d {
        let mut pivot = cov[j * d + j];
        for k in 0..j {
            pivot -= l[j * d + k] * l[j * d + k];
        }
        if pivot < -PIVOT_TOL {
            return Err(Error::NotPositiveSemidefinite { index: j, pivot });
        }
        let diag = pivot.max(0.0).sqrt();
        l[j * d + j] = diag;
        for i in (j + 1)..d {
            let mut s = cov[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            // A zero pivot on a semidefinite matrix forces the whole column
            // to zero; anything else would have tripped the pivot check.
            l[i * d + j] = if diag > 0.0 { s / diag } else { 0.0 };
        }
    }
    Ok(l)
}

/// A multivariate normal specification: mean, covariance and its
/// precomputed lower Cholesky factor.
#[derive(Debug, Clone)]
pub struct MvnSpec {
    mean: Vec<f64>,
    cov: Vec<f64>,
    chol: Vec<f64>,
    dim: usize,
}

impl MvnSpec {
    /// Validate and factor a covariance matrix (row-major, `mean.len()`²).
    pub fn new(mean: Vec<f64>, cov: Vec<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 {
            return Err(Error::domain("mvn dimension must be at least 1"));
        }
        let chol = cholesky_lower(&cov, dim)?;
        Ok(MvnSpec {
            mean,
            cov,
            chol,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &[f64] {
        &self.cov
    }

    /// The lower-triangular factor, row-major.
    pub fn chol(&self) -> &[f64] {
        &self.chol
    }

    /// Draw one vector: mean + L·z with z a vector of standard normals.
    /// Advances the stream by `dim` normal draws.
    pub fn sample(&self, rng: &mut RngStream) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.sample_into(rng, &mut out);
        out
    }

    /// Allocation-free variant of [`MvnSpec::sample`].
    pub fn sample_into(&self, rng: &mut RngStream, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        let d = self.dim;
        let mut z = [0.0; 16];
        debug_assert!(d <= 16, "MvnSpec supports dimensions up to 16");
        for zi in z.iter_mut().take(d) {
            *zi = rng.standard_normal();
        }
        for i in 0..d {
            let mut acc = self.mean[i];
            for (k, zk) in z.iter().enumerate().take(i + 1) {
                acc += self.chol[i * d + k] * zk;
            }
            out[i] = acc;
        }
    }
}
