//! Brute-force oracles used only by the test suites.
//!
//! Everything here is deliberately independent of the main crates: CDFs are
//! obtained by adaptive quadrature of the densities, the log-gamma oracle uses
//! a Stirling series (the library uses a Lanczos approximation), and the OLS
//! oracle solves the normal equations by Gauss-Jordan elimination (the library
//! uses a QR decomposition). Slow and simple on purpose.

/// ln(2π)/2
const HALF_LN_2PI: f64 = 0.9189385332046728;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 60)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        // Richardson extrapolation of the two half-interval estimates.
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// ln Γ(x) for x > 0 via upward recurrence and a Stirling series with
/// Bernoulli terms through B16 (truncation error < 1e-19 at the shifted
/// argument z ≥ 12).
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma oracle requires x > 0, got {x}");
    let mut shift = 0.0;
    let mut z = x;
    while z < 12.0 {
        shift += z.ln();
        z += 1.0;
    }
    // B_{2k} / (2k (2k-1)) for k = 1..=8
    let coeffs = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let zinv2 = 1.0 / (z * z);
    let mut series = 0.0;
    let mut zp = 1.0 / z;
    for c in coeffs {
        series += c * zp;
        zp *= zinv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_2PI + series - shift
}

/// Standard normal CDF by quadrature of the density from 0 to z.
pub fn normal_cdf(z: f64) -> f64 {
    let density = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    if z >= 0.0 {
        0.5 + adaptive_simpson(&density, 0.0, z, 1e-14)
    } else {
        0.5 - adaptive_simpson(&density, 0.0, -z, 1e-14)
    }
}

/// Student-t CDF by quadrature of the density from 0 to t.
pub fn student_t_cdf(t: f64, df: f64) -> f64 {
    assert!(df > 0.0);
    let ln_c =
        ln_gamma(0.5 * (df + 1.0)) - ln_gamma(0.5 * df) - 0.5 * (df * std::f64::consts::PI).ln();
    let density = |u: f64| (ln_c - 0.5 * (df + 1.0) * (1.0 + u * u / df).ln()).exp();
    if t >= 0.0 {
        0.5 + adaptive_simpson(&density, 0.0, t, 1e-14)
    } else {
        0.5 - adaptive_simpson(&density, 0.0, -t, 1e-14)
    }
}

/// Chi-squared CDF: quadrature of the gamma density with the substitution
/// x = u^2, which removes the origin singularity for df ≥ 1.
pub fn chi_squared_cdf(x: f64, df: f64) -> f64 {
    assert!(x >= 0.0 && df > 0.0);
    reg_inc_gamma_p(0.5 * df, 0.5 * x)
}

/// Regularized lower incomplete gamma P(a, x) by quadrature (log-space
/// integrand, substitution t = u^2; needs a ≥ 1/2).
pub fn reg_inc_gamma_p(a: f64, x: f64) -> f64 {
    assert!(a >= 0.5, "quadrature oracle needs a >= 1/2, got {a}");
    assert!(x >= 0.0);
    if x == 0.0 {
        return 0.0;
    }
    let ln_norm = ln_gamma(a);
    let integrand = |u: f64| {
        if u == 0.0 {
            if 2.0 * a - 1.0 > 0.0 {
                return 0.0;
            }
            // a = 1/2 exactly: integrand -> 2/Γ(a)·e^0
            return (std::f64::consts::LN_2 - ln_norm).exp();
        }
        (std::f64::consts::LN_2 + (2.0 * a - 1.0) * u.ln() - u * u - ln_norm).exp()
    };
    let hi = x.sqrt();
    let p = adaptive_simpson(&integrand, 0.0, hi, 1e-14);
    p.clamp(0.0, 1.0)
}

/// Regularized incomplete beta I_x(a, b) by quadrature with the substitution
/// t = sin²θ, which removes both endpoint singularities for a, b ≥ 1/2.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x));
    assert!(a >= 0.5 && b >= 0.5, "quadrature oracle needs a, b >= 1/2");
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_norm = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    let integrand = |theta: f64| {
        let s = theta.sin();
        let c = theta.cos();
        if s <= 0.0 || c <= 0.0 {
            return 0.0;
        }
        (std::f64::consts::LN_2 + (2.0 * a - 1.0) * s.ln() + (2.0 * b - 1.0) * c.ln() - ln_norm)
            .exp()
    };
    let hi = x.sqrt().asin();
    adaptive_simpson(&integrand, 0.0, hi, 1e-14).clamp(0.0, 1.0)
}

/// F distribution CDF by quadrature of the density (substitution x = u²,
/// smooth for d1 ≥ 1).
pub fn f_cdf(x: f64, d1: f64, d2: f64) -> f64 {
    assert!(x >= 0.0 && d1 >= 1.0 && d2 > 0.0);
    if x == 0.0 {
        return 0.0;
    }
    let ln_norm = ln_gamma(0.5 * (d1 + d2)) - ln_gamma(0.5 * d1) - ln_gamma(0.5 * d2)
        + 0.5 * d1 * (d1 / d2).ln();
    let integrand = |u: f64| {
        if u == 0.0 {
            if d1 > 1.0 {
                return 0.0;
            }
            return (std::f64::consts::LN_2 + ln_norm).exp();
        }
        (std::f64::consts::LN_2 + ln_norm + (d1 - 1.0) * u.ln()
            - 0.5 * (d1 + d2) * (1.0 + d1 * u * u / d2).ln())
        .exp()
    };
    adaptive_simpson(&integrand, 0.0, x.sqrt(), 1e-14).clamp(0.0, 1.0)
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &mut [f64], cdf: F) -> f64 {
    assert!(!sample.is_empty());
    sample.sort_by(|a, b| a.total_cmp(b));
    let n = sample.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sample.iter().enumerate() {
        let fx = cdf(x);
        d = d.max(fx - i as f64 / n).max((i + 1) as f64 / n - fx);
    }
    d
}

/// Sample mean.
pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Pearson correlation of two equally long samples.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// OLS by explicit normal equations: returns (beta, rss, se).
///
/// `cols` are the design columns including the intercept column. Solves
/// (XᵀX)β = Xᵀy with Gauss-Jordan elimination and full matrix inverse —
/// a different route than the library's QR path.
pub fn ols_normal_equations(cols: &[Vec<f64>], y: &[f64]) -> (Vec<f64>, f64, Vec<f64>) {
    let p = cols.len();
    let n = y.len();
    assert!(p > 0 && n > p);
    for c in cols {
        assert_eq!(c.len(), n);
    }
    // XᵀX and Xᵀy
    let mut xtx = vec![vec![0.0; p]; p];
    let mut xty = vec![0.0; p];
    for i in 0..p {
        for j in 0..p {
            xtx[i][j] = cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum();
        }
        xty[i] = cols[i].iter().zip(y).map(|(a, b)| a * b).sum();
    }
    let inv = invert(&xtx);
    let beta: Vec<f64> = (0..p)
        .map(|i| (0..p).map(|j| inv[i][j] * xty[j]).sum())
        .collect();
    let mut rss = 0.0;
    for t in 0..n {
        let fit: f64 = (0..p).map(|j| beta[j] * cols[j][t]).sum();
        rss += (y[t] - fit) * (y[t] - fit);
    }
    let sigma2 = rss / (n - p) as f64;
    let se: Vec<f64> = (0..p).map(|j| (sigma2 * inv[j][j]).sqrt()).collect();
    (beta, rss, se)
}

fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let p = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..p).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..p {
        let pivot_row = (col..p)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot_row);
        let pivot = a[col][col];
        assert!(pivot.abs() > 1e-12, "singular matrix in oracle inverse");
        for v in a[col].iter_mut() {
            *v /= pivot;
        }
        for row in 0..p {
            if row != col {
                let factor = a[row][col];
                let pivot_row = a[col].clone();
                for (v, pv) in a[row].iter_mut().zip(&pivot_row) {
                    *v -= factor * pv;
                }
            }
        }
    }
    a.into_iter().map(|row| row[p..].to_vec()).collect()
}
