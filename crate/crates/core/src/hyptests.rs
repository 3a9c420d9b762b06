//! Scalar hypothesis tests (proportion z, chi-squared goodness of fit) and
//! the multiplicity analytics (exact max-statistic size, Bonferroni bound).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::dist::{normal_cdf, DegreesOfFreedom};
use crate::error::{Error, Result};

/// Outcome of a single hypothesis test at level `alpha`.
///
/// `reject` follows the test's declared sidedness: two-tailed for the
/// proportion tests, upper-tailed for chi-squared. A test at the degenerate
/// level alpha = 1 always rejects.
#[derive(Debug, Clone, Copy)]
pub struct TestResult {
    pub statistic: f64,
    pub df: Option<DegreesOfFreedom>,
    pub p_one_tailed: f64,
    /// Two-tailed p-value; absent for inherently one-sided tests.
    pub p_two_tailed: Option<f64>,
    pub alpha: f64,
    pub reject: bool,
}

fn validate_level(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "significance level must lie in (0, 1], got {alpha}"
        )))
    }
}

fn decide(p: f64, alpha: f64) -> bool {
    p < alpha || alpha >= 1.0
}

/// z test for a binomial proportion against p0, no continuity correction.
///
/// The decision is two-tailed; the one-tailed p-value (the tail in the
/// observed direction) is reported alongside because that is what a
/// direction-committed reading of the statistic produces.
pub fn proportion_z_test(count: u64, n: u64, p0: f64, alpha: f64) -> Result<TestResult> {
    if n == 0 {
        return Err(Error::domain("proportion test requires n > 0"));
    }
    if count > n {
        return Err(Error::domain(format!(
            "count {count} exceeds sample size {n}"
        )));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(Error::domain(format!(
            "null proportion must lie in (0, 1), got {p0}"
        )));
    }
    validate_level(alpha)?;
    let n_f = n as f64;
    let p_hat = count as f64 / n_f;
    let statistic = n_f.sqrt() * (p_hat - p0) / (p0 * (1.0 - p0)).sqrt();
    let p_one = normal_cdf(-statistic.abs());
    let p_two = (2.0 * p_one).min(1.0);
    Ok(TestResult {
        statistic,
        df: None,
        p_one_tailed: p_one,
        p_two_tailed: Some(p_two),
        alpha,
        reject: decide(p_two, alpha),
    })
}

/// Pearson chi-squared goodness-of-fit test of observed counts against cell
/// probabilities; upper-tailed with m − 1 degrees of freedom.
pub fn chi_squared_gof(counts: &[u64], probs: &[f64], alpha: f64) -> Result<TestResult> {
    if counts.len() != probs.len() {
        return Err(Error::domain(format!(
            "got {} counts but {} probabilities",
            counts.len(),
            probs.len()
        )));
    }
    if counts.len() < 2 {
        return Err(Error::domain("goodness of fit needs at least two cells"));
    }
    if probs.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::domain("all cell probabilities must be positive"));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "cell probabilities sum to {total}, expected 1"
        )));
    }
    validate_level(alpha)?;
    let n: u64 = counts.iter().sum();
    if n == 0 {
        return Err(Error::domain("total count must be positive"));
    }
    let n_f = n as f64;
    let statistic: f64 = counts
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let expected = n_f * p;
            let d = o as f64 - expected;
            d * d / expected
        })
        .sum();
    let df = DegreesOfFreedom::new((counts.len() - 1) as f64)?;
    let p_upper = crate::dist::chi_squared_sf(statistic, df);
    Ok(TestResult {
        statistic,
        df: Some(df),
        p_one_tailed: p_upper,
        p_two_tailed: None,
        alpha,
        reject: decide(p_upper, alpha),
    })
}

/// Named subset of {1, …, 100} with its theoretical probability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSet {
    name: String,
    members: BTreeSet<u8>,
}

impl EventSet {
    pub fn new(name: impl Into<String>, members: impl IntoIterator<Item = u8>) -> Result<Self> {
        let name = name.into();
        let members: BTreeSet<u8> = members.into_iter().collect();
        if members.is_empty() {
            return Err(Error::domain(format!("event {name} has no members")));
        }
        if let Some(&bad) = members.iter().find(|&&m| !(1..=100).contains(&m)) {
            return Err(Error::domain(format!(
                "event {name}: member {bad} outside [1, 100]"
            )));
        }
        Ok(EventSet { name, members })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn members(&self) -> &BTreeSet<u8> {
        &self.members
    }

    /// |members| / 100, exact by construction.
    pub fn prob(&self) -> f64 {
        self.members.len() as f64 / 100.0
    }

    pub fn contains(&self, value: i64) -> bool {
        u8::try_from(value)
            .map(|v| self.members.contains(&v))
            .unwrap_or(false)
    }

    /// Membership count from a 100-cell histogram of draws (cell i holds the
    /// count of value i + 1).
    pub fn count_in_histogram(&self, hist: &[u64; 100]) -> u64 {
        self.members.iter().map(|&m| hist[m as usize - 1]).sum()
    }
}

/// Tests the empirical frequency of an event among draws from {1, …, 100}
/// against its theoretical probability, two-tailed.
pub fn event_frequency_test(draws: &[i64], event: &EventSet, alpha: f64) -> Result<TestResult> {
    if draws.is_empty() {
        return Err(Error::domain("event test requires at least one draw"));
    }
    if let Some(&bad) = draws.iter().find(|&&d| !(1..=100).contains(&d)) {
        return Err(Error::domain(format!(
            "draw {bad} outside [1, 100] in event test"
        )));
    }
    let count = draws.iter().filter(|&&d| event.contains(d)).count() as u64;
    proportion_z_test(count, draws.len() as u64, event.prob(), alpha)
}

/// Exact familywise size of the max-|statistic| rule over k independent
/// level-α tests: 1 − (1 − α)^k.
pub fn sidak_size(alpha: f64, k: u32) -> Result<f64> {
    validate_level(alpha)?;
    if k == 0 {
        return Err(Error::domain("sidak_size requires k >= 1"));
    }
    if k == 1 {
        return Ok(alpha);
    }
    Ok(1.0 - (1.0 - alpha).powi(k as i32))
}

/// First-order familywise bound min(1, k·α).
pub fn bonferroni_bound(alpha: f64, k: u32) -> Result<f64> {
    validate_level(alpha)?;
    if k == 0 {
        return Err(Error::domain("bonferroni_bound requires k >= 1"));
    }
    Ok((k as f64 * alpha).min(1.0))
}

/// The five named event sets of the built-in battery: repdigits, powers of
/// two, powers of three, Fibonacci numbers and primes, all within [1, 100].
pub fn builtin_battery() -> Vec<EventSet> {
    let repdigits = (1..=9).map(|d| 11 * d);
    let powers_of_2 = [2u8, 4, 8, 16, 32, 64];
    let powers_of_3 = [3u8, 9, 27, 81];
    let fibonacci = [2u8, 3, 5, 8, 13, 21, 34, 55, 89];
    let primes = [
        2u8, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83,
        89, 97,
    ];
    vec![
        EventSet::new("repdigits", repdigits).expect("valid builtin"),
        EventSet::new("powers_of_2", powers_of_2).expect("valid builtin"),
        EventSet::new("powers_of_3", powers_of_3).expect("valid builtin"),
        EventSet::new("fibonacci", fibonacci).expect("valid builtin"),
        EventSet::new("primes", primes).expect("valid builtin"),
    ]
}

/// Parse an event battery from plain text: one event per line in the form
/// `name: i1,i2,...`; blank lines and `#` comments are skipped.
pub fn parse_event_file(text: &str) -> Result<Vec<EventSet>> {
    let mut events = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (name, rest) = line.split_once(':').ok_or_else(|| {
            Error::config(format!(
                "events file line {}: expected `name: i1,i2,...`",
                lineno + 1
            ))
        })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::config(format!(
                "events file line {}: empty event name",
                lineno + 1
            )));
        }
        let mut members = Vec::new();
        for tok in rest.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let v: u8 = tok.parse().map_err(|_| {
                Error::config(format!(
                    "events file line {}: `{tok}` is not an integer in [1, 100]",
                    lineno + 1
                ))
            })?;
            members.push(v);
        }
        events.push(
            EventSet::new(name, members)
                .map_err(|e| Error::config(format!("events file line {}: {e}", lineno + 1)))?,
        );
    }
    if events.is_empty() {
        return Err(Error::config("events file defines no events"));
    }
    Ok(events)
}
