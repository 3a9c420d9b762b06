//! Deterministic parallel replication runner.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sampler::RngStream;

/// Run `reps` independent replications of `task` and sum their boolean
/// outcome vectors into rejection counts.
///
/// Replication r executes on the stream `RngStream::new(seed, r)`, so the
/// aggregate is a plain commutative sum: identical for 1 worker or many and
/// for any execution order. Task errors are reported with the replication
/// index attached.
pub fn run_replications<F>(reps: u64, seed: u64, workers: usize, task: F) -> Result<Vec<u64>>
where
    F: Fn(u64, &mut RngStream) -> Result<Vec<bool>> + Sync,
{
    if reps == 0 {
        return Err(Error::config("replication count must be at least 1"));
    }
    let run_one = |r: u64| -> Result<Vec<u64>> {
        let mut rng = RngStream::new(seed, r);
        let outcomes = task(r, &mut rng).map_err(|e| Error::Replication {
            index: r,
            source: Box::new(e),
        })?;
        Ok(outcomes.into_iter().map(u64::from).collect())
    };

    if workers <= 1 {
        let mut total: Vec<u64> = Vec::new();
        for r in 0..reps {
            total = merge(total, run_one(r)?)?;
        }
        return Ok(total);
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::config(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map(run_one)
            .try_reduce(Vec::new, merge)
    })
}

// Vector addition with the empty vector as identity, so the reduction is
// associative and commutative regardless of how rayon splits the range.
fn merge(a: Vec<u64>, b: Vec<u64>) -> Result<Vec<u64>> {
    if a.is_empty() {
        return Ok(b);
    }
    if b.is_empty() {
        return Ok(a);
    }
    if a.len() != b.len() {
        return Err(Error::config(format!(
            "replication outcome length changed: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect())
}
