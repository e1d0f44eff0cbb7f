//! Parallel driver for the prediction comparison.

use bestpath_core::compare::{plan, run_split, summarize, CompareConfig, Comparison};
use bestpath_core::{Dataset, Result};
use rayon::prelude::*;

/// Runs every split on the current rayon pool. The result does not depend
/// on the number of workers.
pub fn compare_parallel(ds: &Dataset, target: &str, cfg: &CompareConfig) -> Result<Comparison> {
    let plan = plan(ds, target, cfg)?;
    let fixed = plan.fixed_variables.as_deref();
    let results: Vec<_> = plan
        .splits
        .par_iter()
        .map(|s| (s.index, run_split(ds, target, cfg, fixed, s)))
        .collect();
    Ok(summarize(results))
}

/// Runs `f` on a pool of `threads` workers, or on the global pool when
/// `threads` is `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
