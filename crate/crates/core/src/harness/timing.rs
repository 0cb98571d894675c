use crate::backend::{run_with, Backend, ScalarBackend, VectorBackend};
use crate::config::RunConfig;
use crate::error::{AnaError, Result};
use crate::real::Real;

use super::equivalence::{equivalence_check, Divergence};

/// Wall-clock comparison of the two backends on one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub function_id: String,
    pub seed: u64,
    pub warmups: usize,
    pub reps: usize,
    /// Median seconds per run.
    pub scalar_seconds: f64,
    pub vector_seconds: f64,
    /// `scalar_seconds / vector_seconds`.
    pub speedup: f64,
    /// Whether the backends produced bit-identical trajectories at `seed`.
    pub equivalent: bool,
    pub divergence: Option<Divergence>,
}

/// Median of a non-empty sample; even lengths average the middle pair.
pub fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    }
}

/// Median run time in seconds of `first` and `second`, discarding `warmups`
/// runs of each. Repetitions alternate between the two so drift in machine
/// load hits both equally.
pub fn time_backends<T, A, B>(
    config: &RunConfig<T>,
    first: &A,
    second: &B,
    warmups: usize,
    reps: usize,
) -> Result<(f64, f64)>
where
    T: Real,
    A: Backend<T> + ?Sized,
    B: Backend<T> + ?Sized,
{
    if reps == 0 {
        return Err(AnaError::InvalidConfig("reps must be at least 1".into()));
    }
    for _ in 0..warmups {
        run_with(first, config)?;
        run_with(second, config)?;
    }
    let mut first_times = Vec::with_capacity(reps);
    let mut second_times = Vec::with_capacity(reps);
    for _ in 0..reps {
        first_times.push(run_with(first, config)?.elapsed_seconds());
        second_times.push(run_with(second, config)?.elapsed_seconds());
    }
    Ok((median(&first_times), median(&second_times)))
}

/// Checks equivalence at `config.seed`, then times both backends.
pub fn compare<T: Real>(
    config: &RunConfig<T>,
    warmups: usize,
    reps: usize,
) -> Result<ComparisonReport> {
    let equivalence = equivalence_check(config)?;
    let (scalar_seconds, vector_seconds) =
        time_backends(config, &ScalarBackend, &VectorBackend::new(), warmups, reps)?;
    Ok(ComparisonReport {
        function_id: config.function_id.clone(),
        seed: config.seed,
        warmups,
        reps,
        scalar_seconds,
        vector_seconds,
        speedup: scalar_seconds / vector_seconds,
        equivalent: equivalence.passed(),
        divergence: equivalence.divergence,
    })
}
