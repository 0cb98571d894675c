use crate::backend::{run_backend, BackendKind, RunResult};
use crate::config::RunConfig;
use crate::error::{AnaError, Result};
use crate::real::Real;

/// Aggregate of the final best fitness over independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats<T> {
    pub function_id: String,
    pub backend: BackendKind,
    pub runs: usize,
    /// Seed of the first run; run `i` uses `base_seed + i`.
    pub base_seed: u64,
    pub mean_best: T,
    /// Sample standard deviation (n − 1 denominator); zero for one run.
    pub std_best: T,
    pub mean_seconds: f64,
}

/// Seed of run `index` in a trial starting at `base`.
pub fn trial_seed(base: u64, index: usize) -> u64 {
    base.wrapping_add(index as u64)
}

/// Mean and sample standard deviation, summing in slice order.
pub fn mean_std<T: Real>(values: &[T]) -> (T, T) {
    if values.is_empty() {
        return (T::nan(), T::nan());
    }
    let n = T::from_count(values.len());
    let mean = values.iter().fold(T::zero(), |acc, &v| acc + v) / n;
    if values.len() == 1 {
        return (mean, T::zero());
    }
    let ss = values.iter().fold(T::zero(), |acc, &v| {
        let d = v - mean;
        acc + d * d
    });
    (mean, (ss / (n - T::one())).sqrt())
}

/// Runs `runs` independent runs with seeds `config.seed + i`, in seed order.
pub fn run_trials_detailed<T: Real>(
    config: &RunConfig<T>,
    backend: BackendKind,
    runs: usize,
) -> Result<(TrialStats<T>, Vec<RunResult<T>>)> {
    if runs == 0 {
        return Err(AnaError::InvalidConfig("runs must be at least 1".into()));
    }
    let results = (0..runs)
        .map(|i| {
            let cfg = config.clone().with_seed(trial_seed(config.seed, i));
            run_backend(backend, &cfg)
        })
        .collect::<Result<Vec<_>>>()?;

    let finals: Vec<T> = results.iter().map(|r| r.final_best).collect();
    let (mean_best, std_best) = mean_std(&finals);
    let mean_seconds = results.iter().map(RunResult::elapsed_seconds).sum::<f64>() / runs as f64;
    let stats = TrialStats {
        function_id: config.function_id.clone(),
        backend,
        runs,
        base_seed: config.seed,
        mean_best,
        std_best,
        mean_seconds,
    };
    Ok((stats, results))
}

pub fn run_trials<T: Real>(
    config: &RunConfig<T>,
    backend: BackendKind,
    runs: usize,
) -> Result<TrialStats<T>> {
    run_trials_detailed(config, backend, runs).map(|(stats, _)| stats)
}

/// Trial statistics for each function on both backends, scalar row first.
pub fn bench<T: Real>(
    functions: &[String],
    base: &RunConfig<T>,
    runs: usize,
) -> Result<Vec<TrialStats<T>>> {
    let mut rows = Vec::with_capacity(functions.len() * 2);
    for function in functions {
        let mut config = base.clone();
        config.function_id = function.clone();
        for backend in BackendKind::ALL {
            rows.push(run_trials(&config, backend, runs)?);
        }
    }
    Ok(rows)
}
