//! Execution backends and the run driver they share.
//!
//! A backend owns only the per-iteration arithmetic. Seeding, the iteration
//! loop, tracing and timing live in [`run_observed`] so both backends are
//! driven identically.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::config::RunConfig;
use crate::error::Result;
use crate::functions::{lookup, FunctionSpec};
use crate::population::{BestAnt, FitnessVector, PopulationMatrix};
use crate::real::Real;
use crate::rng::RngStream;

pub mod scalar;
pub mod vector;

pub use scalar::ScalarBackend;
pub use vector::{MaskFault, VectorBackend};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BackendKind {
    Scalar,
    #[default]
    Vector,
}

impl BackendKind {
    pub const ALL: [BackendKind; 2] = [BackendKind::Scalar, BackendKind::Vector];

    pub fn as_str(self) -> &'static str {
        match self {
            BackendKind::Scalar => "scalar",
            BackendKind::Vector => "vector",
        }
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "scalar" => Ok(BackendKind::Scalar),
            "vector" => Ok(BackendKind::Vector),
            other => Err(format!(
                "unknown backend `{other}` (expected scalar|vector)"
            )),
        }
    }
}

/// Mutable loop state of one run.
///
/// `fitness` and `previous_fitness` are caches of the objective at
/// `population` and `previous`; backends keep them coherent instead of
/// re-evaluating.
#[derive(Debug, Clone, PartialEq)]
pub struct RunState<T> {
    pub population: PopulationMatrix<T>,
    pub previous: PopulationMatrix<T>,
    pub fitness: FitnessVector<T>,
    pub previous_fitness: FitnessVector<T>,
    pub best: BestAnt<T>,
    pub iteration: usize,
}

impl<T: Real> RunState<T> {
    /// Fresh state whose previous population is an exact copy of `population`.
    pub fn from_initial(population: PopulationMatrix<T>, fitness: FitnessVector<T>) -> Self {
        let best = BestAnt::extract(&population, &fitness);
        Self {
            previous: population.clone(),
            previous_fitness: fitness.clone(),
            population,
            fitness,
            best,
            iteration: 0,
        }
    }
}

/// What one iteration proposed and decided, for tracing and equivalence.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome<T> {
    /// Clamped candidate positions.
    pub candidate: PopulationMatrix<T>,
    pub candidate_fitness: FitnessVector<T>,
    /// Per-agent acceptance (`candidate_fitness < fitness`).
    pub accepted: Vec<bool>,
}

pub trait Backend<T: Real> {
    fn kind(&self) -> BackendKind;

    /// Draws the initial population and evaluates it.
    fn init_state(
        &self,
        config: &RunConfig<T>,
        spec: &FunctionSpec<T>,
        stream: &mut RngStream,
    ) -> Result<RunState<T>>;

    /// Advances `state` by one iteration, consuming exactly D·N draws.
    fn step(
        &self,
        state: &mut RunState<T>,
        config: &RunConfig<T>,
        spec: &FunctionSpec<T>,
        stream: &mut RngStream,
    ) -> StepOutcome<T>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry<T> {
    /// 1-based iteration the entry was recorded after.
    pub iteration: usize,
    pub best_fitness: T,
    pub best_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult<T> {
    pub trace: Vec<TraceEntry<T>>,
    pub final_best: T,
    pub final_best_index: usize,
    pub final_best_position: Vec<T>,
    /// Wall time of initialization plus all iterations; at least 1.
    pub elapsed_ns: u64,
    pub backend: BackendKind,
    pub config: RunConfig<T>,
}

impl<T: Real> RunResult<T> {
    pub fn elapsed_seconds(&self) -> f64 {
        self.elapsed_ns as f64 * 1e-9
    }

    /// True when best fitness never increases along the trace.
    pub fn is_monotone(&self) -> bool {
        self.trace
            .windows(2)
            .all(|w| w[1].best_fitness <= w[0].best_fitness)
    }
}

/// The configured function at the configured dimension.
pub fn resolve_function<T: Real>(config: &RunConfig<T>) -> Result<FunctionSpec<T>> {
    Ok(lookup::<T>(&config.function_id)?.with_dimension(config.dimension))
}

pub fn run_with<T: Real, B: Backend<T> + ?Sized>(
    backend: &B,
    config: &RunConfig<T>,
) -> Result<RunResult<T>> {
    run_observed(backend, config, |_| {})
}

/// Runs `config.iterations` steps from a stream seeded with `config.seed`,
/// calling `observer` with the state after every step.
pub fn run_observed<T: Real, B: Backend<T> + ?Sized>(
    backend: &B,
    config: &RunConfig<T>,
    mut observer: impl FnMut(&RunState<T>),
) -> Result<RunResult<T>> {
    config.validate()?;
    let spec = resolve_function(config)?;
    let mut stream = RngStream::new(config.seed);
    let mut trace = Vec::with_capacity(config.iterations);

    let start = Instant::now();
    let mut state = backend.init_state(config, &spec, &mut stream)?;
    for _ in 0..config.iterations {
        backend.step(&mut state, config, &spec, &mut stream);
        trace.push(TraceEntry {
            iteration: state.iteration,
            best_fitness: state.best.fitness,
            best_index: state.best.index,
        });
        observer(&state);
    }
    let elapsed_ns = (start.elapsed().as_nanos() as u64).max(1);

    Ok(RunResult {
        trace,
        final_best: state.best.fitness,
        final_best_index: state.best.index,
        final_best_position: state.best.position.to_vec(),
        elapsed_ns,
        backend: backend.kind(),
        config: config.clone(),
    })
}

/// Runs `config` on the backend named by `kind`.
pub fn run_backend<T: Real>(kind: BackendKind, config: &RunConfig<T>) -> Result<RunResult<T>> {
    match kind {
        BackendKind::Scalar => run_with(&ScalarBackend, config),
        BackendKind::Vector => run_with(&VectorBackend::new(), config),
    }
}
