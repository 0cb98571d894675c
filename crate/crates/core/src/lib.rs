//! Ant nesting optimizer for continuous minimization.
//!
//! Agents ("worker ants") live in a D×N [`PopulationMatrix`]. Every
//! iteration each element draws a random walk value on `[-1, 1)` and moves
//! by one of three rules (see [`movement`]); an agent adopts its candidate
//! position only if its fitness strictly improves, and remembers the
//! position it left.
//!
//! Two backends execute the same iteration schedule:
//!
//! * [`ScalarBackend`] walks agents and elements one at a time;
//! * [`VectorBackend`] works on whole matrices with branch masks and
//!   evaluates all agents together.
//!
//! Both consume one [`RngStream`] in the same agent-major order, so for a
//! given seed they produce bit-identical trajectories. The [`harness`]
//! checks that, aggregates repeated trials, and times the two backends.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! unsuffixed aliases below fix it to `f64`.
//!
//! ```
//! use ana_core::{Config, backend};
//!
//! let config = Config::new("sphere").with_iterations(50).with_seed(7);
//! let scalar = backend::scalar::run(&config).unwrap();
//! let vector = backend::vector::run(&config).unwrap();
//! assert_eq!(scalar.trace, vector.trace);
//! assert!(scalar.is_monotone());
//! ```

pub mod backend;
pub mod config;
pub mod error;
pub mod functions;
pub mod harness;
pub mod movement;
pub mod population;
pub mod real;
pub mod rng;

pub use backend::{
    run_backend, run_observed, run_with, Backend, BackendKind, MaskFault, RunResult, RunState,
    ScalarBackend, StepOutcome, TraceEntry, VectorBackend,
};
pub use config::{Bounds, ConditionScope, RunConfig};
pub use error::{AnaError, Result};
pub use functions::{cost_amplify, lookup, BaseFunction, FunctionSpec};
pub use population::{clamp_to_bounds, init_population, BestAnt, FitnessVector, PopulationMatrix};
pub use real::Real;
pub use rng::RngStream;

pub type Population = PopulationMatrix<f64>;
pub type Fitness = FitnessVector<f64>;
pub type Best = BestAnt<f64>;
pub type Config = RunConfig<f64>;
pub type State = RunState<f64>;
pub type Outcome = RunResult<f64>;
pub type Function = FunctionSpec<f64>;
pub type Stats = harness::TrialStats<f64>;

pub type Population32 = PopulationMatrix<f32>;
pub type Config32 = RunConfig<f32>;
pub type State32 = RunState<f32>;
pub type Outcome32 = RunResult<f32>;
pub type Function32 = FunctionSpec<f32>;
