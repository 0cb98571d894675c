//! Reference backend: one agent at a time, one element at a time.

use crate::config::{ConditionScope, RunConfig};
use crate::error::Result;
use crate::functions::FunctionSpec;
use crate::movement::{
    delta_best, delta_general, delta_previous, deposition_weight, tendency, Branch,
};
use crate::population::{argmin, init_population, BestAnt, FitnessVector, PopulationMatrix};
use crate::real::Real;
use crate::rng::RngStream;

use super::{Backend, BackendKind, RunResult, RunState, StepOutcome};

#[derive(Debug, Clone, Copy, Default)]
pub struct ScalarBackend;

impl ScalarBackend {
    /// Movement rule for element `(dim, agent)` under `scope`.
    pub fn branch<T: Real>(
        state: &RunState<T>,
        best_position: &[T],
        scope: ConditionScope,
        dim: usize,
        agent: usize,
    ) -> Branch {
        let pop = &state.population;
        let prev = &state.previous;
        match scope {
            ConditionScope::Element => {
                let x = pop.get(dim, agent);
                Branch::select(x == best_position[dim], x == prev.get(dim, agent))
            }
            ConditionScope::Agent => {
                let d = pop.dimension();
                let equals_best = (0..d).all(|k| pop.get(k, agent) == best_position[k]);
                let equals_prev = (0..d).all(|k| pop.get(k, agent) == prev.get(k, agent));
                Branch::select(equals_best, equals_prev)
            }
        }
    }
}

impl<T: Real> Backend<T> for ScalarBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Scalar
    }

    fn init_state(
        &self,
        config: &RunConfig<T>,
        spec: &FunctionSpec<T>,
        stream: &mut RngStream,
    ) -> Result<RunState<T>> {
        let population = init_population(config, stream)?;
        let mut column = vec![T::zero(); population.dimension()];
        let mut values = Vec::with_capacity(population.agents());
        for a in 0..population.agents() {
            population.copy_column_into(a, &mut column);
            values.push(spec.evaluate(&column)?);
        }
        Ok(RunState::from_initial(
            population,
            FitnessVector::new(values),
        ))
    }

    fn step(
        &self,
        state: &mut RunState<T>,
        config: &RunConfig<T>,
        spec: &FunctionSpec<T>,
        stream: &mut RngStream,
    ) -> StepOutcome<T> {
        let (d, n) = state.population.shape();
        let bounds = config.bounds;

        let best_index = argmin(state.fitness.as_slice());
        let best_fit = state.fitness.get(best_index);
        let best_position = state.population.column_vec(best_index);

        // r[a * d + k]: agent-major, dimension-minor.
        let (lo, hi) = (-T::one(), T::one());
        let walk: Vec<T> = (0..d * n).map(|_| stream.uniform_in(lo, hi)).collect();

        let mut candidate = PopulationMatrix::zeros(d, n);
        for a in 0..n {
            let fit = state.fitness.get(a);
            let prev_fit = state.previous_fitness.get(a);
            let agent_branch = match config.condition_scope {
                ConditionScope::Agent => Some(Self::branch(
                    state,
                    &best_position,
                    ConditionScope::Agent,
                    0,
                    a,
                )),
                ConditionScope::Element => None,
            };
            for k in 0..d {
                let r = walk[a * d + k];
                let x = state.population.get(k, a);
                let xb = best_position[k];
                let branch = agent_branch.unwrap_or_else(|| {
                    Self::branch(state, &best_position, ConditionScope::Element, k, a)
                });
                let delta = match branch {
                    Branch::Best => delta_best(r, x),
                    Branch::Previous => delta_previous(r, xb, x),
                    Branch::General => {
                        let t = tendency(xb, x, best_fit, fit);
                        let t_prev = tendency(xb, state.previous.get(k, a), best_fit, prev_fit);
                        delta_general(deposition_weight(r, t, t_prev), xb, x)
                    }
                };
                candidate.set(k, a, bounds.clamp(x + delta));
            }
        }

        let mut column = vec![T::zero(); d];
        let mut candidate_values = Vec::with_capacity(n);
        for a in 0..n {
            candidate.copy_column_into(a, &mut column);
            candidate_values.push(spec.evaluate_unchecked(&column));
        }

        let mut accepted = vec![false; n];
        for a in 0..n {
            let new_fit = candidate_values[a];
            if new_fit < state.fitness.get(a) {
                accepted[a] = true;
                for k in 0..d {
                    state.previous.set(k, a, state.population.get(k, a));
                    state.population.set(k, a, candidate.get(k, a));
                }
                state.previous_fitness.set(a, state.fitness.get(a));
                state.fitness.set(a, new_fit);
            }
        }

        state.best = BestAnt::extract(&state.population, &state.fitness);
        state.iteration += 1;

        StepOutcome {
            candidate,
            candidate_fitness: FitnessVector::new(candidate_values),
            accepted,
        }
    }
}

/// Runs `config` on the scalar backend.
pub fn run<T: Real>(config: &RunConfig<T>) -> Result<RunResult<T>> {
    super::run_with(&ScalarBackend, config)
}
