use std::fmt;

use crate::backend::{
    resolve_function, Backend, BackendKind, RunState, ScalarBackend, StepOutcome, VectorBackend,
};
use crate::config::{ConditionScope, RunConfig};
use crate::error::Result;
use crate::population::{FitnessVector, PopulationMatrix};
use crate::real::{bit_eq, Real};
use crate::rng::RngStream;

/// State component compared between backends, in comparison order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateField {
    DrawCount,
    Candidate,
    CandidateFitness,
    Accepted,
    Population,
    Previous,
    Fitness,
    PreviousFitness,
    BestIndex,
}

impl StateField {
    pub fn as_str(self) -> &'static str {
        match self {
            StateField::DrawCount => "draw_count",
            StateField::Candidate => "candidate",
            StateField::CandidateFitness => "candidate_fitness",
            StateField::Accepted => "accepted",
            StateField::Population => "population",
            StateField::Previous => "previous",
            StateField::Fitness => "fitness",
            StateField::PreviousFitness => "previous_fitness",
            StateField::BestIndex => "best_index",
        }
    }
}

impl fmt::Display for StateField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// First place two backends disagree. `iteration` 0 is the initial state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divergence {
    pub iteration: usize,
    pub field: StateField,
    pub dim: Option<usize>,
    pub agent: Option<usize>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iteration {} field {}", self.iteration, self.field)?;
        if let Some(d) = self.dim {
            write!(f, " dim {d}")?;
        }
        if let Some(a) = self.agent {
            write!(f, " agent {a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub function_id: String,
    pub seed: u64,
    pub scope: ConditionScope,
    pub left: BackendKind,
    pub right: BackendKind,
    /// Iterations compared, not counting the initial state.
    pub iterations_checked: usize,
    pub divergence: Option<Divergence>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Scalar against vector at the configured seed.
pub fn equivalence_check<T: Real>(config: &RunConfig<T>) -> Result<EquivalenceReport> {
    check_backends(config, &ScalarBackend, &VectorBackend::new())
}

/// Steps both backends in lockstep from identical streams and stops at the
/// first bit-level difference in any state component.
pub fn check_backends<T, L, R>(
    config: &RunConfig<T>,
    left: &L,
    right: &R,
) -> Result<EquivalenceReport>
where
    T: Real,
    L: Backend<T> + ?Sized,
    R: Backend<T> + ?Sized,
{
    config.validate()?;
    let spec = resolve_function(config)?;
    let mut left_stream = RngStream::new(config.seed);
    let mut right_stream = RngStream::new(config.seed);
    let mut left_state = left.init_state(config, &spec, &mut left_stream)?;
    let mut right_state = right.init_state(config, &spec, &mut right_stream)?;

    let mut report = EquivalenceReport {
        function_id: config.function_id.clone(),
        seed: config.seed,
        scope: config.condition_scope,
        left: left.kind(),
        right: right.kind(),
        iterations_checked: 0,
        divergence: None,
    };

    report.divergence = compare_streams(0, &left_stream, &right_stream)
        .or_else(|| compare_states(0, &left_state, &right_state));
    if report.divergence.is_some() {
        return Ok(report);
    }

    for iteration in 1..=config.iterations {
        let left_out = left.step(&mut left_state, config, &spec, &mut left_stream);
        let right_out = right.step(&mut right_state, config, &spec, &mut right_stream);
        report.iterations_checked = iteration;
        report.divergence = compare_streams(iteration, &left_stream, &right_stream)
            .or_else(|| compare_outcomes(iteration, &left_out, &right_out))
            .or_else(|| compare_states(iteration, &left_state, &right_state));
        if report.divergence.is_some() {
            break;
        }
    }
    Ok(report)
}

fn compare_streams(iteration: usize, left: &RngStream, right: &RngStream) -> Option<Divergence> {
    (left != right).then_some(Divergence {
        iteration,
        field: StateField::DrawCount,
        dim: None,
        agent: None,
    })
}

fn compare_outcomes<T: Real>(
    iteration: usize,
    left: &StepOutcome<T>,
    right: &StepOutcome<T>,
) -> Option<Divergence> {
    compare_matrix(
        iteration,
        StateField::Candidate,
        &left.candidate,
        &right.candidate,
    )
    .or_else(|| {
        compare_row(
            iteration,
            StateField::CandidateFitness,
            &left.candidate_fitness,
            &right.candidate_fitness,
        )
    })
    .or_else(|| {
        left.accepted
            .iter()
            .zip(&right.accepted)
            .position(|(a, b)| a != b)
            .map(|agent| Divergence {
                iteration,
                field: StateField::Accepted,
                dim: None,
                agent: Some(agent),
            })
    })
}

fn compare_states<T: Real>(
    iteration: usize,
    left: &RunState<T>,
    right: &RunState<T>,
) -> Option<Divergence> {
    compare_matrix(
        iteration,
        StateField::Population,
        &left.population,
        &right.population,
    )
    .or_else(|| {
        compare_matrix(
            iteration,
            StateField::Previous,
            &left.previous,
            &right.previous,
        )
    })
    .or_else(|| {
        compare_row(
            iteration,
            StateField::Fitness,
            &left.fitness,
            &right.fitness,
        )
    })
    .or_else(|| {
        compare_row(
            iteration,
            StateField::PreviousFitness,
            &left.previous_fitness,
            &right.previous_fitness,
        )
    })
    .or_else(|| {
        (left.best.index != right.best.index).then_some(Divergence {
            iteration,
            field: StateField::BestIndex,
            dim: None,
            agent: None,
        })
    })
}

/// Scans agent-major, the same order values are drawn in.
fn compare_matrix<T: Real>(
    iteration: usize,
    field: StateField,
    left: &PopulationMatrix<T>,
    right: &PopulationMatrix<T>,
) -> Option<Divergence> {
    let (d, n) = left.shape();
    if right.shape() != (d, n) {
        return Some(Divergence {
            iteration,
            field,
            dim: None,
            agent: None,
        });
    }
    (0..n)
        .flat_map(|a| (0..d).map(move |k| (k, a)))
        .find(|&(k, a)| !bit_eq(left.get(k, a), right.get(k, a)))
        .map(|(k, a)| Divergence {
            iteration,
            field,
            dim: Some(k),
            agent: Some(a),
        })
}

fn compare_row<T: Real>(
    iteration: usize,
    field: StateField,
    left: &FitnessVector<T>,
    right: &FitnessVector<T>,
) -> Option<Divergence> {
    if left.len() != right.len() {
        return Some(Divergence {
            iteration,
            field,
            dim: None,
            agent: None,
        });
    }
    left.as_slice()
        .iter()
        .zip(right.as_slice())
        .position(|(&a, &b)| !bit_eq(a, b))
        .map(|agent| Divergence {
            iteration,
            field,
            dim: None,
            agent: Some(agent),
        })
}
