//! Whole-population backend: each iteration is a handful of matrix
//! operations over the D×N population with boolean branch masks.
//!
//! Row vectors (fitness per agent) broadcast down the dimension axis and
//! the best agent's column broadcasts across the agent axis.

use ndarray::{Array2, Zip};

use crate::config::{ConditionScope, RunConfig};
use crate::error::{AnaError, Result};
use crate::functions::FunctionSpec;
use crate::movement::TENDENCY_GUARD;
use crate::population::{
    clamp_to_bounds, init_population, BestAnt, FitnessVector, PopulationMatrix,
};
use crate::real::Real;
use crate::rng::RngStream;

use super::{Backend, BackendKind, RunResult, RunState, StepOutcome};

/// D×N boolean grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskMatrix {
    data: Array2<bool>,
}

impl MaskMatrix {
    pub fn from_array(data: Array2<bool>) -> Self {
        Self { data }
    }

    pub fn get(&self, dim: usize, agent: usize) -> bool {
        self.data[(dim, agent)]
    }

    pub fn set(&mut self, dim: usize, agent: usize, value: bool) {
        self.data[(dim, agent)] = value;
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.dim()
    }

    pub fn as_array(&self) -> &Array2<bool> {
        &self.data
    }
}

/// One mask per movement rule; exactly one is set for every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchMasks {
    pub best: MaskMatrix,
    pub previous: MaskMatrix,
    pub general: MaskMatrix,
}

impl BranchMasks {
    pub fn is_partition(&self) -> bool {
        Zip::from(self.best.as_array())
            .and(self.previous.as_array())
            .and(self.general.as_array())
            .all(|&a, &b, &c| u8::from(a) + u8::from(b) + u8::from(c) == 1)
    }
}

/// Test fixture: forces one element into the wrong movement rule at one
/// iteration, so equivalence checks can prove they notice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaskFault {
    /// 1-based iteration whose masks are altered.
    pub iteration: usize,
    pub dim: usize,
    pub agent: usize,
}

impl MaskFault {
    /// Moves the element to the best-agent rule, or to the previous-position
    /// rule if it already was on the best-agent rule.
    pub fn apply(&self, masks: &mut BranchMasks) {
        let (d, a) = (self.dim, self.agent);
        let was_best = masks.best.get(d, a);
        masks.best.set(d, a, !was_best);
        masks.previous.set(d, a, was_best);
        masks.general.set(d, a, false);
    }
}

#[derive(Debug, Clone, Default)]
pub struct VectorBackend {
    fault: Option<MaskFault>,
}

impl VectorBackend {
    pub fn new() -> Self {
        Self::default()
    }

    /// A deliberately broken backend for fault-injection tests.
    pub fn with_mask_fault(fault: MaskFault) -> Self {
        Self { fault: Some(fault) }
    }
}

fn check_shape<T: Real>(expected: (usize, usize), pop: &PopulationMatrix<T>) -> Result<()> {
    if pop.shape() == expected {
        Ok(())
    } else {
        Err(AnaError::ShapeMismatch {
            expected,
            actual: pop.shape(),
        })
    }
}

// Matrices are handled as their row-major buffers: row `d` is the contiguous
// run `[d * N, (d + 1) * N)`, so a column vector broadcasts across a row as a
// scalar and an agent row broadcasts down the matrix as a slice.

fn flat<T: Real>(m: &PopulationMatrix<T>) -> &[T] {
    m.as_array()
        .as_slice()
        .expect("population matrices are row-major")
}

fn flat_mask(m: &MaskMatrix) -> &[bool] {
    m.data.as_slice().expect("masks are row-major")
}

fn from_flat<T: Real>(shape: (usize, usize), values: Vec<T>) -> PopulationMatrix<T> {
    PopulationMatrix::from_array(Array2::from_shape_vec(shape, values).expect("length is D·N"))
}

fn mask_from_flat(shape: (usize, usize), values: Vec<bool>) -> MaskMatrix {
    MaskMatrix::from_array(Array2::from_shape_vec(shape, values).expect("length is D·N"))
}

/// `f(a[i], b[i])` elementwise.
fn zip_map<A: Copy, B: Copy, V>(a: &[A], b: &[B], f: impl Fn(A, B) -> V) -> Vec<V> {
    a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
}

/// `f(column[d], m[(d, a)])`: a D-vector broadcast across agents.
fn with_column<T: Copy, V>(m: &[T], agents: usize, column: &[T], f: impl Fn(T, T) -> V) -> Vec<V> {
    let mut out = Vec::with_capacity(m.len());
    for (row, &c) in m.chunks_exact(agents).zip(column) {
        out.extend(row.iter().map(|&x| f(c, x)));
    }
    out
}

/// `f(m[(d, a)], row[a])`: an N-vector broadcast down dimensions.
fn with_row<T: Copy, V>(m: &[T], row: &[T], f: impl Fn(T, T) -> V) -> Vec<V> {
    let mut out = Vec::with_capacity(m.len());
    for m_row in m.chunks_exact(row.len()) {
        out.extend(m_row.iter().zip(row).map(|(&x, &r)| f(x, r)));
    }
    out
}

/// Draws the D×N random walk on `[-1, 1)` in agent-major order.
pub fn random_walk<T: Real>(
    stream: &mut RngStream,
    dimension: usize,
    agents: usize,
) -> PopulationMatrix<T> {
    let (lo, hi) = (-T::one(), T::one());
    let draws = (0..dimension * agents)
        .map(|_| stream.uniform_in(lo, hi))
        .collect();
    PopulationMatrix::from_agent_major(dimension, agents, draws).expect("length is D·N")
}

/// Branch masks: best-agent rule, then previous-position rule, then the rest.
pub fn build_masks<T: Real>(
    population: &PopulationMatrix<T>,
    best: &BestAnt<T>,
    previous: &PopulationMatrix<T>,
    scope: ConditionScope,
) -> Result<BranchMasks> {
    let shape = population.shape();
    check_shape(shape, previous)?;
    if best.position.len() != shape.0 {
        return Err(AnaError::ShapeMismatch {
            expected: shape,
            actual: (best.position.len(), 1),
        });
    }
    let agents = shape.1;
    let pop = flat(population);
    let prev = flat(previous);
    let best_pos = best.position.as_slice().expect("best column is contiguous");

    let (mask_a, mask_b) = match scope {
        ConditionScope::Element => {
            let a = with_column(pop, agents, best_pos, |b, x| x == b);
            let same = zip_map(pop, prev, |x, p| x == p);
            let b = zip_map(&same, &a, |s, is_a| s && !is_a);
            (a, b)
        }
        ConditionScope::Agent => {
            let mut col_a = vec![true; agents];
            let mut col_b = vec![true; agents];
            for ((x_row, p_row), &xb) in pop
                .chunks_exact(agents)
                .zip(prev.chunks_exact(agents))
                .zip(best_pos)
            {
                for (((a, b), &x), &p) in
                    col_a.iter_mut().zip(col_b.iter_mut()).zip(x_row).zip(p_row)
                {
                    *a &= x == xb;
                    *b &= x == p;
                }
            }
            for (b, &a) in col_b.iter_mut().zip(&col_a) {
                *b &= !a;
            }
            (col_a.repeat(shape.0), col_b.repeat(shape.0))
        }
    };
    let mask_c = zip_map(&mask_a, &mask_b, |a, b| !(a || b));

    Ok(BranchMasks {
        best: mask_from_flat(shape, mask_a),
        previous: mask_from_flat(shape, mask_b),
        general: mask_from_flat(shape, mask_c),
    })
}

/// Rate of change Δ for every element, starting from zeros and filling each
/// mask's elements with that rule's matrix expression.
#[allow(clippy::too_many_arguments)]
pub fn rate_of_change<T: Real>(
    population: &PopulationMatrix<T>,
    previous: &PopulationMatrix<T>,
    best: &BestAnt<T>,
    fitness: &FitnessVector<T>,
    previous_fitness: &FitnessVector<T>,
    walk: &PopulationMatrix<T>,
    masks: &BranchMasks,
) -> Result<PopulationMatrix<T>> {
    let shape = population.shape();
    check_shape(shape, previous)?;
    check_shape(shape, walk)?;
    if masks.best.shape() != shape
        || masks.previous.shape() != shape
        || masks.general.shape() != shape
        || fitness.len() != shape.1
        || previous_fitness.len() != shape.1
        || best.position.len() != shape.0
    {
        return Err(AnaError::ShapeMismatch {
            expected: shape,
            actual: (masks.best.shape().0, fitness.len()),
        });
    }
    let agents = shape.1;
    let pop = flat(population);
    let prev = flat(previous);
    let r = flat(walk);
    let best_pos = best.position.as_slice().expect("best column is contiguous");
    let best_fit = best.fitness;

    let distance = with_column(pop, agents, best_pos, |b, x| b - x);
    let distance_prev = with_column(prev, agents, best_pos, |b, p| b - p);
    let fit_gap: Vec<T> = fitness.as_slice().iter().map(|&f| best_fit - f).collect();
    let prev_fit_gap: Vec<T> = previous_fitness
        .as_slice()
        .iter()
        .map(|&f| best_fit - f)
        .collect();

    let hypot = |dx: T, df: T| (dx * dx + df * df).sqrt();
    let tendency = with_row(&distance, &fit_gap, hypot);
    let tendency_prev = with_row(&distance_prev, &prev_fit_gap, hypot);
    let guard = T::lit(TENDENCY_GUARD);
    let ratio = zip_map(&tendency, &tendency_prev, |t, tp| {
        if tp < guard {
            None
        } else {
            Some(t / tp)
        }
    });
    let weight = zip_map(r, &ratio, |r, ratio| ratio.map_or(r, |q| r * q));

    let from_best = zip_map(r, pop, |r, x| r * x);
    let from_previous = zip_map(r, &distance, |r, g| r * g);
    let general = zip_map(&weight, &distance, |w, g| w * g);

    let mut delta = vec![T::zero(); pop.len()];
    for (mask, values) in [
        (&masks.best, &from_best),
        (&masks.previous, &from_previous),
        (&masks.general, &general),
    ] {
        for ((d, &m), &v) in delta.iter_mut().zip(flat_mask(mask)).zip(values) {
            if m {
                *d = v;
            }
        }
    }
    Ok(from_flat(shape, delta))
}

impl<T: Real> Backend<T> for VectorBackend {
    fn kind(&self) -> BackendKind {
        BackendKind::Vector
    }

    fn init_state(
        &self,
        config: &RunConfig<T>,
        spec: &FunctionSpec<T>,
        stream: &mut RngStream,
    ) -> Result<RunState<T>> {
        let population = init_population(config, stream)?;
        let fitness = spec.evaluate_population(&population)?;
        Ok(RunState::from_initial(population, fitness))
    }

    fn step(
        &self,
        state: &mut RunState<T>,
        config: &RunConfig<T>,
        spec: &FunctionSpec<T>,
        stream: &mut RngStream,
    ) -> StepOutcome<T> {
        let (d, n) = state.population.shape();
        let best = BestAnt::extract(&state.population, &state.fitness);
        let walk = random_walk(stream, d, n);

        let mut masks = build_masks(
            &state.population,
            &best,
            &state.previous,
            config.condition_scope,
        )
        .expect("state matrices share a shape");
        if let Some(fault) = self.fault.filter(|f| f.iteration == state.iteration + 1) {
            fault.apply(&mut masks);
        }
        let delta = rate_of_change(
            &state.population,
            &state.previous,
            &best,
            &state.fitness,
            &state.previous_fitness,
            &walk,
            &masks,
        )
        .expect("state matrices share a shape");

        let moved = zip_map(flat(&state.population), flat(&delta), |x, dx| x + dx);
        let candidate = clamp_to_bounds(from_flat((d, n), moved), &config.bounds);
        let candidate_fitness = spec
            .evaluate_population(&candidate)
            .expect("candidate has the run dimension");

        let accept = zip_map(
            candidate_fitness.as_slice(),
            state.fitness.as_slice(),
            |c, f| c < f,
        );

        // Whole columns move or stay: the per-agent row selects in every
        // dimension row.
        let cand = flat(&candidate);
        let mut previous = state.previous.view_mut();
        let mut population = state.population.view_mut();
        let prev_rows = previous
            .as_slice_mut()
            .expect("row-major")
            .chunks_exact_mut(n);
        let pop_rows = population
            .as_slice_mut()
            .expect("row-major")
            .chunks_exact_mut(n);
        for ((p_row, x_row), c_row) in prev_rows.zip(pop_rows).zip(cand.chunks_exact(n)) {
            for (((p, x), &c), &ok) in p_row
                .iter_mut()
                .zip(x_row.iter_mut())
                .zip(c_row)
                .zip(&accept)
            {
                if ok {
                    *p = *x;
                    *x = c;
                }
            }
        }
        let fit = state
            .fitness
            .as_array_mut()
            .as_slice_mut()
            .expect("contiguous");
        let prev_fit = state
            .previous_fitness
            .as_array_mut()
            .as_slice_mut()
            .expect("contiguous");
        for (((p, f), &c), &ok) in prev_fit
            .iter_mut()
            .zip(fit.iter_mut())
            .zip(candidate_fitness.as_slice())
            .zip(&accept)
        {
            if ok {
                *p = *f;
                *f = c;
            }
        }

        state.best = BestAnt::extract(&state.population, &state.fitness);
        state.iteration += 1;

        StepOutcome {
            candidate,
            candidate_fitness,
            accepted: accept,
        }
    }
}

/// Runs `config` on the vector backend.
pub fn run<T: Real>(config: &RunConfig<T>) -> Result<RunResult<T>> {
    super::run_with(&VectorBackend::new(), config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::resolve_function;

    fn init(config: &RunConfig<f64>) -> (RunState<f64>, FunctionSpec<f64>, RngStream) {
        let spec = resolve_function(config).unwrap();
        let mut stream = RngStream::new(config.seed);
        let state = VectorBackend::new()
            .init_state(config, &spec, &mut stream)
            .unwrap();
        (state, spec, stream)
    }

    #[test]
    fn masks_after_init() {
        for scope in ConditionScope::ALL {
            let (state, _, _) = init(&RunConfig::default().with_seed(5).with_scope(scope));
            let masks =
                build_masks(&state.population, &state.best, &state.previous, scope).unwrap();
            assert!(masks.is_partition());
            assert_eq!(masks.general.count(), 0);
            for k in 0..10 {
                assert!(masks.best.get(k, state.best.index));
            }
            for a in (0..30).filter(|&a| a != state.best.index) {
                for k in 0..10 {
                    let on_best = state.population.get(k, a) == state.best.position[k];
                    let expect_best = scope == ConditionScope::Element && on_best;
                    assert_eq!(masks.best.get(k, a), expect_best);
                    assert_eq!(masks.previous.get(k, a), !expect_best);
                }
            }
        }
    }

    #[test]
    fn mask_shape_mismatch_is_an_error() {
        let (state, _, _) = init(&RunConfig::default());
        let other = PopulationMatrix::zeros(10, 29);
        assert!(matches!(
            build_masks(
                &state.population,
                &state.best,
                &other,
                ConditionScope::Element
            ),
            Err(AnaError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn zero_walk_on_best_rule_gives_zero_delta() {
        let (state, _, _) = init(&RunConfig::default().with_seed(2));
        let all = MaskMatrix::from_array(Array2::from_elem((10, 30), true));
        let none = MaskMatrix::from_array(Array2::from_elem((10, 30), false));
        let masks = BranchMasks {
            best: all,
            previous: none.clone(),
            general: none,
        };
        let delta = rate_of_change(
            &state.population,
            &state.previous,
            &state.best,
            &state.fitness,
            &state.previous_fitness,
            &PopulationMatrix::zeros(10, 30),
            &masks,
        )
        .unwrap();
        assert!(delta.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unit_walk_on_best_agent_returns_its_column() {
        let pop = PopulationMatrix::from_columns(&[vec![3.0, -2.0]]).unwrap();
        let fit = FitnessVector::new(vec![13.0]);
        let best = BestAnt::extract(&pop, &fit);
        let masks = build_masks(&pop, &best, &pop, ConditionScope::Element).unwrap();
        let walk = PopulationMatrix::from_columns(&[vec![1.0, 1.0]]).unwrap();
        let delta = rate_of_change(&pop, &pop, &best, &fit, &fit, &walk, &masks).unwrap();
        assert_eq!(delta.column_vec(0), vec![3.0, -2.0]);
    }

    #[test]
    fn guard_keeps_rate_of_change_finite() {
        // Previous position and fitness coincide with the best: t_prev = 0.
        let pop = PopulationMatrix::from_columns(&[vec![1.0], vec![4.0]]).unwrap();
        let prev = PopulationMatrix::from_columns(&[vec![1.0], vec![1.0]]).unwrap();
        let fit = FitnessVector::new(vec![1.0, 16.0]);
        let prev_fit = FitnessVector::new(vec![1.0, 1.0]);
        let best = BestAnt::extract(&pop, &fit);
        let masks = build_masks(&pop, &best, &prev, ConditionScope::Element).unwrap();
        assert!(masks.general.get(0, 1));
        let walk = PopulationMatrix::from_columns(&[vec![0.5], vec![0.5]]).unwrap();
        let delta = rate_of_change(&pop, &prev, &best, &fit, &prev_fit, &walk, &masks).unwrap();
        assert_eq!(delta.get(0, 1), 0.5 * (1.0 - 4.0));
    }

    #[test]
    fn walk_is_drawn_agent_major() {
        let mut s = RngStream::new(13);
        let walk: PopulationMatrix<f64> = random_walk(&mut s, 3, 2);
        let mut check = RngStream::new(13);
        for a in 0..2 {
            for k in 0..3 {
                assert_eq!(walk.get(k, a), check.uniform(-1.0, 1.0).unwrap());
            }
        }
        assert_eq!(s.draws(), 6);
    }

    #[test]
    fn rejected_candidates_leave_state_untouched() {
        // A single agent at the optimum can never strictly improve.
        let config = RunConfig::default()
            .with_dimension(2)
            .with_agents(1)
            .with_bounds(crate::config::Bounds::new(0.0, 1e-300).unwrap());
        let (mut state, spec, mut stream) = init(&config);
        state.population = PopulationMatrix::zeros(2, 1);
        state.previous = state.population.clone();
        state.fitness = FitnessVector::new(vec![0.0]);
        state.previous_fitness = state.fitness.clone();
        state.best = BestAnt::extract(&state.population, &state.fitness);
        let before = state.clone();
        let out = VectorBackend::new().step(&mut state, &config, &spec, &mut stream);
        assert_eq!(out.accepted, vec![false]);
        assert_eq!(state.population, before.population);
        assert_eq!(state.previous, before.previous);
        assert_eq!(state.fitness, before.fitness);
        assert_eq!(state.iteration, 1);
    }
}
