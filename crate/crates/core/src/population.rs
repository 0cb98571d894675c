//! Population matrix (rows are dimensions, columns are agents) and the
//! per-agent fitness row that goes with it.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, ArrayViewMut2, ShapeBuilder};

use crate::config::{Bounds, RunConfig};
use crate::error::{AnaError, Result};
use crate::real::Real;
use crate::rng::RngStream;

/// D×N grid of coordinates; element `(d, a)` is dimension `d` of agent `a`.
///
/// Storage is always standard (row-major) layout so each dimension row is a
/// contiguous slice across agents.
#[derive(Debug, Clone, PartialEq)]
pub struct PopulationMatrix<T> {
    data: Array2<T>,
}

impl<T: Real> PopulationMatrix<T> {
    pub fn zeros(dimension: usize, agents: usize) -> Self {
        Self {
            data: Array2::zeros((dimension, agents)),
        }
    }

    pub fn from_array(data: Array2<T>) -> Self {
        let data = if data.is_standard_layout() {
            data
        } else {
            data.as_standard_layout().into_owned()
        };
        Self { data }
    }

    /// Builds a D×N matrix from values listed agent by agent (all dimensions
    /// of agent 0 first).
    pub fn from_agent_major(dimension: usize, agents: usize, values: Vec<T>) -> Result<Self> {
        let len = values.len();
        let data = Array2::from_shape_vec((dimension, agents).f(), values).map_err(|_| {
            AnaError::ShapeMismatch {
                expected: (dimension, agents),
                actual: (len, 1),
            }
        })?;
        Ok(Self::from_array(data))
    }

    /// Builds a matrix from agent columns.
    pub fn from_columns(columns: &[Vec<T>]) -> Result<Self> {
        let agents = columns.len();
        let dimension = columns.first().map_or(0, Vec::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != dimension) {
            return Err(AnaError::DimensionMismatch {
                expected: dimension,
                actual: bad.len(),
            });
        }
        let flat = columns.iter().flatten().copied().collect();
        Self::from_agent_major(dimension, agents, flat)
    }

    pub fn dimension(&self) -> usize {
        self.data.nrows()
    }

    pub fn agents(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.dimension(), self.agents())
    }

    #[inline]
    pub fn get(&self, dim: usize, agent: usize) -> T {
        self.data[(dim, agent)]
    }

    #[inline]
    pub fn set(&mut self, dim: usize, agent: usize, value: T) {
        self.data[(dim, agent)] = value;
    }

    pub fn column(&self, agent: usize) -> ArrayView1<'_, T> {
        self.data.column(agent)
    }

    pub fn column_vec(&self, agent: usize) -> Vec<T> {
        self.data.column(agent).to_vec()
    }

    /// Copies column `agent` into `out`, which must have length D.
    pub fn copy_column_into(&self, agent: usize, out: &mut [T]) {
        for (slot, &v) in out.iter_mut().zip(self.data.column(agent)) {
            *slot = v;
        }
    }

    pub fn view(&self) -> ArrayView2<'_, T> {
        self.data.view()
    }

    pub fn view_mut(&mut self) -> ArrayViewMut2<'_, T> {
        self.data.view_mut()
    }

    pub fn as_array(&self) -> &Array2<T> {
        &self.data
    }

    pub fn into_array(self) -> Array2<T> {
        self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn is_within(&self, bounds: &Bounds<T>) -> bool {
        self.data.iter().all(|&v| bounds.contains(v))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

/// Per-agent objective values, one entry per population column.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessVector<T> {
    values: Array1<T>,
}

impl<T: Real> FitnessVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self {
            values: Array1::from(values),
        }
    }

    pub fn from_array(values: Array1<T>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, agent: usize) -> T {
        self.values[agent]
    }

    #[inline]
    pub fn set(&mut self, agent: usize, value: T) {
        self.values[agent] = value;
    }

    pub fn as_slice(&self) -> &[T] {
        self.values
            .as_slice()
            .expect("fitness vectors are always contiguous")
    }

    pub fn as_array(&self) -> &Array1<T> {
        &self.values
    }

    pub fn as_array_mut(&mut self) -> &mut Array1<T> {
        &mut self.values
    }

    /// Index of the smallest value; the first one wins on ties.
    pub fn argmin(&self) -> usize {
        argmin(self.as_slice())
    }
}

/// Lowest index attaining the minimum of a non-empty slice.
pub fn argmin<T: Real>(values: &[T]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v < values[best] {
            best = i;
        }
    }
    best
}

/// The current best agent: its index, fitness and a copy of its column.
#[derive(Debug, Clone, PartialEq)]
pub struct BestAnt<T> {
    pub index: usize,
    pub fitness: T,
    pub position: Array1<T>,
}

impl<T: Real> BestAnt<T> {
    pub fn extract(population: &PopulationMatrix<T>, fitness: &FitnessVector<T>) -> Self {
        let index = fitness.argmin();
        Self::at(population, fitness, index)
    }

    pub fn at(population: &PopulationMatrix<T>, fitness: &FitnessVector<T>, index: usize) -> Self {
        Self {
            index,
            fitness: fitness.get(index),
            position: population.column(index).to_owned(),
        }
    }
}

/// Draws the initial population, agent-major and dimension-minor: element
/// `(d, a)` receives the `(a * D + d)`-th uniform on `[lower, upper)`.
pub fn init_population<T: Real>(
    config: &RunConfig<T>,
    stream: &mut RngStream,
) -> Result<PopulationMatrix<T>> {
    config.validate()?;
    let (dimension, agents) = (config.dimension, config.agents);
    let mut flat = vec![T::zero(); dimension * agents];
    stream.fill_uniform(&mut flat, config.bounds.lower(), config.bounds.upper())?;
    PopulationMatrix::from_agent_major(dimension, agents, flat)
}

/// Replaces every element with `min(upper, max(lower, x))`.
pub fn clamp_to_bounds<T: Real>(
    mut population: PopulationMatrix<T>,
    bounds: &Bounds<T>,
) -> PopulationMatrix<T> {
    population.data.mapv_inplace(|v| bounds.clamp(v));
    population
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn init_fills_agent_major() {
        let config = RunConfig::<f64>::default()
            .with_dimension(2)
            .with_agents(2)
            .with_seed(42);
        let pop = init_population(&config, &mut RngStream::new(42)).unwrap();
        // Draw sequence for seed 42 on [-100, 100), from an independent
        // SplitMix64 implementation: a0d0, a0d1, a1d0, a1d1.
        assert_eq!(pop.get(0, 0), 48.31297575436466);
        assert_eq!(pop.get(1, 0), -68.01792142461598);
        assert_eq!(pop.get(0, 1), -44.27977394897227);
        assert_eq!(pop.get(1, 1), -31.16185669527249);
    }

    #[test]
    fn init_matches_hand_loop_and_shape() {
        let config = RunConfig::<f64>::default().with_seed(17);
        let pop = init_population(&config, &mut RngStream::new(17)).unwrap();
        assert_eq!(pop.shape(), (10, 30));
        assert!(pop.as_array().is_standard_layout());

        let mut stream = RngStream::new(17);
        for a in 0..30 {
            for d in 0..10 {
                let v = stream.uniform(-100.0, 100.0).unwrap();
                assert_eq!(pop.get(d, a), v);
                assert!((-100.0..100.0).contains(&v));
            }
        }
    }

    #[test]
    fn single_element_is_single_draw() {
        let config = RunConfig::<f64>::default().with_dimension(1).with_agents(1);
        let mut stream = RngStream::new(5);
        let pop = init_population(&config, &mut stream).unwrap();
        assert_eq!(stream.draws(), 1);
        assert_eq!(
            pop.get(0, 0),
            RngStream::new(5).uniform(-100.0, 100.0).unwrap()
        );
    }

    #[test]
    fn clamp_examples() {
        let pop =
            PopulationMatrix::from_columns(&[vec![150.0, -250.0], vec![3.0, -100.0]]).unwrap();
        let clamped = clamp_to_bounds(pop, &Bounds::default());
        assert_eq!(clamped.column_vec(0), vec![100.0, -100.0]);
        assert_eq!(clamped.column_vec(1), vec![3.0, -100.0]);
    }

    #[test]
    fn clamp_leaves_in_bounds_matrix_identical() {
        let config = RunConfig::<f64>::default();
        let pop = init_population(&config, &mut RngStream::new(3)).unwrap();
        assert_eq!(clamp_to_bounds(pop.clone(), &config.bounds), pop);
    }

    #[test]
    fn best_ant_prefers_lowest_index_on_ties() {
        let pop = PopulationMatrix::from_columns(&[vec![1.0], vec![-1.0], vec![0.5]]).unwrap();
        let fit = FitnessVector::new(vec![1.0, 1.0, 2.0]);
        let best = BestAnt::extract(&pop, &fit);
        assert_eq!(best.index, 0);
        assert_eq!(best.fitness, 1.0);
        assert_eq!(best.position.to_vec(), vec![1.0]);
    }

    #[test]
    fn from_agent_major_rejects_wrong_length() {
        assert!(PopulationMatrix::from_agent_major(2, 2, vec![0.0f64; 3]).is_err());
    }
}
