//! Benchmark objectives with a single-position path and a whole-population
//! path.
//!
//! The batched path walks blocks of agents through the dimension rows,
//! holding one accumulator per agent in registers. Every agent's reduction
//! still runs in ascending dimension order, so both paths agree bit for
//! bit, while the per-agent accumulators within a block vectorize.

use std::f64::consts::{E, TAU};
use std::fmt;
use std::hint::black_box;

use crate::config::Bounds;
use crate::error::{AnaError, Result};
use crate::population::{FitnessVector, PopulationMatrix};
use crate::real::Real;

const HEAVY_PREFIX: &str = "heavy_";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseFunction {
    Sphere,
    AbsPlusProd,
    CumsumSq,
    MaxAbs,
    Rosenbrock,
    Step,
    Rastrigin,
    Ackley,
    Griewank,
}

impl BaseFunction {
    pub const ALL: [BaseFunction; 9] = [
        BaseFunction::Sphere,
        BaseFunction::AbsPlusProd,
        BaseFunction::CumsumSq,
        BaseFunction::MaxAbs,
        BaseFunction::Rosenbrock,
        BaseFunction::Step,
        BaseFunction::Rastrigin,
        BaseFunction::Ackley,
        BaseFunction::Griewank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::AbsPlusProd => "abs_plus_prod",
            BaseFunction::CumsumSq => "cumsum_sq",
            BaseFunction::MaxAbs => "max_abs",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Step => "step",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Griewank => "griewank",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Conventional search box for the function.
    pub fn default_bounds<T: Real>(self) -> Bounds<T> {
        let half_width = match self {
            BaseFunction::AbsPlusProd => 10.0,
            BaseFunction::Rosenbrock => 30.0,
            BaseFunction::Rastrigin => 5.12,
            BaseFunction::Ackley => 32.0,
            BaseFunction::Griewank => 600.0,
            _ => 100.0,
        };
        Bounds::new(T::lit(-half_width), T::lit(half_width)).expect("registry bounds are valid")
    }

    pub fn known_optimizer<T: Real>(self, dimension: usize) -> Vec<T> {
        match self {
            BaseFunction::Rosenbrock => vec![T::one(); dimension],
            _ => vec![T::zero(); dimension],
        }
    }

    /// One evaluation of the function at `x`.
    pub fn evaluate<T: Real>(self, x: &[T]) -> T {
        dispatch!(self, |k| fold_one(k, x))
    }

    /// One evaluation of every column of a D×N row-major buffer, written to
    /// `out[a]`.
    pub fn evaluate_columns<T: Real>(self, data: &[T], dimension: usize, out: &mut [T]) {
        dispatch!(self, |k| fold_columns(k, data, dimension, out))
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

macro_rules! dispatch {
    ($f:expr, |$k:ident| $body:expr) => {
        match $f {
            BaseFunction::Sphere => {
                let $k = Sphere;
                $body
            }
            BaseFunction::AbsPlusProd => {
                let $k = AbsPlusProd;
                $body
            }
            BaseFunction::CumsumSq => {
                let $k = CumsumSq;
                $body
            }
            BaseFunction::MaxAbs => {
                let $k = MaxAbs;
                $body
            }
            BaseFunction::Rosenbrock => {
                let $k = Rosenbrock;
                $body
            }
            BaseFunction::Step => {
                let $k = Step;
                $body
            }
            BaseFunction::Rastrigin => {
                let $k = Rastrigin;
                $body
            }
            BaseFunction::Ackley => {
                let $k = Ackley;
                $body
            }
            BaseFunction::Griewank => {
                let $k = Griewank;
                $body
            }
        }
    };
}
use dispatch;

/// An objective written as a left fold over coordinates in ascending
/// dimension order. Both evaluation paths drive the same `push`, so they
/// perform identical arithmetic per agent.
trait Fold<T: Real>: Copy {
    fn push(self, acc: [T; 2], x: T, dim: usize) -> [T; 2];
    fn finish(self, acc: [T; 2], dimension: usize) -> T;
    fn start(self) -> [T; 2] {
        [T::zero(), T::zero()]
    }
}

#[inline(always)]
fn fold_one<T: Real, K: Fold<T>>(kernel: K, x: &[T]) -> T {
    let mut acc = kernel.start();
    for (i, &v) in x.iter().enumerate() {
        acc = kernel.push(acc, v, i);
    }
    kernel.finish(acc, x.len())
}

/// Agents per register block in the batched path.
const LANES: usize = 8;

#[inline(always)]
fn fold_block<T: Real, K: Fold<T>, const L: usize>(
    kernel: K,
    data: &[T],
    dimension: usize,
    agents: usize,
    first: usize,
    out: &mut [T],
) {
    // Accumulators kept per component so each component is a contiguous
    // lane array.
    let [s0, s1] = kernel.start();
    let mut first_acc = [s0; L];
    let mut second_acc = [s1; L];
    for i in 0..dimension {
        let row = &data[i * agents + first..i * agents + first + L];
        for l in 0..L {
            let [a, b] = kernel.push([first_acc[l], second_acc[l]], row[l], i);
            first_acc[l] = a;
            second_acc[l] = b;
        }
    }
    for l in 0..L {
        out[first + l] = kernel.finish([first_acc[l], second_acc[l]], dimension);
    }
}

fn fold_columns<T: Real, K: Fold<T>>(kernel: K, data: &[T], dimension: usize, out: &mut [T]) {
    let agents = out.len();
    debug_assert_eq!(data.len(), dimension * agents);
    let mut first = 0;
    while first + LANES <= agents {
        fold_block::<T, K, LANES>(kernel, data, dimension, agents, first, out);
        first += LANES;
    }
    if first + 4 <= agents {
        fold_block::<T, K, 4>(kernel, data, dimension, agents, first, out);
        first += 4;
    }
    if first + 2 <= agents {
        fold_block::<T, K, 2>(kernel, data, dimension, agents, first, out);
        first += 2;
    }
    if first < agents {
        fold_block::<T, K, 1>(kernel, data, dimension, agents, first, out);
    }
}

#[derive(Clone, Copy)]
struct Sphere;
#[derive(Clone, Copy)]
struct AbsPlusProd;
#[derive(Clone, Copy)]
struct CumsumSq;
#[derive(Clone, Copy)]
struct MaxAbs;
#[derive(Clone, Copy)]
struct Rosenbrock;
#[derive(Clone, Copy)]
struct Step;
#[derive(Clone, Copy)]
struct Rastrigin;
#[derive(Clone, Copy)]
struct Ackley;
#[derive(Clone, Copy)]
struct Griewank;

impl<T: Real> Fold<T> for Sphere {
    #[inline(always)]
    fn push(self, [s, _]: [T; 2], x: T, _: usize) -> [T; 2] {
        [s + x * x, T::zero()]
    }
    #[inline(always)]
    fn finish(self, [s, _]: [T; 2], _: usize) -> T {
        s
    }
}

impl<T: Real> Fold<T> for AbsPlusProd {
    #[inline(always)]
    fn start(self) -> [T; 2] {
        [T::zero(), T::one()]
    }
    #[inline(always)]
    fn push(self, [s, p]: [T; 2], x: T, _: usize) -> [T; 2] {
        [s + x.abs(), p * x.abs()]
    }
    #[inline(always)]
    fn finish(self, [s, p]: [T; 2], _: usize) -> T {
        s + p
    }
}

impl<T: Real> Fold<T> for CumsumSq {
    // [sum of squared prefixes, running prefix]
    #[inline(always)]
    fn push(self, [s, run]: [T; 2], x: T, _: usize) -> [T; 2] {
        let run = run + x;
        [s + run * run, run]
    }
    #[inline(always)]
    fn finish(self, [s, _]: [T; 2], _: usize) -> T {
        s
    }
}

impl<T: Real> Fold<T> for MaxAbs {
    #[inline(always)]
    fn push(self, [m, _]: [T; 2], x: T, _: usize) -> [T; 2] {
        [m.max(x.abs()), T::zero()]
    }
    #[inline(always)]
    fn finish(self, [m, _]: [T; 2], _: usize) -> T {
        m
    }
}

impl<T: Real> Fold<T> for Rosenbrock {
    // [sum, previous coordinate]
    #[inline(always)]
    fn push(self, [s, prev]: [T; 2], x: T, dim: usize) -> [T; 2] {
        if dim == 0 {
            return [s, x];
        }
        let a = x - prev * prev;
        let b = prev - T::one();
        [s + (T::lit(100.0) * a * a + b * b), x]
    }
    #[inline(always)]
    fn finish(self, [s, _]: [T; 2], _: usize) -> T {
        s
    }
}

impl<T: Real> Fold<T> for Step {
    #[inline(always)]
    fn push(self, [s, _]: [T; 2], x: T, _: usize) -> [T; 2] {
        let f = (x + T::lit(0.5)).floor();
        [s + f * f, T::zero()]
    }
    #[inline(always)]
    fn finish(self, [s, _]: [T; 2], _: usize) -> T {
        s
    }
}

impl<T: Real> Fold<T> for Rastrigin {
    #[inline(always)]
    fn push(self, [s, _]: [T; 2], x: T, _: usize) -> [T; 2] {
        let term = x * x - T::lit(10.0) * (T::lit(TAU) * x).cos() + T::lit(10.0);
        [s + term, T::zero()]
    }
    #[inline(always)]
    fn finish(self, [s, _]: [T; 2], _: usize) -> T {
        s
    }
}

impl<T: Real> Fold<T> for Ackley {
    // [sum of squares, sum of cosines]
    #[inline(always)]
    fn push(self, [s, c]: [T; 2], x: T, _: usize) -> [T; 2] {
        [s + x * x, c + (T::lit(TAU) * x).cos()]
    }
    #[inline(always)]
    fn finish(self, [s, c]: [T; 2], dimension: usize) -> T {
        let n = T::from_count(dimension);
        T::lit(-20.0) * (T::lit(-0.2) * (s / n).sqrt()).exp() - (c / n).exp()
            + T::lit(20.0)
            + T::lit(E)
    }
}

impl<T: Real> Fold<T> for Griewank {
    // [sum of squares, product of cosines]
    #[inline(always)]
    fn start(self) -> [T; 2] {
        [T::zero(), T::one()]
    }
    #[inline(always)]
    fn push(self, [s, p]: [T; 2], x: T, dim: usize) -> [T; 2] {
        let factor = (x / T::from_count(dim + 1).sqrt()).cos();
        [s + x * x, p * factor]
    }
    #[inline(always)]
    fn finish(self, [s, p]: [T; 2], _: usize) -> T {
        s / T::lit(4000.0) - p + T::one()
    }
}

/// A registered objective at a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec<T> {
    id: String,
    base: BaseFunction,
    repetitions: usize,
    dimension: usize,
    bounds: Bounds<T>,
    known_optimum_value: T,
}

impl<T: Real> FunctionSpec<T> {
    pub fn from_base(base: BaseFunction) -> Self {
        Self {
            id: base.name().to_string(),
            base,
            repetitions: 1,
            dimension: crate::config::DEFAULT_DIMENSION,
            bounds: base.default_bounds(),
            known_optimum_value: T::zero(),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn base(&self) -> BaseFunction {
        self.base
    }

    /// How many times each evaluation recomputes the base function.
    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bounds(&self) -> Bounds<T> {
        self.bounds
    }

    pub fn known_optimum_value(&self) -> T {
        self.known_optimum_value
    }

    pub fn known_optimizer(&self) -> Vec<T> {
        self.base.known_optimizer(self.dimension)
    }

    pub fn with_dimension(mut self, dimension: usize) -> Self {
        self.dimension = dimension;
        self
    }

    pub fn evaluate(&self, position: &[T]) -> Result<T> {
        if position.len() != self.dimension {
            return Err(AnaError::DimensionMismatch {
                expected: self.dimension,
                actual: position.len(),
            });
        }
        Ok(self.evaluate_unchecked(position))
    }

    /// Evaluates a position already known to have the right length.
    #[inline]
    pub fn evaluate_unchecked(&self, position: &[T]) -> T {
        let mut value = T::zero();
        for _ in 0..self.repetitions {
            value = black_box(self.base.evaluate(black_box(position)));
        }
        value
    }

    /// Evaluates every column of `pop`; entry `a` is bit-identical to
    /// [`evaluate`](Self::evaluate) on column `a`.
    pub fn evaluate_population(&self, pop: &PopulationMatrix<T>) -> Result<FitnessVector<T>> {
        if pop.dimension() != self.dimension {
            return Err(AnaError::DimensionMismatch {
                expected: self.dimension,
                actual: pop.dimension(),
            });
        }
        let data = pop
            .as_array()
            .as_slice()
            .expect("population matrices are row-major");
        let mut out = vec![T::zero(); pop.agents()];
        for _ in 0..self.repetitions {
            self.base
                .evaluate_columns(black_box(data), self.dimension, &mut out);
            black_box(&mut out);
        }
        Ok(FitnessVector::new(out))
    }
}

/// Same function evaluated `k` times per call; the returned value is that
/// of the final repetition, so values are unchanged and only cost grows.
pub fn cost_amplify<T: Real>(spec: &FunctionSpec<T>, k: usize) -> Result<FunctionSpec<T>> {
    if k == 0 {
        return Err(AnaError::InvalidAmplification(k));
    }
    let mut amplified = spec.clone();
    amplified.repetitions = spec.repetitions * k;
    amplified.id = format!("{}_{k}", spec.id);
    Ok(amplified)
}

/// Names accepted by [`lookup`], with the amplified form as a pattern.
pub fn available_names() -> Vec<String> {
    BaseFunction::ALL
        .iter()
        .map(|f| f.name().to_string())
        .chain(std::iter::once("heavy_<base>_<k>".to_string()))
        .collect()
}

/// Resolves a registry name, including `heavy_<base>_<k>`, at the default
/// dimension.
pub fn lookup<T: Real>(name: &str) -> Result<FunctionSpec<T>> {
    let unknown = || AnaError::UnknownFunction {
        name: name.to_string(),
        available: available_names(),
    };
    if let Some(base) = BaseFunction::from_name(name) {
        return Ok(FunctionSpec::from_base(base));
    }
    let rest = name.strip_prefix(HEAVY_PREFIX).ok_or_else(unknown)?;
    let (base_name, k) = rest.rsplit_once('_').ok_or_else(unknown)?;
    let base = BaseFunction::from_name(base_name).ok_or_else(unknown)?;
    let k: usize = k.parse().map_err(|_| unknown())?;
    if k == 0 {
        return Err(unknown());
    }
    let mut spec = cost_amplify(&FunctionSpec::from_base(base), k)?;
    spec.id = name.to_string();
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::RunConfig;
    use crate::population::init_population;
    use crate::rng::RngStream;

    fn spec(name: &str, d: usize) -> FunctionSpec<f64> {
        lookup::<f64>(name).unwrap().with_dimension(d)
    }

    #[test]
    fn hand_values() {
        assert_eq!(spec("sphere", 3).evaluate(&[1.0, 2.0, 3.0]).unwrap(), 14.0);
        assert_eq!(
            spec("abs_plus_prod", 3)
                .evaluate(&[1.0, -2.0, 3.0])
                .unwrap(),
            12.0
        );
        // prefix sums 1, 3, 6
        assert_eq!(
            spec("cumsum_sq", 3).evaluate(&[1.0, 2.0, 3.0]).unwrap(),
            46.0
        );
        assert_eq!(spec("max_abs", 3).evaluate(&[1.0, -7.0, 3.0]).unwrap(), 7.0);
        // 100 * (1 - 0)^2 + (0 - 1)^2
        assert_eq!(spec("rosenbrock", 2).evaluate(&[0.0, 1.0]).unwrap(), 101.0);
        // floor(1.9) = 1, floor(-1.0) = -1, floor(0.5) = 0
        assert_eq!(spec("step", 3).evaluate(&[1.4, -1.5, 0.0]).unwrap(), 2.0);
        assert!((spec("rastrigin", 1).evaluate(&[1.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn optimum_anchors() {
        for base in BaseFunction::ALL {
            let s = FunctionSpec::<f64>::from_base(base);
            let v = s.evaluate(&s.known_optimizer()).unwrap();
            assert!((v - s.known_optimum_value()).abs() <= 1e-12, "{base}: {v}");
        }
    }

    #[test]
    fn rosenbrock_in_one_dimension_is_zero() {
        assert_eq!(spec("rosenbrock", 1).evaluate(&[3.0]).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let s = spec("sphere", 10);
        assert!(matches!(
            s.evaluate(&[0.0; 3]),
            Err(AnaError::DimensionMismatch {
                expected: 10,
                actual: 3
            })
        ));
        let pop = PopulationMatrix::<f64>::zeros(4, 2);
        assert!(s.evaluate_population(&pop).is_err());
    }

    #[test]
    fn unknown_function_lists_candidates() {
        let err = lookup::<f64>("nosuchfn").unwrap_err();
        match &err {
            AnaError::UnknownFunction { name, available } => {
                assert_eq!(name, "nosuchfn");
                assert!(available.iter().any(|n| n == "rastrigin"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(err.to_string().contains("sphere"));
        for bad in [
            "heavy_sphere",
            "heavy_sphere_0",
            "heavy_nope_10",
            "heavy_sphere_x",
        ] {
            assert!(lookup::<f64>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn heavy_names_parse_into_amplified_specs() {
        let s = lookup::<f64>("heavy_sphere_1000").unwrap();
        assert_eq!(s.id(), "heavy_sphere_1000");
        assert_eq!(s.base(), BaseFunction::Sphere);
        assert_eq!(s.repetitions(), 1000);
        assert_eq!(s.evaluate(&[0.0; 10]).unwrap(), 0.0);
        let multi = lookup::<f64>("heavy_abs_plus_prod_3").unwrap();
        assert_eq!(multi.base(), BaseFunction::AbsPlusProd);
    }

    #[test]
    fn cost_amplify_keeps_values_and_suffixes_id() {
        let base = spec("rastrigin", 4);
        let once = cost_amplify(&base, 1).unwrap();
        let many = cost_amplify(&base, 7).unwrap();
        assert_eq!(many.id(), "rastrigin_7");
        let x = [0.3, -1.7, 2.2, 4.9];
        let v = base.evaluate(&x).unwrap();
        assert_eq!(once.evaluate(&x).unwrap().to_bits(), v.to_bits());
        assert_eq!(many.evaluate(&x).unwrap().to_bits(), v.to_bits());
        assert!(cost_amplify(&base, 0).is_err());
    }

    #[test]
    fn zero_population_gives_zero_row() {
        let s = spec("sphere", 10);
        let fit = s
            .evaluate_population(&PopulationMatrix::zeros(10, 30))
            .unwrap();
        assert_eq!(fit.len(), 30);
        assert!(fit.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn batched_matches_per_column_for_every_function() {
        for d in [1, 2, 10] {
            let config = RunConfig::<f64>::default()
                .with_dimension(d)
                .with_agents(17);
            let pop = init_population(&config, &mut RngStream::new(7)).unwrap();
            for base in BaseFunction::ALL {
                let s = FunctionSpec::from_base(base).with_dimension(d);
                let batched = s.evaluate_population(&pop).unwrap();
                for a in 0..pop.agents() {
                    let single = s.evaluate(&pop.column_vec(a)).unwrap();
                    assert_eq!(
                        batched.get(a).to_bits(),
                        single.to_bits(),
                        "{base} d={d} agent {a}"
                    );
                }
            }
        }
    }

    #[test]
    fn batched_matches_per_column_in_f32() {
        let config = RunConfig::<f32>::default().with_agents(9);
        let pop = init_population(&config, &mut RngStream::new(11)).unwrap();
        for base in BaseFunction::ALL {
            let s = FunctionSpec::<f32>::from_base(base);
            let batched = s.evaluate_population(&pop).unwrap();
            for a in 0..pop.agents() {
                assert_eq!(
                    batched.get(a).to_bits(),
                    s.evaluate(&pop.column_vec(a)).unwrap().to_bits()
                );
            }
        }
    }
}
