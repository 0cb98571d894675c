use std::fmt;
use std::str::FromStr;

use crate::error::{AnaError, Result};
use crate::real::Real;

/// Closed box `[lower, upper]` applied to every coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds<T> {
    lower: T,
    upper: T,
}

impl<T: Real> Bounds<T> {
    pub fn new(lower: T, upper: T) -> Result<Self> {
        if lower.is_finite() && upper.is_finite() && lower < upper {
            Ok(Self { lower, upper })
        } else {
            Err(AnaError::InvalidBounds {
                lower: lower.to_f64_lossy(),
                upper: upper.to_f64_lossy(),
            })
        }
    }

    pub fn lower(&self) -> T {
        self.lower
    }

    pub fn upper(&self) -> T {
        self.upper
    }

    pub fn contains(&self, value: T) -> bool {
        value >= self.lower && value <= self.upper
    }

    /// `min(upper, max(lower, value))`.
    #[inline]
    pub fn clamp(&self, value: T) -> T {
        self.upper.min(self.lower.max(value))
    }
}

impl<T: Real> Default for Bounds<T> {
    fn default() -> Self {
        Self {
            lower: T::lit(-100.0),
            upper: T::lit(100.0),
        }
    }
}

/// Whether the best/previous equality tests look at single elements or at
/// whole agent columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConditionScope {
    #[default]
    Element,
    Agent,
}

impl ConditionScope {
    pub const ALL: [ConditionScope; 2] = [ConditionScope::Element, ConditionScope::Agent];

    pub fn as_str(self) -> &'static str {
        match self {
            ConditionScope::Element => "element",
            ConditionScope::Agent => "agent",
        }
    }
}

impl fmt::Display for ConditionScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ConditionScope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "element" => Ok(ConditionScope::Element),
            "agent" => Ok(ConditionScope::Agent),
            other => Err(format!(
                "unknown condition scope `{other}` (expected element|agent)"
            )),
        }
    }
}

pub const DEFAULT_AGENTS: usize = 30;
pub const DEFAULT_ITERATIONS: usize = 500;
pub const DEFAULT_DIMENSION: usize = 10;

/// Immutable parameters of a single optimizer run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T> {
    pub function_id: String,
    pub dimension: usize,
    pub agents: usize,
    pub iterations: usize,
    pub seed: u64,
    pub bounds: Bounds<T>,
    pub condition_scope: ConditionScope,
}

impl<T: Real> RunConfig<T> {
    /// Default configuration (30 agents, 500 iterations, 10 dimensions,
    /// `[-100, 100]`, element scope, seed 1) for the named function.
    pub fn new(function_id: impl Into<String>) -> Self {
        Self {
            function_id: function_id.into(),
            dimension: DEFAULT_DIMENSION,
            agents: DEFAULT_AGENTS,
            iterations: DEFAULT_ITERATIONS,
            seed: 1,
            bounds: Bounds::default(),
            condition_scope: ConditionScope::Element,
        }
    }

    pub fn with_dimension(mut self, dimension: usize) -> Self {
        self.dimension = dimension;
        self
    }

    pub fn with_agents(mut self, agents: usize) -> Self {
        self.agents = agents;
        self
    }

    pub fn with_iterations(mut self, iterations: usize) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_bounds(mut self, bounds: Bounds<T>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn with_scope(mut self, scope: ConditionScope) -> Self {
        self.condition_scope = scope;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(AnaError::InvalidConfig(
                "dimension must be at least 1".into(),
            ));
        }
        if self.agents == 0 {
            return Err(AnaError::InvalidConfig("agents must be at least 1".into()));
        }
        // Bounds are validated on construction, but the fields are public.
        Bounds::new(self.bounds.lower, self.bounds.upper)?;
        Ok(())
    }
}

impl<T: Real> Default for RunConfig<T> {
    fn default() -> Self {
        Self::new("sphere")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = RunConfig::<f64>::default();
        assert_eq!((c.agents, c.iterations, c.dimension), (30, 500, 10));
        assert_eq!(c.bounds.lower(), -100.0);
        assert_eq!(c.bounds.upper(), 100.0);
        assert_eq!(c.condition_scope, ConditionScope::Element);
        c.validate().unwrap();
    }

    #[test]
    fn bounds_reject_bad_intervals() {
        assert!(Bounds::new(1.0f64, 1.0).is_err());
        assert!(Bounds::new(100.0f64, -100.0).is_err());
        assert!(Bounds::new(f64::NAN, 1.0).is_err());
        assert!(Bounds::new(0.0f64, f64::INFINITY).is_err());
    }

    #[test]
    fn clamp_examples() {
        let b = Bounds::<f64>::default();
        assert_eq!(b.clamp(150.0), 100.0);
        assert_eq!(b.clamp(-250.0), -100.0);
        assert_eq!(b.clamp(12.5), 12.5);
    }

    #[test]
    fn zero_sized_configs_are_rejected() {
        assert!(RunConfig::<f64>::default()
            .with_agents(0)
            .validate()
            .is_err());
        assert!(RunConfig::<f64>::default()
            .with_dimension(0)
            .validate()
            .is_err());
        assert!(RunConfig::<f64>::default()
            .with_iterations(0)
            .validate()
            .is_ok());
    }

    #[test]
    fn scope_parses() {
        assert_eq!(
            "agent".parse::<ConditionScope>().unwrap(),
            ConditionScope::Agent
        );
        assert!("column".parse::<ConditionScope>().is_err());
    }
}
