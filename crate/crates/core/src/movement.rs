//! Per-element movement rules of the ant nesting update.
//!
//! Each element of an agent moves by one of three rules: the best agent
//! scales its own coordinate, an agent that has not moved since its last
//! acceptance steps toward the best, and every other agent steps toward the
//! best scaled by a deposition weight built from two tendency rates.

use crate::real::Real;

/// Previous tendency rates below this are treated as zero and the
/// deposition weight falls back to the raw random walk value.
pub const TENDENCY_GUARD: f64 = 1e-12;

/// Which movement rule an element takes; precedence is the declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Element equals the best agent's coordinate.
    Best,
    /// Element equals the agent's previous coordinate.
    Previous,
    /// Tendency-weighted move toward the best.
    General,
}

impl Branch {
    pub fn select(equals_best: bool, equals_previous: bool) -> Self {
        if equals_best {
            Branch::Best
        } else if equals_previous {
            Branch::Previous
        } else {
            Branch::General
        }
    }
}

/// `r * x`.
#[inline]
pub fn delta_best<T: Real>(r: T, x: T) -> T {
    r * x
}

/// `r * (x_best - x)`.
#[inline]
pub fn delta_previous<T: Real>(r: T, x_best: T, x: T) -> T {
    r * (x_best - x)
}

/// Euclidean combination of a coordinate gap and a fitness gap to the best:
/// `sqrt((x_best - x_ref)^2 + (fit_best - fit_ref)^2)`.
#[inline]
pub fn tendency<T: Real>(x_best: T, x_ref: T, fit_best: T, fit_ref: T) -> T {
    let dx = x_best - x_ref;
    let df = fit_best - fit_ref;
    (dx * dx + df * df).sqrt()
}

/// `r * (t / t_prev)`, or `r` when `t_prev` is below [`TENDENCY_GUARD`].
#[inline]
pub fn deposition_weight<T: Real>(r: T, t: T, t_prev: T) -> T {
    if t_prev < T::lit(TENDENCY_GUARD) {
        r
    } else {
        r * (t / t_prev)
    }
}

/// `dw * (x_best - x)`.
#[inline]
pub fn delta_general<T: Real>(dw: T, x_best: T, x: T) -> T {
    dw * (x_best - x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_best_examples() {
        assert_eq!(delta_best(0.5, 2.0), 1.0);
        assert_eq!(delta_best(0.0, 123.4), 0.0);
        assert_eq!(delta_best(-1.0, 2.0), -2.0);
    }

    #[test]
    fn delta_previous_examples() {
        assert_eq!(delta_previous(0.5, 4.0, 2.0), 1.0);
        assert_eq!(delta_previous(0.73, 5.5, 5.5), 0.0);
        assert_eq!(delta_previous(-1.0, 1.0, 3.0), 2.0);
    }

    #[test]
    fn tendency_examples() {
        assert_eq!(tendency(3.0, 0.0, 4.0, 0.0), 5.0);
        assert_eq!(tendency(0.0, 3.0, 0.0, 4.0), 5.0);
        assert_eq!(tendency(1.25, 1.25, 7.0, 7.0), 0.0);
        assert_eq!(tendency(2.0, 2.0, 0.0, -6.5), 6.5);
    }

    #[test]
    fn deposition_weight_examples() {
        assert_eq!(deposition_weight(0.5, 5.0, 2.5), 1.0);
        assert_eq!(deposition_weight(0.9, 0.0, 3.0), 0.0);
        assert_eq!(deposition_weight(-0.3, 4.0, 0.0), -0.3);
        assert_eq!(deposition_weight(0.25, 1.0, 1e-13), 0.25);
    }

    #[test]
    fn delta_general_examples() {
        assert_eq!(delta_general(1.0, 4.0, 1.0), 3.0);
        assert_eq!(delta_general(0.0, 4.0, 1.0), 0.0);
        assert_eq!(delta_general(0.8, 2.0, 2.0), 0.0);
    }

    #[test]
    fn branch_precedence() {
        assert_eq!(Branch::select(true, true), Branch::Best);
        assert_eq!(Branch::select(false, true), Branch::Previous);
        assert_eq!(Branch::select(false, false), Branch::General);
    }
}
