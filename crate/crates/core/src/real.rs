//! Floating-point element type shared by every matrix, kernel and backend.

use std::fmt::{Debug, Display, LowerExp};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating-point scalar the optimizer is generic over: `f32` or `f64`.
///
/// Beyond [`Float`], backends need the raw bit pattern so that equivalence
/// checks can compare trajectories bit-for-bit (`0.0` and `-0.0` differ,
/// as do distinct NaN payloads).
pub trait Real:
    Float + FromPrimitive + Default + Debug + Display + LowerExp + FromStr + Send + Sync + 'static
{
    /// Raw IEEE-754 bits, zero-extended to 64 bits.
    fn to_bits_u64(self) -> u64;

    /// Converts an `f64` literal, rounding to nearest for narrower types.
    fn lit(value: f64) -> Self;

    /// Converts a count (dimension index, agent count) to this type.
    fn from_count(n: usize) -> Self;

    fn to_f64_lossy(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn to_bits_u64(self) -> u64 {
        self.to_bits()
    }
    #[inline]
    fn lit(value: f64) -> Self {
        value
    }
    #[inline]
    fn from_count(n: usize) -> Self {
        n as f64
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn to_bits_u64(self) -> u64 {
        u64::from(self.to_bits())
    }
    #[inline]
    fn lit(value: f64) -> Self {
        value as f32
    }
    #[inline]
    fn from_count(n: usize) -> Self {
        n as f32
    }
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        f64::from(self)
    }
}

/// True when `a` and `b` have identical bit patterns.
#[inline]
pub fn bit_eq<T: Real>(a: T, b: T) -> bool {
    a.to_bits_u64() == b.to_bits_u64()
}
