//! SplitMix64 stream with a fixed draw-order contract.
//!
//! Both backends consume the same stream in the same order: one uniform per
//! population element at initialization and one per element per iteration,
//! always agent-major (all dimensions of agent 0, then agent 1, ...).

use crate::error::{AnaError, Result};
use crate::real::Real;

/// Weyl increment added to the state on every draw.
pub const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

const UNIT_SCALE: f64 = 1.0 / (1u64 << 53) as f64;

/// Deterministic SplitMix64 generator with a draw counter.
///
/// The counter is instrumentation only; it never feeds back into outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
    draws: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            draws: 0,
        }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    /// Number of raw outputs consumed since construction.
    pub fn draws(&self) -> u64 {
        self.draws
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        self.draws += 1;
        finalize(self.state)
    }

    /// Uniform real in `[lo, hi)`, consuming exactly one raw output.
    pub fn uniform<T: Real>(&mut self, lo: T, hi: T) -> Result<T> {
        check_interval(lo, hi)?;
        Ok(self.uniform_in(lo, hi))
    }

    /// Fills `out` in slice order, one draw per element.
    pub fn fill_uniform<T: Real>(&mut self, out: &mut [T], lo: T, hi: T) -> Result<()> {
        check_interval(lo, hi)?;
        for slot in out.iter_mut() {
            *slot = self.uniform_in(lo, hi);
        }
        Ok(())
    }

    /// [`uniform`](Self::uniform) for an interval the caller already validated.
    #[inline]
    pub(crate) fn uniform_in<T: Real>(&mut self, lo: T, hi: T) -> T {
        uniform_from_bits(self.next_u64(), lo, hi)
    }
}

/// SplitMix64 output function applied to an already-advanced state.
#[inline]
pub fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Top 53 bits of `raw` as a real in `[0, 1)`.
#[inline]
pub fn unit_from_bits(raw: u64) -> f64 {
    (raw >> 11) as f64 * UNIT_SCALE
}

/// Maps a raw output onto `[lo, hi)` as `lo + (hi - lo) * u`.
///
/// Exact for `f64`. For `f32` the unit value is rounded first, and a result
/// that rounds up to `hi` is pulled back inside the interval.
#[inline]
pub fn uniform_from_bits<T: Real>(raw: u64, lo: T, hi: T) -> T {
    let u = T::lit(unit_from_bits(raw));
    let value = lo + (hi - lo) * u;
    if value < hi {
        value
    } else {
        hi - (hi - lo) * T::epsilon()
    }
}

fn check_interval<T: Real>(lo: T, hi: T) -> Result<()> {
    if lo.is_finite() && hi.is_finite() && lo < hi {
        Ok(())
    } else {
        Err(AnaError::InvalidInterval {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference outputs for seeds 0 and 1, produced by an independent
    // implementation; seed 0 also matches the widely published vector table.
    const SEED0: [u64; 8] = [
        0xe220a8397b1dcdaf,
        0x6e789e6aa1b965f4,
        0x06c45d188009454f,
        0xf88bb8a8724c81ec,
        0x1b39896a51a8749b,
        0x53cb9f0c747ea2ea,
        0x2c829abe1f4532e1,
        0xc584133ac916ab3c,
    ];
    const SEED1: [u64; 8] = [
        0x910a2dec89025cc1,
        0xbeeb8da1658eec67,
        0xf893a2eefb32555e,
        0x71c18690ee42c90b,
        0x71bb54d8d101b5b9,
        0xc34d0bff90150280,
        0xe099ec6cd7363ca5,
        0x85e7bb0f12278575,
    ];

    #[test]
    fn matches_reference_vectors() {
        let mut s0 = RngStream::new(0);
        let mut s1 = RngStream::new(1);
        for k in 0..8 {
            assert_eq!(s0.next_u64(), SEED0[k], "seed 0 output {k}");
            assert_eq!(s1.next_u64(), SEED1[k], "seed 1 output {k}");
        }
        assert_eq!(s0.draws(), 8);
    }

    #[test]
    fn equal_seeds_give_equal_sequences() {
        let mut a = RngStream::new(99);
        let mut b = RngStream::new(99);
        for _ in 0..1000 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn zero_raw_output_maps_to_lower_bound() {
        assert_eq!(uniform_from_bits(0, -1.0f64, 1.0), -1.0);
    }

    #[test]
    fn max_raw_output_stays_below_upper_bound() {
        let v = uniform_from_bits(u64::MAX, -1.0f64, 1.0);
        assert!(v < 1.0);
        assert_eq!(v, 1.0 - f64::EPSILON);
        let v32 = uniform_from_bits(u64::MAX, -1.0f32, 1.0);
        assert!(v32 < 1.0);
    }

    #[test]
    fn uniform_consumes_one_draw() {
        let mut s = RngStream::new(5);
        let v = s.uniform(-100.0f64, 100.0).unwrap();
        assert_eq!(s.draws(), 1);
        assert_eq!(v, -22.646390803213194);
    }

    #[test]
    fn uniform_rejects_empty_or_reversed_interval() {
        let mut s = RngStream::new(0);
        assert!(matches!(
            s.uniform(1.0f64, 1.0),
            Err(AnaError::InvalidInterval { .. })
        ));
        assert!(s.uniform(2.0f64, -2.0).is_err());
        assert!(s.uniform(f64::NEG_INFINITY, 0.0).is_err());
        assert_eq!(s.draws(), 0);
    }

    #[test]
    fn sample_mean_on_symmetric_interval_is_near_zero() {
        // Observed mean for seed 2024: -0.000368797...
        let mut s = RngStream::new(2024);
        let mut sum = 0.0;
        for _ in 0..1_000_000 {
            sum += s.uniform(-1.0f64, 1.0).unwrap();
        }
        let mean = sum / 1e6;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((mean - (-0.0003687976368549789)).abs() < 1e-12);
    }
}
