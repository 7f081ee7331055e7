//! Periodic over-relaxation factor schedules built from the roots of an
//! affine-translated Chebyshev polynomial, plus the damping-polynomial
//! diagnostics used to reason about them.

use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// A period of over-relaxation factors for the interval `[lo, hi]`.
///
/// Factor `k` of a period-`T` schedule is
///
/// ```text
/// omega_k = 1 / ( (hi + lo)/2 + (hi - lo)/2 * cos((2k + 1) * pi / (2T)) )
/// ```
///
/// i.e. the reciprocals of the roots of the degree-`T` Chebyshev polynomial
/// translated onto `[lo, hi]`. Applied cyclically, these factors minimize the
/// worst-case damping of error modes whose spectrum lies in the interval.
/// Factors are precomputed once; the iteration loop never reevaluates the
/// cosines.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevSchedule {
    lo: f64,
    hi: f64,
    factors: Vec<f64>,
}

impl ChebyshevSchedule {
    /// Builds the period-`period` schedule for the interval `[lo, hi]`.
    /// Requires `0 < lo < hi` and `period >= 1`.
    pub fn new(lo: f64, hi: f64, period: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo <= 0.0 || lo >= hi {
            return Err(Error::Config(format!(
                "invalid relaxation interval [{lo}, {hi}] (need 0 < lo < hi)"
            )));
        }
        if period < 1 {
            return Err(Error::Config("schedule period must be at least 1".to_string()));
        }
        let mid = (hi + lo) / 2.0;
        let half = (hi - lo) / 2.0;
        let factors = (0..period)
            .map(|k| {
                let angle = (2 * k + 1) as f64 * core::f64::consts::PI / (2 * period) as f64;
                1.0 / (mid + half * math::cos(angle))
            })
            .collect();
        Ok(ChebyshevSchedule { lo, hi, factors })
    }

    pub fn period(&self) -> usize {
        self.factors.len()
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// The factors of one period, index 0 first.
    pub fn factors(&self) -> &[f64] {
        &self.factors
    }

    /// Factor applied at iteration `t`: the periodic extension
    /// `omega_{l*T + j} = omega_j`.
    pub fn factor_at(&self, t: usize) -> f64 {
        self.factors[t % self.factors.len()]
    }

    /// Damping polynomial of one period at `lambda`:
    /// the product of `(1 - omega_k * lambda)` over the period.
    ///
    /// An error mode with eigenvalue `lambda` of the residual operator is
    /// scaled by exactly this value after one full period.
    pub fn damping_at(&self, lambda: f64) -> f64 {
        self.factors.iter().fold(1.0, |acc, w| acc * (1.0 - w * lambda))
    }

    /// Maximum of `|damping_at|` over a uniform grid of `grid_points`
    /// samples on `[lo, hi]` (endpoints included). Diagnostic only; requires
    /// `lo < hi` and `grid_points >= 2`.
    pub fn max_abs_damping(&self, lo: f64, hi: f64, grid_points: usize) -> f64 {
        assert!(lo < hi, "scan interval must be nonempty");
        assert!(grid_points >= 2, "grid needs at least 2 points");
        let step = (hi - lo) / (grid_points - 1) as f64;
        let mut best = 0.0f64;
        for i in 0..grid_points {
            let lambda = lo + step * i as f64;
            best = math::max(best, math::abs(self.damping_at(lambda)));
        }
        best
    }
}
