//! Closed-form double-integrator barriers.
//!
//! Under the braking law [`u_dbl`] a double integrator comes to rest after
//! N + 1 steps at the settling position η; the position barriers compare
//! the current position and η against a limit.

use crate::barrier::BarrierFn;
use crate::dynamics::DblIntState;
use crate::params::SimParams;
use crate::{Error, Result};

/// Speed below which a braking rollout counts as stopped. The last braking
/// step v + δ(-v/δ) leaves a rounding residual of a few ulps about 13% of the time.
pub const REST_SPEED: f64 = 1e-12;

pub fn at_rest(v: f64) -> bool {
    v.abs() <= REST_SPEED
}

/// Braking pair (a⁻ < 0, a⁺ > 0) used to stop forward and backward motion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvasiveAccelPair {
    pub a_minus: f64,
    pub a_plus: f64,
}

impl EvasiveAccelPair {
    /// Requires a_min <= a⁻ < 0 < a⁺ <= a_max.
    pub fn new(a_minus: f64, a_plus: f64, a_min: f64, a_max: f64) -> Result<Self> {
        if !(a_minus < 0.0 && a_minus >= a_min) {
            return Err(Error::config("a_minus", format!("{a_minus} not in [{a_min}, 0)")));
        }
        if !(a_plus > 0.0 && a_plus <= a_max) {
            return Err(Error::config("a_plus", format!("{a_plus} not in (0, {a_max}]")));
        }
        Ok(Self { a_minus, a_plus })
    }

    pub(crate) fn new_unchecked(a_minus: f64, a_plus: f64) -> Self {
        Self { a_minus, a_plus }
    }

    /// A(s): the braking acceleration opposing the sign of v (v = 0 counts as forward).
    pub fn opposing(&self, v: f64) -> f64 {
        if v >= 0.0 {
            self.a_minus
        } else {
            self.a_plus
        }
    }
}

/// ũ_dbl: brake at full rate, but never past zero velocity in one step.
pub fn u_dbl(s: &DblIntState, a: &EvasiveAccelPair, delta: f64) -> f64 {
    let stop = -s.v / delta;
    if s.v >= 0.0 {
        a.a_minus.max(stop)
    } else {
        a.a_plus.min(stop)
    }
}

/// N(s) = floor(|v| / (δ|A|)), with ratios within 1e-12 (relative) of an integer snapped to it.
pub fn settle_count(s: &DblIntState, a: &EvasiveAccelPair, delta: f64) -> u64 {
    let r = s.v.abs() / (delta * a.opposing(s.v).abs());
    let n = r.round();
    if (r - n).abs() <= 1e-12 * r.max(1.0) {
        n as u64
    } else {
        r.floor() as u64
    }
}

/// η(s): the position at which the rollout under `u_dbl` stops for good.
pub fn eta(s: &DblIntState, a: &EvasiveAccelPair, delta: f64) -> f64 {
    let big_a = a.opposing(s.v);
    let n = settle_count(s, a, delta) as f64;
    s.p + delta * n * s.v + 0.5 * n * (n - 1.0) * delta * delta * big_a + delta * (s.v + delta * n * big_a)
}

/// min(p, η) - p_min.
pub fn h_low(s: &DblIntState, p_min: f64, a: &EvasiveAccelPair, delta: f64) -> f64 {
    s.p.min(eta(s, a, delta)) - p_min
}

/// p_max - max(p, η).
pub fn h_high(s: &DblIntState, p_max: f64, a: &EvasiveAccelPair, delta: f64) -> f64 {
    p_max - s.p.max(eta(s, a, delta))
}

pub fn low_barrier(p_min: f64, a: EvasiveAccelPair, sim: SimParams) -> BarrierFn<DblIntState, f64> {
    let d = sim.delta;
    BarrierFn::new("h_low", move |s| Ok(h_low(s, p_min, &a, d)), move |s| Ok(u_dbl(s, &a, d)))
}

pub fn high_barrier(p_max: f64, a: EvasiveAccelPair, sim: SimParams) -> BarrierFn<DblIntState, f64> {
    let d = sim.delta;
    BarrierFn::new("h_high", move |s| Ok(h_high(s, p_max, &a, d)), move |s| Ok(u_dbl(s, &a, d)))
}
