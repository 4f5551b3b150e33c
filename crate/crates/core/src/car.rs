//! Two-lane car barriers: lane boundaries, lead-car headway and speed limit.
//!
//! All components share the ego evasive maneuver ũ₃ (brake to a stop with
//! ã₃ while steering the heading back to zero), and are composed into
//!
//! h_car = min(h_spd, h_L1, h_H2, max(min(h_H1, h_1), min(h_L2, h_2), min(h_1, h_2)))
//!
//! where h_j is the headway barrier to the lead car in lane j.

use crate::barrier::{rollout_barrier, BarrierFn, RolloutValue, SafetyFunction};
use crate::dblint::{at_rest, eta, u_dbl, EvasiveAccelPair};
use crate::dynamics::{car_beta, car_beta_inv, car_step, CarControl, CarJointState, CarState, DblIntState, Plant};
use crate::params::{CarParams, SimParams};
use crate::{Error, Result};

/// Default step budget for lane rollouts; settling needs at most 96 steps for
/// v <= v_lim and |ψ| <= π/4 with the default parameters.
pub const DEFAULT_LANE_ROLLOUT_STEPS: usize = 128;

/// Heading magnitude below which the evasive rollout counts as straightened out.
pub const HEADING_SETTLED: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LaneBoundary {
    /// Right edge of lane 1.
    L1,
    /// Left edge of lane 1.
    H1,
    /// Right edge of lane 2.
    L2,
    /// Left edge of lane 2.
    H2,
}

impl LaneBoundary {
    pub const ALL: [LaneBoundary; 4] = [LaneBoundary::L1, LaneBoundary::H1, LaneBoundary::L2, LaneBoundary::H2];

    pub fn name(self) -> &'static str {
        match self {
            LaneBoundary::L1 => "h_L1",
            LaneBoundary::H1 => "h_H1",
            LaneBoundary::L2 => "h_L2",
            LaneBoundary::H2 => "h_H2",
        }
    }
}

/// Every term of h_car at one joint state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarComponents {
    pub spd: f64,
    pub l1: f64,
    pub h1: f64,
    pub l2: f64,
    pub h2: f64,
    pub lead1: f64,
    pub lead2: f64,
    /// Steps the lane rollout needed to settle.
    pub lane_steps: usize,
}

impl CarComponents {
    pub fn h_car(&self) -> f64 {
        let lanes = (self.h1.min(self.lead1))
            .max(self.l2.min(self.lead2))
            .max(self.lead1.min(self.lead2));
        self.spd.min(self.l1).min(self.h2).min(lanes)
    }
}

/// Car parameters with the precomputed steering clamp [b_min, b_max] = sin β(∓u₂_max).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarModel {
    pub params: CarParams,
    pub sim: SimParams,
    b_min: f64,
    b_max: f64,
    lane_steps: usize,
}

impl CarModel {
    pub fn new(params: CarParams, sim: SimParams) -> Result<Self> {
        params.validate()?;
        sim.validate()?;
        Ok(Self {
            params,
            sim,
            b_min: car_beta(-params.steer_max, &params).sin(),
            b_max: car_beta(params.steer_max, &params).sin(),
            lane_steps: DEFAULT_LANE_ROLLOUT_STEPS,
        })
    }

    pub fn with_lane_steps(mut self, steps: usize) -> Self {
        self.lane_steps = steps;
        self
    }

    pub fn lane_steps(&self) -> usize {
        self.lane_steps
    }

    /// ã₃ = (a₃⁻, a₃⁺).
    pub fn ego_pair(&self) -> EvasiveAccelPair {
        EvasiveAccelPair::new_unchecked(self.params.evasive_decel, self.params.evasive_accel)
    }

    /// (u₁_min, u₁_max), the worst case for a lead car.
    pub fn lead_pair(&self) -> EvasiveAccelPair {
        EvasiveAccelPair::new_unchecked(self.params.accel_min, self.params.accel_max)
    }

    /// O(s) = l_f |sin ψ| + (W_car / 2) |cos ψ|.
    pub fn offset(&self, s: &CarState) -> f64 {
        let (sp, cp) = s.psi.sin_cos();
        self.params.front_axle * sp.abs() + 0.5 * self.params.car_width * cp.abs()
    }

    /// ũ_steer: the steer that zeroes the heading in one step, saturated at ±u₂_max.
    pub fn evasive_steer(&self, s: &CarState) -> f64 {
        if s.v == 0.0 {
            return 0.0;
        }
        let p = &self.params;
        let arg = -s.psi * p.rear_axle / (self.sim.delta * s.v);
        if arg >= self.b_max {
            p.steer_max
        } else if arg <= self.b_min {
            -p.steer_max
        } else {
            car_beta_inv(arg.asin(), p).clamp(-p.steer_max, p.steer_max)
        }
    }

    /// ũ₃ = (ũ_dbl with ã₃, ũ_steer).
    pub fn evasive(&self, s: &CarState) -> CarControl {
        CarControl {
            accel: u_dbl(&DblIntState { p: s.x, v: s.v }, &self.ego_pair(), self.sim.delta),
            steer: self.evasive_steer(s),
        }
    }

    pub fn rho(&self, b: LaneBoundary, s: &CarState) -> f64 {
        let (o, w) = (self.offset(s), self.params.lane_width);
        match b {
            LaneBoundary::L1 => s.y - o,
            LaneBoundary::H1 => w - o - s.y,
            LaneBoundary::L2 => s.y - o - w,
            LaneBoundary::H2 => 2.0 * w - o - s.y,
        }
    }

    /// The evasive rollout can no longer move the car sideways.
    pub fn lane_settled(s: &CarState) -> bool {
        at_rest(s.v) || s.psi.abs() <= HEADING_SETTLED
    }

    pub fn ego_plant(&self) -> Plant<CarState, CarControl> {
        Plant::car(self.sim, self.params)
    }

    /// One lane barrier built from the generic rollout constructor.
    pub fn lane_barrier(&self, b: LaneBoundary) -> BarrierFn<CarState, CarControl> {
        let (m1, m2) = (*self, *self);
        rollout_barrier(
            b.name(),
            SafetyFunction::new(move |s| m1.rho(b, s)),
            move |s| Ok(m2.evasive(s)),
            self.ego_plant(),
            Self::lane_settled,
            self.lane_steps,
        )
        .into_barrier()
    }

    /// All four lane barrier values from a single evasive rollout.
    pub fn lane_values(&self, s: &CarState) -> Result<([f64; 4], usize)> {
        let mut cur = *s;
        let mut vals = LaneBoundary::ALL.map(|b| self.rho(b, &cur));
        let mut k = 0;
        while !Self::lane_settled(&cur) {
            if k == self.lane_steps {
                return Err(Error::Horizon {
                    name: "lane".into(),
                    max_steps: self.lane_steps,
                });
            }
            cur = car_step(&cur, &self.evasive(&cur), &self.sim, &self.params);
            for (v, b) in vals.iter_mut().zip(LaneBoundary::ALL) {
                *v = v.min(self.rho(b, &cur));
            }
            k += 1;
        }
        Ok((vals, k))
    }

    /// Settling step count of the lane rollout from `s`.
    pub fn lane_settling_steps(&self, s: &CarState) -> Result<usize> {
        self.lane_values(s).map(|(_, k)| k)
    }

    pub fn lane_rollout(&self, b: LaneBoundary, s: &CarState) -> Result<RolloutValue> {
        let (vals, steps) = self.lane_values(s)?;
        let i = LaneBoundary::ALL.iter().position(|x| *x == b).unwrap_or(0);
        Ok(RolloutValue { value: vals[i], steps })
    }

    /// Lead cars keep zero heading, non-negative speed, and stay inside their own lane.
    pub fn check_lead_assumption(&self, s: &CarJointState) -> Result<()> {
        let (w, half) = (self.params.lane_width, 0.5 * self.params.car_width);
        for (j, lead, lo) in [(1, &s.lead1, 0.0), (2, &s.lead2, w)] {
            if lead.psi != 0.0 {
                return Err(Error::LeadAssumption(format!("lead {j} heading {} != 0", lead.psi)));
            }
            if !(lead.v >= 0.0) {
                return Err(Error::LeadAssumption(format!("lead {j} speed {} < 0", lead.v)));
            }
            if !(lead.y - half >= lo && lead.y + half <= lo + w) {
                return Err(Error::LeadAssumption(format!("lead {j} at y = {} leaves lane {j}", lead.y)));
            }
        }
        Ok(())
    }

    /// h_j,lead = η(lead, capped speed; worst-case lead box) - η(ego; ã₃) - D_lead - ṽ₃ τ_head.
    pub fn lead_margin(&self, s: &CarJointState, j: usize) -> Result<f64> {
        if !(j == 1 || j == 2) {
            return Err(Error::domain("lead_margin", format!("lead index {j} not in {{1, 2}}")));
        }
        self.check_lead_assumption(s)?;
        Ok(self.lead_margin_unchecked(s, j))
    }

    fn lead_margin_unchecked(&self, s: &CarJointState, j: usize) -> f64 {
        let lead = s.lead(j);
        let d = self.sim.delta;
        let v3 = s.ego.v.max(0.0);
        let lead_stop = eta(&DblIntState { p: lead.x, v: lead.v.min(v3) }, &self.lead_pair(), d);
        let ego_stop = eta(&DblIntState { p: s.ego.x, v: v3 }, &self.ego_pair(), d);
        lead_stop - ego_stop - self.params.min_gap - v3 * self.params.headway
    }

    /// h_spd = v_lim - max(0, v₃).
    pub fn h_spd(&self, s: &CarState) -> f64 {
        self.params.speed_limit - s.v.max(0.0)
    }

    pub fn components(&self, s: &CarJointState) -> Result<CarComponents> {
        self.check_lead_assumption(s)?;
        let ([l1, h1, l2, h2], lane_steps) = self.lane_values(&s.ego)?;
        Ok(CarComponents {
            spd: self.h_spd(&s.ego),
            l1,
            h1,
            l2,
            h2,
            lead1: self.lead_margin_unchecked(s, 1),
            lead2: self.lead_margin_unchecked(s, 2),
            lane_steps,
        })
    }

    pub fn h_car(&self, s: &CarJointState) -> Result<f64> {
        self.components(s).map(|c| c.h_car())
    }
}

pub fn car_offset(s: &CarState, p: &CarParams) -> f64 {
    let (sp, cp) = s.psi.sin_cos();
    p.front_axle * sp.abs() + 0.5 * p.car_width * cp.abs()
}

pub fn car_evasive_steer(s: &CarState, p: &CarParams, sim: &SimParams) -> Result<f64> {
    Ok(CarModel::new(*p, *sim)?.evasive_steer(s))
}

/// h_L1, h_H1, h_L2, h_H2 on the ego state.
pub fn car_lane_barriers(p: CarParams, sim: SimParams) -> Result<[BarrierFn<CarState, CarControl>; 4]> {
    let m = CarModel::new(p, sim)?;
    Ok(LaneBoundary::ALL.map(|b| m.lane_barrier(b)))
}

pub fn lead_distance_margin(s: &CarJointState, j: usize, p: &CarParams, sim: &SimParams) -> Result<f64> {
    CarModel::new(*p, *sim)?.lead_margin(s, j)
}

/// h_j,lead on the joint state with evasive ũ₃.
pub fn lead_barrier(model: CarModel, j: usize) -> BarrierFn<CarJointState, CarControl> {
    let name = if j == 1 { "h_1_lead" } else { "h_2_lead" };
    BarrierFn::new(name, move |s| model.lead_margin(s, j), move |s: &CarJointState| Ok(model.evasive(&s.ego)))
}

/// h_spd on the joint state with evasive ũ₃.
pub fn speed_barrier(model: CarModel) -> BarrierFn<CarJointState, CarControl> {
    BarrierFn::new("h_spd", move |s: &CarJointState| Ok(model.h_spd(&s.ego)), move |s| Ok(model.evasive(&s.ego)))
}

/// The composed h_car with shared evasive ũ₃.
pub fn car_barrier(model: CarModel) -> BarrierFn<CarJointState, CarControl> {
    BarrierFn::new("h_car", move |s| model.h_car(s), move |s: &CarJointState| Ok(model.evasive(&s.ego)))
        .with_horizon_hint(model.lane_steps)
}
