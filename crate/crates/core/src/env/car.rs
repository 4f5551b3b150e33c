use crate::barrier::BarrierFn;
use crate::car::{car_barrier, CarModel};
use crate::control::ControlVector;
use crate::dynamics::{car_step, CarControl, CarJointState, CarState, Plant, StateVector};
use crate::params::{CarEnvConfig, CarParams, Config, SimParams};
use crate::rng::{streams, RngStream};
use crate::{Error, Result, VIOLATION_TOL};

use super::{DoneReason, Environment, StepInfo, StepResult};

/// Lead gaps (2), lateral position, three speeds, sin ψ, cos ψ.
pub const CAR_OBS_LEN: usize = 8;

/// Distance scale of the lead-gap observations (m).
const GAP_SCALE: f64 = 500.0;

#[derive(Debug, Clone, Copy, PartialEq)]
struct LeadPlan {
    target: f64,
    /// Time left before the next retarget (s).
    hold: f64,
}

/// Two-lane road with one lead car per lane.
///
/// Leads drive straight at lane centre. Each holds its target speed for a
/// random time, then picks a new target and accelerates or brakes at the
/// box limit to reach it. A lead the ego car has passed is respawned ahead
/// in the same lane.
pub struct CarEnv {
    model: CarModel,
    cfg: CarEnvConfig,
    plant: Plant<CarJointState, CarControl>,
    barrier: BarrierFn<CarJointState, CarControl>,
    state: CarJointState,
    plans: [LeadPlan; 2],
    rng: RngStream,
    t: usize,
    done: bool,
}

impl CarEnv {
    pub fn new(cfg: &Config) -> Result<Self> {
        cfg.validate()?;
        let model = CarModel::new(cfg.car, cfg.sim)?.with_lane_steps(cfg.car_env.lane_rollout_steps);
        let mut env = Self {
            model,
            cfg: cfg.car_env,
            plant: Plant::car_joint(cfg.sim, cfg.car),
            barrier: car_barrier(model),
            state: CarJointState::default(),
            plans: [LeadPlan { target: 0.0, hold: 0.0 }; 2],
            rng: RngStream::new(0, streams::ENV),
            t: 0,
            done: true,
        };
        env.reset(0)?;
        Ok(env)
    }

    pub fn model(&self) -> &CarModel {
        &self.model
    }

    fn params(&self) -> &CarParams {
        &self.model.params
    }

    fn sim(&self) -> &SimParams {
        &self.model.sim
    }

    fn lane_center(&self, lane: usize) -> f64 {
        (lane as f64 - 0.5) * self.params().lane_width
    }

    /// A fresh lead in `lane` ahead of the ego car.
    fn spawn(&mut self, lane: usize, ego_x: f64) -> (CarState, LeadPlan) {
        let c = self.cfg;
        let x = ego_x + self.rng.uniform(c.lead_offset_min, c.lead_offset_max);
        let v = self.rng.uniform(0.0, c.lead_speed_max);
        let hold = self.rng.uniform(c.retarget_min, c.retarget_max);
        (
            CarState { x, y: self.lane_center(lane), v, psi: 0.0 },
            LeadPlan { target: v, hold },
        )
    }

    fn lead_step(&mut self, j: usize) -> CarState {
        let (lead, plan) = (*self.state.lead(j), self.plans[j - 1]);
        let mut plan = plan;
        if plan.hold <= 0.0 {
            plan.target = self.rng.uniform(0.0, self.cfg.lead_speed_max);
            plan.hold = self.rng.uniform(self.cfg.retarget_min, self.cfg.retarget_max);
        }
        plan.hold -= self.sim().delta;
        self.plans[j - 1] = plan;
        let p = self.params();
        let accel = ((plan.target - lead.v) / self.sim().delta).clamp(p.accel_min, p.accel_max);
        let mut next = car_step(&lead, &CarControl { accel, steer: 0.0 }, self.sim(), p);
        next.v = next.v.max(0.0);
        next
    }

    /// Raw gap margin x_j - x₃ - D_lead - max(0, v₃) τ_head.
    fn gap_margin(&self, s: &CarJointState, j: usize) -> f64 {
        let p = self.params();
        s.lead(j).x - s.ego.x - p.min_gap - s.ego.v.max(0.0) * p.headway
    }

    /// Whether any raw safety inequality is violated by more than the tolerance.
    pub fn violates(&self, s: &CarJointState) -> bool {
        let m = &self.model;
        let (g1, g2) = (self.gap_margin(s, 1), self.gap_margin(s, 2));
        let h1 = m.rho(crate::car::LaneBoundary::H1, &s.ego);
        let l2 = m.rho(crate::car::LaneBoundary::L2, &s.ego);
        let lanes = h1.min(g1).max(l2.min(g2)).max(g1.min(g2));
        let worst = m
            .h_spd(&s.ego)
            .min(m.rho(crate::car::LaneBoundary::L1, &s.ego))
            .min(m.rho(crate::car::LaneBoundary::H2, &s.ego))
            .min(lanes);
        worst < -VIOLATION_TOL
    }

    fn collided(&self, s: &CarJointState) -> bool {
        let (w, o) = (self.params().lane_width, self.model.offset(&s.ego));
        let (lo, hi) = (s.ego.y - o, s.ego.y + o);
        (1..=2).any(|j| {
            let lane = ((j - 1) as f64 * w, j as f64 * w);
            let gap = s.lead(j).x - s.ego.x;
            lo < lane.1 && hi > lane.0 && gap >= 0.0 && gap < self.params().min_gap
        })
    }

    fn off_road(&self, s: &CarJointState) -> bool {
        let m = &self.model;
        m.rho(crate::car::LaneBoundary::L1, &s.ego) < -VIOLATION_TOL
            || m.rho(crate::car::LaneBoundary::H2, &s.ego) < -VIOLATION_TOL
    }
}

impl Environment for CarEnv {
    type State = CarJointState;
    type Control = CarControl;

    fn name(&self) -> &'static str {
        "car"
    }

    fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        self.rng = RngStream::new(seed, streams::ENV);
        let ego = CarState {
            x: 0.0,
            y: self.lane_center(1),
            v: self.cfg.initial_speed_fraction * self.cfg.target_speed,
            psi: 0.0,
        };
        for _ in 0..self.cfg.max_rejections {
            let (l1, p1) = self.spawn(1, ego.x);
            let (l2, p2) = self.spawn(2, ego.x);
            let s = CarJointState { lead1: l1, lead2: l2, ego };
            if self.model.h_car(&s)? >= 0.0 {
                self.state = s;
                self.plans = [p1, p2];
                self.t = 0;
                self.done = false;
                return Ok(self.observation());
            }
        }
        Err(Error::config(
            "car_env.max_rejections",
            format!("no safe initial state in {} draws", self.cfg.max_rejections),
        ))
    }

    fn step(&mut self, action: &CarControl) -> Result<StepResult> {
        if self.done {
            return Err(Error::EpisodeDone);
        }
        let (u, clamped) = self.plant.bounds.clamp(action);
        let lead1 = self.lead_step(1);
        let lead2 = self.lead_step(2);
        let ego = car_step(&self.state.ego, &u, self.sim(), self.params());
        let s = CarJointState { lead1, lead2, ego };
        self.model
            .check_lead_assumption(&s)
            .map_err(|e| Error::Invariant(format!("lead dynamics broke the lead assumption: {e}")))?;
        self.t += 1;

        let cost = if self.violates(&s) { 1.0 } else { 0.0 };
        let reason = if self.collided(&s) {
            Some(DoneReason::Collision)
        } else if self.off_road(&s) {
            Some(DoneReason::OffRoad)
        } else if self.t >= self.cfg.max_steps {
            Some(DoneReason::Horizon)
        } else {
            None
        };
        let vt = self.cfg.target_speed;
        let reward = 1.0 - (s.ego.v - vt).abs() / vt;
        self.state = s;
        self.done = reason.is_some();
        if !self.done {
            for j in 1..=2 {
                if self.state.ego.x > self.state.lead(j).x {
                    let (lead, plan) = self.spawn(j, self.state.ego.x);
                    if j == 1 {
                        self.state.lead1 = lead;
                    } else {
                        self.state.lead2 = lead;
                    }
                    self.plans[j - 1] = plan;
                }
            }
        }
        Ok(StepResult {
            observation: self.observation(),
            reward,
            cost,
            done: self.done,
            done_reason: reason,
            info: StepInfo {
                clamped,
                nominal: action.to_vec(),
                applied: u.to_vec(),
                raw_state: self.state.to_vec(),
                decision: None,
            },
        })
    }

    fn state(&self) -> &CarJointState {
        &self.state
    }

    fn observation(&self) -> Vec<f64> {
        let s = &self.state;
        let (w, vt) = (self.params().lane_width, self.cfg.target_speed);
        vec![
            (s.lead1.x - s.ego.x - GAP_SCALE) / GAP_SCALE,
            (s.lead2.x - s.ego.x - GAP_SCALE) / GAP_SCALE,
            (s.ego.y - w) / w,
            (s.lead1.v - vt) / vt,
            (s.lead2.v - vt) / vt,
            (s.ego.v - vt) / vt,
            s.ego.psi.sin(),
            s.ego.psi.cos(),
        ]
    }

    fn observation_len(&self) -> usize {
        CAR_OBS_LEN
    }

    fn plant(&self) -> &Plant<CarJointState, CarControl> {
        &self.plant
    }

    fn barrier(&self) -> &BarrierFn<CarJointState, CarControl> {
        &self.barrier
    }

    fn lambda(&self) -> f64 {
        self.sim().lambda
    }

    fn is_done(&self) -> bool {
        self.done
    }
}
