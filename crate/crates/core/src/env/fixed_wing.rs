use crate::barrier::BarrierFn;
use crate::control::ControlVector;
use crate::dynamics::{FwControl, FwState, Plant, StateVector};
use crate::fixed_wing::{fw_barrier, fw_in_envelope};
use crate::params::{Config, FwEnvConfig, FwParams, SimParams};
use crate::rng::{streams, RngStream};
use crate::{Error, Result, VIOLATION_TOL};

use super::{DoneReason, Environment, StepInfo, StepResult};

/// Number of "subsequent waypoint" slots in the observation.
pub const FW_OBS_SLOTS: usize = 4;

/// scaled v, scaled γ, sin ψ, cos ψ, next waypoint (3), then per slot a delta (3) and a valid flag.
pub const FW_OBS_LEN: usize = 4 + 3 + 4 * FW_OBS_SLOTS;

/// Waypoint following with the flight-envelope barrier.
///
/// Waypoint i+1 lies 100 m further along x than waypoint i with uniform
/// y/z offsets; waypoint 0 is the start position. A waypoint counts as
/// reached once the aircraft's x passes it.
pub struct FwEnv {
    sim: SimParams,
    params: FwParams,
    cfg: FwEnvConfig,
    plant: Plant<FwState, FwControl>,
    barrier: BarrierFn<FwState, FwControl>,
    state: FwState,
    waypoints: Vec<[f64; 3]>,
    next: usize,
    t: usize,
    since_waypoint: usize,
    done: bool,
}

impl FwEnv {
    pub fn new(cfg: &Config) -> Result<Self> {
        cfg.validate()?;
        let (sim, params) = (cfg.sim, cfg.fixed_wing);
        let mut env = Self {
            sim,
            params,
            cfg: cfg.fw_env,
            plant: Plant::fixed_wing(sim, params),
            barrier: fw_barrier(params, sim)?,
            state: cfg.fw_env.initial_state,
            waypoints: Vec::new(),
            next: 0,
            t: 0,
            since_waypoint: 0,
            done: true,
        };
        env.reset(0)?;
        Ok(env)
    }

    pub fn params(&self) -> &FwParams {
        &self.params
    }

    /// Waypoints 1..=count (the start position is not included).
    pub fn waypoints(&self) -> &[[f64; 3]] {
        &self.waypoints
    }

    /// Index into [`waypoints`](Self::waypoints) of the next target.
    pub fn next_waypoint(&self) -> usize {
        self.next
    }

    fn position(s: &FwState) -> [f64; 3] {
        [s.x, s.y, s.z]
    }

    fn distance_to(&self, s: &FwState, i: usize) -> f64 {
        let (p, w) = (Self::position(s), self.waypoints[i]);
        ((w[0] - p[0]).powi(2) + (w[1] - p[1]).powi(2) + (w[2] - p[2]).powi(2)).sqrt()
    }

    fn timeout_steps(&self) -> usize {
        (self.cfg.waypoint_timeout / self.sim.delta).round() as usize
    }
}

impl Environment for FwEnv {
    type State = FwState;
    type Control = FwControl;

    fn name(&self) -> &'static str {
        "fw"
    }

    fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        let mut rng = RngStream::new(seed, streams::ENV);
        let x0 = self.cfg.initial_state;
        let r = self.cfg.lateral_range;
        let mut w = Self::position(&x0);
        self.waypoints.clear();
        for _ in 0..self.cfg.waypoint_count {
            w = [w[0] + self.cfg.waypoint_spacing, w[1] + rng.uniform(-r, r), w[2] + rng.uniform(-r, r)];
            self.waypoints.push(w);
        }
        self.state = x0;
        self.next = 0;
        self.t = 0;
        self.since_waypoint = 0;
        self.done = false;
        Ok(self.observation())
    }

    fn step(&mut self, action: &FwControl) -> Result<StepResult> {
        if self.done {
            return Err(Error::EpisodeDone);
        }
        let (u, clamped) = self.plant.bounds.clamp(action);
        let prev = self.state;
        let d_prev = self.distance_to(&prev, self.next);
        self.t += 1;
        self.since_waypoint += 1;

        let (mut reward, mut cost, mut reason) = (0.0, 0.0, None);
        match self.plant.step(&prev, &u) {
            Ok(s) => {
                self.state = s;
                let d = self.distance_to(&s, self.next);
                reward += self.cfg.reward_scale * (d_prev - d);
                if s.x > self.waypoints[self.next][0] {
                    reward += (-d / self.cfg.bonus_decay).exp();
                    self.next += 1;
                    self.since_waypoint = 0;
                }
                if !fw_in_envelope(&s, &self.params, VIOLATION_TOL) {
                    cost = 1.0;
                }
                if s.z <= 0.0 {
                    reason = Some(DoneReason::Ground);
                } else if self.next == self.waypoints.len() {
                    reason = Some(DoneReason::GoalReached);
                } else if self.since_waypoint > self.timeout_steps() {
                    reason = Some(DoneReason::WaypointTimeout);
                } else if self.t >= self.cfg.max_steps {
                    reason = Some(DoneReason::Horizon);
                }
            }
            Err(Error::Domain { .. }) => {
                // the model is undefined here, which lies far outside the envelope
                cost = 1.0;
                reason = Some(DoneReason::ModelDomain);
            }
            Err(e) => return Err(e),
        }
        self.done = reason.is_some();
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

    fn state(&self) -> &FwState {
        &self.state
    }

    fn observation(&self) -> Vec<f64> {
        let (s, p, o) = (&self.state, &self.params, self.cfg.obs_scale);
        let mut obs = Vec::with_capacity(FW_OBS_LEN);
        // sign convention kept as defined for this observation: 0 at v_min, -1 at v_max
        obs.push((s.v - p.speed_min) / (p.speed_min - p.speed_max));
        obs.push(s.gamma / p.pitch_max);
        obs.push(s.psi.sin());
        obs.push(s.psi.cos());
        let pos = Self::position(s);
        match self.waypoints.get(self.next) {
            Some(w) => obs.extend((0..3).map(|i| (w[i] - pos[i]) / o)),
            None => obs.extend([0.0; 3]),
        }
        for m in 0..FW_OBS_SLOTS {
            let i = self.next + m;
            match (self.waypoints.get(i), self.waypoints.get(i + 1)) {
                (Some(a), Some(b)) => {
                    obs.extend((0..3).map(|k| (b[k] - a[k]) / o));
                    obs.push(1.0);
                }
                _ => obs.extend([0.0; 4]),
            }
        }
        obs
    }

    fn observation_len(&self) -> usize {
        FW_OBS_LEN
    }

    fn plant(&self) -> &Plant<FwState, FwControl> {
        &self.plant
    }

    fn barrier(&self) -> &BarrierFn<FwState, FwControl> {
        &self.barrier
    }

    fn lambda(&self) -> f64 {
        self.sim.lambda
    }

    fn is_done(&self) -> bool {
        self.done
    }
}
