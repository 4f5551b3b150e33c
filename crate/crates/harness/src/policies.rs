//! Built-in nominal policies standing in for learned ones.
//!
//! A policy maps an observation to an action; it never sees the raw state.

use dtcbf::dynamics::{car_control_box, fw_control_box, fw_drag};
use dtcbf::params::Config;
use dtcbf::rng::{streams, RngStream};
use dtcbf::{Error, Result};

pub const POLICY_NAMES: [&str; 4] = ["random", "constant", "greedy-waypoint", "greedy-speed"];

pub trait Policy: Send {
    fn act(&mut self, obs: &[f64]) -> Vec<f64>;
}

/// Builds policy `name` for environment `env`; `seed` drives the policy's own stream.
pub fn make_policy(name: &str, env: &str, cfg: &Config, seed: u64) -> Result<Box<dyn Policy>> {
    let (lo, hi) = action_box(env, cfg)?;
    match name {
        "random" => Ok(Box::new(RandomPolicy {
            lo,
            hi,
            rng: RngStream::new(seed, streams::POLICY),
        })),
        "constant" => Ok(Box::new(ConstantPolicy(lo.iter().zip(&hi).map(|(l, h)| 0.5 * (l + h)).collect()))),
        "greedy-waypoint" if is_fw(env) => Ok(Box::new(GreedyWaypoint { cfg: *cfg })),
        "greedy-speed" if env == "car" => Ok(Box::new(GreedySpeed { cfg: *cfg })),
        "greedy-waypoint" | "greedy-speed" => Err(Error::Precondition(format!("policy `{name}` does not apply to `{env}`"))),
        other => Err(Error::UnknownName {
            kind: "policy",
            name: other.to_string(),
        }),
    }
}

fn is_fw(env: &str) -> bool {
    env == "fw" || env == "fixed-wing"
}

fn action_box(env: &str, cfg: &Config) -> Result<(Vec<f64>, Vec<f64>)> {
    use dtcbf::control::ControlVector;
    if is_fw(env) {
        let b = fw_control_box(&cfg.fixed_wing);
        Ok((b.lower.to_vec(), b.upper.to_vec()))
    } else if env == "car" {
        let b = car_control_box(&cfg.car);
        Ok((b.lower.to_vec(), b.upper.to_vec()))
    } else {
        Err(Error::UnknownName {
            kind: "environment",
            name: env.to_string(),
        })
    }
}

pub struct RandomPolicy {
    lo: Vec<f64>,
    hi: Vec<f64>,
    rng: RngStream,
}

impl Policy for RandomPolicy {
    fn act(&mut self, _obs: &[f64]) -> Vec<f64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| self.rng.uniform(*l, *h)).collect()
    }
}

/// Always the centre of the action box.
pub struct ConstantPolicy(Vec<f64>);

impl Policy for ConstantPolicy {
    fn act(&mut self, _obs: &[f64]) -> Vec<f64> {
        self.0.clone()
    }
}

/// Proportional pursuit of the next waypoint: bank toward its bearing,
/// pitch toward its elevation, thrust to hold the middle of the speed range.
pub struct GreedyWaypoint {
    cfg: Config,
}

impl Policy for GreedyWaypoint {
    fn act(&mut self, obs: &[f64]) -> Vec<f64> {
        let (p, g) = (&self.cfg.fixed_wing, self.cfg.sim.gravity);
        let o = self.cfg.fw_env.obs_scale;
        let v = p.speed_min + obs[0] * (p.speed_min - p.speed_max);
        let gamma = obs[1] * p.pitch_max;
        let psi = obs[2].atan2(obs[3]);
        let (dx, dy, dz) = (obs[4] * o, obs[5] * o, obs[6] * o);

        let heading_err = wrap(dy.atan2(dx) - psi);
        let bank = (2.0 * heading_err).clamp(-p.bank_max, p.bank_max);
        let climb = dz.atan2(dx.hypot(dy)).clamp(0.5 * p.pitch_min, 0.5 * p.pitch_max);
        let n = ((gamma.cos() + v * (climb - gamma) / g) / bank.cos()).clamp(p.load_factor_min, p.load_factor_max);
        let v_ref = 0.5 * (p.speed_min + p.speed_max);
        let drag = fw_drag(v.max(1e-3), n, p).unwrap_or(0.0);
        let thrust = (drag + p.weight * gamma.sin() + p.weight / g * (v_ref - v)).clamp(0.0, p.thrust_max);
        vec![thrust, n, bank]
    }
}

/// Full acceleration toward the speed target, proportional lane keeping.
pub struct GreedySpeed {
    cfg: Config,
}

impl Policy for GreedySpeed {
    fn act(&mut self, obs: &[f64]) -> Vec<f64> {
        let (c, vt) = (&self.cfg.car, self.cfg.car_env.target_speed);
        let dt = self.cfg.sim.delta;
        let v = vt * (1.0 + obs[5]);
        let w = c.lane_width;
        let y = w * (1.0 + obs[2]);
        let psi = obs[6].atan2(obs[7]);
        let lane_center = if y < w { 0.5 * w } else { 1.5 * w };
        let accel = ((vt - v) / dt).clamp(c.accel_min, c.accel_max);
        let steer = (-0.05 * (y - lane_center) - psi).clamp(-c.steer_max, c.steer_max);
        vec![accel, steer]
    }
}

fn wrap(a: f64) -> f64 {
    use std::f64::consts::PI;
    let mut a = (a + PI) % (2.0 * PI);
    if a < 0.0 {
        a += 2.0 * PI;
    }
    a - PI
}
