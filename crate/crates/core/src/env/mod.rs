//! Seeded episodic simulators.
//!
//! An [`Environment`] is single-owner mutable state driven by `reset(seed)`
//! and `step(action)`. Actions outside U are clamped and the clamp is
//! reported. Cost is 1 for a step whose resulting state violates a raw
//! safety inequality by more than [`VIOLATION_TOL`](crate::VIOLATION_TOL).
//! [`ShieldedEnv`] puts a safety filter in front of any environment and
//! [`EpisodicEnv`] is the object-safe, vector-valued view used by runners and
//! language bindings.

mod car;
mod fixed_wing;
mod shield;

pub use car::{CarEnv, CAR_OBS_LEN};
pub use fixed_wing::{FwEnv, FW_OBS_LEN, FW_OBS_SLOTS};
pub use shield::{default_candidates, FilterChoice, ShieldedEnv};

use crate::barrier::BarrierFn;
use crate::control::{ControlBox, ControlVector};
use crate::dynamics::{Plant, StateVector};
use crate::filter::FilterMode;
use crate::params::Config;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoneReason {
    Horizon,
    GoalReached,
    WaypointTimeout,
    Ground,
    /// The dynamics left their domain of definition (e.g. non-positive airspeed).
    ModelDomain,
    Collision,
    OffRoad,
}

impl DoneReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DoneReason::Horizon => "horizon",
            DoneReason::GoalReached => "goal",
            DoneReason::WaypointTimeout => "waypoint-timeout",
            DoneReason::Ground => "ground",
            DoneReason::ModelDomain => "model-domain",
            DoneReason::Collision => "collision",
            DoneReason::OffRoad => "off-road",
        }
    }
}

/// Filter outcome carried in the step info of a shielded environment.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionRecord {
    pub mode: FilterMode,
    pub nominal: Vec<f64>,
    pub applied: Vec<f64>,
    pub constraint_value: f64,
    pub override_distance: f64,
    pub line_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StepInfo {
    /// Whether the action passed to this environment was clamped into U.
    pub clamped: bool,
    /// The action as received, before clamping or filtering.
    pub nominal: Vec<f64>,
    /// The action actually applied to the dynamics.
    pub applied: Vec<f64>,
    /// The full state after the step.
    pub raw_state: Vec<f64>,
    pub decision: Option<DecisionRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepResult {
    pub observation: Vec<f64>,
    pub reward: f64,
    /// 0 or 1.
    pub cost: f64,
    pub done: bool,
    pub done_reason: Option<DoneReason>,
    pub info: StepInfo,
}

pub trait Environment: Send {
    type State: StateVector;
    type Control: ControlVector;

    fn name(&self) -> &'static str;

    fn reset(&mut self, seed: u64) -> Result<Vec<f64>>;

    fn step(&mut self, action: &Self::Control) -> Result<StepResult>;

    fn state(&self) -> &Self::State;

    fn observation(&self) -> Vec<f64>;

    fn observation_len(&self) -> usize;

    /// The stepper the barrier is certified for.
    fn plant(&self) -> &Plant<Self::State, Self::Control>;

    fn barrier(&self) -> &BarrierFn<Self::State, Self::Control>;

    fn lambda(&self) -> f64;

    fn is_done(&self) -> bool;

    fn action_bounds(&self) -> ControlBox<Self::Control> {
        self.plant().bounds
    }
}

/// Vector-valued episodic protocol over any [`Environment`].
pub trait EpisodicEnv: Send {
    fn name(&self) -> &'static str;
    fn reset(&mut self, seed: u64) -> Result<Vec<f64>>;
    fn step_vec(&mut self, action: &[f64]) -> Result<StepResult>;
    fn observation_len(&self) -> usize;
    fn action_len(&self) -> usize;
    /// (lower, upper) corners of U.
    fn action_bounds_vec(&self) -> (Vec<f64>, Vec<f64>);
    fn state_vec(&self) -> Vec<f64>;
    fn is_done(&self) -> bool;
}

impl<E: Environment> EpisodicEnv for E {
    fn name(&self) -> &'static str {
        Environment::name(self)
    }

    fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        Environment::reset(self, seed)
    }

    fn step_vec(&mut self, action: &[f64]) -> Result<StepResult> {
        if action.len() != E::Control::DIM {
            return Err(Error::Precondition(format!(
                "action has {} components, expected {}",
                action.len(),
                E::Control::DIM
            )));
        }
        self.step(&E::Control::from_slice(action))
    }

    fn observation_len(&self) -> usize {
        Environment::observation_len(self)
    }

    fn action_len(&self) -> usize {
        E::Control::DIM
    }

    fn action_bounds_vec(&self) -> (Vec<f64>, Vec<f64>) {
        let b = self.action_bounds();
        (b.lower.to_vec(), b.upper.to_vec())
    }

    fn state_vec(&self) -> Vec<f64> {
        self.state().to_vec()
    }

    fn is_done(&self) -> bool {
        Environment::is_done(self)
    }
}

/// Canonical environment names: `fw` (alias `fixed-wing`) and `car`.
pub fn make_env(name: &str, filter: FilterChoice, cfg: &Config) -> Result<Box<dyn EpisodicEnv>> {
    match name {
        "fw" | "fixed-wing" => Ok(boxed(FwEnv::new(cfg)?, filter)),
        "car" => Ok(boxed(CarEnv::new(cfg)?, filter)),
        other => Err(Error::UnknownName {
            kind: "environment",
            name: other.to_string(),
        }),
    }
}

fn boxed<E: Environment + 'static>(env: E, filter: FilterChoice) -> Box<dyn EpisodicEnv> {
    match filter {
        FilterChoice::None => Box::new(env),
        f => Box::new(ShieldedEnv::new(env, f)),
    }
}
