//! Discrete-time steppers f(s, u) for the three systems.
//!
//! Every right-hand side is evaluated from the pre-step state; no control or
//! state clamping happens here.

use std::fmt::Debug;
use std::sync::Arc;

use crate::control::{ControlBox, ControlVector};
use crate::dblint::{u_dbl, EvasiveAccelPair};
use crate::params::{CarParams, FwParams, SimParams};
use crate::{Error, Result};

/// A state viewed as a flat vector (for logging and observation building).
pub trait StateVector: Copy + Debug + PartialEq + Send + Sync + 'static {
    fn to_vec(&self) -> Vec<f64>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwState {
    pub v: f64,
    pub gamma: f64,
    pub psi: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwControl {
    pub thrust: f64,
    pub load_factor: f64,
    pub bank: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CarState {
    pub x: f64,
    pub y: f64,
    pub v: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CarControl {
    pub accel: f64,
    pub steer: f64,
}

/// Two lead cars (lane 1, lane 2) and the controlled ego car.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CarJointState {
    pub lead1: CarState,
    pub lead2: CarState,
    pub ego: CarState,
}

impl CarJointState {
    /// Lead `j` in {1, 2}.
    pub fn lead(&self, j: usize) -> &CarState {
        match j {
            1 => &self.lead1,
            2 => &self.lead2,
            _ => panic!("lead index {j} not in {{1, 2}}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DblIntState {
    pub p: f64,
    pub v: f64,
}

impl StateVector for FwState {
    fn to_vec(&self) -> Vec<f64> {
        vec![self.v, self.gamma, self.psi, self.x, self.y, self.z]
    }
}

impl StateVector for CarState {
    fn to_vec(&self) -> Vec<f64> {
        vec![self.x, self.y, self.v, self.psi]
    }
}

impl StateVector for CarJointState {
    fn to_vec(&self) -> Vec<f64> {
        let mut out = self.lead1.to_vec();
        out.extend(self.lead2.to_vec());
        out.extend(self.ego.to_vec());
        out
    }
}

impl StateVector for DblIntState {
    fn to_vec(&self) -> Vec<f64> {
        vec![self.p, self.v]
    }
}

impl ControlVector for FwControl {
    const DIM: usize = 3;

    fn to_vec(&self) -> Vec<f64> {
        vec![self.thrust, self.load_factor, self.bank]
    }

    fn from_slice(xs: &[f64]) -> Self {
        assert_eq!(xs.len(), 3);
        Self {
            thrust: xs[0],
            load_factor: xs[1],
            bank: xs[2],
        }
    }
}

impl ControlVector for CarControl {
    const DIM: usize = 2;

    fn to_vec(&self) -> Vec<f64> {
        vec![self.accel, self.steer]
    }

    fn from_slice(xs: &[f64]) -> Self {
        assert_eq!(xs.len(), 2);
        Self {
            accel: xs[0],
            steer: xs[1],
        }
    }
}

/// Drag 0.5 R v² A C_D0 + 2 K n² W² / (R v² A).
pub fn fw_drag(v: f64, n: f64, p: &FwParams) -> Result<f64> {
    if !(v > 0.0) || !v.is_finite() {
        return Err(Error::domain("fw_drag", format!("speed {v} must be positive")));
    }
    let q = p.air_density * v * v * p.wing_area;
    Ok(0.5 * q * p.parasitic_drag + 2.0 * p.induced_drag * n * n * p.weight * p.weight / q)
}

pub fn fw_step(s: &FwState, u: &FwControl, sim: &SimParams, p: &FwParams) -> Result<FwState> {
    if !(s.v > 0.0) || !s.v.is_finite() {
        return Err(Error::domain("fw_step", format!("speed {} must be positive", s.v)));
    }
    let (sg, cg) = s.gamma.sin_cos();
    if cg.abs() < 1e-12 {
        return Err(Error::domain("fw_step", format!("cos(gamma) vanishes at gamma = {}", s.gamma)));
    }
    let (d, g) = (sim.delta, sim.gravity);
    let drag = fw_drag(s.v, u.load_factor, p)?;
    let (sm, cm) = u.bank.sin_cos();
    let (sp, cp) = s.psi.sin_cos();
    Ok(FwState {
        v: s.v + d * g * ((u.thrust - drag) / p.weight - sg),
        gamma: s.gamma + d * g * (u.load_factor * cm - cg) / s.v,
        psi: s.psi + d * g * u.load_factor * sm / (s.v * cg),
        x: s.x + d * s.v * cg * cp,
        y: s.y + d * s.v * cg * sp,
        z: s.z + d * s.v * sg,
    })
}

pub fn fw_control_box(p: &FwParams) -> ControlBox<FwControl> {
    ControlBox::new(
        FwControl {
            thrust: 0.0,
            load_factor: p.load_factor_min,
            bank: -p.bank_max,
        },
        FwControl {
            thrust: p.thrust_max,
            load_factor: p.load_factor_max,
            bank: p.bank_max,
        },
    )
}

/// Slip angle β(u₂) = atan(tan(u₂) l_r / (l_f + l_r)).
pub fn car_beta(steer: f64, p: &CarParams) -> f64 {
    (steer.tan() * p.rear_axle / (p.front_axle + p.rear_axle)).atan()
}

/// Inverse of [`car_beta`] on (-π/2, π/2).
pub fn car_beta_inv(beta: f64, p: &CarParams) -> f64 {
    (beta.tan() * (p.front_axle + p.rear_axle) / p.rear_axle).atan()
}

/// Kinematic bicycle model.
pub fn car_step(s: &CarState, u: &CarControl, sim: &SimParams, p: &CarParams) -> CarState {
    let d = sim.delta;
    let beta = car_beta(u.steer, p);
    let (sh, ch) = (s.psi + beta).sin_cos();
    CarState {
        x: s.x + d * s.v * ch,
        y: s.y + d * s.v * sh,
        v: s.v + d * u.accel,
        psi: s.psi + d * (s.v / p.rear_axle) * beta.sin(),
    }
}

pub fn car_control_box(p: &CarParams) -> ControlBox<CarControl> {
    ControlBox::new(
        CarControl {
            accel: p.accel_min,
            steer: -p.steer_max,
        },
        CarControl {
            accel: p.accel_max,
            steer: p.steer_max,
        },
    )
}

/// Worst-case lead braking ũ_dbl with the lead acceleration box.
pub fn lead_worst_case(s: &CarState, sim: &SimParams, p: &CarParams) -> CarControl {
    let pair = EvasiveAccelPair::new_unchecked(p.accel_min, p.accel_max);
    CarControl {
        accel: u_dbl(&DblIntState { p: s.x, v: s.v }, &pair, sim.delta),
        steer: 0.0,
    }
}

/// Joint step in which both leads brake as hard as they can and the ego applies `u`.
/// Leads never reverse, so a rounding residual below zero speed is cut off.
pub fn car_joint_step(s: &CarJointState, u: &CarControl, sim: &SimParams, p: &CarParams) -> CarJointState {
    let lead = |l: &CarState| {
        let mut n = car_step(l, &lead_worst_case(l, sim, p), sim, p);
        n.v = n.v.max(0.0);
        n
    };
    CarJointState {
        lead1: lead(&s.lead1),
        lead2: lead(&s.lead2),
        ego: car_step(&s.ego, u, sim, p),
    }
}

/// p' = p + δv, v' = v + δa.
pub fn dblint_step(s: &DblIntState, a: f64, sim: &SimParams) -> DblIntState {
    DblIntState {
        p: s.p + sim.delta * s.v,
        v: s.v + sim.delta * a,
    }
}

pub type StepFn<S, U> = Arc<dyn Fn(&S, &U) -> Result<S> + Send + Sync>;

/// A stepper together with its admissible control box.
#[derive(Clone)]
pub struct Plant<S, U> {
    step: StepFn<S, U>,
    pub bounds: ControlBox<U>,
}

impl<S, U: ControlVector> Plant<S, U> {
    pub fn new(bounds: ControlBox<U>, step: impl Fn(&S, &U) -> Result<S> + Send + Sync + 'static) -> Self {
        Self {
            step: Arc::new(step),
            bounds,
        }
    }

    pub fn step(&self, s: &S, u: &U) -> Result<S> {
        (self.step)(s, u)
    }
}

impl Plant<FwState, FwControl> {
    pub fn fixed_wing(sim: SimParams, p: FwParams) -> Self {
        Plant::new(fw_control_box(&p), move |s, u| fw_step(s, u, &sim, &p))
    }
}

impl Plant<CarState, CarControl> {
    pub fn car(sim: SimParams, p: CarParams) -> Self {
        Plant::new(car_control_box(&p), move |s, u| Ok(car_step(s, u, &sim, &p)))
    }
}

impl Plant<CarJointState, CarControl> {
    /// Ego-controlled joint system with worst-case lead braking.
    pub fn car_joint(sim: SimParams, p: CarParams) -> Self {
        Plant::new(car_control_box(&p), move |s, u| Ok(car_joint_step(s, u, &sim, &p)))
    }
}

impl Plant<DblIntState, f64> {
    pub fn double_integrator(sim: SimParams, a_min: f64, a_max: f64) -> Self {
        Plant::new(ControlBox::new(a_min, a_max), move |s, a| Ok(dblint_step(s, *a, &sim)))
    }
}
