//! Parameter sets and the human-editable config file.
//!
//! Internal units are SI throughout (m, s, rad, N). The config file is TOML
//! with one `key = value` per parameter. Angles are given with an explicit
//! `_deg` or `_rad` suffix and road speeds with `_mph` or `_mps`; conversion
//! happens here and nowhere else. Missing keys fall back to the defaults
//! below, unknown keys are rejected.
//!
//! ```toml
//! [sim]
//! delta = 0.1
//! lambda = 0.5
//!
//! [fixed_wing]
//! bank_max_deg = 30
//!
//! [car]
//! speed_limit_mph = 70
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::FwState;
use crate::{Error, Result};

const MPH_TO_MPS: f64 = 0.44704;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    /// Timestep (s).
    pub delta: f64,
    /// Gravitational acceleration (m/s²).
    pub gravity: f64,
    /// Barrier decay rate in (0, 1].
    pub lambda: f64,
}

impl Default for SimParams {
    fn default() -> Self {
        Self {
            delta: 0.1,
            gravity: 9.81,
            lambda: 0.5,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        positive("sim.delta", self.delta)?;
        positive("sim.gravity", self.gravity)?;
        if !(self.lambda > 0.0 && self.lambda <= 1.0) {
            return Err(Error::config("sim.lambda", format!("{} not in (0, 1]", self.lambda)));
        }
        Ok(())
    }
}

/// Airframe and flight-envelope parameters of the fixed-wing model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwParams {
    pub air_density: f64,
    pub wing_area: f64,
    pub weight: f64,
    pub thrust_max: f64,
    pub load_factor_min: f64,
    pub load_factor_max: f64,
    pub parasitic_drag: f64,
    pub induced_drag: f64,
    pub bank_max: f64,
    pub speed_min: f64,
    pub speed_max: f64,
    pub pitch_min: f64,
    pub pitch_max: f64,
    pub altitude_floor: f64,
}

impl Default for FwParams {
    fn default() -> Self {
        Self {
            air_density: 1.2251,
            wing_area: 1.058,
            weight: 68.68,
            thrust_max: 20.60,
            load_factor_min: -1.0,
            load_factor_max: 2.5,
            parasitic_drag: 0.02544,
            induced_drag: 0.059,
            bank_max: 30f64.to_radians(),
            speed_min: 15.0,
            speed_max: 20.0,
            pitch_min: -(10f64.to_radians()),
            pitch_max: 10f64.to_radians(),
            altitude_floor: 400.0,
        }
    }
}

impl FwParams {
    pub fn validate(&self) -> Result<()> {
        positive("fixed_wing.air_density", self.air_density)?;
        positive("fixed_wing.wing_area", self.wing_area)?;
        positive("fixed_wing.weight", self.weight)?;
        positive("fixed_wing.thrust_max", self.thrust_max)?;
        positive("fixed_wing.bank_max", self.bank_max)?;
        positive("fixed_wing.speed_min", self.speed_min)?;
        finite("fixed_wing.altitude_floor", self.altitude_floor)?;
        nonnegative("fixed_wing.parasitic_drag", self.parasitic_drag)?;
        nonnegative("fixed_wing.induced_drag", self.induced_drag)?;
        if !(self.load_factor_max > 1.0) {
            return Err(Error::config("fixed_wing.load_factor_max", "must exceed 1"));
        }
        if !(self.load_factor_min < self.load_factor_max) {
            return Err(Error::config("fixed_wing.load_factor_min", "must be below load_factor_max"));
        }
        if !(self.speed_max > self.speed_min) {
            return Err(Error::config("fixed_wing.speed_max", "must exceed speed_min"));
        }
        if !(self.pitch_max > 0.0 && self.pitch_max < std::f64::consts::FRAC_PI_2) {
            return Err(Error::config("fixed_wing.pitch_max", "must lie in (0, pi/2)"));
        }
        if !(self.pitch_min < 0.0 && self.pitch_min > -std::f64::consts::FRAC_PI_2) {
            return Err(Error::config("fixed_wing.pitch_min", "must lie in (-pi/2, 0)"));
        }
        Ok(())
    }
}

/// Vehicle, road and headway parameters of the car model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarParams {
    /// Distance from the centre of gravity to the front axle, l_f (m).
    pub front_axle: f64,
    /// Distance from the centre of gravity to the rear axle, l_r (m).
    pub rear_axle: f64,
    /// Acceleration box shared by all vehicles (m/s²).
    pub accel_min: f64,
    pub accel_max: f64,
    /// Evasive braking a₃⁻ (< 0) and evasive acceleration a₃⁺ (> 0) of the ego car.
    pub evasive_decel: f64,
    pub evasive_accel: f64,
    /// Front-wheel steering limit u₂_max (rad).
    pub steer_max: f64,
    /// Minimum time headway τ_head (s).
    pub headway: f64,
    /// Minimum inter-vehicle distance D_lead (m).
    pub min_gap: f64,
    pub car_width: f64,
    pub lane_width: f64,
    /// Speed limit v_lim (m/s).
    pub speed_limit: f64,
}

impl Default for CarParams {
    fn default() -> Self {
        Self {
            front_axle: 1.17,
            rear_axle: 1.77,
            accel_min: -2.87,
            accel_max: 2.87,
            evasive_decel: -2.86,
            evasive_accel: 2.86,
            steer_max: 1f64.to_radians(),
            headway: 1.8,
            min_gap: 5.0,
            car_width: 1.83,
            lane_width: 3.6,
            speed_limit: 70.0 * MPH_TO_MPS,
        }
    }
}

impl CarParams {
    pub fn validate(&self) -> Result<()> {
        positive("car.front_axle", self.front_axle)?;
        positive("car.rear_axle", self.rear_axle)?;
        positive("car.car_width", self.car_width)?;
        positive("car.speed_limit", self.speed_limit)?;
        nonnegative("car.headway", self.headway)?;
        nonnegative("car.min_gap", self.min_gap)?;
        if !(self.accel_min < 0.0 && self.accel_max > 0.0) {
            return Err(Error::config("car.accel_min", "acceleration box must straddle zero"));
        }
        if !(self.evasive_decel >= self.accel_min && self.evasive_decel < 0.0) {
            return Err(Error::config("car.evasive_decel", "must lie in [accel_min, 0)"));
        }
        if !(self.evasive_accel > 0.0 && self.evasive_accel <= self.accel_max) {
            return Err(Error::config("car.evasive_accel", "must lie in (0, accel_max]"));
        }
        if !(self.car_width < self.lane_width) {
            return Err(Error::config("car.car_width", "must be narrower than lane_width"));
        }
        if !(self.steer_max > 0.0 && self.steer_max < std::f64::consts::FRAC_PI_2) {
            return Err(Error::config("car.steer_max", "must lie in (0, pi/2)"));
        }
        Ok(())
    }
}

/// Scalars of the fixed-wing waypoint environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwEnvConfig {
    pub waypoint_count: usize,
    /// x-distance between consecutive waypoints (m).
    pub waypoint_spacing: f64,
    /// Half-width of the uniform y/z waypoint offsets (m).
    pub lateral_range: f64,
    /// Position scale O of the observation (m).
    pub obs_scale: f64,
    pub reward_scale: f64,
    /// Length scale of the waypoint bonus exp(-d / decay) (m).
    pub bonus_decay: f64,
    pub max_steps: usize,
    /// Time allowed to reach the next waypoint (s).
    pub waypoint_timeout: f64,
    pub initial_state: FwState,
}

impl Default for FwEnvConfig {
    fn default() -> Self {
        Self {
            waypoint_count: 5,
            waypoint_spacing: 100.0,
            lateral_range: 25.0,
            obs_scale: 50.0,
            reward_scale: 0.01,
            bonus_decay: 25.0,
            max_steps: 1000,
            waypoint_timeout: 10.0,
            initial_state: FwState {
                v: 17.5,
                gamma: 0.0,
                psi: 0.0,
                x: 0.0,
                y: 0.0,
                z: 500.0,
            },
        }
    }
}

impl FwEnvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.waypoint_count == 0 {
            return Err(Error::config("fw_env.waypoint_count", "must be positive"));
        }
        if self.max_steps == 0 {
            return Err(Error::config("fw_env.max_steps", "must be positive"));
        }
        positive("fw_env.waypoint_spacing", self.waypoint_spacing)?;
        nonnegative("fw_env.lateral_range", self.lateral_range)?;
        positive("fw_env.obs_scale", self.obs_scale)?;
        positive("fw_env.bonus_decay", self.bonus_decay)?;
        positive("fw_env.waypoint_timeout", self.waypoint_timeout)?;
        finite("fw_env.reward_scale", self.reward_scale)?;
        positive("fw_env.initial_v", self.initial_state.v)?;
        Ok(())
    }
}

/// Scalars of the two-lane car environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarEnvConfig {
    /// Range of the initial lead offset ahead of the ego car (m).
    pub lead_offset_min: f64,
    pub lead_offset_max: f64,
    /// Lead speeds and target speeds are drawn from [0, lead_speed_max] (m/s).
    pub lead_speed_max: f64,
    /// Range of the time a lead holds its target before retargeting (s).
    pub retarget_min: f64,
    pub retarget_max: f64,
    /// Speed goal v_tgt of the ego car (m/s).
    pub target_speed: f64,
    pub initial_speed_fraction: f64,
    pub max_steps: usize,
    pub max_rejections: usize,
    /// Step budget of the lane-boundary rollouts.
    pub lane_rollout_steps: usize,
}

impl Default for CarEnvConfig {
    fn default() -> Self {
        Self {
            lead_offset_min: 100.0,
            lead_offset_max: 500.0,
            lead_speed_max: 70.0 * MPH_TO_MPS,
            retarget_min: 0.0,
            retarget_max: 5.0,
            target_speed: 70.0 * MPH_TO_MPS,
            initial_speed_fraction: 0.95,
            max_steps: 1000,
            max_rejections: 10_000,
            lane_rollout_steps: crate::car::DEFAULT_LANE_ROLLOUT_STEPS,
        }
    }
}

impl CarEnvConfig {
    pub fn validate(&self) -> Result<()> {
        positive("car_env.lead_offset_min", self.lead_offset_min)?;
        if !(self.lead_offset_max >= self.lead_offset_min) {
            return Err(Error::config("car_env.lead_offset_max", "must be >= lead_offset_min"));
        }
        positive("car_env.lead_speed_max", self.lead_speed_max)?;
        nonnegative("car_env.retarget_min", self.retarget_min)?;
        if !(self.retarget_max >= self.retarget_min) {
            return Err(Error::config("car_env.retarget_max", "must be >= retarget_min"));
        }
        positive("car_env.target_speed", self.target_speed)?;
        positive("car_env.initial_speed_fraction", self.initial_speed_fraction)?;
        if self.max_steps == 0 || self.max_rejections == 0 || self.lane_rollout_steps == 0 {
            return Err(Error::config("car_env", "step counts must be positive"));
        }
        Ok(())
    }
}

/// Everything a config file can set.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Config {
    pub sim: SimParams,
    pub fixed_wing: FwParams,
    pub car: CarParams,
    pub fw_env: FwEnvConfig,
    pub car_env: CarEnvConfig,
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        self.sim.validate()?;
        self.fixed_wing.validate()?;
        self.car.validate()?;
        self.fw_env.validate()?;
        self.car_env.validate()
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let root: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
        let known = ["sim", "fixed_wing", "car", "fw_env", "car_env"];
        for key in root.keys() {
            if !known.contains(&key.as_str()) {
                return Err(Error::config(key.clone(), "unknown section"));
            }
        }
        let d = Config::default();

        let mut s = Section::new("sim", &root)?;
        let sim = SimParams {
            delta: s.scalar("delta", d.sim.delta)?,
            gravity: s.scalar("gravity", d.sim.gravity)?,
            lambda: s.scalar("lambda", d.sim.lambda)?,
        };
        s.finish()?;

        let f = &d.fixed_wing;
        let mut s = Section::new("fixed_wing", &root)?;
        let fixed_wing = FwParams {
            air_density: s.scalar("air_density", f.air_density)?,
            wing_area: s.scalar("wing_area", f.wing_area)?,
            weight: s.scalar("weight", f.weight)?,
            thrust_max: s.scalar("thrust_max", f.thrust_max)?,
            load_factor_min: s.scalar("load_factor_min", f.load_factor_min)?,
            load_factor_max: s.scalar("load_factor_max", f.load_factor_max)?,
            parasitic_drag: s.scalar("parasitic_drag", f.parasitic_drag)?,
            induced_drag: s.scalar("induced_drag", f.induced_drag)?,
            bank_max: s.angle(("bank_max_rad", "bank_max_deg"), f.bank_max)?,
            speed_min: s.scalar("speed_min", f.speed_min)?,
            speed_max: s.scalar("speed_max", f.speed_max)?,
            pitch_min: s.angle(("pitch_min_rad", "pitch_min_deg"), f.pitch_min)?,
            pitch_max: s.angle(("pitch_max_rad", "pitch_max_deg"), f.pitch_max)?,
            altitude_floor: s.scalar("altitude_floor", f.altitude_floor)?,
        };
        s.finish()?;

        let c = &d.car;
        let mut s = Section::new("car", &root)?;
        let car = CarParams {
            front_axle: s.scalar("front_axle", c.front_axle)?,
            rear_axle: s.scalar("rear_axle", c.rear_axle)?,
            accel_min: s.scalar("accel_min", c.accel_min)?,
            accel_max: s.scalar("accel_max", c.accel_max)?,
            evasive_decel: s.scalar("evasive_decel", c.evasive_decel)?,
            evasive_accel: s.scalar("evasive_accel", c.evasive_accel)?,
            steer_max: s.angle(("steer_max_rad", "steer_max_deg"), c.steer_max)?,
            headway: s.scalar("headway", c.headway)?,
            min_gap: s.scalar("min_gap", c.min_gap)?,
            car_width: s.scalar("car_width", c.car_width)?,
            lane_width: s.scalar("lane_width", c.lane_width)?,
            speed_limit: s.speed(("speed_limit_mps", "speed_limit_mph"), c.speed_limit)?,
        };
        s.finish()?;

        let e = &d.fw_env;
        let mut s = Section::new("fw_env", &root)?;
        let fw_env = FwEnvConfig {
            waypoint_count: s.count("waypoint_count", e.waypoint_count)?,
            waypoint_spacing: s.scalar("waypoint_spacing", e.waypoint_spacing)?,
            lateral_range: s.scalar("lateral_range", e.lateral_range)?,
            obs_scale: s.scalar("obs_scale", e.obs_scale)?,
            reward_scale: s.scalar("reward_scale", e.reward_scale)?,
            bonus_decay: s.scalar("bonus_decay", e.bonus_decay)?,
            max_steps: s.count("max_steps", e.max_steps)?,
            waypoint_timeout: s.scalar("waypoint_timeout", e.waypoint_timeout)?,
            initial_state: FwState {
                v: s.scalar("initial_v", e.initial_state.v)?,
                gamma: s.angle(("initial_gamma_rad", "initial_gamma_deg"), e.initial_state.gamma)?,
                psi: s.angle(("initial_psi_rad", "initial_psi_deg"), e.initial_state.psi)?,
                x: s.scalar("initial_x", e.initial_state.x)?,
                y: s.scalar("initial_y", e.initial_state.y)?,
                z: s.scalar("initial_z", e.initial_state.z)?,
            },
        };
        s.finish()?;

        let e = &d.car_env;
        let mut s = Section::new("car_env", &root)?;
        let car_env = CarEnvConfig {
            lead_offset_min: s.scalar("lead_offset_min", e.lead_offset_min)?,
            lead_offset_max: s.scalar("lead_offset_max", e.lead_offset_max)?,
            lead_speed_max: s.speed(("lead_speed_max_mps", "lead_speed_max_mph"), e.lead_speed_max)?,
            retarget_min: s.scalar("retarget_min", e.retarget_min)?,
            retarget_max: s.scalar("retarget_max", e.retarget_max)?,
            target_speed: s.speed(("target_speed_mps", "target_speed_mph"), e.target_speed)?,
            initial_speed_fraction: s.scalar("initial_speed_fraction", e.initial_speed_fraction)?,
            max_steps: s.count("max_steps", e.max_steps)?,
            max_rejections: s.count("max_rejections", e.max_rejections)?,
            lane_rollout_steps: s.count("lane_rollout_steps", e.lane_rollout_steps)?,
        };
        s.finish()?;

        let cfg = Config {
            sim,
            fixed_wing,
            car,
            fw_env,
            car_env,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serialises every field with SI keys; `from_toml_str(to_toml_string(c)) == c`.
    pub fn to_toml_string(&self) -> String {
        let mut out = String::new();
        let mut section = |name: &str, rows: &[(&str, Value)]| {
            let _ = writeln!(out, "[{name}]");
            for (k, v) in rows {
                match v {
                    Value::F(x) => {
                        let _ = writeln!(out, "{k} = {x:?}");
                    }
                    Value::N(n) => {
                        let _ = writeln!(out, "{k} = {n}");
                    }
                }
            }
            out.push('\n');
        };
        use Value::{F, N};
        let s = &self.sim;
        section(
            "sim",
            &[("delta", F(s.delta)), ("gravity", F(s.gravity)), ("lambda", F(s.lambda))],
        );
        let f = &self.fixed_wing;
        section(
            "fixed_wing",
            &[
                ("air_density", F(f.air_density)),
                ("wing_area", F(f.wing_area)),
                ("weight", F(f.weight)),
                ("thrust_max", F(f.thrust_max)),
                ("load_factor_min", F(f.load_factor_min)),
                ("load_factor_max", F(f.load_factor_max)),
                ("parasitic_drag", F(f.parasitic_drag)),
                ("induced_drag", F(f.induced_drag)),
                ("bank_max_rad", F(f.bank_max)),
                ("speed_min", F(f.speed_min)),
                ("speed_max", F(f.speed_max)),
                ("pitch_min_rad", F(f.pitch_min)),
                ("pitch_max_rad", F(f.pitch_max)),
                ("altitude_floor", F(f.altitude_floor)),
            ],
        );
        let c = &self.car;
        section(
            "car",
            &[
                ("front_axle", F(c.front_axle)),
                ("rear_axle", F(c.rear_axle)),
                ("accel_min", F(c.accel_min)),
                ("accel_max", F(c.accel_max)),
                ("evasive_decel", F(c.evasive_decel)),
                ("evasive_accel", F(c.evasive_accel)),
                ("steer_max_rad", F(c.steer_max)),
                ("headway", F(c.headway)),
                ("min_gap", F(c.min_gap)),
                ("car_width", F(c.car_width)),
                ("lane_width", F(c.lane_width)),
                ("speed_limit_mps", F(c.speed_limit)),
            ],
        );
        let e = &self.fw_env;
        let x0 = &e.initial_state;
        section(
            "fw_env",
            &[
                ("waypoint_count", N(e.waypoint_count)),
                ("waypoint_spacing", F(e.waypoint_spacing)),
                ("lateral_range", F(e.lateral_range)),
                ("obs_scale", F(e.obs_scale)),
                ("reward_scale", F(e.reward_scale)),
                ("bonus_decay", F(e.bonus_decay)),
                ("max_steps", N(e.max_steps)),
                ("waypoint_timeout", F(e.waypoint_timeout)),
                ("initial_v", F(x0.v)),
                ("initial_gamma_rad", F(x0.gamma)),
                ("initial_psi_rad", F(x0.psi)),
                ("initial_x", F(x0.x)),
                ("initial_y", F(x0.y)),
                ("initial_z", F(x0.z)),
            ],
        );
        let e = &self.car_env;
        section(
            "car_env",
            &[
                ("lead_offset_min", F(e.lead_offset_min)),
                ("lead_offset_max", F(e.lead_offset_max)),
                ("lead_speed_max_mps", F(e.lead_speed_max)),
                ("retarget_min", F(e.retarget_min)),
                ("retarget_max", F(e.retarget_max)),
                ("target_speed_mps", F(e.target_speed)),
                ("initial_speed_fraction", F(e.initial_speed_fraction)),
                ("max_steps", N(e.max_steps)),
                ("max_rejections", N(e.max_rejections)),
                ("lane_rollout_steps", N(e.lane_rollout_steps)),
            ],
        );
        out
    }
}

enum Value {
    F(f64),
    N(usize),
}

/// Reads a config file and returns its validated configuration.
pub fn load_config(path: impl AsRef<Path>) -> Result<Config> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    Config::from_toml_str(&text)
}

/// Reads the physical parameter sets from a config file.
pub fn load_params(path: impl AsRef<Path>) -> Result<(SimParams, FwParams, CarParams)> {
    let cfg = load_config(path)?;
    Ok((cfg.sim, cfg.fixed_wing, cfg.car))
}

pub fn write_config(path: impl AsRef<Path>, cfg: &Config) -> Result<()> {
    std::fs::write(path, cfg.to_toml_string())?;
    Ok(())
}

/// Writes the physical parameter sets with SI keys; environment scalars are
/// left at their defaults. `load_params` of the result returns the inputs bit-exactly.
pub fn write_params(path: impl AsRef<Path>, sim: &SimParams, fw: &FwParams, car: &CarParams) -> Result<()> {
    let cfg = Config {
        sim: *sim,
        fixed_wing: *fw,
        car: *car,
        ..Config::default()
    };
    write_config(path, &cfg)
}

struct Section<'a> {
    name: &'static str,
    table: Option<&'a toml::Table>,
    used: BTreeSet<&'static str>,
}

impl<'a> Section<'a> {
    fn new(name: &'static str, root: &'a toml::Table) -> Result<Self> {
        let table = match root.get(name) {
            None => None,
            Some(toml::Value::Table(t)) => Some(t),
            Some(_) => return Err(Error::config(name, "expected a table")),
        };
        Ok(Self {
            name,
            table,
            used: BTreeSet::new(),
        })
    }

    fn field(&self, key: &str) -> String {
        format!("{}.{key}", self.name)
    }

    fn raw(&mut self, key: &'static str) -> Result<Option<f64>> {
        self.used.insert(key);
        let Some(v) = self.table.and_then(|t| t.get(key)) else {
            return Ok(None);
        };
        let x = match v {
            toml::Value::Float(x) => *x,
            toml::Value::Integer(i) => *i as f64,
            _ => return Err(Error::config(self.field(key), "expected a number")),
        };
        if !x.is_finite() {
            return Err(Error::config(self.field(key), "must be finite"));
        }
        Ok(Some(x))
    }

    fn scalar(&mut self, key: &'static str, default: f64) -> Result<f64> {
        Ok(self.raw(key)?.unwrap_or(default))
    }

    fn count(&mut self, key: &'static str, default: usize) -> Result<usize> {
        self.used.insert(key);
        match self.table.and_then(|t| t.get(key)) {
            None => Ok(default),
            Some(toml::Value::Integer(i)) if *i >= 0 => Ok(*i as usize),
            Some(_) => Err(Error::config(self.field(key), "expected a non-negative integer")),
        }
    }

    fn either(
        &mut self,
        base: &str,
        si: (&'static str, f64),
        alt: (&'static str, f64),
        default: f64,
    ) -> Result<f64> {
        match (self.raw(si.0)?, self.raw(alt.0)?) {
            (Some(_), Some(_)) => Err(Error::config(
                self.field(base),
                format!("set either {} or {}, not both", si.0, alt.0),
            )),
            (Some(x), None) => Ok(x * si.1),
            (None, Some(x)) => Ok(x * alt.1),
            (None, None) => Ok(default),
        }
    }

    /// `keys` is the (radians, degrees) key pair.
    fn angle(&mut self, keys: (&'static str, &'static str), default: f64) -> Result<f64> {
        let base = keys.0.trim_end_matches("_rad");
        self.either(base, (keys.0, 1.0), (keys.1, 1f64.to_radians()), default)
    }

    /// `keys` is the (m/s, mph) key pair.
    fn speed(&mut self, keys: (&'static str, &'static str), default: f64) -> Result<f64> {
        let base = keys.0.trim_end_matches("_mps");
        self.either(base, (keys.0, 1.0), (keys.1, MPH_TO_MPS), default)
    }

    fn finish(self) -> Result<()> {
        if let Some(t) = self.table {
            for key in t.keys() {
                if !self.used.contains(key.as_str()) {
                    return Err(Error::config(self.field(key), "unknown key"));
                }
            }
        }
        Ok(())
    }
}

fn finite(field: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, "must be finite"))
    }
}

fn positive(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("{x} must be positive")))
    }
}

fn nonnegative(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x >= 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("{x} must be non-negative")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        Config::default().validate().unwrap();
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn degrees_and_mph_convert_at_load() {
        let cfg = Config::from_toml_str(
            "[fixed_wing]\nbank_max_deg = 30\n[car]\nspeed_limit_mph = 70\nsteer_max_deg = 1\n",
        )
        .unwrap();
        assert!((cfg.fixed_wing.bank_max - 0.5236).abs() < 1e-4);
        assert_eq!(cfg.fixed_wing.bank_max, 30f64.to_radians());
        assert!((cfg.car.speed_limit - 31.2928).abs() < 1e-12);
        assert_eq!(cfg.car.steer_max, 1f64.to_radians());
    }

    #[test]
    fn lambda_zero_is_rejected() {
        let err = Config::from_toml_str("[sim]\nlambda = 0\n").unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "sim.lambda"), "{err}");
    }

    #[test]
    fn both_unit_variants_is_an_error() {
        let err = Config::from_toml_str("[car]\nspeed_limit_mph = 70\nspeed_limit_mps = 31\n").unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        assert!(Config::from_toml_str("[car]\nwheel_count = 4\n").is_err());
        assert!(Config::from_toml_str("[boat]\nx = 1\n").is_err());
    }

    #[test]
    fn evasive_sign_constraints() {
        let err = Config::from_toml_str("[car]\nevasive_decel = 2.86\n").unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "car.evasive_decel"));
    }
}
