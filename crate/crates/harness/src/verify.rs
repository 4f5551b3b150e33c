//! Randomised verification suites with machine-readable reports.
//!
//! Each suite samples states, checks an inequality that holds exactly in
//! real arithmetic, and records the worst margin and the first counterexample.

use serde::Serialize;

use dtcbf::barrier::{check_forward_invariance, compose_min, constraint, BarrierFn};
use dtcbf::car::{car_barrier, lead_barrier, speed_barrier, CarModel, LaneBoundary};
use dtcbf::control::dist2;
use dtcbf::dblint::{at_rest, eta, high_barrier, low_barrier, settle_count, u_dbl, EvasiveAccelPair};
use dtcbf::dynamics::{
    dblint_step, fw_step, CarJointState, CarState, DblIntState, FwControl, FwState, Plant, StateVector,
};
use dtcbf::filter::{filter_line, filter_single, filter_with_candidates, grid_oracle};
use dtcbf::fixed_wing::{fw_b, fw_barrier, fw_evasive, fw_in_envelope, fw_ttilde, fw_ttilde_extrema, h_fw};
use dtcbf::params::{Config, FwParams, SimParams};
use dtcbf::rng::{streams, RngStream};
use dtcbf::{Error, Result, CONSTRAINT_TOL, VIOLATION_TOL};

pub const SUITES: [&str; 7] = [
    "dblint-braking",
    "fw-envelope",
    "car-lanes",
    "composition",
    "filter-soundness",
    "invariance",
    "horizon",
];

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub samples: usize,
    pub failures: usize,
    /// Smallest observed margin (negative margins are failures).
    pub worst_margin: f64,
    pub counterexample: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            samples: 0,
            failures: 0,
            worst_margin: f64::INFINITY,
            counterexample: None,
            note: None,
        }
    }

    /// Records one sample with margin `m`; `m < 0` is a failure.
    fn record(&mut self, m: f64, witness: impl FnOnce() -> Vec<f64>) {
        self.samples += 1;
        if m < self.worst_margin || m.is_nan() {
            self.worst_margin = m;
        }
        if m < 0.0 || m.is_nan() {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    fn passed(&self) -> bool {
        self.failures == 0 && self.samples > 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Runs `suite` with about `samples` random draws per check.
pub fn verify(suite: &str, samples: usize, seed: u64, cfg: &Config) -> Result<Report> {
    let mut rng = RngStream::new(seed, streams::SAMPLER);
    let checks = match suite {
        "dblint-braking" => dblint_braking(&mut rng, samples, cfg)?,
        "fw-envelope" => fw_envelope(&mut rng, samples, cfg)?,
        "car-lanes" => car_lanes(&mut rng, samples, cfg)?,
        "composition" => composition(&mut rng, samples, cfg)?,
        "filter-soundness" => filter_soundness(&mut rng, samples, cfg)?,
        "invariance" => invariance(&mut rng, samples, cfg)?,
        "horizon" => horizon(cfg)?,
        other => {
            return Err(Error::UnknownName {
                kind: "suite",
                name: other.to_string(),
            })
        }
    };
    Ok(Report {
        suite: suite.to_string(),
        passed: checks.iter().all(Check::passed),
        checks,
    })
}

pub fn dblint_pair() -> (EvasiveAccelPair, f64, f64) {
    (EvasiveAccelPair::new(-2.0, 2.5, -3.0, 3.0).expect("valid pair"), -3.0, 3.0)
}

fn dblint_state(rng: &mut RngStream) -> DblIntState {
    DblIntState {
        p: rng.uniform(-5.0, 5.0),
        v: rng.uniform(-5.0, 5.0),
    }
}

fn dblint_braking(rng: &mut RngStream, n: usize, cfg: &Config) -> Result<Vec<Check>> {
    let (a, ..) = dblint_pair();
    let sim = cfg.sim;
    let d = sim.delta;
    let mut ca = Check::new("rollout rests at eta after N+1 steps");
    let mut cb = Check::new("rollout stays on one side of eta");
    let mut cc = Check::new("eta invariant along the evasive step");
    let mut cc2 = Check::new("eta continuous across N jumps");
    let mut cd = Check::new("eta nondecreasing in v");
    let mut ct = Check::new("h_low and h_high constraints");
    let (lo, hi) = (low_barrier(0.0, a, sim), high_barrier(0.0, a, sim));
    let plant = Plant::double_integrator(sim, -3.0, 3.0);
    for _ in 0..n {
        let s = dblint_state(rng);
        let e = eta(&s, &a, d);
        let scale = 1.0 + s.p.abs() + s.v * s.v;
        let mut cur = s;
        let steps = settle_count(&s, &a, d) + 1;
        let mut side = f64::INFINITY;
        for k in 0..steps + 3 {
            let m = if s.v >= 0.0 { e - cur.p } else { cur.p - e };
            side = side.min(m + 1e-12 * scale);
            if k >= steps {
                ca.record(1e-12 * scale - (cur.p - e).abs(), || s.to_vec());
            }
            cur = dblint_step(&cur, u_dbl(&cur, &a, d), &sim);
        }
        ca.record(if at_rest(cur.v) { 0.0 } else { -1.0 }, || s.to_vec());
        cb.record(side, || s.to_vec());
        let next = dblint_step(&s, u_dbl(&s, &a, d), &sim);
        cc.record(1e-12 * e.abs().max(1.0) - (eta(&next, &a, d) - e).abs(), || s.to_vec());
        for h in [&lo, &hi] {
            let hs = h.evaluate(&s)?;
            if hs >= 0.0 {
                let c = constraint(h, &plant, &s, &h.evasive(&s)?, sim.lambda)?;
                ct.record(c + CONSTRAINT_TOL, || s.to_vec());
            }
        }
    }
    for k in 1..=(n / 100).max(10) {
        for (big_a, sign) in [(a.a_minus, 1.0), (a.a_plus, -1.0)] {
            let v = sign * k as f64 * d * big_a.abs();
            let (l, r) = (DblIntState { p: 0.0, v: v - 1e-9 }, DblIntState { p: 0.0, v: v + 1e-9 });
            let jump = (eta(&l, &a, d) - eta(&r, &a, d)).abs();
            cc2.record(1e-6 - jump, || vec![v]);
        }
    }
    let m = (n / 10).max(100);
    let p = rng.uniform(-5.0, 5.0);
    let mut prev = f64::NEG_INFINITY;
    for i in 0..=m {
        let v = -5.0 + 10.0 * i as f64 / m as f64;
        let e = eta(&DblIntState { p, v }, &a, d);
        cd.record(e - prev + 1e-12 * (1.0 + e.abs()), || vec![p, v]);
        prev = e;
    }
    Ok(vec![ca, cb, cc, cc2, cd, ct])
}

/// Uniform over the box implied by b₁..b₄ with z ∈ [z_min, z_min + 200].
pub fn fw_box_state(rng: &mut RngStream, p: &FwParams) -> FwState {
    FwState {
        v: rng.uniform(p.speed_min, p.speed_max),
        gamma: rng.uniform(p.pitch_min, p.pitch_max),
        psi: rng.uniform(-std::f64::consts::PI, std::f64::consts::PI),
        x: rng.uniform(-100.0, 100.0),
        y: rng.uniform(-100.0, 100.0),
        z: rng.uniform(p.altitude_floor, p.altitude_floor + 200.0),
    }
}

/// Rejection sampler for h_fw >= 0.
pub fn fw_safe_state(rng: &mut RngStream, p: &FwParams, sim: &SimParams) -> Result<FwState> {
    loop {
        let s = fw_box_state(rng, p);
        if h_fw(&s, p, sim)? >= 0.0 {
            return Ok(s);
        }
    }
}

/// Drag-free parameters with thrust capped at W sin γ_max, and the two
/// states from which b_2 (at v_min, pitched above γ_max) and b_1 (at v_max,
/// pitched below -γ_max) admit no control keeping them nonnegative.
pub fn pitch_only_counterexamples(cfg: &Config) -> (FwParams, [(usize, FwState); 2]) {
    let base = cfg.fixed_wing;
    let p = FwParams {
        parasitic_drag: 0.0,
        induced_drag: 0.0,
        thrust_max: base.weight * base.pitch_max.sin(),
        ..base
    };
    let at = |v: f64, gamma: f64| FwState { v, gamma, psi: 0.0, x: 0.0, y: 0.0, z: p.altitude_floor + 100.0 };
    (p, [(2, at(p.speed_min, p.pitch_max + 0.05)), (1, at(p.speed_max, -p.pitch_max - 0.05))])
}

/// Largest b_i constraint over a `points`³ grid of U at `s`.
pub fn best_b_constraint(p: &FwParams, sim: &SimParams, i: usize, s: &FwState, points: usize) -> Result<f64> {
    let plant = Plant::fixed_wing(*sim, *p);
    let bs = fw_b(s, i, p, sim)?;
    let mut best = f64::NEG_INFINITY;
    for u in plant.bounds.grid(points) {
        let next = plant.step(s, &u)?;
        best = best.max(fw_b(&next, i, p, sim)? - (1.0 - sim.lambda) * bs);
    }
    Ok(best)
}

fn fw_envelope(rng: &mut RngStream, n: usize, cfg: &Config) -> Result<Vec<Check>> {
    let (p, sim) = (cfg.fixed_wing, cfg.sim);
    let h = fw_barrier(p, sim)?;
    let plant = Plant::fixed_wing(sim, p);
    let mut t1 = Check::new("h_fw >= 0 implies envelope membership");
    let mut l3 = Check::new("evasive control in U");
    let mut l4 = Check::new("every b_i constraint under the evasive control");
    let mut l4v = Check::new("evasive control holds speed");
    for _ in 0..n {
        let s = fw_box_state(rng, &p);
        let u = fw_evasive(&s, &p, &sim)?;
        let inside = plant.bounds.contains_within(&u, CONSTRAINT_TOL);
        l3.record(if inside { 0.0 } else { -1.0 }, || s.to_vec());
        if h_fw(&s, &p, &sim)? < 0.0 {
            continue;
        }
        t1.record(if fw_in_envelope(&s, &p, 0.0) { 0.0 } else { -1.0 }, || s.to_vec());
        let next = fw_step(&s, &u, &sim, &p)?;
        l4v.record(1e-12 * s.v - (next.v - s.v).abs(), || s.to_vec());
        for i in 1..=5 {
            let c = fw_b(&next, i, &p, &sim)? - (1.0 - sim.lambda) * fw_b(&s, i, &p, &sim)?;
            l4.record(c + CONSTRAINT_TOL, || s.to_vec());
        }
    }
    let mut t2 = Check::new("evasive trajectories stay in C_h for 1000 steps");
    for _ in 0..(n / 1000).max(5) {
        let s0 = fw_safe_state(rng, &p, &sim)?;
        let r = check_forward_invariance(&h, &plant, |s| h.evasive(s), &s0, 1000)?;
        t2.record(r.min_value + VIOLATION_TOL, || s0.to_vec());
    }

    let mut ext = Check::new("T~ extrema agree with a 1000x1000 brute-force grid");
    let e = fw_ttilde_extrema(&p, &sim)?;
    let (mut bmin, mut bmax) = (f64::INFINITY, f64::NEG_INFINITY);
    let m = 1000;
    for i in 0..m {
        for j in 0..m {
            let v = p.speed_min + (p.speed_max - p.speed_min) * i as f64 / (m - 1) as f64;
            let g = p.pitch_min + (p.pitch_max - p.pitch_min) * j as f64 / (m - 1) as f64;
            let t = fw_ttilde(v, g, &p, &sim)?;
            bmin = bmin.min(t);
            bmax = bmax.max(t);
        }
    }
    ext.record(1e-6 - (e.min - bmin).abs(), || vec![e.min, bmin]);
    ext.record(1e-6 - (e.max - bmax).abs(), || vec![e.max, bmax]);
    ext.record(e.min, || vec![e.min]);
    ext.record(p.thrust_max - e.max, || vec![e.max]);
    ext.note = Some(format!("T~ in [{}, {}]", e.min, e.max));

    let mut rem = Check::new("b_1 and b_2 alone admit no safe control (100^3 grid)");
    let (rp, family) = pitch_only_counterexamples(cfg);
    let mut notes = Vec::new();
    for (i, s) in family {
        let best = best_b_constraint(&rp, &sim, i, &s, 100)?;
        rem.record(-best, || s.to_vec());
        notes.push(format!("b_{i}: largest constraint {best}"));
    }
    rem.note = Some(notes.join("; "));
    Ok(vec![t1, l3, l4, l4v, t2, ext, rem])
}

/// Joint car state with leads at lane centres ahead of (or slightly behind) the ego car.
pub fn car_joint_state(rng: &mut RngStream, cfg: &Config) -> CarJointState {
    let p = cfg.car;
    let w = p.lane_width;
    let ego = CarState {
        x: 0.0,
        y: rng.uniform(0.0, 2.0 * w),
        v: rng.uniform(-1.0, p.speed_limit),
        psi: rng.uniform(-0.2, 0.2),
    };
    let lead = |rng: &mut RngStream, y: f64| CarState {
        x: rng.uniform(-20.0, 300.0),
        y,
        v: rng.uniform(0.0, p.speed_limit),
        psi: 0.0,
    };
    CarJointState {
        lead1: lead(rng, 0.5 * w),
        lead2: lead(rng, 1.5 * w),
        ego,
    }
}

fn car_lanes(rng: &mut RngStream, n: usize, cfg: &Config) -> Result<Vec<Check>> {
    let model = CarModel::new(cfg.car, cfg.sim)?.with_lane_steps(cfg.car_env.lane_rollout_steps);
    let lambda = cfg.sim.lambda;
    let plant = Plant::car_joint(cfg.sim, cfg.car);
    let barriers: Vec<BarrierFn<CarJointState, _>> = vec![
        lead_barrier(model, 1),
        lead_barrier(model, 2),
        speed_barrier(model),
        car_barrier(model),
    ];
    let lanes: Vec<_> = LaneBoundary::ALL
        .iter()
        .map(|b| model.lane_barrier(*b).pullback(|s: &CarJointState| s.ego))
        .collect();
    let mut checks: Vec<Check> = barriers
        .iter()
        .chain(&lanes)
        .map(|h| Check::new(&format!("{}: constraint under the evasive control", h.name())))
        .collect();
    let mut cases = [
        Check::new("h_1_lead case 1: v3 <= 0"),
        Check::new("h_1_lead case 2a: 0 <= v1 <= v3"),
        Check::new("h_1_lead case 2b: v1 >= v3 >= 0"),
    ];
    let mut doubled = Check::new("lane rollouts: doubling the step budget changes nothing");
    let wide = model.with_lane_steps(2 * model.lane_steps());
    for i in 0..n {
        let mut s = car_joint_state(rng, cfg);
        match i % 3 {
            0 => s.ego.v = rng.uniform(-2.0, 0.0),
            1 => s.lead1.v = rng.uniform(0.0, s.ego.v.max(0.0)),
            _ => s.lead1.v = rng.uniform(s.ego.v.max(0.0), cfg.car.speed_limit),
        }
        for (h, c) in barriers.iter().chain(&lanes).zip(checks.iter_mut()) {
            if h.evaluate(&s)? >= 0.0 {
                let z = h.evasive(&s)?;
                let margin = constraint(h, &plant, &s, &z, lambda)? + CONSTRAINT_TOL;
                let inside = plant.bounds.contains(&z);
                c.record(if inside { margin } else { -1.0 }, || s.to_vec());
            }
        }
        if barriers[0].evaluate(&s)? >= 0.0 {
            let z = barriers[0].evasive(&s)?;
            let c = constraint(&barriers[0], &plant, &s, &z, lambda)? + CONSTRAINT_TOL;
            cases[i % 3].record(c, || s.to_vec());
        }
        let (a, _) = model.lane_values(&s.ego)?;
        let (b, _) = wide.lane_values(&s.ego)?;
        doubled.record(if a == b { 0.0 } else { -1.0 }, || s.ego.to_vec());
    }
    checks.extend(cases);
    checks.push(doubled);
    Ok(checks)
}

fn composition(rng: &mut RngStream, n: usize, cfg: &Config) -> Result<Vec<Check>> {
    let sim = cfg.sim;
    let plant = Plant::double_integrator(sim, -3.0, 3.0);
    let mut c = Check::new("min of two satisfied constraints is satisfied");
    let mut tries = 0;
    while c.samples < n && tries < 100 * n {
        tries += 1;
        let q: [[f64; 3]; 2] = [0, 1].map(|_| [rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)]);
        let make = |k: [f64; 3]| BarrierFn::new("q", move |s: &DblIntState| Ok(k[0] * s.p + k[1] * s.v + k[2]), |_| Ok(0.0));
        let (q1, q2) = (make(q[0]), make(q[1]));
        let s = dblint_state(rng);
        let u = rng.uniform(-3.0, 3.0);
        if constraint(&q1, &plant, &s, &u, sim.lambda)? < 0.0 || constraint(&q2, &plant, &s, &u, sim.lambda)? < 0.0 {
            continue;
        }
        let m = compose_min(&q1, &q2, |_| Ok(0.0));
        let v = constraint(&m, &plant, &s, &u, sim.lambda)?;
        c.record(v, || vec![q[0][0], q[0][1], q[0][2], q[1][0], q[1][1], q[1][2], s.p, s.v, u]);
    }
    Ok(vec![c])
}

fn filter_soundness(rng: &mut RngStream, n: usize, cfg: &Config) -> Result<Vec<Check>> {
    let sim = cfg.sim;
    let (a, amin, amax) = dblint_pair();
    let dplant = Plant::double_integrator(sim, amin, amax);
    let dh = low_barrier(0.0, a, sim);
    let mut dsound = Check::new("double integrator: single/line/candidates outputs safe and in U");
    let mut chain = Check::new("double integrator: oracle <= candidates <= line <= single");
    for _ in 0..n {
        let s = DblIntState {
            p: rng.uniform(0.0, 3.0),
            v: rng.uniform(-4.0, 1.0),
        };
        if dh.evaluate(&s)? < 0.0 {
            continue;
        }
        let nominal = rng.uniform(amin, amax);
        let d1 = filter_single(&dh, &dplant, &s, &nominal, sim.lambda)?;
        let d2 = filter_line(&dh, &dplant, &s, &nominal, sim.lambda, 32)?;
        let o = grid_oracle(&dh, &dplant, &s, &nominal, sim.lambda, 1000)?;
        let d3 = filter_with_candidates(&dh, &dplant, &s, &nominal, &[o], sim.lambda, 32)?;
        for d in [&d1, &d2, &d3] {
            let ok = dplant.bounds.contains(&d.applied);
            dsound.record(if ok { d.constraint_value + CONSTRAINT_TOL } else { -1.0 }, || vec![s.p, s.v, nominal]);
        }
        let od = dist2(&o, &d1.nominal).sqrt();
        let m = (d3.override_distance - od)
            .min(d2.override_distance - d3.override_distance)
            .min(d1.override_distance - d2.override_distance);
        chain.record(m + 1e-12, || vec![s.p, s.v, nominal]);
    }

    let (p, fsim) = (cfg.fixed_wing, cfg.sim);
    let fh = fw_barrier(p, fsim)?;
    let fplant = Plant::fixed_wing(fsim, p);
    let mut fsound = Check::new("fixed wing: single/line/candidates outputs safe and in U");
    for _ in 0..n / 10 {
        let s = fw_safe_state(rng, &p, &fsim)?;
        let nominal: FwControl = fplant.bounds.sample(rng);
        let z = fh.evasive(&s)?;
        let cands = dtcbf::env::default_candidates(&nominal, &z);
        let ds = [
            filter_single(&fh, &fplant, &s, &nominal, fsim.lambda)?,
            filter_line(&fh, &fplant, &s, &nominal, fsim.lambda, 32)?,
            filter_with_candidates(&fh, &fplant, &s, &nominal, &cands, fsim.lambda, 32)?,
        ];
        for d in ds {
            let ok = fplant.bounds.contains(&d.applied);
            fsound.record(if ok { d.constraint_value + CONSTRAINT_TOL } else { -1.0 }, || s.to_vec());
        }
    }

    let model = CarModel::new(cfg.car, cfg.sim)?;
    let ch = car_barrier(model);
    let cplant = Plant::car_joint(cfg.sim, cfg.car);
    let mut csound = Check::new("car: single/line/candidates outputs safe and in U");
    let mut drawn = 0;
    while drawn < n / 10 {
        let s = car_joint_state(rng, cfg);
        if ch.evaluate(&s)? < 0.0 {
            continue;
        }
        drawn += 1;
        let nominal = cplant.bounds.sample(rng);
        let cands = dtcbf::env::default_candidates(&nominal, &ch.evasive(&s)?);
        let ds = [
            filter_single(&ch, &cplant, &s, &nominal, sim.lambda)?,
            filter_line(&ch, &cplant, &s, &nominal, sim.lambda, 32)?,
            filter_with_candidates(&ch, &cplant, &s, &nominal, &cands, sim.lambda, 32)?,
        ];
        for d in ds {
            let ok = cplant.bounds.contains(&d.applied);
            csound.record(if ok { d.constraint_value + CONSTRAINT_TOL } else { -1.0 }, || s.to_vec());
        }
    }
    Ok(vec![dsound, chain, fsound, csound])
}

fn invariance(rng: &mut RngStream, n: usize, cfg: &Config) -> Result<Vec<Check>> {
    let sim = cfg.sim;
    let episodes = (n / 1000).max(5);
    let steps = 1000;

    let (p, h) = (cfg.fixed_wing, fw_barrier(cfg.fixed_wing, sim)?);
    let plant = Plant::fixed_wing(sim, p);
    let mut fw = Check::new("fixed wing: line-filtered random nominal stays in C_h");
    for _ in 0..episodes {
        let s0 = fw_safe_state(rng, &p, &sim)?;
        let mut prng = RngStream::new(rng.index(usize::MAX) as u64, streams::POLICY);
        let r = check_forward_invariance(
            &h,
            &plant,
            |s| {
                let u: FwControl = plant.bounds.sample(&mut prng);
                filter_line(&h, &plant, s, &u, sim.lambda, 32).map(|d| d.applied)
            },
            &s0,
            steps,
        )?;
        fw.record(r.min_value + VIOLATION_TOL, || s0.to_vec());
    }

    let model = CarModel::new(cfg.car, sim)?;
    let ch = car_barrier(model);
    let cplant = Plant::car_joint(sim, cfg.car);
    let mut car_ev = Check::new("car: evasive control with worst-case leads stays in C_h");
    let mut car_f = Check::new("car: line-filtered random nominal with worst-case leads stays in C_h");
    let mut drawn = 0;
    while drawn < episodes {
        let s0 = car_joint_state(rng, cfg);
        if ch.evaluate(&s0)? < 0.0 {
            continue;
        }
        drawn += 1;
        let r = check_forward_invariance(&ch, &cplant, |s| ch.evasive(s), &s0, steps)?;
        car_ev.record(r.min_value + VIOLATION_TOL, || s0.to_vec());
        let mut prng = RngStream::new(rng.index(usize::MAX) as u64, streams::POLICY);
        let r = check_forward_invariance(
            &ch,
            &cplant,
            |s| {
                let u = cplant.bounds.sample(&mut prng);
                filter_line(&ch, &cplant, s, &u, sim.lambda, 32).map(|d| d.applied)
            },
            &s0,
            steps,
        )?;
        car_f.record(r.min_value + VIOLATION_TOL, || s0.to_vec());
    }
    Ok(vec![fw, car_ev, car_f])
}

/// Largest lane-rollout settling count over a (v, ψ) grid, with its location.
pub fn max_settling_steps(model: &CarModel, v_max: f64, psi_max: f64, nv: usize, npsi: usize) -> Result<(usize, f64, f64)> {
    let mut best = (0, 0.0, 0.0);
    for i in 0..=nv {
        let v = v_max * i as f64 / nv as f64;
        for j in 0..=npsi {
            let psi = -psi_max + 2.0 * psi_max * j as f64 / npsi as f64;
            let s = CarState { x: 0.0, y: 0.5 * model.params.lane_width, v, psi };
            let k = model.lane_settling_steps(&s)?;
            if k > best.0 {
                best = (k, v, psi);
            }
        }
    }
    Ok(best)
}

pub const HORIZON_BOUND: usize = 33;

fn horizon(cfg: &Config) -> Result<Vec<Check>> {
    let model = CarModel::new(cfg.car, cfg.sim)?.with_lane_steps(cfg.car_env.lane_rollout_steps);
    let mut c = Check::new("lane rollouts settle within 33 steps for v in [0, 31.3], |psi| <= 0.2");
    let (k, v, psi) = max_settling_steps(&model, 31.3, 0.2, 313, 80)?;
    c.record(HORIZON_BOUND as f64 - k as f64, || vec![v, psi]);
    let (k1, ..) = max_settling_steps(&model, 31.3, 0.1, 313, 40)?;
    c.note = Some(format!("max {k} steps at v = {v}, psi = {psi}; max over |psi| <= 0.1 is {k1}"));
    Ok(vec![c])
}
