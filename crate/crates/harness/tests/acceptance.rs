//! Acceptance criteria A1-A10, one pass/fail line each.
//!
//! Runs as a plain binary so the summary lines always reach the test log.
//! Oracles here are written against the equations directly and share no
//! code with the library beyond the function under test.

use std::process::{Command, ExitCode};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use dtcbf::barrier::{compose_min, constraint, BarrierFn};
use dtcbf::car::{car_barrier, lead_barrier, speed_barrier, CarModel, LaneBoundary};
use dtcbf::control::{dist2, ControlVector};
use dtcbf::dblint::{eta, high_barrier, low_barrier, settle_count, u_dbl, EvasiveAccelPair};
use dtcbf::dynamics::{dblint_step, fw_step, CarJointState, CarState, DblIntState, FwControl, FwState, Plant};
use dtcbf::env::FilterChoice;
use dtcbf::filter::{filter_line, filter_single, filter_with_candidates, grid_oracle};
use dtcbf::fixed_wing::{fw_barrier, fw_ttilde_extrema, h_fw, validate_fw_hypotheses};
use dtcbf::params::{CarParams, Config, FwParams, SimParams};
use dtcbf::rng::{streams, RngStream};
use dtcbf::CONSTRAINT_TOL;
use dtcbf_harness::runner::{run, RunOptions};

type Outcome = (bool, String);
type Criterion = (&'static str, &'static str, fn() -> Outcome);
type Envelope<'a> = (&'a str, &'a dyn Fn(&FwState) -> f64, FwState);

const LAMBDA: f64 = 0.5;
const DELTA: f64 = 0.1;

fn rng(seed: u64) -> RngStream {
    RngStream::new(seed, streams::SAMPLER)
}

// ---------------------------------------------------------------- A1, A2

fn episodes(env: &str, filter: FilterChoice, n: usize, seed: u64) -> (f64, usize, usize) {
    let opts = RunOptions {
        env: env.to_string(),
        policy: "random".to_string(),
        filter,
        episodes: n,
        seed,
        config: Config::default(),
    };
    let recs = run(&opts).expect("episodes run");
    let cost: f64 = recs.iter().map(|r| r.total_cost).sum();
    let steps = recs.iter().map(|r| r.steps()).sum();
    let unsafe_eps = recs.iter().filter(|r| r.unsafe_episode).count();
    (cost, steps, unsafe_eps)
}

fn a1() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for env in ["fw", "car"] {
        for (name, f) in [("single", FilterChoice::Single), ("line", FilterChoice::Line { segments: FilterChoice::DEFAULT_SEGMENTS })] {
            let (cost, steps, _) = episodes(env, f, 500, 1);
            ok &= cost == 0.0;
            parts.push(format!("{env}/{name}: cost {cost} over {steps} steps"));
        }
    }
    (ok, parts.join(", "))
}

fn a2() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for env in ["fw", "car"] {
        let (cost, _, unsafe_eps) = episodes(env, FilterChoice::None, 100, 1);
        ok &= cost > 0.0;
        parts.push(format!("{env}: cost {cost}, {unsafe_eps}/100 unsafe episodes"));
    }
    (ok, parts.join(", "))
}

// ---------------------------------------------------------------- A3

struct Tally {
    accepted: usize,
    worst: f64,
    outside: usize,
}

/// Draws until `n` states with h(s) >= 0 are found and checks c_h(s, ζ(s)) and ζ(s) ∈ U at each.
fn constraint_check<S: Copy + 'static, U: ControlVector>(
    h: &BarrierFn<S, U>,
    plant: &Plant<S, U>,
    n: usize,
    mut sample: impl FnMut(&mut RngStream) -> S,
    seed: u64,
) -> Tally {
    let mut r = rng(seed);
    let mut t = Tally { accepted: 0, worst: f64::INFINITY, outside: 0 };
    let mut tries = 0usize;
    while t.accepted < n && tries < 200 * n {
        tries += 1;
        let s = sample(&mut r);
        let hs = h.evaluate(&s).expect("in-domain evaluation");
        if hs < 0.0 {
            continue;
        }
        t.accepted += 1;
        let z = h.evasive(&s).expect("evasive control");
        if !plant.bounds.contains(&z) {
            t.outside += 1;
        }
        let c = constraint(h, plant, &s, &z, LAMBDA).expect("constraint");
        // NaN anywhere poisons the tally instead of being skipped by `min`.
        t.worst = if hs.is_nan() || c.is_nan() || t.worst.is_nan() { f64::NAN } else { t.worst.min(c) };
    }
    t
}

fn dbl_pair() -> EvasiveAccelPair {
    EvasiveAccelPair::new(-2.0, 2.5, -3.0, 3.0).unwrap()
}

fn fw_box(r: &mut RngStream, p: &FwParams) -> FwState {
    FwState {
        v: r.uniform(p.speed_min, p.speed_max),
        gamma: r.uniform(p.pitch_min, p.pitch_max),
        psi: r.uniform(-3.2, 3.2),
        x: r.uniform(-100.0, 100.0),
        y: r.uniform(-100.0, 100.0),
        z: r.uniform(p.altitude_floor, p.altitude_floor + 200.0),
    }
}

/// Leads at lane centres with zero heading; ego anywhere on the road.
fn joint_sample(r: &mut RngStream, p: &CarParams) -> CarJointState {
    let w = p.lane_width;
    let ego = CarState {
        x: 0.0,
        y: r.uniform(0.0, 2.0 * w),
        v: r.uniform(-1.0, p.speed_limit),
        psi: r.uniform(-0.2, 0.2),
    };
    let mut lead = |y: f64| CarState {
        x: r.uniform(-10.0, 250.0),
        y,
        v: r.uniform(0.0, p.speed_limit),
        psi: 0.0,
    };
    let (lead1, lead2) = (lead(0.5 * w), lead(1.5 * w));
    CarJointState { lead1, lead2, ego }
}

fn a3() -> Outcome {
    const N: usize = 100_000;
    let sim = SimParams::default();
    let (fw, car) = (FwParams::default(), CarParams::default());
    let mut rows: Vec<(String, Tally)> = Vec::new();

    let dplant = Plant::double_integrator(sim, -3.0, 3.0);
    let dsample = |r: &mut RngStream| DblIntState { p: r.uniform(-6.0, 6.0), v: r.uniform(-6.0, 6.0) };
    rows.push(("h_low".into(), constraint_check(&low_barrier(-2.0, dbl_pair(), sim), &dplant, N, dsample, 31)));
    rows.push(("h_high".into(), constraint_check(&high_barrier(2.0, dbl_pair(), sim), &dplant, N, dsample, 32)));

    let fplant = Plant::fixed_wing(sim, fw);
    let fh = fw_barrier(fw, sim).unwrap();
    rows.push(("h_fw".into(), constraint_check(&fh, &fplant, N, |r| fw_box(r, &fw), 33)));

    let model = CarModel::new(car, sim).unwrap();
    let jplant = Plant::car_joint(sim, car);
    let joint = |r: &mut RngStream| joint_sample(r, &car);
    for (i, h) in [lead_barrier(model, 1), lead_barrier(model, 2), speed_barrier(model), car_barrier(model)]
        .iter()
        .enumerate()
    {
        rows.push((h.name().to_string(), constraint_check(h, &jplant, N, joint, 40 + i as u64)));
    }
    let eplant = Plant::car(sim, car);
    for (i, b) in LaneBoundary::ALL.iter().enumerate() {
        let h = model.lane_barrier(*b);
        let ego = |r: &mut RngStream| joint_sample(r, &car).ego;
        rows.push((h.name().to_string(), constraint_check(&h, &eplant, N, ego, 50 + i as u64)));
    }

    let ok = rows.iter().all(|(_, t)| t.accepted == N && t.worst >= -CONSTRAINT_TOL && t.outside == 0);
    let detail = rows
        .iter()
        .map(|(n, t)| format!("{n}: {} states, min c {:.3e}, {} outside U", t.accepted, t.worst, t.outside))
        .collect::<Vec<_>>()
        .join("; ");
    (ok, detail)
}

// ---------------------------------------------------------------- A4

fn q(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite")
}

/// Closed-form η and the braking rollout, both in exact rational arithmetic.
fn exact_eta_and_rollout(p: f64, v: f64, a_minus: f64, a_plus: f64) -> (BigRational, BigRational, i64, usize) {
    let d = q(DELTA);
    let (p, v, am, ap) = (q(p), q(v), q(a_minus), q(a_plus));
    let big_a = if !v.is_negative() { am.clone() } else { ap.clone() };
    let n_big: BigInt = (v.abs() / (&d * big_a.abs())).floor().to_integer();
    let n = BigRational::from_integer(n_big.clone());
    let two = BigRational::from_integer(2.into());
    let one = BigRational::from_integer(1.into());
    let closed = &p + &d * &n * &v + &n * (&n - &one) / &two * &d * &d * &big_a + &d * (&v + &d * &n * &big_a);

    let (mut pp, mut vv, mut steps) = (p, v, 0usize);
    while !vv.is_zero() {
        let stop = -(&vv) / &d;
        let u = if vv.is_positive() { am.clone().max(stop) } else { ap.clone().min(stop) };
        pp += &d * &vv;
        vv += &d * u;
        steps += 1;
    }
    (closed, pp, n_big.to_i64().unwrap(), steps)
}

fn a4() -> Outcome {
    const N: usize = 100_000;
    let sim = SimParams::default();
    let a = dbl_pair();
    let mut r = rng(4);
    let (mut exact_fail, mut steps_fail, mut float_worst, mut bitwise) = (0, 0, 0.0f64, 0usize);
    let (mut side_fail, mut invariance_worst, mut mono_fail) = (0, 0.0f64, 0);
    for _ in 0..N {
        let s = DblIntState { p: r.uniform(-5.0, 5.0), v: r.uniform(-5.0, 5.0) };
        let (closed, rolled, n, steps) = exact_eta_and_rollout(s.p, s.v, a.a_minus, a.a_plus);
        if closed != rolled {
            exact_fail += 1;
        }
        // (a): at rest after N + 1 steps (N steps when |v| is an exact multiple of δ|A|).
        let n_lib = settle_count(&s, &a, DELTA) as i64;
        if n_lib != n || !(steps as i64 == n + 1 || (steps as i64 == n && steps > 0) || s.v == 0.0) {
            steps_fail += 1;
        }
        let e = eta(&s, &a, DELTA);
        let e_exact = closed.to_f64().unwrap();
        float_worst = float_worst.max((e - e_exact).abs() / e_exact.abs().max(1.0));

        // (a) and (b) along the floating-point rollout.
        let mut c = s;
        for l in 0..(n as usize + 6) {
            let beyond = if s.v >= 0.0 { c.p - e } else { e - c.p };
            if beyond > 1e-12 * e.abs().max(1.0) {
                side_fail += 1;
            }
            if l > n as usize {
                float_worst = float_worst.max((c.p - e).abs() / e.abs().max(1.0));
                if l == n as usize + 1 && c.p == e {
                    bitwise += 1;
                }
            }
            c = dblint_step(&c, u_dbl(&c, &a, DELTA), &sim);
        }

        // (c): invariance along one braking step.
        let next = dblint_step(&s, u_dbl(&s, &a, DELTA), &sim);
        invariance_worst = invariance_worst.max((eta(&next, &a, DELTA) - e).abs() / e.abs().max(1.0));

        // (d): monotone in v.
        let dv = r.uniform(0.0, 1.0);
        if eta(&DblIntState { p: s.p, v: s.v + dv }, &a, DELTA) < e - 1e-12 * e.abs().max(1.0) {
            mono_fail += 1;
        }
    }

    // (c): continuity across the jumps of N.
    let mut jump_worst = 0.0f64;
    for k in 1..=30 {
        for (big_a, sign) in [(a.a_minus, 1.0), (a.a_plus, -1.0)] {
            let v = sign * k as f64 * DELTA * big_a.abs();
            let l = eta(&DblIntState { p: 0.0, v: v - 1e-9 }, &a, DELTA);
            let h = eta(&DblIntState { p: 0.0, v: v + 1e-9 }, &a, DELTA);
            jump_worst = jump_worst.max((l - h).abs());
        }
    }

    let ok = exact_fail == 0
        && steps_fail == 0
        && float_worst <= 1e-12
        && side_fail == 0
        && invariance_worst <= 1e-12
        && mono_fail == 0
        && jump_worst <= 1e-6;
    (
        ok,
        format!(
            "exact rational eta == rollout on {}/{N}; step count mismatches {steps_fail}; float eta vs exact and rollout \
             max rel err {float_worst:.2e} ({bitwise}/{N} bit-identical); side violations {side_fail}; \
             step invariance max rel {invariance_worst:.2e}; monotonicity failures {mono_fail}; max jump at N boundaries {jump_worst:.2e}",
            N - exact_fail
        ),
    )
}

// ---------------------------------------------------------------- A5

fn a5() -> Outcome {
    let model = CarModel::new(CarParams::default(), SimParams::default()).unwrap();
    let (mut worst, mut at) = (0usize, (0.0, 0.0));
    for i in 0..=313 {
        let v = 31.3 * i as f64 / 313.0;
        for j in 0..=80 {
            let psi = -0.2 + 0.4 * j as f64 / 80.0;
            let s = CarState { x: 0.0, y: 1.8, v, psi };
            let k = model.lane_settling_steps(&s).expect("settles within the rollout budget");
            if k > worst {
                worst = k;
                at = (v, psi);
            }
        }
    }
    (worst <= 33, format!("max settling steps {worst} at v = {:.1}, psi = {:.3} (bound 33)", at.0, at.1))
}

// ---------------------------------------------------------------- A6

fn drag(v: f64, n: f64, p: &FwParams) -> f64 {
    0.5 * p.air_density * v * v * p.wing_area * p.parasitic_drag
        + 2.0 * p.induced_drag * n * n * p.weight * p.weight / (p.air_density * v * v * p.wing_area)
}

fn ttilde(v: f64, g: f64, p: &FwParams, sim: &SimParams) -> f64 {
    let alpha = (p.pitch_max * sim.lambda * v / sim.delta).min(sim.gravity * p.load_factor_max - sim.gravity);
    let n = g.cos() + (sim.lambda * v / sim.delta * (p.pitch_max - g)).min(alpha) / sim.gravity;
    p.weight * g.sin() + drag(v, n, p)
}

fn a6() -> Outcome {
    let (p, sim) = (FwParams::default(), SimParams::default());
    let mut r = rng(6);
    let (mut safe, mut outside_s) = (0usize, 0usize);
    for _ in 0..100_000 {
        let s = FwState {
            v: r.uniform(p.speed_min - 2.0, p.speed_max + 2.0),
            gamma: r.uniform(p.pitch_min - 0.1, p.pitch_max + 0.1),
            psi: 0.0,
            x: 0.0,
            y: 0.0,
            z: r.uniform(p.altitude_floor - 20.0, p.altitude_floor + 60.0),
        };
        if h_fw(&s, &p, &sim).unwrap() >= 0.0 {
            safe += 1;
            let in_s = (p.speed_min..=p.speed_max).contains(&s.v)
                && (p.pitch_min..=p.pitch_max).contains(&s.gamma)
                && s.z >= p.altitude_floor;
            if !in_s {
                outside_s += 1;
            }
        }
    }

    let m = 1000;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..m {
        let v = p.speed_min + (p.speed_max - p.speed_min) * i as f64 / (m - 1) as f64;
        for j in 0..m {
            let g = p.pitch_min + (p.pitch_max - p.pitch_min) * j as f64 / (m - 1) as f64;
            let t = ttilde(v, g, &p, &sim);
            lo = lo.min(t);
            hi = hi.max(t);
        }
    }
    let ext = fw_ttilde_extrema(&p, &sim).unwrap();
    let hyp_ok = validate_fw_hypotheses(&p, &sim).is_ok()
        && p.load_factor_max > 1.0
        && lo >= 0.0
        && hi <= p.thrust_max
        && p.load_factor_min <= p.pitch_min.cos().min(p.pitch_max.cos());
    let agree = (ext.min - lo).abs() <= 1e-6 && (ext.max - hi).abs() <= 1e-6;

    // The conclusion of the hypotheses: ũ ∈ U whenever b_1..b_4 >= 0.
    let plant = Plant::fixed_wing(sim, p);
    let fh = fw_barrier(p, sim).unwrap();
    let outside_u = (0..100_000)
        .filter(|_| !plant.bounds.contains(&fh.evasive(&fw_box(&mut r, &p)).unwrap()))
        .count();

    let ok = safe > 10_000 && outside_s == 0 && hyp_ok && agree && outside_u == 0;
    (
        ok,
        format!(
            "{safe} safe states, {outside_s} outside S; T~ in [{lo:.9}, {hi:.9}] by grid vs [{:.9}, {:.9}] \
             (|diff| {:.1e}, {:.1e}); hypotheses hold: {hyp_ok}; evasive outside U: {outside_u}/100000",
            ext.min,
            ext.max,
            (ext.min - lo).abs(),
            (ext.max - hi).abs()
        ),
    )
}

// ---------------------------------------------------------------- A7

fn a7() -> Outcome {
    let sim = SimParams::default();
    let plant = Plant::double_integrator(sim, -3.0, 3.0);
    let mut r = rng(7);
    let (mut checked, mut fails, mut tries) = (0usize, 0usize, 0usize);
    let affine = |k: [f64; 3]| BarrierFn::new("q", move |s: &DblIntState| Ok(k[0] * s.p + k[1] * s.v + k[2]), |_| Ok(0.0));
    while checked < 100_000 && tries < 10_000_000 {
        tries += 1;
        let s = DblIntState { p: r.uniform(-5.0, 5.0), v: r.uniform(-5.0, 5.0) };
        let u = r.uniform(-3.0, 3.0);
        let next = DblIntState { p: s.p + DELTA * s.v, v: s.v + DELTA * u };
        let draw = |r: &mut RngStream| {
            let (k0, k1) = (r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0));
            // Offsets near the threshold that makes the constraint zero, on either side.
            let c0 = ((1.0 - LAMBDA) * (k0 * s.p + k1 * s.v) - (k0 * next.p + k1 * next.v)) / LAMBDA + r.uniform(-0.2, 1.0);
            [k0, k1, c0]
        };
        let (q1, q2) = (affine(draw(&mut r)), affine(draw(&mut r)));
        if constraint(&q1, &plant, &s, &u, LAMBDA).unwrap() < 0.0 || constraint(&q2, &plant, &s, &u, LAMBDA).unwrap() < 0.0 {
            continue;
        }
        checked += 1;
        let m = compose_min(&q1, &q2, |_| Ok(0.0));
        if constraint(&m, &plant, &s, &u, LAMBDA).unwrap() < 0.0 {
            fails += 1;
        }
    }
    (checked == 100_000 && fails == 0, format!("{checked} tuples with both constraints >= 0, {fails} composite violations"))
}

// ---------------------------------------------------------------- A8

fn a8() -> Outcome {
    let sim = SimParams::default();
    let plant = Plant::double_integrator(sim, -3.0, 3.0);
    let h = low_barrier(0.0, dbl_pair(), sim);
    let mut r = rng(8);
    let (mut pairs, mut order_fail, mut unsafe_out) = (0usize, 0usize, 0usize);
    let mut sums = [0.0f64; 4];
    while pairs < 10_000 {
        let s = DblIntState { p: r.uniform(0.0, 3.0), v: r.uniform(-4.0, 1.0) };
        if h.evaluate(&s).unwrap() < 0.0 {
            continue;
        }
        let nominal = r.uniform(-3.0, 3.0);
        if constraint(&h, &plant, &s, &nominal, LAMBDA).unwrap() >= 0.0 {
            continue;
        }
        pairs += 1;
        let single = filter_single(&h, &plant, &s, &nominal, LAMBDA).unwrap();
        let line = filter_line(&h, &plant, &s, &nominal, LAMBDA, 32).unwrap();
        let best = grid_oracle(&h, &plant, &s, &nominal, LAMBDA, 1000).unwrap();
        let cand = filter_with_candidates(&h, &plant, &s, &nominal, &[best], LAMBDA, 32).unwrap();
        let od = dist2(&best, &nominal).sqrt();
        let best_c = constraint(&h, &plant, &s, &best, LAMBDA).unwrap();
        for (c, u) in [(single.constraint_value, single.applied), (line.constraint_value, line.applied), (cand.constraint_value, cand.applied), (best_c, best)] {
            if c < -CONSTRAINT_TOL || !(-3.0..=3.0).contains(&u) {
                unsafe_out += 1;
            }
        }
        let d = [od, cand.override_distance, line.override_distance, single.override_distance];
        if !(d[0] <= d[1] && d[1] <= d[2] && d[2] <= d[3]) {
            order_fail += 1;
        }
        for (acc, x) in sums.iter_mut().zip(d) {
            *acc += x;
        }
    }
    let mean = sums.map(|x| x / pairs as f64);
    (
        order_fail == 0 && unsafe_out == 0,
        format!(
            "{pairs} unsafe-nominal pairs; order violations {order_fail}; unsafe outputs {unsafe_out}; mean distance oracle {:.4}, candidate-line {:.4}, line {:.4}, single {:.4}",
            mean[0], mean[1], mean[2], mean[3]
        ),
    )
}

// ---------------------------------------------------------------- A9

fn a9() -> Outcome {
    let sim = SimParams::default();
    let base = FwParams::default();
    let p = FwParams { parasitic_drag: 0.0, induced_drag: 0.0, thrust_max: base.weight * base.pitch_max.sin(), ..base };
    let at = |v: f64, gamma: f64| FwState { v, gamma, psi: 0.0, x: 0.0, y: 0.0, z: 500.0 };
    // (b_i, state): b_2 at v_min pitched above γ_max, b_1 at v_max pitched below -γ_max.
    let b1 = move |s: &FwState| p.speed_max - s.v;
    let b2 = move |s: &FwState| s.v - p.speed_min;
    let cases: [Envelope; 2] =
        [("b_2", &b2, at(p.speed_min, p.pitch_max + 0.05)), ("b_1", &b1, at(p.speed_max, -p.pitch_max - 0.05))];
    let n = 100;
    let axis = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, b, s) in cases {
        let (mut safe, mut best) = (0usize, f64::NEG_INFINITY);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let u = FwControl {
                        thrust: axis(0.0, p.thrust_max, i),
                        load_factor: axis(p.load_factor_min, p.load_factor_max, j),
                        bank: axis(-p.bank_max, p.bank_max, k),
                    };
                    let next = fw_step(&s, &u, &sim, &p).unwrap();
                    let c = b(&next) - (1.0 - sim.lambda) * b(&s);
                    best = best.max(c);
                    if c >= 0.0 {
                        safe += 1;
                    }
                }
            }
        }
        ok &= safe == 0 && b(&s) >= 0.0;
        parts.push(format!("{name}: {safe}/{} grid controls safe, best constraint {best:.4}", n * n * n));
    }
    (ok, parts.join("; "))
}

// ---------------------------------------------------------------- A10

fn a10() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_dtcbf");
    let mut ok = true;
    let mut parts = Vec::new();
    for env in ["fw", "car"] {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{env}-{rep}"));
            let status = Command::new(exe)
                .args(["run", "--env", env, "--policy", "random", "--filter", "line", "--episodes", "20", "--seed", "11", "--out"])
                .arg(&out)
                .output()
                .expect("spawn dtcbf");
            ok &= status.status.success();
            let steps = std::fs::read(out.join("steps.csv")).unwrap_or_default();
            let summary = std::fs::read(out.join("summary.csv")).unwrap_or_default();
            outputs.push((steps, summary));
        }
        let same = !outputs[0].0.is_empty() && outputs[0] == outputs[1];
        ok &= same;
        parts.push(format!("{env}: {} bytes of steps.csv, identical: {same}", outputs[0].0.len()));
    }
    (ok, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("A1", "zero-violation shielding", a1),
        ("A2", "unshielded negative control", a2),
        ("A3", "barrier constraints", a3),
        ("A4", "double-integrator braking properties", a4),
        ("A5", "lane rollout horizon bound", a5),
        ("A6", "fixed-wing containment and hypotheses", a6),
        ("A7", "min composition", a7),
        ("A8", "filter dominance chain", a8),
        ("A9", "b_1/b_2 counterexample", a9),
        ("A10", "determinism", a10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (id, title, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|x| x == id) {
            continue;
        }
        let start = Instant::now();
        let (ok, detail) = f();
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{id:<4} {verdict} {title} [{:.1} s]: {detail}", start.elapsed().as_secs_f64());
        if !ok {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
