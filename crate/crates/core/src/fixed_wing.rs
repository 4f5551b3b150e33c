//! Flight-envelope barrier for the fixed-wing model.
//!
//! h_fw = min(b₁, …, b₅) with b₁, b₂ the speed limits, b₃, b₄ the pitch
//! limits and b₅ an altitude margin that accounts for the height lost while
//! pulling the nose back up to level. The evasive maneuver holds speed,
//! pulls up at the rate budget α and keeps the wings level.

use crate::barrier::BarrierFn;
use crate::dynamics::{fw_drag, FwControl, FwState};
use crate::params::{FwParams, SimParams};
use crate::{Error, Result};

/// α(s) = min(γ_max λ v / δ, g n_max - g).
pub fn fw_alpha(s: &FwState, p: &FwParams, sim: &SimParams) -> f64 {
    (p.pitch_max * sim.lambda * s.v / sim.delta).min(sim.gravity * p.load_factor_max - sim.gravity)
}

/// ñ(s) = cos γ + min(λ v (γ_max - γ) / δ, α) / g.
pub fn fw_evasive_load_factor(s: &FwState, p: &FwParams, sim: &SimParams) -> f64 {
    let pull = (sim.lambda * s.v * (p.pitch_max - s.gamma) / sim.delta).min(fw_alpha(s, p, sim));
    s.gamma.cos() + pull / sim.gravity
}

/// T̃ at (v, γ): the thrust that keeps the speed constant under the evasive load factor.
pub fn fw_ttilde(v: f64, gamma: f64, p: &FwParams, sim: &SimParams) -> Result<f64> {
    let s = FwState { v, gamma, psi: 0.0, x: 0.0, y: 0.0, z: 0.0 };
    let n = fw_evasive_load_factor(&s, p, sim);
    Ok(p.weight * gamma.sin() + fw_drag(v, n, p)?)
}

/// The evasive maneuver ũ(s) = (T̃, ñ, 0).
pub fn fw_evasive(s: &FwState, p: &FwParams, sim: &SimParams) -> Result<FwControl> {
    if !(s.v > 0.0) {
        return Err(Error::domain("fw_evasive", format!("speed {} must be positive", s.v)));
    }
    let n = fw_evasive_load_factor(s, p, sim);
    Ok(FwControl {
        thrust: p.weight * s.gamma.sin() + fw_drag(s.v, n, p)?,
        load_factor: n,
        bank: 0.0,
    })
}

/// The evasive control with its intermediates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwEvasive {
    pub control: FwControl,
    pub alpha: f64,
    /// None when α = 0.
    pub tau: Option<f64>,
}

pub fn fw_evasive_detail(s: &FwState, p: &FwParams, sim: &SimParams) -> Result<FwEvasive> {
    Ok(FwEvasive {
        control: fw_evasive(s, p, sim)?,
        alpha: fw_alpha(s, p, sim),
        tau: fw_tau(s, p, sim).ok(),
    })
}

/// τ(s) = -γ / (α / v), the time to level off.
pub fn fw_tau(s: &FwState, p: &FwParams, sim: &SimParams) -> Result<f64> {
    let alpha = fw_alpha(s, p, sim);
    if alpha == 0.0 {
        return Err(Error::domain("fw_tau", "alpha is zero"));
    }
    Ok(-s.gamma / (alpha / s.v))
}

/// Component b_i, i in 1..=5.
pub fn fw_b(s: &FwState, i: usize, p: &FwParams, sim: &SimParams) -> Result<f64> {
    Ok(match i {
        1 => p.speed_max - s.v,
        2 => s.v - p.speed_min,
        3 => p.pitch_max - s.gamma,
        4 => s.gamma - p.pitch_min,
        5 => {
            if !(s.v > 0.0) {
                return Err(Error::domain("fw_b5", format!("speed {} must be positive", s.v)));
            }
            let drop = if s.gamma < 0.0 {
                s.v * s.gamma * (fw_tau(s, p, sim)?.max(0.0) + sim.delta)
            } else {
                0.0
            };
            s.z + drop - p.altitude_floor
        }
        _ => return Err(Error::domain("fw_b", format!("component {i} not in 1..=5"))),
    })
}

/// h_fw(s) = min over i of b_i(s).
pub fn h_fw(s: &FwState, p: &FwParams, sim: &SimParams) -> Result<f64> {
    let mut h = f64::INFINITY;
    for i in 1..=5 {
        h = h.min(fw_b(s, i, p, sim)?);
    }
    Ok(h)
}

/// Whether `s` lies in the flight envelope, with `slack` on every inequality.
pub fn fw_in_envelope(s: &FwState, p: &FwParams, slack: f64) -> bool {
    s.v >= p.speed_min - slack
        && s.v <= p.speed_max + slack
        && s.gamma >= p.pitch_min - slack
        && s.gamma <= p.pitch_max + slack
        && s.z >= p.altitude_floor - slack
}

/// Extrema of T̃ over the (v, γ) envelope box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TtildeExtrema {
    pub min: f64,
    pub argmin: (f64, f64),
    pub max: f64,
    pub argmax: (f64, f64),
}

const GRID: usize = 200;
const BRACKET_TOL: f64 = 1e-8;

/// Dense 200×200 grid over the box, then coordinate-wise golden-section
/// refinement around the best grid point.
pub fn fw_ttilde_extrema(p: &FwParams, sim: &SimParams) -> Result<TtildeExtrema> {
    let (v0, v1, g0, g1) = (p.speed_min, p.speed_max, p.pitch_min, p.pitch_max);
    let at = |i: usize, lo: f64, hi: f64| if i == GRID - 1 { hi } else { lo + (hi - lo) * i as f64 / (GRID - 1) as f64 };
    let mut best = [(f64::INFINITY, 0usize, 0usize), (f64::NEG_INFINITY, 0, 0)];
    for i in 0..GRID {
        for j in 0..GRID {
            let t = fw_ttilde(at(i, v0, v1), at(j, g0, g1), p, sim)?;
            if t < best[0].0 {
                best[0] = (t, i, j);
            }
            if t > best[1].0 {
                best[1] = (t, i, j);
            }
        }
    }
    let mut out = [(0.0, (0.0, 0.0)); 2];
    for (k, &(t, i, j)) in best.iter().enumerate() {
        let sign = if k == 0 { 1.0 } else { -1.0 };
        let obj = |v: f64, g: f64| fw_ttilde(v, g, p, sim).map(|t| sign * t).unwrap_or(f64::INFINITY);
        let vb = (at(i.saturating_sub(1), v0, v1), at((i + 1).min(GRID - 1), v0, v1));
        let gb = (at(j.saturating_sub(1), g0, g1), at((j + 1).min(GRID - 1), g0, g1));
        let (mut v, mut g) = (at(i, v0, v1), at(j, g0, g1));
        let mut f = sign * t;
        for _ in 0..4 {
            let vn = golden(|x| obj(x, g), vb.0, vb.1);
            let gn = golden(|y| obj(vn, y), gb.0, gb.1);
            let fn_ = obj(vn, gn);
            if fn_ < f {
                f = fn_;
                v = vn;
                g = gn;
            }
        }
        // corners are where extrema of smooth box problems often sit; keep them exact
        for &(cv, cg) in &[(vb.0, gb.0), (vb.0, gb.1), (vb.1, gb.0), (vb.1, gb.1)] {
            let fc = obj(cv, cg);
            if fc < f {
                f = fc;
                v = cv;
                g = cg;
            }
        }
        out[k] = (sign * f, (v, g));
    }
    Ok(TtildeExtrema {
        min: out[0].0,
        argmin: out[0].1,
        max: out[1].0,
        argmax: out[1].1,
    })
}

/// Golden-section minimisation of a unimodal function on [a, b]; also tries both ends.
fn golden(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let (lo, hi) = (a, b);
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > BRACKET_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [mid, lo, hi]
        .into_iter()
        .min_by(|x, y| f(*x).total_cmp(&f(*y)))
        .unwrap_or(mid)
}

/// Checks the parameter-level hypotheses under which ũ(s) ∈ U and h_fw is a barrier:
/// n_max > 1, 0 <= T̃_min, T̃_max <= T_max and n_min <= min(cos γ_min, cos γ_max).
pub fn validate_fw_hypotheses(p: &FwParams, sim: &SimParams) -> Result<TtildeExtrema> {
    p.validate()?;
    sim.validate()?;
    if !(p.load_factor_max > 1.0) {
        return Err(Error::config("fixed_wing.load_factor_max", "n_max > 1 violated"));
    }
    let ext = fw_ttilde_extrema(p, sim)?;
    if !(ext.min >= 0.0) {
        return Err(Error::config(
            "fixed_wing.thrust",
            format!("0 <= T~_min violated: T~_min = {} at (v, gamma) = {:?}", ext.min, ext.argmin),
        ));
    }
    if !(ext.max <= p.thrust_max) {
        return Err(Error::config(
            "fixed_wing.thrust_max",
            format!("T~_max <= T_max violated: T~_max = {} > {}", ext.max, p.thrust_max),
        ));
    }
    let c = p.pitch_min.cos().min(p.pitch_max.cos());
    if !(p.load_factor_min <= c) {
        return Err(Error::config(
            "fixed_wing.load_factor_min",
            format!("n_min <= min(cos gamma_min, cos gamma_max) = {c} violated"),
        ));
    }
    Ok(ext)
}

/// h_fw with evasive maneuver ũ; fails if the parameter hypotheses do not hold.
pub fn fw_barrier(p: FwParams, sim: SimParams) -> Result<BarrierFn<FwState, FwControl>> {
    validate_fw_hypotheses(&p, &sim)?;
    Ok(BarrierFn::new("h_fw", move |s| h_fw(s, &p, &sim), move |s| fw_evasive(s, &p, &sim)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn s(v: f64, gamma: f64, z: f64) -> FwState {
        FwState { v, gamma, psi: 0.0, x: 0.0, y: 0.0, z }
    }

    #[test]
    fn alpha_picks_load_limit_at_cruise() {
        let (p, sim) = (FwParams::default(), SimParams::default());
        assert_relative_eq!(fw_alpha(&s(17.5, 0.0, 500.0), &p, &sim), 14.715, epsilon = 1e-12);
        let p1 = FwParams { load_factor_max: 1.0, ..p };
        assert!(fw_alpha(&s(17.5, 0.0, 500.0), &p1, &sim) <= 0.0);
    }

    #[test]
    fn level_flight_evasive_is_max_pull() {
        let (p, sim) = (FwParams::default(), SimParams::default());
        let u = fw_evasive(&s(17.5, 0.0, 500.0), &p, &sim).unwrap();
        assert_relative_eq!(u.load_factor, 2.5, epsilon = 1e-12);
        assert_eq!(u.bank, 0.0);
        let u = fw_evasive(&s(17.5, p.pitch_max, 500.0), &p, &sim).unwrap();
        assert_eq!(u.load_factor, p.pitch_max.cos());
    }

    #[test]
    fn tau_and_b5() {
        let (p, sim) = (FwParams::default(), SimParams::default());
        assert_eq!(fw_tau(&s(17.5, 0.0, 500.0), &p, &sim).unwrap(), 0.0);
        let st = s(17.5, -0.1, 500.0);
        let tau = fw_tau(&st, &p, &sim).unwrap();
        assert_relative_eq!(tau, 0.1 * 17.5 / 14.715, epsilon = 1e-12);
        let b5 = fw_b(&st, 5, &p, &sim).unwrap();
        assert_relative_eq!(b5, 100.0 - 17.5 * 0.1 * (tau + 0.1), epsilon = 1e-12);
        assert!((b5 - 99.617).abs() < 1e-3);
        assert_eq!(fw_b(&s(17.5, 0.05, 450.0), 5, &p, &sim).unwrap(), 50.0);
        let p0 = FwParams { load_factor_max: 1.0, ..p };
        assert!(fw_tau(&st, &p0, &sim).is_err());
    }

    #[test]
    fn boundaries() {
        let (p, sim) = (FwParams::default(), SimParams::default());
        assert_eq!(fw_b(&s(p.speed_max, 0.0, 500.0), 1, &p, &sim).unwrap(), 0.0);
        assert_eq!(h_fw(&s(p.speed_min, p.pitch_max, 500.0), &p, &sim).unwrap(), 0.0);
    }

    #[test]
    fn default_parameters_satisfy_hypotheses() {
        let ext = validate_fw_hypotheses(&FwParams::default(), &SimParams::default()).unwrap();
        assert!(ext.min >= 0.0 && ext.max <= 20.60);
    }

    #[test]
    fn weak_engine_is_rejected() {
        let p = FwParams { thrust_max: 10.0, ..FwParams::default() };
        let err = fw_barrier(p, SimParams::default()).unwrap_err();
        assert!(matches!(err, Error::Config { ref field, .. } if field == "fixed_wing.thrust_max"), "{err}");
    }
}
