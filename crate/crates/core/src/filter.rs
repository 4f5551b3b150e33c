//! Safety overrides.
//!
//! Every filter first clamps the nominal control into U, passes it through
//! when c_h(s, û) >= 0, and otherwise searches for a nearby control that
//! satisfies the constraint. The evasive maneuver ζ(s) is always the last
//! resort; it must satisfy the constraint to within [`CONSTRAINT_TOL`].

use crate::barrier::{constraint, BarrierFn};
use crate::control::{dist2, lerp, ControlVector};
use crate::dynamics::Plant;
use crate::{Error, Result, CONSTRAINT_TOL, VIOLATION_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterMode {
    NominalPassed,
    Single,
    Line,
    CandidateLine,
}

impl FilterMode {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterMode::NominalPassed => "nominal",
            FilterMode::Single => "single",
            FilterMode::Line => "line",
            FilterMode::CandidateLine => "candidate-line",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterDecision<U> {
    pub applied: U,
    /// The nominal control after clamping into U.
    pub nominal: U,
    pub raw_nominal: U,
    /// Whether clamping moved the nominal control.
    pub clamped: bool,
    pub mode: FilterMode,
    /// c_h(s, applied).
    pub constraint_value: f64,
    /// ‖applied - nominal‖₂ (clamped nominal).
    pub override_distance: f64,
    /// Position of `applied` on the searched segment, 0 = nominal.
    pub line_fraction: f64,
}

/// Shared state of one filtering call.
struct Ctx<'a, S, U> {
    h: &'a BarrierFn<S, U>,
    plant: &'a Plant<S, U>,
    s: &'a S,
    lambda: f64,
    raw: U,
    nominal: U,
    clamped: bool,
}

impl<'a, S: Copy + 'static, U: ControlVector> Ctx<'a, S, U> {
    fn new(h: &'a BarrierFn<S, U>, plant: &'a Plant<S, U>, s: &'a S, nominal: &U, lambda: f64) -> Result<Self> {
        let h0 = h.evaluate(s)?;
        if h0 < -VIOLATION_TOL {
            return Err(Error::Precondition(format!("{}(s) = {h0} is negative", h.name())));
        }
        let (n, clamped) = plant.bounds.clamp(nominal);
        Ok(Self {
            h,
            plant,
            s,
            lambda,
            raw: *nominal,
            nominal: n,
            clamped,
        })
    }

    fn c(&self, u: &U) -> Result<f64> {
        constraint(self.h, self.plant, self.s, u, self.lambda)
    }

    /// Constraint value when `u` is admissible and safe.
    fn safe(&self, u: &U) -> Result<Option<f64>> {
        if !self.plant.bounds.contains(u) {
            return Ok(None);
        }
        let c = self.c(u)?;
        Ok((c >= 0.0).then_some(c))
    }

    /// ζ(s) projected into U, checked against the barrier guarantee.
    fn evasive(&self) -> Result<(U, f64)> {
        let z = self.h.evasive(self.s)?;
        if !self.plant.bounds.contains_within(&z, CONSTRAINT_TOL) {
            return Err(Error::Invariant(format!("{} evasive control {z:?} outside U", self.h.name())));
        }
        let (z, _) = self.plant.bounds.clamp(&z);
        let c = self.c(&z)?;
        if !(c >= -CONSTRAINT_TOL) {
            return Err(Error::Invariant(format!(
                "{} evasive control violates its constraint: c = {c}",
                self.h.name()
            )));
        }
        Ok((z, c))
    }

    fn decision(&self, applied: U, mode: FilterMode, c: f64, t: f64) -> FilterDecision<U> {
        FilterDecision {
            applied,
            nominal: self.nominal,
            raw_nominal: self.raw,
            clamped: self.clamped,
            mode,
            constraint_value: c,
            override_distance: dist2(&applied, &self.nominal).sqrt(),
            line_fraction: t,
        }
    }

    fn passed(&self) -> Result<Option<FilterDecision<U>>> {
        Ok(self
            .safe(&self.nominal)?
            .map(|c| self.decision(self.nominal, FilterMode::NominalPassed, c, 0.0)))
    }

    /// Smallest grid fraction t in (0, 1) with a safe point on the segment toward `target`.
    fn scan(&self, target: &U, segments: usize) -> Result<Option<(U, f64, f64)>> {
        for i in 1..segments {
            let t = i as f64 / segments as f64;
            let (u, _) = self.plant.bounds.clamp(&lerp(&self.nominal, target, t));
            if let Some(c) = self.safe(&u)? {
                return Ok(Some((u, c, t)));
            }
        }
        Ok(None)
    }
}

/// Pass the nominal control if safe, else apply ζ(s).
pub fn filter_single<S: Copy + 'static, U: ControlVector>(
    h: &BarrierFn<S, U>,
    plant: &Plant<S, U>,
    s: &S,
    nominal: &U,
    lambda: f64,
) -> Result<FilterDecision<U>> {
    let ctx = Ctx::new(h, plant, s, nominal, lambda)?;
    if let Some(d) = ctx.passed()? {
        return Ok(d);
    }
    let (z, c) = ctx.evasive()?;
    Ok(ctx.decision(z, FilterMode::Single, c, 1.0))
}

/// Uniform search on the segment from the clamped nominal to ζ(s) over
/// `segments + 1` points; returns the safe point nearest the nominal.
pub fn filter_line<S: Copy + 'static, U: ControlVector>(
    h: &BarrierFn<S, U>,
    plant: &Plant<S, U>,
    s: &S,
    nominal: &U,
    lambda: f64,
    segments: usize,
) -> Result<FilterDecision<U>> {
    let ctx = Ctx::new(h, plant, s, nominal, lambda)?;
    line(&ctx, segments.max(1))
}

fn line<S: Copy + 'static, U: ControlVector>(ctx: &Ctx<'_, S, U>, segments: usize) -> Result<FilterDecision<U>> {
    if let Some(d) = ctx.passed()? {
        return Ok(d);
    }
    let (z, cz) = ctx.evasive()?;
    Ok(match ctx.scan(&z, segments)? {
        Some((u, c, t)) => ctx.decision(u, FilterMode::Line, c, t),
        None => ctx.decision(z, FilterMode::Line, cz, 1.0),
    })
}

/// Line search toward ζ(s) and toward each candidate; the safe result
/// nearest the nominal wins, ties going to the ζ line.
pub fn filter_with_candidates<S: Copy + 'static, U: ControlVector>(
    h: &BarrierFn<S, U>,
    plant: &Plant<S, U>,
    s: &S,
    nominal: &U,
    candidates: &[U],
    lambda: f64,
    segments: usize,
) -> Result<FilterDecision<U>> {
    let ctx = Ctx::new(h, plant, s, nominal, lambda)?;
    let segments = segments.max(1);
    let mut best = line(&ctx, segments)?;
    if best.mode == FilterMode::NominalPassed {
        return Ok(best);
    }
    let mut best_d2 = dist2(&best.applied, &ctx.nominal);
    for cand in candidates {
        let (target, _) = plant.bounds.clamp(cand);
        let found = match ctx.scan(&target, segments)? {
            Some(hit) => Some(hit),
            None => ctx.safe(&target)?.map(|c| (target, c, 1.0)),
        };
        if let Some((u, c, t)) = found {
            let d2 = dist2(&u, &ctx.nominal);
            if d2 < best_d2 {
                best_d2 = d2;
                best = ctx.decision(u, FilterMode::CandidateLine, c, t);
            }
        }
    }
    Ok(best)
}

/// Brute-force approximation of argmin ‖u - û‖² subject to c_h(s, u) >= 0, u ∈ U.
///
/// Searches a uniform grid with `resolution + 1` points per axis (so doubling
/// the resolution refines the grid), the clamped nominal and ζ(s); the best
/// point is then pulled toward the nominal by bisection along their segment.
/// Exponential in the control dimension; meant for tests.
pub fn grid_oracle<S: Copy + 'static, U: ControlVector>(
    h: &BarrierFn<S, U>,
    plant: &Plant<S, U>,
    s: &S,
    nominal: &U,
    lambda: f64,
    resolution: usize,
) -> Result<U> {
    if U::DIM > 3 {
        return Err(Error::Precondition(format!("grid oracle supports up to 3 controls, got {}", U::DIM)));
    }
    let ctx = Ctx::new(h, plant, s, nominal, lambda)?;
    if ctx.safe(&ctx.nominal)?.is_some() {
        return Ok(ctx.nominal);
    }
    let (z, _) = ctx.evasive()?;
    let mut best = z;
    let mut best_d2 = dist2(&z, &ctx.nominal);
    for u in plant.bounds.grid(resolution.max(1) + 1) {
        let d2 = dist2(&u, &ctx.nominal);
        if d2 < best_d2 && ctx.safe(&u)?.is_some() {
            best = u;
            best_d2 = d2;
        }
    }
    // the safe set along the segment need not be an interval: scan, then bisect
    // only the first unsafe-to-safe transition
    const SCAN: usize = 256;
    let mut lo = 0.0;
    let mut hi = 1.0;
    for i in 1..SCAN {
        let t = i as f64 / SCAN as f64;
        let (u, _) = plant.bounds.clamp(&lerp(&ctx.nominal, &best, t));
        if ctx.safe(&u)?.is_some() {
            hi = t;
            break;
        }
        lo = t;
    }
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (u, _) = plant.bounds.clamp(&lerp(&ctx.nominal, &best, mid));
        if ctx.safe(&u)?.is_some() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi < 1.0 {
        let (u, _) = plant.bounds.clamp(&lerp(&ctx.nominal, &best, hi));
        if ctx.safe(&u)?.is_some() && dist2(&u, &ctx.nominal) <= best_d2 {
            best = u;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dblint::{low_barrier, EvasiveAccelPair};
    use crate::dynamics::DblIntState;
    use crate::params::SimParams;

    fn setup() -> (BarrierFn<DblIntState, f64>, Plant<DblIntState, f64>) {
        let sim = SimParams::default();
        let pair = EvasiveAccelPair::new(-2.0, 2.0, -3.0, 3.0).unwrap();
        (low_barrier(0.0, pair, sim), Plant::double_integrator(sim, -3.0, 3.0))
    }

    #[test]
    fn evasive_nominal_passes() {
        let (h, plant) = setup();
        let s = DblIntState { p: 1.0, v: -1.5 };
        let z = h.evasive(&s).unwrap();
        let d = filter_single(&h, &plant, &s, &z, 0.5).unwrap();
        assert_eq!(d.mode, FilterMode::NominalPassed);
        assert_eq!(d.override_distance, 0.0);
    }

    #[test]
    fn unsafe_nominal_is_overridden() {
        let (h, plant) = setup();
        let s = DblIntState { p: 1.0, v: -1.5 };
        let d = filter_single(&h, &plant, &s, &-3.0, 0.5).unwrap();
        assert_eq!(d.mode, FilterMode::Single);
        assert_eq!(d.applied, h.evasive(&s).unwrap());
        let l = filter_line(&h, &plant, &s, &-3.0, 0.5, 32).unwrap();
        assert!(l.override_distance <= d.override_distance);
        assert!(l.constraint_value >= 0.0);
        let one = filter_line(&h, &plant, &s, &-3.0, 0.5, 1).unwrap();
        assert_eq!(one.applied, d.applied);
    }

    #[test]
    fn out_of_box_nominal_is_clamped_and_reported() {
        let (h, plant) = setup();
        let s = DblIntState { p: 10.0, v: 0.0 };
        let d = filter_single(&h, &plant, &s, &7.0, 0.5).unwrap();
        assert!(d.clamped);
        assert_eq!(d.applied, 3.0);
        assert_eq!(d.raw_nominal, 7.0);
    }

    #[test]
    fn oracle_never_worse_than_line() {
        let (h, plant) = setup();
        let s = DblIntState { p: 1.0, v: -1.5 };
        let o = grid_oracle(&h, &plant, &s, &-3.0, 0.5, 1000).unwrap();
        let l = filter_line(&h, &plant, &s, &-3.0, 0.5, 32).unwrap();
        assert!((o + 3.0).abs() <= l.override_distance + 1e-12);
        let cand = filter_with_candidates(&h, &plant, &s, &-3.0, &[o], 0.5, 32).unwrap();
        assert!((o + 3.0).abs() <= cand.override_distance + 1e-12);
        assert!(cand.override_distance <= l.override_distance);
    }
}
