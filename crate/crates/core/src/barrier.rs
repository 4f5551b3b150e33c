//! Discrete-time exponential control barrier functions.
//!
//! A [`BarrierFn`] pairs an output function h with an evasive maneuver ζ such
//! that c_h(s, ζ(s)) = h(f(s, ζ(s))) - (1 - λ) h(s) >= 0 whenever h(s) >= 0.

use std::sync::Arc;

use crate::control::ControlVector;
use crate::dynamics::Plant;
use crate::{Error, Result, VIOLATION_TOL};

pub type ValueFn<S> = Arc<dyn Fn(&S) -> Result<f64> + Send + Sync>;
pub type EvasiveFn<S, U> = Arc<dyn Fn(&S) -> Result<U> + Send + Sync>;

#[derive(Clone)]
pub struct BarrierFn<S, U> {
    name: String,
    value: ValueFn<S>,
    evasive: EvasiveFn<S, U>,
    horizon_hint: Option<usize>,
}

impl<S, U> std::fmt::Debug for BarrierFn<S, U> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BarrierFn")
            .field("name", &self.name)
            .field("horizon_hint", &self.horizon_hint)
            .finish_non_exhaustive()
    }
}

impl<S: 'static, U: 'static> BarrierFn<S, U> {
    pub fn new(
        name: impl Into<String>,
        value: impl Fn(&S) -> Result<f64> + Send + Sync + 'static,
        evasive: impl Fn(&S) -> Result<U> + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            value: Arc::new(value),
            evasive: Arc::new(evasive),
            horizon_hint: None,
        }
    }

    pub fn with_horizon_hint(mut self, steps: usize) -> Self {
        self.horizon_hint = Some(steps);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn horizon_hint(&self) -> Option<usize> {
        self.horizon_hint
    }

    pub fn evaluate(&self, s: &S) -> Result<f64> {
        (self.value)(s)
    }

    /// ζ(s).
    pub fn evasive(&self, s: &S) -> Result<U> {
        (self.evasive)(s)
    }

    /// The same barrier with a different evasive maneuver.
    pub fn with_evasive(self, evasive: impl Fn(&S) -> Result<U> + Send + Sync + 'static) -> Self {
        Self {
            evasive: Arc::new(evasive),
            ..self
        }
    }

    /// Pulls a barrier on a sub-state back to a larger state `T` through `project`.
    pub fn pullback<T: 'static>(self, project: impl Fn(&T) -> S + Send + Sync + 'static) -> BarrierFn<T, U> {
        let project = Arc::new(project);
        let p2 = project.clone();
        let (value, evasive) = (self.value, self.evasive);
        BarrierFn {
            name: self.name,
            value: Arc::new(move |t| value(&project(t))),
            evasive: Arc::new(move |t| evasive(&p2(t))),
            horizon_hint: self.horizon_hint,
        }
    }
}

/// A safety function ρ; ρ(s) >= 0 marks the states considered safe.
#[derive(Clone)]
pub struct SafetyFunction<S> {
    rho: Arc<dyn Fn(&S) -> f64 + Send + Sync>,
}

impl<S> SafetyFunction<S> {
    pub fn new(rho: impl Fn(&S) -> f64 + Send + Sync + 'static) -> Self {
        Self { rho: Arc::new(rho) }
    }

    pub fn eval(&self, s: &S) -> f64 {
        (self.rho)(s)
    }
}

/// c_h(s, u) = h(f(s, u)) - (1 - λ) h(s).
pub fn constraint<S, U: ControlVector>(
    h: &BarrierFn<S, U>,
    plant: &Plant<S, U>,
    s: &S,
    u: &U,
    lambda: f64,
) -> Result<f64>
where
    S: 'static,
{
    let next = plant.step(s, u)?;
    Ok(h.evaluate(&next)? - (1.0 - lambda) * h.evaluate(s)?)
}

/// Pointwise minimum. Only a barrier when `shared_evasive` certifies both arguments.
pub fn compose_min<S: 'static, U: 'static>(
    h1: &BarrierFn<S, U>,
    h2: &BarrierFn<S, U>,
    shared_evasive: impl Fn(&S) -> Result<U> + Send + Sync + 'static,
) -> BarrierFn<S, U> {
    let (a, b) = (h1.value.clone(), h2.value.clone());
    BarrierFn {
        name: format!("min({}, {})", h1.name, h2.name),
        value: Arc::new(move |s| Ok(a(s)?.min(b(s)?))),
        evasive: Arc::new(shared_evasive),
        horizon_hint: max_hint(h1.horizon_hint, h2.horizon_hint),
    }
}

/// Pointwise maximum; the evasive maneuver follows the larger argument, ties go to `h1`.
pub fn compose_max<S: 'static, U: 'static>(h1: &BarrierFn<S, U>, h2: &BarrierFn<S, U>) -> BarrierFn<S, U> {
    let (a, b) = (h1.value.clone(), h2.value.clone());
    let (a2, b2) = (h1.value.clone(), h2.value.clone());
    let (ea, eb) = (h1.evasive.clone(), h2.evasive.clone());
    BarrierFn {
        name: format!("max({}, {})", h1.name, h2.name),
        value: Arc::new(move |s| Ok(a(s)?.max(b(s)?))),
        evasive: Arc::new(move |s| if a2(s)? >= b2(s)? { ea(s) } else { eb(s) }),
        horizon_hint: max_hint(h1.horizon_hint, h2.horizon_hint),
    }
}

fn max_hint(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

/// Value of a rollout barrier and the number of steps K the rollout needed to settle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RolloutValue {
    pub value: f64,
    pub steps: usize,
}

/// h(s) = min over k in [0, K] of ρ(ŝ_k), ŝ₀ = s, ŝ_{k+1} = f(ŝ_k, ζ(ŝ_k)).
///
/// K is the first k with `settled(ŝ_k)`; after settling ρ must be unable to
/// decrease along the rollout, which the caller guarantees.
#[derive(Clone)]
pub struct RolloutBarrier<S, U> {
    name: String,
    rho: SafetyFunction<S>,
    zeta: EvasiveFn<S, U>,
    plant: Plant<S, U>,
    settled: Arc<dyn Fn(&S) -> bool + Send + Sync>,
    max_steps: usize,
}

pub fn rollout_barrier<S, U>(
    name: impl Into<String>,
    rho: SafetyFunction<S>,
    zeta: impl Fn(&S) -> Result<U> + Send + Sync + 'static,
    plant: Plant<S, U>,
    settled: impl Fn(&S) -> bool + Send + Sync + 'static,
    max_steps: usize,
) -> RolloutBarrier<S, U> {
    RolloutBarrier {
        name: name.into(),
        rho,
        zeta: Arc::new(zeta),
        plant,
        settled: Arc::new(settled),
        max_steps,
    }
}

impl<S: Copy + 'static, U: ControlVector> RolloutBarrier<S, U> {
    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    pub fn evaluate(&self, s: &S) -> Result<RolloutValue> {
        let mut cur = *s;
        let mut value = self.rho.eval(&cur);
        let mut k = 0;
        while !(self.settled)(&cur) {
            if k == self.max_steps {
                return Err(Error::Horizon {
                    name: self.name.clone(),
                    max_steps: self.max_steps,
                });
            }
            cur = self.plant.step(&cur, &(self.zeta)(&cur)?)?;
            value = value.min(self.rho.eval(&cur));
            k += 1;
        }
        Ok(RolloutValue { value, steps: k })
    }

    pub fn into_barrier(self) -> BarrierFn<S, U> {
        let name = self.name.clone();
        let zeta = self.zeta.clone();
        let hint = self.max_steps;
        BarrierFn {
            name,
            value: Arc::new(move |s| self.evaluate(s).map(|r| r.value)),
            evasive: zeta,
            horizon_hint: Some(hint),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    /// First step k >= 1 with h(s_k) < -VIOLATION_TOL.
    pub first_violation: Option<usize>,
    pub min_value: f64,
    pub steps: usize,
}

/// Simulates `policy` from `s0` and records where h dips below the violation tolerance.
pub fn check_forward_invariance<S: Copy + 'static, U: ControlVector>(
    h: &BarrierFn<S, U>,
    plant: &Plant<S, U>,
    mut policy: impl FnMut(&S) -> Result<U>,
    s0: &S,
    steps: usize,
) -> Result<InvarianceReport> {
    let h0 = h.evaluate(s0)?;
    if h0 < 0.0 {
        return Err(Error::Precondition(format!("{}(s0) = {h0} < 0", h.name)));
    }
    let mut s = *s0;
    let mut report = InvarianceReport {
        first_violation: None,
        min_value: h0,
        steps,
    };
    for k in 1..=steps {
        let u = policy(&s)?;
        s = plant.step(&s, &u)?;
        let v = h.evaluate(&s)?;
        report.min_value = report.min_value.min(v);
        if v < -VIOLATION_TOL && report.first_violation.is_none() {
            report.first_violation = Some(k);
        }
    }
    Ok(report)
}
