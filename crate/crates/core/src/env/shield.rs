use crate::barrier::BarrierFn;
use crate::control::ControlVector;
use crate::dynamics::Plant;
use crate::filter::{filter_line, filter_single, filter_with_candidates, FilterDecision};
use crate::{Error, Result};

use super::{DecisionRecord, Environment, StepResult};

/// Which override sits in front of the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterChoice {
    None,
    Single,
    Line { segments: usize },
    /// Line search toward ζ(s) plus toward [`default_candidates`] and any
    /// externally supplied candidates.
    Candidates { segments: usize },
}

impl FilterChoice {
    pub const DEFAULT_SEGMENTS: usize = 32;

    /// `none`, `single`, `line` or `candidates`.
    pub fn parse(name: &str, segments: usize) -> Result<Self> {
        Ok(match name {
            "none" => FilterChoice::None,
            "single" => FilterChoice::Single,
            "line" => FilterChoice::Line { segments },
            "candidates" | "candidate-line" => FilterChoice::Candidates { segments },
            other => {
                return Err(Error::UnknownName {
                    kind: "filter",
                    name: other.to_string(),
                })
            }
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FilterChoice::None => "none",
            FilterChoice::Single => "single",
            FilterChoice::Line { .. } => "line",
            FilterChoice::Candidates { .. } => "candidates",
        }
    }
}

/// The nominal control with one component at a time replaced by ζ's.
pub fn default_candidates<U: ControlVector>(nominal: &U, zeta: &U) -> Vec<U> {
    let (n, z) = (nominal.to_vec(), zeta.to_vec());
    (0..U::DIM)
        .map(|i| {
            let mut c = n.clone();
            c[i] = z[i];
            U::from_slice(&c)
        })
        .collect()
}

/// An environment whose actions pass through a safety filter first.
pub struct ShieldedEnv<E> {
    inner: E,
    choice: FilterChoice,
}

impl<E: Environment> ShieldedEnv<E> {
    pub fn new(inner: E, choice: FilterChoice) -> Self {
        Self { inner, choice }
    }

    pub fn inner(&self) -> &E {
        &self.inner
    }

    pub fn choice(&self) -> FilterChoice {
        self.choice
    }

    /// The decision the shield would take for `action` in the current state.
    pub fn decide(&self, action: &E::Control, extra: &[E::Control]) -> Result<Option<FilterDecision<E::Control>>> {
        let (h, plant, s, lambda) = (self.inner.barrier(), self.inner.plant(), self.inner.state(), self.inner.lambda());
        Ok(match self.choice {
            FilterChoice::None => None,
            FilterChoice::Single => Some(filter_single(h, plant, s, action, lambda)?),
            FilterChoice::Line { segments } => Some(filter_line(h, plant, s, action, lambda, segments)?),
            FilterChoice::Candidates { segments } => {
                let (nominal, _) = plant.bounds.clamp(action);
                let mut cands = default_candidates(&nominal, &h.evasive(s)?);
                cands.extend_from_slice(extra);
                Some(filter_with_candidates(h, plant, s, action, &cands, lambda, segments)?)
            }
        })
    }

    /// Step with additional override candidates (e.g. from a learned generator).
    pub fn step_with_candidates(&mut self, action: &E::Control, extra: &[E::Control]) -> Result<StepResult> {
        if self.inner.is_done() {
            return Err(Error::EpisodeDone);
        }
        let Some(d) = self.decide(action, extra)? else {
            return self.inner.step(action);
        };
        let mut r = self.inner.step(&d.applied)?;
        r.info.clamped = d.clamped;
        r.info.nominal = action.to_vec();
        r.info.decision = Some(DecisionRecord {
            mode: d.mode,
            nominal: d.nominal.to_vec(),
            applied: d.applied.to_vec(),
            constraint_value: d.constraint_value,
            override_distance: d.override_distance,
            line_fraction: d.line_fraction,
        });
        Ok(r)
    }
}

impl<E: Environment> Environment for ShieldedEnv<E> {
    type State = E::State;
    type Control = E::Control;

    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn reset(&mut self, seed: u64) -> Result<Vec<f64>> {
        self.inner.reset(seed)
    }

    fn step(&mut self, action: &E::Control) -> Result<StepResult> {
        self.step_with_candidates(action, &[])
    }

    fn state(&self) -> &E::State {
        self.inner.state()
    }

    fn observation(&self) -> Vec<f64> {
        self.inner.observation()
    }

    fn observation_len(&self) -> usize {
        self.inner.observation_len()
    }

    fn plant(&self) -> &Plant<E::State, E::Control> {
        self.inner.plant()
    }

    fn barrier(&self) -> &BarrierFn<E::State, E::Control> {
        self.inner.barrier()
    }

    fn lambda(&self) -> f64 {
        self.inner.lambda()
    }

    fn is_done(&self) -> bool {
        self.inner.is_done()
    }
}
