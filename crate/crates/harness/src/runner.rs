//! Episode runner, metric aggregation and CSV output.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use dtcbf::env::{make_env, DoneReason, FilterChoice};
use dtcbf::filter::FilterMode;
use dtcbf::params::Config;
use dtcbf::{Error, Result};

use crate::policies::make_policy;

/// Bumped whenever a CSV column is added, removed or changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

pub const STEPS_HEADER: [&str; 14] = [
    "schema_version",
    "episode",
    "seed",
    "t",
    "state",
    "nominal",
    "applied",
    "reward",
    "cost",
    "mode",
    "override_distance",
    "line_fraction",
    "clamped",
    "done_reason",
];

pub const SUMMARY_HEADER: [&str; 10] = [
    "schema_version",
    "episode",
    "seed",
    "steps",
    "total_reward",
    "total_cost",
    "unsafe",
    "done_reason",
    "overrides",
    "override_distance_sum",
];

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub env: String,
    pub policy: String,
    pub filter: FilterChoice,
    pub episodes: usize,
    pub seed: u64,
    pub config: Config,
}

/// One environment step; `state` is the state the action was chosen in.
#[derive(Debug, Clone, PartialEq)]
pub struct StepRow {
    pub t: usize,
    pub state: Vec<f64>,
    pub nominal: Vec<f64>,
    pub applied: Vec<f64>,
    pub reward: f64,
    pub cost: f64,
    /// `None` when no filter is active.
    pub mode: Option<FilterMode>,
    pub override_distance: f64,
    pub line_fraction: f64,
    pub clamped: bool,
    pub done_reason: Option<DoneReason>,
}

impl StepRow {
    pub fn overridden(&self) -> bool {
        matches!(self.mode, Some(m) if m != FilterMode::NominalPassed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub episode: usize,
    pub seed: u64,
    pub rows: Vec<StepRow>,
    pub total_reward: f64,
    pub total_cost: f64,
    /// Some step had cost > 0.
    pub unsafe_episode: bool,
    pub done_reason: Option<DoneReason>,
}

impl EpisodeRecord {
    pub fn steps(&self) -> usize {
        self.rows.len()
    }

    pub fn overrides(&self) -> usize {
        self.rows.iter().filter(|r| r.overridden()).count()
    }

    pub fn override_distance_sum(&self) -> f64 {
        self.rows.iter().filter(|r| r.overridden()).map(|r| r.override_distance).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub episodes: usize,
    pub steps: usize,
    pub mean_reward: f64,
    pub mean_cost: f64,
    pub unsafe_episodes: usize,
    /// Mean ‖applied - nominal‖ over overridden steps (0 when none).
    pub mean_override_distance: f64,
    /// Population standard deviation of the applied action, averaged over its components.
    pub action_std: f64,
    /// Share of steps whose nominal action was applied unchanged, in percent.
    pub nominal_pass_pct: f64,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "episodes               {}", self.episodes)?;
        writeln!(f, "steps                  {}", self.steps)?;
        writeln!(f, "mean reward            {:.6}", self.mean_reward)?;
        writeln!(f, "mean cost              {:.6}", self.mean_cost)?;
        writeln!(f, "unsafe episodes        {}", self.unsafe_episodes)?;
        writeln!(f, "mean override distance {:.6}", self.mean_override_distance)?;
        writeln!(f, "action std             {:.6}", self.action_std)?;
        write!(f, "nominal pass           {:.2}%", self.nominal_pass_pct)
    }
}

pub fn run_episode(opts: &RunOptions, episode: usize) -> Result<EpisodeRecord> {
    let seed = opts.seed.wrapping_add(episode as u64);
    let mut env = make_env(&opts.env, opts.filter, &opts.config)?;
    let mut policy = make_policy(&opts.policy, &opts.env, &opts.config, seed)?;
    let mut obs = env.reset(seed)?;
    let mut rows = Vec::new();
    let (mut total_reward, mut total_cost) = (0.0, 0.0);
    loop {
        let state = env.state_vec();
        let action = policy.act(&obs);
        let r = env.step_vec(&action)?;
        total_reward += r.reward;
        total_cost += r.cost;
        let d = r.info.decision.as_ref();
        rows.push(StepRow {
            t: rows.len(),
            state,
            nominal: action,
            applied: r.info.applied.clone(),
            reward: r.reward,
            cost: r.cost,
            mode: d.map(|d| d.mode),
            override_distance: d.map_or(0.0, |d| d.override_distance),
            line_fraction: d.map_or(0.0, |d| d.line_fraction),
            clamped: r.info.clamped,
            done_reason: r.done_reason,
        });
        obs = r.observation;
        if r.done {
            return Ok(EpisodeRecord {
                episode,
                seed,
                unsafe_episode: rows.iter().any(|r| r.cost > 0.0),
                rows,
                total_reward,
                total_cost,
                done_reason: r.done_reason,
            });
        }
    }
}

/// Runs all episodes in parallel; the result is ordered by episode index.
pub fn run(opts: &RunOptions) -> Result<Vec<EpisodeRecord>> {
    (0..opts.episodes).into_par_iter().map(|i| run_episode(opts, i)).collect()
}

pub fn summarize(records: &[EpisodeRecord]) -> RunSummary {
    let n = records.len().max(1) as f64;
    let steps: usize = records.iter().map(EpisodeRecord::steps).sum();
    let overrides: usize = records.iter().map(EpisodeRecord::overrides).sum();
    let dist: f64 = records.iter().map(EpisodeRecord::override_distance_sum).sum();
    let dim = records
        .iter()
        .flat_map(|r| r.rows.first())
        .map(|r| r.applied.len())
        .next()
        .unwrap_or(0);
    let mut sum = vec![0.0; dim];
    let mut sum2 = vec![0.0; dim];
    for row in records.iter().flat_map(|r| &r.rows) {
        for (i, x) in row.applied.iter().enumerate() {
            sum[i] += x;
            sum2[i] += x * x;
        }
    }
    let m = steps.max(1) as f64;
    let action_std = if dim == 0 {
        0.0
    } else {
        (0..dim)
            .map(|i| {
                let mean = sum[i] / m;
                (sum2[i] / m - mean * mean).max(0.0).sqrt()
            })
            .sum::<f64>()
            / dim as f64
    };
    RunSummary {
        episodes: records.len(),
        steps,
        mean_reward: records.iter().map(|r| r.total_reward).sum::<f64>() / n,
        mean_cost: records.iter().map(|r| r.total_cost).sum::<f64>() / n,
        unsafe_episodes: records.iter().filter(|r| r.unsafe_episode).count(),
        mean_override_distance: if overrides == 0 { 0.0 } else { dist / overrides as f64 },
        action_std,
        nominal_pass_pct: if steps == 0 {
            100.0
        } else {
            100.0 * (steps - overrides) as f64 / steps as f64
        },
    }
}

pub fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(";")
}

fn io(e: impl fmt::Display) -> Error {
    Error::Io(e.to_string())
}

/// Writes `steps.csv` and `summary.csv` into `dir` (created if missing).
pub fn write_csvs(dir: &Path, records: &[EpisodeRecord]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let mut w = csv::Writer::from_path(dir.join("steps.csv")).map_err(io)?;
    w.write_record(STEPS_HEADER).map_err(io)?;
    for rec in records {
        for r in &rec.rows {
            w.write_record([
                SCHEMA_VERSION.to_string(),
                rec.episode.to_string(),
                rec.seed.to_string(),
                r.t.to_string(),
                join(&r.state),
                join(&r.nominal),
                join(&r.applied),
                format!("{}", r.reward),
                format!("{}", r.cost),
                r.mode.map_or("none", FilterMode::as_str).to_string(),
                format!("{}", r.override_distance),
                format!("{}", r.line_fraction),
                (r.clamped as u8).to_string(),
                r.done_reason.map_or("", DoneReason::as_str).to_string(),
            ])
            .map_err(io)?;
        }
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join("summary.csv")).map_err(io)?;
    w.write_record(SUMMARY_HEADER).map_err(io)?;
    for rec in records {
        w.write_record([
            SCHEMA_VERSION.to_string(),
            rec.episode.to_string(),
            rec.seed.to_string(),
            rec.steps().to_string(),
            format!("{}", rec.total_reward),
            format!("{}", rec.total_cost),
            (rec.unsafe_episode as u8).to_string(),
            rec.done_reason.map_or("", DoneReason::as_str).to_string(),
            rec.overrides().to_string(),
            format!("{}", rec.override_distance_sum()),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
