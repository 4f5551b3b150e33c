use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dtcbf::car::CarModel;
use dtcbf::env::{make_env, FilterChoice};
use dtcbf::fixed_wing::validate_fw_hypotheses;
use dtcbf::params::{load_config, Config};
use dtcbf::Error;
use dtcbf_harness::policies::make_policy;
use dtcbf_harness::runner::{run, summarize, write_csvs, RunOptions};
use dtcbf_harness::verify::{verify, SUITES};

#[derive(Parser)]
#[command(name = "dtcbf", version, about = "Barrier-function safety filters: episode runner and verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded episodes and write steps.csv and summary.csv.
    Run {
        /// Environment: fw (fixed-wing) or car.
        #[arg(long)]
        env: String,
        /// Nominal policy: random, constant, greedy-waypoint or greedy-speed.
        #[arg(long, default_value = "random")]
        policy: String,
        /// Safety filter: none, single, line or candidate-line.
        #[arg(long, default_value = "line")]
        filter: String,
        /// Line-search segments for line and candidate-line.
        #[arg(long, default_value_t = FilterChoice::DEFAULT_SEGMENTS)]
        segments: usize,
        #[arg(long, default_value_t = 10)]
        episodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory for the CSV files.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// TOML parameter file; built-in defaults when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Run a verification suite (or `all`) and print a JSON report.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Validate a parameter file and print derived quantities.
    ParamsCheck {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Failed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownName { .. } | Error::Config { .. } | Error::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Failed(e.to_string()),
        }
    }
}

fn config(path: Option<&Path>) -> Result<Config, Failure> {
    match path {
        Some(p) => load_config(p).map_err(|e| match e {
            Error::Io(m) => Failure::Usage(m),
            e => e.into(),
        }),
        None => Ok(Config::default()),
    }
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run {
            env,
            policy,
            filter,
            segments,
            episodes,
            seed,
            out,
            config: path,
        } => {
            let cfg = config(path.as_deref())?;
            let filter = FilterChoice::parse(&filter, segments)?;
            // Name and compatibility errors surface here as usage errors, before any episode runs.
            let usage = |e: Error| Failure::Usage(e.to_string());
            make_env(&env, filter, &cfg).map_err(usage)?;
            make_policy(&policy, &env, &cfg, seed).map_err(usage)?;
            let opts = RunOptions {
                env,
                policy,
                filter,
                episodes,
                seed,
                config: cfg,
            };
            let records = run(&opts)?;
            write_csvs(&out, &records)?;
            println!("{}", summarize(&records));
            Ok(())
        }
        Command::Verify {
            suite,
            samples,
            seed,
            out,
            config: path,
        } => {
            let cfg = config(path.as_deref())?;
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let reports = names
                .iter()
                .map(|s| verify(s, samples, seed, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            let json = serde_json::to_string_pretty(&reports).map_err(|e| Failure::Failed(e.to_string()))?;
            println!("{json}");
            if let Some(out) = out {
                std::fs::write(&out, &json).map_err(|e| Failure::Failed(format!("{}: {e}", out.display())))?;
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.suite.as_str()).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Failed(format!("failed suites: {}", failed.join(", "))))
            }
        }
        Command::ParamsCheck { config: path } => {
            let cfg = config(path.as_deref())?;
            let check = |r: dtcbf::Result<()>| r.map_err(|e| Failure::Failed(e.to_string()));
            check(cfg.validate())?;
            let ext = validate_fw_hypotheses(&cfg.fixed_wing, &cfg.sim).map_err(|e| Failure::Failed(e.to_string()))?;
            let model = CarModel::new(cfg.car, cfg.sim).map_err(|e| Failure::Failed(e.to_string()))?;
            let report = serde_json::json!({
                "valid": true,
                "fixed_wing": {
                    "ttilde_min": ext.min,
                    "ttilde_max": ext.max,
                    "ttilde_argmin": [ext.argmin.0, ext.argmin.1],
                    "ttilde_argmax": [ext.argmax.0, ext.argmax.1],
                    "thrust_max": cfg.fixed_wing.thrust_max,
                },
                "car": {
                    "lane_rollout_steps": model.lane_steps(),
                },
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json value"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
    }
}
