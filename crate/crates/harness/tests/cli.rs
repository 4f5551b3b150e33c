use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use dtcbf::env::FilterChoice;
use dtcbf::params::Config;
use dtcbf_harness::runner::{run, summarize, write_csvs, RunOptions};

fn dtcbf(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dtcbf")).args(args).output().expect("spawn dtcbf")
}

fn first_line(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap().trim_end().to_string()
}

#[test]
fn shielded_car_run_has_zero_cost_and_pinned_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = dtcbf(&["run", "--env", "car", "--policy", "random", "--filter", "single", "--episodes", "10", "--seed", "7", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("mean cost              0.000000"));
    assert_eq!(first_line(&dir.path().join("steps.csv")), golden("steps_header.csv"));
    assert_eq!(first_line(&dir.path().join("summary.csv")), golden("summary_header.csv"));
    let mut rdr = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let costs: Vec<f64> = rdr.records().map(|r| r.unwrap()[5].parse().unwrap()).collect();
    assert_eq!(costs.len(), 10);
    assert!(costs.iter().all(|c| *c == 0.0));
}

#[test]
fn unshielded_flight_accumulates_cost() {
    let dir = tempfile::tempdir().unwrap();
    let o = dtcbf(&["run", "--env", "fw", "--filter", "none", "--episodes", "10", "--seed", "7", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let mut rdr = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let total: f64 = rdr.records().map(|r| r.unwrap()[5].parse::<f64>().unwrap()).sum();
    assert!(total > 0.0);
}

#[test]
fn exit_codes() {
    assert_eq!(dtcbf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(dtcbf(&["run", "--env", "boat"]).status.code(), Some(2));
    assert_eq!(dtcbf(&["run", "--env", "car", "--filter", "magic"]).status.code(), Some(2));
    assert_eq!(dtcbf(&["run", "--env", "car", "--policy", "greedy-waypoint"]).status.code(), Some(2));
    assert_eq!(dtcbf(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(dtcbf(&["params-check", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(dtcbf(&["params-check"]).status.code(), Some(0));
    assert_eq!(dtcbf(&["verify", "composition", "--samples", "200"]).status.code(), Some(0));
    // The lane rollout horizon exceeds the published bound, so this suite reports a failure.
    assert_eq!(dtcbf(&["verify", "horizon"]).status.code(), Some(1));
}

#[test]
fn weak_engine_fails_params_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weak.toml");
    std::fs::write(&path, "[fixed_wing]\nthrust_max = 5.0\n").unwrap();
    let o = dtcbf(&["params-check", "--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("thrust_max"));
}

#[test]
fn verify_report_is_json() {
    let o = dtcbf(&["verify", "dblint-braking", "--samples", "500"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["suite"], "dblint-braking");
    assert_eq!(v[0]["passed"], true);
    assert!(v[0]["checks"].as_array().unwrap().len() >= 4);
}

#[test]
fn summary_matches_recomputation_from_steps_csv() {
    let opts = RunOptions {
        env: "fw".into(),
        policy: "random".into(),
        filter: FilterChoice::Line { segments: 32 },
        episodes: 6,
        seed: 3,
        config: Config::default(),
    };
    let records = run(&opts).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_csvs(dir.path(), &records).unwrap();

    #[derive(Default)]
    struct Ep {
        steps: usize,
        reward: f64,
        cost: f64,
        overrides: usize,
        dist: f64,
        unsafe_: bool,
    }
    let mut eps: BTreeMap<usize, Ep> = BTreeMap::new();
    let mut applied: Vec<Vec<f64>> = Vec::new();
    let mut rdr = csv::Reader::from_path(dir.path().join("steps.csv")).unwrap();
    for rec in rdr.records() {
        let r = rec.unwrap();
        let e = eps.entry(r[1].parse().unwrap()).or_default();
        let cost: f64 = r[8].parse().unwrap();
        e.steps += 1;
        e.reward += r[7].parse::<f64>().unwrap();
        e.cost += cost;
        e.unsafe_ |= cost > 0.0;
        if !matches!(&r[9], "none" | "nominal") {
            e.overrides += 1;
            e.dist += r[10].parse::<f64>().unwrap();
        }
        applied.push(r[6].split(';').map(|x| x.parse().unwrap()).collect());
    }

    let mut rdr = csv::Reader::from_path(dir.path().join("summary.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), eps.len());
    for row in &rows {
        let e = &eps[&row[1].parse::<usize>().unwrap()];
        assert_eq!(row[3].parse::<usize>().unwrap(), e.steps);
        assert_eq!(row[4].parse::<f64>().unwrap(), e.reward);
        assert_eq!(row[5].parse::<f64>().unwrap(), e.cost);
        assert_eq!(&row[6] == "1", e.unsafe_);
        assert_eq!(row[8].parse::<usize>().unwrap(), e.overrides);
        assert!((row[9].parse::<f64>().unwrap() - e.dist).abs() <= 1e-12 * e.dist.max(1.0));
    }

    let s = summarize(&records);
    let n = eps.len() as f64;
    let steps: usize = eps.values().map(|e| e.steps).sum();
    let overrides: usize = eps.values().map(|e| e.overrides).sum();
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(1.0);
    assert_eq!(s.episodes, eps.len());
    assert_eq!(s.steps, steps);
    assert!(close(s.mean_reward, eps.values().map(|e| e.reward).sum::<f64>() / n));
    assert!(close(s.mean_cost, eps.values().map(|e| e.cost).sum::<f64>() / n));
    assert_eq!(s.unsafe_episodes, eps.values().filter(|e| e.unsafe_).count());
    assert!(close(s.mean_override_distance, eps.values().map(|e| e.dist).sum::<f64>() / overrides as f64));
    assert!(close(s.nominal_pass_pct, 100.0 * (steps - overrides) as f64 / steps as f64));
    assert!((0.0..=100.0).contains(&s.nominal_pass_pct));
    let dim = applied[0].len();
    let std: f64 = (0..dim)
        .map(|i| {
            let mean = applied.iter().map(|a| a[i]).sum::<f64>() / steps as f64;
            (applied.iter().map(|a| (a[i] - mean).powi(2)).sum::<f64>() / steps as f64).sqrt()
        })
        .sum::<f64>()
        / dim as f64;
    assert!((s.action_std - std).abs() <= 1e-9 * std.max(1.0));
}
