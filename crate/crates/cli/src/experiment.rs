//! Seeded repeated-trial runner: one CSV row per trial, a JSON aggregate, and
//! per-trial certificate files. Certificates never contain runtimes, so reruns
//! with the same seed are byte-identical; only the CSV `runtime_ms` column may
//! differ.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use hfree_core::constructions::{PlanOverrides, VerifyLevel};
use hfree_core::solvers::SolverBudget;

use crate::patterns::{load_hypergraph, parse_family};
use crate::tasks::{self, ConstantsSpec, TaskOutcome};

/// CSV column order; stable, documented in the README.
pub const CSV_HEADER: [&str; 14] = [
    "trial", "seed", "task", "r", "n", "family", "edges", "alpha", "chi", "palette", "free",
    "pass", "cert", "runtime_ms",
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub task: String,
    #[serde(default)]
    pub seeds: Option<Vec<u64>>,
    #[serde(default)]
    pub base_seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub r: Option<usize>,
    #[serde(default)]
    pub family: Option<String>,
    #[serde(default)]
    pub pattern: Option<String>,
    /// hypergraph file for solve/color/invariants/check-free tasks
    #[serde(default)]
    pub input: Option<String>,
    #[serde(default)]
    pub tree: Option<String>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub p: Option<f64>,
    #[serde(default)]
    pub t: Option<f64>,
    #[serde(default)]
    pub verify: Option<String>,
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub budget_resamples: Option<u64>,
    #[serde(default)]
    pub out_dir: Option<String>,
}

/// Flag-level overrides applied on top of the config file.
#[derive(Default)]
pub struct ConfigOverrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub budget_nodes: Option<u64>,
    pub budget_resamples: Option<u64>,
    pub verify: Option<String>,
}

pub fn parse_verify(s: &str) -> Result<VerifyLevel> {
    match s {
        "none" => Ok(VerifyLevel::None),
        "freeness" => Ok(VerifyLevel::Freeness),
        "full" => Ok(VerifyLevel::Full),
        _ => bail!("unknown verify level `{s}` (expected none|freeness|full)"),
    }
}

struct TrialRow {
    trial: usize,
    seed: u64,
    task: String,
    family: String,
    outcome: TaskOutcome,
    cert_path: String,
    runtime_ms: u128,
}

fn require<T: Copy>(v: Option<T>, what: &str, task: &str) -> Result<T> {
    v.with_context(|| format!("task `{task}` requires config field `{what}`"))
}

fn run_one(cfg: &ExperimentConfig, seed: u64, budget: &SolverBudget, verify: VerifyLevel) -> Result<TaskOutcome> {
    let task = cfg.task.as_str();
    let overrides = PlanOverrides { p: cfg.p, t: cfg.t };
    match task {
        "invariants" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            tasks::invariants(&g)
        }
        "check-free" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            let fam = parse_family(require_str(&cfg.pattern, "pattern", task)?)?;
            tasks::check_free(&g, &fam)
        }
        "solve-chi" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            tasks::solve_chi(&g, budget)
        }
        "solve-alpha" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            tasks::solve_alpha(&g, budget)
        }
        "color-lll" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            let k = require(cfg.k, "k", task)?;
            tasks::color_lll(&g, k, seed, budget, false)
        }
        "color-peel" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            tasks::color_peel(&g, seed)
        }
        "color-indnbd" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            let k = require(cfg.k, "k", task)?;
            tasks::color_indnbd(&g, k, seed, budget)
        }
        "color-tree" => {
            let g = load_hypergraph(require_str(&cfg.input, "input", task)?)?;
            let t = load_hypergraph(require_str(&cfg.tree, "tree", task)?)?;
            tasks::color_tree(&g, &t, false)
        }
        "plan" => {
            let fam = parse_family(require_str(&cfg.family, "family", task)?)?;
            tasks::plan(&fam, require(cfg.n, "n", task)?, overrides)
        }
        "construct-deletion" => {
            let fam = parse_family(require_str(&cfg.family, "family", task)?)?;
            tasks::construct_deletion(&fam, require(cfg.n, "n", task)?, overrides, seed, verify)
        }
        "construct-cliquefree" => {
            tasks::construct_cliquefree(
                require(cfg.n, "n", task)?,
                require(cfg.r, "r", task)?,
                seed,
            )
        }
        "constants" => {
            let spec = parse_constants_spec(require_str(&cfg.family, "family", task)?)?;
            tasks::constants(&spec)
        }
        _ => bail!("unknown task `{task}`"),
    }
}

fn require_str<'a>(v: &'a Option<String>, what: &str, task: &str) -> Result<&'a str> {
    v.as_deref()
        .with_context(|| format!("task `{task}` requires config field `{what}`"))
}

pub fn parse_constants_spec(s: &str) -> Result<ConstantsSpec> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        ["rl", r, l] => Ok(ConstantsSpec::Rl(r.parse()?, l.parse()?)),
        ["fr", r] => Ok(ConstantsSpec::Fr(r.parse()?)),
        _ => bail!("constants family must be rl:R:L or fr:R, got `{s}`"),
    }
}

fn opt_str<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn stats(values: &[f64]) -> Value {
    if values.is_empty() {
        return Value::Null;
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    json!({ "min": min, "mean": mean, "max": max })
}

/// Runs all trials, writes `trials.csv`, `aggregate.json`, and per-trial
/// certificates under `out_dir`. Returns process exit code: 0 iff every
/// trial passed.
pub fn run_experiment(mut cfg: ExperimentConfig, flags: ConfigOverrides) -> Result<i32> {
    if let Some(s) = flags.seed {
        cfg.base_seed = Some(s);
    }
    if let Some(t) = flags.trials {
        cfg.trials = Some(t);
    }
    if let Some(v) = flags.verify {
        cfg.verify = Some(v);
    }
    if let Some(b) = flags.budget_nodes {
        cfg.budget_nodes = Some(b);
    }
    if let Some(b) = flags.budget_resamples {
        cfg.budget_resamples = Some(b);
    }
    let out_dir = flags
        .out_dir
        .or_else(|| cfg.out_dir.as_ref().map(PathBuf::from))
        .context("no output directory (set out_dir in the config or pass --out-dir)")?;
    std::fs::create_dir_all(&out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;

    let seeds: Vec<u64> = match (&cfg.seeds, cfg.base_seed, cfg.trials) {
        (Some(list), _, _) => list.clone(),
        (None, base, Some(t)) => {
            let b = base.unwrap_or(0);
            (0..t as u64).map(|i| b.wrapping_add(i)).collect()
        }
        (None, Some(b), None) => vec![b],
        (None, None, None) => bail!("config needs `seeds` or (`base_seed`, `trials`)"),
    };
    let mut budget = SolverBudget::default();
    if let Some(nc) = cfg.budget_nodes {
        budget.node_cap = nc;
    }
    if let Some(rc) = cfg.budget_resamples {
        budget.resample_cap = rc;
    }
    let verify = parse_verify(cfg.verify.as_deref().unwrap_or("freeness"))?;

    let mut rows: Vec<TrialRow> = Vec::with_capacity(seeds.len());
    for (trial, &seed) in seeds.iter().enumerate() {
        let started = Instant::now();
        let outcome = match run_one(&cfg, seed, &budget, verify) {
            Ok(o) => o,
            Err(e) => TaskOutcome {
                cert: json!({
                    "schema_version": tasks::SCHEMA_VERSION,
                    "task": cfg.task,
                    "seed": seed,
                    "error": format!("{e:#}"),
                }),
                r: None,
                n: None,
                edges: None,
                alpha: None,
                chi: None,
                palette: None,
                free: None,
                pass: false,
                graph_text: None,
            },
        };
        let runtime_ms = started.elapsed().as_millis();
        let cert_name = format!("trial_{trial:04}_seed_{seed}.json");
        write_text(&out_dir.join(&cert_name), &pretty(&outcome.cert))?;
        if let Some(text) = &outcome.graph_text {
            let hg_name = format!("trial_{trial:04}_seed_{seed}.hg");
            write_text(&out_dir.join(hg_name), text)?;
        }
        rows.push(TrialRow {
            trial,
            seed,
            task: cfg.task.clone(),
            family: cfg
                .family
                .clone()
                .or_else(|| cfg.pattern.clone())
                .unwrap_or_default(),
            outcome,
            cert_path: cert_name,
            runtime_ms,
        });
    }

    let mut wtr = csv::Writer::from_path(out_dir.join("trials.csv"))
        .with_context(|| format!("cannot write CSV in {}", out_dir.display()))?;
    wtr.write_record(CSV_HEADER)?;
    for row in &rows {
        let o = &row.outcome;
        wtr.write_record([
            row.trial.to_string(),
            row.seed.to_string(),
            row.task.clone(),
            opt_str(&o.r),
            opt_str(&o.n),
            row.family.clone(),
            opt_str(&o.edges),
            opt_str(&o.alpha),
            opt_str(&o.chi),
            opt_str(&o.palette),
            opt_str(&o.free),
            o.pass.to_string(),
            row.cert_path.clone(),
            row.runtime_ms.to_string(),
        ])?;
    }
    wtr.flush()?;

    let collect = |f: &dyn Fn(&TaskOutcome) -> Option<usize>| -> Vec<f64> {
        rows.iter().filter_map(|r| f(&r.outcome)).map(|v| v as f64).collect()
    };
    let pass_count = rows.iter().filter(|r| r.outcome.pass).count();
    let fail_seeds: Vec<u64> = rows
        .iter()
        .filter(|r| !r.outcome.pass)
        .map(|r| r.seed)
        .collect();
    let aggregate = json!({
        "schema_version": tasks::SCHEMA_VERSION,
        "task": cfg.task,
        "trials": rows.len(),
        "pass_count": pass_count,
        "fail_seeds": fail_seeds,
        "stats": {
            "edges": stats(&collect(&|o| o.edges)),
            "alpha": stats(&collect(&|o| o.alpha)),
            "chi": stats(&collect(&|o| o.chi)),
            "palette": stats(&collect(&|o| o.palette)),
        },
    });
    write_text(&out_dir.join("aggregate.json"), &pretty(&aggregate))?;
    Ok(if pass_count == rows.len() { 0 } else { 1 })
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serialization");
    s.push('\n');
    s
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
