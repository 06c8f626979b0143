//! `hfree`: invariants, freeness checks, exact solvers, constructive
//! colorings, planned random constructions, and a seeded experiment runner
//! for r-uniform hypergraphs.

mod experiment;
mod patterns;
mod tasks;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use hfree_core::constructions::PlanOverrides;
use hfree_core::solvers::SolverBudget;

use experiment::{parse_verify, pretty, run_experiment, write_text, ConfigOverrides};
use patterns::{load_hypergraph, parse_family};
use tasks::{ConstantsSpec, TaskOutcome};

#[derive(Parser)]
#[command(name = "hfree", version, about = "colorings of hypergraphs avoiding fixed subhypergraphs", max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct OutFlag {
    /// write the JSON certificate here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Density, balancedness and edge-automorphism table of a hypergraph
    Invariants {
        file: PathBuf,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Exit 0 if the host contains no copy of the pattern, 1 with a witness
    CheckFree {
        file: PathBuf,
        /// pattern: H-file, rl:R:L, fr:R, clique:R:T, or overlap:R:M
        #[arg(long)]
        pattern: String,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Exact solvers
    Solve {
        #[command(subcommand)]
        which: SolveCmd,
    },
    /// Constructive colorings
    Color {
        #[command(subcommand)]
        which: ColorCmd,
    },
    /// Compute every constant of the deletion construction for a family
    Plan {
        /// family: rl:R:L, fr:R, clique:R:T, overlap:R:M, or file:PATH
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        /// override the sampling probability
        #[arg(long)]
        p: Option<f64>,
        /// override the independent-set window size
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Random constructions with verification reports
    Construct {
        #[command(subcommand)]
        which: ConstructCmd,
    },
    /// Closed-form constants table
    Constants {
        /// R L for the bounded-overlap family
        #[arg(long, num_args = 2, value_names = ["R", "L"])]
        rl: Option<Vec<usize>>,
        /// R for the fan family
        #[arg(long)]
        fr: Option<usize>,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Seeded repeated trials from a JSON config; CSV + aggregate output
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// override the config's base seed
        #[arg(long)]
        seed: Option<u64>,
        /// override the config's trial count
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[arg(long)]
        budget_resamples: Option<u64>,
        /// none | freeness | full
        #[arg(long)]
        verify: Option<String>,
    },
}

#[derive(Subcommand)]
enum SolveCmd {
    /// Weak chromatic number (no monochromatic edge)
    Chi {
        file: PathBuf,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Maximum size of a vertex set containing no full edge
    Alpha {
        file: PathBuf,
        #[arg(long)]
        budget_nodes: Option<u64>,
        #[command(flatten)]
        out: OutFlag,
    },
}

#[derive(Subcommand)]
enum ColorCmd {
    /// Resampling coloring for degree-bounded hosts
    Lll {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget_resamples: Option<u64>,
        /// run even if the degree precondition fails
        #[arg(long)]
        skip_precondition: bool,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Independent-set peeling, one fresh color per round
    Peel {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Two-stage coloring for hosts with independent neighborhoods
    Indnbd {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        budget_resamples: Option<u64>,
        #[command(flatten)]
        out: OutFlag,
    },
    /// Degeneracy coloring of a host excluding a fixed hypertree
    Tree {
        file: PathBuf,
        /// the excluded r-tree, as a hypergraph file
        #[arg(long)]
        tree: PathBuf,
        /// include the round/witness trace in the certificate
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        out: OutFlag,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Sample, pack, delete: a host free of every family member
    Deletion {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        /// none | freeness | full
        #[arg(long, default_value = "freeness")]
        verify: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Layered partition construction with no (r+1)-clique
    Cliquefree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn budget_with(nodes: Option<u64>, resamples: Option<u64>) -> SolverBudget {
    let mut b = SolverBudget::default();
    if let Some(n) = nodes {
        b.node_cap = n;
    }
    if let Some(r) = resamples {
        b.resample_cap = r;
    }
    b
}

/// Prints the certificate summary, optionally writes it, and converts the
/// pass flag into a process exit code.
fn finish(outcome: TaskOutcome, out: &OutFlag) -> Result<i32> {
    if let Some(path) = &out.out {
        write_text(path, &pretty(&outcome.cert))?;
    }
    println!("{}", pretty(&outcome.cert).trim_end());
    Ok(if outcome.pass { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<i32> {
    match cli.cmd {
        Cmd::Invariants { file, out } => {
            let g = load_hypergraph(&file.to_string_lossy())?;
            let outcome = tasks::invariants(&g)?;
            // stable plain-text table in addition to the certificate
            let c = &outcome.cert;
            println!("rho {}", c["rho"].as_str().unwrap_or("?"));
            println!("balanced {}", c["balanced"]);
            println!("alpha_min {}", c["alpha_min"]);
            println!("aut_order {}", c["aut_order"]);
            println!("edge alpha");
            if let Some(arr) = c["alpha_per_edge"].as_array() {
                for (i, a) in arr.iter().enumerate() {
                    println!("{i} {a}");
                }
            }
            if let Some(path) = &out.out {
                write_text(path, &pretty(&outcome.cert))?;
            }
            Ok(0)
        }
        Cmd::CheckFree { file, pattern, out } => {
            let g = load_hypergraph(&file.to_string_lossy())?;
            let fam = parse_family(&pattern)?;
            let outcome = tasks::check_free(&g, &fam)?;
            finish(outcome, &out)
        }
        Cmd::Solve { which } => match which {
            SolveCmd::Chi {
                file,
                budget_nodes,
                out,
            } => {
                let g = load_hypergraph(&file.to_string_lossy())?;
                let outcome = tasks::solve_chi(&g, &budget_with(budget_nodes, None))?;
                finish(outcome, &out)
            }
            SolveCmd::Alpha {
                file,
                budget_nodes,
                out,
            } => {
                let g = load_hypergraph(&file.to_string_lossy())?;
                let outcome = tasks::solve_alpha(&g, &budget_with(budget_nodes, None))?;
                finish(outcome, &out)
            }
        },
        Cmd::Color { which } => match which {
            ColorCmd::Lll {
                file,
                k,
                seed,
                budget_resamples,
                skip_precondition,
                out,
            } => {
                let g = load_hypergraph(&file.to_string_lossy())?;
                let outcome = tasks::color_lll(
                    &g,
                    k,
                    seed,
                    &budget_with(None, budget_resamples),
                    skip_precondition,
                )?;
                finish(outcome, &out)
            }
            ColorCmd::Peel { file, seed, out } => {
                let g = load_hypergraph(&file.to_string_lossy())?;
                finish(tasks::color_peel(&g, seed)?, &out)
            }
            ColorCmd::Indnbd {
                file,
                k,
                seed,
                budget_resamples,
                out,
            } => {
                let g = load_hypergraph(&file.to_string_lossy())?;
                let outcome =
                    tasks::color_indnbd(&g, k, seed, &budget_with(None, budget_resamples))?;
                finish(outcome, &out)
            }
            ColorCmd::Tree {
                file,
                tree,
                trace,
                out,
            } => {
                let g = load_hypergraph(&file.to_string_lossy())?;
                let t = load_hypergraph(&tree.to_string_lossy())?;
                finish(tasks::color_tree(&g, &t, trace)?, &out)
            }
        },
        Cmd::Plan {
            family,
            n,
            p,
            t,
            out,
        } => {
            let fam = parse_family(&family)?;
            let outcome = tasks::plan(&fam, n, PlanOverrides { p, t })?;
            finish(outcome, &out)
        }
        Cmd::Construct { which } => match which {
            ConstructCmd::Deletion {
                family,
                n,
                seed,
                p,
                t,
                verify,
                out_dir,
            } => {
                let fam = parse_family(&family)?;
                let level = parse_verify(&verify)?;
                let outcome =
                    tasks::construct_deletion(&fam, n, PlanOverrides { p, t }, seed, level)?;
                std::fs::create_dir_all(&out_dir)
                    .with_context(|| format!("cannot create {}", out_dir.display()))?;
                let stem = format!("deletion_{seed}");
                if let Some(text) = &outcome.graph_text {
                    write_text(&out_dir.join(format!("{stem}.hg")), text)?;
                }
                write_text(&out_dir.join(format!("{stem}.json")), &pretty(&outcome.cert))?;
                println!(
                    "wrote {}/{stem}.hg and {}/{stem}.json",
                    out_dir.display(),
                    out_dir.display()
                );
                Ok(if outcome.pass { 0 } else { 1 })
            }
            ConstructCmd::Cliquefree { n, r, seed, out_dir } => {
                let outcome = tasks::construct_cliquefree(n, r, seed)?;
                std::fs::create_dir_all(&out_dir)
                    .with_context(|| format!("cannot create {}", out_dir.display()))?;
                let stem = format!("cliquefree_{seed}");
                if let Some(text) = &outcome.graph_text {
                    write_text(&out_dir.join(format!("{stem}.hg")), text)?;
                }
                write_text(&out_dir.join(format!("{stem}.json")), &pretty(&outcome.cert))?;
                println!(
                    "wrote {}/{stem}.hg and {}/{stem}.json",
                    out_dir.display(),
                    out_dir.display()
                );
                Ok(if outcome.pass { 0 } else { 1 })
            }
        },
        Cmd::Constants { rl, fr, out } => {
            let spec = match (rl, fr) {
                (Some(v), None) if v.len() == 2 => ConstantsSpec::Rl(v[0], v[1]),
                (None, Some(r)) => ConstantsSpec::Fr(r),
                _ => bail!("pass exactly one of --rl R L or --fr R"),
            };
            let outcome = tasks::constants(&spec)?;
            // table form on stdout
            if let Some(obj) = outcome.cert.as_object() {
                for (key, value) in obj {
                    if key == "schema_version" || key == "task" {
                        continue;
                    }
                    println!("{key} {value}");
                }
            }
            if let Some(path) = &out.out {
                write_text(path, &pretty(&outcome.cert))?;
            }
            Ok(0)
        }
        Cmd::Experiment {
            config,
            seed,
            trials,
            out_dir,
            budget_nodes,
            budget_resamples,
            verify,
        } => {
            let text = std::fs::read_to_string(&config)
                .with_context(|| format!("cannot read {}", config.display()))?;
            let cfg: experiment::ExperimentConfig = serde_json::from_str(&text)
                .with_context(|| format!("invalid config {}", config.display()))?;
            run_experiment(
                cfg,
                ConfigOverrides {
                    seed,
                    trials,
                    out_dir,
                    budget_nodes,
                    budget_resamples,
                    verify,
                },
            )
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(2);
        }
    }
}
