//! `cubecond`: command-line front end for the condition, subdivision,
//! isolation and experiment engines. Output is JSON on stdout.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 failed or inconclusive
//! experiment.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use cubecond::condition::{global_condition, global_condition_adaptive, local_condition};
use cubecond::experiments::{self, ExperimentConfig, DEFAULT_SEED};
use cubecond::random::RandomModel;
use cubecond::{pv, univariate, Error, SparsePolynomial};

#[derive(Parser)]
#[command(name = "cubecond", version, about = "Condition numbers, subdivision and root isolation on the unit cube")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Local condition number at a point, or a certified global enclosure.
    Condition {
        poly: PathBuf,
        /// Coordinates of the point, one per variable.
        #[arg(long, num_args = 1.., allow_negative_numbers = true, conflicts_with = "global")]
        point: Option<Vec<f64>>,
        /// Enclose the maximum of κ over the cube.
        #[arg(long)]
        global: bool,
        /// Grid covering radius for --global.
        #[arg(long, default_value_t = 1e-3, requires = "global")]
        eps: f64,
    },
    /// Interval Plantinga-Vegter subdivision of the cube.
    Pv {
        poly: PathBuf,
        #[arg(long, default_value_t = pv::DEFAULT_MAX_DEPTH)]
        max_depth: u32,
        /// Also write an SVG picture (n = 2 only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Descartes root isolation on [-1, 1] with separation bounds.
    Isolate {
        poly: PathBuf,
        #[arg(long, default_value_t = univariate::DEFAULT_MAX_DEPTH)]
        max_depth: u32,
        /// ε for the ε-separation; defaults to half the admissible maximum.
        #[arg(long)]
        eps: Option<f64>,
        /// Also compute Δ and Δ_ε with the complex root oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Draw one polynomial from a random model.
    Sample {
        model: PathBuf,
        /// Defaults to $CUBECOND_SEED, then to a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Run a Monte Carlo experiment and write its CSV.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

fn env_seed() -> Result<Option<u64>, Error> {
    match std::env::var("CUBECOND_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Format(format!("CUBECOND_SEED = {s:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn print(value: &impl Serialize, pretty: bool) -> Result<(), Error> {
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    println!("{text}");
    Ok(())
}

fn read_poly(path: &PathBuf) -> Result<SparsePolynomial, Error> {
    SparsePolynomial::read_json(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Condition { poly, point, global, eps } => {
            let f = read_poly(&poly)?;
            if global {
                let enc = global_condition(&f, eps)?;
                print(
                    &json!({
                        "lower": enc.lower,
                        "upper": enc.upper,
                        "grid_eps": enc.grid_eps,
                        "grid_points": enc.grid_points,
                    }),
                    pretty,
                )?;
            } else {
                let x = point.ok_or_else(|| Error::InvalidArgument("pass --point x… or --global".into()))?;
                let kappa = local_condition(&f, &x)?;
                print(&json!({ "point": x, "kappa": kappa.value() }), pretty)?;
            }
        }
        Command::Pv { poly, max_depth, svg } => {
            let f = read_poly(&poly)?;
            let report = pv::pv_subdivide(&f, max_depth)?;
            if let Some(path) = svg {
                experiments::emit_svg(&report, path)?;
            }
            print(&report, pretty)?;
        }
        Command::Isolate { poly, max_depth, eps, oracle } => {
            let f = read_poly(&poly)?;
            let iso = univariate::descartes_isolate(&f, max_depth)?;
            let kappa = global_condition_adaptive(&f, 1e-2, 1e-7, 2.0)?.upper;
            let d = f64::from(f.degree());
            let eps = eps.unwrap_or(if kappa.is_finite() {
                0.5 / (std::f64::consts::E * d * kappa)
            } else {
                1e-3
            });
            let eps_bound = if kappa.is_finite() {
                Some(univariate::eps_separation_lower_bound(&f, kappa, eps)?)
            } else {
                None
            };
            let mut out = json!({
                "intervals": iso.intervals,
                "exact_roots": iso.exact_roots,
                "tree_stats": iso.tree,
                "terminated": iso.terminated,
                "unresolved": iso.unresolved,
                "bounds": {
                    "kappa_upper": kappa,
                    "eps": eps,
                    "separation_lower_bound": univariate::separation_lower_bound(&f, kappa),
                    "eps_separation_lower_bound": eps_bound,
                    "tree_size_bound": univariate::tree_size_bound(&f, kappa),
                },
            });
            if oracle {
                let sep = univariate::separation_oracle(&f, eps)?;
                out["separation"] = serde_json::to_value(&sep)?;
            }
            print(&out, pretty)?;
        }
        Command::Sample { model, seed, trial } => {
            let m = RandomModel::read_json(&model).map_err(|e| Error::Format(format!("{}: {e}", model.display())))?;
            let seed = match seed {
                Some(s) => s,
                None => env_seed()?.unwrap_or(DEFAULT_SEED),
            };
            let f = m.sample_trial(seed, trial);
            print(&f.to_file(), pretty)?;
        }
        Command::Experiment { config, out, workers } => {
            let mut cfg = ExperimentConfig::read_json(&config)
                .map_err(|e| Error::Format(format!("{}: {e}", config.display())))?;
            if cfg.seed.is_none() {
                cfg.seed = Some(env_seed()?.unwrap_or(DEFAULT_SEED));
            }
            let report = experiments::run_experiment(&cfg, workers)?;
            std::fs::create_dir_all(&out)?;
            let name = serde_json::to_value(report.kind)?;
            let csv = out.join(format!("{}.csv", name.as_str().unwrap_or("experiment")));
            experiments::emit_csv(&report, &csv)?;
            let summary: Value = json!({
                "kind": report.kind,
                "seed": report.seed,
                "trials": report.trials,
                "summary": report.summary,
                "violations": report.violations,
                "excluded": report.excluded,
                "flag": report.flag,
                "passed": report.passed,
                "wall_clock_secs": report.wall_clock_secs,
                "csv": csv,
            });
            print(&summary, pretty)?;
            if !report.passed {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
