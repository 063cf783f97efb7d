//! The four Monte Carlo experiments at a small trial count, with their CSV.
//!
//!     cargo run --release --example monte_carlo [out_dir]

use cubecond::experiments::{emit_csv, run_experiment, ExperimentConfig, ExperimentKind};
use cubecond::{CoefficientDistribution, RandomModel, Result};

fn main() -> Result<()> {
    let out = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "mc_out".into()));
    std::fs::create_dir_all(&out)?;
    let gauss = CoefficientDistribution::standard_gaussian();

    let runs = [
        (ExperimentKind::Tail, RandomModel::univariate(&[0, 1, 5], gauss)?, 2000),
        (ExperimentKind::Pv, RandomModel::univariate(&[0, 1, 2], gauss)?, 200),
        (ExperimentKind::Descartes, RandomModel::univariate(&[0, 1, 32, 64], gauss)?, 200),
        (
            ExperimentKind::Separation,
            RandomModel::univariate(&[0, 1, 3, 10, 25, 63], CoefficientDistribution::standard_uniform())?,
            200,
        ),
    ];

    for (kind, model, trials) in runs {
        let cfg = ExperimentConfig::new(kind, &model, trials, 7);
        let report = run_experiment(&cfg, 4)?;
        println!("{kind:?}: passed {}, violations {}, excluded {}", report.passed, report.violations, report.excluded);
        for s in &report.summary {
            println!(
                "  {:<24} {:>12.5} ± {:<10.2e} bound {:?}",
                s.stat_name,
                s.value,
                s.std_error.unwrap_or(0.0),
                s.bound
            );
        }
        emit_csv(&report, out.join(format!("{kind:?}.csv").to_lowercase()))?;
    }

    // Configs can also come from JSON, as with the CLI.
    let cfg = ExperimentConfig::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pv.json"))?;
    println!("pv.json asks for {} trials of a {:?} model", cfg.trials, cfg.model.dist);
    Ok(())
}
