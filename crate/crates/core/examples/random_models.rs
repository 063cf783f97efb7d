//! Random sparse polynomial models: their constants, draws, and the
//! probabilistic bounds expressed through them.
//!
//!     cargo run --example random_models

use cubecond::random::smoothed_model;
use cubecond::{CoefficientDistribution, RandomModel, Result, SparsePolynomial};

fn main() -> Result<()> {
    let models = [
        ("gaussian", RandomModel::univariate(&[0, 1, 5], CoefficientDistribution::standard_gaussian())?),
        ("uniform", RandomModel::univariate(&[0, 1, 5], CoefficientDistribution::standard_uniform())?),
        (
            "weibull p=1",
            RandomModel::new(
                1,
                vec![vec![0], vec![1], vec![5]],
                CoefficientDistribution::WeibullSymmetric { p: 1.0, scale: 1.0 },
                1.0,
            )?,
        ),
        (
            "uniform 2d",
            RandomModel::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/uniform_model.json"))?,
        ),
    ];

    for (name, m) in &models {
        let c = m.constants();
        println!("{name}: K = {:.4}, ρ = {:.4}, L = {:.4}, Kρ = {:.4}", c.k, c.rho, c.l, c.k_rho());
        for t in [std::f64::consts::E, 10.0, 100.0] {
            println!(
                "  P(κ(f, x) ≥ {t:>6.2}) ≤ {:.4}   (p-form {:.4})",
                m.tail_bound_local(t)?,
                m.tail_bound_local_p(t)?
            );
        }
        let g = m.tail_bound_global(100.0)?;
        println!("  P(κ(f) ≥ 100) ≤ {:.3e} (simplified {:.3e})", g.sharp, g.simplified);
        println!("  E[#boxes] ≤ {:.4e}", m.expected_boxes_bound().best());
        if m.n() == 1 {
            println!("  E[tree size] ≤ {:.1}", m.descartes_moment_bound(1)?);
        }
    }

    // Smoothed analysis: a fixed polynomial plus scaled noise.
    let f0 = SparsePolynomial::from_dense(&[0.25, -1.0, 1.0]);
    let base = RandomModel::univariate_dense(2, CoefficientDistribution::standard_gaussian())?;
    for sigma in [0.01, 0.1, 1.0] {
        let m = smoothed_model(&f0, sigma, &base)?;
        let c = m.constants();
        println!(
            "smoothed σ = {sigma}: K = {:.3}, ρ = {:.3}, P(κ(f, 1/2) ≥ 100) ≤ {:.3}",
            c.k,
            c.rho,
            m.tail_bound_local(100.0)?
        );
    }
    Ok(())
}
