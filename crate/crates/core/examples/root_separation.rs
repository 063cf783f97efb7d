//! Real and ε-real root separation from the complex root oracle, against the
//! lower bounds that depend only on the degree and the condition number.
//!
//!     cargo run --release --example root_separation

use std::f64::consts::E;

use cubecond::condition::global_condition_adaptive;
use cubecond::univariate::{complex_roots, eps_separation_lower_bound, separation_lower_bound, separation_oracle};
use cubecond::{Result, SparsePolynomial};

fn main() -> Result<()> {
    // Roots at ±0.6 and a complex pair 0.2 ± 0.05i near the segment.
    let f = SparsePolynomial::from_dense(&mul(&[-0.36, 0.0, 1.0], &[0.0425, -0.4, 1.0]));

    for z in complex_roots(&f.to_dense_univariate()?)? {
        println!("root {:+.6} {:+.6}i", z.re, z.im);
    }

    let kappa = global_condition_adaptive(&f, 1e-2, 1e-7, 1.1)?.upper;
    let d = f64::from(f.degree());
    let eps = 0.5 / (E * d * kappa);
    let sep = separation_oracle(&f, eps)?;
    println!("κ(f) ≤ {kappa:.3}");
    println!("Δ   = {:.4} ≥ {:.4}", sep.delta, separation_lower_bound(&f, kappa));
    println!(
        "Δ_ε = {:.4} ≥ {:.4}  (ε = {eps:.2e})",
        sep.delta_eps,
        eps_separation_lower_bound(&f, kappa, eps)?
    );

    // With a larger ε the complex pair enters the ε-neighbourhood.
    let wide = separation_oracle(&f, 0.06)?;
    println!("ε = 0.06: Δ_ε = {:.4}", wide.delta_eps);
    Ok(())
}

fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}
