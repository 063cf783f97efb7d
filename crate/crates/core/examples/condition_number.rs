//! Local condition numbers, a certified enclosure of the global one, and the
//! geometric and Newton-theoretic quantities they control.
//!
//!     cargo run --example condition_number

use cubecond::condition::{
    dist1_to_sigma_x, gamma_bound, gamma_exact_univariate, global_condition, global_condition_adaptive,
    local_condition, local_size_bound,
};
use cubecond::{Result, SparsePolynomial};

fn main() -> Result<()> {
    let quad = SparsePolynomial::from_dense(&[-1.0, 0.0, 2.0]);

    for x in [0.0, 0.5, 0.7071067811865476, 1.0] {
        let k = local_condition(&quad, &[x])?;
        let dist = dist1_to_sigma_x(&quad, &[x])?;
        println!(
            "x = {x:<20} κ = {:<10.4} ‖f‖₁/dist₁ = {:<10.4} b_f = {:.3e}",
            k.value(),
            quad.norm1() / dist,
            local_size_bound(&quad, &[x])?
        );
    }

    // Near a root Newton behaves well when κ is small.
    let x = 0.7;
    println!(
        "γ(f, {x}) = {:.4} ≤ {:.4}",
        gamma_exact_univariate(&quad, x)?,
        gamma_bound(&quad, &[x])?
    );

    let enc = global_condition(&quad, 1e-3)?;
    println!(
        "κ(f) ∈ [{:.6}, {:.6}] from {} grid points",
        enc.lower, enc.upper, enc.grid_points
    );

    // The adaptive variant refines until the enclosure is tight.
    let circle = SparsePolynomial::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/circle2d.json"))?;
    let enc = global_condition_adaptive(&circle, 1e-1, 1e-4, 1.05)?;
    println!(
        "circle: κ(f) ∈ [{:.4}, {:.4}] at grid radius {:.0e}",
        enc.lower, enc.upper, enc.grid_eps
    );

    // A singular zero makes κ infinite.
    let square = SparsePolynomial::from_dense(&[0.25, -1.0, 1.0]);
    println!("(X − 1/2)²: κ(f, 1/2) = {}", local_condition(&square, &[0.5])?.value());
    Ok(())
}
