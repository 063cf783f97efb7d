//! Building sparse polynomials, evaluating them and their gradients, and the
//! 1-norm estimates that hold on the cube.
//!
//!     cargo run --example sparse_polynomials

use cubecond::{Result, SparsePolynomial};

fn main() -> Result<()> {
    // 2X² − 1, read from the same JSON the CLI takes.
    let quad = SparsePolynomial::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/quad.json"))?;
    println!("quad: n = {}, d = {}, |M| = {}, ‖f‖₁ = {}", quad.n(), quad.degree(), quad.support_size(), quad.norm1());

    // X₁³X₂ − 2X₂² + X₁ − 0.25 built term by term.
    let f = SparsePolynomial::new(
        2,
        vec![(vec![3, 1], 1.0), (vec![0, 2], -2.0), (vec![1, 0], 1.0), (vec![0, 0], -0.25)],
    )?;
    let x = [0.5, -0.75];
    println!("f(x) = {:.6}", f.evaluate(&x));
    println!("d_x f = {:?}", f.gradient(&x).entries());
    println!("∂f/∂x₂ = {}", f.partial_derivative(1)?.to_json_string());

    // |f(x)| ≤ ‖f‖₁ and the two Lipschitz constants on the cube.
    let (lf, ldf) = f.lipschitz_constants();
    println!("‖f‖₁ = {}, Lipschitz constants {lf} (values) and {ldf} (gradients)", f.norm1());

    let y = [0.25, -0.5];
    let dist = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    println!(
        "|f(x) − f(y)| = {:.6} ≤ {:.6}",
        (f.evaluate(&x) - f.evaluate(&y)).abs(),
        lf * dist
    );

    // Dense univariate round trip keeps explicit zeros in the support.
    let g = SparsePolynomial::from_dense(&[-1.0, 0.0, 2.0]);
    println!("from_dense support {} -> {:?}", g.support_size(), g.to_dense_univariate()?);
    Ok(())
}
