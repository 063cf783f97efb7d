//! Descartes root isolation on [−1, 1], its subdivision tree, and the
//! condition-based bounds on tree size and root separation.
//!
//!     cargo run --release --example descartes_isolation

use cubecond::condition::global_condition_adaptive;
use cubecond::experiments::mignotte_instance;
use cubecond::univariate::{
    descartes_isolate, separation_lower_bound, separation_oracle, tree_size_bound, verify_isolation,
    DEFAULT_MAX_DEPTH,
};
use cubecond::{Result, SparsePolynomial};

fn report(name: &str, f: &SparsePolynomial) -> Result<()> {
    let iso = descartes_isolate(f, DEFAULT_MAX_DEPTH)?;
    let kappa = global_condition_adaptive(f, 1e-2, 1e-7, 1.1)?.upper;
    println!("{name}");
    println!("  intervals   {:?}", iso.intervals);
    println!("  exact roots {:?}", iso.exact_roots);
    println!(
        "  tree: {} nodes, depth {}, widest level {}; bound {:.1}",
        iso.tree.node_count,
        iso.tree.depth,
        iso.tree.max_width(),
        tree_size_bound(f, kappa)
    );
    println!("  certified by endpoint signs: {}", verify_isolation(f, &iso)?);
    if iso.root_count() >= 2 {
        let sep = separation_oracle(f, 1e-3)?;
        println!("  Δ = {:.3e} ≥ {:.3e}", sep.delta, separation_lower_bound(f, kappa));
    }
    Ok(())
}

fn main() -> Result<()> {
    // Chebyshev T₅ has five well spread roots in I.
    report("T5", &SparsePolynomial::from_dense(&[0.0, 5.0, 0.0, -20.0, 0.0, 16.0]))?;
    // Two roots a twelfth apart.
    report("(X − 1/4)(X − 1/3)", &SparsePolynomial::from_dense(&[1.0 / 12.0, -7.0 / 12.0, 1.0]))?;
    // Sparse, high degree.
    report(
        "X^64 − X + 1/4",
        &SparsePolynomial::new(1, vec![(vec![0], 0.25), (vec![1], -1.0), (vec![64], 1.0)])?,
    )?;
    report("Mignotte-style X^16 − 32X² + 16X − 2", &mignotte_instance())?;

    // A double root keeps two variations forever and hits the depth guard.
    let square = SparsePolynomial::from_dense(&[0.09, -0.6, 1.0]);
    let iso = descartes_isolate(&square, 20)?;
    println!("(X − 0.3)²: terminated {}, unresolved {:?}", iso.terminated, iso.unresolved);
    Ok(())
}
