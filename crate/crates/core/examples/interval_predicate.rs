//! The center/radius interval approximations and the box predicate used by
//! the subdivision.
//!
//!     cargo run --example interval_predicate

use cubecond::interval::{interval_f, interval_grad_norm, predicate_clause, standard_subdivision};
use cubecond::{BoxN, Result, SparsePolynomial};

fn main() -> Result<()> {
    let f = SparsePolynomial::new(2, vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0)])?;

    let mut level = vec![BoxN::unit(2)];
    for _ in 0..3 {
        for b in &level {
            println!(
                "m = {:?} w = {:<6} f ∈ [{:+.3}, {:+.3}]  ‖df‖₁ ∈ [{:.3}, {:.3}]  {:?}",
                b.mid,
                b.width,
                interval_f(&f, b).lo,
                interval_f(&f, b).hi,
                interval_grad_norm(&f, b).lo,
                interval_grad_norm(&f, b).hi,
                predicate_clause(&f, b),
            );
        }
        level = level.iter().flat_map(standard_subdivision).take(4).collect();
        println!();
    }
    Ok(())
}
