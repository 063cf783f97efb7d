//! Plantinga-Vegter subdivision of the square for a circle, written out as an
//! SVG picture, and compared with its condition-based box estimate.
//!
//!     cargo run --release --example pv_subdivision [out.svg]

use cubecond::experiments::emit_svg;
use cubecond::pv::{amortization_bound, pv_subdivide, pv_subdivide_parallel, verify_output_boxes};
use cubecond::{Result, SparsePolynomial};

fn main() -> Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "circle.svg".into());
    let f = SparsePolynomial::read_json(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/circle2d.json"))?;

    let report = pv_subdivide(&f, 20)?;
    println!(
        "{} final boxes, {} processed, depth {}, terminated {}",
        report.box_count(),
        report.processed_count,
        report.max_depth_reached,
        report.terminated
    );
    println!("per depth: {:?}", report.per_depth_counts);
    println!("total volume {}", report.total_volume());
    println!("sampled soundness check: {}", verify_output_boxes(&f, &report, 64));

    let parallel = pv_subdivide_parallel(&f, 20, 4)?;
    println!("4 workers give {} boxes", parallel.box_count());

    let est = amortization_bound(&f, 20_000, 7)?;
    println!("estimate {:.1} (3σ upper {:.1})", est.estimate, est.upper(3.0));

    emit_svg(&report, &out)?;
    println!("wrote {out}");

    // A singular curve never satisfies the predicate near its double point.
    let square = SparsePolynomial::from_dense(&[0.25, -1.0, 1.0]);
    let stuck = pv_subdivide(&square, 12)?;
    println!("(X − 1/2)²: terminated {}, {} boxes pending", stuck.terminated, stuck.pending);
    Ok(())
}
