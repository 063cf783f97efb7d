//! Subdivision phase of the Plantinga-Vegter algorithm at the interval level.
//!
//! Starting from `I^n`, a box is accepted when the interval predicate
//! [`predicate_clause`] holds and is otherwise replaced by its `2^n`
//! children. The worklist is FIFO, so boxes are processed level by level and
//! reports are reproducible.
//!
//! The number of final boxes is bounded by `4^n E_x[1/b_f(x)]` with the local
//! size bound `b_f(x) = (d √(2n) κ(f, x))^{−n}`; [`amortization_bound`]
//! estimates that expectation by Monte Carlo.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::condition::local_condition;
use crate::error::{Error, Result};
use crate::interval::{predicate_clause, standard_subdivision, BoxN, Clause};
use crate::poly::SparsePolynomial;

/// Default for the depth guard.
pub const DEFAULT_MAX_DEPTH: u32 = 30;

/// Hard ceiling on the depth guard; widths stay exact dyadics below it.
pub const MAX_DEPTH_LIMIT: u32 = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FinalBox {
    #[serde(flatten)]
    pub cell: BoxN,
    pub clause: Clause,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubdivisionReport {
    pub n: usize,
    pub final_boxes: Vec<FinalBox>,
    pub processed_count: usize,
    pub max_depth_reached: u32,
    /// Processed boxes per depth.
    pub per_depth_counts: Vec<usize>,
    /// False when the depth guard stopped the run.
    pub terminated: bool,
    /// Boxes still in the worklist when the guard fired.
    pub pending: usize,
}

impl SubdivisionReport {
    pub fn box_count(&self) -> usize {
        self.final_boxes.len()
    }

    pub fn total_volume(&self) -> f64 {
        self.final_boxes.iter().map(|b| b.cell.volume()).sum()
    }

    fn record(&mut self, depth: u32) {
        self.processed_count += 1;
        let k = depth as usize;
        if self.per_depth_counts.len() <= k {
            self.per_depth_counts.resize(k + 1, 0);
        }
        self.per_depth_counts[k] += 1;
        self.max_depth_reached = self.max_depth_reached.max(depth);
    }

    fn empty(n: usize) -> Self {
        Self {
            n,
            final_boxes: Vec::new(),
            processed_count: 0,
            max_depth_reached: 0,
            per_depth_counts: Vec::new(),
            terminated: true,
            pending: 0,
        }
    }
}

fn check_inputs(f: &SparsePolynomial, max_depth: u32) -> Result<()> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(1..=MAX_DEPTH_LIMIT).contains(&max_depth) {
        return Err(Error::InvalidArgument(format!(
            "max_depth must lie in 1..={MAX_DEPTH_LIMIT}, got {max_depth}"
        )));
    }
    Ok(())
}

/// Runs the subdivision on `I^n` with a single worker.
///
/// A run that would create boxes deeper than `max_depth` stops immediately
/// and returns the partial state with `terminated = false`.
pub fn pv_subdivide(f: &SparsePolynomial, max_depth: u32) -> Result<SubdivisionReport> {
    check_inputs(f, max_depth)?;
    let mut report = SubdivisionReport::empty(f.n());
    let mut queue: VecDeque<(BoxN, u32)> = VecDeque::from([(BoxN::unit(f.n()), 0)]);
    while let Some((cell, depth)) = queue.pop_front() {
        report.record(depth);
        match predicate_clause(f, &cell) {
            Some(clause) => report.final_boxes.push(FinalBox { cell, clause }),
            None if depth >= max_depth => {
                report.terminated = false;
                report.pending = queue.len() + 1;
                break;
            }
            None => queue.extend(standard_subdivision(&cell).into_iter().map(|c| (c, depth + 1))),
        }
    }
    Ok(report)
}

/// Level-synchronous variant evaluating each level on `workers` threads.
///
/// Terminated runs return the same final boxes in the same order as
/// [`pv_subdivide`]. When the guard fires the whole offending level has been
/// processed, so partial reports may differ from the single-worker ones.
pub fn pv_subdivide_parallel(
    f: &SparsePolynomial,
    max_depth: u32,
    workers: usize,
) -> Result<SubdivisionReport> {
    check_inputs(f, max_depth)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut report = SubdivisionReport::empty(f.n());
    let mut level = vec![BoxN::unit(f.n())];
    let mut depth = 0;
    while !level.is_empty() {
        let clauses: Vec<Option<Clause>> =
            pool.install(|| level.par_iter().map(|b| predicate_clause(f, b)).collect());
        let mut next = Vec::new();
        let mut failed = 0;
        for (cell, clause) in level.into_iter().zip(clauses) {
            report.record(depth);
            match clause {
                Some(clause) => report.final_boxes.push(FinalBox { cell, clause }),
                None => {
                    failed += 1;
                    if depth < max_depth {
                        next.extend(standard_subdivision(&cell));
                    }
                }
            }
        }
        if failed > 0 && depth >= max_depth {
            report.terminated = false;
            report.pending = failed;
            break;
        }
        level = next;
        depth += 1;
    }
    Ok(report)
}

fn uniform_point(rng: &mut ChaCha8Rng, cell: &BoxN) -> Vec<f64> {
    let r = cell.radius();
    cell.mid
        .iter()
        .map(|&m| m + r * rng.random_range(-1.0..=1.0))
        .collect()
}

/// Checks `C_f(B)` on samples of every final box: either `f` keeps a strict
/// sign, or every pair of sampled gradients has a positive dot product.
///
/// Samples include the corners and the midpoint of each box; the rest are
/// drawn from a generator seeded by the box index.
pub fn verify_output_boxes(f: &SparsePolynomial, report: &SubdivisionReport, samples_per_box: usize) -> bool {
    report.final_boxes.par_iter().enumerate().all(|(i, fb)| {
        let cell = &fb.cell;
        let n = cell.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ i as u64);
        let mut pts: Vec<Vec<f64>> = vec![cell.mid.clone()];
        if n <= 4 {
            for code in 0..1usize << n {
                pts.push(
                    (0..n)
                        .map(|j| {
                            let s = if (code >> j) & 1 == 1 { 1.0 } else { -1.0 };
                            cell.mid[j] + s * cell.radius()
                        })
                        .collect(),
                );
            }
        }
        while pts.len() < samples_per_box.max(pts.len()) {
            pts.push(uniform_point(&mut rng, cell));
        }

        let values: Vec<f64> = pts.iter().map(|p| f.evaluate(p)).collect();
        if values.iter().all(|&v| v > 0.0) || values.iter().all(|&v| v < 0.0) {
            return true;
        }
        let grads: Vec<_> = pts.iter().map(|p| f.gradient(p)).collect();
        grads
            .iter()
            .enumerate()
            .all(|(a, ga)| grads[a..].iter().all(|gb| ga.dot(gb) > 0.0))
    })
}

/// Monte Carlo estimate of `4^n E_x[(d √(2n) κ(f, x))^n]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmortizationEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: usize,
}

impl AmortizationEstimate {
    /// `estimate + k · std_error`.
    pub fn upper(&self, sigmas: f64) -> f64 {
        self.estimate + sigmas * self.std_error
    }
}

/// Estimates the continuous-amortization bound on the number of final boxes
/// from `n_samples` uniform points of `I^n`.
pub fn amortization_bound(f: &SparsePolynomial, n_samples: usize, seed: u64) -> Result<AmortizationEstimate> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if n_samples == 0 {
        return Err(Error::InvalidArgument("n_samples must be positive".into()));
    }
    let n = f.n();
    let d = f64::from(f.degree());
    let scale = 4f64.powi(n as i32) * (d * (2.0 * n as f64).sqrt()).powi(n as i32);
    let cube = BoxN::unit(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_samples {
        let x = uniform_point(&mut rng, &cube);
        let kappa = local_condition(f, &x)?.value();
        let v = scale * kappa.powi(n as i32);
        sum += v;
        sum_sq += v * v;
    }
    let m = n_samples as f64;
    let mean = sum / m;
    let var = if n_samples > 1 {
        ((sum_sq - m * mean * mean) / (m - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(AmortizationEstimate {
        estimate: mean,
        std_error: (var / m).sqrt(),
        samples: n_samples,
    })
}

/// `2^{5n/2} n^{n/2} d^n`, the factor multiplying `E κ^n` in the box bound.
pub fn amortization_factor(n: usize, d: u32) -> f64 {
    let nf = n as f64;
    2f64.powf(2.5 * nf) * nf.powf(nf / 2.0) * f64::from(d).powf(nf)
}

const SVG_SIZE: f64 = 512.0;

/// SVG picture of a planar subdivision: one rectangle per final box, in box
/// order, filled by the clause that certified it.
pub fn render_svg(report: &SubdivisionReport) -> Result<String> {
    if report.n != 2 {
        return Err(Error::InvalidArgument(format!(
            "SVG output needs n = 2, report has n = {}",
            report.n
        )));
    }
    let px = |v: f64| (v + 1.0) * SVG_SIZE / 2.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{s}" height="{s}" viewBox="0 0 {s} {s}">"#,
        s = SVG_SIZE
    );
    for fb in &report.final_boxes {
        let r = fb.cell.radius();
        let x0 = px(fb.cell.mid[0] - r);
        // SVG y grows downwards.
        let y0 = SVG_SIZE - px(fb.cell.mid[1] + r);
        let side = fb.cell.width * SVG_SIZE / 2.0;
        let fill = match fb.clause {
            Clause::Sign => "#9ecae1",
            Clause::Gradient => "#fdae6b",
        };
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.6}" y="{y0:.6}" width="{side:.6}" height="{side:.6}" fill="{fill}" stroke="#333333" stroke-width="0.5"/>"##
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line2d() -> SparsePolynomial {
        SparsePolynomial::new(2, vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0)]).unwrap()
    }

    #[test]
    fn linear_univariate_trace() {
        let f = SparsePolynomial::from_dense(&[0.0, 1.0]);
        let r = pv_subdivide(&f, DEFAULT_MAX_DEPTH).unwrap();
        assert!(r.terminated);
        assert_eq!(r.box_count(), 2);
        assert_eq!(r.max_depth_reached, 1);
        assert!(r.final_boxes.iter().all(|b| b.cell.width == 1.0 && b.clause == Clause::Gradient));
        assert_eq!(r.per_depth_counts, vec![1, 2]);
    }

    #[test]
    fn linear_planar_trace() {
        let r = pv_subdivide(&line2d(), 10).unwrap();
        assert!(r.terminated);
        assert_eq!(r.box_count(), 16);
        assert!(r.final_boxes.iter().all(|b| b.cell.width == 0.5));
        assert_eq!(r.per_depth_counts, vec![1, 4, 16]);
        assert_eq!(r.total_volume(), 4.0);
        assert!(verify_output_boxes(&line2d(), &r, 16));
    }

    #[test]
    fn singular_input_hits_guard() {
        let f = SparsePolynomial::from_dense(&[0.25, -1.0, 1.0]);
        let r = pv_subdivide(&f, 12).unwrap();
        assert!(!r.terminated);
        assert!(r.pending > 0);
        assert_eq!(r.max_depth_reached, 12);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(pv_subdivide(&SparsePolynomial::zero(1), 5), Err(Error::ZeroPolynomial)));
        let f = SparsePolynomial::from_dense(&[0.0, 1.0]);
        assert!(pv_subdivide(&f, 0).is_err());
        assert!(pv_subdivide(&f, 51).is_err());
    }

    #[test]
    fn parallel_matches_single_worker() {
        let f = SparsePolynomial::new(
            2,
            vec![(vec![0, 0], -0.3), (vec![2, 0], 1.0), (vec![0, 2], 1.0), (vec![1, 1], 0.4)],
        )
        .unwrap();
        let a = pv_subdivide(&f, 20).unwrap();
        let b = pv_subdivide_parallel(&f, 20, 4).unwrap();
        assert!(a.terminated);
        assert_eq!(a, b);
    }

    #[test]
    fn corrupted_report_fails_verification() {
        // One box spanning the zero X = 0 where the gradient is tiny compared
        // to its variation: f = X³ − 0.001 X on [−1, 1].
        let f = SparsePolynomial::from_dense(&[0.0, -0.001, 0.0, 1.0]);
        let bogus = SubdivisionReport {
            n: 1,
            final_boxes: vec![FinalBox {
                cell: BoxN::unit(1),
                clause: Clause::Gradient,
            }],
            processed_count: 1,
            max_depth_reached: 0,
            per_depth_counts: vec![1],
            terminated: true,
            pending: 0,
        };
        assert!(!verify_output_boxes(&f, &bogus, 64));
    }

    #[test]
    fn amortization_of_linear_polynomials() {
        // κ(X, x) = 1 everywhere, so the estimate is exactly 4√2.
        let f = SparsePolynomial::from_dense(&[0.0, 1.0]);
        let est = amortization_bound(&f, 100_000, 7).unwrap();
        assert!((est.estimate - 4.0 * 2f64.sqrt()).abs() < 1e-9);
        assert!((5.6..=12.0).contains(&est.estimate));
        assert!((est.estimate - amortization_factor(1, 1)).abs() < 1e-9);

        let est2 = amortization_bound(&line2d(), 10_000, 7).unwrap();
        assert!(16.0 <= est2.upper(3.0) * (1.0 + 3.0 / 100.0));
        assert!((est2.estimate - 64.0).abs() < 1e-9);
    }

    #[test]
    fn svg_has_one_rect_per_box() {
        let r = pv_subdivide(&line2d(), 10).unwrap();
        let svg = render_svg(&r).unwrap();
        assert_eq!(svg.matches("<rect").count(), 16);
        assert!(svg.starts_with("<svg"));
        let f = SparsePolynomial::from_dense(&[0.0, 1.0]);
        assert!(render_svg(&pv_subdivide(&f, 5).unwrap()).is_err());
    }
}
