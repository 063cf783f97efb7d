//! The 1-norm condition number on the cube.
//!
//! For `f` of degree `d` and `x ∈ I^n`,
//!
//! ```text
//! κ(f, x) = ‖f‖₁ / max{ |f(x)|, ‖d_x f‖₁ / d }
//! ```
//!
//! It is infinite exactly at singular zeros. `1/κ(f, ·)` is `d`-Lipschitz
//! for the ∞-norm, which is what turns a finite grid of evaluations into a
//! certified enclosure of the global condition number `κ(f) = max_x κ(f, x)`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::SparsePolynomial;

/// `κ(f, x) ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ConditionValue(f64);

impl ConditionValue {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `1/κ`, zero at singular zeros.
    pub fn inverse(self) -> f64 {
        1.0 / self.0
    }
}

/// Two-sided enclosure of the global condition number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalConditionEnclosure {
    /// Largest `κ(f, g)` over the grid.
    pub lower: f64,
    /// Certified upper bound, `+∞` when the grid is too coarse to certify.
    pub upper: f64,
    /// Covering radius of the grid in the ∞-norm.
    pub grid_eps: f64,
    /// Number of grid points evaluated.
    pub grid_points: usize,
}

impl GlobalConditionEnclosure {
    pub fn contains(&self, kappa: f64) -> bool {
        self.lower <= kappa && kappa <= self.upper
    }

    pub fn ratio(&self) -> f64 {
        self.upper / self.lower
    }
}

/// `max{|f(x)|/‖f‖₁, ‖d_x f‖₁/(d‖f‖₁)}`, i.e. `1/κ(f, x)`, for nonzero `f`.
fn inverse_condition_unchecked(f: &SparsePolynomial, norm: f64, x: &[f64]) -> f64 {
    let d = f64::from(f.degree());
    let value = f.evaluate(x).abs();
    let grad = f.gradient(x).norm1() / d;
    value.max(grad) / norm
}

/// `κ(f, x)`.
pub fn local_condition(f: &SparsePolynomial, x: &[f64]) -> Result<ConditionValue> {
    check_point(f, x)?;
    let norm = f.norm1();
    if norm == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let inv = inverse_condition_unchecked(f, norm, x);
    // |f(x)| ≤ ‖f‖₁ on the cube; the clamp only absorbs rounding in the last ulp.
    Ok(ConditionValue((1.0 / inv).max(1.0)))
}

fn check_point(f: &SparsePolynomial, x: &[f64]) -> Result<()> {
    if x.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: x.len(),
        });
    }
    Ok(())
}

/// Largest dimension for which [`global_condition`] builds a full grid.
pub const MAX_GRID_DIMENSION: usize = 3;

/// Uniform lattice on `I^n` with `⌈1/eps⌉ + 1` points per axis.
pub(crate) fn grid_axis(grid_eps: f64) -> Vec<f64> {
    let intervals = (1.0 / grid_eps).ceil() as usize;
    (0..=intervals)
        .map(|k| -1.0 + 2.0 * k as f64 / intervals as f64)
        .collect()
}

/// Certified enclosure of `κ(f) = max_{x ∈ I^n} κ(f, x)` from a uniform grid
/// of covering radius `grid_eps`.
///
/// The upper bound uses `1/κ(f) ≥ min_g 1/κ(f, g) − d·grid_eps`.
pub fn global_condition(f: &SparsePolynomial, grid_eps: f64) -> Result<GlobalConditionEnclosure> {
    if !(grid_eps > 0.0 && grid_eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "grid_eps must lie in (0, 1), got {grid_eps}"
        )));
    }
    let n = f.n();
    if n == 0 || n > MAX_GRID_DIMENSION {
        return Err(Error::InvalidArgument(format!(
            "global condition grid supports 1 ≤ n ≤ {MAX_GRID_DIMENSION}, got {n}"
        )));
    }
    let norm = f.norm1();
    if norm == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let axis = grid_axis(grid_eps);
    let per_axis = axis.len();
    let total = per_axis.pow(n as u32);

    let min_inv = (0..total)
        .into_par_iter()
        .with_min_len(256)
        .map(|mut idx| {
            let mut x = [0.0; MAX_GRID_DIMENSION];
            for xi in x.iter_mut().take(n) {
                *xi = axis[idx % per_axis];
                idx /= per_axis;
            }
            inverse_condition_unchecked(f, norm, &x[..n])
        })
        .reduce(|| f64::INFINITY, f64::min);

    let lower = (1.0 / min_inv).max(1.0);
    let denom = min_inv - f64::from(f.degree()) * grid_eps;
    let upper = if denom > 0.0 { (1.0 / denom).max(lower) } else { f64::INFINITY };
    Ok(GlobalConditionEnclosure {
        lower,
        upper,
        grid_eps,
        grid_points: total,
    })
}

/// Refines the grid (by factors of 4) until the enclosure is finite with
/// `upper ≤ target_ratio · lower`, or `min_eps` is reached.
///
/// Returns the last enclosure computed; its `upper` may still be `+∞` for
/// polynomials with (near-)singular zeros in the cube.
pub fn global_condition_adaptive(
    f: &SparsePolynomial,
    start_eps: f64,
    min_eps: f64,
    target_ratio: f64,
) -> Result<GlobalConditionEnclosure> {
    let mut eps = start_eps;
    loop {
        let enc = global_condition(f, eps)?;
        if enc.upper.is_finite() && enc.upper <= target_ratio * enc.lower {
            return Ok(enc);
        }
        if !enc.lower.is_finite() || eps / 4.0 < min_eps {
            return Ok(enc);
        }
        // Jump straight to a radius that can certify, when the grid suggests one.
        let d = f64::from(f.degree());
        let needed = 1.0 / (enc.lower * d) * (1.0 - 1.0 / target_ratio);
        eps = (eps / 4.0).min(needed).max(min_eps);
    }
}

/// Upper bound `√n (d−1) κ(f, x) / 2` on Smale's `γ(f, x)`.
///
/// Valid only when `κ(f, x)|f(x)|/‖f‖₁ < 1`, which is checked in the
/// equivalent and rounding-free form `‖d_x f‖₁/d > |f(x)|`.
pub fn gamma_bound(f: &SparsePolynomial, x: &[f64]) -> Result<f64> {
    let kappa = local_condition(f, x)?.value();
    let value = f.evaluate(x).abs();
    let slope = f.gradient(x).norm1() / f64::from(f.degree());
    if !(slope > value) {
        return Err(Error::HypothesisViolated(format!(
            "κ(f,x)|f(x)|/‖f‖₁ = {} is not < 1",
            kappa * value / f.norm1()
        )));
    }
    let n = f.n() as f64;
    let d = f64::from(f.degree());
    Ok(n.sqrt() * (d - 1.0) * kappa / 2.0)
}

/// Smale's `γ(f, x) = max_{k ≥ 2} (|f^(k)(x)| / (k! |f'(x)|))^{1/(k−1)}` for
/// univariate `f`.
pub fn gamma_exact_univariate(f: &SparsePolynomial, x: f64) -> Result<f64> {
    if f.n() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: f.n(),
        });
    }
    let first = f.partial_derivative(0)?;
    let slope = first.evaluate(&[x]);
    if slope == 0.0 {
        return Err(Error::HypothesisViolated("f'(x) = 0".into()));
    }
    // taylor = f^(k) / k!, built one derivative at a time.
    let mut taylor = first;
    let mut gamma = 0.0f64;
    for k in 2..=f.degree() {
        taylor = taylor.partial_derivative(0)?.scale(1.0 / f64::from(k));
        if taylor.is_zero() {
            break;
        }
        let ratio = (taylor.evaluate(&[x]) / slope).abs();
        gamma = gamma.max(ratio.powf(1.0 / f64::from(k - 1)));
    }
    Ok(gamma)
}

/// `dist₁(f, Σ_x)`: the smallest `‖δ‖₁` over perturbations `δ` on the
/// support of `f` such that `f − δ` has a singular zero at `x`.
///
/// The minimum of `‖δ‖₁` subject to `R_x δ = R_x f`, with `R_x` the
/// evaluation-and-gradient map at `x`, is attained at a basic solution, so
/// the routine enumerates every invertible square column subsystem.
pub fn dist1_to_sigma_x(f: &SparsePolynomial, x: &[f64]) -> Result<f64> {
    check_point(f, x)?;
    let n = f.n();
    let m = f.support_size();
    let cols: Vec<Vec<f64>> = f
        .terms()
        .iter()
        .map(|t| {
            let single = SparsePolynomial::new(n, vec![(t.alpha.clone(), 1.0)]).expect("valid term");
            let mut col = vec![single.evaluate(x)];
            col.extend(single.gradient(x).entries());
            col
        })
        .collect();
    let rows: Vec<Vec<f64>> = (0..=n).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let rhs: Vec<f64> = (0..=n)
        .map(|r| cols.iter().zip(f.terms()).map(|(c, t)| c[r] * t.coeff).sum())
        .collect();
    if rhs.iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }

    let keep = linalg::independent_rows(&rows, 1e-12);
    let rank = keep.len();
    if rank == 0 {
        return Err(Error::SupportTooSmall("evaluation map vanishes on the support".into()));
    }
    let subsets = crate::poly::binomial(m as u32, rank as u32);
    if subsets > 5.0e6 {
        return Err(Error::InvalidArgument(format!(
            "{subsets} basic subsystems exceed the enumeration budget"
        )));
    }

    let reduced_rhs: Vec<f64> = keep.iter().map(|&r| rhs[r]).collect();
    let mut best = f64::INFINITY;
    for_each_subset(m, rank, |subset| {
        let a: Vec<Vec<f64>> = keep
            .iter()
            .map(|&r| subset.iter().map(|&c| rows[r][c]).collect())
            .collect();
        if let Some(sol) = linalg::solve_square(&a, &reduced_rhs, 1e-12) {
            let l1: f64 = sol.iter().map(|v| v.abs()).sum();
            best = best.min(l1);
        }
    });
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::SupportTooSmall(
            "no invertible column subsystem of the evaluation map".into(),
        ))
    }
}

/// Calls `visit` with every `k`-subset of `0..m` in lexicographic order.
pub(crate) fn for_each_subset(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // Rightmost position that can still advance.
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + m - k {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Local size bound `(d √(2n) κ(f, x))^{−n}`: every box through `x` on
/// which the interval predicate fails has at least this volume.
pub fn local_size_bound(f: &SparsePolynomial, x: &[f64]) -> Result<f64> {
    let kappa = local_condition(f, x)?;
    if !kappa.is_finite() {
        return Ok(0.0);
    }
    let n = f.n() as f64;
    let d = f64::from(f.degree());
    Ok((d * (2.0 * n).sqrt() * kappa.value()).powi(-(f.n() as i32)))
}
