//! Univariate root isolation on `I = [-1, 1]` and root separation.
//!
//! [`descartes_isolate`] is the classic bisection solver driven by Descartes'
//! rule of signs. Every node `[a, b]` carries the polynomial
//! `P(t) = f(a + (b − a)t)` up to a positive factor; its variation count is
//! the number of sign changes of `(1 + y)^d P(1/(1 + y))`, an upper bound on
//! the number of roots in `(a, b)` with the same parity. The transforms run
//! exactly on the integer expansion of the `f64` coefficients, so the tree
//! does not depend on rounding.
//!
//! [`separation_oracle`] computes all complex roots by Aberth-Ehrlich
//! iteration and reports `Δ(f)` and `Δ_ε(f)`, which the condition-based lower
//! bounds [`separation_lower_bound`] and [`eps_separation_lower_bound`] are
//! checked against.

use std::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_traits::float::FloatCore;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;

/// Default depth guard of [`descartes_isolate`].
pub const DEFAULT_MAX_DEPTH: u32 = 48;

/// Deepest admissible guard: node endpoints stay exact `f64` dyadics.
pub const MAX_DEPTH_LIMIT: u32 = 52;

/// Artifact constant of [`tree_size_bound`].
pub const TREE_SIZE_CONSTANT: f64 = 8.0;

/// Number of sign changes after deleting zeros.
pub fn sign_variations(coeffs: &[f64]) -> usize {
    count_variations(coeffs.iter().map(|c| c.partial_cmp(&0.0).unwrap_or(Ordering::Equal)))
}

fn count_variations(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut count = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn big_sign(v: &BigInt) -> Ordering {
    match v.sign() {
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
        Sign::Plus => Ordering::Greater,
    }
}

/// `(m, e)` with `v = m · 2^e` exactly.
fn decode(v: f64) -> (BigInt, i32) {
    let (mant, exp, sign) = FloatCore::integer_decode(v);
    (BigInt::from(mant) * i64::from(sign), i32::from(exp))
}

/// Integer coefficients proportional (by a positive power of two) to the
/// dense coefficients of `f`, with trailing zero coefficients removed.
fn exact_dense(f: &SparsePolynomial) -> Result<Vec<BigInt>> {
    let mut dense = f.to_dense_univariate()?;
    if dense.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidArgument("coefficients must be finite".into()));
    }
    while dense.len() > 1 && dense.last() == Some(&0.0) {
        dense.pop();
    }
    let decoded: Vec<(BigInt, i32)> = dense.iter().map(|&c| decode(c)).collect();
    let min_exp = decoded
        .iter()
        .filter(|(m, _)| !m.is_zero())
        .map(|&(_, e)| e)
        .min()
        .unwrap_or(0);
    Ok(decoded
        .into_iter()
        .map(|(m, e)| if m.is_zero() { m } else { m << ((e - min_exp) as usize) })
        .collect())
}

/// `p(x) ↦ p(x + s)` for `s = ±1`, in place.
fn taylor_shift(a: &mut [BigInt], negative: bool) {
    let len = a.len();
    for i in 0..len.saturating_sub(1) {
        for j in (i..len - 1).rev() {
            let next = a[j + 1].clone();
            if negative {
                a[j] -= next;
            } else {
                a[j] += next;
            }
        }
    }
}

/// Divides out the largest power of two common to all coefficients.
fn remove_two_content(a: &mut [BigInt]) {
    let shift = a.iter().filter_map(|c| c.trailing_zeros()).min().unwrap_or(0);
    if shift > 0 {
        for c in a.iter_mut() {
            *c >>= shift as usize;
        }
    }
}

/// Descartes variation count of the node polynomial on `(0, 1)`.
fn node_variations(p: &[BigInt]) -> usize {
    let mut q: Vec<BigInt> = p.iter().rev().cloned().collect();
    taylor_shift(&mut q, false);
    count_variations(q.iter().map(big_sign))
}

/// `2^d P(t/2)`, the node polynomial of the left half.
fn left_half(p: &[BigInt]) -> Vec<BigInt> {
    let d = p.len() - 1;
    p.iter().enumerate().map(|(i, c)| c << (d - i)).collect()
}

/// Exact sign of `f(x)` for any finite `x`.
pub fn exact_sign(f: &SparsePolynomial, x: f64) -> Result<Ordering> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("cannot evaluate at {x}")));
    }
    let a = exact_dense(f)?;
    let (m, e) = decode(x);
    // x = p / 2^q with p an integer.
    let (p, q) = if e >= 0 { (m << e as usize, 0usize) } else { (m, (-e) as usize) };
    let d = a.len() - 1;
    let mut total = BigInt::zero();
    let mut power = BigInt::from(1);
    for (i, c) in a.iter().enumerate() {
        if !c.is_zero() {
            total += (c * &power) << (q * (d - i));
        }
        power *= &p;
    }
    Ok(big_sign(&total))
}

/// Descartes variation count of `f` on `(lo, hi)`, computed exactly.
pub fn interval_variations(f: &SparsePolynomial, lo: f64, hi: f64) -> Result<usize> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidArgument(format!("bad interval [{lo}, {hi}]")));
    }
    let a = exact_dense(f)?;
    let (ml, el) = decode(lo);
    let (mw, ew) = decode(hi - lo);
    if hi - lo + lo != hi || (hi - lo) - hi != -lo {
        return Err(Error::InvalidArgument(format!(
            "width of [{lo}, {hi}] is not exact in f64"
        )));
    }
    // Common exponent g: lo = L 2^g, w = W 2^g.
    let g = el.min(ew);
    let lo_int = ml << (el - g) as usize;
    let w_int = mw << (ew - g) as usize;
    Ok(node_variations(&compose_affine(&a, &lo_int, &w_int, g)))
}

/// Coefficients of `f(2^g (L + W t))` up to a positive factor.
fn compose_affine(a: &[BigInt], lo: &BigInt, w: &BigInt, g: i32) -> Vec<BigInt> {
    let d = a.len() - 1;
    // Horner in t: result = a_d; result = result·(L + W t)·2^g + a_i.
    // To stay integral with g < 0, multiply a_i by 2^{-g·(d−i)} instead.
    let mut result = vec![BigInt::zero(); d + 1];
    result[0] = a[d].clone();
    for i in (0..d).rev() {
        let mut next = vec![BigInt::zero(); d + 1];
        for (k, c) in result.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[k] += c * lo;
            if k + 1 <= d {
                next[k + 1] += c * w;
            }
        }
        let mut ai = a[i].clone();
        if g >= 0 {
            for c in next.iter_mut() {
                *c <<= g as usize;
            }
        } else {
            let shift = (-g) as usize * (d - i);
            ai <<= shift;
        }
        next[0] += ai;
        result = next;
    }
    remove_two_content(&mut result);
    result
}

/// Size statistics of a Descartes subdivision tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeStats {
    pub node_count: usize,
    pub depth: u32,
    pub per_depth_counts: Vec<usize>,
}

impl TreeStats {
    /// Largest number of nodes on one level.
    pub fn max_width(&self) -> usize {
        self.per_depth_counts.iter().copied().max().unwrap_or(0)
    }
}

/// Output of [`descartes_isolate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsolationResult {
    /// Open intervals, in increasing order, each containing exactly one root.
    pub intervals: Vec<(f64, f64)>,
    /// Roots hit exactly by a bisection point or by `±1`, increasing.
    pub exact_roots: Vec<f64>,
    pub tree: TreeStats,
    /// False when the depth guard left some intervals undecided.
    pub terminated: bool,
    /// Intervals still carrying two or more variations at the guard.
    pub unresolved: Vec<(f64, f64)>,
}

impl IsolationResult {
    /// Number of real roots found in `I`.
    pub fn root_count(&self) -> usize {
        self.intervals.len() + self.exact_roots.len()
    }
}

struct Node {
    lo: f64,
    width: f64,
    depth: u32,
    poly: Vec<BigInt>,
}

/// Isolates the real roots of a univariate `f` in `[-1, 1]`.
///
/// `f` should be square-free on `I`; otherwise the guard at `max_depth`
/// stops the bisection around multiple roots and the result is flagged.
pub fn descartes_isolate(f: &SparsePolynomial, max_depth: u32) -> Result<IsolationResult> {
    if f.n() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.n() });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(1..=MAX_DEPTH_LIMIT).contains(&max_depth) {
        return Err(Error::InvalidArgument(format!(
            "max_depth must lie in 1..={MAX_DEPTH_LIMIT}, got {max_depth}"
        )));
    }
    let a = exact_dense(f)?;
    let mut result = IsolationResult {
        intervals: Vec::new(),
        exact_roots: Vec::new(),
        tree: TreeStats { node_count: 0, depth: 0, per_depth_counts: Vec::new() },
        terminated: true,
        unresolved: Vec::new(),
    };
    for end in [-1.0, 1.0] {
        if exact_sign(f, end)? == Ordering::Equal {
            result.exact_roots.push(end);
        }
    }

    // f(−1 + 2t) = h(2t) with h(y) = f(y − 1).
    let mut root = a;
    taylor_shift(&mut root, true);
    for (i, c) in root.iter_mut().enumerate() {
        *c <<= i;
    }
    remove_two_content(&mut root);

    let mut stack = vec![Node { lo: -1.0, width: 2.0, depth: 0, poly: root }];
    while let Some(node) = stack.pop() {
        let stats = &mut result.tree;
        stats.node_count += 1;
        let k = node.depth as usize;
        if stats.per_depth_counts.len() <= k {
            stats.per_depth_counts.resize(k + 1, 0);
        }
        stats.per_depth_counts[k] += 1;
        stats.depth = stats.depth.max(node.depth);

        let hi = node.lo + node.width;
        let v = node_variations(&node.poly);
        if v == 0 {
            continue;
        }
        let endpoint_zero = node.poly[0].is_zero() || node.poly.iter().sum::<BigInt>().is_zero();
        if v == 1 && !endpoint_zero {
            result.intervals.push((node.lo, hi));
            continue;
        }
        if node.depth >= max_depth {
            result.terminated = false;
            result.unresolved.push((node.lo, hi));
            continue;
        }
        let half = node.width / 2.0;
        let mid = node.lo + half;
        let mut left = left_half(&node.poly);
        remove_two_content(&mut left);
        if left.iter().sum::<BigInt>().is_zero() {
            result.exact_roots.push(mid);
        }
        let mut right = left.clone();
        taylor_shift(&mut right, false);
        remove_two_content(&mut right);
        // Left child on top of the stack, so output comes out increasing.
        stack.push(Node { lo: mid, width: half, depth: node.depth + 1, poly: right });
        stack.push(Node { lo: node.lo, width: half, depth: node.depth + 1, poly: left });
    }
    result.exact_roots.sort_by(f64::total_cmp);
    Ok(result)
}

/// Checks an isolation exactly: intervals are disjoint and increasing, `f`
/// has opposite strict signs at the two endpoints of each interval, and the
/// exact roots are zeros of `f`.
pub fn verify_isolation(f: &SparsePolynomial, result: &IsolationResult) -> Result<bool> {
    for pair in result.intervals.windows(2) {
        if pair[0].1 > pair[1].0 {
            return Ok(false);
        }
    }
    for &(lo, hi) in &result.intervals {
        let product = exact_sign(f, lo)? as i8 * exact_sign(f, hi)? as i8;
        if product >= 0 {
            return Ok(false);
        }
    }
    for &r in &result.exact_roots {
        if exact_sign(f, r)? != Ordering::Equal {
            return Ok(false);
        }
    }
    Ok(true)
}

fn degree_for_bounds(f: &SparsePolynomial) -> f64 {
    f64::from(f.degree().max(1))
}

/// `8 |M| (log₂ κ + log₂ d + 1)`, an upper estimate of the Descartes tree
/// size with an empirical constant.
pub fn tree_size_bound(f: &SparsePolynomial, kappa_upper: f64) -> f64 {
    if !kappa_upper.is_finite() {
        return f64::INFINITY;
    }
    let m = f.support_size() as f64;
    TREE_SIZE_CONSTANT * m * (kappa_upper.max(1.0).log2() + degree_for_bounds(f).log2() + 1.0)
}

/// `2√2 / (d √κ)`, a lower bound on `Δ(f)` for any `kappa_upper ≥ κ(f)`.
pub fn separation_lower_bound(f: &SparsePolynomial, kappa_upper: f64) -> f64 {
    if !kappa_upper.is_finite() {
        return 0.0;
    }
    2.0 * 2f64.sqrt() / (degree_for_bounds(f) * kappa_upper.sqrt())
}

/// `1 / (12 d κ)`, a lower bound on `Δ_ε(f)` valid for
/// `0 < eps < 1/(e d κ)`.
pub fn eps_separation_lower_bound(f: &SparsePolynomial, kappa_upper: f64, eps: f64) -> Result<f64> {
    let d = degree_for_bounds(f);
    let limit = 1.0 / (std::f64::consts::E * d * kappa_upper);
    if !(eps > 0.0 && eps < limit) {
        return Err(Error::HypothesisViolated(format!(
            "eps = {eps} is outside (0, 1/(e·d·κ)) = (0, {limit})"
        )));
    }
    Ok(1.0 / (12.0 * d * kappa_upper))
}

/// `|M|¹² (log₂ d)³ max{(log₂ ‖f‖₁)², L²}`: the shape of the bit complexity
/// of the Jindal-Sagraloff solver, with constant 1.
pub fn js_runtime_bound(m_size: usize, d: u32, norm1: f64, bits: u32) -> f64 {
    let lead = (m_size as f64).powi(12) * f64::from(d).log2().powi(3);
    lead * norm1.log2().powi(2).max(f64::from(bits).powi(2))
}

/// `|M|¹² (log₂ d)³ max{(log₂ ‖f‖₁)², (log₂ κ)³}`: the same shape with the
/// bit size replaced by the condition number.
pub fn js_condition_bound(m_size: usize, d: u32, norm1: f64, kappa: f64) -> f64 {
    let lead = (m_size as f64).powi(12) * f64::from(d).log2().powi(3);
    lead * norm1.log2().powi(2).max(kappa.log2().powi(3))
}

/// Real and ε-real separation of a univariate polynomial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparationEstimate {
    /// Minimum distance between real roots in `I`, `+∞` with fewer than two.
    pub delta: f64,
    /// Minimum distance between roots within `eps` of `I`.
    pub delta_eps: f64,
    pub eps: f64,
    /// Real roots in `I`, increasing.
    pub real_roots: Vec<f64>,
}

/// Sweep budget of the Aberth iteration.
pub const ORACLE_MAX_SWEEPS: usize = 1000;

/// Roots with `|Im z| ≤ REAL_TOL (1 + |z|)` count as real.
pub const REAL_TOL: f64 = 1e-9;

/// Evaluates `p/p'` and the relative residual `|p(z)| / Σ|c_i||z|^i`,
/// switching to the reversed polynomial outside the unit disk.
fn newton_ratio(c: &[f64], z: Complex64) -> (Complex64, f64) {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let (mut p, mut dp) = (Complex64::new(c[d], 0.0), Complex64::zero());
        let mut scale = c[d].abs();
        let r = z.norm();
        for &ci in c[..d].iter().rev() {
            dp = dp * z + p;
            p = p * z + ci;
            scale = scale * r + ci.abs();
        }
        (p / dp, p.norm() / scale)
    } else {
        // p(z) = z^d q(w), q(w) = Σ c_{d−i} w^i, w = 1/z.
        let w = z.inv();
        let (mut q, mut dq) = (Complex64::new(c[0], 0.0), Complex64::zero());
        let mut scale = c[0].abs();
        let r = w.norm();
        for &ci in c[1..].iter() {
            dq = dq * w + q;
            q = q * w + ci;
            scale = scale * r + ci.abs();
        }
        let ratio = z / (d as f64 - w * dq / q);
        (ratio, q.norm() / scale)
    }
}

/// All complex roots of a dense real polynomial by Aberth-Ehrlich iteration.
///
/// Leading zero coefficients are dropped. Starting points lie on the circle
/// of radius `1 + max|c_i|/|c_d|` at slightly perturbed equal angles.
pub fn complex_roots(dense: &[f64]) -> Result<Vec<Complex64>> {
    let mut c = dense.to_vec();
    while c.len() > 1 && c.last() == Some(&0.0) {
        c.pop();
    }
    let d = c.len() - 1;
    if d == 0 {
        return Ok(Vec::new());
    }
    let lead = c[d].abs();
    let radius = 1.0 + c[..d].iter().fold(0.0f64, |m, v| m.max(v.abs())) / lead;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / d as f64 + 0.4 + 0.01 * (k % 7) as f64;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut done = vec![false; d];
    let tol = 1e-15;
    for _ in 0..ORACLE_MAX_SWEEPS {
        let mut all_done = true;
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (ratio, residual) = newton_ratio(&c, z[k]);
            if residual <= 1e-15 || !ratio.is_finite() {
                done[k] = true;
                continue;
            }
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
            }
            if step.norm() <= tol * (1.0 + z[k].norm()) {
                done[k] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            for zk in z.iter_mut() {
                polish(&c, zk);
            }
            let worst = z.iter().map(|&zk| newton_ratio(&c, zk).1).fold(0.0, f64::max);
            if worst <= 1e-12 {
                return Ok(z);
            }
            return Err(Error::OracleFailed(format!(
                "relative residual {worst:e} above 1e-12 after convergence"
            )));
        }
    }
    Err(Error::OracleFailed(format!(
        "Aberth iteration did not converge in {ORACLE_MAX_SWEEPS} sweeps"
    )))
}

/// A few Newton steps, kept only while they reduce the residual.
fn polish(c: &[f64], z: &mut Complex64) {
    for _ in 0..3 {
        let (ratio, residual) = newton_ratio(c, *z);
        if !ratio.is_finite() || residual == 0.0 {
            return;
        }
        let candidate = *z - ratio;
        if newton_ratio(c, candidate).1 < residual {
            *z = candidate;
        } else {
            return;
        }
    }
}

fn snap_real(z: Complex64) -> Complex64 {
    if z.im.abs() <= REAL_TOL * (1.0 + z.norm()) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

fn min_pairwise(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// `Δ(f)` and `Δ_ε(f)` from the complex roots of `f`.
///
/// `Δ_ε` uses every root at distance at most `eps` from `I`; real roots in
/// `I` are among them, so `delta_eps ≤ delta`.
pub fn separation_oracle(f: &SparsePolynomial, eps: f64) -> Result<SeparationEstimate> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!("eps must be nonnegative, got {eps}")));
    }
    let roots: Vec<Complex64> = complex_roots(&f.to_dense_univariate()?)?
        .into_iter()
        .map(snap_real)
        .collect();
    let mut real: Vec<f64> = roots
        .iter()
        .filter(|z| z.im == 0.0 && z.re.abs() <= 1.0)
        .map(|z| z.re)
        .collect();
    real.sort_by(f64::total_cmp);
    let near: Vec<Complex64> = roots
        .iter()
        .copied()
        .filter(|z| (z - Complex64::new(z.re.clamp(-1.0, 1.0), 0.0)).norm() <= eps)
        .collect();
    let real_c: Vec<Complex64> = real.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    Ok(SeparationEstimate {
        delta: min_pairwise(&real_c),
        delta_eps: min_pairwise(&near),
        eps,
        real_roots: real,
    })
}
