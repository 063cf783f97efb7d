//! Boxes in the cube and the center/radius interval approximations used by
//! the subdivision predicate.
//!
//! Both approximations evaluate `f` (or its gradient) once at the midpoint
//! and pad by the Lipschitz constants of [`SparsePolynomial`]:
//!
//! ```text
//! □[f](B)      = f(m) + d‖f‖₁ (w/2) [−1, 1]
//! □[‖df‖₁](B)  = ‖d_m f‖₁ + √(2n) d² ‖f‖₁ (w/2) [−1, 1]
//! ```

use serde::Serialize;

use crate::poly::SparsePolynomial;

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Self { lo, hi }
    }

    pub fn centered(center: f64, radius: f64) -> Self {
        Self::new(center - radius, center + radius)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Axis-aligned cube `m + (w/2)[−1, 1]^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxN {
    pub mid: Vec<f64>,
    pub width: f64,
}

impl BoxN {
    pub fn new(mid: Vec<f64>, width: f64) -> Self {
        debug_assert!(width > 0.0);
        Self { mid, width }
    }

    /// The unit cube `I^n`.
    pub fn unit(n: usize) -> Self {
        Self::new(vec![0.0; n], 2.0)
    }

    pub fn dim(&self) -> usize {
        self.mid.len()
    }

    pub fn radius(&self) -> f64 {
        self.width / 2.0
    }

    pub fn volume(&self) -> f64 {
        self.width.powi(self.dim() as i32)
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let r = self.radius();
        x.iter().zip(&self.mid).all(|(xi, mi)| (xi - mi).abs() <= r)
    }

    /// Coordinate intervals `[m_i − w/2, m_i + w/2]`.
    pub fn sides(&self) -> Vec<Interval> {
        let r = self.radius();
        self.mid.iter().map(|&m| Interval::centered(m, r)).collect()
    }

    /// Number of halvings from `I^n` for boxes produced by subdivision.
    pub fn depth(&self) -> u32 {
        (2.0 / self.width).log2().round() as u32
    }
}

/// Which clause of the predicate certified a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    /// `0 ∉ □[f](B)`: the box misses the zero set.
    Sign,
    /// `0 ∉ □[‖df‖₁](B)`: the gradient stays away from zero.
    Gradient,
}

/// `□[f](B)`.
pub fn interval_f(f: &SparsePolynomial, b: &BoxN) -> Interval {
    let d = f64::from(f.degree());
    Interval::centered(f.evaluate(&b.mid), d * f.norm1() * b.radius())
}

/// Radius of `□[‖df‖₁](B)`.
fn grad_radius(f: &SparsePolynomial, b: &BoxN) -> f64 {
    let d = f64::from(f.degree());
    let n = b.dim() as f64;
    (2.0 * n).sqrt() * d * d * f.norm1() * b.radius()
}

/// `□[‖df‖₁](B)`, clamped below at 0.
pub fn interval_grad_norm(f: &SparsePolynomial, b: &BoxN) -> Interval {
    let center = f.gradient(&b.mid).norm1();
    let radius = grad_radius(f, b);
    Interval::new((center - radius).max(0.0), center + radius)
}

/// The clause of `C_f^□(B)` that holds, if any. The sign clause is tried
/// first. Both comparisons are strict.
pub fn predicate_clause(f: &SparsePolynomial, b: &BoxN) -> Option<Clause> {
    let d = f64::from(f.degree());
    let sign_radius = d * f.norm1() * b.radius();
    if f.evaluate(&b.mid).abs() > sign_radius {
        return Some(Clause::Sign);
    }
    if f.gradient(&b.mid).norm1() > grad_radius(f, b) {
        return Some(Clause::Gradient);
    }
    None
}

/// `C_f^□(B)`: `0 ∉ □[f](B)` or `0 ∉ □[‖df‖₁](B)` (open form).
pub fn predicate_cf_box(f: &SparsePolynomial, b: &BoxN) -> bool {
    predicate_clause(f, b).is_some()
}

/// The `2^n` children of `b`, in lexicographic coordinate order (first
/// coordinate most significant, lower half before upper half).
pub fn standard_subdivision(b: &BoxN) -> Vec<BoxN> {
    let n = b.dim();
    let quarter = b.width / 4.0;
    let half = b.width / 2.0;
    (0..1usize << n)
        .map(|code| {
            let mid = (0..n)
                .map(|i| {
                    let upper = (code >> (n - 1 - i)) & 1 == 1;
                    if upper {
                        b.mid[i] + quarter
                    } else {
                        b.mid[i] - quarter
                    }
                })
                .collect();
            BoxN::new(mid, half)
        })
        .collect()
}
