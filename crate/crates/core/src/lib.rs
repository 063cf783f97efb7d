//! Condition numbers of real polynomials on the unit cube `I^n = [-1, 1]^n`.
//!
//! The crate is organised bottom-up:
//!
//! - [`poly`]: sparse polynomials, evaluation, formal derivatives and the
//!   1-norm estimates they satisfy on the cube.
//! - [`condition`]: the local condition number `κ(f, x)`, certified
//!   enclosures of the global condition number, Smale's `γ` and the distance
//!   to the polynomials singular at a point.
//! - [`interval`]: boxes, the two center/radius interval approximations and
//!   the subdivision predicate built from them.
//! - [`pv`]: the subdivision phase of the Plantinga-Vegter algorithm and its
//!   condition-based complexity estimate.
//! - [`univariate`]: Descartes root isolation on `[-1, 1]`, root separation
//!   and the condition-based separation bounds.
//! - [`random`]: random sparse polynomial models and the closed-form tail,
//!   moment and complexity bounds expressed through their constants.
//! - [`experiments`]: seeded Monte Carlo harness comparing the engines with
//!   those bounds, plus CSV and SVG output.
//!
//! All arithmetic is `f64` except for the Descartes coefficient transforms,
//! which are carried out exactly on the dyadic expansion of the input.

pub mod condition;
pub mod error;
pub mod experiments;
pub mod interval;
mod linalg;
pub mod poly;
pub mod pv;
pub mod random;
pub mod univariate;

pub use condition::{ConditionValue, GlobalConditionEnclosure};
pub use error::{Error, Result};
pub use interval::{BoxN, Interval};
pub use poly::{Covector, SparsePolynomial};
pub use pv::SubdivisionReport;
pub use random::{CoefficientDistribution, ModelConstants, RandomModel};
pub use univariate::{IsolationResult, SeparationEstimate};
