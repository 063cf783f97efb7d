//! Sparse multivariate polynomials with real coefficients.
//!
//! A polynomial is stored as its support (a list of distinct exponent
//! vectors) together with one coefficient per support element. Zero
//! coefficients are kept so that a random model can fix the support
//! independently of the sampled values.
//!
//! The 1-norm `‖f‖₁ = Σ |f_α|` controls everything on the cube: for
//! `x ∈ I^n` we have `|f(x)| ≤ ‖f‖₁`, `‖d_x f‖₁ ≤ d‖f‖₁`, and both
//! `x ↦ |f(x)|` and `x ↦ ‖d_x f‖₁ / d` are `d‖f‖₁`-Lipschitz for the
//! ∞-norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One monomial `coeff · X^alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub alpha: Vec<u32>,
    pub coeff: f64,
}

impl Term {
    pub fn total_degree(&self) -> u32 {
        self.alpha.iter().sum()
    }
}

/// `f = Σ_{α ∈ M} f_α X^α` in `n` variables.
///
/// The stored degree is the largest total degree among terms with a nonzero
/// coefficient, clamped below by 1 so that formulas dividing by `d` stay
/// defined for constants.
#[derive(Debug, Clone, PartialEq)]
pub struct SparsePolynomial {
    n: usize,
    terms: Vec<Term>,
    degree: u32,
}

/// Row vector `(∂f/∂X₁(x), …, ∂f/∂Xₙ(x))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector(pub Vec<f64>);

impl Covector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn norm1(&self) -> f64 {
        self.0.iter().map(|v| v.abs()).sum()
    }

    pub fn dot(&self, other: &Covector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }
}

/// `x^e` by binary exponentiation.
pub(crate) fn powu(mut x: f64, mut e: u32) -> f64 {
    let mut acc = 1.0;
    while e > 0 {
        if e & 1 == 1 {
            acc *= x;
        }
        x *= x;
        e >>= 1;
    }
    acc
}

/// `binom(n, k)` as a float; exact for the sizes used here.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    // Exact in integers while the running product fits, f64 afterwards.
    let mut exact: u128 = 1;
    for i in 0..k {
        match exact.checked_mul(u128::from(n - i)) {
            Some(v) => exact = v / u128::from(i + 1),
            None => {
                let mut acc = exact as f64;
                for j in i..k {
                    acc = acc * f64::from(n - j) / f64::from(j + 1);
                }
                return acc.round();
            }
        }
    }
    exact as f64
}

fn monomial(alpha: &[u32], x: &[f64]) -> f64 {
    alpha
        .iter()
        .zip(x)
        .map(|(&a, &xi)| powu(xi, a))
        .product()
}

impl SparsePolynomial {
    /// Builds a polynomial, merging repeated exponents by summing their
    /// coefficients. The order of first occurrence is preserved.
    pub fn new<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut merged: Vec<Term> = Vec::new();
        for (alpha, coeff) in terms {
            if alpha.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: alpha.len(),
                });
            }
            match merged.iter_mut().find(|t| t.alpha == alpha) {
                Some(t) => t.coeff += coeff,
                None => merged.push(Term { alpha, coeff }),
            }
        }
        Ok(Self::from_terms_unchecked(n, merged))
    }

    fn from_terms_unchecked(n: usize, terms: Vec<Term>) -> Self {
        let degree = terms
            .iter()
            .filter(|t| t.coeff != 0.0)
            .map(Term::total_degree)
            .max()
            .unwrap_or(0)
            .max(1);
        Self { n, terms, degree }
    }

    /// Univariate polynomial from a dense coefficient vector `c[0] + c[1] X + …`.
    pub fn from_dense(coeffs: &[f64]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| Term {
                alpha: vec![i as u32],
                coeff: c,
            })
            .collect();
        Self::from_terms_unchecked(1, terms)
    }

    pub fn zero(n: usize) -> Self {
        Self::from_terms_unchecked(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree `d ≥ 1` used by every bound in the crate.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// `|M|`, the number of stored terms including zero coefficients.
    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.coeff == 0.0)
    }

    pub fn coefficient(&self, alpha: &[u32]) -> f64 {
        self.terms
            .iter()
            .find(|t| t.alpha == alpha)
            .map_or(0.0, |t| t.coeff)
    }

    /// `c · f`, keeping the support.
    pub fn scale(&self, c: f64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                alpha: t.alpha.clone(),
                coeff: c * t.coeff,
            })
            .collect();
        Self::from_terms_unchecked(self.n, terms)
    }

    /// Same support, new coefficients (in stored term order).
    pub fn with_coefficients(&self, coeffs: &[f64]) -> Result<Self> {
        if coeffs.len() != self.terms.len() {
            return Err(Error::DimensionMismatch {
                expected: self.terms.len(),
                found: coeffs.len(),
            });
        }
        let terms = self
            .terms
            .iter()
            .zip(coeffs)
            .map(|(t, &c)| Term {
                alpha: t.alpha.clone(),
                coeff: c,
            })
            .collect();
        Ok(Self::from_terms_unchecked(self.n, terms))
    }

    pub fn coefficients(&self) -> Vec<f64> {
        self.terms.iter().map(|t| t.coeff).collect()
    }

    /// `Σ f_α x^α`, summed in stored order.
    ///
    /// # Panics
    /// If `x.len() != n`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.n, "point dimension");
        self.terms
            .iter()
            .map(|t| t.coeff * monomial(&t.alpha, x))
            .sum()
    }

    /// `d_x f`.
    ///
    /// # Panics
    /// If `x.len() != n`.
    pub fn gradient(&self, x: &[f64]) -> Covector {
        assert_eq!(x.len(), self.n, "point dimension");
        let mut g = vec![0.0; self.n];
        for t in &self.terms {
            for (i, gi) in g.iter_mut().enumerate() {
                let ai = t.alpha[i];
                if ai == 0 {
                    continue;
                }
                let rest: f64 = t
                    .alpha
                    .iter()
                    .zip(x)
                    .enumerate()
                    .map(|(j, (&a, &xj))| if j == i { powu(xj, a - 1) } else { powu(xj, a) })
                    .product();
                *gi += f64::from(ai) * t.coeff * rest;
            }
        }
        Covector(g)
    }

    /// Formal `∂f/∂X_i` for a zero-based variable index.
    pub fn partial_derivative(&self, i: usize) -> Result<Self> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, n: self.n });
        }
        let terms = self
            .terms
            .iter()
            .filter(|t| t.alpha[i] > 0)
            .map(|t| {
                let mut alpha = t.alpha.clone();
                let ai = alpha[i];
                alpha[i] -= 1;
                Term {
                    alpha,
                    coeff: f64::from(ai) * t.coeff,
                }
            })
            .collect();
        Ok(Self::from_terms_unchecked(self.n, terms))
    }

    /// `‖f‖₁ = Σ |f_α|`.
    pub fn norm1(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// `binom(d, k) ‖f‖₁`, which bounds `|(1/k!) d_z^k f(v₁, …, v_k)|` for
    /// `z` in the polydisk and unit ∞-norm directions.
    pub fn derivative_norm_bound(&self, k: u32) -> Result<f64> {
        if k > self.degree {
            return Err(Error::OrderExceedsDegree { k, d: self.degree });
        }
        Ok(binomial(self.degree, k) * self.norm1())
    }

    /// Lipschitz constants on `I^n` (∞-norm) of `x ↦ |f(x)|` and
    /// `x ↦ ‖d_x f‖₁`: `(d‖f‖₁, d²‖f‖₁)`.
    pub fn lipschitz_constants(&self) -> (f64, f64) {
        let d = f64::from(self.degree);
        let nrm = self.norm1();
        (d * nrm, d * d * nrm)
    }

    /// Dense coefficient vector of a univariate polynomial, index = exponent.
    pub fn to_dense_univariate(&self) -> Result<Vec<f64>> {
        if self.n != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.n,
            });
        }
        let top = self.terms.iter().map(|t| t.alpha[0]).max().unwrap_or(0) as usize;
        let mut dense = vec![0.0; top + 1];
        for t in &self.terms {
            dense[t.alpha[0] as usize] += t.coeff;
        }
        Ok(dense)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: PolynomialFile = serde_json::from_str(s)?;
        file.into_polynomial()
    }

    pub fn read_json(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_file(&self) -> PolynomialFile {
        PolynomialFile {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| TermFile {
                    alpha: t.alpha.iter().map(|&a| i64::from(a)).collect(),
                    c: t.coeff,
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("polynomial serializes")
    }
}

/// On-disk form `{"n": 2, "terms": [{"alpha": [0, 0], "c": 1.0}, …]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialFile {
    pub n: usize,
    pub terms: Vec<TermFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub alpha: Vec<i64>,
    pub c: f64,
}

impl PolynomialFile {
    pub fn into_polynomial(self) -> Result<SparsePolynomial> {
        let n = self.n;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.into_iter().enumerate() {
            if t.alpha.len() != n {
                return Err(Error::Format(format!(
                    "terms[{i}].alpha has length {}, expected n = {n}",
                    t.alpha.len()
                )));
            }
            let mut alpha = Vec::with_capacity(n);
            for (j, a) in t.alpha.into_iter().enumerate() {
                let a = u32::try_from(a).map_err(|_| {
                    Error::Format(format!("terms[{i}].alpha[{j}] = {a} is not a valid exponent"))
                })?;
                alpha.push(a);
            }
            if !t.c.is_finite() {
                return Err(Error::Format(format!("terms[{i}].c is not finite")));
            }
            terms.push((alpha, t.c));
        }
        SparsePolynomial::new(n, terms)
    }
}
