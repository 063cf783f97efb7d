//! Random sparse polynomial models and the bounds expressed through their
//! constants.
//!
//! A model draws independent coefficients, all from one distribution, on a
//! support `M` that contains `0, e₁, …, eₙ`. Its constants are
//!
//! ```text
//! K_f = Σ_α K_α            subgaussian tail constant
//! L_f = Σ_α L_α            p-tail constant
//! ρ_f = (ρ₀ ρ_{e₁} ⋯ ρ_{eₙ})^{1/(n+1)}   anti-concentration constant
//! ```
//!
//! where `K_α` (`L_α`) is the smallest `K` with `P(|x| > t) ≤ 2 exp(−(t/K)^q)`
//! for all `t ≥ K` (`q = 2`, resp. `q = p`), and `ρ_α` is the supremum of the
//! coefficient density. Every probabilistic bound in this module is a closed
//! form in `n`, `d`, `|M|` and the product `Kρ` (or `Lρ`).

use std::f64::consts::{E, LN_2, PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform, Weibull};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;

/// Distribution shared by all coefficients of a model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CoefficientDistribution {
    Gaussian {
        #[serde(default)]
        mean: f64,
        #[serde(default = "one")]
        sd: f64,
    },
    Uniform {
        lo: f64,
        hi: f64,
    },
    /// Symmetric variable whose magnitude has survival `exp(−(t/scale)^p)`.
    WeibullSymmetric {
        p: f64,
        scale: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

impl CoefficientDistribution {
    pub fn standard_gaussian() -> Self {
        Self::Gaussian { mean: 0.0, sd: 1.0 }
    }

    pub fn standard_uniform() -> Self {
        Self::Uniform { lo: -1.0, hi: 1.0 }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Format(msg));
        match *self {
            Self::Gaussian { mean, sd } => {
                if !mean.is_finite() {
                    return bad(format!("dist.mean = {mean} is not finite"));
                }
                if !(sd > 0.0 && sd.is_finite()) {
                    return bad(format!("dist.sd = {sd} must be positive"));
                }
            }
            Self::Uniform { lo, hi } => {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return bad(format!("dist.lo = {lo}, dist.hi = {hi} do not form a nonempty interval"));
                }
            }
            Self::WeibullSymmetric { p, scale } => {
                if !(p >= 1.0 && p.is_finite()) {
                    return bad(format!("dist.p = {p} must be at least 1"));
                }
                if !(scale > 0.0 && scale.is_finite()) {
                    return bad(format!("dist.scale = {scale} must be positive"));
                }
            }
        }
        Ok(())
    }

    /// Supremum of the density, so that `P(|x − u| ≤ ε) ≤ 2ρε`.
    pub fn anti_concentration(&self) -> f64 {
        match *self {
            Self::Gaussian { sd, .. } => 1.0 / (sd * (2.0 * PI).sqrt()),
            Self::Uniform { lo, hi } => 1.0 / (hi - lo),
            Self::WeibullSymmetric { p, scale } => {
                if p == 1.0 {
                    1.0 / (2.0 * scale)
                } else {
                    // Mode of the magnitude density at s((p−1)/p)^{1/p}.
                    let r = (p - 1.0) / p;
                    0.5 * (p / scale) * r.powf(r) * (-r).exp()
                }
            }
        }
    }

    /// Smallest `K` with `P(|x| > t) ≤ 2 exp(−(t/K)^q)` for all `t ≥ K`.
    ///
    /// Bounded distributions report their bound `max(|lo|, |hi|)`, which
    /// satisfies the inequality for every `q`.
    pub fn tail_constant(&self, q: f64) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => lo.abs().max(hi.abs()),
            Self::Gaussian { mean, sd } => {
                let floor = match q.partial_cmp(&2.0) {
                    Some(std::cmp::Ordering::Greater) => return f64::INFINITY,
                    Some(std::cmp::Ordering::Equal) => SQRT_2 * sd,
                    _ => 0.0,
                };
                smallest_tail_constant(|t| gaussian_log_survival(mean, sd, t), q, floor, sd + mean.abs())
            }
            Self::WeibullSymmetric { p, scale } => {
                if q > p {
                    return f64::INFINITY;
                }
                let floor = if q == p { scale } else { 0.0 };
                smallest_tail_constant(|t| -(t / scale).powf(p), q, floor, scale)
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        match *self {
            Self::Gaussian { mean, sd } => Normal::new(mean, sd).expect("validated").sample(rng),
            Self::Uniform { lo, hi } => Uniform::new_inclusive(lo, hi).expect("validated").sample(rng),
            Self::WeibullSymmetric { p, scale } => {
                let magnitude = Weibull::new(scale, p).expect("validated").sample(rng);
                if rng.random::<bool>() {
                    magnitude
                } else {
                    -magnitude
                }
            }
        }
    }
}

/// `ln erfc(y)`, accurate far into the tail.
fn ln_erfc(y: f64) -> f64 {
    if y < 25.0 {
        statrs::function::erf::erfc(y).ln()
    } else {
        let y2 = y * y;
        -y2 - (y * PI.sqrt()).ln() + (1.0 - 0.5 / y2 + 0.75 / (y2 * y2)).ln()
    }
}

/// `ln P(|x| > t)` for `x ~ N(mean, sd²)`.
fn gaussian_log_survival(mean: f64, sd: f64, t: f64) -> f64 {
    let a = ln_erfc((t - mean) / (sd * SQRT_2)) - LN_2;
    let b = ln_erfc((t + mean) / (sd * SQRT_2)) - LN_2;
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

const TAIL_GRID: usize = 4000;

/// Bisection for the smallest `K ≥ floor` with `ln S(t) ≤ ln 2 − (t/K)^q`
/// on `[K, 20(K + scale)]`.
///
/// `floor` is the asymptotic lower limit (no smaller `K` can hold for large
/// `t`), so only the bounded range needs checking. The excess is maximized on
/// a grid and then refined by golden-section search around the best node,
/// since at the optimal `K` the two sides touch at an interior point.
fn smallest_tail_constant(log_survival: impl Fn(f64) -> f64, q: f64, floor: f64, scale: f64) -> f64 {
    let holds = |k: f64| {
        let excess = |t: f64| log_survival(t) + (t / k).powf(q) - LN_2;
        let top = 20.0 * (k + scale);
        let h = (top - k) / TAIL_GRID as f64;
        let (best, worst) = (0..=TAIL_GRID)
            .map(|j| (j, excess(k + h * j as f64)))
            .fold((0, f64::NEG_INFINITY), |acc, (j, v)| if v > acc.1 { (j, v) } else { acc });
        if worst > 1e-12 {
            return false;
        }
        let (mut a, mut b) = (k + h * best.saturating_sub(1) as f64, (k + h * (best + 1) as f64).min(top));
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = b - ratio * (b - a);
            let d = a + ratio * (b - a);
            if excess(c) >= excess(d) {
                b = d;
            } else {
                a = c;
            }
        }
        excess(0.5 * (a + b)) <= 1e-12
    };
    if floor > 0.0 && holds(floor) {
        return floor;
    }
    let mut lo = floor.max(1e-6 * scale);
    let mut hi = lo.max(scale);
    while !holds(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `K_f`, `ρ_f` and `L_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelConstants {
    #[serde(rename = "K")]
    pub k: f64,
    pub rho: f64,
    #[serde(rename = "L")]
    pub l: f64,
}

impl ModelConstants {
    pub fn k_rho(&self) -> f64 {
        self.k * self.rho
    }

    pub fn l_rho(&self) -> f64 {
        self.l * self.rho
    }
}

/// Deterministic shift of a smoothed model: draws are `center + σ‖center‖₁ 𝔣`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Smoothing {
    /// Coefficients of the fixed polynomial, aligned with the support.
    pub center: Vec<f64>,
    pub sigma: f64,
}

/// JSON form of a model:
/// `{"n":1, "support":[[0],[1],[5]], "dist":{"kind":"gaussian","sd":1.0}, "p":2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub n: usize,
    pub support: Vec<Vec<i64>>,
    pub dist: CoefficientDistribution,
    #[serde(default = "two")]
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub smoothing: Option<Smoothing>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomModel {
    n: usize,
    support: Vec<Vec<u32>>,
    dist: CoefficientDistribution,
    p: f64,
    smoothing: Option<Smoothing>,
    constants: ModelConstants,
}

/// Sharp and simplified forms of the global tail bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GlobalTailBound {
    pub sharp: f64,
    pub simplified: f64,
}

/// Bound on the expected number of final subdivision boxes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpectedBoxesBound {
    /// Form in terms of `K_f ρ_f`, valid for every model.
    pub general: f64,
    /// Closed form for centered Gaussian or centered uniform models.
    pub specialized: Option<f64>,
}

impl ExpectedBoxesBound {
    /// The tightest available bound.
    pub fn best(&self) -> f64 {
        self.specialized.map_or(self.general, |s| s.min(self.general))
    }
}

/// Artifact constant of [`RandomModel::descartes_moment_bound`].
pub const DESCARTES_MOMENT_CONSTANT: f64 = 16.0;

impl RandomModel {
    pub fn new(n: usize, support: Vec<Vec<u32>>, dist: CoefficientDistribution, p: f64) -> Result<Self> {
        Self::build(n, support, dist, p, None)
    }

    fn build(
        n: usize,
        support: Vec<Vec<u32>>,
        dist: CoefficientDistribution,
        p: f64,
        smoothing: Option<Smoothing>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Format("n must be at least 1".into()));
        }
        for (i, alpha) in support.iter().enumerate() {
            if alpha.len() != n {
                return Err(Error::Format(format!(
                    "support[{i}] has length {}, expected n = {n}",
                    alpha.len()
                )));
            }
            if support[..i].contains(alpha) {
                return Err(Error::Format(format!("support[{i}] = {alpha:?} is repeated")));
            }
        }
        let mut required = vec![vec![0u32; n]];
        for i in 0..n {
            let mut e = vec![0u32; n];
            e[i] = 1;
            required.push(e);
        }
        for r in &required {
            if !support.contains(r) {
                return Err(Error::Format(format!(
                    "support must contain 0 and every e_i; {r:?} is missing"
                )));
            }
        }
        dist.validate()?;
        if !(p >= 1.0) {
            return Err(Error::Format(format!("p = {p} must be at least 1")));
        }

        let m = support.len() as f64;
        let base_k = dist.tail_constant(2.0);
        let base_l = if p == 2.0 { base_k } else { dist.tail_constant(p) };
        let base_rho = dist.anti_concentration();
        let mut constants = ModelConstants { k: m * base_k, rho: base_rho, l: m * base_l };
        if let Some(s) = &smoothing {
            if s.center.len() != support.len() {
                return Err(Error::Format(format!(
                    "smoothing.center has {} entries, support has {}",
                    s.center.len(),
                    support.len()
                )));
            }
            if !(s.sigma > 0.0 && s.sigma.is_finite()) {
                return Err(Error::InvalidArgument(format!("sigma = {} must be positive", s.sigma)));
            }
            let norm: f64 = s.center.iter().map(|c| c.abs()).sum();
            if !(norm > 0.0 && norm.is_finite()) {
                return Err(Error::InvalidArgument("smoothing center must be a nonzero polynomial".into()));
            }
            constants = ModelConstants {
                k: norm * (1.0 + s.sigma * constants.k),
                rho: constants.rho / (s.sigma * norm),
                l: norm * (1.0 + s.sigma * constants.l),
            };
        }

        let n1 = (n + 1) as f64;
        // Universal lower bounds on the constant products.
        if !(constants.k_rho() > n1 / 4.0) {
            return Err(Error::InvalidArgument(format!(
                "K·ρ = {} is not above (n+1)/4",
                constants.k_rho()
            )));
        }
        if !(constants.l_rho() > 9.0 * n1 / 50.0) {
            return Err(Error::InvalidArgument(format!(
                "L·ρ = {} is not above 9(n+1)/50",
                constants.l_rho()
            )));
        }
        Ok(Self { n, support, dist, p, smoothing, constants })
    }

    pub fn from_spec(spec: ModelSpec) -> Result<Self> {
        let mut support = Vec::with_capacity(spec.support.len());
        for (i, alpha) in spec.support.iter().enumerate() {
            let mut row = Vec::with_capacity(alpha.len());
            for (j, &a) in alpha.iter().enumerate() {
                let a = u32::try_from(a).map_err(|_| {
                    Error::Format(format!("support[{i}][{j}] = {a} is not a valid exponent"))
                })?;
                row.push(a);
            }
            support.push(row);
        }
        Self::build(spec.n, support, spec.dist, spec.p, spec.smoothing)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Self::from_spec(serde_json::from_str(s)?)
    }

    pub fn read_json(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_spec(&self) -> ModelSpec {
        ModelSpec {
            n: self.n,
            support: self
                .support
                .iter()
                .map(|a| a.iter().map(|&e| i64::from(e)).collect())
                .collect(),
            dist: self.dist,
            p: self.p,
            smoothing: self.smoothing.clone(),
        }
    }

    /// Dense support `{0, 1, …, d}` in one variable.
    pub fn univariate_dense(d: u32, dist: CoefficientDistribution) -> Result<Self> {
        Self::new(1, (0..=d).map(|k| vec![k]).collect(), dist, 2.0)
    }

    /// Univariate model on the given exponents, which must include 0 and 1.
    pub fn univariate(exponents: &[u32], dist: CoefficientDistribution) -> Result<Self> {
        Self::new(1, exponents.iter().map(|&k| vec![k]).collect(), dist, 2.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[Vec<u32>] {
        &self.support
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn distribution(&self) -> CoefficientDistribution {
        self.dist
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn smoothing(&self) -> Option<&Smoothing> {
        self.smoothing.as_ref()
    }

    /// `max(total degree over M, 1)`.
    pub fn degree(&self) -> u32 {
        self.support
            .iter()
            .map(|a| a.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
            .max(1)
    }

    pub fn constants(&self) -> ModelConstants {
        self.constants
    }

    /// Same model with another tail exponent `p`.
    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::build(self.n, self.support.clone(), self.dist, p, self.smoothing.clone())
    }

    /// Centered Gaussian without smoothing.
    pub fn is_exact_gaussian(&self) -> bool {
        self.smoothing.is_none() && matches!(self.dist, CoefficientDistribution::Gaussian { mean, .. } if mean == 0.0)
    }

    /// Uniform on a symmetric interval without smoothing.
    pub fn is_exact_uniform(&self) -> bool {
        self.smoothing.is_none() && matches!(self.dist, CoefficientDistribution::Uniform { lo, hi } if lo == -hi)
    }

    /// One draw from stream 0 of `seed`.
    pub fn sample(&self, seed: u64) -> SparsePolynomial {
        self.sample_trial(seed, 0)
    }

    /// Draw number `trial`; its generator stream depends only on `(seed, trial)`.
    pub fn sample_trial(&self, seed: u64, trial: u64) -> SparsePolynomial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial);
        let base: Vec<f64> = self.support.iter().map(|_| self.dist.sample(&mut rng)).collect();
        let coeffs: Vec<f64> = match &self.smoothing {
            None => base,
            Some(s) => {
                let norm: f64 = s.center.iter().map(|c| c.abs()).sum();
                s.center
                    .iter()
                    .zip(&base)
                    .map(|(c, b)| c + s.sigma * norm * b)
                    .collect()
            }
        };
        SparsePolynomial::new(self.n, self.support.iter().cloned().zip(coeffs)).expect("support validated")
    }

    fn dims(&self) -> (f64, f64, f64) {
        (self.n as f64, f64::from(self.degree()), self.support.len() as f64)
    }

    fn check_local_t(t: f64) -> Result<()> {
        if !(t >= E) {
            return Err(Error::HypothesisViolated(format!("t = {t} is below e")));
        }
        Ok(())
    }

    /// Right-hand side of the local tail bound on `P(κ(𝔣, x) ≥ t)`,
    /// `√n dⁿ |M| (8Kρ/√(n+1))^{n+1} ln^{(n+1)/2}(t) / t^{n+1}`, unclamped.
    pub fn tail_bound_local_raw(&self, t: f64) -> Result<f64> {
        Self::check_local_t(t)?;
        let (n, d, m) = self.dims();
        let base = 8.0 * self.constants.k_rho() / (n + 1.0).sqrt();
        Ok(n.sqrt() * d.powf(n) * m * base.powf(n + 1.0) * t.ln().powf((n + 1.0) / 2.0) / t.powf(n + 1.0))
    }

    /// [`Self::tail_bound_local_raw`] clamped to `[0, 1]`.
    pub fn tail_bound_local(&self, t: f64) -> Result<f64> {
        Ok(self.tail_bound_local_raw(t)?.min(1.0))
    }

    /// p-tail version,
    /// `√n dⁿ |M| (8Lρ/(n+1)^{1−1/p})^{n+1} ln^{(n+1)/p}(t) / t^{n+1}`, unclamped.
    pub fn tail_bound_local_p_raw(&self, t: f64) -> Result<f64> {
        Self::check_local_t(t)?;
        let (n, d, m) = self.dims();
        let p = self.p;
        let base = 8.0 * self.constants.l_rho() / (n + 1.0).powf(1.0 - 1.0 / p);
        Ok(n.sqrt() * d.powf(n) * m * base.powf(n + 1.0) * t.ln().powf((n + 1.0) / p) / t.powf(n + 1.0))
    }

    pub fn tail_bound_local_p(&self, t: f64) -> Result<f64> {
        Ok(self.tail_bound_local_p_raw(t)?.min(1.0))
    }

    /// Tail bound on the global condition number, valid for `t > 2e`.
    pub fn tail_bound_global(&self, t: f64) -> Result<GlobalTailBound> {
        if !(t > 2.0 * E) {
            return Err(Error::HypothesisViolated(format!("t = {t} is not above 2e")));
        }
        let (n, d, m) = self.dims();
        let kr = self.constants.k_rho();
        let lead = 2.0 * n.sqrt() * d.powf(2.0 * n) * m;
        let sharp = lead * (16.0 * kr / (n + 1.0).sqrt()).powf(n + 1.0) * t.ln().powf((n + 1.0) / 2.0) / t;
        let simplified = lead * (10.0 * kr).powf(n + 1.0) / t.sqrt();
        debug_assert!(sharp <= simplified * (1.0 + 1e-12), "sharp {sharp} > simplified {simplified}");
        Ok(GlobalTailBound { sharp, simplified })
    }

    /// Expected number of final boxes of the interval subdivision.
    pub fn expected_boxes_bound(&self) -> ExpectedBoxesBound {
        let (n, d, m) = self.dims();
        let d2n = d.powf(2.0 * n);
        let general = 2.0 * n.powf(1.5) * d2n * m * (20.0 * (n + 1.0) * self.constants.k_rho()).powf(n + 1.0);
        let specialized = if self.is_exact_gaussian() {
            Some(2.0 * n.powf(1.5) * (10.0 * (n + 1.0)).powf(n + 1.0) * d2n * m.powf(n + 2.0))
        } else if self.is_exact_uniform() {
            Some(2.0 * n * 32f64.powf(n + 1.0) * d2n * m.powf(n + 2.0))
        } else {
            None
        };
        ExpectedBoxesBound { general, specialized }
    }

    /// `E_𝔣 E_x κ(𝔣, x)ⁿ ≤ 2n² dⁿ |M| (7√(n+1) Kρ)^{n+1}`.
    pub fn moment_bound_kappa_n(&self) -> f64 {
        let (n, d, m) = self.dims();
        2.0 * n * n * d.powf(n) * m * (7.0 * (n + 1.0).sqrt() * self.constants.k_rho()).powf(n + 1.0)
    }

    /// p-tail version of [`Self::moment_bound_kappa_n`].
    pub fn moment_bound_kappa_n_p(&self) -> f64 {
        let (n, d, m) = self.dims();
        let p = self.p;
        let inner = E.powf(1.0 - 1.0 / p) * 8.0 / p.powf(1.0 / p)
            * n.powf(1.0 / p - 0.5)
            * (n + 1.0).powf(1.0 / p)
            * self.constants.l_rho();
        2.0 * n * n * (n + 1.0).powf(1.0 / p - 0.5) * d.powf(n) * m * inner.powf(n + 1.0)
    }

    /// `(16 k |M| (log₂ d + |log₂(Lρ)| + 1))^k`, the artifact-constant form of
    /// the k-th moment bound on the Descartes tree size.
    pub fn descartes_moment_bound(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        let (_, d, m) = self.dims();
        let kf = f64::from(k);
        let inner = DESCARTES_MOMENT_CONSTANT * kf * m * (d.log2() + self.constants.l_rho().log2().abs() + 1.0);
        Ok(inner.powi(k as i32))
    }
}

/// `f0 + σ‖f0‖₁ 𝔣` for `𝔣` drawn from `base`.
///
/// `f0` must be supported within the support of `base`.
pub fn smoothed_model(f0: &SparsePolynomial, sigma: f64, base: &RandomModel) -> Result<RandomModel> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} must be positive")));
    }
    if base.smoothing.is_some() {
        return Err(Error::InvalidArgument("base model is already smoothed".into()));
    }
    if f0.n() != base.n {
        return Err(Error::DimensionMismatch { expected: base.n, found: f0.n() });
    }
    for t in f0.terms() {
        if t.coeff != 0.0 && !base.support.contains(&t.alpha) {
            return Err(Error::InvalidArgument(format!(
                "f0 has exponent {:?} outside the model support",
                t.alpha
            )));
        }
    }
    let center = base.support.iter().map(|a| f0.coefficient(a)).collect();
    RandomModel::build(
        base.n,
        base.support.clone(),
        base.dist,
        base.p,
        Some(Smoothing { center, sigma }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn support3() -> Vec<u32> {
        vec![0, 1, 5]
    }

    fn gauss() -> RandomModel {
        RandomModel::univariate(&support3(), CoefficientDistribution::standard_gaussian()).unwrap()
    }

    fn unif() -> RandomModel {
        RandomModel::univariate(&support3(), CoefficientDistribution::standard_uniform()).unwrap()
    }

    #[test]
    fn gaussian_tail_constant_is_sqrt_two() {
        let k = CoefficientDistribution::standard_gaussian().tail_constant(2.0);
        assert!((k - SQRT_2).abs() < 1e-12);
        let k3 = CoefficientDistribution::Gaussian { mean: 0.0, sd: 3.0 }.tail_constant(2.0);
        assert!((k3 - 3.0 * SQRT_2).abs() < 1e-12);
        assert_eq!(CoefficientDistribution::standard_gaussian().tail_constant(3.0), f64::INFINITY);
    }

    #[test]
    fn shifted_gaussian_needs_larger_constant() {
        let k = CoefficientDistribution::Gaussian { mean: 1.0, sd: 1.0 }.tail_constant(2.0);
        assert!(k > SQRT_2);
        // Check the defining inequality on a fine grid past K.
        for j in 0..2000 {
            let t = k + j as f64 * 0.01;
            assert!(gaussian_log_survival(1.0, 1.0, t) <= LN_2 - (t / k).powi(2) + 1e-9);
        }
    }

    #[test]
    fn weibull_constants() {
        let w = CoefficientDistribution::WeibullSymmetric { p: 1.0, scale: 2.0 };
        assert_eq!(w.tail_constant(1.0), 2.0);
        assert_eq!(w.tail_constant(2.0), f64::INFINITY);
        assert_eq!(w.anti_concentration(), 0.25);
        let w2 = CoefficientDistribution::WeibullSymmetric { p: 2.0, scale: 1.0 };
        // Mode of 2t e^{−t²}/2 is at 1/√2.
        let mode = 0.5f64.sqrt();
        assert!((w2.anti_concentration() - mode * (-0.5f64).exp()).abs() < 1e-15);
        let w4 = CoefficientDistribution::WeibullSymmetric { p: 4.0, scale: 1.0 };
        let k = w4.tail_constant(2.0);
        assert!(k.is_finite() && k > 0.5 && k < 1.5);
    }

    #[test]
    fn uniform_constants() {
        let c = unif().constants();
        assert_eq!(c.k, 3.0);
        assert_eq!(c.rho, 0.5);
        assert_eq!(c.k_rho(), 1.5);
        assert!(c.k_rho() <= 3.0 / 2.0);
    }

    #[test]
    fn gaussian_constants() {
        let c = gauss().constants();
        assert!((c.k - 3.0 * SQRT_2).abs() < 1e-12);
        assert!((c.rho - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        // K ρ = |M|/√π.
        assert!((c.k_rho() - 3.0 / PI.sqrt()).abs() < 1e-12);
        assert!(c.k_rho() > 0.5);
    }

    #[test]
    fn support_validation() {
        let d = CoefficientDistribution::standard_gaussian();
        assert!(RandomModel::univariate(&[0, 2], d).is_err());
        assert!(RandomModel::new(2, vec![vec![0, 0], vec![1, 0]], d, 2.0).is_err());
        let err = RandomModel::from_json_str(r#"{"n":1,"support":[[0],[1,0]],"dist":{"kind":"gaussian"}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("support[1]"));
        let err = RandomModel::from_json_str(r#"{"n":1,"support":[[0],[1]],"dist":{"kind":"uniform","lo":1,"hi":0}}"#)
            .unwrap_err();
        assert!(err.to_string().contains("dist.lo"));
    }

    #[test]
    fn spec_round_trip() {
        let m = RandomModel::from_json_str(r#"{"n":1,"support":[[0],[1],[5]],"dist":{"kind":"gaussian","sd":1.0},"p":2}"#)
            .unwrap();
        assert_eq!(m, gauss());
        let again = RandomModel::from_spec(m.to_spec()).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn sampling_is_reproducible() {
        let m = gauss();
        assert_eq!(m.sample(7), m.sample(7));
        assert_ne!(m.sample(7), m.sample(8));
        assert_ne!(m.sample_trial(7, 0), m.sample_trial(7, 1));
        assert_eq!(m.sample(7).support_size(), 3);
        let u = unif();
        for i in 0..200 {
            assert!(u.sample_trial(1, i).coefficients().iter().all(|c| c.abs() <= 1.0));
        }
    }

    #[test]
    fn smoothed_constants_and_draws() {
        let f0 = SparsePolynomial::from_dense(&[1.0, -2.0]);
        let base = gauss();
        let s = smoothed_model(&f0, 1.0, &base).unwrap();
        let c = base.constants();
        assert!((s.constants().k_rho() - (c.k + 1.0) * c.rho).abs() < 1e-12);
        let big = smoothed_model(&f0, 1e9, &base).unwrap();
        assert!((big.constants().k_rho() - c.k_rho()).abs() < 1e-8);
        let draw = s.sample_trial(3, 4);
        let raw = base.sample_trial(3, 4);
        for (alpha, b) in base.support().iter().zip(raw.coefficients()) {
            let expected = f0.coefficient(alpha) + 3.0 * b;
            assert_eq!(draw.coefficient(alpha), expected);
        }
        assert!(smoothed_model(&f0, 0.0, &base).is_err());
        let outside = SparsePolynomial::from_dense(&[0.0, 0.0, 1.0]);
        assert!(smoothed_model(&outside, 1.0, &base).is_err());
    }

    #[test]
    fn local_tail_example() {
        // Kρ = 1.5 for the uniform model with |M| = 3, d = 5.
        let raw = unif().tail_bound_local_raw(E).unwrap();
        let expected = 5.0 * 3.0 * (12.0 / SQRT_2).powi(2) / (E * E);
        assert!((raw - expected).abs() < 1e-9);
        assert!((raw - 146.2).abs() < 0.1);
        assert_eq!(unif().tail_bound_local(E).unwrap(), 1.0);
        assert!(unif().tail_bound_local(2.0).is_err());
    }

    #[test]
    fn p_two_matches_subgaussian() {
        let m = gauss();
        for t in [E, 10.0, 100.0, 1e4] {
            let a = m.tail_bound_local_raw(t).unwrap();
            let b = m.tail_bound_local_p_raw(t).unwrap();
            assert!((a - b).abs() <= 1e-12 * a);
        }
    }

    #[test]
    fn global_tail_forms() {
        let g = gauss().tail_bound_global(100.0).unwrap();
        assert!(g.sharp <= g.simplified);
        assert!(gauss().tail_bound_global(5.0).is_err());
    }

    #[test]
    fn expected_boxes_examples() {
        let g = RandomModel::univariate(&[0, 1, 2], CoefficientDistribution::standard_gaussian()).unwrap();
        assert_eq!(g.expected_boxes_bound().specialized, Some(86400.0));
        let u = RandomModel::univariate(&[0, 1, 2], CoefficientDistribution::standard_uniform()).unwrap();
        assert_eq!(u.expected_boxes_bound().specialized, Some(221184.0));
        assert!(g.expected_boxes_bound().general > 0.0);
    }

    #[test]
    fn descartes_moment_k1() {
        let m = unif();
        let expected = 16.0 * 3.0 * (5f64.log2() + 1.5f64.log2() + 1.0);
        assert!((m.descartes_moment_bound(1).unwrap() - expected).abs() < 1e-9);
        assert!(m.descartes_moment_bound(0).is_err());
    }
}
