//! Seeded Monte Carlo experiments comparing the engines with the bounds of
//! [`crate::random`].
//!
//! Trial `i` of a run draws its polynomial from stream `i` of the config seed,
//! so results do not depend on the number of workers: trials are evaluated in
//! parallel, collected in trial order, and aggregated sequentially.
//!
//! Pass rules use one-sided 3σ slack on Monte Carlo estimates:
//!
//! | kind         | statistic                         | pass when                    |
//! |--------------|-----------------------------------|------------------------------|
//! | `tail`       | `P̂(κ(𝔣, x) ≥ t)` per `t`          | `P̂ − 3·SE ≤ bound`           |
//! | `pv`         | mean number of final boxes        | `mean + 3·SE ≤ bound`        |
//! | `descartes`  | `E[size^k]` per `k`               | `moment − 3·SE ≤ bound`      |
//! | `separation` | violations of both separation bounds | zero violations           |

use std::f64::consts::E;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::condition::{global_condition_adaptive, local_condition};
use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;
use crate::pv::{self, SubdivisionReport};
use crate::random::{ModelSpec, RandomModel};
use crate::univariate::{self, IsolationResult};

/// Seed used when a config does not set one.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Monte Carlo slack, in standard errors.
pub const SIGMAS: f64 = 3.0;

/// Share of non-terminating draws above which a run is inconclusive.
pub const MAX_NONTERMINATING_SHARE: f64 = 0.10;

/// Share of oracle failures above which a separation run is flagged.
pub const MAX_ORACLE_FAILURE_SHARE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Tail,
    Pv,
    Descartes,
    Separation,
}

/// An experiment: a model, a trial count, a seed and engine knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub model: ModelSpec,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Thresholds of the tail experiment, all `≥ e`. Default `{e, 10, 100}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t_grid: Vec<f64>,
    /// Evaluation point of the tail experiment. Default `0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    /// Moments of the Descartes experiment, within `{1, 2, 3}`. Default `{1, 2}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub k_list: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_depth: Option<u32>,
    /// Starting grid radius of the global condition enclosure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_eps: Option<f64>,
    /// Finest grid radius the enclosure may refine to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_grid_eps: Option<f64>,
    /// Fixed `ε` for `Δ_ε`; by default `min(1e−3, 0.5/(e d κ_upper))`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
}

fn default_trials() -> usize {
    1000
}

impl ExperimentConfig {
    pub fn new(kind: ExperimentKind, model: &RandomModel, trials: usize, seed: u64) -> Self {
        Self {
            kind,
            model: model.to_spec(),
            trials,
            seed: Some(seed),
            t_grid: Vec::new(),
            point: None,
            k_list: Vec::new(),
            max_depth: None,
            grid_eps: None,
            min_grid_eps: None,
            eps: None,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    fn t_grid(&self) -> Vec<f64> {
        if self.t_grid.is_empty() {
            vec![E, 10.0, 100.0]
        } else {
            self.t_grid.clone()
        }
    }

    fn k_list(&self) -> Vec<u32> {
        if self.k_list.is_empty() {
            vec![1, 2]
        } else {
            self.k_list.clone()
        }
    }

    fn grid(&self) -> (f64, f64) {
        (self.grid_eps.unwrap_or(1e-2), self.min_grid_eps.unwrap_or(1e-7))
    }
}

/// One CSV line: `trial,seed,stat_name,value,bound,pass`. Summary lines have
/// no trial index and are written with `-`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub trial: Option<usize>,
    pub seed: u64,
    pub stat_name: String,
    pub value: f64,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

/// An aggregate statistic with its Monte Carlo standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub stat_name: String,
    pub value: f64,
    pub std_error: Option<f64>,
    pub bound: Option<f64>,
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<Row>,
    pub summary: Vec<Summary>,
    pub violations: u64,
    /// Trials left out of the aggregates (non-termination, oracle failure).
    pub excluded: usize,
    /// Why the run is inconclusive, if it is.
    pub flag: Option<String>,
    pub passed: bool,
    /// Not part of the CSV, which must be reproducible byte for byte.
    pub wall_clock_secs: f64,
}

impl ExperimentReport {
    fn new(cfg: &ExperimentConfig) -> Self {
        Self {
            kind: cfg.kind,
            seed: cfg.seed(),
            trials: cfg.trials,
            rows: Vec::new(),
            summary: Vec::new(),
            violations: 0,
            excluded: 0,
            flag: None,
            passed: true,
            wall_clock_secs: 0.0,
        }
    }

    fn row(&mut self, trial: usize, stat: &str, value: f64, bound: Option<f64>, pass: Option<bool>) {
        self.rows.push(Row {
            trial: Some(trial),
            seed: self.seed,
            stat_name: stat.to_string(),
            value,
            bound,
            pass,
        });
    }

    fn summarize(&mut self, stat: String, value: f64, std_error: Option<f64>, bound: Option<f64>, pass: Option<bool>) {
        if pass == Some(false) {
            self.passed = false;
        }
        self.summary.push(Summary { stat_name: stat, value, std_error, bound, pass });
    }

    fn flag_if(&mut self, share: f64, limit: f64, what: &str) {
        if share > limit {
            self.flag = Some(format!("inconclusive: {:.1}% of trials {what}", 100.0 * share));
            self.passed = false;
        }
    }

    pub fn summary_value(&self, stat: &str) -> Option<&Summary> {
        self.summary.iter().find(|s| s.stat_name == stat)
    }

    /// CSV text with header `trial,seed,stat_name,value,bound,pass`.
    ///
    /// Per-trial rows come first, then one row per summary statistic and one
    /// `<stat>_se` row per standard error. Empty cells mean "not applicable".
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,seed,stat_name,value,bound,pass\n");
        let opt = |v: Option<f64>| v.map(|b| b.to_string()).unwrap_or_default();
        let flag = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
        for r in &self.rows {
            let trial = r.trial.map(|t| t.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(out, "{trial},{},{},{},{},{}", r.seed, r.stat_name, r.value, opt(r.bound), flag(r.pass));
        }
        for s in &self.summary {
            let _ = writeln!(out, "-,{},{},{},{},{}", self.seed, s.stat_name, s.value, opt(s.bound), flag(s.pass));
            if let Some(se) = s.std_error {
                let _ = writeln!(out, "-,{},{}_se,{},,", self.seed, s.stat_name, se);
            }
        }
        let _ = writeln!(out, "-,{},violations,{},0,{}", self.seed, self.violations, self.violations == 0);
        let _ = writeln!(out, "-,{},excluded,{},,", self.seed, self.excluded);
        out
    }
}

/// Writes [`ExperimentReport::to_csv`] to `path`.
pub fn emit_csv(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, report.to_csv())?;
    Ok(())
}

/// Writes the SVG picture of a planar subdivision to `path`.
pub fn emit_svg(subdivision: &SubdivisionReport, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, pv::render_svg(subdivision)?)?;
    Ok(())
}

/// Evaluates `trial(i)` for `i < trials` on `workers` threads, in trial order.
fn run_trials<T, F>(trials: usize, workers: usize, trial: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if workers <= 1 {
        return (0..trials).map(&trial).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| (0..trials).into_par_iter().map(&trial).collect())
}

/// Mean and standard error of the mean.
fn mean_se(values: &[f64]) -> (f64, f64) {
    let m = values.len() as f64;
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / m;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn check_common(cfg: &ExperimentConfig) -> Result<RandomModel> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    RandomModel::from_spec(cfg.model.clone())
}

fn require_univariate(model: &RandomModel, kind: &str, max_d: u32) -> Result<()> {
    if model.n() != 1 {
        return Err(Error::InvalidArgument(format!("{kind} experiments need n = 1")));
    }
    if model.degree() > max_d {
        return Err(Error::InvalidArgument(format!(
            "{kind} experiments need d ≤ {max_d}, model has d = {}",
            model.degree()
        )));
    }
    Ok(())
}

/// Runs the experiment selected by `cfg.kind`.
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let start = Instant::now();
    let mut report = match cfg.kind {
        ExperimentKind::Tail => run_tail_experiment(cfg, workers),
        ExperimentKind::Pv => run_pv_experiment(cfg, workers),
        ExperimentKind::Descartes => run_descartes_experiment(cfg, workers),
        ExperimentKind::Separation => run_separation_experiment(cfg, workers),
    }?;
    report.wall_clock_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Empirical survival of `κ(𝔣, x)` against the local tail bound.
pub fn run_tail_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let model = check_common(cfg)?;
    let grid = cfg.t_grid();
    if let Some(&t) = grid.iter().find(|&&t| !(t >= E)) {
        return Err(Error::InvalidArgument(format!("t_grid contains {t} < e")));
    }
    let x = cfg.point.clone().unwrap_or_else(|| vec![0.0; model.n()]);
    if x.len() != model.n() || x.iter().any(|v| !(v.abs() <= 1.0)) {
        return Err(Error::InvalidArgument("point must lie in the cube I^n".into()));
    }
    let seed = cfg.seed();
    let kappas = run_trials(cfg.trials, workers, |i| {
        let f = model.sample_trial(seed, i as u64);
        Ok(local_condition(&f, &x)?.value())
    })?;

    let mut report = ExperimentReport::new(cfg);
    for (i, &k) in kappas.iter().enumerate() {
        report.row(i, "kappa", k, None, None);
    }
    let n = kappas.len() as f64;
    for &t in &grid {
        let hits = kappas.iter().filter(|&&k| k >= t).count() as f64;
        let p_hat = hits / n;
        let se = (p_hat * (1.0 - p_hat) / n).sqrt();
        let bound = tail_bound(&model, t)?;
        let pass = p_hat - SIGMAS * se <= bound;
        report.summarize(format!("survival[t={t}]"), p_hat, Some(se), Some(bound), Some(pass));
    }
    Ok(report)
}

/// The smallest applicable local tail bound, clamped to 1.
fn tail_bound(model: &RandomModel, t: f64) -> Result<f64> {
    let c = model.constants();
    let mut bound: f64 = 1.0;
    if c.k.is_finite() {
        bound = bound.min(model.tail_bound_local(t)?);
    }
    if c.l.is_finite() {
        bound = bound.min(model.tail_bound_local_p(t)?);
    }
    Ok(bound)
}

/// Mean number of final subdivision boxes against the expected-box bound.
pub fn run_pv_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let model = check_common(cfg)?;
    if model.n() > 2 || model.degree() > 16 {
        return Err(Error::InvalidArgument("pv experiments need n ≤ 2 and d ≤ 16".into()));
    }
    let max_depth = cfg.max_depth.unwrap_or(pv::DEFAULT_MAX_DEPTH);
    let seed = cfg.seed();
    let runs = run_trials(cfg.trials, workers, |i| {
        let f = model.sample_trial(seed, i as u64);
        let r = pv::pv_subdivide(&f, max_depth)?;
        Ok((r.box_count(), r.terminated))
    })?;

    let mut report = ExperimentReport::new(cfg);
    let bound = model.expected_boxes_bound().best();
    let mut counts = Vec::new();
    for (i, &(boxes, terminated)) in runs.iter().enumerate() {
        report.row(i, "boxes", boxes as f64, None, None);
        report.row(i, "terminated", f64::from(u8::from(terminated)), None, None);
        if terminated {
            counts.push(boxes as f64);
        } else {
            report.excluded += 1;
        }
    }
    let (mean, se) = mean_se(&counts);
    let pass = mean + SIGMAS * se <= bound;
    report.summarize("mean_boxes".into(), mean, Some(se), Some(bound), Some(pass));
    report.flag_if(report.excluded as f64 / cfg.trials as f64, MAX_NONTERMINATING_SHARE, "did not terminate");
    Ok(report)
}

/// Global condition enclosure used by the univariate experiments.
fn kappa_upper(f: &SparsePolynomial, cfg: &ExperimentConfig) -> Result<f64> {
    let (start, min) = cfg.grid();
    Ok(global_condition_adaptive(f, start, min, 2.0)?.upper)
}

/// Whether the isolation and the oracle's real roots correspond one to one,
/// in order, up to `tol`.
pub fn matches_oracle(iso: &IsolationResult, roots: &[f64], tol: f64) -> bool {
    let mut cells: Vec<(f64, f64)> = iso.intervals.clone();
    cells.extend(iso.exact_roots.iter().map(|&r| (r, r)));
    cells.sort_by(|a, b| a.0.total_cmp(&b.0));
    cells.len() == roots.len()
        && cells
            .iter()
            .zip(roots)
            .all(|(&(lo, hi), &r)| lo - tol <= r && r <= hi + tol)
}

struct DescartesTrial {
    size: usize,
    width: usize,
    terminated: bool,
    tree_bound: f64,
    oracle_match: Option<bool>,
}

/// The Mignotte-like four-nomial `X^16 − 2(4X − 1)²`, with two roots near 1/4
/// at distance about `2^{−17}`.
pub fn mignotte_instance() -> SparsePolynomial {
    SparsePolynomial::from_dense(&{
        let mut c = vec![0.0; 17];
        c[0] = -2.0;
        c[1] = 16.0;
        c[2] = -32.0;
        c[16] = 1.0;
        c
    })
}

/// Moments of the Descartes tree size, plus the per-draw checks: oracle
/// agreement, per-level width `≤ 4|M|` and the tree-size bound.
pub fn run_descartes_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let model = check_common(cfg)?;
    require_univariate(&model, "descartes", 512)?;
    let ks = cfg.k_list();
    if ks.iter().any(|k| !(1..=3).contains(k)) {
        return Err(Error::InvalidArgument("k_list must lie within {1, 2, 3}".into()));
    }
    let mut report = ExperimentReport::new(cfg);
    if model.constants().rho > 1.0 {
        report.flag = Some("skipped: anti-concentration constant above 1".into());
        report.passed = false;
        return Ok(report);
    }
    let max_depth = cfg.max_depth.unwrap_or(univariate::DEFAULT_MAX_DEPTH);
    let width_cap = 4 * model.support_size();
    let seed = cfg.seed();
    let runs = run_trials(cfg.trials, workers, |i| {
        let f = model.sample_trial(seed, i as u64);
        let iso = univariate::descartes_isolate(&f, max_depth)?;
        let kappa = kappa_upper(&f, cfg)?;
        let oracle_match = match univariate::separation_oracle(&f, 0.0) {
            Ok(sep) => Some(matches_oracle(&iso, &sep.real_roots, 1e-9)),
            Err(Error::OracleFailed(_)) => None,
            Err(e) => return Err(e),
        };
        Ok(DescartesTrial {
            size: iso.tree.node_count,
            width: iso.tree.max_width(),
            terminated: iso.terminated,
            tree_bound: univariate::tree_size_bound(&f, kappa),
            oracle_match,
        })
    })?;

    let mut sizes = Vec::new();
    for (i, t) in runs.iter().enumerate() {
        let size_ok = t.size as f64 <= t.tree_bound;
        let width_ok = t.width <= width_cap;
        report.row(i, "tree_size", t.size as f64, Some(t.tree_bound), Some(size_ok));
        report.row(i, "max_width", t.width as f64, Some(width_cap as f64), Some(width_ok));
        if let Some(m) = t.oracle_match {
            report.row(i, "oracle_match", f64::from(u8::from(m)), None, Some(m));
        }
        if !t.terminated {
            report.excluded += 1;
            continue;
        }
        report.violations += u64::from(!size_ok) + u64::from(!width_ok) + u64::from(t.oracle_match == Some(false));
        sizes.push(t.size as f64);
    }
    for &k in &ks {
        let powered: Vec<f64> = sizes.iter().map(|s| s.powi(k as i32)).collect();
        let (moment, se) = mean_se(&powered);
        let bound = model.descartes_moment_bound(k)?;
        let pass = moment - SIGMAS * se <= bound;
        report.summarize(format!("moment[k={k}]"), moment, Some(se), Some(bound), Some(pass));
    }
    let sidebar = univariate::descartes_isolate(&mignotte_instance(), univariate::MAX_DEPTH_LIMIT)?;
    report.summarize("mignotte_tree_size".into(), sidebar.tree.node_count as f64, None, None, None);
    report.summarize("mignotte_depth".into(), f64::from(sidebar.tree.depth), None, None, None);
    if report.violations > 0 {
        report.passed = false;
    }
    report.flag_if(report.excluded as f64 / cfg.trials as f64, MAX_NONTERMINATING_SHARE, "hit the depth guard");
    Ok(report)
}

struct SeparationTrial {
    kappa: f64,
    delta: f64,
    delta_eps: f64,
    sep_bound: f64,
    eps_bound: f64,
}

/// Counts violations of `Δ ≥ 2√2/(d√κ)` and `Δ_ε ≥ 1/(12dκ)` with `κ` the
/// certified upper enclosure of the global condition number.
pub fn run_separation_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentReport> {
    let model = check_common(cfg)?;
    require_univariate(&model, "separation", 64)?;
    let d = f64::from(model.degree());
    let seed = cfg.seed();
    let runs = run_trials(cfg.trials, workers, |i| {
        let f = model.sample_trial(seed, i as u64);
        let kappa = kappa_upper(&f, cfg)?;
        let eps = cfg
            .eps
            .unwrap_or_else(|| (1e-3f64).min(0.5 / (E * d * kappa)))
            .max(0.0);
        let eps_bound = if kappa.is_finite() {
            univariate::eps_separation_lower_bound(&f, kappa, eps)?
        } else {
            0.0
        };
        match univariate::separation_oracle(&f, eps) {
            Ok(sep) => Ok(Some(SeparationTrial {
                kappa,
                delta: sep.delta,
                delta_eps: sep.delta_eps,
                sep_bound: univariate::separation_lower_bound(&f, kappa),
                eps_bound,
            })),
            Err(Error::OracleFailed(_)) => Ok(None),
            Err(e) => Err(e),
        }
    })?;

    let mut report = ExperimentReport::new(cfg);
    let (mut sep_viol, mut eps_viol) = (0u64, 0u64);
    for (i, t) in runs.iter().enumerate() {
        let Some(t) = t else {
            report.excluded += 1;
            continue;
        };
        let sep_ok = t.delta >= t.sep_bound;
        let eps_ok = t.delta_eps >= t.eps_bound;
        report.row(i, "kappa_upper", t.kappa, None, None);
        report.row(i, "delta", t.delta, Some(t.sep_bound), Some(sep_ok));
        report.row(i, "delta_eps", t.delta_eps, Some(t.eps_bound), Some(eps_ok));
        sep_viol += u64::from(!sep_ok);
        eps_viol += u64::from(!eps_ok);
    }
    report.violations = sep_viol + eps_viol;
    report.summarize("separation_violations".into(), sep_viol as f64, None, Some(0.0), Some(sep_viol == 0));
    report.summarize("eps_separation_violations".into(), eps_viol as f64, None, Some(0.0), Some(eps_viol == 0));
    report.flag_if(report.excluded as f64 / cfg.trials as f64, MAX_ORACLE_FAILURE_SHARE, "failed in the root oracle");
    Ok(report)
}
