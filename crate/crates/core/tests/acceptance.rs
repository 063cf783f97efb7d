//! Acceptance suite. Prints one `PASS`/`FAIL` line per criterion and exits
//! non-zero if any criterion fails. Run alone with
//! `cargo test --release --test acceptance`.

mod common;

use std::time::{Duration, Instant};

use common::{dist1_dual, random_point, random_poly, rng, sup_dist};
use cubecond::condition::{dist1_to_sigma_x, gamma_bound, gamma_exact_univariate, local_condition};
use cubecond::experiments::{run_experiment, ExperimentConfig, ExperimentKind, ExperimentReport};
use cubecond::interval::{interval_f, interval_grad_norm, standard_subdivision};
use cubecond::pv::{amortization_bound, pv_subdivide, verify_output_boxes, DEFAULT_MAX_DEPTH};
use cubecond::{BoxN, CoefficientDistribution, RandomModel, SparsePolynomial};
use rand::Rng;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

fn draw(r: &mut impl Rng, n_max: usize, d_max: u32, m_max: usize) -> SparsePolynomial {
    let n = r.random_range(1..=n_max);
    let d = r.random_range(1..=d_max);
    let m = r.random_range(n + 1..=m_max);
    random_poly(r, n, d, m)
}

fn norms_and_lipschitz() -> Outcome {
    let mut r = rng(SEED + 1);
    let mut bad = [0usize; 3];
    for _ in 0..10_000 {
        let f = draw(&mut r, 3, 16, 16);
        let (x, y) = (random_point(&mut r, f.n()), random_point(&mut r, f.n()));
        let nrm = f.norm1();
        let (lf, ldf) = f.lipschitz_constants();
        let dist = sup_dist(&x, &y);
        let slack = |rhs: f64| rhs + 1e-9 * rhs.max(nrm);
        bad[0] += usize::from(f.evaluate(&x).abs() > slack(nrm));
        bad[1] += usize::from((f.evaluate(&x) - f.evaluate(&y)).abs() > slack(lf * dist));
        let gdiff: f64 = f.gradient(&x).entries().iter().zip(f.gradient(&y).entries()).map(|(a, b)| (a - b).abs()).sum();
        bad[2] += usize::from(gdiff > slack(ldf * dist));
    }
    outcome(bad == [0; 3], format!("violations |f| ≤ ‖f‖₁: {}, value Lipschitz: {}, gradient Lipschitz: {}", bad[0], bad[1], bad[2]))
}

fn condition_suite() -> Outcome {
    let mut r = rng(SEED + 2);
    let (mut below_one, mut lip1, mut lip2) = (0, 0, 0);
    for _ in 0..10_000 {
        let f = draw(&mut r, 3, 16, 16);
        let x = random_point(&mut r, f.n());
        let y = random_point(&mut r, f.n());
        let k = local_condition(&f, &x).unwrap().value();
        below_one += usize::from(k < 1.0);
        let d = f64::from(f.degree());
        let inv = |g: &SparsePolynomial, p: &[f64]| 1.0 / local_condition(g, p).unwrap().value();
        lip2 += usize::from((inv(&f, &x) - inv(&f, &y)).abs() > d * sup_dist(&x, &y) * (1.0 + 1e-9) + 1e-12);
        let coeffs: Vec<f64> = f.coefficients().iter().map(|c| c + r.random_range(-0.5..0.5)).collect();
        let g = f.with_coefficients(&coeffs).unwrap();
        if g.norm1() > 0.0 {
            let lhs = (f.norm1() * inv(&f, &x) - g.norm1() * inv(&g, &x)).abs();
            let rhs: f64 = f.coefficients().iter().zip(&coeffs).map(|(a, b)| (a - b).abs()).sum();
            lip1 += usize::from(lhs > rhs * (1.0 + 1e-9) + 1e-12);
        }
    }

    let (mut lp_mismatch, mut lower, mut upper, mut upper_2d) = (0, 0, 0, 0);
    for _ in 0..1000 {
        let f = draw(&mut r, 2, 6, 8);
        let x = random_point(&mut r, f.n());
        let dist = dist1_to_sigma_x(&f, &x).unwrap();
        let oracle = dist1_dual(&f, &x);
        lp_mismatch += usize::from((dist - oracle).abs() > 1e-8 * oracle.max(1.0));
        let k = local_condition(&f, &x).unwrap().value();
        let d = f64::from(f.degree());
        let ratio = f.norm1() / oracle;
        lower += usize::from(ratio > k * (1.0 + 1e-9));
        upper += usize::from(k > (1.0 + d) * ratio * (1.0 + 1e-9));
        upper_2d += usize::from(k > (1.0 + 2.0 * d) * ratio * (1.0 + 1e-9));
    }

    let (mut gamma_checked, mut gamma_bad) = (0, 0);
    for _ in 0..10_000 {
        let d = r.random_range(2..=16);
        let m = r.random_range(3..=16);
        let f = random_poly(&mut r, 1, d, m);
        let x = r.random_range(-1.0..=1.0);
        if let Ok(bound) = gamma_bound(&f, &[x]) {
            gamma_checked += 1;
            gamma_bad += usize::from(gamma_exact_univariate(&f, x).unwrap() > bound * (1.0 + 1e-9));
        }
    }

    let pass = below_one + lip1 + lip2 + lp_mismatch + lower + upper + gamma_bad == 0;
    outcome(
        pass,
        format!(
            "κ < 1: {below_one}, 1st Lipschitz: {lip1}, 2nd Lipschitz: {lip2}, primal/dual LP mismatch: {lp_mismatch}, \
             sandwich lower: {lower}, sandwich upper (1+d): {upper}/1000 [with 1+2d: {upper_2d}], \
             γ: {gamma_bad}/{gamma_checked}"
        ),
    )
}

fn interval_soundness() -> Outcome {
    let mut r = rng(SEED + 3);
    let mut bad = 0usize;
    for _ in 0..1000 {
        let f = draw(&mut r, 3, 16, 16);
        let mut b = BoxN::unit(f.n());
        for _ in 0..r.random_range(0..=8) {
            let kids = standard_subdivision(&b);
            b = kids[r.random_range(0..kids.len())].clone();
        }
        let fi = interval_f(&f, &b);
        let gi = interval_grad_norm(&f, &b);
        let slack = 1e-12 * f.norm1() * f64::from(f.degree()).powi(2);
        let sides = b.sides();
        for _ in 0..1000 {
            let x: Vec<f64> = sides.iter().map(|s| r.random_range(s.lo..=s.hi)).collect();
            let v = f.evaluate(&x);
            let g = f.gradient(&x).norm1();
            bad += usize::from(v < fi.lo - slack || v > fi.hi + slack);
            bad += usize::from(g < gi.lo - slack || g > gi.hi + slack);
        }
    }
    outcome(bad == 0, format!("{bad} enclosure violations over 10⁶ samples"))
}

fn pv_regressions() -> Outcome {
    let x = pv_subdivide(&SparsePolynomial::from_dense(&[0.0, 1.0]), DEFAULT_MAX_DEPTH).unwrap();
    let line = SparsePolynomial::new(2, vec![(vec![1, 0], 1.0), (vec![0, 1], 1.0)]).unwrap();
    let l = pv_subdivide(&line, DEFAULT_MAX_DEPTH).unwrap();
    let sq = pv_subdivide(&SparsePolynomial::from_dense(&[0.25, -1.0, 1.0]), 12).unwrap();
    let mut r = rng(SEED + 4);
    let (mut runs, mut unsound, mut skipped) = (0, 0, 0);
    while runs < 100 {
        let f = draw(&mut r, 2, 6, 6);
        let rep = pv_subdivide(&f, 16).unwrap();
        if !rep.terminated {
            skipped += 1;
            continue;
        }
        runs += 1;
        unsound += usize::from(!verify_output_boxes(&f, &rep, 32));
    }
    let pass = x.box_count() == 2 && l.box_count() == 16 && !sq.terminated && unsound == 0;
    outcome(
        pass,
        format!(
            "X: {} boxes, X₁+X₂: {} boxes, (X−1/2)² terminated: {}, unsound: {unsound}/100 (non-terminating draws skipped: {skipped})",
            x.box_count(),
            l.box_count(),
            sq.terminated
        ),
    )
}

fn amortization() -> Outcome {
    let mut r = rng(SEED + 5);
    let (mut runs, mut bad, mut worst) = (0, 0, 0.0f64);
    while runs < 100 {
        let f = draw(&mut r, 2, 8, 8);
        let rep = pv_subdivide(&f, 16).unwrap();
        if !rep.terminated {
            continue;
        }
        runs += 1;
        let est = amortization_bound(&f, 20_000, SEED + runs as u64).unwrap();
        let ratio = rep.box_count() as f64 / est.upper(3.0);
        worst = worst.max(ratio);
        bad += usize::from(ratio > 1.0);
    }
    outcome(bad == 0, format!("{bad}/100 draws above the 3σ estimate; largest count/estimate {worst:.3e}"))
}

/// Univariate supports of the separation and Descartes suites.
fn univariate_suite() -> Vec<Vec<u32>> {
    vec![
        (0..8).collect(),
        vec![0, 1, 8, 16, 32, 64],
        vec![0, 1, 3, 10, 25, 63],
        vec![0, 1, 64],
    ]
}

fn suite_dists() -> [(&'static str, CoefficientDistribution); 2] {
    [
        ("gaussian", CoefficientDistribution::standard_gaussian()),
        ("uniform", CoefficientDistribution::standard_uniform()),
    ]
}

fn run_suite(kind: ExperimentKind) -> Vec<(String, ExperimentReport)> {
    let mut out = Vec::new();
    for (name, dist) in suite_dists() {
        for (i, support) in univariate_suite().iter().enumerate() {
            let m = RandomModel::univariate(support, dist).unwrap();
            let cfg = ExperimentConfig::new(kind, &m, 250, SEED + 100 + i as u64);
            out.push((format!("{name}{support:?}"), run_experiment(&cfg, workers()).unwrap()));
        }
    }
    out
}

fn separation() -> Outcome {
    let reports = run_suite(ExperimentKind::Separation);
    let violations: u64 = reports.iter().map(|(_, r)| r.violations).sum();
    let excluded: usize = reports.iter().map(|(_, r)| r.excluded).sum();
    let flagged: Vec<&str> = reports.iter().filter(|(_, r)| r.flag.is_some()).map(|(n, _)| n.as_str()).collect();
    outcome(
        violations == 0 && flagged.is_empty(),
        format!("{violations} violations over 2000 draws, {excluded} oracle failures, flagged: {flagged:?}"),
    )
}

fn descartes() -> Outcome {
    let reports = run_suite(ExperimentKind::Descartes);
    let mut failed = Vec::new();
    let mut moments = Vec::new();
    for (name, r) in &reports {
        if !r.passed {
            failed.push(format!("{name} ({} violations, flag {:?})", r.violations, r.flag));
        }
        for k in [1, 2] {
            if let Some(s) = r.summary_value(&format!("moment[k={k}]")) {
                moments.push(s.value / s.bound.unwrap_or(f64::INFINITY));
            }
        }
    }
    let violations: u64 = reports.iter().map(|(_, r)| r.violations).sum();
    let worst = moments.iter().copied().fold(0.0, f64::max);
    outcome(
        failed.is_empty(),
        format!("{violations} per-draw violations over 2000 draws, largest moment/bound {worst:.3e}, failing: {failed:?}"),
    )
}

fn tail() -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, dist) in suite_dists() {
        let m = RandomModel::univariate(&[0, 1, 5], dist).unwrap();
        let cfg = ExperimentConfig::new(ExperimentKind::Tail, &m, 10_000, SEED + 200);
        let r = run_experiment(&cfg, workers()).unwrap();
        pass &= r.passed;
        let cells: Vec<String> = r
            .summary
            .iter()
            .filter(|s| s.stat_name.starts_with("survival"))
            .map(|s| format!("{:.4}≤{:.4}", s.value, s.bound.unwrap_or(f64::NAN)))
            .collect();
        parts.push(format!("{name}: {}", cells.join(" ")));
    }
    outcome(pass, parts.join("; "))
}

fn expected_boxes() -> Outcome {
    let m = RandomModel::univariate(&[0, 1, 2], CoefficientDistribution::standard_gaussian()).unwrap();
    let cfg = ExperimentConfig::new(ExperimentKind::Pv, &m, 1000, SEED + 300);
    let r = run_experiment(&cfg, workers()).unwrap();
    let s = r.summary_value("mean_boxes").expect("mean row");
    let se = s.std_error.unwrap_or(0.0);
    let bound = s.bound.unwrap_or(f64::NAN);
    outcome(
        r.passed && bound == 86_400.0 && s.value + 3.0 * se <= bound,
        format!("mean {:.3} + 3·{:.3} ≤ {bound}, {} non-terminating excluded", s.value, se, r.excluded),
    )
}

fn model_constants() -> Outcome {
    let mut models: Vec<(String, RandomModel)> = Vec::new();
    for (name, dist) in suite_dists() {
        for support in univariate_suite().into_iter().chain([vec![0, 1, 5], vec![0, 1, 2]]) {
            models.push((format!("{name}{support:?}"), RandomModel::univariate(&support, dist).unwrap()));
        }
    }
    let mut lower_bad = Vec::new();
    let mut upper_bad = Vec::new();
    for (name, m) in &models {
        let c = m.constants();
        let n = m.n() as f64;
        if !(c.k_rho() > (n + 1.0) / 4.0 && c.l_rho() > 9.0 * (n + 1.0) / 50.0) {
            lower_bad.push(name.clone());
        }
        if (m.is_exact_gaussian() || m.is_exact_uniform()) && c.k_rho() > m.support_size() as f64 / 2.0 {
            upper_bad.push(format!("{name}: Kρ = {:.4} > {}", c.k_rho(), m.support_size() as f64 / 2.0));
        }
    }
    outcome(
        lower_bad.is_empty() && upper_bad.is_empty(),
        format!(
            "{} models; lower bounds violated by {lower_bad:?}; Kρ ≤ |M|/2 violated by {} models {upper_bad:?}",
            models.len(),
            upper_bad.len()
        ),
    )
}

fn main() {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check, Option<Duration>); 10] = [
        ("norm and Lipschitz estimates", norms_and_lipschitz, Some(Duration::from_secs(10))),
        ("condition number properties", condition_suite, None),
        ("interval soundness", interval_soundness, None),
        ("subdivision regressions", pv_regressions, Some(Duration::from_secs(30))),
        ("amortized box count", amortization, None),
        ("root separation bounds", separation, Some(Duration::from_secs(300))),
        ("Descartes tree", descartes, None),
        ("local tail bound", tail, Some(Duration::from_secs(60))),
        ("expected box count", expected_boxes, None),
        ("model constants", model_constants, None),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut o = check();
        let took = start.elapsed();
        if let Some(limit) = limit {
            if took > *limit {
                o.pass = false;
                o.detail.push_str(&format!("; over the {}s budget", limit.as_secs()));
            }
        }
        failures += usize::from(!o.pass);
        println!(
            "{} {:>2} {name} ({:.1}s): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64(),
            o.detail
        );
    }
    println!("acceptance: {} of 10 criteria pass", 10 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
