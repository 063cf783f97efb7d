//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use cubecond::SparsePolynomial;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random sparse polynomial with `n` variables, total degree at most `d`
/// and up to `m` distinct exponents, always containing `0` and every `e_i`.
pub fn random_poly(rng: &mut impl Rng, n: usize, d: u32, m: usize) -> SparsePolynomial {
    let mut support: Vec<Vec<u32>> = vec![vec![0; n]];
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        support.push(e);
    }
    let mut attempts = 0;
    while support.len() < m && attempts < 200 {
        attempts += 1;
        let total = rng.random_range(0..=d);
        let mut alpha = vec![0u32; n];
        for _ in 0..total {
            alpha[rng.random_range(0..n)] += 1;
        }
        if !support.contains(&alpha) {
            support.push(alpha);
        }
    }
    let terms = support
        .into_iter()
        .map(|a| (a, rng.random_range(-1.0..1.0)))
        .collect::<Vec<_>>();
    SparsePolynomial::new(n, terms).expect("valid polynomial")
}

pub fn random_point(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect()
}

pub fn sup_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// Evaluates `f` term by term with powers computed by repeated
/// multiplication, independently of the library's evaluator.
pub fn naive_eval(f: &SparsePolynomial, x: &[f64]) -> f64 {
    f.terms()
        .iter()
        .map(|t| {
            let mut v = t.coeff;
            for (xi, &a) in x.iter().zip(&t.alpha) {
                for _ in 0..a {
                    v *= xi;
                }
            }
            v
        })
        .sum()
}

/// Central finite-difference gradient.
pub fn fd_gradient(f: &SparsePolynomial, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut p = x.to_vec();
            let mut q = x.to_vec();
            p[i] += h;
            q[i] -= h;
            (naive_eval(f, &p) - naive_eval(f, &q)) / (2.0 * h)
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` when singular.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let k = b.len();
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..k {
            let factor = a[r][col] / a[col][col];
            for c in col..k {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for r in (0..k).rev() {
        let s: f64 = (r + 1..k).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// All `k`-subsets of `0..m`.
pub fn subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// `dist₁(f, Σ_x)` through the dual program
/// `max bᵀy  s.t.  |a_jᵀy| ≤ 1` for every column `a_j` of the evaluation
/// and gradient map, solved by enumerating the vertices of the feasible
/// polytope. `b = (f(x), d_x f)`.
pub fn dist1_dual(f: &SparsePolynomial, x: &[f64]) -> f64 {
    let n = f.n();
    let cols: Vec<Vec<f64>> = f
        .terms()
        .iter()
        .map(|t| {
            let mono = SparsePolynomial::new(n, vec![(t.alpha.clone(), 1.0)]).unwrap();
            let mut col = vec![naive_eval(&mono, x)];
            col.extend(monomial_gradient(&t.alpha, x));
            col
        })
        .collect();
    let mut b = vec![naive_eval(f, x)];
    b.extend(
        (0..n).map(|i| f.terms().iter().zip(&cols).map(|(t, c)| t.coeff * c[i + 1]).sum::<f64>()),
    );

    // Hyperplanes a_jᵀy = ±1.
    let planes: Vec<(Vec<f64>, f64)> = cols
        .iter()
        .flat_map(|c| [(c.clone(), 1.0), (c.clone(), -1.0)])
        .collect();
    let mut best = f64::NEG_INFINITY;
    for choice in subsets(planes.len(), n + 1) {
        let a: Vec<Vec<f64>> = choice.iter().map(|&i| planes[i].0.clone()).collect();
        let rhs: Vec<f64> = choice.iter().map(|&i| planes[i].1).collect();
        let Some(y) = solve(a, rhs) else { continue };
        let feasible = cols
            .iter()
            .all(|c| c.iter().zip(&y).map(|(p, q)| p * q).sum::<f64>().abs() <= 1.0 + 1e-9);
        if feasible {
            best = best.max(b.iter().zip(&y).map(|(p, q)| p * q).sum());
        }
    }
    best
}

/// Exact gradient of the monomial `x^alpha`.
fn monomial_gradient(alpha: &[u32], x: &[f64]) -> Vec<f64> {
    (0..alpha.len())
        .map(|i| {
            if alpha[i] == 0 {
                return 0.0;
            }
            let mut v = f64::from(alpha[i]);
            for (j, (&a, xj)) in alpha.iter().zip(x).enumerate() {
                let e = if j == i { a - 1 } else { a };
                for _ in 0..e {
                    v *= xj;
                }
            }
            v
        })
        .collect()
}

/// Dense coefficients of `f(a + b t)` for univariate dense `c`, in f64.
pub fn compose_affine(c: &[f64], a: f64, b: f64) -> Vec<f64> {
    let d = c.len() - 1;
    let mut out = vec![0.0; d + 1];
    // Horner in polynomial arithmetic: out = out·(a + b t) + c_i.
    for &ci in c.iter().rev() {
        let mut next = vec![0.0; d + 1];
        for k in 0..=d {
            next[k] += a * out[k];
            if k + 1 <= d {
                next[k + 1] += b * out[k];
            }
        }
        next[0] += ci;
        out = next;
    }
    out
}
