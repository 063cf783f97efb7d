//! Small dense helpers for the (n+1)-row systems in [`crate::condition`].

/// Solves `a x = b` for square `a` (row-major) by Gaussian elimination with
/// partial pivoting. Returns `None` when a pivot falls below `tol` times the
/// largest absolute entry of `a`.
pub(crate) fn solve_square(a: &[Vec<f64>], b: &[f64], tol: f64) -> Option<Vec<f64>> {
    let m = b.len();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut aug: Vec<Vec<f64>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    for col in 0..m {
        let piv = (col..m).max_by(|&i, &j| aug[i][col].abs().total_cmp(&aug[j][col].abs()))?;
        if aug[piv][col].abs() <= tol * scale {
            return None;
        }
        aug.swap(col, piv);
        for r in col + 1..m {
            let factor = aug[r][col] / aug[col][col];
            if factor != 0.0 {
                for c in col..=m {
                    aug[r][c] -= factor * aug[col][c];
                }
            }
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = (r + 1..m).map(|c| aug[r][c] * x[c]).sum();
        x[r] = (aug[r][m] - s) / aug[r][r];
    }
    Some(x)
}

/// Indices of a maximal set of linearly independent rows (greedy, in order),
/// using modified Gram-Schmidt on the rows.
pub(crate) fn independent_rows(a: &[Vec<f64>], tol: f64) -> Vec<usize> {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut picked = Vec::new();
    for (idx, row) in a.iter().enumerate() {
        let norm0 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm0 == 0.0 {
            continue;
        }
        let mut r = row.clone();
        for b in &basis {
            let proj: f64 = r.iter().zip(b).map(|(x, y)| x * y).sum();
            for (rv, bv) in r.iter_mut().zip(b) {
                *rv -= proj * bv;
            }
        }
        let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > tol * norm0 {
            basis.push(r.iter().map(|v| v / norm).collect());
            picked.push(idx);
        }
    }
    picked
}
