//! Reference computations that share no code with the library's solve path.
#![allow(dead_code)]

use num_rational::Ratio;

pub type Q = Ratio<i128>;

/// Exact hitting times to `target` for the simple walk on the graph with
/// adjacency lists `adj`, by Gauss-Jordan elimination over the rationals on
/// the one-step recurrence `deg(j) H(j) - Σ_{k~j, k≠target} H(k) = deg(j)`.
pub fn exact_hitting_times(adj: &[Vec<usize>], target: usize) -> Vec<Q> {
    let n = adj.len();
    let unknowns: Vec<usize> = (0..n).filter(|&j| j != target).collect();
    let pos = |v: usize| unknowns.iter().position(|&u| u == v);
    let m = unknowns.len();
    let mut rows: Vec<Vec<Q>> = vec![vec![Q::from_integer(0); m + 1]; m];
    for (r, &j) in unknowns.iter().enumerate() {
        let deg = adj[j].len() as i128;
        rows[r][r] = Q::from_integer(deg);
        for &k in &adj[j] {
            if let Some(c) = pos(k) {
                rows[r][c] -= Q::from_integer(1);
            }
        }
        rows[r][m] = Q::from_integer(deg);
    }
    for col in 0..m {
        let piv = (col..m).find(|&r| rows[r][col] != Q::from_integer(0)).expect("nonsingular");
        rows.swap(col, piv);
        let p = rows[col][col];
        for x in rows[col].iter_mut() {
            *x /= p;
        }
        for r in 0..m {
            if r != col && rows[r][col] != Q::from_integer(0) {
                let factor = rows[r][col];
                let pivot_row = rows[col].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot_row) {
                    *x -= factor * y;
                }
            }
        }
    }
    let mut h = vec![Q::from_integer(0); n];
    for (r, &j) in unknowns.iter().enumerate() {
        h[j] = rows[r][m];
    }
    h
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// Solves `A x = f_pin`, `x_pin = 0` by LU with partial pivoting on the
/// system with row and column `pin` removed. `a` is row-major.
pub fn lu_pinned_solve(a: &[Vec<f64>], f: &[f64], pin: usize) -> Vec<f64> {
    let n = a.len();
    let idx: Vec<usize> = (0..n).filter(|&j| j != pin).collect();
    let m = idx.len();
    let mut aug: Vec<Vec<f64>> = idx
        .iter()
        .map(|&j| {
            let mut row: Vec<f64> = idx.iter().map(|&k| a[j][k]).collect();
            row.push(f[j]);
            row
        })
        .collect();
    for col in 0..m {
        let piv = (col..m)
            .max_by(|&r, &s| aug[r][col].abs().total_cmp(&aug[s][col].abs()))
            .unwrap();
        aug.swap(col, piv);
        for r in col + 1..m {
            let factor = aug[r][col] / aug[col][col];
            for c in col..=m {
                aug[r][c] -= factor * aug[col][c];
            }
        }
    }
    let mut y = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = (r + 1..m).map(|c| aug[r][c] * y[c]).sum();
        y[r] = (aug[r][m] - s) / aug[r][r];
    }
    let mut x = vec![0.0; n];
    for (r, &j) in idx.iter().enumerate() {
        x[j] = y[r];
    }
    x
}

/// Adjacency lists from 0-based undirected edges.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
