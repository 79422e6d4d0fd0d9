//! Independent brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use nalgebra::DMatrix;

/// Sup-norm minimum over all nonzero integer vectors with `|c_i| <= bound`.
pub fn brute_force_lambda1(matrix: &[f64], k: usize, bound: i64) -> f64 {
    let mut c = vec![-bound; k];
    let mut best = f64::INFINITY;
    loop {
        if c.iter().any(|&x| x != 0) {
            let mut len: f64 = 0.0;
            for i in 0..k {
                let v: f64 = (0..k).map(|j| matrix[i * k + j] * c[j] as f64).sum();
                len = len.max(v.abs());
            }
            best = best.min(len);
        }
        let mut j = k;
        loop {
            if j == 0 {
                return best;
            }
            j -= 1;
            if c[j] < bound {
                c[j] += 1;
                break;
            }
            c[j] = -bound;
        }
    }
}

/// Max absolute row sum of the inverse: any lattice vector of sup-norm at
/// most `r` has coefficients bounded by `r` times this.
pub fn inverse_row_norm(matrix: &[f64], k: usize) -> f64 {
    let inv = DMatrix::from_row_slice(k, k, matrix).try_inverse().unwrap();
    (0..k).map(|i| (0..k).map(|j| inv[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// All `j`-subsets of `0..k` in lexicographic order.
pub fn subsets(k: usize, j: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, k: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            rec(i + 1, k, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k, j, &mut Vec::new(), &mut out);
    out
}

/// Determinant by Laplace expansion (tiny matrices only).
pub fn laplace_det(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<f64>> = a[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| *x).collect())
                .collect();
            let sign = if c % 2 == 0 { 1.0 } else { -1.0 };
            sign * a[0][c] * laplace_det(&minor)
        })
        .sum()
}

/// Wedge of column vectors: coefficient on `e_I` is the minor on rows `I`.
pub fn wedge_minors(vectors: &[Vec<f64>]) -> Vec<f64> {
    let k = vectors[0].len();
    let j = vectors.len();
    subsets(k, j)
        .into_iter()
        .map(|rows| {
            let sub: Vec<Vec<f64>> = rows.iter().map(|&r| vectors.iter().map(|v| v[r]).collect()).collect();
            laplace_det(&sub)
        })
        .collect()
}

/// Matrix of `Lambda^j(g)` in the basis `e_I`: entry `(I, J)` is `det g[I, J]`.
pub fn exterior_power_matrix(g: &[Vec<f64>], j: usize) -> Vec<Vec<f64>> {
    let k = g.len();
    let sets = subsets(k, j);
    sets.iter()
        .map(|rows| {
            sets.iter()
                .map(|cols| {
                    let sub: Vec<Vec<f64>> = rows.iter().map(|&r| cols.iter().map(|&c| g[r][c]).collect()).collect();
                    laplace_det(&sub)
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-300);
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}
