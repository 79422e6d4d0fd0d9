use super::{ExteriorVector, IndexSet};
use crate::error::{Error, Result};

/// A proper nonzero rational subspace `V` of `R^k`, with a basis of
/// the saturated lattice `Z^k ∩ V`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSubspace {
    k: usize,
    generators: Vec<Vec<i64>>,
    basis: Vec<Vec<i64>>,
}

impl RationalSubspace {
    /// `generators` are integer vectors of length `k` spanning `V`.
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self> {
        let k = generators.first().map_or(0, |g| g.len());
        if k < 2 || generators.iter().any(|g| g.len() != k) {
            return Err(Error::argument("generators", "need integer vectors of one common length k >= 2"));
        }
        let basis = saturate(&generators, k)?;
        if basis.is_empty() {
            return Err(Error::argument("generators", "all generators are zero"));
        }
        if basis.len() == k {
            return Err(Error::argument("generators", "generators span all of R^k; V must be proper"));
        }
        Ok(RationalSubspace { k, generators, basis })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// Basis of `Z^k ∩ V`.
    pub fn saturated_basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// The gcd of the maximal minors of the saturated basis; 1 exactly when
    /// the basis generates `Z^k ∩ V`.
    pub fn index(&self) -> i128 {
        let j = self.dim();
        let mut g: i128 = 0;
        for rows in IndexSet::all(self.k, j) {
            let sub: Vec<Vec<i128>> =
                rows.as_slice().iter().map(|&r| self.basis.iter().map(|v| v[r] as i128).collect()).collect();
            g = gcd_i128(g, bareiss(sub));
        }
        g
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else { return 0 };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..n {
            for col in c + 1..n {
                a[r][col] = (a[r][col] * a[c][c] - a[r][c] * a[c][col]) / prev;
            }
            a[r][c] = 0;
        }
        prev = a[c][c];
    }
    sign * a[n - 1][n - 1]
}

/// Row-echelon reduction `U G = H` by unimodular row operations, keeping
/// `U^{-1}` alongside. The first `rank` columns of `U^{-1}` extend to a basis
/// of `Z^k` and span the same space as `G`, so they generate `Z^k ∩ V`.
fn saturate(generators: &[Vec<i64>], k: usize) -> Result<Vec<Vec<i64>>> {
    let r = generators.len();
    let overflow = || Error::argument("generators", "integer overflow during normal form reduction");
    // h[row][col]: row = coordinate, col = generator
    let mut h: Vec<Vec<i128>> = (0..k).map(|i| generators.iter().map(|g| g[i] as i128).collect()).collect();
    let mut uinv: Vec<Vec<i128>> = (0..k).map(|i| (0..k).map(|j| i128::from(i == j)).collect()).collect();
    let mut pivot = 0;
    for col in 0..r {
        if pivot == k {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (pivot..k).filter(|&i| h[i][col] != 0).collect();
            if nonzero.len() <= 1 {
                if let Some(&p) = nonzero.first() {
                    h.swap(p, pivot);
                    for row in uinv.iter_mut() {
                        row.swap(p, pivot);
                    }
                    pivot += 1;
                }
                break;
            }
            let &p = nonzero.iter().min_by_key(|&&i| h[i][col].abs()).expect("nonempty");
            for &i in &nonzero {
                if i == p {
                    continue;
                }
                let c = h[i][col] / h[p][col];
                // row_i -= c row_p, and column p of U^{-1} += c column i
                for j in 0..r {
                    h[i][j] = h[p][j].checked_mul(c).and_then(|x| h[i][j].checked_sub(x)).ok_or_else(overflow)?;
                }
                for row in uinv.iter_mut() {
                    row[p] = row[i].checked_mul(c).and_then(|x| row[p].checked_add(x)).ok_or_else(overflow)?;
                }
            }
        }
    }
    (0..pivot).map(|j| uinv.iter().map(|row| i64::try_from(row[j]).map_err(|_| overflow())).collect()).collect()
}

/// `ell_V(g)`: Euclidean norm of `g v_1 ^ ... ^ g v_j` for a basis `v_i` of
/// `Z^k ∩ V`. `g` is row-major `k x k`.
pub fn ell_v(g: &[f64], v: &RationalSubspace) -> Result<f64> {
    let k = v.k;
    if g.len() != k * k {
        return Err(Error::argument("g", format!("expected {} entries, got {}", k * k, g.len())));
    }
    let images: Vec<Vec<f64>> =
        v.basis.iter().map(|b| (0..k).map(|i| (0..k).map(|j| g[i * k + j] * b[j] as f64).sum()).collect()).collect();
    Ok(ExteriorVector::wedge(&images)?.norm())
}
