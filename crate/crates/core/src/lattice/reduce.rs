use super::{IntMatrix, LatticeBasis};
use crate::error::{Error, Result};

/// LLL parameters. `ETA` slightly above 1/2 absorbs rounding in the
/// Gram-Schmidt coefficients.
const DELTA: f64 = 0.99;
const ETA: f64 = 0.51;
const MAX_ITERATIONS: usize = 200_000;
/// Cap on transform entries, leaving headroom in `i64` for later products.
const MAX_TRANSFORM_ENTRY: u64 = 1 << 62;

/// An LLL-reduced basis together with the unimodular integer transform that
/// produced it: `basis = original * transform`.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    pub basis: LatticeBasis,
    pub transform: IntMatrix,
}

/// Gram-Schmidt data of a list of column vectors.
pub(crate) struct GramSchmidt {
    /// `mu[i][j]` for `j < i`.
    pub mu: Vec<Vec<f64>>,
    /// Squared norms of the orthogonalized vectors.
    pub norms_sq: Vec<f64>,
}

pub(crate) fn gram_schmidt(cols: &[Vec<f64>]) -> GramSchmidt {
    let k = cols.len();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut mu = vec![vec![0.0; k]; k];
    let mut norms_sq = vec![0.0; k];
    for i in 0..k {
        let mut v = cols[i].clone();
        for j in 0..i {
            let m = dot(&v, &star[j]) / norms_sq[j];
            mu[i][j] = m;
            for (a, b) in v.iter_mut().zip(&star[j]) {
                *a -= m * b;
            }
        }
        norms_sq[i] = dot(&v, &v);
        star.push(v);
    }
    GramSchmidt { mu, norms_sq }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LLL-reduces a basis, tracking the integer transform exactly.
///
/// Every time a column of the transform changes, the corresponding lattice
/// vector is re-evaluated from the original basis rather than updated in
/// place, so rounding errors never accumulate across reduction steps.
pub fn reduce_basis(basis: &LatticeBasis) -> Result<ReducedBasis> {
    let k = basis.k();
    let mut u = IntMatrix::identity(k);
    let mut det_negative = false;
    let mut cols: Vec<Vec<f64>> = (0..k).map(|j| basis.image(&u.column(j))).collect();
    let mut gs = gram_schmidt(&cols);
    let mut idx = 1;
    let mut iterations = 0;
    while idx < k {
        iterations += 1;
        if iterations > MAX_ITERATIONS {
            return Err(Error::DegenerateBasis(format!("LLL did not converge within {MAX_ITERATIONS} iterations")));
        }
        // size reduction, repeated until the coefficients settle
        for _ in 0..64 {
            let mut changed = false;
            for j in (0..idx).rev() {
                let m = gs.mu[idx][j];
                if m.abs() > ETA {
                    let r = m.round();
                    if !(r.abs() < 4.0e18) {
                        return Err(Error::DegenerateBasis("size-reduction coefficient overflow".into()));
                    }
                    u.column_axpy(idx, r as i64, j)
                        .ok_or_else(|| Error::DegenerateBasis("transform overflow".into()))?;
                    // keep the cached mu row consistent for the remaining j
                    for l in 0..j {
                        gs.mu[idx][l] -= r * gs.mu[j][l];
                    }
                    gs.mu[idx][j] -= r;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
            if u.max_abs() >= MAX_TRANSFORM_ENTRY {
                return Err(Error::DegenerateBasis("transform entries exceed 2^62".into()));
            }
            cols[idx] = basis.image(&u.column(idx));
            gs = gram_schmidt(&cols);
        }
        let lhs = gs.norms_sq[idx];
        let rhs = (DELTA - gs.mu[idx][idx - 1].powi(2)) * gs.norms_sq[idx - 1];
        if lhs >= rhs {
            idx += 1;
        } else {
            u.swap_columns(idx, idx - 1);
            cols.swap(idx, idx - 1);
            det_negative = !det_negative;
            gs = gram_schmidt(&cols);
            idx = (idx - 1).max(1);
        }
    }
    if det_negative {
        u.negate_column(k - 1);
    }
    let reduced = basis.transformed(&u);
    Ok(ReducedBasis { basis: reduced, transform: u })
}
