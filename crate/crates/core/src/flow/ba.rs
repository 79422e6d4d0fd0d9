use crate::error::{Error, Result};

use super::LinearFormSystem;

/// Largest number of `q` vectors [`ba_quality`] will evaluate.
pub const BA_EVALUATION_CAP: u64 = 10_000_000;

/// `min over 0 < ||q|| <= q_max` of
/// `max_i |Y_i q - p_i|^{1/r_i} * max_j |q_j|^{1/s_j}` with `p` the nearest
/// integer vector to `Yq`.
///
/// Positive limits as `q_max` grows characterize `(r, s)`-badly approximable
/// systems. The value is nonincreasing in `q_max`.
pub fn ba_quality(system: &LinearFormSystem, r: &[f64], s: &[f64], q_max: u64) -> Result<f64> {
    let (m, n) = (system.m(), system.n());
    for (name, w, len) in [("r", r, m), ("s", s, n)] {
        if w.len() != len || w.iter().any(|x| !(*x > 0.0)) {
            return Err(Error::argument(name, format!("expected {len} positive weights")));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::argument(name, format!("weights must sum to 1, got {sum}")));
        }
    }
    if q_max == 0 {
        return Err(Error::argument("q_max", "must be at least 1"));
    }
    let side = 2u64.saturating_mul(q_max).saturating_add(1);
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(side)).unwrap_or(u64::MAX);
    if total - 1 > BA_EVALUATION_CAP {
        return Err(Error::capacity(format!("{} evaluations of the BA product", total - 1), BA_EVALUATION_CAP));
    }
    let qm = q_max as i64;
    let mut q = vec![-qm; n];
    let mut best = f64::INFINITY;
    loop {
        if q.iter().any(|&x| x != 0) {
            let q_part = q.iter().zip(s).map(|(&qj, sj)| (qj.unsigned_abs() as f64).powf(1.0 / sj)).fold(0.0, f64::max);
            let y_part = (0..m).map(|i| system.residual(i, &q).1.abs().powf(1.0 / r[i])).fold(0.0, f64::max);
            best = best.min(y_part * q_part);
        }
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(best);
            }
            j -= 1;
            if q[j] < qm {
                q[j] += 1;
                break;
            }
            q[j] = -qm;
        }
    }
}
