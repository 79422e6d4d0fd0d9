//! Small floating-point helpers shared by the lattice and flow code.
//!
//! Lattice images such as `e^t (Y q - p)` lose every significant digit when
//! evaluated naively for large `t`, so inner products against integer
//! coefficient vectors go through an error-free transformation (Ogita, Rump
//! and Oishi's `Dot2`), giving a result as accurate as if computed in twice
//! the working precision.

/// Error-free product: `a * b == p + e` exactly.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Error-free sum: `a + b == s + e` exactly.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let z = s - a;
    let e = (a - (s - z)) + (b - z);
    (s, e)
}

/// Compensated dot product returned as an unevaluated pair `(hi, lo)`.
pub fn dot2_pair(a: &[f64], b: &[f64]) -> (f64, f64) {
    debug_assert_eq!(a.len(), b.len());
    let mut s = 0.0;
    let mut c = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        let (p, ep) = two_prod(x, y);
        let (t, es) = two_sum(s, p);
        s = t;
        c += ep + es;
    }
    two_sum(s, c)
}

/// Compensated dot product, rounded once.
pub fn dot2(a: &[f64], b: &[f64]) -> f64 {
    let (hi, lo) = dot2_pair(a, b);
    hi + lo
}

/// Dot product of a real row against an integer vector, compensated.
///
/// Integer entries must be below 2^53 in magnitude to convert exactly.
pub fn dot2_int(a: &[f64], c: &[i64]) -> f64 {
    debug_assert!(c.iter().all(|&x| x.unsigned_abs() < (1u64 << 53)));
    let cf: Vec<f64> = c.iter().map(|&x| x as f64).collect();
    dot2(a, &cf)
}

/// Dot product of a double-double row `hi + lo` against an integer vector,
/// returned as an unevaluated pair. Entries beyond `2^53` are split into
/// exact 32-bit halves.
pub fn dd_dot_int(hi: &[f64], lo: &[f64], c: &[i64]) -> (f64, f64) {
    const SPLIT: f64 = 4294967296.0;
    let small = c.iter().all(|&x| x.unsigned_abs() < (1u64 << 53));
    let mut a = Vec::with_capacity(4 * hi.len());
    let mut b = Vec::with_capacity(4 * hi.len());
    for ((&h, &l), &x) in hi.iter().zip(lo).zip(c) {
        if small {
            a.extend([h, l]);
            b.extend([x as f64, x as f64]);
        } else {
            let top = (x >> 32) as f64;
            let bottom = (x & 0xffff_ffff) as f64;
            a.extend([h * SPLIT, h, l * SPLIT, l]);
            b.extend([top, bottom, top, bottom]);
        }
    }
    dot2_pair(&a, &b)
}

/// `Y_i q - p_i` where `p_i` is the nearest integer to `Y_i q` (ties to even),
/// both computed in compensated arithmetic. Returns `(p_i, residual)`.
pub fn nearest_residual(row: &[f64], q: &[i64]) -> (i64, f64) {
    let qf: Vec<f64> = q.iter().map(|&x| x as f64).collect();
    let (hi, lo) = dot2_pair(row, &qf);
    residual_from_pair(hi, lo)
}

/// As [`nearest_residual`] for a double-double row `hi + lo`.
pub fn nearest_residual_dd(row_hi: &[f64], row_lo: &[f64], q: &[i64]) -> (i64, f64) {
    let (hi, lo) = dd_dot_int(row_hi, row_lo, q);
    residual_from_pair(hi, lo)
}

fn residual_from_pair(hi: f64, lo: f64) -> (i64, f64) {
    let p = (hi + lo).round_ties_even();
    // hi - p is exact whenever the two are within a factor of two (Sterbenz),
    // which holds for every case where the residual is small enough to matter.
    let r = (hi - p) + lo;
    (p as i64, r)
}

/// `sqrt(a)` as a double-double pair, one Newton step from the `f64` root.
pub fn dd_sqrt(a: f64) -> (f64, f64) {
    let s = a.sqrt();
    let e = (-s).mul_add(s, a);
    two_sum(s, e / (2.0 * s))
}

/// Sum of two double-double numbers.
pub fn dd_add(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let (s, e) = two_sum(a.0, b.0);
    let (hi, lo) = two_sum(s, e + a.1 + b.1);
    two_sum(hi, lo)
}

/// `10^-k` as a double-double pair.
pub fn dd_pow10_neg(k: u32) -> (f64, f64) {
    let hi: f64 = format!("1e-{k}").parse().expect("valid literal");
    if k > 22 {
        // 10^k is inexact; the rounding error sits far below anything used.
        return (hi, 0.0);
    }
    let p = 10f64.powi(k as i32);
    (hi, -hi.mul_add(p, -1.0) / p)
}

/// Sup-norm of a real vector.
pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Half-width of a 95% normal-approximation binomial confidence interval.
pub fn binomial_half_width(hits: usize, n: usize) -> f64 {
    if n == 0 {
        return f64::NAN;
    }
    let p = hits as f64 / n as f64;
    1.96 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Greatest common divisor of the absolute values.
pub fn gcd_all(values: &[i64]) -> u64 {
    values.iter().fold(0u64, |g, &x| gcd(g, x.unsigned_abs()))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Ordinary least squares fit `y = a + b x`; returns `(a, b)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len();
    if n < 2 || n != ys.len() {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot2_recovers_cancelled_digits() {
        // 1e16 + 1 - 1e16 is lost in naive summation
        let a = [1e16, 1.0, -1e16];
        let b = [1.0, 1.0, 1.0];
        assert_eq!(dot2(&a, &b), 1.0);
    }

    #[test]
    fn nearest_residual_is_accurate_for_large_q() {
        let y = 0.1;
        let q = 1_000_000_007i64;
        let (p, r) = nearest_residual(&[y], &[q]);
        // exact value of the f64 nearest 0.1 is 0.1000000000000000055511151231257827...
        assert_eq!(p, 100_000_001);
        let expected = -0.3 + 1_000_000_007.0 * 5.551_115_123_125_783e-18;
        assert!((r - expected).abs() < 1e-12, "{r} vs {expected}");
    }

    #[test]
    fn dd_dot_handles_large_integers() {
        let c = [(1i64 << 60) + 12345, -(1i64 << 58) - 7];
        let (h, l) = dd_dot_int(&[1.0, 4.0], &[0.0, 0.0], &c);
        let exact = c[0] as i128 + 4 * c[1] as i128;
        assert_eq!(h as i128 + l as i128, exact);
    }

    #[test]
    fn double_double_sqrt_is_accurate() {
        let (hi, lo) = dd_sqrt(5.0);
        // (hi + lo)^2 - 5 evaluated exactly enough via two_prod
        let (p, e) = two_prod(hi, hi);
        let resid = (p - 5.0) + e + 2.0 * hi * lo;
        assert!(resid.abs() < 1e-30, "{resid:e}");
        assert!(lo != 0.0);
    }

    #[test]
    fn ties_go_to_even() {
        assert_eq!(nearest_residual(&[0.5], &[1]).0, 0);
        assert_eq!(nearest_residual(&[0.5], &[3]).0, 2);
    }

    #[test]
    fn gcd_and_fit() {
        assert_eq!(gcd_all(&[4, -6, 10]), 2);
        let (a, b) = linear_fit(&[0.0, 1.0, 2.0], &[1.0, 3.0, 5.0]).unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 2.0).abs() < 1e-12);
    }
}
