//! Unimodular lattice bases and sup-norm shortest vectors.
//!
//! A [`LatticeBasis`] stores its column matrix in factored form
//! `diag(row_scale) * core`. Plain bases use a unit scale; flowed lattices
//! `g_t tau(Y)` keep the (possibly huge and tiny) exponential factors out of
//! the core so that lattice vectors can be evaluated row by row without
//! catastrophic cancellation.

mod random;
mod reduce;
mod svp;

pub use random::random_unimodular;
pub use reduce::{reduce_basis, ReducedBasis};
pub use svp::{
    classify_length, in_k_eps, shortest_vector_near, shortest_vector_supnorm, shortest_vector_with, KepsMembership,
    ShortestVectorResult, SvpOptions, DEFAULT_MARGIN, DEFAULT_NODE_CAP,
};

use std::fmt::Write as _;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::numeric::dd_dot_int;

/// Bases whose determinant is further than this from 1 are rejected.
pub const DET_TOLERANCE: f64 = 1e-9;

/// Largest supported lattice dimension.
pub const MAX_DIM: usize = 6;

/// Square integer matrix, row-major. Used for basis transforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    k: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(k: usize) -> Self {
        let mut entries = vec![0; k * k];
        for i in 0..k {
            entries[i * k + i] = 1;
        }
        IntMatrix { k, entries }
    }

    pub fn from_rows(k: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != k * k {
            return Err(Error::argument("entries", format!("expected {} entries", k * k)));
        }
        Ok(IntMatrix { k, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.k + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.k).map(|i| self.get(i, j)).collect()
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        for i in 0..self.k {
            self.entries.swap(i * self.k + a, i * self.k + b);
        }
    }

    pub fn negate_column(&mut self, j: usize) {
        for i in 0..self.k {
            self.entries[i * self.k + j] = -self.entries[i * self.k + j];
        }
    }

    /// `col[target] -= factor * col[source]`, failing on overflow.
    pub fn column_axpy(&mut self, target: usize, factor: i64, source: usize) -> Option<()> {
        for i in 0..self.k {
            let s = self.get(i, source).checked_mul(factor)?;
            let t = self.get(i, target).checked_sub(s)?;
            self.set(i, target, t);
        }
        Some(())
    }

    /// Matrix-vector product, `None` on overflow.
    pub fn apply(&self, x: &[i64]) -> Option<Vec<i64>> {
        (0..self.k)
            .map(|i| {
                let mut acc: i128 = 0;
                for j in 0..self.k {
                    acc += self.get(i, j) as i128 * x[j] as i128;
                }
                i64::try_from(acc).ok()
            })
            .collect()
    }

    pub fn max_abs(&self) -> u64 {
        self.entries.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0)
    }

    /// Exact determinant (fraction-free Bareiss elimination in `i128`).
    pub fn det(&self) -> i128 {
        let k = self.k;
        let mut a: Vec<i128> = self.entries.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for c in 0..k {
            if a[c * k + c] == 0 {
                match (c + 1..k).find(|&r| a[r * k + c] != 0) {
                    Some(r) => {
                        for j in 0..k {
                            a.swap(c * k + j, r * k + j);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for r in c + 1..k {
                for j in c + 1..k {
                    a[r * k + j] = (a[r * k + j] * a[c * k + c] - a[r * k + c] * a[c * k + j]) / prev;
                }
                a[r * k + c] = 0;
            }
            prev = a[c * k + c];
        }
        sign * a[k * k - 1]
    }
}

/// A basis of a unimodular lattice in `R^k`, stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeBasis {
    k: usize,
    row_scale: Vec<f64>,
    core: Vec<f64>,
    /// Low-order parts of the core entries (double-double storage).
    core_lo: Vec<f64>,
}

impl LatticeBasis {
    /// Builds a basis from the row-major entries of its column matrix.
    pub fn from_rows(k: usize, entries: Vec<f64>) -> Result<Self> {
        Self::with_row_scaling(vec![1.0; k], k, entries)
    }

    /// Builds the basis `diag(row_scale) * core` (core given row-major).
    pub fn with_row_scaling(row_scale: Vec<f64>, k: usize, core: Vec<f64>) -> Result<Self> {
        let lo = vec![0.0; core.len()];
        Self::with_row_scaling_dd(row_scale, k, core, lo)
    }

    /// As [`with_row_scaling`](Self::with_row_scaling) with each core entry
    /// given as an unevaluated sum `core + core_lo`.
    pub fn with_row_scaling_dd(row_scale: Vec<f64>, k: usize, core: Vec<f64>, core_lo: Vec<f64>) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&k) {
            return Err(Error::argument("k", format!("dimension must be in 2..={MAX_DIM}, got {k}")));
        }
        if core.len() != k * k || core_lo.len() != k * k || row_scale.len() != k {
            return Err(Error::argument("entries", format!("expected a {k}x{k} matrix")));
        }
        if core.iter().chain(&core_lo).chain(&row_scale).any(|x| !x.is_finite()) {
            return Err(Error::argument("entries", "non-finite entry"));
        }
        let b = LatticeBasis { k, row_scale, core, core_lo };
        let det = b.det();
        if !((det - 1.0).abs() <= DET_TOLERANCE) {
            return Err(Error::argument(
                "basis",
                format!("not unimodular: det = {det:e} (tolerance {DET_TOLERANCE:e})"),
            ));
        }
        Ok(b)
    }

    pub fn identity(k: usize) -> Self {
        let mut core = vec![0.0; k * k];
        for i in 0..k {
            core[i * k + i] = 1.0;
        }
        LatticeBasis { k, row_scale: vec![1.0; k], core, core_lo: vec![0.0; k * k] }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let idx = i * self.k + j;
        self.row_scale[i] * (self.core[idx] + self.core_lo[idx])
    }

    /// Materialized column matrix, row-major.
    pub fn matrix(&self) -> Vec<f64> {
        let k = self.k;
        (0..k * k).map(|idx| self.entry(idx / k, idx % k)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.k).map(|i| self.entry(i, j)).collect()
    }

    pub fn det(&self) -> f64 {
        let k = self.k;
        let m = DMatrix::from_fn(k, k, |i, j| self.core[i * k + j] + self.core_lo[i * k + j]);
        let core_det = m.lu().determinant();
        let log_scale: f64 = self.row_scale.iter().map(|s| s.abs().ln()).sum();
        let sign = self.row_scale.iter().filter(|s| **s < 0.0).count() % 2;
        let s = if sign == 1 { -1.0 } else { 1.0 };
        s * core_det * log_scale.exp()
    }

    /// The lattice vector `basis * coeffs`, each coordinate evaluated in
    /// compensated arithmetic.
    pub fn image(&self, coeffs: &[i64]) -> Vec<f64> {
        let k = self.k;
        (0..k)
            .map(|i| {
                let row = i * k..(i + 1) * k;
                let (hi, lo) = dd_dot_int(&self.core[row.clone()], &self.core_lo[row], coeffs);
                self.row_scale[i] * (hi + lo)
            })
            .collect()
    }

    /// The basis `self * u` of the same lattice (when `det u = ±1`).
    pub fn transformed(&self, u: &IntMatrix) -> LatticeBasis {
        let k = self.k;
        let mut core = vec![0.0; k * k];
        let mut core_lo = vec![0.0; k * k];
        for j in 0..k {
            let col = u.column(j);
            for i in 0..k {
                let row = i * k..(i + 1) * k;
                let (hi, lo) = dd_dot_int(&self.core[row.clone()], &self.core_lo[row], &col);
                core[i * k + j] = hi;
                core_lo[i * k + j] = lo;
            }
        }
        LatticeBasis { k, row_scale: self.row_scale.clone(), core, core_lo }
    }

    /// `diag(scale) * self`; fails if the result is not unimodular.
    pub fn scale_rows(&self, scale: &[f64]) -> Result<LatticeBasis> {
        let rs = self.row_scale.iter().zip(scale).map(|(a, b)| a * b).collect();
        LatticeBasis::with_row_scaling_dd(rs, self.k, self.core.clone(), self.core_lo.clone())
    }

    /// `g * self` for a general real matrix `g` (row-major).
    pub fn left_multiply(&self, g: &[f64]) -> Result<LatticeBasis> {
        let k = self.k;
        let m = self.matrix();
        let mut out = vec![0.0; k * k];
        for i in 0..k {
            for j in 0..k {
                out[i * k + j] = (0..k).map(|l| g[i * k + l] * m[l * k + j]).sum();
            }
        }
        LatticeBasis::from_rows(k, out)
    }

    /// Text form: header `k=<k>`, then one row per line, 17 significant digits.
    pub fn to_text(&self) -> String {
        let mut s = format!("k={}\n", self.k);
        for i in 0..self.k {
            let row: Vec<String> = (0..self.k).map(|j| format!("{:.16e}", self.entry(i, j))).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let k: usize = header
            .trim()
            .strip_prefix("k=")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| Error::parse(1, "expected header `k=<int>`"))?;
        let mut entries = Vec::with_capacity(k * k);
        let mut rows = 0;
        for (no, line) in lines {
            rows += 1;
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::parse(no + 1, e.to_string())))
                .collect::<Result<_>>()?;
            if vals.len() != k {
                return Err(Error::parse(no + 1, format!("expected {k} entries, got {}", vals.len())));
            }
            entries.extend(vals);
        }
        if rows != k {
            return Err(Error::parse(k + 1, format!("expected {k} rows, got {rows}")));
        }
        LatticeBasis::from_rows(k, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unimodular() {
        let err = LatticeBasis::from_rows(2, vec![2.0, 0.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::Argument { .. }));
        assert!(LatticeBasis::from_rows(2, vec![0.0, 1.0, 1.0, 0.0]).is_err());
        assert!(LatticeBasis::from_rows(1, vec![1.0]).is_err());
    }

    #[test]
    fn scaled_basis_keeps_small_coordinates_accurate() {
        let e = 30f64.exp();
        let b = LatticeBasis::with_row_scaling(vec![e, 1.0 / e], 2, vec![1.0, 0.1, 0.0, 1.0]).unwrap();
        let v = b.image(&[-1, 10]);
        // 10 * fl(0.1) - 1 = 5.55e-17 exactly in real arithmetic
        assert!((v[0] - e * 5.551_115_123_125_783e-17).abs() < 1e-3 * e * 5.55e-17);
    }

    #[test]
    fn text_round_trip() {
        let b = random_unimodular(3, 3, 1.0);
        let back = LatticeBasis::from_text(&b.to_text()).unwrap();
        for (x, y) in b.matrix().iter().zip(back.matrix()) {
            assert_eq!(*x, y);
        }
        assert!(b.to_text().starts_with("k=3\n"));
    }

    #[test]
    fn text_parse_errors() {
        assert!(matches!(LatticeBasis::from_text("k=2\n1 0\n"), Err(Error::Parse { .. })));
        assert!(matches!(LatticeBasis::from_text("2\n1 0\n0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(LatticeBasis::from_text("k=2\n1 x\n0 1\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn exact_integer_det() {
        let m = IntMatrix::from_rows(3, vec![2, 1, 0, 1, 1, 0, 5, -7, 1]).unwrap();
        assert_eq!(m.det(), 1);
        let s = IntMatrix::from_rows(2, vec![0, 1, 1, 0]).unwrap();
        assert_eq!(s.det(), -1);
    }
}
