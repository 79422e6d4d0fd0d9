//! Dirichlet systems and the diagonal flow on the space of lattices.
//!
//! A system of `m` linear forms in `n` variables is embedded as the lattice
//! `tau(Y) Z^k` whose vectors are `(Y q - p, q)`. Scaling by
//! `g_t = diag(e^{t_1}, ..., e^{t_m}, e^{-t_{m+1}}, ..., e^{-t_k})` turns the
//! question "does the eps-scaled Dirichlet system have a solution at `t`"
//! into "does `g_t tau(Y) Z^k` have a nonzero vector of sup-norm below eps".

mod ba;
mod classify;
mod dirichlet;
mod family;

pub use ba::{ba_quality, BA_EVALUATION_CAP};
pub use classify::{
    di_classify, di_classify_with_tail, dirichlet_record, trajectory_lambda1, DIRecord, DIReport, DIVerdict,
    DEFAULT_TAIL_FRACTION,
};
pub use dirichlet::{
    dirichlet_solvable_direct, dirichlet_solvable_lattice, DirichletWitness, Solvability, DIRECT_BUDGET,
};
pub use family::{DriftReport, TrajectoryFamily};

use crate::error::{Error, Result};
use crate::lattice::LatticeBasis;

/// Largest accepted weight coordinate; `e^300` is still finite.
pub const MAX_WEIGHT: f64 = 300.0;
/// Both halves of a weight vector must sum to the same value within this.
pub const BALANCE_TOLERANCE: f64 = 1e-12;

/// A weight vector `t = (t_1, ..., t_{m+n})` with positive entries and
/// `t_1 + ... + t_m = t_{m+1} + ... + t_{m+n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    m: usize,
    n: usize,
    t: Vec<f64>,
}

impl WeightVector {
    pub fn new(m: usize, n: usize, t: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::argument("t", "m and n must be positive"));
        }
        if t.len() != m + n {
            return Err(Error::argument("t", format!("expected {} entries, got {}", m + n, t.len())));
        }
        if let Some(x) = t.iter().find(|x| !(**x > 0.0) || !x.is_finite()) {
            return Err(Error::argument("t", format!("entries must be positive and finite, got {x}")));
        }
        let left: f64 = t[..m].iter().sum();
        let right: f64 = t[m..].iter().sum();
        if (left - right).abs() > BALANCE_TOLERANCE * left.max(1.0) {
            return Err(Error::argument(
                "t",
                format!("unbalanced weights: first {m} sum to {left}, last {n} sum to {right}"),
            ));
        }
        Ok(WeightVector { m, n, t })
    }

    /// The point `(s/m, ..., s/m, s/n, ..., s/n)` on the central ray.
    pub fn central(m: usize, n: usize, s: f64) -> Result<Self> {
        let mut t = vec![s / m as f64; m];
        t.extend(std::iter::repeat_n(s / n as f64, n));
        WeightVector::new(m, n, t)
    }

    /// The point `(r_1 s, ..., r_m s, s_1 s, ..., s_n s)` on a weighted ray.
    pub fn weighted(r: &[f64], s_weights: &[f64], s: f64) -> Result<Self> {
        let mut t: Vec<f64> = r.iter().map(|x| x * s).collect();
        t.extend(s_weights.iter().map(|x| x * s));
        WeightVector::new(r.len(), s_weights.len(), t)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.m + self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.t
    }

    /// Smallest coordinate.
    pub fn floor(&self) -> f64 {
        self.t.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest coordinate.
    pub fn norm(&self) -> f64 {
        self.t.iter().copied().fold(0.0, f64::max)
    }
}

/// The `m x n` real matrix `Y`, stored row-major.
///
/// Entries may carry a low-order part so that `y + y_lo` represents a real
/// number to about 32 digits; this matters once `q` passes `1e8`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFormSystem {
    m: usize,
    n: usize,
    y: Vec<f64>,
    y_lo: Vec<f64>,
}

impl LinearFormSystem {
    pub fn new(m: usize, n: usize, y: Vec<f64>) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::argument("Y", "m and n must be positive"));
        }
        if m + n > crate::lattice::MAX_DIM {
            return Err(Error::argument("Y", format!("m + n must be at most {}", crate::lattice::MAX_DIM)));
        }
        if y.len() != m * n {
            return Err(Error::argument("Y", format!("expected {} entries, got {}", m * n, y.len())));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::argument("Y", "entries must be finite"));
        }
        Ok(LinearFormSystem { m, n, y_lo: vec![0.0; y.len()], y })
    }

    /// Entries given as double-double pairs `hi + lo`.
    pub fn with_low_parts(m: usize, n: usize, hi: Vec<f64>, lo: Vec<f64>) -> Result<Self> {
        let mut s = Self::new(m, n, hi)?;
        if lo.len() != s.y.len() || lo.iter().any(|v| !v.is_finite()) {
            return Err(Error::argument("Y", "low parts must match the entries and be finite"));
        }
        s.y_lo = lo;
        Ok(s)
    }

    pub fn zero(m: usize, n: usize) -> Self {
        LinearFormSystem { m, n, y: vec![0.0; m * n], y_lo: vec![0.0; m * n] }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.y
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.y[i * self.n..(i + 1) * self.n]
    }

    /// Low-order parts of row `i` (zero unless built with low parts).
    pub fn row_lo(&self, i: usize) -> &[f64] {
        &self.y_lo[i * self.n..(i + 1) * self.n]
    }

    /// `Y_i q - p_i` with `p_i` the nearest integer, accurate to the
    /// double-double storage.
    pub fn residual(&self, i: usize, q: &[i64]) -> (i64, f64) {
        crate::numeric::nearest_residual_dd(self.row(i), self.row_lo(i), q)
    }

    pub(crate) fn check_weights(&self, t: &WeightVector) -> Result<()> {
        if t.m() != self.m || t.n() != self.n {
            return Err(Error::argument(
                "t",
                format!("weight vector is for m={}, n={} but Y is {}x{}", t.m(), t.n(), self.m, self.n),
            ));
        }
        Ok(())
    }
}

/// The core matrix `(I_m, Y; 0, I_n)`, row-major, with its low parts.
fn tau_matrix(y: &LinearFormSystem) -> (Vec<f64>, Vec<f64>) {
    let (m, n) = (y.m, y.n);
    let k = m + n;
    let mut a = vec![0.0; k * k];
    let mut lo = vec![0.0; k * k];
    for i in 0..k {
        a[i * k + i] = 1.0;
    }
    for i in 0..m {
        for j in 0..n {
            a[i * k + m + j] = y.y[i * n + j];
            lo[i * k + m + j] = y.y_lo[i * n + j];
        }
    }
    (a, lo)
}

/// `tau(Y)`: the basis whose lattice is `{(Y q - p, q)}`.
pub fn tau(y: &LinearFormSystem) -> LatticeBasis {
    let k = y.m + y.n;
    let (a, lo) = tau_matrix(y);
    LatticeBasis::with_row_scaling_dd(vec![1.0; k], k, a, lo).expect("tau(Y) is unipotent")
}

/// The diagonal matrix `g_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalFlow {
    exponents: Vec<f64>,
}

impl DiagonalFlow {
    /// Signed exponents: `t_i` for the first `m` coordinates, `-t_j` after.
    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn diagonal(&self) -> Vec<f64> {
        self.exponents.iter().map(|e| e.exp()).collect()
    }

    /// Row-major `k x k` matrix.
    pub fn matrix(&self) -> Vec<f64> {
        let k = self.exponents.len();
        let mut a = vec![0.0; k * k];
        for (i, d) in self.diagonal().into_iter().enumerate() {
            a[i * k + i] = d;
        }
        a
    }

    pub fn det(&self) -> f64 {
        self.exponents.iter().sum::<f64>().exp()
    }

    pub fn apply(&self, basis: &LatticeBasis) -> Result<LatticeBasis> {
        basis.scale_rows(&self.diagonal())
    }
}

pub fn flow(t: &WeightVector) -> Result<DiagonalFlow> {
    if let Some(x) = t.as_slice().iter().find(|x| **x > MAX_WEIGHT) {
        return Err(Error::argument("t", format!("weight {x} exceeds overflow guard {MAX_WEIGHT}")));
    }
    let m = t.m();
    let exponents = t.as_slice().iter().enumerate().map(|(i, &x)| if i < m { x } else { -x }).collect();
    Ok(DiagonalFlow { exponents })
}

/// `g_t tau(Y)`, kept in factored form for accurate evaluation.
pub fn flowed_lattice(y: &LinearFormSystem, t: &WeightVector) -> Result<LatticeBasis> {
    y.check_weights(t)?;
    let g = flow(t)?;
    let k = y.m + y.n;
    let (a, lo) = tau_matrix(y);
    LatticeBasis::with_row_scaling_dd(g.diagonal(), k, a, lo)
}
