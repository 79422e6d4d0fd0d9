//! Exterior powers of the flow for a single linear form (`m = 1`, `k = n + 1`).
//!
//! Coordinates are indexed `0..=n`; coordinate 0 carries the form value.
//! A weight vector is written `t = (t_0, t_1, ..., t_n)` with
//! `t_0 = t_1 + ... + t_n`, and `e_I` is an eigenvector of `Lambda^j(g_t)`
//! with eigenvalue `e^{t_I}`.

mod subspace;

pub use subspace::{ell_v, RationalSubspace};

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::flow::{flow, WeightVector};

/// A strictly increasing subset of `{0, ..., k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut elems: Vec<usize>, k: usize) -> Result<Self> {
        elems.sort_unstable();
        if elems.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::argument("I", format!("repeated index in {elems:?}")));
        }
        if let Some(&x) = elems.iter().find(|&&x| x >= k) {
            return Err(Error::argument("I", format!("index {x} out of range 0..{k}")));
        }
        Ok(IndexSet(elems))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// All `j`-subsets of `0..k`, lexicographically.
    pub fn all(k: usize, j: usize) -> Vec<IndexSet> {
        fn rec(start: usize, k: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<IndexSet>) {
            if cur.len() == j {
                out.push(IndexSet(cur.clone()));
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

    fn with(&self, i: usize) -> IndexSet {
        let mut v = self.0.clone();
        let pos = v.binary_search(&i).unwrap_err();
        v.insert(pos, i);
        IndexSet(v)
    }

    fn without(&self, i: usize) -> IndexSet {
        IndexSet(self.0.iter().copied().filter(|&x| x != i).collect())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `w = sum_I w_I e_I` in `Lambda^j(R^k)`, coefficients stored in the
/// lexicographic order of [`IndexSet::all`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExteriorVector {
    k: usize,
    grade: usize,
    coeffs: Vec<f64>,
}

impl ExteriorVector {
    pub fn zero(k: usize, grade: usize) -> Result<Self> {
        if !(2..=crate::lattice::MAX_DIM).contains(&k) || grade == 0 || grade >= k {
            return Err(Error::argument("grade", format!("need 1 <= j < k <= 6, got j={grade}, k={k}")));
        }
        let len = IndexSet::all(k, grade).len();
        Ok(ExteriorVector { k, grade, coeffs: vec![0.0; len] })
    }

    /// Coefficients in lexicographic subset order.
    pub fn from_coeffs(k: usize, grade: usize, coeffs: Vec<f64>) -> Result<Self> {
        let mut w = Self::zero(k, grade)?;
        if coeffs.len() != w.coeffs.len() {
            return Err(Error::argument(
                "w",
                format!("expected {} coefficients, got {}", w.coeffs.len(), coeffs.len()),
            ));
        }
        if coeffs.iter().any(|x| !x.is_finite()) {
            return Err(Error::argument("w", "coefficients must be finite"));
        }
        w.coeffs = coeffs;
        Ok(w)
    }

    /// The basis vector `e_I`.
    pub fn basis(k: usize, set: &IndexSet) -> Result<Self> {
        let mut w = Self::zero(k, set.len())?;
        w.set(set, 1.0);
        Ok(w)
    }

    /// `v_1 ^ ... ^ v_j`: the coefficient on `e_I` is the minor on rows `I`.
    pub fn wedge(vectors: &[Vec<f64>]) -> Result<Self> {
        let j = vectors.len();
        let k = vectors.first().map_or(0, |v| v.len());
        if vectors.iter().any(|v| v.len() != k) {
            return Err(Error::argument("vectors", "all vectors must have the same length"));
        }
        let mut w = Self::zero(k, j)?;
        for (slot, set) in IndexSet::all(k, j).iter().enumerate() {
            let rows = set.as_slice();
            let sub = DMatrix::from_fn(j, j, |r, c| vectors[c][rows[r]]);
            w.coeffs[slot] = sub.determinant();
        }
        Ok(w)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn index_sets(&self) -> Vec<IndexSet> {
        IndexSet::all(self.k, self.grade)
    }

    fn slot(&self, set: &IndexSet) -> Option<usize> {
        if set.len() != self.grade {
            return None;
        }
        // rank of the subset in lexicographic order
        let mut rank = 0;
        let mut prev = 0;
        for (pos, &x) in set.as_slice().iter().enumerate() {
            for skipped in prev..x {
                rank += binomial(self.k - skipped - 1, self.grade - pos - 1);
            }
            prev = x + 1;
        }
        Some(rank)
    }

    pub fn get(&self, set: &IndexSet) -> f64 {
        self.slot(set).map_or(0.0, |s| self.coeffs[s])
    }

    pub fn set(&mut self, set: &IndexSet, value: f64) {
        let s = self.slot(set).expect("index set of matching grade");
        self.coeffs[s] = value;
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Lines `I={i1,i2,...} w=<value>` for the nonzero coefficients.
    pub fn to_text(&self) -> String {
        let mut out = format!("k={} j={}\n", self.k, self.grade);
        for (set, w) in self.index_sets().iter().zip(&self.coeffs) {
            if *w != 0.0 {
                out.push_str(&format!("I={set} w={w:e}\n"));
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty input"))?;
        let mut k = None;
        let mut j = None;
        for tok in header.split_whitespace() {
            match tok.split_once('=') {
                Some(("k", v)) => k = v.parse::<usize>().ok(),
                Some(("j", v)) => j = v.parse::<usize>().ok(),
                _ => return Err(Error::parse(1, format!("unexpected header token '{tok}'"))),
            }
        }
        let (k, j) = match (k, j) {
            (Some(k), Some(j)) => (k, j),
            _ => return Err(Error::parse(1, "header must be 'k=<int> j=<int>'")),
        };
        let mut w = Self::zero(k, j)?;
        for (no, line) in lines {
            let line_no = no + 1;
            let (set_part, val_part) = line
                .trim()
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::parse(line_no, "expected 'I={...} w=<value>'"))?;
            let inner = set_part
                .strip_prefix("I={")
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| Error::parse(line_no, format!("bad index set '{set_part}'")))?;
            let elems = if inner.is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|x| x.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|e| Error::parse(line_no, e.to_string()))?
            };
            let set = IndexSet::new(elems, k).map_err(|e| Error::parse(line_no, e.to_string()))?;
            if set.len() != j {
                return Err(Error::parse(line_no, format!("index set {set} has size {} not {j}", set.len())));
            }
            let value: f64 = val_part
                .trim()
                .strip_prefix("w=")
                .ok_or_else(|| Error::parse(line_no, "expected 'w=<value>'"))?
                .parse()
                .map_err(|e: std::num::ParseFloatError| Error::parse(line_no, e.to_string()))?;
            w.set(&set, value);
        }
        Ok(w)
    }
}

fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn check_single_form(t: &WeightVector) -> Result<()> {
    if t.m() != 1 {
        return Err(Error::argument("t", "the exterior calculus is implemented for m = 1 only"));
    }
    Ok(())
}

/// `t_I = t_0 - sum_{I \ {0}} t_i` if `0` is in `I`, else `-sum_I t_i`.
pub fn weight_exponent(t: &WeightVector, set: &IndexSet) -> Result<f64> {
    check_single_form(t)?;
    let tv = t.as_slice();
    if set.as_slice().iter().any(|&i| i >= tv.len()) {
        return Err(Error::argument("I", format!("{set} exceeds dimension {}", tv.len())));
    }
    let tail: f64 = set.as_slice().iter().filter(|&&i| i != 0).map(|&i| tv[i]).sum();
    Ok(if set.contains(0) { tv[0] - tail } else { -tail })
}

fn check_dims(t: &WeightVector, w: &ExteriorVector) -> Result<()> {
    check_single_form(t)?;
    if t.k() != w.k {
        return Err(Error::argument("w", format!("w lives in dimension {} but t in {}", w.k, t.k())));
    }
    Ok(())
}

/// `Lambda^j(g_t) w`: each `w_I` is multiplied by `e^{t_I}`.
pub fn flow_on_exterior(t: &WeightVector, w: &ExteriorVector) -> Result<ExteriorVector> {
    check_dims(t, w)?;
    flow(t)?;
    let mut out = w.clone();
    for (slot, set) in w.index_sets().iter().enumerate() {
        out.coeffs[slot] = w.coeffs[slot] * weight_exponent(t, set)?.exp();
    }
    Ok(out)
}

/// Sign picked up when moving `e_0` from the slot of `i` to the front of
/// `e_J`: `(-1)^{#{l in J : l < i}}`.
fn front_sign(j_set: &IndexSet, i: usize) -> f64 {
    if j_set.as_slice().iter().filter(|&&l| l < i).count() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `Lambda^j(tau(y)) w`, where `tau(y) e_0 = e_0` and `tau(y) e_i = e_i + y_i e_0`.
pub fn tau_on_exterior(y: &[f64], w: &ExteriorVector) -> Result<ExteriorVector> {
    if y.len() + 1 != w.k {
        return Err(Error::argument("y", format!("expected {} entries, got {}", w.k - 1, y.len())));
    }
    let mut out = w.clone();
    for (slot, j_set) in w.index_sets().iter().enumerate() {
        let wj = w.coeffs[slot];
        if wj == 0.0 || j_set.contains(0) {
            continue;
        }
        for &i in j_set.as_slice() {
            let target = j_set.without(i).with(0);
            let s = out.slot(&target).expect("same grade");
            out.coeffs[s] += front_sign(j_set, i) * wj * y[i - 1];
        }
    }
    Ok(out)
}

/// The affine map `y -> <g_t tau(y) w, e_I>` as `(c_0, [c_1, ..., c_n])`.
pub fn affine_coefficients(t: &WeightVector, w: &ExteriorVector, set: &IndexSet) -> Result<(f64, Vec<f64>)> {
    check_dims(t, w)?;
    let n = w.k - 1;
    let scale = weight_exponent(t, set)?.exp();
    let c0 = scale * w.get(set);
    let mut c = vec![0.0; n];
    if set.contains(0) {
        for i in 1..=n {
            if set.contains(i) {
                continue;
            }
            let j_set = set.without(0).with(i);
            c[i - 1] = scale * front_sign(&j_set, i) * w.get(&j_set);
        }
    }
    Ok((c0, c))
}

/// A large linear coefficient of one of the affine maps `y -> <g_t tau(y) w, e_I>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma36Witness {
    /// The coordinate `e_I` being read off.
    pub set: IndexSet,
    /// Which `y_i` the coefficient multiplies (`1..=n`).
    pub variable: usize,
    /// The coefficient itself.
    pub value: f64,
    /// Index of the largest weight among `t_1, ..., t_n`.
    pub ell: usize,
    /// The lower bound `e^{t_0 / n}`.
    pub bound: f64,
}

/// Finds, for `w` with some `w_J != 0` where `J` avoids 0, a set `I` and a
/// linear coefficient of `y -> <g_t tau(y) w, e_I>` of size at least
/// `e^{t_0/n} |w_J|`. Every admissible `J` is tried and the largest
/// coefficient is returned.
pub fn verify_lemma36(w: &ExteriorVector, t: &WeightVector) -> Result<Lemma36Witness> {
    check_dims(t, w)?;
    let tv = t.as_slice();
    let n = w.k - 1;
    let mut ell = 1;
    for i in 2..=n {
        if tv[i] > tv[ell] {
            ell = i;
        }
    }
    let mut best: Option<Lemma36Witness> = None;
    for (slot, j_set) in w.index_sets().iter().enumerate() {
        if j_set.contains(0) || w.coeffs[slot] == 0.0 {
            continue;
        }
        let choices: Vec<usize> = if j_set.contains(ell) { vec![ell] } else { j_set.as_slice().to_vec() };
        for i in choices {
            let set = j_set.without(i).with(0);
            let (_, c) = affine_coefficients(t, w, &set)?;
            let value = c[i - 1];
            if best.as_ref().is_none_or(|b| value.abs() > b.value.abs()) {
                best = Some(Lemma36Witness { set, variable: i, value, ell, bound: (tv[0] / n as f64).exp() });
            }
        }
    }
    best.ok_or_else(|| {
        Error::Precondition("every nonzero coefficient w_J has 0 in J; the hypothesis needs some J avoiding 0".into())
    })
}
