use super::{flowed_lattice, LinearFormSystem, WeightVector};
use crate::error::{Error, Result};
use crate::lattice::{shortest_vector_supnorm, KepsMembership, ShortestVectorResult};
use crate::numeric::dd_dot_int;

/// Largest number of candidate `q` vectors the direct solver will try.
pub const DIRECT_BUDGET: u64 = 100_000_000;

/// Outcome of the lattice-side solvability test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Solvability {
    Solvable,
    Unsolvable,
    /// `lambda_1` is within the margin of `eps`; the answer is indeterminate.
    Boundary,
}

impl Solvability {
    pub fn as_str(&self) -> &'static str {
        match self {
            Solvability::Solvable => "solvable",
            Solvability::Unsolvable => "unsolvable",
            Solvability::Boundary => "boundary",
        }
    }
}

/// Integers `(p, q)`, `q != 0`, solving the eps-scaled Dirichlet system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletWitness {
    p: Vec<i64>,
    q: Vec<i64>,
}

impl DirichletWitness {
    /// Checks the pair against the system and only then constructs it.
    pub fn new(
        system: &LinearFormSystem,
        t: &WeightVector,
        eps: f64,
        weak_q: bool,
        p: Vec<i64>,
        q: Vec<i64>,
    ) -> Result<Self> {
        let w = DirichletWitness { p, q };
        if w.verify(system, t, eps, weak_q) {
            Ok(w)
        } else {
            Err(Error::Precondition("pair (p, q) does not solve the system".into()))
        }
    }

    pub fn p(&self) -> &[i64] {
        &self.p
    }

    pub fn q(&self) -> &[i64] {
        &self.q
    }

    /// `|Y_i q - p_i| < eps e^{-t_i}` for all `i`, and `|q_j| < eps e^{t_{m+j}}`
    /// (or `<=` when `weak_q`), with `q != 0`.
    pub fn verify(&self, system: &LinearFormSystem, t: &WeightVector, eps: f64, weak_q: bool) -> bool {
        let (m, n) = (system.m(), system.n());
        if self.p.len() != m || self.q.len() != n || self.q.iter().all(|&x| x == 0) {
            return false;
        }
        if system.check_weights(t).is_err() {
            return false;
        }
        let tv = t.as_slice();
        let q_ok = self.q.iter().enumerate().all(|(j, &qj)| {
            let bound = eps * tv[m + j].exp();
            let a = (qj as f64).abs();
            if weak_q {
                a <= bound
            } else {
                a < bound
            }
        });
        let p_ok = (0..m).all(|i| {
            let mut hi = system.row(i).to_vec();
            hi.push(-1.0);
            let mut lo = system.row_lo(i).to_vec();
            lo.push(0.0);
            let mut c = self.q.clone();
            c.push(self.p[i]);
            let (a, b) = dd_dot_int(&hi, &lo, &c);
            (a + b).abs() < eps * (-tv[i]).exp()
        });
        q_ok && p_ok
    }
}

fn q_bounds(t: &WeightVector, eps: f64, weak_q: bool) -> Vec<i64> {
    let m = t.m();
    t.as_slice()[m..]
        .iter()
        .map(|&tj| {
            let b = eps * tj.exp();
            if weak_q {
                b.floor() as i64
            } else {
                (b.ceil() - 1.0).max(0.0) as i64
            }
        })
        .collect()
}

/// Direct search for a witness: every integer `q` in the admissible box whose
/// first nonzero entry is positive is tried in lexicographic order, with `p`
/// the nearest integer vector to `Yq`.
pub fn dirichlet_solvable_direct(
    system: &LinearFormSystem,
    t: &WeightVector,
    eps: f64,
    weak_q: bool,
) -> Result<Option<DirichletWitness>> {
    system.check_weights(t)?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::argument("eps", format!("must lie in (0, 1], got {eps}")));
    }
    let (m, n) = (system.m(), system.n());
    let bounds = q_bounds(t, eps, weak_q);
    let mut total: u64 = 1;
    for &b in &bounds {
        total = total.saturating_mul(2 * b as u64 + 1);
    }
    if total > DIRECT_BUDGET {
        return Err(Error::capacity(format!("direct Dirichlet enumeration of {total} candidates"), DIRECT_BUDGET));
    }
    if bounds.iter().all(|&b| b == 0) {
        return Ok(None);
    }
    let tv = t.as_slice();
    let tol: Vec<f64> = (0..m).map(|i| eps * (-tv[i]).exp()).collect();
    let mut q: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    let mut p = vec![0i64; m];
    loop {
        // (p, q) and (-p, -q) solve the same system: keep q with a positive leading entry
        if q.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0) {
            let mut ok = true;
            for i in 0..m {
                let (pi, r) = system.residual(i, &q);
                if !(r.abs() < tol[i]) {
                    ok = false;
                    break;
                }
                p[i] = pi;
            }
            if ok {
                return Ok(Some(DirichletWitness { p: p.clone(), q: q.clone() }));
            }
        }
        // odometer increment, last coordinate fastest
        let mut j = n;
        loop {
            if j == 0 {
                return Ok(None);
            }
            j -= 1;
            if q[j] < bounds[j] {
                q[j] += 1;
                break;
            }
            q[j] = -bounds[j];
        }
    }
}

/// Lattice-side answer together with the shortest vector that decided it.
pub(crate) fn lattice_decision(
    system: &LinearFormSystem,
    t: &WeightVector,
    eps: f64,
    margin: f64,
) -> Result<(Solvability, ShortestVectorResult)> {
    let basis = flowed_lattice(system, t)?;
    let sv = shortest_vector_supnorm(&basis, margin)?;
    let verdict = match crate::lattice::classify_length(sv.length, eps, margin) {
        KepsMembership::Outside => Solvability::Solvable,
        KepsMembership::Inside => Solvability::Unsolvable,
        KepsMembership::Boundary => Solvability::Boundary,
    };
    Ok((verdict, sv))
}

/// Extracts `(p, q)` from shortest-vector coefficients `(a, q)`, `p = -a`.
pub(crate) fn witness_from_coeffs(
    system: &LinearFormSystem,
    t: &WeightVector,
    eps: f64,
    coeffs: &[i64],
) -> Option<DirichletWitness> {
    let m = system.m();
    let p: Vec<i64> = coeffs[..m].iter().map(|a| -a).collect();
    let q = coeffs[m..].to_vec();
    DirichletWitness::new(system, t, eps, false, p, q).ok()
}

/// Solvability via the flowed lattice: solvable iff `g_t tau(Y) Z^k` lies
/// outside `K_eps`. Only the strict system (`0 < eps < 1`) is supported.
pub fn dirichlet_solvable_lattice(
    system: &LinearFormSystem,
    t: &WeightVector,
    eps: f64,
    margin: f64,
) -> Result<Solvability> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::argument("eps", format!("must lie in (0, 1), got {eps}")));
    }
    Ok(lattice_decision(system, t, eps, margin)?.0)
}
