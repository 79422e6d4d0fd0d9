use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::flow::{dirichlet_solvable_direct, dirichlet_solvable_lattice, LinearFormSystem, Solvability, WeightVector};
use crate::measures::stream_rng;

/// Random `(Y, t, eps)` with `m, n` in `{1, 2}`, entries of `Y` in `[-3, 3]`,
/// `eps` in `[0.2, 0.95]`, and the weights of the smaller side in `[0.2, 5]`
/// so that the floor of `t` stays below 6.
pub fn random_case(seed: u64, index: u64) -> (LinearFormSystem, WeightVector, f64) {
    let mut rng = stream_rng(seed, index);
    let m = rng.gen_range(1..=2);
    let n = rng.gen_range(1..=2);
    let y: Vec<f64> = (0..m * n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    let t = if m == 1 {
        let q: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..5.0)).collect();
        let mut t = vec![q.iter().sum()];
        t.extend(q);
        t
    } else {
        let a: Vec<f64> = (0..m).map(|_| rng.gen_range(0.2..5.0)).collect();
        let total: f64 = a.iter().sum();
        let mut t = a;
        if n == 1 {
            t.push(total);
        } else {
            let w = rng.gen_range(0.2..0.8);
            t.push(total * w);
            t.push(total - total * w);
        }
        t
    };
    let eps = rng.gen_range(0.2..0.95);
    let system = LinearFormSystem::new(m, n, y).expect("finite entries");
    let t = WeightVector::new(m, n, t).expect("balanced by construction");
    (system, t, eps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualOracleCase {
    pub index: u64,
    pub m: usize,
    pub n: usize,
    pub y: Vec<f64>,
    pub t: Vec<f64>,
    pub eps: f64,
    pub lattice: Solvability,
    pub direct: bool,
    /// `None` for boundary cases.
    pub agree: Option<bool>,
    /// The weak system at `eps = 1` has a witness.
    pub dirichlet_at_one: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualOracleReport {
    pub seed: u64,
    pub cases: Vec<DualOracleCase>,
    pub agreements: usize,
    pub disagreements: usize,
    pub boundary: usize,
    pub dirichlet_failures: usize,
}

/// Compares the lattice and direct Dirichlet solvers on `count` random cases,
/// and checks Dirichlet's theorem at `eps = 1` on the same `(Y, t)`.
pub fn dual_oracle_batch(seed: u64, count: usize, margin: f64) -> Result<DualOracleReport> {
    let cases = (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let (y, t, eps) = random_case(seed, i);
            let lattice = dirichlet_solvable_lattice(&y, &t, eps, margin)?;
            let direct = dirichlet_solvable_direct(&y, &t, eps, false)?.is_some();
            let agree = match lattice {
                Solvability::Boundary => None,
                Solvability::Solvable => Some(direct),
                Solvability::Unsolvable => Some(!direct),
            };
            let dirichlet_at_one = dirichlet_solvable_direct(&y, &t, 1.0, true)?.is_some();
            Ok(DualOracleCase {
                index: i,
                m: y.m(),
                n: y.n(),
                y: y.entries().to_vec(),
                t: t.as_slice().to_vec(),
                eps,
                lattice,
                direct,
                agree,
                dirichlet_at_one,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let agreements = cases.iter().filter(|c| c.agree == Some(true)).count();
    let disagreements = cases.iter().filter(|c| c.agree == Some(false)).count();
    let boundary = cases.iter().filter(|c| c.agree.is_none()).count();
    let dirichlet_failures = cases.iter().filter(|c| !c.dirichlet_at_one).count();
    Ok(DualOracleReport { seed, cases, agreements, disagreements, boundary, dirichlet_failures })
}
