use rayon::prelude::*;
use serde::Serialize;

use super::dirichlet::{lattice_decision, witness_from_coeffs};
use super::{flowed_lattice, DirichletWitness, LinearFormSystem, Solvability, TrajectoryFamily, WeightVector};
use crate::error::{Error, Result};
use crate::lattice::shortest_vector_supnorm;

/// Final third of the horizon is the window in which an unsolvable `t`
/// counts as "arbitrarily late".
pub const DEFAULT_TAIL_FRACTION: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DIRecord {
    pub t: WeightVector,
    pub lambda1: f64,
    pub solvable: Solvability,
    pub witness: Option<DirichletWitness>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DIVerdict {
    /// Every tested `t` in the tail window is solvable.
    ImprovableUpToHorizon,
    /// An unsolvable `t` exists in the tail window.
    NotImprovableWitnessed,
    /// No unsolvable `t` in the tail, but some boundary cases there.
    IndeterminateBoundary,
}

impl DIVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            DIVerdict::ImprovableUpToHorizon => "improvable-up-to-horizon",
            DIVerdict::NotImprovableWitnessed => "not-improvable-witnessed",
            DIVerdict::IndeterminateBoundary => "indeterminate-boundary",
        }
    }
}

/// Horizon-bounded evidence about membership of `Y` in `DI_eps` along a family.
#[derive(Debug, Clone, PartialEq)]
pub struct DIReport {
    pub eps: f64,
    pub horizon: f64,
    /// Records with norm above this form the tail window.
    pub tail_start: f64,
    pub records: Vec<DIRecord>,
    /// Largest `||t||` at which the system was not solvable.
    pub last_unsolvable_norm: Option<f64>,
    pub verdict: DIVerdict,
}

/// One JSON-lines row of a [`DIReport`].
#[derive(Debug, Clone, Serialize)]
pub struct DIRow {
    pub t: Vec<f64>,
    pub norm: f64,
    pub floor: f64,
    pub lambda1: f64,
    pub solvable: &'static str,
    pub witness_p: Option<Vec<i64>>,
    pub witness_q: Option<Vec<i64>>,
}

impl DIRecord {
    pub fn row(&self) -> DIRow {
        DIRow {
            t: self.t.as_slice().to_vec(),
            norm: self.t.norm(),
            floor: self.t.floor(),
            lambda1: self.lambda1,
            solvable: self.solvable.as_str(),
            witness_p: self.witness.as_ref().map(|w| w.p().to_vec()),
            witness_q: self.witness.as_ref().map(|w| w.q().to_vec()),
        }
    }
}

/// Lattice verdict, `lambda_1` and (when solvable) a witness at a single `t`.
pub fn dirichlet_record(system: &LinearFormSystem, t: &WeightVector, eps: f64, margin: f64) -> Result<DIRecord> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::argument("eps", format!("must lie in (0, 1), got {eps}")));
    }
    let (mut solvable, sv) = lattice_decision(system, t, eps, margin)?;
    let witness = if solvable == Solvability::Solvable {
        let w = witness_from_coeffs(system, t, eps, &sv.coeffs);
        if w.is_none() {
            // lattice and direct checks disagree only within rounding of the boundary
            solvable = Solvability::Boundary;
        }
        w
    } else {
        None
    };
    Ok(DIRecord { t: t.clone(), lambda1: sv.length, solvable, witness })
}

/// Classifies `Y` along `family` up to `horizon_norm`.
///
/// The verdict only ever reports finite-horizon evidence: improvable if every
/// tested `t` in the tail window `(horizon * (1 - tail), horizon]` is
/// solvable, not improvable if one of them is unsolvable.
pub fn di_classify(
    system: &LinearFormSystem,
    family: &TrajectoryFamily,
    eps: f64,
    horizon_norm: f64,
    margin: f64,
) -> Result<DIReport> {
    di_classify_with_tail(system, family, eps, horizon_norm, margin, DEFAULT_TAIL_FRACTION)
}

pub fn di_classify_with_tail(
    system: &LinearFormSystem,
    family: &TrajectoryFamily,
    eps: f64,
    horizon_norm: f64,
    margin: f64,
    tail_fraction: f64,
) -> Result<DIReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::argument("eps", format!("must lie in (0, 1), got {eps}")));
    }
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(Error::argument("tail_fraction", "must lie in (0, 1]"));
    }
    let all = family.generate()?;
    if !all.iter().any(|t| t.norm() >= 0.9 * horizon_norm) {
        return Err(Error::argument("horizon", format!("family never reaches 0.9 * horizon = {}", 0.9 * horizon_norm)));
    }
    let tested: Vec<WeightVector> = all.into_iter().filter(|t| t.norm() <= horizon_norm).collect();
    let tail_start = horizon_norm * (1.0 - tail_fraction);
    if !tested.iter().any(|t| t.norm() > tail_start) {
        return Err(Error::argument("family", "no tested weight vector falls in the tail window"));
    }
    let records = tested.par_iter().map(|t| dirichlet_record(system, t, eps, margin)).collect::<Result<Vec<_>>>()?;
    let last_unsolvable_norm = records
        .iter()
        .filter(|r| r.solvable == Solvability::Unsolvable)
        .map(|r| r.t.norm())
        .fold(None, |acc: Option<f64>, x| Some(acc.map_or(x, |a| a.max(x))));
    let tail = records.iter().filter(|r| r.t.norm() > tail_start);
    let mut boundary = false;
    let mut unsolvable = false;
    for r in tail {
        match r.solvable {
            Solvability::Unsolvable => unsolvable = true,
            Solvability::Boundary => boundary = true,
            Solvability::Solvable => {}
        }
    }
    let verdict = if unsolvable {
        DIVerdict::NotImprovableWitnessed
    } else if boundary {
        DIVerdict::IndeterminateBoundary
    } else {
        DIVerdict::ImprovableUpToHorizon
    };
    Ok(DIReport { eps, horizon: horizon_norm, tail_start, records, last_unsolvable_norm, verdict })
}

/// `lambda_1(g_t tau(Y) Z^k)` for every `t` of the family, in generation order.
pub fn trajectory_lambda1(
    system: &LinearFormSystem,
    family: &TrajectoryFamily,
    margin: f64,
) -> Result<Vec<(WeightVector, f64)>> {
    let ts = family.generate()?;
    ts.into_par_iter()
        .map(|t| {
            let b = flowed_lattice(system, &t)?;
            let l = shortest_vector_supnorm(&b, margin)?.length;
            Ok((t, l))
        })
        .collect()
}
