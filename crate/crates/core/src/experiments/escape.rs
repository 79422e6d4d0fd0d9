use rayon::prelude::*;
use serde::Serialize;

use super::ReportRecord;
use crate::error::{Error, Result};
use crate::flow::{flowed_lattice, LinearFormSystem, WeightVector};
use crate::lattice::{classify_length, shortest_vector_supnorm, KepsMembership};
use crate::measures::{Ball, MapSpec, MeasureSpec};
use crate::numeric::linear_fit;

fn check_eps_grid(eps_grid: &[f64]) -> Result<()> {
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(Error::argument("eps", "every eps must lie in (0, 1)"));
    }
    Ok(())
}

/// Escape fractions `nu{x in B : g_t tau(f(x)) not in K_eps} / nu(B)` for
/// every `(t, eps)` pair. All cells share the same sample points, so the
/// fractions are monotone in `eps` at each `t`.
#[allow(clippy::too_many_arguments)]
pub fn escape_scan(
    map: &MapSpec,
    measure: &MeasureSpec,
    ball: &Ball,
    t_list: &[WeightVector],
    eps_grid: &[f64],
    n: usize,
    seed: u64,
    margin: f64,
) -> Result<Vec<ReportRecord>> {
    check_eps_grid(eps_grid)?;
    if t_list.is_empty() {
        return Err(Error::argument("t", "need at least one weight vector"));
    }
    for t in t_list {
        if t.m() != 1 || t.n() != map.n() {
            return Err(Error::argument("t", format!("need m=1, n={} weight vectors", map.n())));
        }
    }
    if measure.dim() != map.d() || ball.dim() != map.d() {
        return Err(Error::argument("measure", "measure and ball must live in the map's domain"));
    }
    let pts: Vec<Vec<f64>> = measure.sample(seed, n).into_iter().filter(|x| ball.contains(x)).collect();
    if pts.is_empty() {
        return Err(Error::EmptySupport { samples: n });
    }
    let systems: Vec<LinearFormSystem> =
        pts.iter().map(|x| LinearFormSystem::new(1, map.n(), map.eval(x))).collect::<Result<_>>()?;
    let mut records = Vec::new();
    for t in t_list {
        let lengths: Vec<f64> = systems
            .par_iter()
            .map(|y| Ok(shortest_vector_supnorm(&flowed_lattice(y, t)?, margin)?.length))
            .collect::<Result<_>>()?;
        for &eps in eps_grid {
            let (mut hits, mut boundary) = (0, 0);
            for &l in &lengths {
                match classify_length(l, eps, margin) {
                    KepsMembership::Outside => hits += 1,
                    KepsMembership::Boundary => boundary += 1,
                    KepsMembership::Inside => {}
                }
            }
            records.push(ReportRecord::from_counts("escape", seed, t, eps, hits, lengths.len() - boundary, boundary));
        }
    }
    Ok(records)
}

/// A single `(t, eps)` cell of [`escape_scan`].
#[allow(clippy::too_many_arguments)]
pub fn escape_measure(
    map: &MapSpec,
    measure: &MeasureSpec,
    ball: &Ball,
    t: &WeightVector,
    eps: f64,
    n: usize,
    seed: u64,
    margin: f64,
) -> Result<ReportRecord> {
    let mut r = escape_scan(map, measure, ball, std::slice::from_ref(t), &[eps], n, seed, margin)?;
    Ok(r.remove(0))
}

/// Least-squares fit of `log(fraction)` against `log(eps)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    /// `None` for the envelope fit over all `t`.
    pub t: Option<Vec<f64>>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub used: usize,
    /// Points dropped because no sample escaped.
    pub excluded: usize,
}

fn fit(t: Option<Vec<f64>>, points: &[(f64, f64)]) -> SlopeFit {
    let kept: Vec<(f64, f64)> = points.iter().copied().filter(|(_, f)| *f > 0.0).collect();
    let xs: Vec<f64> = kept.iter().map(|(e, _)| e.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|(_, f)| f.ln()).collect();
    let line = if kept.len() >= 2 { linear_fit(&xs, &ys) } else { None };
    SlopeFit {
        t,
        slope: line.map(|l| l.1),
        intercept: line.map(|l| l.0),
        used: kept.len(),
        excluded: points.len() - kept.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub records: Vec<ReportRecord>,
    pub per_t: Vec<SlopeFit>,
    /// Fit of the max-over-`t` fraction at each `eps`.
    pub envelope: SlopeFit,
    /// Fitted `C_2 = exp(intercept)` of the envelope.
    pub c2: Option<f64>,
    /// Fitted exponent of the envelope.
    pub alpha: Option<f64>,
    /// `(eps, max - min fraction over t)`.
    pub variation: Vec<(f64, f64)>,
}

/// Escape fractions on a `t x eps` grid plus power-law fits in `eps`.
#[allow(clippy::too_many_arguments)]
pub fn nondiv_decay_scan(
    map: &MapSpec,
    measure: &MeasureSpec,
    ball: &Ball,
    t_list: &[WeightVector],
    eps_grid: &[f64],
    n: usize,
    seed: u64,
    margin: f64,
) -> Result<DecayReport> {
    let mut records = escape_scan(map, measure, ball, t_list, eps_grid, n, seed, margin)?;
    for r in &mut records {
        r.experiment = "decay".into();
    }
    let ne = eps_grid.len();
    let per_t: Vec<SlopeFit> = t_list
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let pts: Vec<(f64, f64)> = records[i * ne..(i + 1) * ne].iter().map(|r| (r.eps, r.fraction)).collect();
            fit(Some(t.as_slice().to_vec()), &pts)
        })
        .collect();
    let mut envelope_pts = Vec::new();
    let mut variation = Vec::new();
    for (j, &eps) in eps_grid.iter().enumerate() {
        let column: Vec<f64> = (0..t_list.len()).map(|i| records[i * ne + j].fraction).collect();
        let hi = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = column.iter().copied().fold(f64::INFINITY, f64::min);
        envelope_pts.push((eps, hi));
        variation.push((eps, hi - lo));
    }
    let envelope = fit(None, &envelope_pts);
    Ok(DecayReport { c2: envelope.intercept.map(f64::exp), alpha: envelope.slope, records, per_t, envelope, variation })
}
