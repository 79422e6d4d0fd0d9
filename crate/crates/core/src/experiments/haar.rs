use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::ReportRecord;
use crate::error::{Error, Result};
use crate::flow::{flowed_lattice, LinearFormSystem, WeightVector};
use crate::lattice::{classify_length, shortest_vector_supnorm, KepsMembership, LatticeBasis};
use crate::measures::{stream_rng, Ball};
use crate::numeric::binomial_half_width;

/// Upper cutoff of the fundamental-domain height.
pub const HAAR_Y_MAX: f64 = 1000.0;
/// Haar mass above the cutoff: `(1 / Y_max) / (pi / 3)`.
pub const HAAR_TRUNCATED_MASS: f64 = 3.0 / (PI * HAAR_Y_MAX);
/// Keeps the Haar oracle's random streams apart from the translate samples.
const HAAR_SALT: u64 = 0x9e37_79b9_7f4a_7c15;

/// A point `(x, y)` of the standard fundamental domain `|x| <= 1/2`,
/// `x^2 + y^2 >= 1`, with a rotation angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HaarPoint {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl HaarPoint {
    /// `R_theta [[1/sqrt(y), x/sqrt(y)], [0, sqrt(y)]]`.
    pub fn basis(&self) -> LatticeBasis {
        let s = self.y.sqrt();
        let m = [1.0 / s, self.x / s, 0.0, s];
        let (sn, cs) = self.theta.sin_cos();
        let rows = vec![cs * m[0] - sn * m[2], cs * m[1] - sn * m[3], sn * m[0] + cs * m[2], sn * m[1] + cs * m[3]];
        LatticeBasis::from_rows(2, rows).expect("rotation of a unimodular matrix")
    }
}

fn draw_point<R: Rng>(rng: &mut R) -> HaarPoint {
    let a = 3f64.sqrt() / 2.0;
    let (inv_a, inv_max) = (1.0 / a, 1.0 / HAAR_Y_MAX);
    loop {
        let u: f64 = rng.gen();
        let y = 1.0 / (inv_a - u * (inv_a - inv_max));
        let x: f64 = rng.gen::<f64>() - 0.5;
        if x * x + y * y >= 1.0 {
            let theta = 2.0 * PI * rng.gen::<f64>();
            return HaarPoint { x, y, theta };
        }
    }
}

/// Haar-distributed points of the fundamental domain (truncated at [`HAAR_Y_MAX`]).
pub fn haar_points_k2(seed: u64, count: usize) -> Vec<HaarPoint> {
    (0..count as u64).into_par_iter().map(|i| draw_point(&mut stream_rng(seed, i))).collect()
}

/// Haar-random unimodular lattices in the plane.
pub fn haar_sample_k2(seed: u64, count: usize) -> Vec<LatticeBasis> {
    haar_points_k2(seed, count).iter().map(HaarPoint::basis).collect()
}

/// Estimated `vol(K_eps)` for each `eps`, as `(eps, fraction, ci, boundary)`.
/// All grid points share one sample.
pub fn haar_volume_k2(eps_grid: &[f64], count: usize, seed: u64, margin: f64) -> Result<Vec<(f64, f64, f64, usize)>> {
    let lengths: Vec<f64> = haar_sample_k2(seed, count)
        .par_iter()
        .map(|b| Ok(shortest_vector_supnorm(b, margin)?.length))
        .collect::<Result<_>>()?;
    Ok(eps_grid
        .iter()
        .map(|&eps| {
            let (inside, boundary) = count_inside(&lengths, eps, margin);
            let n = lengths.len() - boundary;
            (eps, inside as f64 / n as f64, binomial_half_width(inside, n), boundary)
        })
        .collect())
}

fn count_inside(lengths: &[f64], eps: f64, margin: f64) -> (usize, usize) {
    let (mut inside, mut boundary) = (0, 0);
    for &l in lengths {
        match classify_length(l, eps, margin) {
            KepsMembership::Inside => inside += 1,
            KepsMembership::Boundary => boundary += 1,
            KepsMembership::Outside => {}
        }
    }
    (inside, boundary)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquidistReport {
    pub y0: f64,
    pub interval: (f64, f64),
    pub t: Vec<f64>,
    pub eps: f64,
    /// Fraction of `x in B` with `g_t tau(x) tau(y0) Z^2` in `K_eps`.
    pub translate: f64,
    pub translate_ci: f64,
    pub translate_n: usize,
    pub translate_boundary: usize,
    /// Haar estimate of `vol(K_eps)`.
    pub haar: f64,
    pub haar_ci: f64,
    pub haar_n: usize,
    pub haar_boundary: usize,
    pub discrepancy: f64,
}

impl EquidistReport {
    /// The translate and Haar cells as report records.
    pub fn records(&self, seed: u64) -> Vec<ReportRecord> {
        let t = WeightVector::new(1, 1, self.t.clone()).expect("validated on construction");
        let cell = |name: &str, frac: f64, ci: f64, n: usize, b: usize| ReportRecord {
            experiment: name.to_string(),
            seed,
            t: self.t.clone(),
            floor_t: t.floor(),
            norm_t: t.norm(),
            eps: self.eps,
            fraction: frac,
            ci,
            n,
            boundary_n: b,
        };
        vec![
            cell(
                &format!("equidist-translate[y0={}]", self.y0),
                self.translate,
                self.translate_ci,
                self.translate_n,
                self.translate_boundary,
            ),
            cell("equidist-haar", self.haar, self.haar_ci, self.haar_n, self.haar_boundary),
        ]
    }
}

/// Compares the `K_eps` mass of the pushed translate of `{tau(x) tau(y0) Z^2 : x in B}`
/// with the Haar volume of `K_eps`.
#[allow(clippy::too_many_arguments)]
pub fn equidist_test_k2(
    interval: (f64, f64),
    y0: f64,
    t: &WeightVector,
    eps: f64,
    n: usize,
    haar_n: usize,
    seed: u64,
    margin: f64,
) -> Result<EquidistReport> {
    if t.m() != 1 || t.n() != 1 {
        return Err(Error::argument("t", "equidistribution is implemented for k = 2 only"));
    }
    if !(interval.1 > interval.0) {
        return Err(Error::argument("interval", "need lo < hi"));
    }
    if !(eps > 0.0) || n == 0 || haar_n == 0 {
        return Err(Error::argument("eps", "need eps > 0 and positive sample counts"));
    }
    let (lo, hi) = interval;
    // tau(x) tau(y0) = tau(x + y0)
    let lengths: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let x = lo + (hi - lo) * stream_rng(seed, i).gen::<f64>();
            let y = LinearFormSystem::new(1, 1, vec![x + y0])?;
            Ok(shortest_vector_supnorm(&flowed_lattice(&y, t)?, margin)?.length)
        })
        .collect::<Result<_>>()?;
    let (inside, tb) = count_inside(&lengths, eps, margin);
    let tn = n - tb;
    let translate = inside as f64 / tn as f64;
    let vol = haar_volume_k2(&[eps], haar_n, seed ^ HAAR_SALT, margin)?;
    let (_, haar, haar_ci, hb) = vol[0];
    Ok(EquidistReport {
        y0,
        interval,
        t: t.as_slice().to_vec(),
        eps,
        translate,
        translate_ci: binomial_half_width(inside, tn),
        translate_n: tn,
        translate_boundary: tb,
        haar,
        haar_ci,
        haar_n: haar_n - hb,
        haar_boundary: hb,
        discrepancy: translate - haar,
    })
}

/// `K_eps` mass of `{g_t tau(x) tau(y0) Z^k : x in B}` for `m = 1` and any `n`,
/// with `x` uniform in the sup-norm ball `B`.
#[allow(clippy::too_many_arguments)]
pub fn translate_mass(
    y0: &[f64],
    ball: &Ball,
    t: &WeightVector,
    eps: f64,
    n: usize,
    seed: u64,
    margin: f64,
) -> Result<ReportRecord> {
    if t.m() != 1 || t.n() != y0.len() || ball.dim() != y0.len() {
        return Err(Error::argument("t", format!("need m = 1 and n = {} for this base point", y0.len())));
    }
    if !(eps > 0.0) || n == 0 {
        return Err(Error::argument("eps", "need eps > 0 and a positive sample count"));
    }
    let lengths: Vec<f64> = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let y: Vec<f64> =
                ball.center.iter().zip(y0).map(|(c, y)| c + ball.radius * (2.0 * rng.gen::<f64>() - 1.0) + y).collect();
            let y = LinearFormSystem::new(1, y0.len(), y)?;
            Ok(shortest_vector_supnorm(&flowed_lattice(&y, t)?, margin)?.length)
        })
        .collect::<Result<_>>()?;
    let (inside, boundary) = count_inside(&lengths, eps, margin);
    Ok(ReportRecord::from_counts("translate", seed, t, eps, inside, n - boundary, boundary))
}

/// Two-seed agreement and step sizes of [`translate_mass`] along a list of
/// `t`. Without a Haar oracle in higher rank these are the available signs
/// of convergence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub y0: Vec<f64>,
    pub eps: f64,
    /// Cells for the first seed, then for the second, in `t` order.
    pub records: Vec<ReportRecord>,
    /// `|mass_a - mass_b|` per `t`.
    pub seed_gaps: Vec<f64>,
    /// `2 (ci_a + ci_b)` per `t`.
    pub seed_tolerances: Vec<f64>,
    /// `|mass(t_{i+1}) - mass(t_i)|` with seeds pooled.
    pub steps: Vec<f64>,
}

#[allow(clippy::too_many_arguments)]
pub fn equidist_stability(
    y0: &[f64],
    ball: &Ball,
    t_list: &[WeightVector],
    eps: f64,
    n: usize,
    seeds: (u64, u64),
    margin: f64,
) -> Result<StabilityReport> {
    if t_list.is_empty() {
        return Err(Error::argument("t", "need at least one weight vector"));
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in t_list {
        a.push(translate_mass(y0, ball, t, eps, n, seeds.0, margin)?);
        b.push(translate_mass(y0, ball, t, eps, n, seeds.1, margin)?);
    }
    let seed_gaps = a.iter().zip(&b).map(|(x, y)| (x.fraction - y.fraction).abs()).collect();
    let seed_tolerances = a.iter().zip(&b).map(|(x, y)| 2.0 * (x.ci + y.ci)).collect();
    let pooled: Vec<f64> = a.iter().zip(&b).map(|(x, y)| (x.fraction + y.fraction) / 2.0).collect();
    let steps = pooled.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    a.extend(b);
    Ok(StabilityReport { y0: y0.to_vec(), eps, records: a, seed_gaps, seed_tolerances, steps })
}
