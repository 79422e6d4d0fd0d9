use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{flowed_lattice, LinearFormSystem, WeightVector};
use crate::lattice::{classify_length, reduce_basis, shortest_vector_supnorm, KepsMembership};
use crate::measures::stream_rng;
use crate::numeric::{gcd_all, sup_norm};

/// Largest coefficient box searched for a lattice point near `e^u e_1`.
const NEARBY_BOX_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleCase {
    pub y: Vec<f64>,
    pub s: f64,
    pub t: Vec<f64>,
    /// Integer coordinates of `e^u e_1` in the flowed basis.
    pub primitive_coeffs: Vec<i64>,
    pub primitive: bool,
    pub lambda1: f64,
    pub short_vector: bool,
    /// Closest lattice point to `e^u e_1` other than itself, if within `eps`.
    pub nearby_distance: Option<f64>,
    /// `lambda1 <= nearby_distance` whenever a nearby point was found.
    pub consistent: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub eps: f64,
    pub e_u: f64,
    pub cases: Vec<CounterexampleCase>,
    pub failures: usize,
    pub pass: bool,
}

pub const EMPTY_WINDOW: &str = "empty parameter window: need 1/eps^2 < e^u < 2*eps";

/// Checks, for random `Y` in `M_{2,1}` and each `s`, that the lattice
/// `g_t tau(Y) Z^3` with `t = (u, s, s + u)` contains `e^u e_1` as a
/// primitive vector, has a nonzero vector shorter than `eps`, and has a
/// second lattice point within `eps` of `e^u e_1`.
pub fn counterexample_44(
    eps: f64,
    e_u: f64,
    s_list: &[f64],
    y_count: usize,
    seed: u64,
    margin: f64,
) -> Result<CounterexampleReport> {
    if !(1.0 / (eps * eps) < e_u && e_u < 2.0 * eps) {
        return Err(Error::Precondition(format!("{EMPTY_WINDOW} (eps = {eps}, e^u = {e_u})")));
    }
    if !(eps < 1.0) {
        return Err(Error::argument("eps", "must be below 1"));
    }
    if s_list.is_empty() || y_count == 0 {
        return Err(Error::argument("s_list", "need at least one s and one Y"));
    }
    let u = e_u.ln();
    let jobs: Vec<(Vec<f64>, f64)> = (0..y_count as u64)
        .flat_map(|i| {
            let mut rng = stream_rng(seed, i);
            let y = vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            s_list.iter().map(move |&s| (y.clone(), s))
        })
        .collect();
    let cases = jobs.par_iter().map(|(y, s)| check_case(y, *s, u, e_u, eps, margin)).collect::<Result<Vec<_>>>()?;
    let failures = cases.iter().filter(|c| !c.pass).count();
    Ok(CounterexampleReport { eps, e_u, cases, failures, pass: failures == 0 })
}

/// One `(Y, s)` case of [`counterexample_44`]. Does not check the parameter window.
pub fn counterexample_case(y: &[f64], s: f64, eps: f64, e_u: f64, margin: f64) -> Result<CounterexampleCase> {
    check_case(y, s, e_u.ln(), e_u, eps, margin)
}

fn check_case(y: &[f64], s: f64, u: f64, e_u: f64, eps: f64, margin: f64) -> Result<CounterexampleCase> {
    let system = LinearFormSystem::new(2, 1, y.to_vec())?;
    let t = WeightVector::new(2, 1, vec![u, s, s + u])?;
    let basis = flowed_lattice(&system, &t)?;
    let target = [e_u, 0.0, 0.0];

    // (a) solve B c = e^u e_1 and check integrality and primitivity
    let b = DMatrix::from_row_slice(3, 3, &basis.matrix());
    let c = b
        .lu()
        .solve(&DVector::from_column_slice(&target))
        .ok_or_else(|| Error::DegenerateBasis("flowed basis is singular".into()))?;
    let coeffs: Vec<i64> = c.iter().map(|x| x.round() as i64).collect();
    let integral = c.iter().all(|x| (x - x.round()).abs() < 1e-6);
    let image = basis.image(&coeffs);
    let hits = image.iter().zip(&target).all(|(a, b)| (a - b).abs() <= 1e-9 * e_u);
    let primitive = integral && hits && gcd_all(&coeffs) == 1;

    // (b) a nonzero vector shorter than eps
    let sv = shortest_vector_supnorm(&basis, margin)?;
    let short_vector = classify_length(sv.length, eps, margin) == KepsMembership::Outside;

    // (c) box search around e^u e_1 in reduced coordinates
    let nearby_distance = nearest_other_point(&basis, &target, eps)?;
    let consistent = nearby_distance.is_none_or(|d| sv.length <= d + margin);
    let pass = primitive && short_vector && nearby_distance.is_some() && consistent;
    Ok(CounterexampleCase {
        y: y.to_vec(),
        s,
        t: t.as_slice().to_vec(),
        primitive_coeffs: coeffs,
        primitive,
        lambda1: sv.length,
        short_vector,
        nearby_distance,
        consistent,
        pass,
    })
}

/// Smallest sup-distance below `eps` from `target` to a lattice point other
/// than `target` itself.
fn nearest_other_point(basis: &crate::lattice::LatticeBasis, target: &[f64], eps: f64) -> Result<Option<f64>> {
    let reduced = reduce_basis(basis)?.basis;
    let k = reduced.k();
    let inv = DMatrix::from_row_slice(k, k, &reduced.matrix())
        .try_inverse()
        .ok_or_else(|| Error::DegenerateBasis("reduced basis is singular".into()))?;
    let z = &inv * DVector::from_column_slice(target);
    let mut lo = Vec::with_capacity(k);
    let mut hi = Vec::with_capacity(k);
    let mut total: u64 = 1;
    for i in 0..k {
        let w = eps * inv.row(i).iter().map(|x| x.abs()).sum::<f64>();
        let (a, b) = ((z[i] - w).ceil() as i64, (z[i] + w).floor() as i64);
        if a > b {
            return Ok(None);
        }
        total = total.saturating_mul((b - a + 1) as u64);
        lo.push(a);
        hi.push(b);
    }
    if total > NEARBY_BOX_CAP {
        return Err(Error::capacity("coefficient box around e^u e_1", NEARBY_BOX_CAP));
    }
    let mut best: Option<f64> = None;
    let mut c = lo.clone();
    loop {
        let v = reduced.image(&c);
        let diff: Vec<f64> = v.iter().zip(target).map(|(a, b)| a - b).collect();
        let d = sup_norm(&diff);
        // the target itself is a lattice point at distance ~0; skip it
        if d < eps && d > 1e-9 * sup_norm(target) {
            best = Some(best.map_or(d, |b: f64| b.min(d)));
        }
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(best);
            }
            j -= 1;
            if c[j] < hi[j] {
                c[j] += 1;
                break;
            }
            c[j] = lo[j];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_window_is_rejected() {
        let err = counterexample_44(0.6, 1.5, &[3.0], 1, 0, 1e-9).unwrap_err();
        assert!(err.to_string().contains(EMPTY_WINDOW), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn specific_case_passes() {
        let c = check_case(&[0.3, -1.2], 5.0, 1.5f64.ln(), 1.5, 0.9, 1e-9).unwrap();
        assert!(c.primitive, "{c:?}");
        assert!(c.pass, "{c:?}");
    }
}
