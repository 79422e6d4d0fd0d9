use std::cmp::Ordering;

use super::reduce::{gram_schmidt, reduce_basis};
use super::LatticeBasis;
use crate::error::{Error, Result};
use crate::numeric::sup_norm;

/// Default decision margin for all `eps` comparisons.
pub const DEFAULT_MARGIN: f64 = 1e-9;
/// Default cap on enumeration nodes.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvpOptions {
    /// Extra slack added to the enumeration radius and used as the
    /// boundary width when an `eps` comparison is in progress.
    pub margin: f64,
    pub node_cap: u64,
}

impl Default for SvpOptions {
    fn default() -> Self {
        SvpOptions { margin: DEFAULT_MARGIN, node_cap: DEFAULT_NODE_CAP }
    }
}

/// A shortest nonzero lattice vector in the sup-norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestVectorResult {
    /// Coefficients with respect to the input basis; first nonzero entry positive.
    pub coeffs: Vec<i64>,
    /// `basis * coeffs`.
    pub image: Vec<f64>,
    /// Sup-norm of `image`.
    pub length: f64,
    /// Set when the length is within the margin of the `eps` being compared.
    pub boundary: bool,
}

/// Membership of a lattice in `K_eps`, the lattices without nonzero vectors
/// of sup-norm below `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KepsMembership {
    Inside,
    Outside,
    Boundary,
}

pub fn shortest_vector_supnorm(basis: &LatticeBasis, margin: f64) -> Result<ShortestVectorResult> {
    shortest_vector_with(basis, &SvpOptions { margin, ..SvpOptions::default() })
}

/// Shortest vector with the boundary flag set relative to `eps`.
pub fn shortest_vector_near(basis: &LatticeBasis, eps: f64, margin: f64) -> Result<ShortestVectorResult> {
    let mut r = shortest_vector_supnorm(basis, margin)?;
    r.boundary = (r.length - eps).abs() <= margin;
    Ok(r)
}

/// Classifies a lattice against `K_eps`: inside iff `lambda_1 >= eps + margin`,
/// outside iff `lambda_1 < eps - margin`, boundary otherwise.
pub fn in_k_eps(basis: &LatticeBasis, eps: f64, margin: f64) -> Result<KepsMembership> {
    if !(eps > 0.0) {
        return Err(Error::argument("eps", "must be positive"));
    }
    let r = shortest_vector_supnorm(basis, margin)?;
    Ok(classify_length(r.length, eps, margin))
}

pub fn classify_length(length: f64, eps: f64, margin: f64) -> KepsMembership {
    if length >= eps + margin {
        KepsMembership::Inside
    } else if length < eps - margin {
        KepsMembership::Outside
    } else {
        KepsMembership::Boundary
    }
}

fn normalize_sign(c: &mut [i64]) {
    if let Some(&first) = c.iter().find(|&&x| x != 0) {
        if first < 0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn lengths_tie(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-13 * a.max(b)
}

struct Search<'a> {
    basis: &'a LatticeBasis,
    transform: &'a super::IntMatrix,
    mu: Vec<Vec<f64>>,
    norms_sq: Vec<f64>,
    k: usize,
    x: Vec<i64>,
    radius_sq: f64,
    margin: f64,
    nodes: u64,
    cap: u64,
    best: Option<(f64, Vec<i64>, Vec<f64>)>,
}

impl Search<'_> {
    fn update_radius(&mut self) {
        if let Some((len, _, _)) = &self.best {
            let r = len * (1.0 + 1e-12) + self.margin;
            self.radius_sq = self.k as f64 * r * r;
        }
    }

    fn consider_leaf(&mut self) -> Result<()> {
        if self.x.iter().all(|&v| v == 0) {
            return Ok(());
        }
        let mut coeffs = self
            .transform
            .apply(&self.x)
            .ok_or_else(|| Error::capacity("coefficient overflow during enumeration", i64::MAX as u64))?;
        normalize_sign(&mut coeffs);
        let image = self.basis.image(&coeffs);
        let len = sup_norm(&image);
        let better = match &self.best {
            None => true,
            Some((bl, bc, _)) => {
                if lengths_tie(len, *bl) {
                    coeffs.cmp(bc) == Ordering::Less
                } else {
                    len < *bl
                }
            }
        };
        if better {
            self.best = Some((len, coeffs, image));
            self.update_radius();
        }
        Ok(())
    }

    fn descend(&mut self, level: usize, partial: f64) -> Result<()> {
        let mut center = 0.0;
        for j in level + 1..self.k {
            center -= self.mu[j][level] * self.x[j] as f64;
        }
        let room = self.radius_sq - partial;
        if room < 0.0 {
            return Ok(());
        }
        let width = (room / self.norms_sq[level]).sqrt();
        let lo = (center - width).ceil() as i64;
        let hi = (center + width).floor() as i64;
        for v in lo..=hi {
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::capacity("shortest-vector enumeration nodes", self.cap));
            }
            let d = v as f64 - center;
            let next = partial + d * d * self.norms_sq[level];
            if next > self.radius_sq {
                continue;
            }
            self.x[level] = v;
            if level == 0 {
                self.consider_leaf()?;
            } else {
                self.descend(level - 1, next)?;
            }
        }
        self.x[level] = 0;
        Ok(())
    }
}

/// Globally minimal nonzero sup-norm vector.
///
/// The basis is LLL-reduced first; then every integer vector whose Euclidean
/// length is at most `sqrt(k)` times the best sup-norm seen so far is
/// enumerated (Fincke-Pohst with a shrinking radius). Any vector of sup-norm
/// at most `r` has Euclidean norm at most `sqrt(k) r`, so the search is
/// exhaustive. Ties are broken by the lexicographic order of the
/// sign-normalized coefficients.
pub fn shortest_vector_with(basis: &LatticeBasis, opts: &SvpOptions) -> Result<ShortestVectorResult> {
    if !(opts.margin >= 0.0) {
        return Err(Error::argument("margin", "must be nonnegative"));
    }
    let k = basis.k();
    let reduced = reduce_basis(basis)?;
    let cols: Vec<Vec<f64>> = (0..k).map(|j| reduced.basis.column(j)).collect();
    let gs = gram_schmidt(&cols);
    if gs.norms_sq.iter().any(|n| !(*n > 0.0)) {
        return Err(Error::DegenerateBasis("vanishing Gram-Schmidt norm".into()));
    }
    let mut search = Search {
        basis,
        transform: &reduced.transform,
        mu: gs.mu,
        norms_sq: gs.norms_sq,
        k,
        x: vec![0; k],
        radius_sq: f64::INFINITY,
        margin: opts.margin,
        nodes: 0,
        cap: opts.node_cap,
        best: None,
    };
    // seed the radius with the reduced basis vectors themselves
    for j in 0..k {
        search.x = vec![0; k];
        search.x[j] = 1;
        search.consider_leaf()?;
    }
    search.x = vec![0; k];
    search.descend(k - 1, 0.0)?;
    let (length, coeffs, image) = search.best.expect("basis vectors seed the search");
    Ok(ShortestVectorResult { coeffs, image, length, boundary: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::random_unimodular;

    #[test]
    fn standard_lattice_has_unit_minimum() {
        for k in 2..=6 {
            let r = shortest_vector_supnorm(&LatticeBasis::identity(k), DEFAULT_MARGIN).unwrap();
            assert_eq!(r.length, 1.0);
            assert_eq!(r.coeffs.iter().filter(|&&c| c != 0).count(), 1);
            assert_eq!(r.coeffs.iter().map(|c| c.abs()).sum::<i64>(), 1);
        }
    }

    #[test]
    fn diagonal_flowed_lattice() {
        let t = 2.0f64;
        let b = LatticeBasis::with_row_scaling(vec![t.exp(), (-t).exp()], 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        let r = shortest_vector_supnorm(&b, DEFAULT_MARGIN).unwrap();
        assert!((r.length - (-2f64).exp()).abs() < 1e-15);
        assert_eq!(r.coeffs, vec![0, 1]);
    }

    #[test]
    fn membership_examples() {
        let z3 = LatticeBasis::identity(3);
        assert_eq!(in_k_eps(&z3, 0.5, DEFAULT_MARGIN).unwrap(), KepsMembership::Inside);
        assert_eq!(in_k_eps(&z3, 1.01, DEFAULT_MARGIN).unwrap(), KepsMembership::Outside);
        assert_eq!(in_k_eps(&z3, 1.0, DEFAULT_MARGIN).unwrap(), KepsMembership::Boundary);
        let d = LatticeBasis::with_row_scaling(vec![2f64.exp(), (-2f64).exp()], 2, vec![1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(in_k_eps(&d, 0.2, DEFAULT_MARGIN).unwrap(), KepsMembership::Outside);
        assert!(in_k_eps(&d, 0.0, DEFAULT_MARGIN).is_err());
    }

    #[test]
    fn boundary_flag_tracks_eps() {
        let r = shortest_vector_near(&LatticeBasis::identity(2), 1.0, 1e-9).unwrap();
        assert!(r.boundary);
        let r = shortest_vector_near(&LatticeBasis::identity(2), 0.5, 1e-9).unwrap();
        assert!(!r.boundary);
    }

    #[test]
    fn node_cap_is_reported() {
        let b = random_unimodular(1, 6, 1.0);
        let err = shortest_vector_with(&b, &SvpOptions { margin: 0.0, node_cap: 3 }).unwrap_err();
        assert!(matches!(err, Error::Capacity { cap: 3, .. }));
    }
}
