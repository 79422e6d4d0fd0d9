//! Measures, polynomial maps, and Monte Carlo testers for the goodness,
//! doubling and nonplanarity conditions.
//!
//! Balls are sup-norm balls (cubes). Every estimate here is empirical: a
//! finite grid and finite samples, reported with counts and binomial
//! half-widths, never a proof.

mod poly;
mod registry;

pub use poly::{MapSpec, Polynomial};
pub use registry::{epsilon0, epsilon0_registry, Epsilon0};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::binomial_half_width;
use poly::{check_keys, get_parsed, key_values};

/// Default digit depth for self-similar sampling.
pub const DEFAULT_IFS_DEPTH: u32 = 20;
/// Smallest normalized singular value still counted as full rank.
pub const NONPLANAR_THRESHOLD: f64 = 1e-8;

/// The random stream for sample `index` under `seed`. Samples drawn this way
/// do not depend on how work is split between threads.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A closed sup-norm ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || center.is_empty() || center.iter().any(|c| !c.is_finite()) {
            return Err(Error::argument("ball", "need a finite center and a positive radius"));
        }
        Ok(Ball { center, radius })
    }

    /// The ball `[lo, hi]` on the line.
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(hi > lo) {
            return Err(Error::argument("ball", format!("empty interval [{lo}, {hi}]")));
        }
        Ball::new(vec![(lo + hi) / 2.0], (hi - lo) / 2.0)
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().zip(&self.center).all(|(a, c)| (a - c).abs() <= self.radius)
    }

    pub fn scaled(&self, factor: f64) -> Ball {
        Ball { center: self.center.clone(), radius: self.radius * factor }
    }
}

/// One contracting similarity `x -> ratio * x + translation`.
#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    pub ratio: f64,
    pub translation: Vec<f64>,
    pub prob: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Uniform measure on the box `prod [lower_i, upper_i]`.
    LebesgueBox { lower: Vec<f64>, upper: Vec<f64> },
    /// Self-similar measure of an iterated function system.
    SelfSimilar { maps: Vec<Similarity>, open_set_condition: bool, depth: u32 },
    /// Image of `base` under `map`.
    Pushforward { map: MapSpec, base: Box<MeasureSpec> },
}

impl MeasureSpec {
    pub fn lebesgue(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() || lower.iter().zip(&upper).any(|(a, b)| !(b > a)) {
            return Err(Error::argument("box", "need matching corners with lower < upper in every coordinate"));
        }
        Ok(MeasureSpec::LebesgueBox { lower, upper })
    }

    /// Lebesgue measure on `[0, 1]^d`.
    pub fn unit_cube(d: usize) -> Self {
        MeasureSpec::LebesgueBox { lower: vec![0.0; d], upper: vec![1.0; d] }
    }

    pub fn self_similar(maps: Vec<Similarity>, open_set_condition: bool, depth: u32) -> Result<Self> {
        let d = maps.first().map_or(0, |m| m.translation.len());
        if d == 0 || maps.iter().any(|m| m.translation.len() != d) {
            return Err(Error::argument("trans", "all translations must share one dimension d >= 1"));
        }
        if maps.iter().any(|m| !(m.ratio > 0.0 && m.ratio < 1.0)) {
            return Err(Error::argument("ratios", "contraction ratios must lie in (0, 1)"));
        }
        if maps.iter().any(|m| !(m.prob >= 0.0)) {
            return Err(Error::argument("probs", "probabilities must be nonnegative"));
        }
        let total: f64 = maps.iter().map(|m| m.prob).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::argument("probs", format!("probabilities sum to {total}, not 1")));
        }
        if depth == 0 {
            return Err(Error::argument("depth", "must be at least 1"));
        }
        Ok(MeasureSpec::SelfSimilar { maps, open_set_condition, depth })
    }

    /// The middle-thirds Cantor measure.
    pub fn cantor(depth: u32) -> Self {
        let maps = vec![
            Similarity { ratio: 1.0 / 3.0, translation: vec![0.0], prob: 0.5 },
            Similarity { ratio: 1.0 / 3.0, translation: vec![2.0 / 3.0], prob: 0.5 },
        ];
        MeasureSpec::SelfSimilar { maps, open_set_condition: true, depth }
    }

    pub fn pushforward(map: MapSpec, base: MeasureSpec) -> Result<Self> {
        if map.d() != base.dim() {
            return Err(Error::argument(
                "map",
                format!("map expects d={} but the measure lives in d={}", map.d(), base.dim()),
            ));
        }
        Ok(MeasureSpec::Pushforward { map, base: Box::new(base) })
    }

    /// Dimension of the space the measure lives on.
    pub fn dim(&self) -> usize {
        match self {
            MeasureSpec::LebesgueBox { lower, .. } => lower.len(),
            MeasureSpec::SelfSimilar { maps, .. } => maps[0].translation.len(),
            MeasureSpec::Pushforward { map, .. } => map.n(),
        }
    }

    /// Digit depth needed so that sampled points lie within `resolution` of the attractor.
    pub fn ifs_depth_for(resolution: f64, max_ratio: f64) -> u32 {
        (resolution.ln() / (1.0 / max_ratio).ln()).abs().ceil() as u32
    }

    pub fn sample_one<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            MeasureSpec::LebesgueBox { lower, upper } => {
                lower.iter().zip(upper).map(|(a, b)| a + (b - a) * rng.gen::<f64>()).collect()
            }
            MeasureSpec::SelfSimilar { maps, depth, .. } => {
                let digits: Vec<usize> = (0..*depth).map(|_| pick(maps, rng.gen::<f64>())).collect();
                let mut x = vec![0.0; maps[0].translation.len()];
                for &a in digits.iter().rev() {
                    let s = &maps[a];
                    for (xi, ti) in x.iter_mut().zip(&s.translation) {
                        *xi = ti + s.ratio * *xi;
                    }
                }
                x
            }
            MeasureSpec::Pushforward { map, base } => map.eval(&base.sample_one(rng)),
        }
    }

    /// `count` samples; sample `i` uses [`stream_rng`]`(seed, i)`.
    pub fn sample(&self, seed: u64, count: usize) -> Vec<Vec<f64>> {
        (0..count as u64).into_par_iter().map(|i| self.sample_one(&mut stream_rng(seed, i))).collect()
    }

    /// `measure lebesgue d=1 box=0,1` or
    /// `measure ifs ratios=1/3,1/3 trans=0,2/3 probs=1/2,1/2`.
    /// Multi-dimensional translations are `;`-separated vectors.
    pub fn parse(line: &str) -> Result<Self> {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("measure") {
            return Err(Error::argument("measure", format!("expected 'measure ...', got '{line}'")));
        }
        let kind = toks.next().ok_or_else(|| Error::argument("measure", "missing measure kind"))?;
        let kv = key_values(toks)?;
        match kind {
            "lebesgue" => {
                check_keys(&kv, &["d", "box"])?;
                let d: usize = get_parsed(&kv, "d")?;
                let raw: String = get_parsed(&kv, "box")?;
                let vals = parse_list(&raw, "box")?;
                if vals.len() != 2 * d {
                    return Err(Error::argument("box", format!("expected {} numbers lo1,hi1,...", 2 * d)));
                }
                MeasureSpec::lebesgue(
                    vals.iter().step_by(2).copied().collect(),
                    vals.iter().skip(1).step_by(2).copied().collect(),
                )
            }
            "ifs" => {
                check_keys(&kv, &["d", "ratios", "trans", "probs", "depth", "osc"])?;
                let d: usize = if kv.iter().any(|(k, _)| *k == "d") { get_parsed(&kv, "d")? } else { 1 };
                let ratios = parse_list(&get_parsed::<String>(&kv, "ratios")?, "ratios")?;
                let probs = parse_list(&get_parsed::<String>(&kv, "probs")?, "probs")?;
                let trans_raw: String = get_parsed(&kv, "trans")?;
                let trans: Vec<Vec<f64>> = if d == 1 {
                    parse_list(&trans_raw, "trans")?.into_iter().map(|x| vec![x]).collect()
                } else {
                    trans_raw.split(';').map(|g| parse_list(g, "trans")).collect::<Result<_>>()?
                };
                if ratios.len() != probs.len() || ratios.len() != trans.len() {
                    return Err(Error::argument("ratios", "ratios, trans and probs must have equal lengths"));
                }
                let depth =
                    if kv.iter().any(|(k, _)| *k == "depth") { get_parsed(&kv, "depth")? } else { DEFAULT_IFS_DEPTH };
                let osc = if kv.iter().any(|(k, _)| *k == "osc") { get_parsed(&kv, "osc")? } else { true };
                let maps = ratios
                    .into_iter()
                    .zip(trans)
                    .zip(probs)
                    .map(|((ratio, translation), prob)| Similarity { ratio, translation, prob })
                    .collect();
                MeasureSpec::self_similar(maps, osc, depth)
            }
            other => Err(Error::argument("measure", format!("unknown measure kind '{other}'"))),
        }
    }

    /// Text form; pushforwards render as the map line followed by the base line.
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        match self {
            MeasureSpec::LebesgueBox { lower, upper } => {
                let corners: Vec<f64> = lower.iter().zip(upper).flat_map(|(a, b)| [*a, *b]).collect();
                format!("measure lebesgue d={} box={}", lower.len(), list(&corners))
            }
            MeasureSpec::SelfSimilar { maps, open_set_condition, depth } => {
                let d = maps[0].translation.len();
                let ratios: Vec<f64> = maps.iter().map(|m| m.ratio).collect();
                let probs: Vec<f64> = maps.iter().map(|m| m.prob).collect();
                let trans =
                    maps.iter().map(|m| list(&m.translation)).collect::<Vec<_>>().join(if d == 1 { "," } else { ";" });
                format!(
                    "measure ifs d={d} ratios={} trans={trans} probs={} depth={depth} osc={open_set_condition}",
                    list(&ratios),
                    list(&probs)
                )
            }
            MeasureSpec::Pushforward { map, base } => format!("{}\n{}", map.to_text(), base.to_text()),
        }
    }
}

fn pick(maps: &[Similarity], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, m) in maps.iter().enumerate() {
        acc += m.prob;
        if u < acc {
            return i;
        }
    }
    maps.len() - 1
}

fn parse_list(raw: &str, key: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|x| {
            let x = x.trim();
            let v = match x.split_once('/') {
                Some((a, b)) => a.parse::<f64>().ok().zip(b.parse::<f64>().ok()).map(|(a, b)| a / b),
                None => x.parse::<f64>().ok(),
            };
            v.filter(|v| v.is_finite()).ok_or_else(|| Error::argument(key, format!("cannot parse '{x}'")))
        })
        .collect()
}

/// Positive constants of the goodness inequality, the doubling ratio and the
/// lower bound on `ell_V`, plus optional placeholders for the decay constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GoodnessParams {
    pub c: f64,
    pub alpha: f64,
    pub d: f64,
    pub rho: f64,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
}

impl GoodnessParams {
    pub fn new(c: f64, alpha: f64, d: f64, rho: f64) -> Result<Self> {
        for (name, v) in [("C", c), ("alpha", alpha), ("D", d), ("rho", rho)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::argument(name, format!("must be positive, got {v}")));
            }
        }
        if alpha > 1.0 {
            return Err(Error::argument("alpha", format!("must be at most 1, got {alpha}")));
        }
        Ok(GoodnessParams { c, alpha, d, rho, c1: None, c2: None })
    }
}

/// Monte Carlo supremum of `|f|` over support points in a ball.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupEstimate {
    /// An underestimate of the true supremum.
    pub value: f64,
    pub in_ball: usize,
    pub samples: usize,
}

fn points_in_ball(measure: &MeasureSpec, ball: &Ball, seed: u64, samples: usize) -> Result<Vec<Vec<f64>>> {
    if ball.dim() != measure.dim() {
        return Err(Error::argument(
            "ball",
            format!("ball is in dimension {}, measure in {}", ball.dim(), measure.dim()),
        ));
    }
    let pts: Vec<Vec<f64>> = measure.sample(seed, samples).into_iter().filter(|x| ball.contains(x)).collect();
    if pts.is_empty() {
        return Err(Error::EmptySupport { samples });
    }
    Ok(pts)
}

pub fn sup_norm_on_support<F>(
    f: F,
    measure: &MeasureSpec,
    ball: &Ball,
    samples: usize,
    seed: u64,
) -> Result<SupEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let pts = points_in_ball(measure, ball, seed, samples)?;
    let value = pts.par_iter().map(|x| f(x).abs()).reduce(|| 0.0, f64::max);
    Ok(SupEstimate { value, in_ball: pts.len(), samples })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CGoodRow {
    pub eps: f64,
    pub fraction: f64,
    pub ci: f64,
    /// `fraction * (sup / eps)^alpha`.
    pub c_needed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CGoodEstimate {
    /// Smallest `C` consistent with every tested `eps`.
    pub c: f64,
    pub sup_norm: f64,
    pub in_ball: usize,
    pub rows: Vec<CGoodRow>,
}

/// Smallest `C` with `nu{|f| < eps} / nu(B) <= C (eps / sup|f|)^alpha` on the grid.
pub fn cgood_empirical<F>(
    f: F,
    measure: &MeasureSpec,
    ball: &Ball,
    alpha: f64,
    eps_grid: &[f64],
    samples: usize,
    seed: u64,
) -> Result<CGoodEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::argument("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if eps_grid.is_empty() || eps_grid.iter().any(|e| !(*e > 0.0)) || eps_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::argument("eps_grid", "must be positive and strictly increasing"));
    }
    let pts = points_in_ball(measure, ball, seed, samples)?;
    let values: Vec<f64> = pts.par_iter().map(|x| f(x).abs()).collect();
    let sup = values.iter().copied().fold(0.0, f64::max);
    if sup == 0.0 {
        return Err(Error::DegenerateFunction);
    }
    let n = values.len();
    let rows: Vec<CGoodRow> = eps_grid
        .iter()
        .map(|&eps| {
            let hits = values.iter().filter(|v| **v < eps).count();
            let fraction = hits as f64 / n as f64;
            CGoodRow { eps, fraction, ci: binomial_half_width(hits, n), c_needed: fraction * (sup / eps).powf(alpha) }
        })
        .collect();
    let c = rows.iter().map(|r| r.c_needed).fold(0.0, f64::max);
    Ok(CGoodEstimate { c, sup_norm: sup, in_ball: n, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FedererBall {
    pub center: Vec<f64>,
    pub radius: f64,
    pub inner: usize,
    pub outer: usize,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FedererEstimate {
    /// Largest observed `nu(3B) / nu(B)`; a lower estimate of the doubling constant.
    pub max_ratio: f64,
    pub balls: Vec<FedererBall>,
    pub samples: usize,
}

/// Number of radii tried, log-spaced in `[U.r / 6, U.r / 3]`.
const FEDERER_RADII: usize = 4;

/// Estimates `sup nu(3B)/nu(B)` over balls centered on support points with
/// `3B` inside `U`. Centers are the first admissible sampled points.
pub fn federer_empirical(
    measure: &MeasureSpec,
    u: &Ball,
    ball_count: usize,
    samples: usize,
    seed: u64,
) -> Result<FedererEstimate> {
    if ball_count == 0 {
        return Err(Error::argument("ball_count", "must be positive"));
    }
    let pts = points_in_ball(measure, u, seed, samples)?;
    let per_radius = ball_count.div_ceil(FEDERER_RADII);
    let (r_lo, r_hi) = (u.radius / 6.0, u.radius / 3.0);
    let mut balls = Vec::new();
    for ri in 0..FEDERER_RADII {
        let r = r_lo * (r_hi / r_lo).powf(ri as f64 / (FEDERER_RADII - 1) as f64);
        let centers = pts
            .iter()
            .filter(|c| c.iter().zip(&u.center).all(|(a, b)| (a - b).abs() + 3.0 * r <= u.radius))
            .take(per_radius);
        for c in centers {
            let b = Ball { center: c.clone(), radius: r };
            let big = b.scaled(3.0);
            let (inner, outer) = pts
                .par_iter()
                .map(|x| (usize::from(b.contains(x)), usize::from(big.contains(x))))
                .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
            balls.push(FedererBall { center: c.clone(), radius: r, inner, outer, ratio: outer as f64 / inner as f64 });
        }
    }
    if balls.is_empty() {
        return Err(Error::EmptySupport { samples });
    }
    let max_ratio = balls.iter().map(|b| b.ratio).fold(0.0, f64::max);
    Ok(FedererEstimate { max_ratio, balls, samples })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonplanarReport {
    pub nonplanar: bool,
    pub smallest_singular_value: f64,
    pub samples_used: usize,
}

/// Rank test of `(1, f_1, ..., f_n)` at sampled domain points in `ball`,
/// after scaling each column to unit length.
pub fn nonplanar_test(
    map: &MapSpec,
    measure: &MeasureSpec,
    ball: &Ball,
    samples: usize,
    seed: u64,
) -> Result<NonplanarReport> {
    if measure.dim() != map.d() {
        return Err(Error::argument("measure", "the domain measure must live in the map's domain"));
    }
    let pts = points_in_ball(measure, ball, seed, samples)?;
    let n = map.n();
    if pts.len() < n + 1 {
        return Err(Error::EmptySupport { samples });
    }
    let rows: Vec<Vec<f64>> = pts.iter().map(|x| map.eval(x)).collect();
    let mut m = DMatrix::from_fn(pts.len(), n + 1, |i, j| if j == 0 { 1.0 } else { rows[i][j - 1] });
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if norm > 0.0 {
            col /= norm;
        }
    }
    let sv = m.singular_values();
    let smallest = sv.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(NonplanarReport {
        nonplanar: smallest > NONPLANAR_THRESHOLD,
        smallest_singular_value: smallest,
        samples_used: pts.len(),
    })
}

/// Smallest `l` such that the partial derivatives of `f` at `x` of orders
/// `1..=l` span `R^n`, or `None` if no order up to the degree does.
pub fn nondegeneracy_order(map: &MapSpec, x: &[f64]) -> Result<Option<usize>> {
    if x.len() != map.d() {
        return Err(Error::argument("x", format!("expected a point in dimension {}", map.d())));
    }
    let n = map.n();
    let mut vectors: Vec<Vec<f64>> = Vec::new();
    // current layer: all partial derivatives of order `l`, as component lists
    let mut layer: Vec<Vec<Polynomial>> = vec![map.components().to_vec()];
    for l in 1..=map.degree() as usize {
        let mut next = Vec::new();
        for comps in &layer {
            for var in 0..map.d() {
                next.push(comps.iter().map(|p| p.derivative(var)).collect::<Vec<_>>());
            }
        }
        next.dedup();
        vectors.extend(next.iter().map(|comps| comps.iter().map(|p| p.eval(x)).collect::<Vec<_>>()));
        if rank(&vectors, n) == n {
            return Ok(Some(l));
        }
        layer = next;
    }
    Ok(None)
}

fn rank(vectors: &[Vec<f64>], n: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = DMatrix::from_fn(n, vectors.len(), |i, j| vectors[j][i]);
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    sv.iter().filter(|s| **s > 1e-10 * top).count()
}

/// `l C_d max_i (A_i / a_i)^{1/l} (eps / sup_f)^{1/(d l)}`.
pub fn lemma42_bound(ell: u32, d: usize, a: &[f64], big_a: &[f64], c_d: f64, eps: f64, sup_f: f64) -> Result<f64> {
    if ell == 0 || d == 0 || a.len() != d || big_a.len() != d {
        return Err(Error::argument("a", "need l >= 1 and d-vectors a, A"));
    }
    if a.iter().zip(big_a).any(|(lo, hi)| !(*lo > 0.0 && lo <= hi)) {
        return Err(Error::argument("a", "need 0 < a_i <= A_i"));
    }
    if !(sup_f > 0.0) || !(eps > 0.0) || !(c_d > 0.0) {
        return Err(Error::argument("sup_f", "eps, sup_f and C_d must be positive"));
    }
    let l = ell as f64;
    let ratio = a.iter().zip(big_a).map(|(lo, hi)| (hi / lo).powf(1.0 / l)).fold(0.0, f64::max);
    Ok(l * c_d * ratio * (eps / sup_f).powf(1.0 / (d as f64 * l)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_sampling_is_repeatable() {
        let m = MeasureSpec::unit_cube(1);
        let a = m.sample(0, 3);
        assert_eq!(a, m.sample(0, 3));
        assert!(a.iter().all(|x| (0.0..=1.0).contains(&x[0])));
    }

    #[test]
    fn measure_text_round_trip() {
        for line in [
            "measure lebesgue d=1 box=0,1",
            "measure lebesgue d=2 box=0,1,-1,2",
            "measure ifs ratios=1/3,1/3 trans=0,2/3 probs=1/2,1/2",
            "measure ifs d=2 ratios=0.5,0.5,0.5 trans=0,0;0.5,0;0,0.5 probs=0.25,0.25,0.5 depth=12 osc=true",
        ] {
            let m = MeasureSpec::parse(line).unwrap();
            assert_eq!(MeasureSpec::parse(&m.to_text()).unwrap(), m, "{line}");
        }
        assert!(MeasureSpec::parse("measure ifs ratios=1/3 trans=0 probs=0.5").is_err());
        assert!(MeasureSpec::parse("measure lebesgue d=1 box=0,1 extra=2").is_err());
    }

    #[test]
    fn cantor_gap_is_empty() {
        let c = MeasureSpec::cantor(20);
        let b = Ball::interval(0.4, 0.6).unwrap();
        let r = sup_norm_on_support(|x| x[0] - 0.5, &c, &b, 2000, 1);
        assert!(matches!(r, Err(Error::EmptySupport { .. })));
    }

    #[test]
    fn constant_function_goodness() {
        let est = cgood_empirical(
            |_| 1.0,
            &MeasureSpec::unit_cube(1),
            &Ball::interval(0.0, 1.0).unwrap(),
            1.0,
            &[0.1, 0.5, 1.0 + 1e-9, 2.0],
            1000,
            0,
        )
        .unwrap();
        assert_eq!(est.rows[0].fraction, 0.0);
        assert!((est.c - 1.0).abs() < 1e-8);
        assert!((est.rows[3].c_needed - 0.5).abs() < 1e-12);
        let zero = cgood_empirical(
            |_| 0.0,
            &MeasureSpec::unit_cube(1),
            &Ball::interval(0.0, 1.0).unwrap(),
            1.0,
            &[0.1],
            100,
            0,
        );
        assert!(matches!(zero, Err(Error::DegenerateFunction)));
    }

    #[test]
    fn nondegeneracy_examples() {
        for n in 1..=4 {
            let v = MapSpec::veronese(n).unwrap();
            for x in [-1.3, 0.0, 0.7] {
                assert_eq!(nondegeneracy_order(&v, &[x]).unwrap(), Some(n));
            }
        }
        let line = MapSpec::parse("map poly d=1 n=2 f1=x f2=2*x").unwrap();
        assert_eq!(nondegeneracy_order(&line, &[0.3]).unwrap(), None);
        let bowl = MapSpec::parse("map poly d=2 n=3 f1=x f2=y f3=x^2+y^2").unwrap();
        assert_eq!(nondegeneracy_order(&bowl, &[0.0, 0.0]).unwrap(), Some(2));
    }

    #[test]
    fn lemma42_examples() {
        let b = lemma42_bound(1, 1, &[1.0], &[1.0], 2.0, 0.1, 1.0).unwrap();
        assert!((b - 0.2).abs() < 1e-15);
        let b2 = lemma42_bound(2, 1, &[1.0], &[3.0], 2.0, 0.2, 1.0).unwrap();
        let b1 = lemma42_bound(2, 1, &[1.0], &[3.0], 2.0, 0.1, 1.0).unwrap();
        assert!((b2 / b1 - 2f64.powf(0.5)).abs() < 1e-12);
    }
}
