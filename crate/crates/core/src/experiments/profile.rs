use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flow::{trajectory_lambda1, LinearFormSystem, TrajectoryFamily};
use crate::measures::stream_rng;
use crate::numeric::{dd_add, dd_pow10_neg, dd_sqrt};

/// Named real numbers `y` (as `1 x 1` systems), stored to double-double
/// precision so profiles stay meaningful for `q` well past `1e8`.
#[derive(Debug, Clone, PartialEq)]
pub enum NamedInput {
    /// `sum_{j <= J} 10^{-j!}`.
    Liouville(u32),
    /// `(sqrt(5) - 1) / 2`.
    GoldenRatio,
    Rational(i64, i64),
    /// Uniform in `[0, 1)` from the given seed.
    Random(u64),
}

impl NamedInput {
    /// `(hi, lo)` with `y = hi + lo`.
    pub fn value(&self) -> (f64, f64) {
        match *self {
            NamedInput::Liouville(j) => {
                let mut acc = (0.0, 0.0);
                let mut fact: u32 = 1;
                for i in 1..=j {
                    fact = fact.saturating_mul(i);
                    if fact > 400 {
                        break;
                    }
                    acc = dd_add(acc, dd_pow10_neg(fact));
                }
                acc
            }
            NamedInput::GoldenRatio => {
                let (s, e) = dd_sqrt(5.0);
                // s - 1 is exact for s in [2, 4)
                ((s - 1.0) / 2.0, e / 2.0)
            }
            NamedInput::Rational(p, q) => {
                let (pf, qf) = (p as f64, q as f64);
                let hi = pf / qf;
                (hi, -hi.mul_add(qf, -pf) / qf)
            }
            NamedInput::Random(seed) => (stream_rng(seed, 0).gen::<f64>(), 0.0),
        }
    }

    pub fn system(&self) -> LinearFormSystem {
        let (hi, lo) = self.value();
        LinearFormSystem::with_low_parts(1, 1, vec![hi], vec![lo]).expect("finite value")
    }

    /// `liouville(5)`, `golden_ratio`, `rational(1/3)`, `random(7)`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::argument("y", format!("unknown named input '{text}'"));
        let text = text.trim();
        if text == "golden_ratio" {
            return Ok(NamedInput::GoldenRatio);
        }
        let (name, arg) = text.split_once('(').ok_or_else(bad)?;
        let arg = arg.strip_suffix(')').ok_or_else(bad)?;
        match name {
            "liouville" => {
                let j: u32 = arg.parse().map_err(|_| bad())?;
                if j == 0 {
                    return Err(Error::argument("y", "liouville(J) needs J >= 1"));
                }
                Ok(NamedInput::Liouville(j))
            }
            "rational" => {
                let (p, q) = arg.split_once('/').ok_or_else(bad)?;
                let (p, q): (i64, i64) = (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?);
                if q <= 0 {
                    return Err(Error::argument("y", "rational(p/q) needs q > 0"));
                }
                Ok(NamedInput::Rational(p, q))
            }
            "random" => Ok(NamedInput::Random(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for NamedInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedInput::Liouville(j) => write!(f, "liouville({j})"),
            NamedInput::GoldenRatio => write!(f, "golden_ratio"),
            NamedInput::Rational(p, q) => write!(f, "rational({p}/{q})"),
            NamedInput::Random(s) => write!(f, "random({s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub t: Vec<f64>,
    pub norm: f64,
    pub lambda1: f64,
    /// Strict local minimum of the series.
    pub dip: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileReport {
    pub input: String,
    pub points: Vec<ProfilePoint>,
    pub min_lambda1: f64,
    pub argmin_norm: f64,
}

/// `lambda_1` along `family` for a named input, with local minima marked.
pub fn singular_profile(input: &NamedInput, family: &TrajectoryFamily, margin: f64) -> Result<ProfileReport> {
    lambda1_profile(&input.system(), &input.to_string(), family, margin)
}

/// [`singular_profile`] for an arbitrary system, labelled `input`.
pub fn lambda1_profile(
    system: &LinearFormSystem,
    input: &str,
    family: &TrajectoryFamily,
    margin: f64,
) -> Result<ProfileReport> {
    let series = trajectory_lambda1(system, family, margin)?;
    if series.is_empty() {
        return Err(Error::argument("family", "no weight vectors generated"));
    }
    let ls: Vec<f64> = series.iter().map(|(_, l)| *l).collect();
    let points: Vec<ProfilePoint> = series
        .iter()
        .enumerate()
        .map(|(i, (t, l))| {
            let left = i == 0 || ls[i - 1] > *l;
            let right = i + 1 == ls.len() || ls[i + 1] > *l;
            ProfilePoint { t: t.as_slice().to_vec(), norm: t.norm(), lambda1: *l, dip: left && right && ls.len() > 1 }
        })
        .collect();
    let (argmin, min) =
        points
            .iter()
            .map(|p| (p.norm, p.lambda1))
            .fold((f64::NAN, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    Ok(ProfileReport { input: input.to_string(), points, min_lambda1: min, argmin_norm: argmin })
}
