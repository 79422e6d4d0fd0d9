use serde::Serialize;

use crate::error::{Error, Result};

/// A known threshold `eps_0` below which a curve or manifold is not
/// Dirichlet-improvable.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Epsilon0 {
    pub key: String,
    pub value: f64,
    pub formula: &'static str,
    pub statement: &'static str,
}

fn veronese_explicit(n: u32) -> f64 {
    let nf = n as f64;
    1.0 / (nf.powi(n as i32) * (nf + 1.0).powi(2) * 2f64.powi((n * n + n) as i32))
}

fn drv_manifolds(n: u32) -> f64 {
    2f64.powf(-(n as f64) / (n as f64 + 1.0))
}

/// The table of thresholds, with the `n`-dependent rows evaluated at `n`.
pub fn epsilon0_registry(n: u32) -> Vec<Epsilon0> {
    vec![
        Epsilon0 {
            key: "davenport_schmidt_curve".into(),
            value: 4f64.powf(-1.0 / 3.0),
            formula: "4^(-1/3)",
            statement: "Davenport-Schmidt: almost every point of (x, x^2) is not in DI_eps for eps < 4^(-1/3)",
        },
        Epsilon0 {
            key: "bugeaud_veronese".into(),
            value: 1.0 / 8.0,
            formula: "1/8",
            statement: "Bugeaud: almost every point of the Veronese curve is not in DI_eps for eps < 1/8",
        },
        Epsilon0 {
            key: format!("veronese_explicit({n})"),
            value: veronese_explicit(n),
            formula: "1/(n^n (n+1)^2 2^(n^2+n))",
            statement: "Veronese curve (x, ..., x^n) under a friendly measure on the line: not in DI_eps along drifting families",
        },
        Epsilon0 {
            key: format!("drv_manifolds({n})"),
            value: drv_manifolds(n),
            formula: "2^(-n/(n+1))",
            statement: "Davenport-Schmidt bound for nondegenerate manifolds in R^n",
        },
        Epsilon0 {
            key: "khintchine_density".into(),
            value: 0.5,
            formula: "1/2",
            statement: "Khintchine: for n = 1, almost every y is not in DI_eps as long as eps < 1/2",
        },
    ]
}

/// Looks up one constant, e.g. `bugeaud_veronese` or `drv_manifolds(3)`.
pub fn epsilon0(key: &str) -> Result<f64> {
    let (name, n) = match key.split_once('(') {
        Some((name, rest)) => {
            let n: u32 = rest
                .strip_suffix(')')
                .and_then(|s| s.parse().ok())
                .filter(|n| *n >= 1)
                .ok_or_else(|| Error::argument("key", format!("bad argument in '{key}'")))?;
            (name, Some(n))
        }
        None => (key, None),
    };
    match (name, n) {
        ("davenport_schmidt_curve", None) => Ok(4f64.powf(-1.0 / 3.0)),
        ("bugeaud_veronese", None) => Ok(0.125),
        ("khintchine_density", None) => Ok(0.5),
        ("veronese_explicit", Some(n)) => Ok(veronese_explicit(n)),
        ("drv_manifolds", Some(n)) => Ok(drv_manifolds(n)),
        _ => Err(Error::argument("key", format!("unknown constant '{key}'"))),
    }
}
