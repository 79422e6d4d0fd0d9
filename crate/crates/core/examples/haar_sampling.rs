//! Haar-random planar lattices and the volume of K_eps, compared with
//! `1 - 12 eps^2 / pi^2` (valid for eps < 1/sqrt 2).

use dirichlet_lab::experiments::{haar_volume_k2, HAAR_TRUNCATED_MASS};
use std::f64::consts::PI;

fn main() -> dirichlet_lab::Result<()> {
    let grid: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    println!("truncated mass {HAAR_TRUNCATED_MASS:.2e}");
    println!("{:>5} {:>9} {:>8} {:>9}", "eps", "vol", "ci", "formula");
    for (eps, vol, ci, _) in haar_volume_k2(&grid, 200_000, 1, 1e-9)? {
        let exact =
            if eps < 1.0 / 2f64.sqrt() { format!("{:.5}", 1.0 - 12.0 * eps * eps / (PI * PI)) } else { "-".into() };
        println!("{eps:>5.2} {vol:>9.5} {ci:>8.5} {exact:>9}");
    }
    Ok(())
}
