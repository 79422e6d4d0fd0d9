//! Pushed horocycle pieces versus Haar measure on the space of planar lattices,
//! and the same translates in rank 3, where only stabilization can be checked.

use dirichlet_lab::experiments::{equidist_stability, equidist_test_k2};
use dirichlet_lab::flow::WeightVector;
use dirichlet_lab::measures::Ball;

fn main() -> dirichlet_lab::Result<()> {
    let start = std::time::Instant::now();
    for t in [2.0, 9.0] {
        let t = WeightVector::central(1, 1, t)?;
        for y0 in [0.0, 0.3, 0.7] {
            let r = equidist_test_k2((0.0, 1.0), y0, &t, 0.5, 100_000, 100_000, 7, 1e-9)?;
            println!(
                "t={:?} y0={y0}: translate {:.4} haar {:.4} discrepancy {:+.4}",
                r.t, r.translate, r.haar, r.discrepancy
            );
        }
    }

    let ts: Vec<WeightVector> = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0]
        .iter()
        .map(|&s| WeightVector::new(1, 2, vec![2.0 * s, s, s]))
        .collect::<Result<_, _>>()?;
    let ball = Ball::new(vec![0.5, 0.5], 0.5)?;
    for y0 in [[0.0, 0.0], [0.3, 0.7]] {
        let r = equidist_stability(&y0, &ball, &ts, 0.5, 20_000, (7, 8), 1e-9)?;
        let masses: Vec<String> = r.records[..ts.len()].iter().map(|c| format!("{:.4}", c.fraction)).collect();
        let worst = r.seed_gaps.iter().zip(&r.seed_tolerances).map(|(g, t)| g / t).fold(0.0, f64::max);
        println!("k=3 y0={y0:?}: masses {}; seed gap / tolerance <= {worst:.2}", masses.join(" "));
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
