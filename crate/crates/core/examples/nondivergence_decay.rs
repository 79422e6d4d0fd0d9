//! Escape-fraction decay for the Veronese curve over Lebesgue measure on [0, 1].

use dirichlet_lab::experiments::nondiv_decay_scan;
use dirichlet_lab::flow::WeightVector;
use dirichlet_lab::measures::{Ball, MapSpec, MeasureSpec};

fn main() -> dirichlet_lab::Result<()> {
    let map = MapSpec::veronese(2)?;
    let measure = MeasureSpec::lebesgue(vec![0.0], vec![1.0])?;
    let ball = Ball::interval(0.0, 1.0)?;
    let t_list: Vec<WeightVector> = [(6.0, 3.0), (8.0, 4.0), (10.0, 5.0)]
        .iter()
        .map(|&(a, b)| WeightVector::new(1, 2, vec![a, b, b]))
        .collect::<Result<_, _>>()?;
    let eps = [0.4, 0.2, 0.1, 0.05];
    let start = std::time::Instant::now();
    let report = nondiv_decay_scan(&map, &measure, &ball, &t_list, &eps, 20_000, 1, 1e-9)?;
    for r in &report.records {
        println!("t={:?} eps={:<5} escape={:.4} +- {:.4} (boundary {})", r.t, r.eps, r.fraction, r.ci, r.boundary_n);
    }
    for f in &report.per_t {
        println!("slope t={:?}: {:?} ({} points dropped)", f.t.as_ref().unwrap(), f.slope, f.excluded);
    }
    println!("envelope: C2={:?} alpha={:?}", report.c2, report.alpha);
    for (e, v) in &report.variation {
        println!("variation over t at eps={e}: {v:.4}");
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
