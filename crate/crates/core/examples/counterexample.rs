//! A drifting family in M_{2,1} along which every Y is eps-Dirichlet improvable.

use dirichlet_lab::experiments::counterexample_44;

fn main() -> dirichlet_lab::Result<()> {
    let start = std::time::Instant::now();
    let s_list: Vec<f64> = (3..=8).map(f64::from).collect();
    let report = counterexample_44(0.9, 1.5, &s_list, 100, 11, 1e-9)?;
    let worst = report.cases.iter().map(|c| c.lambda1).fold(0.0, f64::max);
    println!("{} cases, {} failures, largest lambda_1 {worst:.4}", report.cases.len(), report.failures);
    if let Some(c) = report.cases.iter().find(|c| !c.pass) {
        println!("first failure: {c:?}");
    }
    match counterexample_44(0.6, 1.5, &s_list, 1, 11, 1e-9) {
        Err(e) => println!("eps = 0.6: {e}"),
        Ok(_) => println!("eps = 0.6 unexpectedly accepted"),
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
