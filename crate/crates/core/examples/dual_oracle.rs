//! Lattice-side versus direct Dirichlet solvability on random systems.

use dirichlet_lab::experiments::dual_oracle_batch;

fn main() -> dirichlet_lab::Result<()> {
    let start = std::time::Instant::now();
    let r = dual_oracle_batch(2024, 500, 1e-9)?;
    println!(
        "agree {} disagree {} boundary {} dirichlet failures at eps=1: {}",
        r.agreements, r.disagreements, r.boundary, r.dirichlet_failures
    );
    for c in r.cases.iter().filter(|c| c.agree == Some(false)) {
        println!("mismatch: {c:?}");
    }
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
