//! Badly approximable quality of a few numbers as Qmax grows.

use dirichlet_lab::experiments::NamedInput;
use dirichlet_lab::flow::{ba_quality, LinearFormSystem};

fn main() -> dirichlet_lab::Result<()> {
    let inputs = [
        ("golden ratio", NamedInput::GoldenRatio.system()),
        ("sqrt 2", LinearFormSystem::new(1, 1, vec![2f64.sqrt()])?),
        ("liouville(4)", NamedInput::Liouville(4).system()),
    ];
    for (name, y) in inputs {
        let row: Vec<String> = [10, 100, 1000, 100_000]
            .iter()
            .map(|&q| ba_quality(&y, &[1.0], &[1.0], q).map(|v| format!("{v:.3e}")))
            .collect::<Result<_, _>>()?;
        println!("{name:>13}: {}", row.join("  "));
    }
    let pair = LinearFormSystem::new(1, 2, vec![2f64.sqrt(), 3f64.sqrt()])?;
    println!("(sqrt 2, sqrt 3), s = (1/2, 1/2): {:.4}", ba_quality(&pair, &[1.0], &[0.5, 0.5], 300)?);
    Ok(())
}
