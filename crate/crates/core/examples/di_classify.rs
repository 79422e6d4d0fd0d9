//! lambda_1 along the central ray for named inputs, and the resulting
//! horizon-bounded verdict on eps-improvability.

use dirichlet_lab::experiments::{singular_profile, NamedInput};
use dirichlet_lab::flow::{di_classify, TrajectoryFamily};

fn main() -> dirichlet_lab::Result<()> {
    let family = TrajectoryFamily::central(1, 1, 0.25, 0.25, 120);
    for input in [NamedInput::Liouville(5), NamedInput::GoldenRatio, NamedInput::Rational(2, 7), NamedInput::Random(3)]
    {
        let p = singular_profile(&input, &family, 1e-9)?;
        let dips: Vec<String> = p.points.iter().filter(|x| x.dip).map(|x| format!("{:.1}", x.t[0])).collect();
        println!("{input}: min lambda_1 {:.3e} at t0={:.2}; dips at {}", p.min_lambda1, p.argmin_norm, dips.join(" "));
        for eps in [0.1, 0.3] {
            let r = di_classify(&input.system(), &family, eps, 30.0, 1e-9)?;
            println!("    eps {eps}: {}", r.verdict.as_str());
        }
    }
    Ok(())
}
