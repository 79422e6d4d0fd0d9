//! Empirical (C, alpha)-goodness, Federer ratios and nonplanarity.

use dirichlet_lab::measures::{
    cgood_empirical, federer_empirical, nondegeneracy_order, nonplanar_test, Ball, MapSpec, MeasureSpec,
};

fn main() -> dirichlet_lab::Result<()> {
    let unit = MeasureSpec::lebesgue(vec![0.0], vec![1.0])?;
    let whole = Ball::interval(0.0, 1.0)?;
    let grid = [0.01, 0.03, 0.1, 0.3];
    for (name, alpha, f) in [
        ("x", 1.0, (|x: &[f64]| x[0]) as fn(&[f64]) -> f64),
        ("x^2 - 1/4", 0.5, |x: &[f64]| x[0] * x[0] - 0.25),
        ("x^3 - x/2", 1.0 / 3.0, |x: &[f64]| x[0].powi(3) - x[0] / 2.0),
    ] {
        let r = cgood_empirical(f, &unit, &whole, alpha, &grid, 100_000, 1)?;
        println!("{name}: C = {:.3} at alpha = {alpha:.3}", r.c);
    }

    for (name, m) in [("lebesgue", unit.clone()), ("cantor", MeasureSpec::cantor(20))] {
        let r = federer_empirical(&m, &whole, 200, 200_000, 2)?;
        println!("{name}: Federer ratio {:.3}", r.max_ratio);
    }

    for text in ["map veronese n=2", "map veronese n=3", "map poly d=1 n=2 f1=x, f2=2*x+1"] {
        let map = MapSpec::parse(text)?;
        let r = nonplanar_test(&map, &MeasureSpec::cantor(20), &whole, 5000, 3)?;
        let order = nondegeneracy_order(&map, &[0.5])?;
        println!(
            "{text}: nonplanar {} (sigma_min {:.2e}), order at 1/2 {order:?}",
            r.nonplanar, r.smallest_singular_value
        );
    }
    Ok(())
}
