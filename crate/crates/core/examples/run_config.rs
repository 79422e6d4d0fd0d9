//! Building, resolving and serializing a run configuration, then writing
//! the three output files for a small escape scan.

use dirichlet_lab::config::RunConfig;
use dirichlet_lab::experiments::escape_scan;
use dirichlet_lab::flow::WeightVector;
use dirichlet_lab::measures::{Ball, MapSpec, MeasureSpec};
use dirichlet_lab::report::{write_run, RunOutput};

fn main() -> dirichlet_lab::Result<()> {
    let dir = std::env::temp_dir().join("dilab-example-escape");
    let mut cfg = RunConfig::new("escape")?;
    cfg.set("t", "6,3,3")?;
    cfg.set("eps", "0.1 0.2 0.4")?;
    cfg.set("samples", "2000")?;
    cfg.set("out", dir.to_str().unwrap())?;
    let cfg = cfg.resolved()?;
    print!("{}", cfg.to_text());

    let map = MapSpec::parse(&cfg.text("map")?)?;
    let measure = MeasureSpec::parse(&cfg.text("measure")?)?;
    let t = WeightVector::new(1, 2, vec![6.0, 3.0, 3.0])?;
    let rows = escape_scan(
        &map,
        &measure,
        &Ball::interval(0.0, 1.0)?,
        &[t],
        &cfg.numbers("eps")?,
        2000,
        cfg.seed()?,
        cfg.margin()?,
    )?;

    let mut out = RunOutput::new(cfg.spec().columns);
    for r in &rows {
        out.push(r)?;
    }
    let written = write_run(&cfg, &out)?;
    println!("wrote {}", written.display());
    print!("{}", std::fs::read_to_string(written.join("report.csv")).unwrap());
    Ok(())
}
