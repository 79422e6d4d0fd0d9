//! The `dilab` command line. Flags are generated from the config schema, so
//! every subcommand accepts exactly the keys its config section allows.

use std::ffi::OsString;
use std::fs;

use clap::{Arg, ArgAction, ArgMatches, Command};
use serde::Serialize;

use crate::config::{KeyDefault, RunConfig, EXPERIMENTS};
use crate::error::{Error, Result};
use crate::experiments::{
    counterexample_44, equidist_test_k2, escape_scan, lambda1_profile, nondiv_decay_scan, with_workers, NamedInput,
};
use crate::flow::{
    ba_quality, di_classify_with_tail, dirichlet_record, dirichlet_solvable_direct, LinearFormSystem, TrajectoryFamily,
    WeightVector,
};
use crate::measures::{
    cgood_empirical, epsilon0_registry, federer_empirical, nonplanar_test, Ball, MapSpec, MeasureSpec, Polynomial,
};
use crate::report::{write_run, RunOutput};

type Job = Box<dyn FnOnce() -> Result<(RunOutput, String)> + Send>;

fn flag_name(key: &str) -> String {
    key.replace('_', "-")
}

pub fn command() -> Command {
    let mut cmd = Command::new("dilab")
        .about("Dirichlet improvability, diagonal flows and nondivergence experiments")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for spec in EXPERIMENTS {
        let columns = format!("CSV columns: {}", spec.columns.join(","));
        let mut sub = Command::new(spec.name)
            .about(spec.about)
            .after_help(columns)
            .arg(Arg::new("config").long("config").value_name("FILE").help("run configuration file"))
            .arg(
                Arg::new("dry-run")
                    .long("dry-run")
                    .action(ArgAction::SetTrue)
                    .help("validate and print the resolved plan"),
            )
            .arg(
                Arg::new("workers")
                    .long("workers")
                    .value_name("N")
                    .value_parser(clap::value_parser!(usize))
                    .help("worker threads (outputs do not depend on it)"),
            );
        for ks in spec.all_keys() {
            let long = flag_name(ks.key);
            let help = match ks.default {
                KeyDefault::Value(v) => format!("{} [default: {v}]", ks.help),
                KeyDefault::Required => format!("{} [required]", ks.help),
                KeyDefault::Optional => ks.help.to_string(),
            };
            let mut arg = Arg::new(ks.key)
                .long(long.clone())
                .value_name("VALUE")
                .help(help)
                .num_args(1..)
                .allow_negative_numbers(true);
            if long != ks.key {
                arg = arg.alias(ks.key);
            }
            if ks.default == KeyDefault::Value("false") {
                arg = arg.num_args(0..=1).default_missing_value("true");
            }
            sub = sub.arg(arg);
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(&matches) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(matches: &ArgMatches) -> Result<()> {
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let config = config_from_matches(name, sub)?.resolved()?;
    let (plan, job) = prepare(&config)?;
    if sub.get_flag("dry-run") {
        println!("plan: {plan}");
        print!("{}", config.to_text());
        return Ok(());
    }
    let workers = sub
        .get_one::<usize>("workers")
        .copied()
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let (output, summary) = with_workers(workers, job)??;
    let dir = write_run(&config, &output)?;
    print!("{summary}");
    eprintln!("wrote {}", dir.display());
    Ok(())
}

/// Config file (if any) overlaid with command-line keys.
pub fn config_from_matches(name: &str, sub: &ArgMatches) -> Result<RunConfig> {
    let mut config = match sub.get_one::<String>("config") {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            let c = RunConfig::parse(&text)?;
            if c.experiment() != name {
                return Err(Error::argument("config", format!("file is for `{}`, not `{name}`", c.experiment())));
            }
            c
        }
        None => RunConfig::new(name)?,
    };
    for ks in config.spec().all_keys() {
        if let Some(vals) = sub.get_many::<String>(ks.key) {
            let tokens: Vec<String> =
                vals.flat_map(|v| v.split_whitespace().map(str::to_string).collect::<Vec<_>>()).collect();
            config.set_tokens(ks.key, tokens)?;
        }
    }
    Ok(config)
}

fn system_from(cfg: &RunConfig) -> Result<(LinearFormSystem, String)> {
    let (m, n) = (cfg.integer("m")? as usize, cfg.integer("n")? as usize);
    let text = cfg.text("Y")?;
    if m == 1 && n == 1 {
        if let Ok(named) = NamedInput::parse(&text) {
            return Ok((named.system(), named.to_string()));
        }
    }
    Ok((LinearFormSystem::new(m, n, cfg.numbers("Y")?)?, text))
}

fn family_from(cfg: &RunConfig, m: usize, n: usize) -> Result<TrajectoryFamily> {
    // ` | ` separates records on a single line
    TrajectoryFamily::parse(&cfg.text("family")?.replace(" | ", "\n"), m, n)
}

fn ball_from(cfg: &RunConfig) -> Result<Ball> {
    let v = cfg.vectors("ball")?;
    match v.as_slice() {
        [center, radius] if radius.len() == 1 => Ball::new(center.clone(), radius[0]),
        _ => Err(Error::argument("ball", "expected `<center,..> <radius>`")),
    }
}

fn push_all<T: Serialize>(out: &mut RunOutput, items: &[T]) -> Result<()> {
    items.iter().try_for_each(|r| out.push(r))
}

/// Validates the config and returns a plan description and the job to run.
pub fn prepare(cfg: &RunConfig) -> Result<(String, Job)> {
    let seed = cfg.seed()?;
    let margin = cfg.margin()?;
    let columns = cfg.spec().columns;
    let name = cfg.experiment();
    match name {
        "check" => {
            let (y, label) = system_from(cfg)?;
            let t = WeightVector::new(y.m(), y.n(), cfg.numbers("t")?)?;
            let eps = cfg.number("eps")?;
            let weak_q = cfg.flag("weak_q")?;
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::argument("eps", format!("must lie in (0, 1), got {eps}")));
            }
            let plan = format!("check Y={label} t={:?} eps={eps}", t.as_slice());
            Ok((
                plan,
                Box::new(move || {
                    #[derive(Serialize)]
                    struct Row {
                        t: Vec<f64>,
                        eps: f64,
                        lambda1: f64,
                        lattice: &'static str,
                        direct: Option<bool>,
                        witness_p: Option<Vec<i64>>,
                        witness_q: Option<Vec<i64>>,
                    }
                    let rec = dirichlet_record(&y, &t, eps, margin)?;
                    let direct =
                        if weak_q { Some(dirichlet_solvable_direct(&y, &t, eps, true)?.is_some()) } else { None };
                    let row = Row {
                        t: t.as_slice().to_vec(),
                        eps,
                        lambda1: rec.lambda1,
                        lattice: rec.solvable.as_str(),
                        direct,
                        witness_p: rec.witness.as_ref().map(|w| w.p().to_vec()),
                        witness_q: rec.witness.as_ref().map(|w| w.q().to_vec()),
                    };
                    let mut summary = format!("{}\n", rec.solvable.as_str());
                    if let Some(d) = direct {
                        summary.push_str(&format!("weak system: {}\n", if d { "solvable" } else { "unsolvable" }));
                    }
                    let mut out = RunOutput::new(columns);
                    out.push(&row)?;
                    Ok((out, summary))
                }),
            ))
        }
        "trajectory" => {
            let (y, label) = system_from(cfg)?;
            let family = family_from(cfg, y.m(), y.n())?;
            let count = family.generate()?.len();
            Ok((
                format!("lambda_1 of Y={label} at {count} weight vectors"),
                Box::new(move || {
                    let r = lambda1_profile(&y, &label, &family, margin)?;
                    let mut out = RunOutput::new(columns);
                    push_all(&mut out, &r.points)?;
                    let dips = r.points.iter().filter(|p| p.dip).count();
                    Ok((
                        out,
                        format!("min lambda_1 {:.6} at ||t|| = {:.4}; {dips} dips\n", r.min_lambda1, r.argmin_norm),
                    ))
                }),
            ))
        }
        "di" => {
            let (y, label) = system_from(cfg)?;
            let family = family_from(cfg, y.m(), y.n())?;
            let ts = family.generate()?;
            let horizon = match cfg.text_opt("horizon") {
                Some(_) => cfg.number("horizon")?,
                None => ts.iter().map(WeightVector::norm).fold(0.0, f64::max),
            };
            let eps = cfg.number("eps")?;
            let tail = cfg.number("tail")?;
            Ok((
                format!("classify Y={label} along {} weight vectors, eps={eps}, horizon {horizon}", ts.len()),
                Box::new(move || {
                    let r = di_classify_with_tail(&y, &family, eps, horizon, margin, tail)?;
                    let mut out = RunOutput::new(columns);
                    for rec in &r.records {
                        out.push(&rec.row())?;
                    }
                    let last = r.last_unsolvable_norm.map_or("none".to_string(), |x| format!("{x:.4}"));
                    Ok((
                        out,
                        format!(
                            "{} (tail from ||t|| = {:.4}; last unsolvable at {last})\n",
                            r.verdict.as_str(),
                            r.tail_start
                        ),
                    ))
                }),
            ))
        }
        "escape" | "decay" => {
            let map = MapSpec::parse(&cfg.text("map")?)?;
            let measure = MeasureSpec::parse(&cfg.text("measure")?)?;
            let ball = ball_from(cfg)?;
            let t_list =
                cfg.vectors("t")?.into_iter().map(|t| WeightVector::new(1, map.n(), t)).collect::<Result<Vec<_>>>()?;
            let eps = cfg.numbers("eps")?;
            let samples = cfg.integer("samples")? as usize;
            let plan = format!("{name}: {} t x {} eps cells, {samples} samples", t_list.len(), eps.len());
            let decay = name == "decay";
            Ok((
                plan,
                Box::new(move || {
                    let mut out = RunOutput::new(columns);
                    if !decay {
                        let recs = escape_scan(&map, &measure, &ball, &t_list, &eps, samples, seed, margin)?;
                        push_all(&mut out, &recs)?;
                        return Ok((out, format!("{} cells\n", recs.len())));
                    }
                    let r = nondiv_decay_scan(&map, &measure, &ball, &t_list, &eps, samples, seed, margin)?;
                    push_all(&mut out, &r.records)?;
                    let mut s = String::new();
                    for f in &r.per_t {
                        let slope = f.slope.map_or("n/a".into(), |x| format!("{x:.4}"));
                        s.push_str(&format!(
                            "t={:?} slope {slope} ({} points excluded)\n",
                            f.t.clone().unwrap_or_default(),
                            f.excluded
                        ));
                    }
                    if let (Some(c2), Some(a)) = (r.c2, r.alpha) {
                        s.push_str(&format!("envelope fit: C2 = {c2:.4}, alpha = {a:.4}\n"));
                    }
                    for (e, v) in &r.variation {
                        s.push_str(&format!("eps={e}: spread over t {v:.4}\n"));
                    }
                    Ok((out, s))
                }),
            ))
        }
        "equidist" => {
            let iv = cfg.numbers("interval")?;
            let [lo, hi] = iv[..] else {
                return Err(Error::argument("interval", "expected lo,hi"));
            };
            let y0s = cfg.numbers("y0")?;
            let t = WeightVector::central(1, 1, cfg.number("t")?)?;
            let eps = cfg.number("eps")?;
            let (n, haar_n) = (cfg.integer("samples")? as usize, cfg.integer("haar_samples")? as usize);
            Ok((
                format!("equidistribution at t={:?}, {} base points, {n} + {haar_n} samples", t.as_slice(), y0s.len()),
                Box::new(move || {
                    let mut out = RunOutput::new(columns);
                    let mut s = String::new();
                    for &y0 in &y0s {
                        let r = equidist_test_k2((lo, hi), y0, &t, eps, n, haar_n, seed, margin)?;
                        push_all(&mut out, &r.records(seed))?;
                        s.push_str(&format!(
                            "y0={y0}: translate {:.4} haar {:.4} discrepancy {:+.4}\n",
                            r.translate, r.haar, r.discrepancy
                        ));
                    }
                    Ok((out, s))
                }),
            ))
        }
        "counterexample" => {
            let eps = cfg.number("eps")?;
            let e_u = cfg.number("e_u")?;
            let s_list = cfg.numbers("s")?;
            let y_count = cfg.integer("y_count")? as usize;
            if !(1.0 / (eps * eps) < e_u && e_u < 2.0 * eps) {
                // surfaced before any work, also under --dry-run
                counterexample_44(eps, e_u, &s_list, y_count, seed, margin)?;
            }
            Ok((
                format!("{} Y x {} s cases at eps={eps}, e^u={e_u}", y_count, s_list.len()),
                Box::new(move || {
                    let r = counterexample_44(eps, e_u, &s_list, y_count, seed, margin)?;
                    let mut out = RunOutput::new(columns);
                    push_all(&mut out, &r.cases)?;
                    let verdict = if r.pass { "PASS" } else { "FAIL" };
                    Ok((out, format!("{verdict}: {} cases, {} failures\n", r.cases.len(), r.failures)))
                }),
            ))
        }
        "good-test" => {
            let measure = MeasureSpec::parse(&cfg.text("measure")?)?;
            let f = Polynomial::parse(&cfg.text("f")?, measure.dim())?;
            let ball = ball_from(cfg)?;
            let alpha = cfg.number("alpha")?;
            let eps = cfg.numbers("eps")?;
            let samples = cfg.integer("samples")? as usize;
            Ok((
                format!("goodness of {f} on {} eps values, {samples} samples", eps.len()),
                Box::new(move || {
                    let r = cgood_empirical(|x| f.eval(x), &measure, &ball, alpha, &eps, samples, seed)?;
                    let mut out = RunOutput::new(columns);
                    push_all(&mut out, &r.rows)?;
                    Ok((
                        out,
                        format!(
                            "C = {:.4} (alpha = {alpha}, sup |f| = {:.4}, {} points in ball)\n",
                            r.c, r.sup_norm, r.in_ball
                        ),
                    ))
                }),
            ))
        }
        "federer-test" => {
            let measure = MeasureSpec::parse(&cfg.text("measure")?)?;
            let ball = ball_from(cfg)?;
            let balls = cfg.integer("balls")? as usize;
            let samples = cfg.integer("samples")? as usize;
            Ok((
                format!("Federer ratio over {balls} balls, {samples} samples"),
                Box::new(move || {
                    let r = federer_empirical(&measure, &ball, balls, samples, seed)?;
                    let mut out = RunOutput::new(columns);
                    push_all(&mut out, &r.balls)?;
                    Ok((out, format!("max nu(3B)/nu(B) = {:.4} over {} balls\n", r.max_ratio, r.balls.len())))
                }),
            ))
        }
        "nonplanar-test" => {
            let map = MapSpec::parse(&cfg.text("map")?)?;
            let measure = MeasureSpec::parse(&cfg.text("measure")?)?;
            let ball = ball_from(cfg)?;
            let samples = cfg.integer("samples")? as usize;
            Ok((
                format!("nonplanarity of {} from {samples} samples", map.to_text()),
                Box::new(move || {
                    let r = nonplanar_test(&map, &measure, &ball, samples, seed)?;
                    let mut out = RunOutput::new(columns);
                    out.push(&r)?;
                    let word = if r.nonplanar { "nonplanar" } else { "planar" };
                    Ok((out, format!("{word} (smallest singular value {:.3e})\n", r.smallest_singular_value)))
                }),
            ))
        }
        "ba" => {
            let (y, label) = system_from(cfg)?;
            let weights = |key: &str, len: usize| -> Result<Vec<f64>> {
                match cfg.text_opt(key) {
                    Some(_) => cfg.numbers(key),
                    None => Ok(vec![1.0 / len as f64; len]),
                }
            };
            let (r, s) = (weights("r", y.m())?, weights("s", y.n())?);
            let qmax = cfg.integers("qmax")?;
            Ok((
                format!("BA quality of Y={label} at Qmax {qmax:?}"),
                Box::new(move || {
                    #[derive(Serialize)]
                    struct Row {
                        qmax: u64,
                        quality: f64,
                    }
                    let mut out = RunOutput::new(columns);
                    let mut s_out = String::new();
                    for &q in &qmax {
                        let quality = ba_quality(&y, &r, &s, q)?;
                        out.push(&Row { qmax: q, quality })?;
                        s_out.push_str(&format!("Qmax={q}: {quality:.6}\n"));
                    }
                    Ok((out, s_out))
                }),
            ))
        }
        "constants" => {
            let n = cfg.integer("n")?;
            let n = u32::try_from(n)
                .ok()
                .filter(|n| (1..=8).contains(n))
                .ok_or_else(|| Error::argument("n", "must lie in 1..=8"))?;
            Ok((
                format!("eps_0 table at n = {n}"),
                Box::new(move || {
                    let rows = epsilon0_registry(n);
                    let mut out = RunOutput::new(columns);
                    push_all(&mut out, &rows)?;
                    let mut s = String::new();
                    for r in &rows {
                        s.push_str(&format!("{:<28} {:<14.6e} {:<34} {}\n", r.key, r.value, r.formula, r.statement));
                    }
                    Ok((out, s))
                }),
            ))
        }
        other => Err(Error::argument("experiment", format!("unknown experiment `{other}`"))),
    }
}
