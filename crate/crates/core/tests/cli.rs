use dirichlet_lab::config::{RunConfig, FORMAT_VERSION};
use dirichlet_lab::report::deterministic_payload;
use std::path::Path;
use std::process::{Command, Output};

fn dilab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dilab"))
        .args(args)
        .current_dir(cwd)
        .env_remove("DILAB_OUTPUT_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn check_prints_unsolvable() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(&["check", "--m", "1", "--n", "1", "--Y", "0.5", "--t", "1,1", "--eps", "0.3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("unsolvable"), "{}", stdout(&o));
    let run = dir.path().join("dilab-runs/check");
    for f in ["report.jsonl", "report.csv", "config.resolved"] {
        let text = read(run.join(f));
        assert!(text.contains(FORMAT_VERSION), "{f}");
        assert!(text.contains("eps = 0.3") || text.contains("\"eps\":\"0.3\""), "{f}");
    }
}

#[test]
fn solvable_check_prints_the_witness() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r");
    let o = dilab(
        &["check", "--m", "1", "--n", "1", "--Y", "0", "--t", "2,2", "--eps", "0.5", "--out", out.to_str().unwrap()],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("solvable"), "{}", stdout(&o));
    assert!(read(out.join("report.jsonl")).lines().count() >= 3);
}

#[test]
fn constants_lists_the_registry() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(&["constants"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for key in [
        "davenport_schmidt_curve",
        "bugeaud_veronese",
        "veronese_explicit(2)",
        "drv_manifolds(2)",
        "khintchine_density",
    ] {
        assert!(s.contains(key), "{key}");
    }
    assert!(s.contains("1/(n^n (n+1)^2 2^(n^2+n))"));
}

#[test]
fn counterexample_window_is_an_argument_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(&["counterexample", "--eps", "0.6"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty parameter window: need 1/eps^2 < e^u < 2*eps"), "{}", stderr(&o));
    assert!(!dir.path().join("dilab-runs").exists());
}

#[test]
fn dry_run_validates_without_writing() {
    let dir = tempfile::tempdir().unwrap();
    for sub in [
        vec!["check", "--m", "1", "--n", "1", "--Y", "0.5", "--t", "1,1", "--eps", "0.3"],
        vec!["trajectory", "--Y", "golden_ratio", "--family", "ray central t=0.5:0.5:10"],
        vec!["di", "--Y", "liouville(5)", "--family", "ray central t=1:1:30", "--eps", "0.1"],
        vec!["escape", "--t", "6,3,3", "--eps", "0.1"],
        vec!["decay", "--t", "6,3,3", "8,4,4", "--eps", "0.4", "0.2"],
        vec!["equidist", "--t", "9"],
        vec!["counterexample", "--eps", "0.9"],
        vec!["good-test", "--f", "x", "--eps", "0.1", "0.2"],
        vec!["federer-test"],
        vec!["nonplanar-test", "--map", "map veronese n=2"],
        vec!["ba", "--Y", "golden_ratio"],
        vec!["constants"],
    ] {
        let mut args = sub.clone();
        args.push("--dry-run");
        let o = dilab(&args, dir.path());
        assert_eq!(o.status.code(), Some(0), "{sub:?}: {}", stderr(&o));
        assert!(stdout(&o).starts_with("plan: "), "{sub:?}");
        assert!(stdout(&o).contains(&format!("experiment = {}", sub[0])));
    }
    assert!(!dir.path().join("dilab-runs").exists());
}

#[test]
fn argument_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["check", "--m", "1", "--n", "1", "--Y", "0.5", "--t", "1,1", "--eps", "1.5"],
        vec!["check", "--m", "1", "--n", "1", "--Y", "0.5", "--t", "1,1", "--eps", "0.3", "--bogus", "1"],
        vec!["check", "--m", "1", "--n", "1", "--Y", "0.5", "--t", "1,1"],
        vec!["nosuch"],
        vec!["escape", "--t", "6,3,3", "--eps", "0.1", "--workers", "0"],
    ] {
        let o = dilab(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let o = dilab(&["check", "--m", "1", "--n", "1", "--Y", "0.5", "--t", "1,1", "--eps", "1.5"], dir.path());
    assert!(stderr(&o).contains("eps"), "{}", stderr(&o));
}

#[test]
fn capacity_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        dilab(&["ba", "--m", "1", "--n", "2", "--Y", "0.1", "0.2", "--s", "0.5", "0.5", "--qmax", "10000"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("capacity"));
}

#[test]
fn config_file_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let o = dilab(&["ba", "--Y", "golden_ratio", "--qmax", "10", "100", "--out", a.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let resolved = read(a.join("config.resolved"));
    let cfg = RunConfig::parse(&resolved).unwrap();
    assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);

    // rerun from the file with a different output directory
    let b = dir.path().join("b");
    let file = dir.path().join("run.cfg");
    std::fs::write(&file, resolved.replace(a.to_str().unwrap(), b.to_str().unwrap())).unwrap();
    let o = dilab(&["ba", "--config", file.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let pa = deterministic_payload(&read(a.join("report.jsonl")));
    let pb = deterministic_payload(&read(b.join("report.jsonl")));
    assert_eq!(pa.replace(a.to_str().unwrap(), "@"), pb.replace(b.to_str().unwrap(), "@"));

    // flags override the file
    let o = dilab(&["ba", "--config", file.to_str().unwrap(), "--qmax", "1000", "--dry-run"], dir.path());
    assert!(stdout(&o).contains("qmax = 1000"), "{}", stdout(&o));

    // unknown keys in a file are rejected
    std::fs::write(&file, "[run]\nexperiment = ba\n[params]\nqmax = 10\ncolour = red\n").unwrap();
    let o = dilab(&["ba", "--config", file.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"), "{}", stderr(&o));
}

#[test]
fn output_dir_env_sets_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_dilab"))
        .args(["ba", "--Y", "golden_ratio", "--qmax", "10"])
        .current_dir(dir.path())
        .env("DILAB_OUTPUT_DIR", dir.path().join("env"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("env/ba/report.jsonl").exists());
}

#[test]
fn same_seed_gives_identical_payloads_across_workers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let mut payloads = Vec::new();
    for w in ["1", "8", "1"] {
        let o = dilab(
            &[
                "decay",
                "--t",
                "4,2,2",
                "6,3,3",
                "--eps",
                "0.4",
                "0.2",
                "0.1",
                "--samples",
                "3000",
                "--seed",
                "5",
                "--workers",
                w,
                "--out",
                out.to_str().unwrap(),
            ],
            dir.path(),
        );
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let jsonl = read(out.join("report.jsonl"));
        assert!(jsonl.lines().nth(1).unwrap().contains("timestamp_unix"));
        payloads.push(deterministic_payload(&jsonl));
    }
    assert_eq!(payloads[0], payloads[1]);
    assert_eq!(payloads[0], payloads[2]);
    let rows: Vec<serde_json::Value> = payloads[0].lines().skip(1).map(|l| serde_json::from_str(l).unwrap()).collect();
    let cells = rows.iter().filter(|r| r.get("fraction").is_some()).count();
    assert_eq!(cells, 6);
    for key in ["experiment", "seed", "t", "floor_t", "norm_t", "eps", "fraction", "ci", "n", "boundary_n"] {
        assert!(rows.iter().any(|r| r.get(key).is_some()), "{key}");
    }
}

#[test]
fn help_documents_csv_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = dilab(&["escape", "--help"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CSV columns: experiment,seed,t,floor_t,norm_t,eps,fraction,ci,n,boundary_n"));
}
