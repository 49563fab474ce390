use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use bmhd_core::spectral::checkpoint::read_checkpoint;
use bmhd_harness::config::default_config;
use bmhd_harness::{emit_reports, load_config, Experiment, RunResult};

fn bmhd(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bmhd"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--threads")
        .arg("1")
        .output()
        .expect("binary runs")
}

fn files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn lp_check_at_128() {
    let dir = tempfile::tempdir().unwrap();
    let o = bmhd(&["lp-check", "--n", "128", "--bank", "5"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = files(dir.path());
    assert_eq!(written.len(), 1);
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(&written[0]).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["results"][0]["summary"]["n"], 128);
}

#[test]
fn solve_tg2d_writes_three_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = bmhd(&["solve", "--config", "tg2d", "--t-end", "0.05"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let written = files(dir.path());
    assert_eq!(written.len(), 3);
    let by_ext = |e: &str| written.iter().find(|p| p.extension().unwrap() == e).unwrap().clone();
    let ck = read_checkpoint(fs::File::open(by_ext("bmhd")).unwrap()).unwrap();
    assert!((ck.time - 0.05).abs() < 1e-12);
    assert_eq!(ck.fields.len(), 4);
    let csv = fs::read_to_string(by_ext("csv")).unwrap();
    assert!(csv.starts_with("t,energy,dissipated,drift,cancellation\n"));
    assert_eq!(csv.lines().count(), 1 + 6);
}

#[test]
fn picard_small_norm() {
    let dir = tempfile::tempdir().unwrap();
    let o = bmhd(&["picard", "--norm", "1e-3"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("PASS"), "{stdout}");
}

#[test]
fn identical_runs_give_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["solve", "--t-end", "0.1", "--seed", "17"];
    assert_eq!(bmhd(&args, a.path()).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_bmhd"))
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("BMHD_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let (fa, fb) = (files(a.path()), files(b.path()));
    assert_eq!(fa.len(), 3);
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
    }
}

#[test]
fn seed_changes_the_hash() {
    let a = default_config(Experiment::Solve);
    let b = bmhd_harness::RunConfig { seed: a.seed + 1, ..a.clone() };
    let c = bmhd_harness::RunConfig { out: "elsewhere".into(), ..a.clone() };
    assert_ne!(a.hash(), b.hash());
    assert_eq!(a.hash(), c.hash());
}

#[test]
fn failed_assertion_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("strict.toml");
    fs::write(&path, "[experiment]\nname = \"bony-check\"\n[experiment.params]\nbank = 2\n[calibration]\nreconstruction_tol = 1e-300\n").unwrap();
    let o = bmhd(&["bony-check", "--config", path.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = bmhd(&["trilinear", "--sigma", "2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Prop. 2.1"), "{}", stderr(&o));
    assert_eq!(bmhd(&["picard", "--config", "tg2d"], dir.path()).status.code(), Some(2));
    assert_eq!(bmhd(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(bmhd(&["solve", "--config", "/no/such.toml"], dir.path()).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_bmhd"))
        .args(["lp-check", "--out"])
        .arg(dir.path())
        .env("BMHD_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(files(dir.path()).is_empty());
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ws.toml");
    fs::write(&path, "seed = 9\n[experiment]\nname = \"weakstrong\"\n[experiment.params]\np = 1.0\nr = 3.0\n").unwrap();
    let cfg = load_config(&path).unwrap();
    assert_eq!(cfg.seed, 9);
    assert_eq!(cfg.param("perturbation").unwrap(), 1e-6);
    let again = dir.path().join("again.toml");
    fs::write(&again, cfg.to_toml()).unwrap();
    assert_eq!(load_config(&again).unwrap(), cfg);
}

#[test]
fn emit_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = default_config(Experiment::Norms);
    let paths = emit_reports(&[], &cfg, dir.path()).unwrap();
    assert_eq!(paths.len(), 1);
    assert_eq!(paths[0].extension().unwrap(), "json");

    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let bad = blocker.join("sub");
    let err = emit_reports(&[RunResult::new("x", true, 1.0)], &cfg, &bad).unwrap_err();
    assert!(err.to_string().contains("sub"), "{err}");
}
