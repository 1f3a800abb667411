use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fdrates::config::parse_config;

fn fdrates(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fdrates")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV table: no comment lines, header dropped.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let header: Vec<&str> = csv.lines().find(|l| !l.starts_with('#')).unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows(csv).into_iter().map(|r| r[i].clone()).collect()
}

fn summary(csv: &str, key: &str) -> f64 {
    let line = csv.lines().rev().find(|l| l.starts_with("# ")).unwrap();
    let prefix = format!("{key}=");
    line.split(' ').find_map(|kv| kv.strip_prefix(prefix.as_str())).unwrap().parse().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const SEEDED: &str = "d=5\nm=0.9\nD0=1.5\nD1=0.5\ndata.kind=eigen-seeded\ndata.epsilon=0.01\n\
                      grid.R_max=10\ngrid.N=400\ntime.dt=1e-4\ntime.t_end=0.3\noutput.cadence=100\n\
                      fit.window_start=0.1\nfit.window_end=0.3\n";

#[test]
fn config_examples() {
    assert!(parse_config("d=5\nm=0.9\nD0=2\nD1=1").is_ok());
    let err = parse_config("m=1.2").unwrap_err().to_string();
    assert!(err.contains("m must be < 1"), "{err}");
    assert!(err.contains("line 1"), "{err}");
    let err = parse_config("d=5\nm=0.9\n\nm=0.8").unwrap_err().to_string();
    assert!(err.contains("line 2") && err.contains("line 4"), "{err}");
    let err = parse_config("d=5\nm=0.9\nD0=1\nD1=2").unwrap_err().to_string();
    assert!(err.contains("D0 > D1"), "{err}");
}

#[test]
fn constants_table() {
    let o = fdrates(&["constants", "--d", "5", "--m", "0.9"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("# fdrates constants d=5 m=0.9"));
    let get = |c: &str| column(&out, c)[0].parse::<f64>().unwrap();
    assert!((get("alpha") + 10.0).abs() < 1e-12);
    assert!((get("sharp_constant") - 20.0).abs() < 1e-12);
    assert!((get("continuum_bottom") - 72.25).abs() < 1e-12);
    assert!((get("improved_constant") - 30.0).abs() < 1e-12);

    let out = stdout(&fdrates(&["constants", "--d", "5", "--alpha", "-6"]));
    assert_eq!(column(&out, "sharp_constant")[0].parse::<f64>().unwrap(), 12.0);
    assert_eq!(column(&out, "continuum_bottom")[0].parse::<f64>().unwrap(), 20.25);
    assert_eq!(column(&out, "improved_constant")[0].parse::<f64>().unwrap(), 14.0);
}

#[test]
fn sweep_keeps_order_for_any_thread_count() {
    let args = ["constants", "--d", "5", "--alpha", "-10,-6,-4,-3,-2"];
    let serial = Command::new(env!("CARGO_BIN_EXE_fdrates")).args(args).env("FDRATES_THREADS", "1").output().unwrap();
    let parallel = Command::new(env!("CARGO_BIN_EXE_fdrates")).args(args).env("FDRATES_THREADS", "4").output().unwrap();
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
    let alphas: Vec<f64> = column(&stdout(&serial), "alpha").iter().map(|a| a.parse().unwrap()).collect();
    assert_eq!(alphas, [-10.0, -6.0, -4.0, -3.0, -2.0]);
    let bad = Command::new(env!("CARGO_BIN_EXE_fdrates")).args(args).env("FDRATES_THREADS", "zero").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn hp_verify_row() {
    let o = fdrates(&["hp-verify", "--d", "5", "--alpha", "-4", "--R", "100", "--N", "1600"]);
    assert!(o.status.success());
    let rel: f64 = column(&stdout(&o), "rel_err")[0].parse().unwrap();
    assert!(rel <= 0.03, "rel_err {rel}");
}

#[test]
fn evolve_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", SEEDED);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = fdrates(&["evolve", "--config", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let text = String::from_utf8(ta).unwrap();
    assert!(text.lines().next().unwrap().starts_with("# fdrates evolve d=5 m=0.9"));
    assert!(text.contains("\nt,entropy,fisher,h1,h2,mass_defect\n"));
    // 0.3 / 1e-4 steps, a row every 100 plus the initial one
    assert_eq!(rows(&text).len(), 31);
    let rate = summary(&text, "rate");
    assert!((rate - 60.0).abs() <= 0.05 * 60.0, "rate {rate}");
}

#[test]
fn output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("trace.csv");
    let text = format!("{SEEDED}output.path={}\n", out.display());
    let cfg = write(dir.path(), "run.cfg", &text);
    let o = fdrates(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&out).unwrap().contains("mass_defect"));
}

#[test]
fn json_format() {
    let o = fdrates(&["constants", "--d", "5", "--alpha", "-6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["rows"][0]["sharp_constant"], 12.0);
    assert_eq!(v["config"]["alpha"], "-6.0");
}

#[test]
fn flow_subcommands_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", SEEDED);
    let cfg = cfg.to_str().unwrap();

    let report = stdout(&fdrates(&["entropy-report", "--config", cfg]));
    assert_eq!(rows(&report).len(), 31);
    assert!(report.trim_end().ends_with("# holds=true"));

    let g = stdout(&fdrates(&["gronwall", "--config", cfg]));
    for row in rows(&g) {
        let (f, bound): (f64, f64) = (row[1].parse().unwrap(), row[2].parse().unwrap());
        assert!(f <= bound * (1.0 + 1e-9), "{f} > {bound}");
    }

    let lin = write(
        dir.path(),
        "lin.cfg",
        "d=5\nalpha=-10\ndata.kind=eigen-seeded\ndata.l=1\ndata.k=0\ndata.D=1\nD0=2\nD1=0.5\n\
         grid.R_max=100\ngrid.N=1600\ngrid.boundary=asymptotic\ntime.dt=1e-4\ntime.t_end=0.6\n\
         output.cadence=100\nfit.window_start=0.4\nfit.window_end=0.6\n",
    );
    let out = stdout(&fdrates(&["evolve-linear", "--config", lin.to_str().unwrap()]));
    let rate = summary(&out, "rate");
    assert!((rate - 40.0).abs() <= 0.03 * 40.0, "rate {rate}");
}

#[test]
fn other_subcommands_run() {
    let o = fdrates(&["spectrum", "--d", "5", "--alpha", "-6", "--l-max", "2", "--k-max", "1"]);
    let out = stdout(&o);
    assert_eq!(rows(&out).len(), 6);
    assert!((summary(&out, "continuum_bottom") - 20.25).abs() < 1e-12);

    let out = stdout(&fdrates(&["eigenfunction", "--d", "5", "--alpha", "-6", "--l", "1", "--numeric", "--N", "400"]));
    assert!((summary(&out, "lambda") - 12.0).abs() < 1e-3);

    let out = stdout(&fdrates(&["quotient", "--d", "5", "--m", "0.9", "--n", "100,200"]));
    assert_eq!(rows(&out).len(), 2);

    let out = stdout(&fdrates(&["rescale", "--d", "5", "--m", "0.9", "--tau", "0,1"]));
    for row in rows(&out) {
        let (v, p): (f64, f64) = (row[5].parse().unwrap(), row[6].parse().unwrap());
        assert!((v - p).abs() <= 1e-12 * p);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(fdrates(&["--help"]).status.code(), Some(0));
    assert_eq!(fdrates(&["evolve", "--help"]).status.code(), Some(0));
    assert_eq!(fdrates(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(fdrates(&["constants", "--d", "5", "--m", "1.2"]).status.code(), Some(1));
    assert_eq!(fdrates(&["constants", "--d", "5", "--m", "0.9", "--alpha", "-10"]).status.code(), Some(1));
    // alpha_* for d = 5: no gap
    let o = fdrates(&["constants", "--d", "5", "--alpha", "-1.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("critical"));
    assert_eq!(fdrates(&["rescale", "--d", "5", "--m", "0.5", "--tau", "2"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.cfg");
    assert_eq!(fdrates(&["evolve", "--config", missing.to_str().unwrap()]).status.code(), Some(1));
    // a fit window without trace rows inside is a numerical failure
    let cfg = write(
        dir.path(),
        "empty-window.cfg",
        "d=5\nm=0.9\ngrid.N=100\ntime.dt=0.01\ntime.t_end=0.5\noutput.cadence=50\nfit.window_start=0.1\nfit.window_end=0.2\n",
    );
    assert_eq!(fdrates(&["evolve", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn help_documents_defaults() {
    let help = stdout(&fdrates(&["evolve", "--help"]));
    assert!(help.contains("grid.N") && help.contains("[default: 400]"));
    assert!(help.contains("time.dt") && help.contains("[default: 1e-3]"));
}
