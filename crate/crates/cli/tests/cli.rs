use std::path::Path;
use std::process::{Command, Output};

fn hchit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hchit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_set(dir: &Path, name: &str, n: u32, size: u32, seed: u32) -> String {
    let path = dir.join(name);
    let p = path.to_str().unwrap().to_string();
    let o = hchit(&[
        "make-set",
        "sample",
        "--n",
        &n.to_string(),
        "--M",
        &size.to_string(),
        "--seed",
        &seed.to_string(),
        "-o",
        &p,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    p
}

#[test]
fn xi_table_has_schema_and_exact_values() {
    let o = hchit(&["xi", "--n", "4", "--exact"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# schema=1"));
    assert_eq!(lines.next(), Some("k,xi,xi_times_binom,xi_exact"));
    assert!(text.contains(",25/96\n"));
}

#[test]
fn json_format() {
    let o = hchit(&["asl", "--alpha", "0.5", "--z", "0.75", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], 1);
    assert!((v["rows"][0]["asl"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(hchit(&["preset", "no-such-preset"]).status.code(), Some(2));
    assert_eq!(hchit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hchit(&["asl", "--alpha", "1.5", "--z", "0.5"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let set = write_set(dir.path(), "s.txt", 8, 4, 1);
    let o = hchit(&["incl-excl", "--set", &set, "--x", "00", "--i", "4", "--a", "1", "--m", "auto"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(hchit(&["survival", "--lumped", "--n", "30", "--k", "3", "--horizon", "100000000"]).status.code(), Some(3));
}

#[test]
fn survival_from_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let set = write_set(dir.path(), "s.txt", 8, 4, 2);
    let o = hchit(&["survival", "--set", &set, "--x", "ff", "--horizon", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("# schema=1\nt,survival\n0,1\n"));
    assert_eq!(text.lines().count(), 2 + 21);
    let lumped = hchit(&["survival", "--lumped", "--n", "6", "--k", "6", "--horizon", "3"]);
    assert_eq!(stdout(&lumped), "# schema=1\nt,survival\n0,1\n1,1\n2,1\n3,1\n");
}

#[test]
fn monte_carlo_output_ignores_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let set = write_set(dir.path(), "s.txt", 10, 6, 3);
    let run = |threads: &str| {
        let o = hchit(&[
            "hit-mc", "--set", &set, "--x", "000", "--m", "auto", "--trials", "3000", "--seed", "9", "--threads", threads,
        ]);
        assert!(o.status.success());
        (o.stdout, o.stderr)
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn preset_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |sub: &str, threads: &str| {
        let out = dir.path().join(sub);
        let o = hchit(&[
            "preset", "thm-perc", "--n", "12", "--starts", "3", "--trials", "300", "--seed", "7", "--threads", threads,
            "--out", out.to_str().unwrap(),
        ]);
        assert!(o.status.code().is_some_and(|c| c <= 1));
        (
            std::fs::read(out.join("survival.csv")).unwrap(),
            std::fs::read(out.join("report.json")).unwrap(),
        )
    };
    let a = run("a", "1");
    let b = run("b", "3");
    assert_eq!(a.0, b.0);
    let report: serde_json::Value = serde_json::from_slice(&a.1).unwrap();
    assert_eq!(report["preset"], "thm-perc");
    assert_eq!(report["artifacts"], serde_json::json!(["set.txt", "survival.csv", "report.json"]));
}

#[test]
fn failed_preset_leaves_no_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = hchit(&["preset", "thm-gen", "--n", "22", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let left: Vec<_> = std::fs::read_dir(&out)
        .map(|d| d.collect::<Vec<_>>())
        .unwrap_or_default();
    assert!(left.is_empty(), "{left:?}");
}

#[test]
fn check_reports_violation_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("single.txt");
    std::fs::write(&path, "n=12\n0\n").unwrap();
    let o = hchit(&["check", "--set", path.to_str().unwrap(), "--exact-stats"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdicts"]["vbig"], false);
    assert_eq!(report["size_ratio"], 1.0);
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# defaults\nalpha = 0.5\nz = 0.5\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_file = hchit(&["--config", c, "asl"]);
    assert!(from_file.status.success(), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert!(stdout(&from_file).contains("0.5,0.5,"));
    let overridden = hchit(&["--config", c, "asl", "--z", "0.75"]);
    assert!(stdout(&overridden).contains("0.5,0.75,0.666"));
    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    assert_eq!(hchit(&["--config", c, "asl"]).status.code(), Some(2));
}

#[test]
fn lemma_laplace_preset_with_cube_scale() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ll");
    let o = hchit(&["preset", "lemma-laplace", "--n", "40", "--m-cube", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("laplace.csv")).unwrap();
    assert!(csv.starts_with("# schema=1\nk,xi,laplace_formula,approximation,rel_error\n"));
    assert_eq!(csv.lines().count(), 2 + 40);
}
