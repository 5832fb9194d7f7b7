use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_trendcycle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_series(dir: &Path, name: &str, values: &[f64]) -> String {
    let mut text = String::from("date,value\n");
    for (i, v) in values.iter().enumerate() {
        text.push_str(&format!("{}-{:02},{v}\n", 2018 + i / 12, i % 12 + 1));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn column(path: &Path, k: usize) -> Vec<String> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(k).unwrap().to_string())
        .collect()
}

fn wavy(n: usize) -> Vec<f64> {
    (0..n).map(|t| 100.0 + 0.3 * t as f64 + 2.0 * (t as f64 * 0.7).sin()).collect()
}

#[test]
fn smooth_writes_all_tables() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "in.csv", &wavy(48));
    let out = dir.path().join("out");
    let o = run(&["smooth", "--input", &input, "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for f in ["estimates.csv", "plan.csv", "turning_points.csv", "coefficients.csv"] {
        assert!(out.join(f).exists(), "{f} missing");
    }
    let head = fs::read_to_string(out.join("estimates.csv")).unwrap();
    assert!(head.starts_with("period,estimate,source\n2018-01,"));
    assert_eq!(column(&out.join("plan.csv"), 1).last().unwrap(), "asym");
}

#[test]
fn outlier_flag_selects_robust_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "in.csv", &wavy(48));
    let out = dir.path().join("out");
    let o = run(&["smooth", "--input", &input, "--outlier", "ls:2020-01", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let kinds = column(&out.join("plan.csv"), 1);
    assert!(kinds.iter().any(|k| k == "robust_sym"));
    let ids = column(&out.join("coefficients.csv"), 0);
    assert_eq!(ids.first().unwrap(), "2018-01");
    assert_eq!(ids.last().unwrap(), "2021-12");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_series(dir.path(), "in.csv", &wavy(48));
    let gap = dir.path().join("gap.csv");
    fs::write(&gap, "date,value\n2020-01,1\n2020-03,2\n").unwrap();
    let o = run(&["smooth", "--input", gap.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("2020-02"), "{}", stderr(&o));

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "date,value\n2020-01,1\n2020-02,x1\n").unwrap();
    let o = run(&["smooth", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    assert_eq!(code(&run(&["smooth", "--input", "/nonexistent.csv"])), 2);
    assert_eq!(code(&run(&["smooth", "--bogus"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    let o = run(&["smooth", "--input", &good, "--method", "nope"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("nope"));
    assert_eq!(code(&run(&["smooth", "--input", &good, "--method", "lqd", "--outlier", "ao:2019-01"])), 1);
    assert_eq!(code(&run(&["smooth", "--input", &good, "--boundary", "extrapolate"])), 1);
    assert_eq!(code(&run(&["confint", "--input", &good, "--method", "lms"])), 1);
    assert_eq!(code(&run(&["smooth", "--input", &good, "--outlier", "xx:2019-01"])), 1);
    assert_eq!(code(&run(&["smooth"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);

    let out = dir.path().join("o");
    let o = run(&[
        "smooth", "--input", &good, "--outlier", "ao:2019-06", "--outlier", "ao_trend:2019-06",
        "--out-dir", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("2019-06"));
}

#[test]
fn decimal_comma_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("date;value\n");
    for (i, v) in wavy(30).iter().enumerate() {
        text.push_str(&format!("{}-{:02};{}\n", 2018 + i / 12, i % 12 + 1, v.to_string().replace('.', ",")));
    }
    let input = dir.path().join("in.csv");
    fs::write(&input, text).unwrap();
    let out = dir.path().join("out");
    let args = ["smooth", "--input", input.to_str().unwrap(), "--out-dir", out.to_str().unwrap()];
    assert_eq!(code(&run(&args)), 2, "without the flag the value column is missing");
    let mut with = args.to_vec();
    with.push("--decimal-comma");
    let o = run(&with);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "in.csv", &wavy(40));
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, format!(r#"{{"input": "{input}", "method": "med", "h": 3}}"#)).unwrap();
    let out = dir.path().join("out");
    let o = run(&["smooth", "--config", cfg.to_str().unwrap(), "--h", "6", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(column(&out.join("estimates.csv"), 2)[0], "subwindow_7");

    let out3 = dir.path().join("out3");
    let o = run(&["smooth", "--config", cfg.to_str().unwrap(), "--out-dir", out3.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(column(&out3.join("estimates.csv"), 2)[0], "subwindow_4");

    fs::write(&cfg, r#"{"methd": "med"}"#).unwrap();
    assert_eq!(code(&run(&["smooth", "--config", cfg.to_str().unwrap()])), 1);
}

#[test]
fn simulate_writes_the_ls_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = run(&["simulate", "--trend-degree", "2", "--shock", "ls:2022-01:0.10", "--out-dir", d]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let path = dir.path().join("series.csv");
    let dates = column(&path, 0);
    let values: Vec<f64> = column(&path, 1).iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(values.len(), 72);
    assert_eq!(dates[0], "2018-01");
    for (t, v) in values.iter().enumerate() {
        let trend = 100.0 + 0.02 * (t as f64 - 30.0).powi(2);
        let want = if t >= 48 { trend * 1.1 } else { trend };
        assert!((v - want).abs() < 1e-12, "t={t}");
    }
    assert_eq!(code(&run(&["simulate", "--shock", "ao_trend:2022-01:0.1", "--out-dir", d])), 1);
}

#[test]
fn vintages_confint_and_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "in.csv", &wavy(48));
    let out = dir.path().join("out");
    let o_dir = out.to_str().unwrap();
    let o = run(&["vintages", "--input", &input, "--vintage-start", "2020-06", "--out-dir", o_dir]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let pubs = column(&out.join("vintages.csv"), 0);
    assert_eq!(pubs.first().unwrap(), "2020-06");
    assert_eq!(pubs.last().unwrap(), "2021-12");
    assert!(String::from_utf8_lossy(&o.stdout).contains("max_abs_revision="));

    let o = run(&["confint", "--input", &input, "--alpha", "0.1", "--out-dir", o_dir]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = fs::read_to_string(out.join("intervals.csv")).unwrap();
    assert!(text.starts_with("period,estimate,lower,upper,df,sigma2,filter_id\n"));
    assert_eq!(text.lines().count(), 49);

    let o = run(&["coefficients", "--h", "6", "--ratio", "3.5", "--out-dir", o_dir]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rows = column(&out.join("coefficients.csv"), 0);
    assert_eq!(rows.len(), 13 + (7..=12).sum::<usize>());
    assert!(rows.iter().all(|r| r == "musgrave_h6"));

    let o = run(&["coefficients", "--input", &input, "--outlier", "ao:2019-06", "--out-dir", o_dir]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(column(&out.join("plan.csv"), 0).len(), 48);
}

#[test]
fn log_transform_round_trips_constants() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_series(dir.path(), "in.csv", &[50.0; 30]);
    let out = dir.path().join("out");
    let o = run(&["smooth", "--input", &input, "--log", "--out-dir", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    for v in column(&out.join("estimates.csv"), 1) {
        assert!((v.parse::<f64>().unwrap() - 50.0).abs() < 1e-9);
    }
    let neg = write_series(dir.path(), "neg.csv", &[-1.0; 30]);
    assert_eq!(code(&run(&["smooth", "--input", &neg, "--log"])), 2);
}
