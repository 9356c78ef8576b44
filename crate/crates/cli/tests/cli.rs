use std::process::{Command, Output};

use serde_json::Value;

fn rep2d(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rep2d"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

#[test]
fn generate_formats() {
    let out = rep2d(&["generate", "run", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("P1\n32 32\n"));

    let out = rep2d(&["generate", "quartic", "3"]);
    assert!(stdout(&out).starts_with("26 26 28\n"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("26x26 grid, alphabet 28"));

    let out = rep2d(&["generate", "tandem", "1", "--format", "pbm"]);
    let text = stdout(&out);
    assert!(
        text.starts_with("P1\n8 8\n0 1 0 0 1 0 0 1\n0 1 1 0 1 1 0 1\n"),
        "{text}"
    );

    let out = rep2d(&["generate", "tandem", "1", "--labels", "widened"]);
    assert!(stdout(&out).starts_with("P1\n14 14\n"));
}

#[test]
fn generate_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("a2.pbm");
    let witnesses = dir.path().join("a2.txt");
    let out = rep2d(&[
        "generate",
        "run",
        "2",
        "--out",
        grid.to_str().unwrap(),
        "--witnesses",
        witnesses.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let listed = std::fs::read_to_string(&witnesses).unwrap();
    assert!(listed.starts_with("# family=run level=2 n=32 kind=run count=63\n"));
    assert_eq!(listed.lines().count(), 64);

    let out = rep2d(&["count", "runs", grid.to_str().unwrap()]);
    let v = json(&out);
    assert!(v["runs"].as_u64().unwrap() >= 63);
    assert_eq!(v["dims"], serde_json::json!([32, 32]));
    assert_eq!(v["family"], Value::Null);
    assert_eq!(v["quartics"], Value::Null);
    for key in [
        "family",
        "dims",
        "tandems_h",
        "tandems_v",
        "quartics",
        "runs",
        "elapsed_ms",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn count_modes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "3 4 3\n0 1 0 1\n2 0 2 0\n0 1 0 1\n").unwrap();
    let path = path.to_str().unwrap();
    let fast = json(&rep2d(&["count", "all", path, "--seed", "1"]));
    let oracle = json(&rep2d(&["count", "all", path, "--mode", "oracle"]));
    for key in ["tandems_h", "tandems_v", "quartics", "runs"] {
        assert_eq!(fast[key], oracle[key], "{key}");
    }

    let q = json(&rep2d(&["count", "quartics", "quartic:2"]));
    assert_eq!(q["family"], "quartic");
    assert!(q["quartics"].as_u64().unwrap() >= 18);
}

#[test]
fn oracle_cap_refuses() {
    let out = rep2d(&["count", "runs", "run:2", "--mode", "oracle", "--cap", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap is 100 cells"));
}

#[test]
fn verify_families() {
    for (kind, level, witnesses) in [
        ("run", "2", 63),
        ("quartic", "2", 18),
        ("quartic_binary", "2", 54),
    ] {
        let out = rep2d(&["verify", kind, level]);
        let v = json(&out);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["witnesses"]["total"], witnesses);
        assert_eq!(v["witnesses"]["verified"], witnesses);
        assert!(v["measured"].as_u64().unwrap() >= witnesses);
    }
    let v = json(&rep2d(&[
        "verify", "run", "2", "--mode", "oracle", "--cap", "1024",
    ]));
    assert_eq!(v["mode"], "oracle");
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn verify_reports_repeated_tandem_witnesses() {
    let out = rep2d(&["verify", "tandem", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["witnesses"]["verified"], 72);
    assert_eq!(v["witnesses"]["distinct"], 30);
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    stdout(out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn report_run_growth() {
    let out = rep2d(&["report", "run", "--from", "1", "--to", "6"]);
    let text = stdout(&out);
    assert!(text.starts_with("level,n,predicted,measured,ratio_n^2*log2(n)\n"));
    let rows = csv_rows(&out);
    let predicted: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
    assert_eq!(&predicted[..3], &["1", "63", "1863"]);
    let ratios: Vec<f64> = rows[2..].iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(ratios.windows(2).all(|w| w[0] <= w[1]));
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!(
        ratios.iter().all(|r| (r / mean - 1.0).abs() <= 0.2),
        "{ratios:?}"
    );
}

#[test]
fn report_measures_small_levels() {
    let out = rep2d(&["report", "tandem", "--to", "3", "--measure"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0][..4], ["1", "8", "72", "47"]);
    for r in &rows {
        let ratio: f64 = r[4].parse().unwrap();
        assert!((1.0 / 20.0..=1.0).contains(&ratio));
    }
    let rows = csv_rows(&rep2d(&[
        "report",
        "quartic",
        "--from",
        "2",
        "--to",
        "5",
        "--measure",
    ]));
    assert_eq!(rows[0][..3], ["2", "8", "18"]);
    assert!(!rows[0][3].is_empty());
    assert!(rows[3][3].is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(rep2d(&["generate", "run", "0"]).status.code(), Some(2));
    assert_eq!(rep2d(&["generate", "square", "1"]).status.code(), Some(2));
    assert_eq!(
        rep2d(&["verify", "quartic_binary", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rep2d(&["report", "run", "--to", "11"]).status.code(),
        Some(2)
    );
    assert_eq!(
        rep2d(&["count", "runs", "/nonexistent/grid.txt"])
            .status
            .code(),
        Some(2)
    );
}
