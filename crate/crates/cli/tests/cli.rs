use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn num(v: &Value, path: &str) -> f64 {
    v.pointer(path)
        .and_then(Value::as_f64)
        .unwrap_or_else(|| panic!("missing {path}"))
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).expect("csv exists");
    let header = reader
        .headers()
        .unwrap()
        .iter()
        .map(str::to_owned)
        .collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn verify_passes_and_is_repeatable() {
    let a = qet(&["verify", "--seed", "7", "--ensemble", "200"]);
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stdout)
    );
    let b = qet(&["verify", "--seed", "7", "--ensemble", "200"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_without_ensemble_skips() {
    let out = qet(&["verify", "--ensemble", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("consumption_bound") && l.contains("skipped")));
}

#[test]
fn verify_reports_corrupt_builtin() {
    let out = qet(&["verify", "--ensemble", "0", "--corrupt-builtin"]);
    assert_eq!(out.status.code(), Some(1));
    let failures: Value = serde_json::from_slice(&out.stderr).expect("JSON failure list");
    let first = &failures["failures"][0];
    assert_eq!(first["check"], "builtin_measurements");
    assert!(first["message"]
        .as_str()
        .unwrap()
        .contains("ConstraintViolation"));
}

#[test]
fn report_projective() {
    let v = stdout_json(&qet(&[
        "report",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        "builtin:projective",
    ]));
    for path in [
        "/teleported_energy/closed",
        "/teleported_energy/bruteforce",
        "/teleported_energy/max_closed",
    ] {
        assert!(
            (num(&v, path) - 0.114_747_633_940_147).abs() < 1e-12,
            "{path}"
        );
    }
    assert!((num(&v, "/delta_s/bruteforce") - 0.416_495_530_699_687).abs() < 1e-12);
    assert!(num(&v, "/bound770/slack").abs() < 1e-12);
    assert!(num(&v, "/bound32/slack") > 0.0);
}

#[test]
fn report_weak_measurement_is_nearly_tight() {
    let v = stdout_json(&qet(&[
        "report",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        "builtin:weak(0.01)",
    ]));
    let slack = num(&v, "/bound32/slack");
    let lhs = num(&v, "/bound32/lhs");
    assert!(slack > 0.0);
    // Relative gap is O(u^2), so the absolute gap is O(u^4).
    assert!(slack / lhs < 1e-4, "{slack} {lhs}");
}

#[test]
fn report_identity_file_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("identity.json");
    std::fs::write(&path, r#"{"outcomes": [{"m": 1.0, "l": 0.0}]}"#).unwrap();
    let v = stdout_json(&qet(&[
        "report",
        "--h",
        "0.7",
        "--k",
        "1.3",
        "--povm",
        path.to_str().unwrap(),
    ]));
    for path in [
        "/input_energy/bruteforce",
        "/teleported_energy/bruteforce",
        "/delta_s/bruteforce",
        "/mutual_info",
    ] {
        assert!(num(&v, path).abs() < 1e-14, "{path}");
    }
}

#[test]
fn report_bad_file_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"weights\": [\n  {\"p\": 0.5 \"q\": 0.5}\n]}").unwrap();
    let out = qet(&[
        "report",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let missing = qet(&[
        "report",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        "/nonexistent/povm.json",
    ]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(
        qet(&[
            "report",
            "--h",
            "-1",
            "--k",
            "1",
            "--povm",
            "builtin:projective"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(qet(&["report", "--h", "1"]).status.code(), Some(2));
}

#[test]
fn sweep_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = qet(&[
        "sweep",
        "--h",
        "1:1:1",
        "--k",
        "1:1:1",
        "--povm",
        "builtin:projective",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(&header[..4], ["h", "k", "E_A", "maxE_B_closed"]);
    assert_eq!(rows.len(), 1);
    let get = |name: &str| rows[0][column(&header, name)].parse::<f64>().unwrap();
    assert!((get("maxE_B_closed") - 0.114_747_633_940_147).abs() < 1e-12);
    assert!((get("maxE_B_numeric") - 0.114_747_633_940_147).abs() < 1e-12);
    assert!((get("delta_S") - 0.416_495_530_699_687).abs() < 1e-12);
}

#[test]
fn sweep_log_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = qet(&[
        "sweep",
        "--h",
        "0.1:10:20:log",
        "--k",
        "0.1:10:20:log",
        "--povm",
        "builtin:weak(0.5)",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 400);
    let (h, k) = (column(&header, "h"), column(&header, "k"));
    // h-major order.
    assert_eq!(rows[0][h], rows[19][h]);
    assert_ne!(rows[0][k], rows[1][k]);
    for row in &rows {
        let get = |name: &str| row[column(&header, name)].parse::<f64>().unwrap();
        for cell in &row[..16] {
            let x: f64 = cell.parse().unwrap();
            assert!(x.is_finite());
            assert_eq!(&format!("{x:.16e}"), cell);
        }
        assert!(get("bound32_lhs") >= get("bound32_rhs") - 1e-10);
        assert!(get("bound770_lhs") >= get("bound770_rhs") - 1e-10);
    }
}

#[test]
fn sweep_unwritable_output() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("file");
    std::fs::write(&file, "").unwrap();
    let target = file.join("sub");
    let out = qet(&[
        "sweep",
        "--h",
        "1:1:1",
        "--k",
        "1:1:1",
        "--povm",
        "builtin:projective",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evolve_projective() {
    let out = qet(&[
        "evolve",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        "builtin:projective",
        "--t-max",
        "1.5707963267948966",
        "--points",
        "257",
    ]);
    assert!(out.status.success());
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["t", "HB_bruteforce", "HB_closed", "V_expect"]
    );
    let rows: Vec<Vec<f64>> = reader
        .records()
        .map(|r| r.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 257);
    assert_eq!(rows[0][0], 0.0);
    assert!(rows[0][1].abs() < 1e-12 && rows[0][2] == 0.0);
    assert!((rows[128][1] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
    for r in &rows {
        assert!((r[1] - r[2]).abs() < 1e-9 && r[3].abs() < 1e-9);
    }
    let bad = qet(&[
        "evolve",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        "builtin:projective",
        "--t-max",
        "0",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn optimize_policy_and_weights() {
    let v = stdout_json(&qet(&[
        "optimize",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        "builtin:weak(0.5)",
    ]));
    assert!((num(&v, "/best_value") - num(&v, "/closed_form")).abs() < 1e-10);
    assert_eq!(v["converged"], true);
    let w = stdout_json(&qet(&[
        "optimize",
        "--h",
        "1",
        "--k",
        "1",
        "--povm",
        "builtin:projective",
        "--over",
        "weights",
    ]));
    assert!((num(&w, "/best_value") - num(&w, "/projective_closed_form")).abs() < 1e-8);
}
