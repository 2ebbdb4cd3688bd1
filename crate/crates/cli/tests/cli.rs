use std::path::Path;
use std::process::{Command, Output};

fn mahler(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args(args)
        .env_remove("MAHLER_PRECISION")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(text: &str) -> Vec<serde_json::Value> {
    text.lines()
        .map(|l| serde_json::from_str(l).expect("valid JSON line"))
        .collect()
}

#[test]
fn compute_r6_jensen() {
    let o = mahler(&[
        "compute", "--family", "r", "--lambda", "6", "--method", "jensen", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = &json_lines(&stdout(&o))[0];
    assert_eq!(v["method"], "jensen");
    assert!((v["value"].as_f64().unwrap() - 1.7273117540142897766).abs() < 1e-12);
    assert!(v["error_estimate"].as_f64().unwrap() >= 0.0);
}

#[test]
fn compute_q_torus_cross_method() {
    let o = mahler(&[
        "compute", "--family", "q", "--lambda", "-6", "--method", "torus", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = &json_lines(&stdout(&o))[0];
    assert_eq!(v["method"], "torus");
    let diff = (v["value"].as_f64().unwrap() - 1.7273117540142897766).abs();
    assert!(diff <= v["error_estimate"].as_f64().unwrap(), "{v}");
}

#[test]
fn compute_p_minus_4_is_zero() {
    let o = mahler(&[
        "compute", "--family", "p", "--lambda", "-4", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = &json_lines(&stdout(&o))[0];
    assert!(v["value"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn compute_table_and_csv() {
    let o = mahler(&["compute", "--family", "q", "--k", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("value"));
    let o = mahler(&[
        "compute", "--family", "r", "--lambda", "5", "--format", "csv",
    ]);
    let s = stdout(&o);
    assert!(
        s.starts_with("family,parameter,method,value,error_estimate,nodes\n"),
        "{s}"
    );
}

#[test]
fn compute_extended_precision_from_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_mahler"))
        .args([
            "compute", "--family", "q", "--lambda", "13", "--format", "json",
        ])
        .env("MAHLER_PRECISION", "extended")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v = &json_lines(&stdout(&o))[0];
    assert_eq!(v["precision"], "extended");
    let digits = v["value_extended"].as_str().unwrap();
    assert!(digits.starts_with("2.62286776516506809820"), "{digits}");
}

#[test]
fn compute_derivative() {
    let o = mahler(&[
        "compute",
        "--family",
        "r",
        "--lambda",
        "20",
        "--derivative",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = &json_lines(&stdout(&o))[0];
    assert!((v["derivative"].as_f64().unwrap() - 0.05051157239).abs() < 1e-10);
}

#[test]
fn compute_poly_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    std::fs::write(&path, "# 1 + x + y\n1:0,0\n1:1,0\n1:0,1\n").unwrap();
    let p = path.to_str().unwrap();
    for method in ["jensen", "torus"] {
        let o = mahler(&[
            "compute",
            "--poly-file",
            p,
            "--method",
            method,
            "--format",
            "json",
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let v = &json_lines(&stdout(&o))[0];
        assert!((v["value"].as_f64().unwrap() - 0.32306594721945051409).abs() < 1e-6);
    }
}

#[test]
fn compute_usage_errors() {
    assert_eq!(code(&mahler(&["compute", "--family", "r"])), 2);
    assert_eq!(
        code(&mahler(&[
            "compute", "--family", "q", "--k", "1", "--lambda", "2"
        ])),
        2
    );
    assert_eq!(
        code(&mahler(&[
            "compute",
            "--family",
            "q",
            "--k",
            "2",
            "--derivative"
        ])),
        2
    );
    assert_eq!(
        code(&mahler(&["compute", "--family", "x", "--lambda", "2"])),
        2
    );
    assert_eq!(
        code(&mahler(&[
            "--nodes", "10", "compute", "--family", "r", "--lambda", "6"
        ])),
        2
    );
    assert_eq!(code(&mahler(&[])), 2);
}

#[test]
fn compute_bad_poly_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "1:0,0\nnonsense\n").unwrap();
    let o = mahler(&["compute", "--poly-file", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn compute_overflowing_coefficient_is_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    std::fs::write(&path, format!("1{}:0,0\n1:1,1\n", "0".repeat(400))).unwrap();
    let p = path.to_str().unwrap();
    let o = mahler(&["compute", "--poly-file", p, "--method", "jensen"]);
    assert_eq!(code(&o), 3);
    let o = mahler(&[
        "--nodes",
        "64",
        "compute",
        "--poly-file",
        p,
        "--method",
        "torus",
    ]);
    assert_eq!(code(&o), 3);
}

#[test]
fn compute_three_variables_on_the_torus() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p3.txt");
    std::fs::write(&path, "1:0,0,0\n1:1,0,0\n1:0,1,0\n8:0,0,1\n").unwrap();
    let o = mahler(&[
        "compute",
        "--poly-file",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let v = &json_lines(&stdout(&o))[0];
    assert_eq!(v["method"], "torus");
    assert!((v["value"].as_f64().unwrap() - 8f64.ln()).abs() < 1e-10);
}

#[test]
fn verify_main_lambdas() {
    let o = mahler(&["verify", "main", "--lambda", "-6", "-8", "13", "16"]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 4);
    let params: Vec<f64> = lines
        .iter()
        .map(|v| v["parameter"].as_f64().unwrap())
        .collect();
    assert_eq!(params, vec![-8.0, -6.0, 13.0, 16.0]);
    for v in &lines {
        assert_eq!(v["passed"], true);
        assert!(v["residual"].as_f64().unwrap().abs() < 1e-7);
    }
}

#[test]
fn verify_hyp_grid() {
    let o = mahler(&["verify", "hyp", "--grid", "20"]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 2);
    for v in &lines {
        assert!(v["residual"].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn verify_gap_is_usage_error() {
    assert_eq!(code(&mahler(&["verify", "main", "--lambda", "5"])), 2);
    assert_eq!(code(&mahler(&["verify", "boyd", "--k", "5"])), 2);
    assert_eq!(code(&mahler(&["verify", "nosuch"])), 2);
}

#[test]
fn verify_failure_exit_code() {
    // a tolerance no computation can meet
    let o = mahler(&[
        "--tol",
        "main_neg=0",
        "verify",
        "main",
        "--lambda",
        "-20",
        "-10",
        "-8",
        "-6",
    ]);
    let lines = json_lines(&stdout(&o));
    let any_nonzero = lines.iter().any(|v| v["residual"].as_f64().unwrap() != 0.0);
    assert_eq!(code(&o), if any_nonzero { 1 } else { 0 });
    let o = mahler(&["--tol", "boyd=1e-30", "verify", "boyd", "--k", "0"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_lines(&stdout(&o))[0]["passed"], false);
}

#[test]
fn verify_unknown_tolerance_key() {
    assert_eq!(code(&mahler(&["--tol", "nosuch=1", "verify", "hyp"])), 2);
}

#[test]
fn verify_exploratory_does_not_gate() {
    let o = mahler(&[
        "verify",
        "main",
        "--lambda",
        "-6",
        "--exploratory",
        "--format",
        "table",
    ]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("exploratory"));
    assert!(s.contains("info"));
}

#[test]
fn verify_all_is_deterministic_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let oa = mahler(&["verify", "all", "--out", a.to_str().unwrap()]);
    let ob = mahler(&["--jobs", "3", "verify", "all", "--out", b.to_str().unwrap()]);
    assert_eq!(code(&oa), 0);
    assert_eq!(code(&ob), 0);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);
    let lines = json_lines(std::str::from_utf8(&ta).unwrap());
    let ids: std::collections::BTreeSet<String> = lines
        .iter()
        .map(|v| v["identity_id"].as_str().unwrap().to_string())
        .collect();
    for id in [
        "boyd",
        "main_neg",
        "main_pos",
        "derivative_neg",
        "derivative_pos",
        "J1",
        "J2",
        "J3",
        "hyp_transform_1",
        "hyp_transform_2",
        "branch_bounds",
        "substitution",
        "singularity_order",
        "asymptotic_gap",
    ] {
        assert!(ids.contains(id), "{id} missing");
    }
}

#[test]
fn sweep_main_identity() {
    let o = mahler(&[
        "sweep",
        "--identity",
        "main",
        "--from",
        "13",
        "--to",
        "20",
        "--step",
        "0.5",
    ]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(
        lines.next(),
        Some("lambda,lhs,rhs,residual,error_estimate,status")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 15);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f.len(), 6);
        assert!(f[3].parse::<f64>().unwrap().abs() < 1e-7);
        assert_eq!(f[5], "pass");
    }
}

#[test]
fn sweep_family_r_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = mahler(&[
        "sweep",
        "--family",
        "r",
        "--from",
        "5",
        "--to",
        "10",
        "--step",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 6);
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn sweep_json_lines() {
    let o = mahler(&[
        "sweep",
        "--identity",
        "J2",
        "--from",
        "-8",
        "--to",
        "-6",
        "--step",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&stdout(&o));
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["lambda"], -8.0);
    assert_eq!(lines[2]["status"], "pass");
}

#[test]
fn sweep_usage_errors() {
    assert_eq!(
        code(&mahler(&[
            "sweep", "--family", "r", "--from", "5", "--to", "1", "--step", "1"
        ])),
        2
    );
    assert_eq!(
        code(&mahler(&[
            "sweep", "--family", "r", "--from", "1", "--to", "5", "--step", "0"
        ])),
        2
    );
    assert_eq!(
        code(&mahler(&[
            "sweep",
            "--identity",
            "main",
            "--from",
            "-6",
            "--to",
            "14",
            "--step",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&mahler(&[
            "sweep", "--from", "1", "--to", "5", "--step", "1"
        ])),
        2
    );
}

#[test]
fn identical_invocations_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let p = dir.path().join(name);
        let o = mahler(&[
            "sweep",
            "--family",
            "p",
            "--from",
            "13",
            "--to",
            "16",
            "--step",
            "1",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
        std::fs::read(&p).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
}

#[test]
fn show_config() {
    let o = mahler(&["--show-config"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["seed"], 0);
    assert_eq!(v["node_budget"], 4096);
    assert_eq!(v["precision"], "double");
    assert_eq!(v["tolerances"]["main_neg"], 1e-7);
    let o = mahler(&["--tol", "J1=1e-6", "--show-config"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["tolerances"]["J1"], 1e-6);
}

#[test]
fn out_to_missing_directory_is_usage_error() {
    let o = mahler(&[
        "verify",
        "hyp",
        "--out",
        Path::new("/nonexistent/dir/x.jsonl").to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}
