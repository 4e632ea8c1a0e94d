use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tameplan::cli::{cmd_plan, cmd_random, Overrides, QueryDocument, TrajectoryDocument};
use tameplan::Algorithm;

const W3: &str = r#"{"d":2,"k":2,"n":2,"algorithm":"even","configurations":[[[0,0],[1,0]],[[1,0],[0,0]]]}"#;

fn run(args: &[&str], input: &str) -> Output {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(input.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap().to_string();
    let args: Vec<String> = args
        .iter()
        .map(|a| if *a == "@" { path.clone() } else { a.to_string() })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_tameplan")).args(&args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_reason(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn plan_w3_reports_domain_three() {
    let out = run(&["plan", "--samples", "10", "@"], W3);
    assert_eq!(out.status.code(), Some(0));
    let doc: TrajectoryDocument = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.metadata.ell, 3);
    assert_eq!(doc.waypoint_times, vec![0.0, 1.0]);
    let times: Vec<f64> = doc.samples.iter().map(|r| r.t).collect();
    assert!(times.windows(2).all(|w| w[0] <= w[1]));
    assert!(times.contains(&0.0) && times.contains(&1.0));
}

#[test]
fn shape_and_parity_errors_exit_two() {
    let bad_k = r#"{"d":2,"k":2,"n":2,"configurations":[[[0,0],[1,0]],[[1,0],[0,0],[5,5]]]}"#;
    let out = run(&["plan", "@"], bad_k);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_reason(&out), "shape");

    let odd = r#"{"d":3,"k":2,"n":2,"algorithm":"even","configurations":[[[0,0,0],[1,0,0]],[[1,0,0],[0,0,0]]]}"#;
    let out = run(&["plan", "@"], odd);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_reason(&out), "parity");

    let clash = r#"{"d":2,"k":2,"n":2,"configurations":[[[0,0],[0,0]],[[1,0],[0,0]]]}"#;
    let out = run(&["plan", "@"], clash);
    assert_eq!(stderr_reason(&out), "coincident");
}

#[test]
fn classify_examples() {
    let q = r#"{"d":2,"k":3,"n":2,"configurations":[[[0,0],[1,0],[0,1]],[[0,0],[1,0],[2,0]]]}"#;
    let out = run(&["classify", "@"], q);
    let v = stdout_json(&out);
    assert_eq!(v["cells"], serde_json::json!([2, 3]));
    assert_eq!(v["ell"], 5);

    let colinear = r#"{"d":2,"k":3,"n":2,"algorithm":"even","configurations":[[[0,0],[1,0],[2,0]],[[0,1],[1,1],[3,1]]]}"#;
    let v = stdout_json(&run(&["classify", "@"], colinear));
    assert_eq!(v["antipodes"], 0);
    assert_eq!(v["ell"], 6);

    let boundary = r#"{"d":2,"k":3,"n":2,"configurations":[[[0,0],[6e-10,1],[1.2e-9,2]],[[0,0],[1,0],[2,0]]]}"#;
    let out = run(&["classify", "@"], boundary);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_reason(&out), "boundary");
}

#[test]
fn verify_passes_and_injected_faults_fail() {
    let out = run(&["verify", "--resolution", "1000", "@"], W3);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for field in [
        "max_waypoint_error",
        "min_separation",
        "min_separation_t",
        "junction_gap_max",
        "domain_count_observed",
        "domain_count_expected",
        "continuity_constant_estimate",
    ] {
        assert!(!v[field].is_null(), "{field} missing");
    }
    assert!(v["min_separation"].as_f64().unwrap() > 0.0);

    for fault in ["collision", "waypoint"] {
        let out = run(&["verify", "--inject-fault", fault, "@"], W3);
        assert_eq!(out.status.code(), Some(1), "{fault}");
        assert_eq!(stdout_json(&out)["pass"], false);
    }
}

#[test]
fn audit_examples() {
    for (alg, d, k, n, expected) in [("general", 3, 3, 2, 5), ("even", 2, 4, 2, 6), ("even", 2, 2, 4, 4)] {
        let (d, k, n) = (d.to_string(), k.to_string(), n.to_string());
        let out = run(&["audit", "--algorithm", alg, "-d", &d, "-k", &k, "-n", &n], "");
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        assert_eq!(v["expected"], expected);
        assert_eq!(v["observed"], expected);
    }
}

#[test]
fn random_is_deterministic_and_targets_cells() {
    let args = ["random", "--algorithm", "even", "-d", "2", "-k", "2", "-n", "2", "--count", "5", "--seed", "7", "--cell", "ell=3"];
    let a = run(&args, "");
    let b = run(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<&str> = std::str::from_utf8(&a.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 5);
    for line in lines {
        let out = run(&["classify", "@"], line);
        assert_eq!(stdout_json(&out)["ell"], 3);
    }
    let empty = run(&["random", "-d", "2", "-k", "2", "-n", "2", "--count", "0"], "");
    assert_eq!(empty.status.code(), Some(0));
    assert!(empty.stdout.is_empty());
}

#[test]
fn csv_export_has_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("samples.csv");
    let out = run(&["plan", "--samples", "4", "--csv", path.to_str().unwrap(), "@"], W3);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "robot", "x1", "x2"]);
    assert_eq!(reader.records().count(), 5 * 2);
}

#[test]
fn plan_round_trip_and_determinism() {
    let docs = cmd_random(Algorithm::General, &Overrides::default(), 3, 3, 3, 4, 99, None).unwrap();
    for doc in docs {
        let a = cmd_plan(&doc, &Overrides::default(), 50).unwrap();
        let b = cmd_plan(&doc, &Overrides::default(), 50).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let echoed: QueryDocument = serde_json::from_str(&serde_json::to_string(&a.metadata.query).unwrap()).unwrap();
        assert_eq!(echoed, doc);
    }
}
