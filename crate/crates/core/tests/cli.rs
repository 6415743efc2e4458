use std::path::PathBuf;
use std::process::{Command, Output};

fn conelab(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_conelab"));
    cmd.args(args).env_remove("CONELAB_CATALOG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conelab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn verify_burniat_family() {
    let out = conelab(&["verify", "--filter", "burniat-*", "--format", "json"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let reports = doc["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 6);
    assert!(reports.iter().all(|r| r["passed"] == true));
    assert_eq!(doc["passed"], true);
}

#[test]
fn text_and_json_carry_the_same_verdicts() {
    let text = stdout(&conelab(&["verify", "--filter", "pq-*"], &[]));
    let json: serde_json::Value =
        serde_json::from_slice(&conelab(&["verify", "--filter", "pq-*", "--format", "json"], &[]).stdout).unwrap();
    for r in json["reports"].as_array().unwrap() {
        for c in r["checks"].as_array().unwrap() {
            let line = format!("[{}] {}: {}", c["status"].as_str().unwrap(), c["name"].as_str().unwrap(), c["detail"].as_str().unwrap());
            assert!(text.contains(&line), "{line}");
        }
        assert!(text.contains(r["negative_summary"].as_str().unwrap()));
    }
}

#[test]
fn hj_and_enumerate() {
    let out = conelab(&["hj", "5", "2"], &[]);
    assert_eq!((out.status.code(), stdout(&out)), (Some(0), "[3, 2]\n".to_string()));
    let out = conelab(&["enumerate", "--r", "3", "--type", "minus1"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 6);
    let out = conelab(&["enumerate", "--r", "4", "--type", "minus2", "--format", "json"], &[]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["classes"].as_array().unwrap().len(), 16);
}

#[test]
fn table_lists_every_entry() {
    let out = conelab(&["table"], &[]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 14);
    assert!(text.contains("10(-1,1), 2(-4,0), (-2,0)"));
}

#[test]
fn dual_of_a_quadrant_under_a_hyperbolic_form() {
    let rays = scratch("rays.txt", "# two rays\n1 0\n0 1\n");
    let gram = scratch("gram.txt", "0 1\n1 0\n");
    let out = conelab(&["dual", "--rays", rays.to_str().unwrap(), "--gram", gram.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(0));
    let mut lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    lines.sort();
    assert_eq!(lines, ["0 1", "1 0"]);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(conelab(&["hj", "4", "2"], &[]).status.code(), Some(2));
    assert_eq!(conelab(&["verify", "--catalog", "/nonexistent/c.json"], &[]).status.code(), Some(2));
    let bad = scratch("asym.txt", "1 2\n3 1\n");
    let out = conelab(&["dual", "--rays", bad.to_str().unwrap(), "--gram", bad.to_str().unwrap()], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 1)"));
    assert_eq!(conelab(&["frobnicate"], &[]).status.code(), Some(2));
}

#[test]
fn environment_overrides_the_bundled_catalogue() {
    let mut text = conelab::catalog::bundled_text().to_string();
    text = text.replacen("\"expected_negatives\": [\n        [\n          -1,\n          1,\n          2\n        ]", "\"expected_negatives\": [\n        [\n          -1,\n          1,\n          3\n        ]", 1);
    let path = scratch("broken.json", &text);
    let out = conelab(&["verify", "--filter", "inoue"], &[("CONELAB_CATALOG", path.to_str().unwrap())]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("inoue (Inoue, K^2 = 7): FAIL"));
    let out = conelab(&["table", "--filter", "inoue"], &[("CONELAB_CATALOG", path.to_str().unwrap())]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_fields_need_the_lenient_flag() {
    let text = conelab::catalog::bundled_text().replacen("\"k2\": 9,", "\"k2\": 9, \"colour\": \"red\",", 1);
    let path = scratch("extra.json", &text);
    let p = path.to_str().unwrap();
    assert_eq!(conelab(&["verify", "--catalog", p, "--filter", "fpp"], &[]).status.code(), Some(2));
    let out = conelab(&["verify", "--catalog", p, "--filter", "fpp", "--strict", "false"], &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
}
