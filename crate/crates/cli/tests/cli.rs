use std::path::PathBuf;
use std::process::Command;

use ssmthom::io;
use ssmthom::{Multisingularity, Series, Table};
use ssmthom_cli::{run_command, EXIT_COMPUTE, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> ssmthom_cli::CommandResult {
    run_command(args.iter().copied())
}

#[test]
fn master_renders_in_partition_notation() {
    let r = run(&["master", "--l", "1", "--degree", "4"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("-s_0 + 1/2 s_1 + 7/6 s_2 - 1/3 s_{11} + "), "{}", r.stdout);
    assert_eq!(r.stdout, "-s_0 + 1/2 s_1 + 7/6 s_2 - 1/3 s_{11} + s_3 - 5/4 s_{21} + 1/4 s_{111}\n");
}

#[test]
fn compressed_partitions() {
    let r = run(&["master", "--l", "1", "--degree", "6", "--compress"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("s_{1^5}"), "{}", r.stdout);
    assert!(r.stdout.contains("s_{3 1^2}"), "{}", r.stdout);
}

#[test]
fn milnor_example() {
    let r = run(&["milnor", "--weights", "1,1,2,2,3,4,4,5,5,5", "--degrees", "1,2,2,3,4,4,5,5,6,7,10"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(r.stdout, "34938044 (valid)\n");
    let r = run(&["milnor", "--weights", "1,1,2,2,3,4,4,5,5,5", "--degrees", "1,2,2,3,4,4,5,5,6,7,11"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.ends_with("(rejected)\n"), "{}", r.stdout);
    let r = run(&["milnor", "--weights", "1", "--degrees", "2,3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["value"], "1");
    assert_eq!(v["verdict"], "Valid");
}

#[test]
fn out_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("master.json");
    let r = run(&["master", "--l", "1", "--degree", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.files, vec![path.clone()]);
    let s: Series = io::load_series(&path).unwrap();
    assert_eq!(s.truncation(), 5);
    let json = run(&["master", "--l", "1", "--degree", "5", "--format", "json"]);
    assert_eq!(json.stdout, std::fs::read_to_string(&path).unwrap());
}

#[test]
fn solved_tower_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tower.json");
    let report = dir.path().join("report.json");
    let r = run(&[
        "tower",
        "--l",
        "1",
        "--j",
        "3",
        "--degree",
        "5",
        "--out",
        path.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.lines().any(|l| l.starts_with("S_A0^3 = 2 s_2 + 2 s_{11}")), "{}", r.stdout);
    let t: Table = io::load_table(&path).unwrap();
    assert!(t.get(&Multisingularity::a0_power(3)).is_some());
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert!(rep["stages"].as_array().unwrap().iter().all(|s| s["nullity"] == 0));

    let v = run(&["verify", "--table", path.to_str().unwrap(), "--degree", "5"]);
    assert_eq!(v.code, EXIT_OK, "{}", v.stdout);
    assert!(v.stdout.ends_with(" 0 failed\n"));
}

#[test]
fn verify_reports_the_bundled_s_table() {
    let path = fixture("fig_sl1.json");
    let r = run(&["verify", "--table", path.to_str().unwrap(), "--degree", "6"]);
    // Two printed rows fail the prototype condition in degree 6.
    assert_eq!(r.code, EXIT_VERIFY);
    let failing: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert!(!failing.is_empty());
    assert!(failing.iter().all(|l| l.starts_with("FAIL A0^3*A1 ") || l.starts_with("FAIL A0^6 ")), "{failing:?}");
    assert!(failing.iter().all(|l| l.contains("degree 6")));

    let j = run(&["verify", "--table", path.to_str().unwrap(), "--degree", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["checks"].as_array().unwrap().iter().filter(|c| c["pass"] == false).count(), failing.len());
}

#[test]
fn thom_polynomials() {
    let r = run(&["thom", "--psi", "A0:A0*A1", "--degree", "4"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.starts_with("s_2 - 2 c_3 - 2 c_{21}"), "{}", r.stdout);
    let a = run(&["thom", "--psi", "A0:A0*A1", "--degree", "4", "--pushforward", "--format", "json"]);
    let b = run(&["thom", "--psi", "A1:A0*A1", "--degree", "4", "--pushforward", "--format", "json"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["thom", "--psi", "A0^2", "--degree", "3"]);
    assert_eq!(t.stdout, "-s_1 + s_0^2 - s_2 - s_0^3 + s_0 s_1\n");
}

#[test]
fn k_polynomials() {
    let r = run(&["kpoly", "--max-degree", "2"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout, "K_1 = s_0\nK_2 = -1/2 s_0^2 - 1/2 c_1 s_0\n");
    let j = run(&["kpoly", "--max-degree", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["k_polynomials"].as_array().unwrap().len(), 3);
}

#[test]
fn prototype_of_i22() {
    let r = run(&["prototype", "--algebra", "I22", "--l", "1"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("source dim 7, target dim 8"));
    let j = run(&["prototype", "--algebra", "I22", "--l", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&j.stdout).unwrap();
    assert_eq!(v["algebra_dim"], 4);
    assert_eq!(v["target_weights"].as_array().unwrap().len(), 8);
}

#[test]
fn usage_errors() {
    for args in [
        vec!["master", "--l", "1"],
        vec!["frobnicate"],
        vec!["milnor", "--weights", "1,2", "--degrees", "1"],
        vec!["thom", "--psi", "B7", "--degree", "3"],
        vec!["master", "--l", "x", "--degree", "3"],
        vec!["verify", "--table", "/nonexistent/table.json", "--degree", "3"],
        vec!["master", "--l", "1", "--degree", "3", "--format", "xml"],
    ] {
        let r = run(&args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}: {}", r.stderr);
        assert!(!r.stderr.is_empty());
    }
    let h = run(&["--help"]);
    assert_eq!(h.code, EXIT_OK);
    assert!(h.stdout.contains("milnor"));
}

#[test]
fn computation_errors() {
    // The bundled catalog stops at target codimension 10.
    let r = run(&["master", "--l", "1", "--degree", "12"]);
    assert_eq!(r.code, EXIT_COMPUTE);
    assert!(r.stderr.contains("incomplete"), "{}", r.stderr);
    let r = run(&["tower", "--l", "1", "--j", "2", "--degree", "40"]);
    assert_eq!(r.code, EXIT_COMPUTE);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"l": 1, "truncation": 2, "flavor": "s", "provenance": "imported", "entries": [{"multisingularity": "A0", "series": {"l": 1, "truncation": 2, "terms": [{"monomial": [], "coeff": "1/0"}]}}]}"#).unwrap();
    let r = run(&["verify", "--table", bad.to_str().unwrap(), "--degree", "2"]);
    assert_eq!(r.code, EXIT_COMPUTE, "{}", r.stderr);
}

#[test]
fn identical_arguments_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for i in 0..2 {
        let out = dir.path().join(format!("t{i}.json"));
        let rep = dir.path().join(format!("r{i}.json"));
        let r = run(&[
            "tower", "--l", "2", "--j", "2", "--degree", "7", "--out", out.to_str().unwrap(), "--report", rep.to_str().unwrap(),
        ]);
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        outs.push((r.stdout, std::fs::read(&out).unwrap(), std::fs::read(&rep).unwrap()));
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn fixtures_listing() {
    let r = run(&["fixtures"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.lines().count(), 11);
    assert!(r.stdout.lines().any(|l| l == "fig_rl1.json"));
}

#[test]
fn selftest_reports_each_check() {
    let r = run(&["fixtures", "--selftest"]);
    let lines: Vec<&str> = r.stdout.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.contains(&"ok master-prefix: degrees 0..=6"));
    assert!(lines.contains(&"ok norlund-denominators: 1,2,6,4,30,12,84,24,90,20,132,24,5460,840,360"));
    // The printed tables carry the defects pinned in the core test suite.
    assert!(lines.contains(&"FAIL ff-of-rl1: FF(R) differs from S for A0^3"));
    assert!(lines.contains(&"FAIL verify-sl1: condition checks fail for A0^3*A1, A0^6"));
    assert_eq!(r.code, EXIT_VERIFY);
}

#[test]
fn binary_honours_the_fixture_directory() {
    let exe = env!("CARGO_BIN_EXE_ssmthom");
    let out = Command::new(exe).args(["milnor", "--weights", "1", "--degrees", "2,3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 (valid)\n");

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("norlund_denominators.json"),
        r#"{"citation": "altered copy", "denominators": [1, 2, 3]}"#,
    )
    .unwrap();
    let out = Command::new(exe)
        .args(["fixtures", "--selftest"])
        .env(io::FIXTURE_DIR_ENV, dir.path())
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FAIL norlund-denominators: got 1,2,6, expected 1,2,3"), "{text}");

    let bad = Command::new(exe).args(["master", "--l"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn master_series_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let master: Series = io::fixtures::master_l1().unwrap();
    std::fs::write(&path, io::series_to_json(&master.with_truncation(4))).unwrap();
    let r = run(&["kpoly", "--max-degree", "3", "--master", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let r = run(&["kpoly", "--max-degree", "5", "--master", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_COMPUTE);
}
