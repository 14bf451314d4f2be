use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordsite")).args(args).output().expect("binary runs")
}

fn run_fixture(args: &[&str], files: &[&str]) -> Output {
    let paths: Vec<String> = files.iter().map(|f| fixture(f).display().to_string()).collect();
    let mut all: Vec<&str> = args.to_vec();
    all.extend(paths.iter().map(String::as_str));
    run(&all)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn check_status(report: &Value, name: &str) -> String {
    report["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()["status"].as_str().unwrap().to_string()
}

#[test]
fn fixtures_validate_with_expected_exit_codes() {
    let failing = ["arr_unstable.gtop.json", "chain_no_local.etop.json"];
    let invalid = ["bad_z2.ogpd.json", "no_restriction.ogpd.json", "broken_compose.cat.json", "broken.psh.json"];
    let mut n = 0;
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        let expected = if failing.contains(&name.as_str()) {
            1
        } else if invalid.contains(&name.as_str()) {
            2
        } else {
            0
        };
        let out = run(&["validate", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(expected), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        n += 1;
    }
    assert!(n >= 40);
}

#[test]
fn invalid_input_reports_witnesses() {
    let out = run_fixture(&["validate"], &["bad_z2.ogpd.json"]);
    let r = json(&out);
    assert!(r["error"].is_string());
    assert!(!r["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn translate_g_of_z2_is_one_object_with_two_arrows() {
    let out = run_fixture(&["translate", "g"], &["z2.cat.json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["kind"], "ordered_groupoid");
    assert_eq!(doc["objects"].as_array().unwrap().len(), 1);
    assert_eq!(doc["harrows"].as_array().unwrap().len(), 2);
}

#[test]
fn translate_l_of_int() {
    let out = run_fixture(&["translate", "l"], &["int.ogpd.json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["kind"], "category");
    assert_eq!(doc["arrows"].as_array().unwrap().len(), 3);
}

#[test]
fn translate_writes_loadable_output() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("g_arr.ogpd.json");
    let out = run_fixture(&["translate", "g", "--out", target.to_str().unwrap()], &["arr.cat.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["facts"]["out"], target.display().to_string());
    let again = run(&["validate", target.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again)["kind"], "ordered_groupoid");
    let kappa = run(&["check", "kappa", target.to_str().unwrap()]);
    assert_eq!(kappa.status.code(), Some(0));
}

#[test]
fn triangles_eta_and_kappa_pass() {
    for f in ["arr.cat.json", "z2.cat.json", "int.ogpd.json", "chain.ogpd.json"] {
        let out = run_fixture(&["check", "triangles"], &[f]);
        assert_eq!(out.status.code(), Some(0), "{f}");
    }
    let r = json(&run_fixture(&["check", "eta"], &["z2.cat.json"]));
    assert_eq!(r["facts"]["isomorphism"], true);
    let out = run_fixture(&["check", "kappa"], &["vee.ogpd.json"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sheaf_checks() {
    let out = run_fixture(&["check", "sheaf"], &["arr_trivial.gtop.json", "split.psh.json"]);
    assert_eq!(out.status.code(), Some(0));
    let out = run_fixture(&["check", "sheaf"], &["int_0.etop.json", "int_constant.dpsh.json"]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let r = json(&out);
    assert_eq!(r["kind"], "ehresmann_topology, double_presheaf");
}

#[test]
fn site_and_comparison_checks() {
    let out = run_fixture(&["check", "comparison", "--sheaf-universe", "2"], &["eta_arr_a.site.json"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["facts"]["verdict"]["agrees"], true);

    let out = run_fixture(&["check", "site", "--oracle-bound", "3"], &["pt_to_arr_a.site.json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(check_status(&r, "covering_flat"), "fail");
    assert_eq!(check_status(&r, "oracle_agrees"), "pass");

    let out = run_fixture(&["check", "site"], &["kappa_int_0.site.json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(check_status(&json(&out), "es_matches_gs_of_l"), "pass");
}

#[test]
fn topology_round_trip_and_failure() {
    let out = run_fixture(&["check", "topology"], &["arr_a.gtop.json"]);
    assert_eq!(check_status(&json(&out), "round_trip"), "pass");
    let out = run_fixture(&["check", "topology"], &["chain_1.etop.json"]);
    assert_eq!(check_status(&json(&out), "round_trip"), "pass");
    let out = run_fixture(&["check", "topology"], &["arr_unstable.gtop.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(check_status(&json(&out), "stability"), "fail");
}

#[test]
fn output_is_deterministic() {
    let args = ["check", "site", "--oracle-bound", "3"];
    let a = run_fixture(&args, &["arr_coarse_to_max.site.json"]);
    let b = run_fixture(&args, &["arr_coarse_to_max.site.json"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run_fixture(&["translate", "gl"], &["chain.ogpd.json"]);
    let b = run_fixture(&["translate", "gl"], &["chain.ogpd.json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_format() {
    let out = run_fixture(&["--format", "text", "check", "topology"], &["arr_unstable.gtop.json"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l.trim_start().starts_with("stability") && l.contains("FAIL")), "{s}");
}

#[test]
fn usage_errors() {
    let out = run_fixture(&["check", "sheaf"], &["arr_a.gtop.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("2 input"));
    let out = run_fixture(&["check", "eta"], &["int.ogpd.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("expected a category"));
    let out = run(&["check", "eta", "/nonexistent.json"]);
    assert_eq!(out.status.code(), Some(2));
}
