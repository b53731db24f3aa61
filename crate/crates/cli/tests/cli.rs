use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scene(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "scenes", name].iter().collect();
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arcspace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (v, out.status.code().unwrap())
}

#[test]
fn cusp_invariants_in_characteristic_zero() {
    let (v, code) = json(&["invariants", &scene("cusp.scene"), "gen", "--ord", "O"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["a"], 3);
    assert_eq!(v["results"]["torsion"], serde_json::json!([3]));
    assert_eq!(v["results"]["orders"][0]["order"], "2");
}

#[test]
fn cusp_invariants_jump_in_characteristic_two() {
    let (v, code) = json(&["invariants", &scene("cusp_f2.scene"), "gen"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["a"], 4);
}

#[test]
fn jet_counts() {
    let (v, _) = json(&["count-jets", &scene("line.scene"), "A1", "--level", "2", "--q", "3"]);
    assert_eq!(v["results"]["count"], 27);
    let (v, _) = json(&["count-jets", &scene("cusp.scene"), "C", "--level", "0", "--q", "5"]);
    assert_eq!(v["results"]["count"], 5);
    let (v, code) = json(&[
        "count-jets",
        &scene("line.scene"),
        "A2",
        "--level",
        "2",
        "--q",
        "5",
        "--fiber",
        "plane@1",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], 25);
}

#[test]
fn liftable_cusp_jets_and_dump() {
    let (v, code) = json(&[
        "count-jets",
        &scene("cusp.scene"),
        "C",
        "--level",
        "2",
        "--q",
        "2",
        "--liftable",
        "--dump",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["count"], 12);
    assert_eq!(v["results"]["liftable"], 6);
    assert_eq!(v["results"]["jets"].as_array().unwrap().len(), 6);
}

#[test]
fn mather_on_the_normalization() {
    let (v, code) = json(&["mather", &scene("cusp.scene"), "nu", "line"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["e"], 1);
    assert_eq!(v["results"]["c"], 1);
    assert_eq!(v["results"]["b"], 3);
}

#[test]
fn mather_on_a_blow_up_chart() {
    let (v, code) = json(&["mather", &scene("blowup.scene"), "chart", "a", "--z", "O", "--v", "O"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["e"], 2);
    let (v, _) = json(&["mather", &scene("blowup.scene"), "id", "a"]);
    assert_eq!(v["results"]["e"], 0);
    let (v, _) = json(&["invariants", &scene("blowup.scene"), "a"]);
    assert_eq!(v["results"]["a"], 0);
}

#[test]
fn verify_suites_on_catalog_examples() {
    let (v, code) = json(&["verify", "E2", "cov-exact"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["lhs"], v["results"]["rhs"]);
    let (v, code) = json(&["verify", "identity-example", "fibration"]);
    assert_eq!(code, 0, "{v}");
    let (v, code) = json(&["verify", "E2", "cov-count", "--q", "2", "--P", "2"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["results"]["lhs_total"], v["results"]["rhs_total"]);
    let (_, code) = json(&["verify", "E4", "additivity", "--samples", "5"]);
    assert_eq!(code, 0);
}

#[test]
fn verify_suites_on_scenes() {
    let (v, code) = json(&["verify", &scene("cusp.scene"), "stability", "--tails", "5"]);
    assert_eq!(code, 0, "{v}");
    let (v, code) = json(&["verify", &scene("cusp.scene"), "fibers", "--q", "3"]);
    assert_eq!(code, 0, "{v}");
    assert!(v["summary"]["checks"].as_u64().unwrap() > 0);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["verify", &scene("cusp.scene"), "cov-exact"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "E9", "cov-exact"]).status.code(), Some(2));
    assert_eq!(run(&["invariants", &scene("cusp.scene"), "nope"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "E2", "cov-exact", "--q", "3"]).status.code(), Some(2));
    assert_eq!(
        run(&["count-jets", &scene("cusp_f2.scene"), "C", "--level", "1", "--q", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_is_byte_stable() {
    let args = ["verify", "E2", "cov-count", "--q", "2", "--P", "2"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let mut j = vec!["--json"];
    j.extend_from_slice(&args);
    assert_eq!(run(&j).stdout, run(&j).stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("command: verify cov-count E2 --q 2 --P 2\nresults:\n"));
    assert!(!text.contains("elapsed"));
    let one = run(&["--threads", "1", "verify", "E2", "fibers", "--q", "2", "--samples", "2"]);
    let two = run(&["--threads", "2", "verify", "E2", "fibers", "--q", "2", "--samples", "2"]);
    assert_eq!(one.stdout, two.stdout);
}
