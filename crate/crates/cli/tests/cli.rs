//! End-to-end tests of the command-line interface: JSON shapes, exit
//! codes, determinism, and the env-var cap override.

use std::process::{Command, Output};

use serde_json::Value;

fn fusscat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusscat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid json")
}

#[test]
fn class_command_reports_members_and_canonical() {
    let out = json_of(&fusscat(&["class", "--word", "1221"]));
    assert_eq!(out["schema"], "fusscat/1");
    assert_eq!(out["canonical"], "2211");
    assert_eq!(out["members"], serde_json::json!(["1221", "2121", "2211"]));
}

#[test]
fn product_full_has_six_terms_for_the_basic_square() {
    let out = json_of(&fusscat(&[
        "product", "--m", "2", "--op", "full", "--left", "11", "--right", "11",
    ]));
    assert_eq!(out["terms"].as_array().unwrap().len(), 6);
    let words: Vec<&str> = out["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["word"].as_str().unwrap())
        .collect();
    assert_eq!(words, ["1122", "1212", "1221", "2112", "2121", "2211"]);
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = fusscat(&[
        "verify", "--m", "2", "--size", "2", "--random-triples", "25", "--seed", "11",
    ]);
    assert!(out.status.success());
    let value: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(value["pass"], true);
    assert_eq!(value["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_covers_other_parameter_points_and_is_deterministic() {
    for (m, size) in [("1", "3"), ("3", "1")] {
        let args = [
            "verify", "--m", m, "--size", size, "--random-triples", "10", "--seed", "3",
        ];
        let first = fusscat(&args);
        assert!(first.status.success(), "verify failed for m={m}");
        let second = fusscat(&args);
        assert_eq!(first.stdout, second.stdout, "verify output not deterministic");
    }
}

#[test]
fn series_checks_pass_and_are_deterministic() {
    for check in ["fixedpoint", "system", "dias", "koszul"] {
        let first = fusscat(&["series", "--m", "2", "--order", "8", "--check", check]);
        let second = fusscat(&["series", "--m", "2", "--order", "8", "--check", check]);
        assert!(first.status.success(), "check {check} failed");
        assert_eq!(first.stdout, second.stdout, "output not deterministic");
        let value: Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(value["pass"], true);
    }
}

#[test]
fn bijection_round_trips_through_both_directions() {
    let word = "9,9,7,7,8,6,6,4,3,3,2,2,4,5,1,1,5,8";
    let from_word = json_of(&fusscat(&["bijection", "--m", "2", "--word", word]));
    assert_eq!(from_word["size"], 9);
    let tree = from_word["tree"].as_str().unwrap();
    let from_tree = json_of(&fusscat(&["bijection", "--m", "2", "--tree", tree]));
    assert_eq!(from_tree["word"], "997786643322451158");
}

#[test]
fn dims_tables_match_closed_forms() {
    let out = json_of(&fusscat(&[
        "dims", "--m", "1", "--max-n", "4", "--algebra", "dias",
    ]));
    let censuses: Vec<&str> = out["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["census"].as_str().unwrap())
        .collect();
    assert_eq!(censuses, ["1", "2", "3", "4"]);
    assert_eq!(out["pass"], true);

    let out = json_of(&fusscat(&[
        "dims", "--m", "2", "--max-n", "4", "--algebra", "dendriform", "--rank",
    ]));
    let ranks: Vec<u64> = out["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rank"].as_u64().unwrap())
        .collect();
    assert_eq!(ranks, [1, 3, 12, 55]);
}

#[test]
fn confluence_certificate_passes_and_writes_a_file() {
    let dir = std::env::temp_dir().join("fusscat-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("certificate.json");
    let out = fusscat(&["confluence", "--m", "2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["pass"], true);
    assert_eq!(written["acyclicity"]["acyclic"], true);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn usage_errors_exit_with_code_two() {
    let out = fusscat(&["class", "--word", "0"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fusscat(&["product", "--m", "2", "--op", "weird", "--left", "11", "--right", "11"]);
    assert_eq!(out.status.code(), Some(2));

    let out = fusscat(&["bijection", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumeration_cap_env_var_is_honored() {
    let out = Command::new(env!("CARGO_BIN_EXE_fusscat"))
        .args(["dims", "--m", "2", "--max-n", "6", "--algebra", "dendriform"])
        .env("FUSSCAT_ENUM_CAP", "10")
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}

#[test]
fn classcount_matches_fusscatalan() {
    let out = json_of(&fusscat(&["classcount", "--m", "2", "--max-n", "3"]));
    assert_eq!(out["pass"], true);
    let rows = out["rows"].as_array().unwrap();
    assert_eq!(rows[2]["classes"], 12);
}
