use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cccforge::core::format::{code_to_json, load_code};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cccforge")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_exit_codes() {
    let fx = |n: &str| data(&format!("fixtures/{n}")).display().to_string();
    for (file, want) in [
        ("good_code_6_6.json", 0),
        ("corrupted_distance.json", 1),
        ("repeated_point.json", 1),
        ("bad_group.json", 1),
        ("bad_composition.json", 2),
        ("unknown_point.json", 2),
        ("malformed.json", 2),
    ] {
        assert_eq!(code(&["verify", "--input", &fx(file)]), want, "{file}");
    }
    assert_eq!(code(&["verify", "--input", "/no/such/file.json"]), 2);
}

#[test]
fn corrupted_code_names_the_pair() {
    let o = run(&["verify", "--input", &data("fixtures/corrupted_distance.json").display().to_string()]);
    assert!(stdout(&o).contains("<0,1,2,3> and <0,1,2,4> are at distance 2 < 6"));
    let o = run(&["--json", "verify", "--input", &data("fixtures/corrupted_distance.json").display().to_string()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
    assert_eq!(v["violating_pair"]["distance"], 2);
}

#[test]
fn develop_and_starter() {
    let cat = |n: &str| data(&format!("catalog/{n}.json")).display().to_string();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("gdc.json");
    assert_eq!(code(&["develop", "--recipe", &cat("d5_gdc_6^5"), "--out", out.to_str().unwrap()]), 0);
    assert_eq!(code(&["verify", "--input", out.to_str().unwrap()]), 0);
    assert_eq!(code(&["develop", "--recipe", &cat("d5_code_13")]), 1);
    assert_eq!(code(&["develop", "--recipe", &data("fixtures/malformed.json").display().to_string()]), 2);
    assert_eq!(code(&["starter", "--recipe", &cat("d5_starter_19")]), 0);
    let o = run(&["starter", "--recipe", &cat("d5_starter_24")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL at strong"));
}

#[test]
fn search_and_bounds() {
    let o = run(&["--json", "search", "--n", "7", "--d", "6", "--budget", "60"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["size"], 4);
    assert_eq!(v["proven"], true);
    assert_eq!(code(&["search", "--n", "12", "--d", "5", "--budget", "0"]), 3);
    let o = run(&["bounds", "--n", "8", "--d", "5"]);
    assert!(stdout(&o).contains("open, >= 18"));
    assert_eq!(code(&["bounds", "--n", "3", "--d", "5"]), 2);
}

#[test]
fn build_writes_canonical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let p = data("pipelines/60-optimal.json");
    let o = run(&["build", "--pipeline", p.to_str().unwrap(), "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let summary = std::fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(summary.contains("1740"));
    let written = std::fs::read_to_string(dir.path().join("code60.json")).unwrap();
    let loaded = load_code(&dir.path().join("code60.json")).unwrap();
    assert_eq!(loaded.code().len(), 1740);
    assert_eq!(code_to_json(loaded.code()), written);
}

#[test]
fn build_reports_gated_and_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let gated = dir.path().join("gated.json");
    std::fs::write(
        &gated,
        r#"{"name":"gated","steps":[{"id":"r","op":"load_design","path":"rgdd_4^7.json"},
            {"id":"x","op":"complete_parallel_classes","input":"r","u":7}]}"#,
    )
    .unwrap();
    assert_eq!(code(&["build", "--pipeline", gated.to_str().unwrap()]), 3);
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, r#"{"name":"x","steps":[{"id":"a","op":"td","k":4,"q":3,"expect":{"size":10}}]}"#).unwrap();
    assert_eq!(code(&["build", "--pipeline", broken.to_str().unwrap()]), 1);
    std::fs::write(&broken, "{").unwrap();
    assert_eq!(code(&["build", "--pipeline", broken.to_str().unwrap()]), 2);
}

#[test]
fn designs_and_td() {
    assert_eq!(code(&["td", "--k", "5", "--q", "4"]), 0);
    assert_eq!(code(&["td", "--k", "4", "--q", "6"]), 2);
    assert_eq!(code(&["design", "verify", "--input", &data("designs/pg2_3.json").display().to_string()]), 0);
    assert_eq!(code(&["design", "verify", "--input", &data("fixtures/bad_pbd_13.json").display().to_string()]), 1);
    assert_eq!(code(&["design", "search", "--k", "4", "--type", "2^4"]), 1);
    assert_eq!(code(&["design", "search", "--k", "4", "--type", "3^5", "--budget", "10"]), 3);
    assert_eq!(code(&["design", "search", "--k", "3", "--v", "7"]), 0);
}

#[test]
fn catalog_respects_env_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(data("catalog/d6_code_17.json"), dir.path().join("d6_code_17.json")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cccforge"))
        .args(["catalog", "verify"])
        .env("CCCFORGE_CATALOG", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1 entries, 0 failed"));
    let o = Command::new(env!("CARGO_BIN_EXE_cccforge"))
        .args(["catalog", "verify"])
        .env("CCCFORGE_CATALOG", dir.path().join("missing"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(code(&["catalog", "verify", "--name", "d5_code_13"]), 1);
}

#[test]
fn table_rows() {
    let o = run(&["table", "--d", "6", "--from", "4", "--to", "20"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = |n: u32| out.lines().find(|l| l.split_whitespace().next() == Some(&n.to_string())).unwrap().to_string();
    assert!(row(7).contains(" 4 ") && row(7).contains("verified-optimal"));
    assert!(row(17).contains("42") && row(17).contains("d6_code_17"));
    let o = run(&["table", "--d", "5", "--from", "8", "--to", "8"]);
    assert!(stdout(&o).contains("open, >=18"));
    let o = run(&["table", "--d", "5", "--from", "9", "--to", "8"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}
