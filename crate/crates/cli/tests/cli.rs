//! End-to-end runs of the `tropmod` binary.
//!
//! Poset JSON for genus <= 4 is compared against files in `tests/golden`;
//! genus 5 is compared by SHA-256. Set `TROPMOD_BLESS=1` to rewrite them.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn tropmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropmod")).args(args).env_remove("TROPMOD_CACHE_DIR").output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = tropmod(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn blessing() -> bool {
    std::env::var_os("TROPMOD_BLESS").is_some()
}

fn check_golden(name: &str, actual: &str) {
    let path = golden_dir().join(name);
    if blessing() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(expected == actual, "{name} differs from its golden file");
}

#[test]
fn trivalent_counts() {
    for (g, n) in [(2, "2"), (3, "5"), (4, "17"), (5, "71")] {
        assert_eq!(stdout(&["trivalent", "--genus", &g.to_string(), "--count"]).trim(), n);
    }
    let listing = stdout(&["trivalent", "--genus", "3"]);
    assert_eq!(listing.lines().count(), 5);
}

#[test]
fn moduli_fvectors() {
    assert_eq!(stdout(&["moduli", "--genus", "2", "--fvector"]).trim(), "1,2,2,2");
    assert_eq!(stdout(&["moduli", "--genus", "3", "--fvector"]).trim(), "1,2,5,9,12,8,5");
    assert_eq!(stdout(&["moduli", "--genus", "4", "--fvector"]).trim(), "1,3,7,21,43,75,89,81,42,17");
    assert_eq!(
        stdout(&["moduli", "--genus", "5", "--fvector"]).trim(),
        "1,3,11,34,100,239,492,784,1002,926,632,260,71"
    );
    assert_eq!(stdout(&["moduli", "--genus", "3"]).trim(), "cells: 42; maximal: 5; fvector: 1,2,5,9,12,8,5");
}

#[test]
fn schottky_fvectors() {
    assert_eq!(stdout(&["schottky", "--genus", "2", "--fvector"]).trim(), "1,1,1,1");
    assert_eq!(stdout(&["schottky", "--genus", "3", "--fvector"]).trim(), "1,1,1,2,2,1,1");
    assert_eq!(stdout(&["schottky", "--genus", "4", "--fvector"]).trim(), "1,1,1,2,3,4,5,4,2,2");
    assert_eq!(
        stdout(&["schottky", "--genus", "5"]).trim(),
        "cells: 92; maximal: 4; fvector: 1,1,1,2,3,5,9,12,15,17,15,7,4"
    );
}

#[test]
fn poset_json_matches_golden_files() {
    for kind in ["moduli", "schottky"] {
        for g in 2..=4 {
            let json = stdout(&[kind, "--genus", &g.to_string(), "--json"]);
            serde_json::from_str::<serde_json::Value>(&json).unwrap();
            check_golden(&format!("{kind}_g{g}.json"), &json);
        }
    }
}

#[test]
fn genus_five_json_matches_digest() {
    let mut lines = Vec::new();
    for kind in ["moduli", "schottky"] {
        let json = stdout(&[kind, "--genus", "5", "--json"]);
        lines.push(format!("{kind}_g5 {}", hex::encode(Sha256::digest(json.as_bytes()))));
    }
    check_golden("g5.sha256", &(lines.join("\n") + "\n"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let one = stdout(&["--jobs", "1", "schottky", "--genus", "4", "--json"]);
    let many = stdout(&["--jobs", "4", "schottky", "--genus", "4", "--json"]);
    assert_eq!(one, many);
}

#[test]
fn dot_output_is_a_digraph() {
    let dot = stdout(&["moduli", "--genus", "2", "--dot"]);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 8);
}

#[test]
fn cover_summaries() {
    assert_eq!(stdout(&["cover", "--genus", "3", "--verify"]).trim(), "672 overlaps verified; 7 deletions ≅ MK4; OK");
    assert_eq!(stdout(&["cover", "--genus", "2", "--verify"]).trim(), "24 overlaps verified; 4 deletions ≅ U23; OK");
    let json: serde_json::Value = serde_json::from_str(&stdout(&["cover", "--genus", "3", "--json"])).unwrap();
    assert_eq!(json["overlaps"].as_array().unwrap().len(), 672);
    assert_eq!(json["cell_images"].as_array().unwrap().len(), 127);
}

#[test]
fn quadratic_forms() {
    let hex = stdout(&["delone", "--matrix", "2,1;1,2"]);
    assert!(hex.starts_with("2 maximal cells per period"), "{hex}");
    let square = stdout(&["delone", "--matrix", "1,0;0,3", "--window", "4"]);
    assert!(square.starts_with("1 maximal cells per period"), "{square}");
    assert!(stdout(&["reduce2", "--matrix", "2,1;1,2"]).starts_with("D1_triangulated"));
    assert!(stdout(&["reduce2", "--matrix", "1,1;1,1"]).starts_with("D3_segment"));
    assert!(stdout(&["reduce2", "--matrix", "0,0;0,0"]).starts_with("D4_point"));
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&["reduce2", "--matrix", "1/2,0;0,1/3", "--json"])).unwrap();
    assert_eq!(json["class"], "D2_square");
}

#[test]
fn jacobian_of_a_curve_file() {
    let dir = std::env::temp_dir().join(format!("tropmod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("theta.json");
    let theta = stdout(&["trivalent", "--genus", "2"]).lines().find(|l| !l.contains("(0,0)")).unwrap().to_string();
    std::fs::write(&path, serde_json::json!({ "graph": theta, "lengths": [1, 1, 1] }).to_string()).unwrap();
    let out = stdout(&["jacobian", "--curve", path.to_str().unwrap()]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("2,-1;-1,2"));
    assert_eq!(lines.next(), Some("cone coefficients: 1,1,1"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cache_directory_is_reused() {
    let dir = std::env::temp_dir().join(format!("tropmod-cache-{}", std::process::id()));
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_tropmod"))
            .args(["schottky", "--genus", "3", "--fvector"])
            .env("TROPMOD_CACHE_DIR", &dir)
            .output()
            .unwrap()
    };
    let first = run();
    assert!(dir.join("moduli_g3.json").exists());
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(String::from_utf8(second.stdout).unwrap().trim(), "1,1,1,2,2,1,1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tables_label_reference_values() {
    let out = stdout(&["tables", "--genus-max", "4"]);
    assert!(out.contains("reference, not computed"), "{out}");
}

#[test]
fn verify_all_reports_ok() {
    let out = stdout(&["verify-all", "--genus-max", "4", "--seed", "3"]);
    assert!(!out.contains("FAIL"), "{out}");
    assert_eq!(out.lines().last(), Some("OK"));
}

#[test]
fn errors_and_exit_codes() {
    assert_eq!(tropmod(&["trivalent", "--genus", "3", "--bogus"]).status.code(), Some(2));
    let out = tropmod(&["cover", "--genus", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(tropmod(&["delone", "--matrix", "1,2;2,1"]).status.code(), Some(1));
    assert_eq!(tropmod(&["reduce2", "--matrix", "1,2;3,4"]).status.code(), Some(1));
    assert_eq!(tropmod(&["moduli", "--genus", "1"]).status.code(), Some(1));
}
