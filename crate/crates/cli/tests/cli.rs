use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn crn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crn"))
        .args(args)
        .current_dir(dir)
        .env_remove("CRN_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

/// Writes the network, rates and printed states of a stored instance.
fn instance(dir: &Path, name: &str, n: &str, open: &str) {
    let d: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    std::fs::write(dir.join("rates.json"), d["rates"].to_string()).unwrap();
    let states = serde_json::json!({ "species": d["printed_order"], "states": d["printed_states"] });
    std::fs::write(dir.join("state.json"), states.to_string()).unwrap();
    let out = crn(dir, &["family", "phospho", n, "--open", open]);
    std::fs::write(dir.join("net.crn"), &out.stdout).unwrap();
}

fn family(dir: &Path, file: &str, args: &[&str]) {
    let out = crn(dir, args);
    assert!(out.status.success());
    std::fs::write(dir.join(file), &out.stdout).unwrap();
}

#[test]
fn analyze_reports_and_projection() {
    let dir = TempDir::new().unwrap();
    family(dir.path(), "p2.crn", &["family", "phospho", "2"]);
    let out = crn(dir.path(), &["analyze", "p2.crn"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["deficiency"], 2);
    let out = crn(dir.path(), &["analyze", "--project", "E,F", "p2.crn"]);
    assert_eq!(stdout_json(&out)["deficiency"], 0);
    std::fs::write(dir.path().join("empty.crn"), "").unwrap();
    assert_eq!(crn(dir.path(), &["analyze", "empty.crn"]).status.code(), Some(2));
    std::fs::write(dir.path().join("bad.crn"), "A => B\n").unwrap();
    let out = crn(dir.path(), &["analyze", "bad.crn"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn certify_verdicts_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    family(dir.path(), "p2.crn", &["family", "phospho", "2"]);
    for set in ["E,F", "E,F,S0"] {
        let out = crn(dir.path(), &["certify", "--open", set, "p2.crn"]);
        assert_eq!(out.status.code(), Some(0));
        let v = stdout_json(&out);
        assert_eq!(v["verdict"], "monostationary", "{set}");
        assert!(!v["trace"].as_array().unwrap().is_empty());
    }
    let out = crn(dir.path(), &["certify", "--open", "E,S1", "p2.crn"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "undecided");
    let out = crn(dir.path(), &["certify", "--open", "E,S1", "p2.crn", "--strict"]);
    assert_eq!(out.status.code(), Some(3));
    let out = crn(dir.path(), &["certify", "--open", "E,Q", "p2.crn"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn search_counts_states() {
    let dir = TempDir::new().unwrap();
    instance(dir.path(), "p2_open_S0.json", "2", "S0");
    let out = crn(
        dir.path(),
        &["search", "net.crn", "--rates", "rates.json", "--from-state", "state.json", "--seed", "1"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("found 2 distinct states (2 nondegenerate)"));
    assert_eq!(stdout_json(&out)["states"].as_array().unwrap().len(), 2);

    // one-site cycle with a substrate opened: a single state per class
    family(dir.path(), "p1.crn", &["family", "phospho", "1", "--open", "S0"]);
    let out = crn(dir.path(), &["search", "p1.crn", "--totals", "1.5,0.7", "--starts", "100"]);
    assert_eq!(out.status.code(), Some(2), "rates are required");
    let p1 = std::fs::read_to_string(dir.path().join("p1.crn")).unwrap();
    let rated: String = p1
        .lines()
        .map(|l| if l.contains('@') { format!("{l} = 1.3\n") } else { format!("{l}\n") })
        .collect();
    std::fs::write(dir.path().join("p1r.crn"), rated).unwrap();
    let out = crn(dir.path(), &["search", "p1r.crn", "--totals", "1.5,0.7", "--starts", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["states"].as_array().unwrap().len(), 1);
    let out = crn(dir.path(), &["search", "p1r.crn", "--totals=-1,0.7"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn seed_from_environment_and_manifest() {
    let dir = TempDir::new().unwrap();
    instance(dir.path(), "p2_open_S0.json", "2", "S0");
    let run = |manifest: &str| {
        Command::new(env!("CARGO_BIN_EXE_crn"))
            .args(["search", "net.crn", "--rates", "rates.json", "--from-state", "state.json"])
            .args(["--starts", "50", "--manifest", manifest])
            .current_dir(dir.path())
            .env("CRN_SEED", "17")
            .output()
            .unwrap()
    };
    let (a, b) = (run("m1.json"), run("m2.json"));
    assert_eq!(a.stdout, b.stdout);
    let read = |f: &str| -> Value {
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join(f)).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("wall_clock_seconds");
        let args = v["args"].as_array_mut().unwrap();
        args.pop();
        v
    };
    let (m1, m2) = (read("m1.json"), read("m2.json"));
    assert_eq!(m1, m2);
    assert_eq!(m1["seed"], 17);
    assert_eq!(m1["input_hashes"].as_object().unwrap().len(), 3);
}

#[test]
fn lift_and_chain() {
    let dir = TempDir::new().unwrap();
    instance(dir.path(), "p2_open_S0.json", "2", "S0");
    let base = ["lift", "2", "--rates", "rates.json", "--state", "state.json"];
    // printed states are rounded, so they fail the default residual check
    assert_eq!(crn(dir.path(), &base).status.code(), Some(4));

    let out = crn(dir.path(), &[&base[..], &["--refine"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    for l in v["lifts"].as_array().unwrap() {
        assert!(l["residual"].as_f64().unwrap() <= 1e-12);
        assert_eq!(l["nondegenerate"], true);
    }

    let out = crn(dir.path(), &[&base[..], &["--refine", "--chain", "3"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let levels = stdout_json(&out)["levels"].as_array().unwrap().clone();
    let counts: Vec<(u64, u64)> = levels
        .iter()
        .map(|l| (l["n"].as_u64().unwrap(), l["nondegenerate"].as_u64().unwrap()))
        .collect();
    assert_eq!(counts, vec![(3, 2), (4, 2), (5, 2)]);

    let out = crn(dir.path(), &[&base[..], &["--refine", "--a", "0"]].concat());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_text() {
    let dir = TempDir::new().unwrap();
    let out = crn(dir.path(), &["family", "phospho", "2", "--open", "S0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 -> S0 @ in_S0"));
    assert!(text.contains("S0 -> 0 @ out_S0"));
    let out = crn(dir.path(), &["family", "mapk"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().matches("->").count(), 30);
    assert_eq!(crn(dir.path(), &["family", "phospho", "0"]).status.code(), Some(2));
}
