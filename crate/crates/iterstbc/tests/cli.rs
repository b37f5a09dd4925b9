use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn iterstbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iterstbc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn load(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn no_arguments_prints_usage_and_fails() {
    let out = iterstbc(&[]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    for args in [
        vec!["certify", "--preset", "6x3-right", "--bogus"],
        vec!["frobnicate"],
        vec!["tower", "--config", path_str(&bad)],
        vec!["tower", "--preset", "6x3", "--config", path_str(&bad)],
        vec!["certify", "--preset", "6x3"],
        vec!["certify", "--preset", "6x3-right", "--box", "0"],
        vec!["simulate", "--preset", "6x3-right", "--trials", "0"],
        vec!["codebook", "--preset", "6x3-right", "--constellation", "qam4"],
        vec!["decodability", "--preset", "6x3-right", "--subcode", "odd"],
    ] {
        let out = iterstbc(&args);
        assert_eq!(code(&out), 1, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn decodability_reports_exponent_fifteen() {
    let out = iterstbc(&["decodability", "--preset", "6x3-right"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tool"], "iterstbc");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    let r = &v["result"];
    assert_eq!(r["group_count"], 2);
    assert_eq!(r["exponent"]["value"], "15/1");
    assert_eq!(r["real_symbols"], 12);
    assert_eq!(r["nonzero_pattern"].as_array().unwrap().len(), 12);
}

#[test]
fn certify_preset_records_the_cited_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = iterstbc(&["certify", "--preset", "6x3-right", "--out", path_str(&out_path)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = &load(&out_path)["result"];
    assert_eq!(r["division_verdict"], "proved-assuming");
    let entries = r["certificates"]["entries"].as_array().unwrap();
    let deg3 = entries.iter().find(|e| e["name"] == "quaternion_deg3").unwrap();
    assert_eq!(deg3["verdict"]["kind"], "proved-assuming");
    assert_eq!(deg3["verdict"]["cited"], true);
    assert_eq!(r["certificates"]["cross_check"]["outcome"], "not-found");
    assert_eq!(r["certificates"]["consistency"]["status"], "consistent");
    assert!(!r["provenance"]["cited_non_norms"].as_array().unwrap().is_empty());
    assert_eq!(r["provenance"]["factor_search_box"], 1);
}

#[test]
fn tampered_report_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let honest = dir.path().join("d1.json");
    let out = iterstbc(&["certify", "--preset", "6x3", "--d", "1", "--out", path_str(&honest)]);
    assert_eq!(code(&out), 0);
    let mut v = load(&honest);
    assert_eq!(v["result"]["division_verdict"], "disproved");
    let checked = dir.path().join("checked.json");
    let out = iterstbc(&["certify", "--preset", "6x3", "--d", "1", "--report", path_str(&honest), "--out", path_str(&checked)]);
    assert_eq!(code(&out), 0);
    assert_eq!(load(&checked)["result"]["reverify"]["status"], "verified");

    v["result"]["certificates"]["entries"][0]["verdict"]["kind"] = "proved".into();
    let forged = dir.path().join("forged.json");
    std::fs::write(&forged, serde_json::to_vec(&v).unwrap()).unwrap();
    let out = iterstbc(&["certify", "--preset", "6x3", "--d", "1", "--report", path_str(&forged), "--out", path_str(&checked)]);
    assert_eq!(code(&out), 2);
    let r = &load(&checked)["result"];
    assert_eq!(r["reverify"]["status"], "inconsistent");
    assert!(r["inconsistency"].as_str().unwrap().contains("zero divisor"));
}

#[test]
fn saved_outputs_rerun_identically() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let out = iterstbc(&["certify", "--preset", "4x2", "--variant", "left", "--d", "1;1", "--out", path_str(&first)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let saved = load(&first);
    std::fs::remove_file(&first).unwrap();
    let copy = dir.path().join("copy.json");
    std::fs::write(&copy, serde_json::to_vec(&saved).unwrap()).unwrap();
    assert_eq!(code(&iterstbc(&["--rerun", path_str(&copy)])), 0);
    assert_eq!(load(&first), saved);
    assert_eq!(code(&iterstbc(&["--rerun", path_str(&copy), "tower", "--preset", "6x3"])), 1);
}

#[test]
fn tower_outputs_reload_as_configs() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("tower.json");
    assert_eq!(code(&iterstbc(&["tower", "--preset", "6x3", "--out", path_str(&t)])), 0);
    let from_preset = load(&t)["result"].clone();
    assert_eq!(from_preset["degrees"]["k"], 6);
    assert_eq!(from_preset["tau"]["exponent"], 16);
    let t2 = dir.path().join("tower2.json");
    assert_eq!(code(&iterstbc(&["tower", "--config", path_str(&t), "--out", path_str(&t2)])), 0);
    assert_eq!(load(&t2)["result"]["config"], from_preset["config"]);

    let report = dir.path().join("cfg_report.json");
    let out = iterstbc(&["certify", "--config", path_str(&t), "--variant", "left", "--d", "theta", "--out", path_str(&report)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let entries = load(&report)["result"]["certificates"]["entries"].clone();
    assert_eq!(entries[0]["name"], "dm_not_in_f0");
    assert_eq!(entries[0]["verdict"]["kind"], "proved");
}

#[test]
fn simulate_writes_the_error_rate_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("ber.csv");
    let args = ["simulate", "--preset", "6x3-right", "--layers", "1", "--constellation", "hex4", "--snr-db", "0:5:10", "--trials", "60", "--seed", "7", "--out", path_str(&csv)];
    let out = iterstbc(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "snr_db,trials,errors,rate");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("0.0,60,"));
    // The worker count does not change the draws.
    let many = Command::new(env!("CARGO_BIN_EXE_iterstbc")).args(&args[..args.len() - 2]).env("ITERSTBC_THREADS", "3").output().unwrap();
    let one = Command::new(env!("CARGO_BIN_EXE_iterstbc")).args(&args[..args.len() - 2]).env("ITERSTBC_THREADS", "1").output().unwrap();
    let rows = |o: &Output| serde_json::from_slice::<Value>(&o.stdout).unwrap()["result"]["rows"].clone();
    assert_eq!(rows(&many), rows(&one));
}

#[test]
fn codebook_emits_exact_and_complex_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let emit = dir.path().join("m.json");
    let out = iterstbc(&["codebook", "--preset", "6x3-right", "--constellation", "hex4", "--sample", "3", "--seed", "42", "--emit", path_str(&emit)]);
    assert_eq!(code(&out), 0);
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["result"]["survey"]["codewords"], 3);
    assert_eq!(summary["result"]["survey"]["zero_dets"], 0);
    let words = load(&emit)["result"]["codewords"].clone();
    let w = &words[0];
    assert_eq!(w["symbols"].as_array().unwrap().len(), 18);
    assert_eq!(w["exact_matrix"].as_array().unwrap().len(), 6);
    assert_eq!(w["complex_matrix"][0][0].as_array().unwrap().len(), 2);
    assert_eq!(w["det"]["in_claimed_field"], true);
    assert_eq!(w["det"]["det"]["conductor"], 21);
}

#[test]
fn mindet_survey_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("mindet.csv");
    let out = iterstbc(&["mindet", "--preset", "6x3-left", "--exhaustive-layer", "--diversity", "5", "--csv", path_str(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = serde_json::from_slice::<Value>(&out.stdout).unwrap()["result"].clone();
    assert_eq!(r["survey"]["codewords"], 4096);
    assert_eq!(r["diversity"]["violations"], 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("preset,constellation,mode,seed,codewords,min_abs_sq"));
    assert!(text.lines().nth(1).unwrap().starts_with("6x3-left,hex4,exhaustive-layer,0,4096,"));
}

#[test]
fn algebra_check_passes_and_skips_honestly() {
    let out = iterstbc(&["algebra-check", "--preset", "6x3-right", "--samples", "5", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let r = serde_json::from_slice::<Value>(&out.stdout).unwrap()["result"].clone();
    assert_eq!(r["all_passed"], true);
    let checks = r["checks"].as_array().unwrap();
    let skipped: Vec<&str> = checks.iter().filter(|c| !c["skipped"].is_null()).map(|c| c["check"].as_str().unwrap()).collect();
    assert_eq!(skipped, ["variants_coincide"]);
}
