use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn algset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algset")).args(args).output().expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    algset(args).status.code().expect("exit code")
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(algset(args).stdout).unwrap()
}

fn report(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn strip_times(mut v: Value) -> Value {
    for c in v["checks"].as_array_mut().unwrap() {
        c.as_object_mut().unwrap().remove("wall_ms");
    }
    v
}

#[test]
fn build_v_stats() {
    let out = algset(&["build-v", "--rank", "4", "--stats"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("|V_4| = 16\n"));
}

#[test]
fn eval_prints_the_verdict_and_exits_with_it() {
    let t = stdout(&["eval", "--rank", "3", "--formula", "forall x in {{}} . eps(x, {{}})"]);
    assert!(t.starts_with("true\n"));
    assert_eq!(code(&["eval", "--rank", "3", "--formula", "forall x in {{}} . eps(x, {{}})"]), 0);
    assert_eq!(code(&["eval", "--rank", "3", "--formula", "forall x in {{}} . eps(x, {})"]), 1);
    assert_eq!(code(&["eval", "--rank", "3", "--formula", "eps(x, y)", "--let", "x={}", "--let", "y={{}}"]), 0);
}

#[test]
fn class_axioms_report_per_axiom() {
    let t = stdout(&["check-axioms", "--class", "isos", "--scope", "3"]);
    let failing: Vec<&str> =
        t.lines().filter(|l| l.split_whitespace().nth(1) == Some("fail")).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(failing, vec!["A4", "A9"]);
    assert_eq!(code(&["check-axioms", "--class", "fiber:3", "--scope", "2"]), 0);
    assert_eq!(code(&["check-axioms", "--class", "fiber:2", "--scope", "3", "--axioms", "A1,A2,A3"]), 0);
}

#[test]
fn json_report_is_versioned_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let args = ["check-axioms", "--class", "monos", "--scope", "2", "--json", path.to_str().unwrap()];
    assert_eq!(code(&args), 1);
    let ra = report(&path);
    assert_eq!(code(&args), 1);
    let rb = report(&path);
    assert_eq!(ra["schema"], 1);
    assert_eq!(ra["status"], "fail");
    let ids: Vec<&str> = ra["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9"]);
    assert!(ra["checks"][3]["detail"]["counterexample"].is_object());
    assert_eq!(strip_times(ra), strip_times(rb));
}

#[test]
fn spec_files_fill_in_flags() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"rank": 3, "formulas": ["eps(x, a)", "exists y in a . eps(x, y)"]}"#).unwrap();
    let out = dir.path().join("out.json");
    let args = ["check-axioms", "--spec", spec.to_str().unwrap(), "--json", out.to_str().unwrap()];
    assert_eq!(code(&args), 0);
    let ids: Vec<String> =
        report(&out)["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap().to_string()).collect();
    assert!(ids.contains(&"bounded-separation[1]".to_string()));
    assert!(ids.contains(&"set-induction[0]".to_string()));

    // A flag beats the file.
    let t = stdout(&["build-v", "--spec", spec.to_str().unwrap(), "--rank", "2", "--stats"]);
    assert!(t.starts_with("|V_2| = 2\n"));
    let t = stdout(&["build-v", "--spec", spec.to_str().unwrap(), "--stats"]);
    assert!(t.starts_with("|V_3| = 4\n"));
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"scope": 2, "colour": "red"}"#).unwrap();
    assert_eq!(code(&["build-v", "--spec", bad.to_str().unwrap(), "--rank", "2"]), 2);
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(code(&["build-v", "--spec", bad.to_str().unwrap(), "--rank", "2"]), 2);
    assert_eq!(code(&["build-v", "--spec", dir.path().join("missing.json").to_str().unwrap()]), 2);
    assert_eq!(code(&["eval", "--rank", "3", "--formula", "forall x in"]), 2);
    assert_eq!(code(&["eval", "--rank", "2", "--formula", "eps({}, {{{}}})"]), 2);
    assert_eq!(code(&["check-axioms", "--class", "fibre:2"]), 2);
    assert_eq!(code(&["check-axioms", "--class", "fiber:2", "--axioms", "A99"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["build-v", "--rank", "3", "--no-such-flag"]), 2);
    assert_eq!(code(&["eval", "--formula", "x = x"]), 2);
}

#[test]
fn timeouts_are_soft() {
    // The covered class decides membership by search; a tiny budget leaves
    // the checks inconclusive rather than aborting.
    let out = algset(&["check-axioms", "--class", "covered(fiber:1)", "--scope", "3", "--axioms", "A2,A6", "--timeout", "0.000001"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stdout).unwrap().contains("inconclusive"));
}

/// Each row is a command line and its exit code.
#[test]
fn exit_code_matrix() {
    let rows: &[(&[&str], i32)] = &[
        (&["check-axioms", "--class", "fiber:3", "--scope", "2"], 0),
        (&["check-axioms", "--class", "isos", "--scope", "2"], 1),
        (&["check-axioms", "--rank", "3"], 0),
        (&["check-axioms", "--rank", "3", "--axioms", "infinity"], 1),
        (&["check-axioms", "--rank", "4", "--axioms", "power-set"], 0),
        (&["scov", "--class", "fiber:3", "--scope", "2"], 0),
        (&["scov", "--class", "isos", "--scope", "2"], 1),
        (&["represent", "--rep", "0,1,2", "--class", "fiber:2", "--scope", "2"], 0),
        (&["represent", "--rep", "0,1", "--class", "fiber:2", "--scope", "2"], 1),
        (&["complete", "--class", "fiber:2", "--scope", "2"], 0),
        (&["wtypes", "--sig", "0,2", "--depth", "3"], 0),
        (&["wtypes", "--sig", "1,2", "--depth", "2"], 0),
        (&["build-v", "--rep", "0,1,2", "--depth", "2", "--stats"], 0),
        (&["fullness", "--table", "0,0,1", "--codomain", "2"], 0),
        (&["fullness", "--f", "{{{{}}}}", "--a", "{{}}"], 0),
        (&["fullness", "--table", "0,3", "--codomain", "2"], 2),
        (&["fullness", "--f", "{{}}", "--a", "{}"], 2),
        (&["wtypes", "--depth", "2"], 2),
    ];
    for (args, expected) in rows {
        assert_eq!(code(args), *expected, "{args:?}");
    }
}

#[test]
fn fullness_output() {
    let t = stdout(&["fullness", "--table", "0,0,0", "--codomain", "1"]);
    assert!(t.starts_with("z = {{{}},{{{}}},{{{},{{}}}}}\n"), "{t}");
}
