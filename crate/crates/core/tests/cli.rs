use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use wk_automata::cli::run;

fn corpus(file: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus", file].iter().collect();
    p.to_string_lossy().into_owned()
}

fn wka(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("wka").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json_lines(out: &str) -> Vec<Value> {
    out.lines().map(|l| serde_json::from_str(l).expect("one JSON object per line")).collect()
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wka-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn accept_exit_codes() {
    let lo = corpus("lo.wka");
    assert_eq!(wka(&["accept", &lo, "aabbb"]).0, 0);
    assert_eq!(wka(&["accept", &lo, "aab"]).0, 1);
    assert_eq!(wka(&["accept", &lo, ""]).0, 0);
    let (code, _, err) = wka(&["accept", &lo, "abc"]);
    assert_eq!(code, 2);
    assert!(err.contains("not in the alphabet"), "{err}");
}

#[test]
fn accept_with_trace() {
    let (code, out, _) = wka(&["accept", &corpus("lo.wka"), "aabbb", "--trace"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "accepted");
    assert_eq!(lines[1], "q 0 5 q a b -> q");
    assert_eq!(lines[2], "q 1 4 q a bb -> q");
    assert_eq!(lines[3], "q 2 2 accept");

    let (code, out, _) = wka(&["trace", &corpus("anbn.wka"), "ab", "--json"]);
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["command"], "trace");
    assert_eq!(v["evidence"]["configurations"].as_array().unwrap().len(), 2);
}

#[test]
fn enumerate_anbn() {
    let (code, out, _) = wka(&["enumerate", &corpus("anbn.wka"), "--max-len", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "_\nab\naabb\n");
    let (_, out, _) = wka(&["enumerate", &corpus("anbn.wka"), "--max-len", "8", "--count"]);
    assert_eq!(out.trim(), "5");
    let (_, out, _) = wka(&["enumerate", &corpus("anbn.wka"), "--max-len", "4", "--json"]);
    let v = &json_lines(&out)[0];
    assert_eq!(v["words"], serde_json::json!(["_", "ab", "aabb"]));
}

#[test]
fn classify_lo() {
    let (code, out, _) = wka(&["classify", &corpus("lo.wka")]);
    assert_eq!(code, 0);
    assert!(out.contains("stateless (N): true"));
    assert!(out.contains("deterministic (D): false"));
    assert!(out.contains("quasi_deterministic (qD): true"));
    assert!(out.contains("conflict at q"));

    let (code, out, _) = wka(&["classify", &corpus("lo.wka"), "--bounded", "6", "--json"]);
    assert_eq!(code, 0);
    let v = &json_lines(&out)[0];
    assert_eq!(v["report"]["quasi_deterministic"], true);
    assert_eq!(v["report"]["deterministic"], false);
    assert_eq!(v["bounded"]["agree"], true);
    assert!(v["evidence"]["deterministic"].is_object());
}

#[test]
fn classify_nfa_shows_partition() {
    let (code, out, _) = wka(&["classify", &corpus("binary_int.wka")]);
    assert_eq!(code, 0);
    assert!(out.contains("nfa quasi_deterministic: true"), "{out}");
    assert!(out.contains("partition Q_s: s"), "{out}");
}

#[test]
fn compare_files() {
    let (code, out, _) = wka(&["compare", &corpus("anbn.wka"), &corpus("lo.wka"), "--max-len", "3"]);
    assert_eq!(code, 1);
    assert!(out.starts_with("counterexample: abb"), "{out}");
    let (code, _, _) = wka(&["compare", &corpus("lo.wka"), &corpus("lo.wka"), "--max-len", "6"]);
    assert_eq!(code, 0);
    let (code, _, err) = wka(&["compare", &corpus("lo.wka"), &corpus("binary_int.wka"), "--max-len", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("alphabet mismatch"));

    let only_empty = temp_file("eps.wka", "type: wk\nalphabet: a b\nstates: q\ninitial: q\nfinal: q\n");
    let nothing = temp_file("none.wka", "type: wk\nalphabet: a b\nstates: q\ninitial: q\nfinal:\n");
    let (a, b) = (only_empty.to_str().unwrap(), nothing.to_str().unwrap());
    assert_eq!(wka(&["compare", a, b, "--max-len", "3"]).0, 0);
    let (code, out, _) = wka(&["compare", a, b, "--max-len", "3", "--strict-empty", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(json_lines(&out)[0]["counterexample"], "_");
}

#[test]
fn validate_reports_violations() {
    assert_eq!(wka(&["validate", &corpus("palindrome.wka")]), (0, "ok\n".into(), String::new()));
    let bad = temp_file("bad.wka", "type: wk\nalphabet: a b\nstates: q\ninitial: q\nfinal: q\nq a b -> p\n");
    let (code, out, _) = wka(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(out, "unknown target state p\n");
    let broken = temp_file("broken.wka", "type: wk\nq a b -> q\n");
    assert_eq!(wka(&["validate", broken.to_str().unwrap()]).0, 2);
}

#[test]
fn errors_exit_two() {
    let (code, _, err) = wka(&["accept", "/nonexistent/file.wka", "a"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());
    assert_eq!(wka(&["enumerate", &corpus("lo.wka")]).0, 2);
    assert_eq!(wka(&["frobnicate"]).0, 2);
    assert_eq!(wka(&["classify", &corpus("lo.wka"), "--wat"]).0, 2);
    assert_eq!(wka(&["--help"]).0, 0);
}

#[test]
fn claims_default_passes() {
    let (code, out, _) = wka(&["claims"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("9 passed, 0 failed (max_len 10)"), "{out}");

    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"].iter().collect();
    let (code, out, _) = wka(&["claims", "--max-len", "6", "--json", "--corpus", dir.to_str().unwrap()]);
    assert_eq!(code, 0);
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 10);
    for v in &lines {
        for key in ["command", "verdict", "evidence", "words", "counterexample"] {
            assert!(v.get(key).is_some(), "missing {key} in {v}");
        }
        assert_eq!(v["verdict"], true);
    }
    assert_eq!(lines[9]["summary"]["passed"], 9);
}

#[test]
fn claims_with_missing_corpus_is_an_error() {
    assert_eq!(wka(&["claims", "--corpus", "/nonexistent"]).0, 2);
}

#[test]
fn binary_entry_point() {
    let status = Command::new(env!("CARGO_BIN_EXE_wka"))
        .args(["accept", &corpus("palindrome.wka"), "abba"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&status.stdout), "accepted\n");
    let status = Command::new(env!("CARGO_BIN_EXE_wka")).args(["accept", &corpus("palindrome.wka"), "ab"]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
}
