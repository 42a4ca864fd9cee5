use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = xtt_cli::run(std::iter::once("xtt").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".xtt").tempfile().unwrap();
    std::io::Write::write_all(&mut f, src.as_bytes()).unwrap();
    f
}

#[test]
fn checking_the_corpus_succeeds() {
    let files: Vec<String> = ["prelude.xtt", "uip.xtt", "kan-laws.xtt", "typecase.xtt", "negatives.xtt"]
        .iter()
        .map(|f| corpus(f))
        .collect();
    let mut args = vec!["check"];
    args.extend(files.iter().map(String::as_str));
    let (code, out, err) = run(&args);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("prelude.xtt: 8 checked, 0 failed"), "{out}");
}

#[test]
fn normalize_prints_the_normal_form() {
    let (code, out, _) = run(&["normalize", "-e", "coe 0 1 (i. bool^) tt", "-t", "El bool^"]);
    assert_eq!((code, out.as_str()), (0, "tt\n"));
}

#[test]
fn normalize_sees_definitions_and_context() {
    let prelude = corpus("prelude.xtt");
    let (code, out, err) = run(&[
        "normalize",
        "-f",
        &prelude,
        "-c",
        "A : U, a : El A",
        "-e",
        "sym A a a (<_> a)",
        "-t",
        "path (_. El A) a a",
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "<i> a\n");
}

#[test]
fn face_reports_branches_and_verdict() {
    let (code, out, _) = run(&["face", "-c", "i", "-q", "dd i"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("verdict: false\n"), "{out}");
    let (_, out, _) = run(&["face", "-c", "i, j, i = j \\/ j = 0, i = 0", "-q", "j = 0"]);
    assert_eq!(out, "branches:\n  { i = 0, j = 0 }\nverdict: true\n");
}

#[test]
fn failing_declarations_exit_one_with_located_diagnostics() {
    let f = scratch("def ok : bool = tt\n\ndef bad : bool = abort\n");
    let path = f.path().display().to_string();
    let (code, _, err) = run(&["check", &path]);
    assert_eq!(code, 1);
    assert!(err.starts_with(&format!("{path}:3:")), "{err}");
    assert!(err.contains("E033"), "{err}");
}

#[test]
fn stopping_at_the_first_failure_unless_asked_to_continue() {
    let f = scratch("def a : bool = abort\ndef b : bool = abort\n");
    let path = f.path().display().to_string();
    let (_, out, _) = run(&["check", "--report", "json-lines", &path]);
    assert_eq!(out.lines().count(), 1);
    let (_, out, _) = run(&["check", "--report", "json-lines", "--continue-on-error", &path]);
    assert_eq!(out.lines().count(), 2);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["check"]).0, 2);
    assert_eq!(run(&["check", "/nonexistent/file.xtt"]).0, 2);
    assert_eq!(run(&["normalize", "-e", "(", "-t", "bool"]).0, 2);
    let f = scratch("def x : = tt\n");
    assert_eq!(run(&["check", &f.path().display().to_string()]).0, 2);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn json_lines_reports_follow_the_schema_and_are_deterministic() {
    let file = corpus("negatives.xtt");
    let (_, first, _) = run(&["check", "--report", "json-lines", &file]);
    let (_, second, _) = run(&["check", "--report", "json-lines", &file]);
    assert_eq!(first, second);
    for line in first.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(&keys[..4], ["name", "kind", "status", "error-code"]);
        assert!(v.get("elapsed-ms").is_none());
    }
    let (_, timed, _) = run(&["check", "--report", "json-lines", "--timings", &file]);
    let v: Value = serde_json::from_str(timed.lines().next().unwrap()).unwrap();
    assert!(v["elapsed-ms"].is_u64());
}

#[test]
fn emit_core_lines_parse_back() {
    let (code, out, _) = run(&["emit-core", &corpus("prelude.xtt")]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 8);
    for line in out.lines() {
        let (kind, _, ty, t) = xtt::sexp::parse_decl(line).unwrap();
        assert!(["def", "check", "normalize"].contains(&kind.as_str()));
        assert_eq!(xtt::sexp::emit_decl(&kind, line.split(' ').nth(1).unwrap(), &ty, &t), line);
    }
}

#[test]
fn fuzz_is_reproducible() {
    let (code, a, _) = run(&["fuzz", "-n", "50", "--seed", "7", "--report", "json-lines"]);
    let (_, b, _) = run(&["fuzz", "-n", "50", "--seed", "7", "--report", "json-lines"]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 50);
}

#[test]
fn the_split_budget_comes_from_the_environment_first() {
    // Boundary separation needs splits; with none, UIP is undecided.
    let uip = corpus("uip.xtt");
    let bin = env!("CARGO_BIN_EXE_xtt");
    let with = |env: Option<&str>, flag: &[&str]| {
        let mut cmd = Command::new(bin);
        cmd.arg("check").args(flag).arg(&uip);
        match env {
            Some(v) => cmd.env("XTT_MAX_SPLITS", v),
            None => cmd.env_remove("XTT_MAX_SPLITS"),
        };
        cmd.output().unwrap().status.code().unwrap()
    };
    assert_eq!(with(None, &[]), 0);
    assert_eq!(with(None, &["--max-splits", "0"]), 1);
    assert_eq!(with(Some("0"), &["--max-splits", "12"]), 1);
    assert_eq!(with(Some("12"), &["--max-splits", "0"]), 0);
    assert_eq!(with(Some("lots"), &[]), 2);
}
