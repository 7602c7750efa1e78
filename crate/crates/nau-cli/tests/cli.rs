//! Process-level checks of the `nau` binary: exit codes, the stanza
//! file input, JSON output, and the signature environment variable.

use std::path::PathBuf;
use std::process::{Command, Output};

fn nau(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nau"))
        .args(args)
        .output()
        .expect("spawn nau")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("nau-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn antiunify_via_flags() {
    let out = nau(&[
        "antiunify",
        "--left",
        "f(a, b)",
        "--right",
        "f(b, c)",
        "--atoms",
        "a,b,c,d",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("term:"), "{text}");
    assert!(text.contains("witness left:"), "{text}");
}

#[test]
fn antiunify_via_file() {
    let path = tmp_file(
        "problem",
        "# a golden instance\natoms: a, b, c, d\ncontext: {}\nleft: f(a, b)\nright: f(b, c)\n",
    );
    let out = nau(&["antiunify", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    std::fs::remove_file(path).ok();
}

#[test]
fn equiv_success_and_bot_exit_codes() {
    let out = nau(&[
        "equiv",
        "--left",
        "a.f(b, (a b)*X)",
        "--right",
        "b.f(a, X)",
        "--context",
        "{a#X}",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "(a b)");

    let out = nau(&[
        "equiv",
        "--left",
        "a.f(b, X)",
        "--right",
        "b.f(a, X)",
        "--context",
        "{a#X}",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("bot"), "{}", stdout(&out));
}

#[test]
fn equiv_via_equation_lines() {
    let path = tmp_file(
        "equations",
        "context: {a#X}\neq: a ~ a\neq: a.(a b)(c d)*X ~ b.X\n",
    );
    let out = nau(&["equiv", "--file", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert_eq!(stdout(&out).trim(), "(c d)");
    std::fs::remove_file(path).ok();
}

#[test]
fn boolean_commands_and_exit_codes() {
    let out = nau(&["alphaeq", "--left", "a.a", "--right", "b.b"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");

    let out = nau(&["alphaeq", "--left", "a.b", "--right", "b.a"]);
    assert_eq!(out.status.code(), Some(1));

    let out = nau(&["fresh", "--atom", "a", "--term", "a.b"]);
    assert_eq!(out.status.code(), Some(0));

    let out = nau(&[
        "fresh",
        "--atom",
        "a",
        "--term",
        "(a b)*X",
        "--context",
        "{b#X}",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");
}

#[test]
fn fc_computes_or_fails() {
    let out = nau(&["fc", "{a # f(b, X)}"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "{a#X}");

    let out = nau(&["fc", "{a # a}"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("bot"));
}

#[test]
fn subsumes_pairs() {
    let out = nau(&["subsumes", "--left", "{a#X} f(a)", "--right", "{} f(a)"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "true");

    let out = nau(&[
        "subsumes",
        "--left",
        "{a#X} f(X)",
        "--right",
        "{} f(Y)",
        "--exhaustive",
        "--max-depth",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("exhaustive"), "{}", stdout(&out));
}

#[test]
fn parse_errors_exit_2() {
    let out = nau(&["antiunify", "--left", "f(", "--right", "a"]);
    assert_eq!(out.status.code(), Some(2));

    // Non-based input is a validation error.
    let out = nau(&[
        "antiunify",
        "--left",
        "f(a)",
        "--right",
        "f(b)",
        "--atoms",
        "a",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = nau(&["alphaeq", "--left", "a"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_reports_parse() {
    let out = nau(&[
        "antiunify",
        "--left",
        "f(a, b)",
        "--right",
        "f(b, c)",
        "--atoms",
        "a,b,c,d",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["kind"], "generalization");
    assert_eq!(report["atoms"].as_array().unwrap().len(), 4);

    let out = nau(&["fc", "{a # a}", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["kind"], "failure");
}

#[test]
fn signature_declares_constants_and_checks_arity() {
    let out = nau(&["alphaeq", "--left", "c", "--right", "c", "--sig", "c/0"]);
    assert_eq!(out.status.code(), Some(0));

    let out = nau(&["alphaeq", "--left", "f(a)", "--right", "f(a)", "--sig", "f/2"]);
    assert_eq!(out.status.code(), Some(2));

    let sig_path = tmp_file("sig", "g/1");
    let out = Command::new(env!("CARGO_BIN_EXE_nau"))
        .args(["alphaeq", "--left", "g(a, b)", "--right", "g(a, b)"])
        .env("NAU_SIGNATURE", &sig_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(sig_path).ok();
}
