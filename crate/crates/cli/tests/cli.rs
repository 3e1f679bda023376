//! End-to-end tests of the `cychom` binary: exit codes, error reporting,
//! and report shape.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cychom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn hh_dimensions() {
    let o = run(&["hh", &fixture("lambda2.json"), "--degree", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"dim\": 2"), "{}", stdout(&o));

    let o = run(&["hh", &fixture("rational.json"), "--degree", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"dim\": 0"));

    let o = run(&["hh", &fixture("xsq_plus1.json"), "--degree", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"dim\": 0"));
}

#[test]
fn hc_dimensions() {
    let o = run(&["hc", &fixture("rational.json"), "--degree", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"dim\": 1"), "{}", stdout(&o));

    let o = run(&["hc", &fixture("lambda1.json"), "--degree", "1", "--relative", "x"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"dim\": 0"));

    let o = run(&["hc", &fixture("lambda1.json"), "--degree", "0", "--relative", "x"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"dim\": 1"));
}

#[test]
fn parse_errors_cite_position_and_exit_2() {
    let o = run(&["hh", &fixture("bad_parse.json"), "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 1, column 7"), "{err}");
    assert!(err.contains("unknown variable"), "{err}");
}

#[test]
fn wrong_document_kind_exits_2() {
    let o = run(&["hh", &fixture("tower_x.json"), "--degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "prohkr",
        &fixture("lambda1.json"),
        "--p",
        "1",
        "--m-max",
        "2",
        "--search-max",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = run(&["hh", &fixture("lambda2.json"), "--degree", "3", "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
}

#[test]
fn unknown_suite_exits_2_and_corrupt_fixture_fails() {
    let o = run(&["check", "--suite", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["check", "--suite", "all", &fixture("corrupt_structure.json")]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("FAIL"), "{}", stderr(&o));
}

#[test]
fn table_format_and_determinism() {
    let args = [
        "hh",
        &fixture("lambda2.json"),
        "--degree",
        "2",
        "--hodge",
        "--format",
        "table",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "table output must be byte-deterministic");
    let text = stdout(&a);
    assert!(text.contains("result.dim = 2"), "{text}");
    assert!(text.contains("result.hodge.pieces[0].weight"), "{text}");
}

#[test]
fn help_and_version_exit_0() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
    let o = run(&["hh"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn as_hn_shifts_relative_theory() {
    // HN_rel(n) = HC_rel(n-1): degree 1 as HN equals degree 0 as HC
    let hn = run(&[
        "hc",
        &fixture("lambda1.json"),
        "--degree",
        "1",
        "--relative",
        "x",
        "--as-hn",
    ]);
    assert!(hn.status.success(), "{}", stderr(&hn));
    assert!(stdout(&hn).contains("\"theory\": \"HN_rel\""));
    assert!(stdout(&hn).contains("\"dim\": 1"), "{}", stdout(&hn));

    let o = run(&["hc", &fixture("lambda1.json"), "--degree", "1", "--as-hn"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hh_map_between_truncations_is_zero() {
    let o = run(&[
        "hh",
        &fixture("lambda3.json"),
        "--degree",
        "2",
        "--map",
        &fixture("lambda1.json"),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("\"map_rank\": 0"), "{}", stdout(&o));
}
