use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use connexion::report::validate_report;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).to_string_lossy().into_owned()
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_connexion"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(text) = stdin {
        child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    run_with_stdin(args, None)
}

fn analyze(name: &str) -> Value {
    let r = run(&["analyze", &fixture(name)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    validate_report(&v).unwrap();
    v
}

/// `(re, im, flagged)` for each eigenvalue line of `monodromy`.
fn eigenvalues(stdout: &str) -> Vec<(f64, f64, bool)> {
    stdout
        .lines()
        .skip_while(|l| !l.starts_with("eigenvalues"))
        .skip(1)
        .take_while(|l| l.starts_with("  "))
        .map(|l| {
            let t: Vec<&str> = l.split_whitespace().collect();
            let re: f64 = t[0].parse().unwrap();
            let im: f64 = t[2].trim_end_matches('i').parse().unwrap();
            (re, if t[1] == "-" { -im } else { im }, l.contains("|λ| ≠ 1"))
        })
        .collect()
}

fn residual(stdout: &str) -> f64 {
    stdout.lines().find_map(|l| l.strip_prefix("residual: ")).unwrap().parse().unwrap()
}

#[test]
fn analyze_examples() {
    let euler = analyze("euler.cx");
    assert_eq!(euler["regular_singular"], Value::Bool(false));
    assert_eq!(euler["slopes"], serde_json::json!([{ "num": 1, "den": 1, "mult": 1 }]));
    assert_eq!(euler["definable_flat_sections"], Value::Bool(false));

    let half = analyze("const_half.cx");
    assert_eq!(half["definable_flat_sections"], Value::Bool(true));
    let b = &half["exponents_numeric"][0];
    assert_eq!(b["re"].as_f64(), Some(0.5));
    assert_eq!(b["im"].as_f64(), Some(0.0));

    let imag = analyze("imag.cx");
    assert_eq!(imag["definable_flat_sections"], Value::Bool(false));
    assert_eq!(imag["certificate"]["kind"], "NonRealExponent");
}

#[test]
fn analyze_text_summary() {
    let r = run(&["analyze", &fixture("euler.cx"), "--format", "text"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().any(|l| l.starts_with("definable flat sections") && l.ends_with("false")));
}

#[test]
fn decide_examples() {
    for (name, line) in [
        ("const_half.cx", "definable: true"),
        ("euler.cx", "definable: false (slope 1 > 0, witness direction θ=1/8)"),
        ("nilpotent.cx", "definable: true"),
    ] {
        let r = run(&["decide", &fixture(name)]);
        assert_eq!(r.code, 0);
        assert_eq!(r.stdout.trim_end(), line);
    }
}

#[test]
fn decide_agrees_with_analyze() {
    for name in ["const_half.cx", "euler.cx", "nilpotent.cx", "imag.cx", "operator_real.cx"] {
        let verdict = run(&["decide", &fixture(name)]).stdout;
        let definable = analyze(name)["definable_flat_sections"].as_bool().unwrap();
        assert_eq!(verdict.starts_with("definable: true"), definable, "{name}");
    }
}

#[test]
fn monodromy_examples() {
    let half = run(&["monodromy", &fixture("const_half.cx")]);
    assert_eq!(half.code, 0);
    let ev = eigenvalues(&half.stdout);
    assert_eq!(ev.len(), 1);
    assert!((ev[0].0 + 1.0).abs() < 1e-8 && ev[0].1.abs() < 1e-8 && !ev[0].2);
    assert!(residual(&half.stdout) < 1e-8);

    // y = z^i continues to e^(2πi·i)·y = e^(−2π)·y.
    let imag = run(&["monodromy", &fixture("imag.cx")]);
    let ev = eigenvalues(&imag.stdout);
    assert_eq!(ev.len(), 1);
    assert!((ev[0].0 - (-std::f64::consts::TAU).exp()).abs() < 1e-10 && ev[0].2);

    let nil = run(&["monodromy", &fixture("nilpotent.cx")]);
    let ev = eigenvalues(&nil.stdout);
    assert_eq!(ev.len(), 2);
    assert!(ev.iter().all(|(re, im, flagged)| (re - 1.0).abs() < 1e-7 && im.abs() < 1e-7 && !flagged));
}

#[test]
fn oscillate_examples() {
    let up = run(&["oscillate", &fixture("euler.cx"), "--direction", "1/4"]);
    assert_eq!(up.code, 0);
    assert_eq!(up.stdout.lines().last(), Some("classification: growing"));

    let flat = run(&["oscillate", &fixture("euler.cx"), "--direction", "0"]);
    let counts: Vec<&str> = flat.stdout.lines().filter_map(|l| l.trim().strip_prefix("counts: ")).collect();
    assert!(!counts.is_empty());
    assert!(counts.iter().all(|c| c.split(' ').all(|n| n == "0")));

    let half = run(&["oscillate", &fixture("const_half.cx"), "--direction", "1/4"]);
    assert_eq!(half.stdout.lines().last(), Some("classification: bounded"));
}

#[test]
fn corpus_runs() {
    let all = run(&["corpus"]);
    assert_eq!(all.code, 0, "{}", all.stdout);
    let summary = all.stdout.lines().last().unwrap();
    let (n, passed) = summary.split_once(" cases, ").unwrap();
    let n: usize = n.parse().unwrap();
    assert!(n >= 12);
    assert_eq!(passed, format!("{n} passed"));

    let one = run(&["corpus", "--filter", "euler"]);
    assert_eq!(one.code, 0);
    assert_eq!(one.stdout.lines().last(), Some("1 cases, 1 passed"));

    let none = run(&["corpus", "--filter", "no_such_case"]);
    assert_eq!(none.code, 0);
    assert!(none.stdout.starts_with("0 cases"));
}

#[test]
fn reads_standard_input() {
    let r = run_with_stdin(&["decide", "-"], Some("rank 1\nmatrix\n[ 1/2 ]\n"));
    assert_eq!((r.code, r.stdout.trim_end()), (0, "definable: true"));
    let bad = run_with_stdin(&["decide", "-"], Some("rank 1\nmatrix\n[ 1/0 ]\n"));
    assert_eq!(bad.code, 1);
    assert!(bad.stderr.contains("<stdin>:3:5"), "{}", bad.stderr);
}

#[test]
fn exit_codes() {
    let usage = [
        vec!["frobnicate"],
        vec!["decide"],
        vec!["decide", "/nonexistent/input.cx"],
        vec!["oscillate", "EULER", "--direction", "one"],
        vec!["monodromy", "EULER", "--tol", "0.5"],
        vec!["monodromy", "EULER", "--radius", "-1"],
        vec!["oscillate", "EULER", "--direction", "1/4", "--levels", "0"],
        vec!["decide", "NONMONOMIAL"],
    ];
    let (euler, nonmonomial) = (fixture("euler.cx"), fixture("non_monomial_leading.cx"));
    for args in usage {
        let args: Vec<&str> = args
            .iter()
            .map(|a| match *a {
                "EULER" => euler.as_str(),
                "NONMONOMIAL" => nonmonomial.as_str(),
                a => a,
            })
            .collect();
        let r = run(&args);
        assert_eq!(r.code, 1, "{args:?}: {}", r.stderr);
        assert!(!r.stderr.is_empty());
    }
    assert_eq!(run(&["--help"]).code, 0);

    let failed = run(&["analyze", &fixture("numeric_failure.cx")]);
    assert_eq!(failed.code, 2, "{}", failed.stderr);
    let report: Value = serde_json::from_str(&failed.stdout).unwrap();
    validate_report(&report).unwrap();
    assert!(report["monodromy_eigenvalues_numeric"].is_null());
    assert!(report["diagnostics"]["numeric_error"].is_string());
}
