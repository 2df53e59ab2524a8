//! End-to-end checks of the command-line surface: output formats,
//! round-trips, exit codes and report determinism.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twoloop"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmpfile(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("twoloop-cli-tests");
    fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    fs::write(&path, content).unwrap();
    path
}

#[test]
fn canon_prints_canonical_pair_with_coefficient() {
    let out = run(&["canon", "--triple", "1,1,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1 0 1");
    let out = run(&["canon", "--triple", "1,-1,0"]);
    assert_eq!(stdout(&out).trim(), "2 1 1");
}

#[test]
fn canon_rejects_malformed_triple_with_parse_code() {
    let out = run(&["canon", "--triple", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dumbbell_pinned_example() {
    let out = run(&["dumbbell", "--p", "t", "--q", "t"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1 0 -1\n2 1 1\n");
}

#[test]
fn bch_verify_prints_both_lines() {
    let out = run(&["bch-verify"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("Z(T)=exp([a,b]): OK"));
    assert!(text.contains("H(p)=BCH(p): OK for p=1..4"));
}

#[test]
fn surgery_identity_pairing() {
    let pairing = tmpfile("pairing-id.txt", "3\n1;0;0\n0;1;0\n0;0;1\n");
    let mu = tmpfile("mu-zero.txt", "");
    let out = run(&[
        "surgery",
        "--pairing",
        pairing.to_str().unwrap(),
        "--mu",
        mu.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("0 0 -1/2\n"), "got: {}", text);
    assert!(text.contains("in (1/2)-lattice: true"));
    assert!(text.contains("in (1/12)-lattice: true"));
    assert!(text.contains("in (1/1)-lattice: false"));
}

#[test]
fn surgery_rejects_non_hermitian_with_domain_code() {
    let pairing = tmpfile("pairing-bad.txt", "3\n1;t;0\nt;1;0\n0;0;1\n");
    let mu = tmpfile("mu-zero2.txt", "");
    let out = run(&[
        "surgery",
        "--pairing",
        pairing.to_str().unwrap(),
        "--mu",
        mu.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn phi_reports_verdicts() {
    let matrix = tmpfile("m-unknot.txt", "1\n1\n");
    let out = run(&["phi", "--matrix", matrix.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("lambda = 0"));
    assert!(text.contains("in (1/12)-lattice: true"));
}

#[test]
fn phi_rejects_bad_matrix() {
    let matrix = tmpfile("m-bad.txt", "2\n1;t\nt^-1;-1\n");
    let out = run(&["phi", "--matrix", matrix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let matrix = tmpfile("m-unparsable.txt", "2\n1;t\n");
    let out = run(&["phi", "--matrix", matrix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_reports_are_byte_identical() {
    let out1 = std::env::temp_dir().join("twoloop-cli-tests/scan1.txt");
    let out2 = std::env::temp_dir().join("twoloop-cli-tests/scan2.txt");
    fs::create_dir_all(out1.parent().unwrap()).unwrap();
    let r1 = run(&["scan", "--n", "2", "--max-exp", "1", "--out", out1.to_str().unwrap()]);
    let r2 = run(&["scan", "--n", "2", "--max-exp", "1", "--out", out2.to_str().unwrap()]);
    assert!(r1.status.success() && r2.status.success());
    assert_eq!(fs::read(&out1).unwrap(), fs::read(&out2).unwrap());
    let text = fs::read_to_string(&out1).unwrap();
    assert!(text.contains("# total=4"));
    assert!(text.contains("# twelfth_failures=0"));
}

#[test]
fn scan_smallest_class() {
    let out = std::env::temp_dir().join("twoloop-cli-tests/scan-n1.txt");
    fs::create_dir_all(out.parent().unwrap()).unwrap();
    let r = run(&["scan", "--n", "1", "--max-exp", "0", "--out", out.to_str().unwrap()]);
    assert!(r.status.success());
    let text = stdout(&r);
    assert!(text.contains("scanned 2 matrices"));
    assert!(text.contains("twelfth_failures=0"));
}

#[test]
fn cover_prints_quotient_and_flags() {
    let delta = tmpfile("delta-trefoil.txt", "t - 1 + t^-1");
    let out = run(&["cover", "--delta", delta.to_str().unwrap(), "--r", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("delta_r = t^-1 + 1 + t"));
    assert!(text.contains("cover is ZHS: false"));
    // with a half-integral element and matching signatures
    let x = tmpfile("x-half.txt", "2 1 1/2\n");
    let out = run(&[
        "cover",
        "--delta",
        delta.to_str().unwrap(),
        "--r",
        "2",
        "--sigma",
        "3/8,3/8",
        "--x",
        x.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("r divides it:"));
    assert!(text.contains("equal signatures: true"));
}

#[test]
fn hair_prints_series_lines() {
    let x = tmpfile("x-theta11.txt", "0 0 1\n");
    let out = run(&["hair", "--input", x.to_str().unwrap(), "--degree", "4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.trim(), "0 0 12");
}

#[test]
fn theta_lines_roundtrip_through_dumbbell_output() {
    let out = run(&["dumbbell", "--p", "t^2 + t", "--q", "t"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let parsed = twoloop::theta::ThetaElement::parse_lines(&text).unwrap();
    assert_eq!(parsed.to_lines(), text);
}
