//! Every example must run to completion.

use std::path::PathBuf;
use std::process::Command;

fn example(name: &str) -> PathBuf {
    // target/<profile>/deps/<test binary> -> target/<profile>/examples/<name>
    let exe = std::env::current_exe().unwrap();
    let dir = exe.parent().unwrap().parent().unwrap().join("examples");
    dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX))
}

fn run(name: &str) -> String {
    let path = example(name);
    let out = Command::new(&path)
        .output()
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn deal_and_reconstruct() {
    assert!(run("deal_and_reconstruct").contains("quorum 1,3,4 recovers: 2a 07 00 63 0d"));
}

#[test]
fn private_recovery() {
    assert!(run("private_recovery").contains("refused"));
}

#[test]
fn full_state_recovery() {
    run("full_state_recovery");
}

#[test]
fn dealerless_setup() {
    assert!(run("dealerless_setup").contains("secret hidden: true"));
}

#[test]
fn leak_demo() {
    assert!(run("leak_demo").contains("leaked combination Some"));
}

#[test]
fn perfectness_check() {
    let out = run("perfectness_check");
    assert!(out.contains("participant-major: perfect"));
    assert!(out.contains("xor-sabotage n=3 k=2: leaks"));
}

#[test]
fn binary_field_secrets() {
    assert!(run("binary_field_secrets").contains("secret 3: 0123456789abcdef0123456789abcdef"));
}
