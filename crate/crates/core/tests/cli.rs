use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn gruppen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gruppen")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn deal(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["deal", "--n", "3", "--k", "2", "--field", "p=13", "--layout", "secrets-first", "--seed", "1"];
    args.extend_from_slice(extra);
    args.extend_from_slice(&["--out", path(dir)]);
    gruppen(&args)
}

fn bundles(dir: &Path, which: &[usize]) -> Vec<PathBuf> {
    which.iter().map(|i| dir.join(format!("participant-{i}.bundle"))).collect()
}

#[test]
fn deal_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let out = deal(&a, &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("share size: 1 elements/participant"));
    deal(&b, &[]);
    for i in 1..=3 {
        let name = format!("participant-{i}.bundle");
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap());
    }
    assert_eq!(fs::read_dir(&a).unwrap().count(), 3);
}

#[test]
fn binary_field_share_size() {
    let tmp = TempDir::new().unwrap();
    let out = gruppen(&["deal", "--n", "5", "--k", "2", "--field", "gf2=8", "--out", path(tmp.path())]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("share size: 3 elements/participant, 24 bits"));
    let text = fs::read_to_string(tmp.path().join("participant-4.bundle")).unwrap();
    let share = text.lines().find_map(|l| l.strip_prefix("share ")).unwrap();
    let words: Vec<&str> = share.split(' ').collect();
    assert_eq!(words.len(), 3);
    assert!(words.iter().all(|w| w.len() == 2 && u8::from_str_radix(w, 16).is_ok()));
}

#[test]
fn field_bound_is_enforced() {
    let tmp = TempDir::new().unwrap();
    let ok = gruppen(&["deal", "--n", "3", "--k", "2", "--field", "p=7", "--out", path(tmp.path())]);
    assert!(ok.status.success());
    let bad = gruppen(&["deal", "--n", "3", "--k", "2", "--field", "p=5", "--out", path(tmp.path())]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(stderr(&bad).contains("n(n-k+1) = 6"));
}

#[test]
fn reconstruct_from_dealt_secrets() {
    let tmp = TempDir::new().unwrap();
    let secrets = tmp.path().join("secrets.txt");
    fs::write(&secrets, "5\n0\nc\n").unwrap();
    deal(tmp.path(), &["--secrets", path(&secrets)]);
    let files = bundles(tmp.path(), &[3, 1]);
    let out = gruppen(&["reconstruct", path(&files[0]), path(&files[1])]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "participant 1: 5\nparticipant 2: 0\nparticipant 3: c\n");

    let short = gruppen(&["reconstruct", path(&files[0])]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn reconstruct_refuses_mixed_layouts() {
    let tmp = TempDir::new().unwrap();
    let other = tmp.path().join("other");
    deal(tmp.path(), &[]);
    gruppen(&["deal", "--n", "3", "--k", "2", "--field", "p=13", "--layout", "participant-major", "--out", path(&other)]);
    let a = bundles(tmp.path(), &[1]);
    let b = bundles(&other, &[2]);
    let out = gruppen(&["reconstruct", path(&a[0]), path(&b[0])]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("differ"));
}

#[test]
fn missing_files_are_io_errors() {
    let out = gruppen(&["reconstruct", "/nonexistent/participant-1.bundle"]);
    assert_eq!(out.status.code(), Some(4));
}

fn recover(dir: &Path, transcript: &Path, requester: &str, quorum: &str, mode: &str, extra: &[&str]) -> Output {
    let files = bundles(dir, &[1, 2, 3]);
    let mut args = vec![
        "recover", "--requester", requester, "--quorum", quorum, "--mode", mode, "--seed", "3",
        "--transcript", path(transcript),
    ];
    args.extend_from_slice(extra);
    args.extend(files.iter().map(|f| path(f)));
    gruppen(&args)
}

fn dealt_secret(dir: &Path, i: usize) -> String {
    let text = fs::read_to_string(&bundles(dir, &[i])[0]).unwrap();
    text.lines().find_map(|l| l.strip_prefix("secret ")).unwrap().to_string()
}

#[test]
fn masked_recovery_prints_the_secret() {
    let tmp = TempDir::new().unwrap();
    deal(tmp.path(), &[]);
    let t = tmp.path().join("t.txt");
    let out = recover(tmp.path(), &t, "1", "2,3", "masked", &[]);
    assert!(out.status.success(), "{}", stderr(&out));
    let want = format!("recovered secret of participant 1: {}\n", dealt_secret(tmp.path(), 1));
    assert!(stdout(&out).starts_with(&want));
    let transcript = fs::read_to_string(&t).unwrap();
    assert!(transcript.contains("mode masked"));
    assert_eq!(transcript.lines().filter(|l| l.contains(" MASK ")).count(), 2);

    let again = recover(tmp.path(), &t, "1", "2,3", "masked", &[]);
    assert!(again.status.success());
    assert_eq!(fs::read_to_string(&t).unwrap().matches("session ").count(), 2);
}

#[test]
fn second_naive_recovery_is_refused() {
    let tmp = TempDir::new().unwrap();
    deal(tmp.path(), &[]);
    let t = tmp.path().join("t.txt");
    assert!(recover(tmp.path(), &t, "1", "2,3", "naive", &[]).status.success());
    let before = fs::read_to_string(&t).unwrap();
    let second = recover(tmp.path(), &t, "1", "2,3", "naive", &[]);
    assert_eq!(second.status.code(), Some(3));
    assert!(stderr(&second).contains("refused"));
    assert_eq!(fs::read_to_string(&t).unwrap(), before);
}

#[test]
fn literal_floor_gate_refuses_naive_recovery() {
    let tmp = TempDir::new().unwrap();
    deal(tmp.path(), &[]);
    let t = tmp.path().join("t.txt");
    let out = recover(tmp.path(), &t, "1", "2,3", "naive", &["--gate", "codimension-floor"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!t.exists());
}

#[test]
fn full_state_recovery_restores_the_bundle() {
    let tmp = TempDir::new().unwrap();
    deal(tmp.path(), &[]);
    let t = tmp.path().join("t.txt");
    let restored = tmp.path().join("restored.bundle");
    let out = recover(tmp.path(), &t, "2", "1,3", "full-state", &["--out", path(&restored)]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("recovered share of participant 2: "));
    assert_eq!(
        fs::read_to_string(&restored).unwrap(),
        fs::read_to_string(&bundles(tmp.path(), &[2])[0]).unwrap()
    );
}

#[test]
fn setup_round_trip() {
    let tmp = TempDir::new().unwrap();
    let secrets = tmp.path().join("s.txt");
    fs::write(&secrets, "1\n2\n3\n4\n").unwrap();
    let out_dir = tmp.path().join("out");
    let out = gruppen(&[
        "setup", "--n", "4", "--k", "2", "--field", "p=13", "--secrets", path(&secrets), "--seed", "5", "--out",
        path(&out_dir),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let transcript = fs::read_to_string(out_dir.join("setup.transcript")).unwrap();
    assert_eq!(transcript.lines().filter(|l| l.contains("SETUP_SHARE")).count(), 16);
    let files = bundles(&out_dir, &[2, 4]);
    let rec = gruppen(&["reconstruct", path(&files[0]), path(&files[1])]);
    assert_eq!(stdout(&rec), "participant 1: 1\nparticipant 2: 2\nparticipant 3: 3\nparticipant 4: 4\n");

    fs::write(&secrets, "1\n2\n3\n").unwrap();
    let short = gruppen(&[
        "setup", "--n", "4", "--k", "2", "--field", "p=13", "--secrets", path(&secrets), "--out", path(&out_dir),
    ]);
    assert_eq!(short.status.code(), Some(2));
}

#[test]
fn analyze_naive_transcript() {
    let tmp = TempDir::new().unwrap();
    deal(tmp.path(), &[]);
    let t = tmp.path().join("t.txt");
    recover(tmp.path(), &t, "1", "2,3", "naive", &[]);
    let out = gruppen(&["analyze", "--check", "rank", "--transcript", path(&t), "--coalition", "1", "--grant", "2"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let (view, granted) = text.split_once("with granted secrets 2:").unwrap();
    assert!(view.contains("  codim: 1\n"));
    assert!(view.contains("leaked combination: - r(1) + r(2) (secrets of 2,3)"));
    assert!(granted.contains("  codim: 0\n"));

    let json = gruppen(&["analyze", "--transcript", path(&t), "--coalition", "1", "--json"]);
    let value: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(value["view"]["codim"], 1);
    assert_eq!(value["view"]["leaked_combination"][1][0], 3);
}

#[test]
fn perfectness_reports() {
    let pass = gruppen(&["analyze", "--check", "perfectness", "--n", "3", "--k", "2", "--field", "p=7"]);
    assert!(stdout(&pass).ends_with("perfectness: PASS (expected 2.807354922 bits, tolerance 1e-9)\n"));
    let fail = gruppen(&["analyze", "--check", "perfectness", "--model", "xor-sabotage", "--field", "gf2=3"]);
    assert!(fail.status.success());
    assert!(stdout(&fail).contains("perfectness: FAIL"));
}

#[test]
fn entropy_report_lists_units() {
    let out = gruppen(&["analyze", "--check", "entropy", "--n", "3", "--k", "2", "--field", "p=7"]);
    let text = stdout(&out);
    assert!(text.contains("H(share1) = 2.807355 bits = 1.000000 units"));
    assert!(text.contains("positivity ok, monotonicity ok, additivity ok"));
}

#[test]
fn demo_leak_is_stable() {
    let a = gruppen(&["demo-leak"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&gruppen(&["demo-leak"])));
    assert!(stdout(&a).contains("p=13"));
    assert!(stdout(&a).contains("t_b"));
    assert!(stdout(&a).ends_with("identity holds\n"));
}

#[test]
fn usage_errors() {
    assert_eq!(gruppen(&[]).status.code(), Some(2));
    assert_eq!(gruppen(&["recover", "--requester", "1"]).status.code(), Some(2));
    assert_eq!(gruppen(&["deal", "--n", "3", "--k", "2", "--field", "q=7", "--out", "x"]).status.code(), Some(2));
    assert!(gruppen(&["--version"]).status.success());
}
