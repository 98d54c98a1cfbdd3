use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn ffmem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffmem")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, data: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, data).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mems_on_running_example() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "run.txt", "gtaatagtagtacc\n");
    let out = ffmem(&["mems", &input, "--tau", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\t1\t1\t7\t3\n1\t1\t1\t10\t3\n1\t1\t5\t8\t5\n");
    let oracle = ffmem(&["oracle", &input, "--tau", "3"]);
    assert_eq!(stdout(&oracle), stdout(&out));
}

#[test]
fn fasta_detection_and_output_file() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.fa", ">x\nacgtacgt\n>y\nttacgtacgg\n");
    let dest = dir.path().join("out.tsv");
    let out = ffmem(&["mems", &input, "--tau", "4", "-o", dest.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&dest).unwrap();
    assert!(text.lines().count() > 0);
    assert!(text.lines().all(|l| l.split('\t').count() == 5));
}

#[test]
fn build_is_deterministic_and_reusable() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.txt", "acgtacgtaa\ncgtacgtacc\nggacgtacgt\n");
    let (a, b) = (dir.path().join("a.ffg"), dir.path().join("b.ffg"));
    for dest in [&a, &b] {
        let out = ffmem(&["build", &input, "--seed", "7", "-o", dest.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("n=30 G="), "{err}");
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let from_text = ffmem(&["mems", &input, "--tau", "3", "--seed", "7"]);
    let from_grammar = ffmem(&["mems", a.to_str().unwrap(), "--tau", "3"]);
    assert_eq!(stdout(&from_text), stdout(&from_grammar));
    let stats = ffmem(&["stats", a.to_str().unwrap()]);
    assert!(stdout(&stats).starts_with("n=30 "));
    assert!(stdout(&stats).contains("level 1\t"));
    let again = ffmem(&["build", a.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(2));
}

#[test]
fn verify_reports_pass_and_fail() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.txt", "gtaatagtagtacc\ntagtaccgta\n");
    let pass = ffmem(&["verify", &input, "--tau", "3"]);
    assert_eq!(pass.status.code(), Some(0));
    assert!(stdout(&pass).lines().last().unwrap().starts_with("PASS"));
    let fail = ffmem(&["verify", &input, "--tau", "4", "--oracle-tau", "3"]);
    assert_eq!(fail.status.code(), Some(1));
    let text = stdout(&fail);
    assert!(text.lines().any(|l| l.starts_with("missing\t")));
    assert!(text.lines().last().unwrap().starts_with("FAIL"));
}

#[test]
fn empty_results() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.txt", "gtaatagtagtacc\n");
    assert!(ffmem(&["mems", &input, "--tau", "100"]).stdout.is_empty());
    let disjoint = write(&dir, "d.txt", "acac\ngtgt\n");
    let out = ffmem(&["mems", &disjoint, "--tau", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
}

#[test]
fn dump_prmems() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "c.txt", "gtaatagtagtacc\n");
    let dump = dir.path().join("t.tsv");
    let out = ffmem(&["mems", &input, "--tau", "3", "--dump-prmems", dump.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&dump).unwrap();
    assert!(!text.is_empty());
    assert!(text.lines().all(|l| l.split('\t').count() == 5));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(ffmem(&[]).status.code(), Some(2));
    assert_eq!(ffmem(&["--help"]).status.code(), Some(0));
    assert_eq!(ffmem(&["frobnicate"]).status.code(), Some(2));
    let input = write(&dir, "c.txt", "acgt\n");
    assert_eq!(ffmem(&["mems", &input, "--tau", "0"]).status.code(), Some(2));
    assert_eq!(ffmem(&["mems", &input, "--format", "xml"]).status.code(), Some(2));
    let missing = dir.path().join("nope.txt");
    assert!(!Path::new(&missing).exists());
    assert_eq!(ffmem(&["mems", missing.to_str().unwrap()]).status.code(), Some(3));
    let bad = write(&dir, "bad.fa", "acgt\n>x\nac\n");
    let out = ffmem(&["mems", &bad, "--format", "fasta"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FASTA"));
}
