use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn pkidx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pkidx")).args(args).output().expect("run pkidx")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn build(dir: &Path, name: &str, text: &[u8], extra: &[&str]) -> String {
    let input = dir.join(name);
    std::fs::write(&input, text).unwrap();
    let out = dir.join(format!("{name}.idx"));
    let mut args = vec!["build", input.to_str().unwrap(), "-o", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = pkidx(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out.to_str().unwrap().to_string()
}

#[test]
fn banana_queries() {
    let dir = TempDir::new().unwrap();
    let idx = build(dir.path(), "banana", b"banana", &[]);
    let o = pkidx(&["query", &idx, "--mode", "count", "ana"]);
    assert_eq!(stdout(&o), "0\tcount\t2\n");
    let o = pkidx(&["query", &idx, "--mode", "locate", "ana", "--sort-positions"]);
    assert_eq!(stdout(&o), "0\tlocate\t1 3\n");
    let o = pkidx(&["query", &idx, "--mode", "predecessor", "a", "ana"]);
    assert_eq!(stdout(&o), "0\tpredecessor\t-\n1\tpredecessor\t5\n");
}

#[test]
fn stats_header_values() {
    let dir = TempDir::new().unwrap();
    let idx = build(dir.path(), "banana", b"banana", &[]);
    let out = stdout(&pkidx(&["stats", &idx]));
    assert!(out.contains("n\t6\n") && out.contains("sigma\t3\n"), "{out}");
}

#[test]
fn deterministic_files() {
    let dir = TempDir::new().unwrap();
    let text: Vec<u8> = (0..5000u32).map(|i| b"acgt"[(i.wrapping_mul(2654435761) >> 7) as usize % 4]).collect();
    let a = build(dir.path(), "a", &text, &["--force-threshold", "3"]);
    let b = build(dir.path(), "b", &text, &["--force-threshold", "3"]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn empty_input_fails() {
    let dir = TempDir::new().unwrap();
    let input = dir.path().join("empty");
    std::fs::write(&input, b"").unwrap();
    let o = pkidx(&["build", input.to_str().unwrap(), "-o", dir.path().join("x").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pkidx(&["query"]).status.code(), Some(2));
    assert_eq!(pkidx(&["frobnicate"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let idx = build(dir.path(), "t", b"abc", &[]);
    assert_eq!(pkidx(&["query", &idx, "--mode", "sideways", "a"]).status.code(), Some(2));
}

#[test]
fn bad_pattern_reports_and_continues() {
    let dir = TempDir::new().unwrap();
    let idx = build(dir.path(), "t", b"abcabc", &[]);
    let o = pkidx(&["query", &idx, "--mode", "count", "hex:zz", "abc", "hex:6263"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "1\tcount\t2\n2\tcount\t2\n");
}

#[test]
fn naive_engine_agrees() {
    let dir = TempDir::new().unwrap();
    let text: Vec<u8> = (0..3000u32).map(|i| b"ab"[((i * i + i / 7) % 3 == 0) as usize]).collect();
    let idx = build(dir.path(), "t", &text, &["--force-threshold", "2"]);
    let mut patterns = String::new();
    for i in 0..200usize {
        let s = (i * 37) % (text.len() - 100);
        let len = 1 + (i * 13) % 90;
        let mut p = text[s..s + len].to_vec();
        if i % 3 == 0 {
            p[len / 2] = b'a' + b'b' - p[len / 2];
        }
        patterns.push_str(std::str::from_utf8(&p).unwrap());
        patterns.push('\n');
    }
    patterns.push_str("zzz\nab\u{7f}\n\n");
    let pf = dir.path().join("patterns.txt");
    std::fs::write(&pf, patterns).unwrap();
    for mode in ["count", "locate", "predecessor"] {
        let run =
            |engine| stdout(&pkidx(&["query", &idx, "--mode", mode, "--engine", engine, "-f", pf.to_str().unwrap()]));
        let (naive, indexed) = (run("naive"), run("indexed"));
        assert_eq!(naive.lines().count(), 203);
        assert_eq!(naive, indexed, "{mode}");
    }
}

#[test]
fn stdin_and_trace() {
    use std::io::Write;
    use std::process::Stdio;
    let dir = TempDir::new().unwrap();
    let idx = build(dir.path(), "t", b"mississippi", &[]);
    let mut child = Command::new(env!("CARGO_BIN_EXE_pkidx"))
        .args(["query", &idx, "--mode", "count", "--trace"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"ssi\r\nissip\n").unwrap();
    let o = child.wait_with_output().unwrap();
    let out = stdout(&o);
    let results: Vec<_> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(results, vec!["0\tcount\t2", "1\tcount\t1"]);
    assert_eq!(out.lines().filter(|l| l.starts_with("# route=")).count(), 2);
}

#[test]
fn verify_passes_and_detects_damage() {
    let dir = TempDir::new().unwrap();
    let idx = build(dir.path(), "t", b"she sells sea shells by the sea shore", &[]);
    let o = pkidx(&["verify", &idx, "--samples", "300"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = pkidx(&["verify", &idx, "--samples", "0"]);
    assert!(o.status.success());
    assert!(!stdout(&o).contains("differential"));

    // Swap two suffix array entries: the file still loads but the order check fails.
    let mut bytes = std::fs::read(&idx).unwrap();
    let file = pkidx::IndexFile::from_bytes(&bytes).unwrap();
    let sigma = file.index.alphabet().sigma();
    // Packed words hold the text and its terminator.
    let words = (file.index.len() + 1).div_ceil(file.index.alphabet().chars_per_word());
    let sa_at = 6 + 2 + 1 + 2 + 1 + 1 + 8 + 8 + sigma + 8 + 8 * words + 8;
    let (a, b) = (sa_at, sa_at + 4);
    for k in 0..4 {
        bytes.swap(a + k, b + k);
    }
    std::fs::write(&idx, &bytes).unwrap();
    let o = pkidx(&["verify", &idx, "--samples", "100"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL\tsa-order"), "{}", stdout(&o));
}

#[test]
fn fasta_boundaries() {
    let dir = TempDir::new().unwrap();
    let idx = build(dir.path(), "g.fa", b">r1 x\nACGTAC\n>r2\nGTACGT\n", &["--fasta"]);
    let o = pkidx(&["query", &idx, "--mode", "locate", "--sort-positions", "ACG"]);
    assert_eq!(stdout(&o), "0\tlocate\tr1:0 r2:2\n");
    let o = pkidx(&["query", &idx, "--mode", "count", "ACG", "CGTACG"]);
    assert_eq!(stdout(&o), "0\tcount\t2\n1\tcount\t0\n");
    let o = pkidx(&["query", &idx, "--mode", "count", "--engine", "naive", "ACG"]);
    assert_eq!(stdout(&o), "0\tcount\t2\n");
}
