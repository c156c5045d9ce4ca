use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sensmatch::truth_table::parse_table_file;
use sensmatch::{NpnTransform, TextFormat, TruthTable};
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sensmatch"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn tt(s: &str) -> TruthTable {
    TruthTable::parse(s, TextFormat::Binary).unwrap()
}

#[test]
fn match_reports_a_witness_that_checks_out() {
    let dir = TempDir::new().unwrap();
    // f = x1 x2 + x3 and g = !x1 + x2 !x3
    let file = write(&dir, "pair.txt", "00011111\n10111010\n");
    let o = run(&["match", &file]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o);
    let witness: NpnTransform = line
        .trim()
        .strip_prefix("EQUIVALENT ")
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(tt("00011111").apply(&witness).unwrap(), tt("10111010"));
}

#[test]
fn match_identical_lines_gives_identity() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "same.txt", "0110100110010110\n0110100110010110\n");
    let o = run(&["match", &file]);
    assert_eq!(o.status.code(), Some(0));
    let w: NpnTransform = stdout(&o)
        .trim()
        .strip_prefix("EQUIVALENT ")
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(
        tt("0110100110010110").apply(&w).unwrap(),
        tt("0110100110010110")
    );
}

#[test]
fn match_two_files_and_rejection_phase() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "f.txt", "00000001\n");
    let g = write(&dir, "g.txt", "01101001\n");
    let o = run(&["match", &f, &g]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o).trim(),
        "NOT-EQUIVALENT phase=P1 signature=minterm"
    );
    let o = run(&[
        "match",
        &f,
        &g,
        "--no-phase3",
        "--compress",
        "32",
        "--max-iter",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn match_input_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "01x2\n0000\n");
    assert_eq!(run(&["match", &bad]).status.code(), Some(2));
    let mixed = write(&dir, "mixed.txt", "0110\n01101001\n");
    assert_eq!(run(&["match", &mixed]).status.code(), Some(2));
    let one = write(&dir, "one.txt", "0110\n");
    assert_eq!(run(&["match", &one]).status.code(), Some(2));
    assert_eq!(
        run(&["match", &path(&dir, "missing.txt")]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["match", &one, "--max-iter", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["match", &one, "--compress", "16"]).status.code(),
        Some(2)
    );
}

#[test]
fn classify_all_three_input_functions() {
    let dir = TempDir::new().unwrap();
    let body: String = (0..256u64)
        .map(|b| TruthTable::from_u64(3, b).unwrap().to_binary() + "\n")
        .collect();
    let file = write(&dir, "all3.txt", &body);
    let o = run(&["classify", &file]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "14 classes"));
    let listing: Vec<_> = out.lines().take(256).collect();
    assert_eq!(listing[0].split(' ').collect::<Vec<_>>(), ["0", "0", "00"]);
    let ids: std::collections::HashSet<_> = listing
        .iter()
        .map(|l| l.split(' ').nth(1).unwrap())
        .collect();
    assert_eq!(ids.len(), 14);
}

#[test]
fn classify_rejects_mixed_arity() {
    let dir = TempDir::new().unwrap();
    let file = write(&dir, "mixed.txt", "0110\n01101001\n");
    assert_eq!(run(&["classify", &file]).status.code(), Some(2));
}

#[test]
fn generated_classes_match_their_sidecar() {
    let dir = TempDir::new().unwrap();
    let (out, ids) = (path(&dir, "g2.txt"), path(&dir, "g2.ids"));
    let o = run(&[
        "gen",
        "--n",
        "7",
        "--count",
        "60",
        "--mode",
        "classes",
        "--classes",
        "6",
        "--seed",
        "4",
        "--out",
        &out,
        "--sidecar",
        &ids,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let tables = parse_table_file(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(tables.len(), 60);
    let o = run(&["classify", &out, "--sidecar", &ids]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "6 classes"));
    assert!(text.lines().any(|l| l == "sidecar agrees: 6 ids"));

    // a relabelled sidecar that merges two classes must be caught
    let merged: String = fs::read_to_string(&ids)
        .unwrap()
        .lines()
        .map(|l| {
            if l == "1" {
                "0\n".to_string()
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    let bad = write(&dir, "bad.ids", &merged);
    assert_eq!(
        run(&["classify", &out, "--sidecar", &bad]).status.code(),
        Some(1)
    );
}

#[test]
fn gen_defaults_and_determinism() {
    let a = run(&["gen", "--n", "9", "--count", "3", "--seed", "7"]);
    let b = run(&["gen", "--n", "9", "--count", "3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("n=9 format=hex\n"));
    assert_eq!(text.lines().nth(1).unwrap().len(), 128);
    let small = stdout(&run(&["gen", "--n", "4", "--count", "2"]));
    assert!(small.starts_with("n=4 format=binary\n"));
    let o = run(&["gen", "--n", "4", "--count", "2", "--sidecar", "x.ids"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!Path::new("x.ids").exists());
}

#[test]
fn bench_kv_is_deterministic_apart_from_timing() {
    let args = [
        "bench", "--n", "5,6", "--pairs", "300", "--repeat", "1", "--seed", "11", "--kv", "--mode",
        "classes",
    ];
    let strip = |o: Output| {
        stdout(&o)
            .lines()
            .filter(|l| !l.contains(".time."))
            .map(str::to_string)
            .collect::<Vec<_>>()
    };
    let a = strip(run(&args));
    assert_eq!(a, strip(run(&args)));
    assert!(a.iter().any(|l| l == "row.5.matchings=300"));
    for line in &a {
        assert!(line.split_once('=').is_some(), "{line}");
    }
}

#[test]
fn bench_table_and_flags() {
    let o = run(&[
        "bench",
        "--n",
        "5",
        "--pairs",
        "200",
        "--repeat",
        "2",
        "--no-phase3",
        "--compress",
        "32",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("coll_P2"));
    assert!(out.lines().any(|l| l.trim_start().starts_with("5 ")));
    assert_eq!(run(&["bench", "--repeat", "0"]).status.code(), Some(2));
}
