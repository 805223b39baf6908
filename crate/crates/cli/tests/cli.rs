use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univoque")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn bounds(line: &str) -> (f64, f64) {
    let inner = line.split('[').nth(1).unwrap().trim_end_matches(']');
    let (lo, hi) = inner.split_once(',').unwrap();
    (lo.trim().parse().unwrap(), hi.trim().parse().unwrap())
}

#[test]
fn alpha_digits() {
    assert_eq!(stdout(&["alpha", "--M", "1", "--q", "2", "--n", "6"]), "111111\n");
    assert_eq!(stdout(&["alpha", "--M", "2", "--q", "3", "--n", "4"]), "2222\n");
    let golden = stdout(&["alpha", "--seq", "(10)", "--n", "6"]);
    let mut lines = golden.lines();
    assert_eq!(lines.next(), Some("101010"));
    let (lo, hi) = bounds(lines.next().unwrap());
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    assert!(lo <= phi && phi <= hi);
}

#[test]
fn word_operations() {
    assert_eq!(stdout(&["compose", "10", "110"]), "110100\n");
    assert_eq!(stdout(&["compose", "--M", "2", "1", "1110"]), "2110\n");
    assert_eq!(stdout(&["decompose", "110100"]), "[\"10\",\"110\"]\n");
    assert_eq!(stdout(&["classify", "110"]), "irreducible\n");
    assert_eq!(stdout(&["classify", "110100"]), "1-irreducible\n");
}

#[test]
fn entropy_of_golden_word() {
    let text = stdout(&["entropy", "--seq", "(110)"]);
    let (lo, hi) = bounds(text.lines().next().unwrap());
    let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
    assert!(lo <= golden && golden <= hi && hi - lo < 1e-9);
}

#[test]
fn transitivity() {
    assert_eq!(stdout(&["transitive", "--seq", "(110)"]), "transitive: true\n");
    assert!(stdout(&["transitive", "--seq", "(1100)"]).starts_with("transitive: false"));
}

#[test]
fn special_bases() {
    let text = stdout(&["bases", "--n", "3"]);
    let names: Vec<&str> = text.lines().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(names, ["q_G", "q_KL", "q_T", "q_2'", "q_3'"]);
    let (kl, _) = bounds(text.lines().nth(1).unwrap());
    assert!((kl - 1.787231650182966).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["classify", "1100111"]).status.code(), Some(2));
    assert_eq!(run(&["compose", "10", "012"]).status.code(), Some(2));
    assert_eq!(run(&["alpha", "--q", "1.5", "--precision", "2^-2", "--n", "30"]).status.code(), Some(3));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn plateau_json_meta_comes_first() {
    let text = stdout(&["plateaus", "--max-len", "4", "--format", "json"]);
    let lines: Vec<&str> = text.lines().collect();
    let meta: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(meta["meta"]["records"], lines.len() as u64 - 1);
    let words: Vec<String> = lines[1..]
        .iter()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["word"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(words, ["10", "1100", "110", "1110"]);
}

#[test]
fn staircase_csv_and_determinism() {
    let args = ["staircase", "--steps", "3", "--format", "csv"];
    let first = stdout(&args);
    assert_eq!(first.lines().next(), Some("q_lo,q_hi,h_lo,h_hi,dim_lo,dim_hi,status"));
    assert_eq!(first.lines().count(), 5);
    assert!(first.lines().last().unwrap().starts_with("2.00000000000000000000,2.00000000000000000000"));
    assert_eq!(first, stdout(&args));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bases.txt");
    let printed = stdout(&["bases", "--n", "2"]);
    let out = run(&["--out", path.to_str().unwrap(), "bases", "--n", "2"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
}
