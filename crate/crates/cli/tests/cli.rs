use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use betweenness::{corpus, FinitePoset};

fn bwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bwt"))
        .args(args)
        .env_remove("BWT_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn classify_s1_reports_a7_failure() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s1.bst", &corpus::entry("s1").unwrap().text);
    let o = bwt(&["classify", "--json", &f]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema"], "bwt.classify/1");
    assert_eq!(doc["qt"], false);
    assert_eq!(doc["ibqt"], true);
    assert_eq!(doc["axioms"]["A7"]["holds"], false);
    assert_eq!(doc["axioms"]["A7"]["witness"], serde_json::json!(["1", "3", "5"]));
    assert_eq!(doc["axioms"]["A8"]["holds"], true);
}

#[test]
fn expectations_drive_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s1.bst", &corpus::entry("s1").unwrap().text);
    assert_eq!(
        bwt(&["classify", &f, "--expect", "qt=false,A7=fail"]).status.code(),
        Some(0)
    );
    let o = bwt(&["classify", &f, "--expect", "qt=true"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("expectation failed: qt=true"));
    assert_eq!(bwt(&["classify", &f, "--expect", "qt=maybe"]).status.code(), Some(2));
}

#[test]
fn u_is_excluded_from_ibo() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "u.bst", &corpus::entry("u").unwrap().text);
    let o = bwt(&["classify", "--json", &f]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["ibo"], "excluded");
}

#[test]
fn s8_witness_is_t8() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "s8.bst", &corpus::entry("s8").unwrap().text);
    let out = dir.path().join("w.pos");
    let map = dir.path().join("w.map");
    let o = bwt(&[
        "witness",
        &f,
        "--root",
        "0",
        "-o",
        out.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let got = FinitePoset::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    let t8 = corpus::t8();
    assert_eq!(got.len(), t8.len());
    assert_eq!(got.shape().unwrap(), t8.shape().unwrap());
    let map = fs::read_to_string(&map).unwrap();
    assert_eq!(map.lines().filter(|l| l.contains("->")).count(), 9);
}

#[test]
fn export_then_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = bwt(&["examples", "export", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert!(files.len() >= corpus::entries().len());
    let mut args = vec!["validate"];
    args.extend(files.iter().map(String::as_str));
    let v = bwt(&args);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
    assert!(!stdout(&v).contains("FAILED"));
}

#[test]
fn validate_flags_a_wrong_expectation() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!("# expect: ibqt=false\n{}", corpus::entry("s1").unwrap().text);
    let f = write(dir.path(), "bad.bst", &text);
    let o = bwt(&["validate", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAILED"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "broken.bst", "nodes a b\ntriple a b c\n");
    let o = bwt(&["classify", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(bwt(&["classify", "/no/such/file.bst"]).status.code(), Some(2));
    let g = write(dir.path(), "x.txt", "nodes a\n");
    assert_eq!(bwt(&["validate", &g]).status.code(), Some(2));
}

#[test]
fn oracle_finds_s1_and_rejects_s4() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = write(dir.path(), "s1.bst", &corpus::entry("s1").unwrap().text);
    let o = bwt(&["oracle", "ibqt", &s1, "--extra", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let tree = FinitePoset::parse(&stdout(&o)).unwrap();
    assert_eq!(tree.len(), 7);
    assert_eq!(bwt(&["oracle", "ibqt", &s1, "--extra", "0"]).status.code(), Some(1));
    let s4 = write(dir.path(), "s4.bst", &corpus::entry("s4").unwrap().text);
    assert_eq!(bwt(&["oracle", "ibqt", &s4, "--extra", "2"]).status.code(), Some(1));
    assert_eq!(
        bwt(&["oracle", "ibqt", &s4, "--max-candidates", "3"]).status.code(),
        Some(2)
    );
}

#[test]
fn implications_report_the_separating_example() {
    let o = bwt(&[
        "oracle",
        "implications",
        "--premises",
        "A1-A6",
        "--conclusion",
        "A8",
        "-n",
        "50",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["schema"], "bwt.implications/1");
    assert!(doc["violations"].as_u64().unwrap() > 0);
    let o = bwt(&[
        "oracle",
        "implications",
        "--premises",
        "A1-A7",
        "--conclusion",
        "A8",
        "-n",
        "50",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_bwt"))
            .args([
                "oracle",
                "implications",
                "--premises",
                "A1-A7",
                "--conclusion",
                "A8",
                "-n",
                "30",
                "--json",
            ])
            .env("BWT_SEED", seed)
            .output()
            .unwrap()
    };
    assert_eq!(stdout(&run("5")), stdout(&run("5")));
    assert_eq!(run("five").status.code(), Some(2));
}

#[test]
fn embed_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "t8.pos", &corpus::entry("t8").unwrap().text);
    let svg = dir.path().join("t8.svg");
    let o = bwt(&["embed", &f, "--alpha", "1/4", "--svg", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    assert_eq!(bwt(&["embed", &f, "--alpha", "3/2"]).status.code(), Some(2));
}

#[test]
fn betweenness_of_a_path_and_a_subset() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "p.pos", "nodes a b c d\ncover b a\ncover c b\ncover d c\n");
    let o = bwt(&["betweenness", &f]);
    let s = betweenness::BetweennessStructure::parse(&stdout(&o)).unwrap();
    assert_eq!(s.triple_count(), 4);
    let o = bwt(&["betweenness", &f, "--subset", "a,c,d"]);
    let s = betweenness::BetweennessStructure::parse(&stdout(&o)).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(s.triple_count(), 1);
}

#[test]
fn stdin_is_accepted() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_bwt"))
        .args(["structure", "-", "--parity"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(corpus::entry("t4").unwrap().text.as_bytes())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("even:"));
}
