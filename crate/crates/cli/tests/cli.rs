use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
}

fn tscs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tscs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn sim_json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json", "sim"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&tscs(&full))).unwrap()
}

#[test]
fn sim_word_order_example() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.txt", "John loves Mary");
    let b = write(dir.path(), "b.txt", "Mary loves John");
    let v = sim_json(&[&a, &b]);
    assert_eq!(v["cosine"], 1.0);
    assert!((v["tss"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((v["tscs"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["lambda"], 3);

    let table = stdout(&tscs(&["sim", &a, &b]));
    assert!(table.contains("tscs    0.6667"), "{table}");
}

#[test]
fn sim_identity_and_alpha_endpoints() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.txt", "The court ruled on the appeal today.");
    let b = write(
        dir.path(),
        "b.txt",
        "Today the appeal was ruled on by the court.",
    );
    assert_eq!(sim_json(&[&a, &a])["tscs"], 1.0);
    assert_eq!(sim_json(&["--weighting", "tfidf", &a, &a])["tscs"], 1.0);

    let mid = sim_json(&[&a, &b]);
    let cos = sim_json(&["--alpha", "1", &a, &b]);
    let tss = sim_json(&["--alpha", "0", &a, &b]);
    assert_eq!(cos["tscs"], mid["cosine"]);
    assert_eq!(tss["tscs"], mid["tss"]);
}

#[test]
fn json_and_csv_agree() {
    let dir = TempDir::new().unwrap();
    let a = write(dir.path(), "a.txt", "stocks fell sharply as markets opened");
    let b = write(dir.path(), "b.txt", "markets opened and stocks fell");
    let json = sim_json(&[&a, &b]);
    let csv = stdout(&tscs(&["--format", "csv", "sim", &a, &b]));
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let values: Vec<&str> = lines.next().unwrap().split(',').collect();
    for key in ["cosine", "tss", "tscs", "lambda", "spatial_sum", "alpha"] {
        let at = header.iter().position(|h| *h == key).unwrap();
        let from_csv: f64 = values[at].parse().unwrap();
        assert_eq!(from_csv, json[key].as_f64().unwrap(), "{key}");
    }
}

#[test]
fn missing_file_exits_2() {
    let out = tscs(&["sim", "/no/such/a.txt", "/no/such/b.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/a.txt"));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(
        tscs(&["--alpha", "1.5", "sim", "a", "b"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tscs(&["--threshold", "-1", "sim", "a", "b"]).status.code(),
        Some(2)
    );
    assert_eq!(
        tscs(&["--weighting", "bm25", "sim", "a", "b"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(tscs(&["sim", "only-one"]).status.code(), Some(2));
}

#[test]
fn matrix_on_empty_directory_exits_2() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "notes.md", "not a text document");
    let out = tscs(&["matrix", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn matrix_csv_is_square_and_symmetric() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "b.txt", "rain fell on the river town");
    write(dir.path(), "a.txt", "the river flooded the town after rain");
    write(dir.path(), "c.txt", "parliament passed the budget");
    write(dir.path(), "skip.md", "ignored");
    let csv = stdout(&tscs(&[
        "--weighting",
        "tfidf",
        "matrix",
        dir.path().to_str().unwrap(),
    ]));
    let rows: Vec<Vec<&str>> = csv.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["id", "a.txt", "b.txt", "c.txt"]);
    assert_eq!(rows.len(), 4);
    for i in 1..4 {
        assert_eq!(rows[i].len(), 4);
        assert_eq!(rows[i][i], "1");
        for j in 1..4 {
            assert_eq!(rows[i][j], rows[j][i]);
        }
    }
}

#[test]
fn sweep_matches_mini_dataset() {
    let input = data("sts-mini/STS.input.mini.txt");
    let csv = stdout(&tscs(&["sweep-alpha", input.to_str().unwrap()]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("alpha,detected,total,rate"));
    let detected: Vec<usize> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(detected, [8, 9, 12, 14, 15, 16, 17, 17, 17, 18, 18]);

    let custom = stdout(&tscs(&[
        "sweep-alpha",
        "--alphas",
        "0,1",
        input.to_str().unwrap(),
    ]));
    assert_eq!(custom.lines().count(), 3);
}

#[test]
fn eval_paraphrase_writes_pairs_csv() {
    let dir = TempDir::new().unwrap();
    let pairs = dir.path().join("pairs.csv");
    let input = data("sts-mini/STS.input.mini.txt");
    let gold = data("sts-mini/STS.gold.mini.txt");
    let summary = stdout(&tscs(&[
        "eval-paraphrase",
        input.to_str().unwrap(),
        "--gold",
        gold.to_str().unwrap(),
        "--pairs-csv",
        pairs.to_str().unwrap(),
    ]));
    assert!(summary.starts_with("detected 16/20"), "{summary}");
    let written = fs::read_to_string(&pairs).unwrap();
    assert!(written.starts_with("id,cosine,tss,tscs,lambda,paraphrase,gold\n"));
    assert_eq!(written.lines().count(), 21);
}

#[test]
fn gold_cutoff_requires_gold() {
    let input = data("sts-mini/STS.input.mini.txt");
    let out = tscs(&[
        "eval-paraphrase",
        input.to_str().unwrap(),
        "--gold-cutoff",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sensitivity_csv_shape() {
    let seeds = data("sensitivity/seeds");
    let fillers = data("sensitivity/fillers");
    let csv = stdout(&tscs(&[
        "sensitivity",
        seeds.to_str().unwrap(),
        fillers.to_str().unwrap(),
        "--sizes",
        "4,10,40",
    ]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(
        lines[0],
        "corpus_size,tscs_set1,tscs_set2,cosine_set1,cosine_set2"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("40,"));
}

#[test]
fn sensitivity_rejects_misnamed_seeds() {
    let seeds = TempDir::new().unwrap();
    for name in ["set1_a.txt", "set1_b.txt", "set2_a.txt", "set2_c.txt"] {
        write(seeds.path(), name, "some seed text");
    }
    let fillers = data("sensitivity/fillers");
    let out = tscs(&[
        "sensitivity",
        seeds.path().to_str().unwrap(),
        fillers.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("set2_b.txt"));
}

#[test]
fn sensitivity_rejects_bad_sizes() {
    let seeds = data("sensitivity/seeds");
    let fillers = data("sensitivity/fillers");
    let out = tscs(&[
        "sensitivity",
        seeds.to_str().unwrap(),
        fillers.to_str().unwrap(),
        "--sizes",
        "3,10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = tscs(&[
        "sensitivity",
        seeds.to_str().unwrap(),
        fillers.to_str().unwrap(),
        "--sizes",
        "4,100",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
