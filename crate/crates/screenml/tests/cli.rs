//! End-to-end runs of the `screenml` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn screenml(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_screenml"))
        .current_dir(dir)
        .env("SCREENML_WORKERS", "2")
        .args(args)
        .output()
        .unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = screenml(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn generate(dir: &Path, n: &str, name: &str) {
    ok(dir, &["generate", "--n", n, "--seed", "3", "--out", name]);
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join(name)).unwrap()
}

fn jsonl(text: &str) -> Vec<Value> {
    text.lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn evaluate_writes_all_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "200", "c.jsonl");
    let stdout = ok(
        d,
        &[
            "evaluate",
            "--input",
            "c.jsonl",
            "--repeats",
            "6",
            "--out",
            "ev",
            "--emit",
            "md,csv,json",
        ],
    );
    assert_eq!(stdout.matches("## Confusion matrix:").count(), 4);
    assert!(stdout.contains("## Summary"));
    assert!(stdout.contains("## Unpaired t-test of F1 scores"));
    assert_eq!(stdout, read(d, "ev/tables.md"));
    for f in [
        "report.json",
        "plot_data.csv",
        "tables.csv",
        "tables.json",
        "manifest.json",
    ] {
        assert!(d.join("ev").join(f).exists(), "{f}");
    }
    let plot = read(d, "ev/plot_data.csv");
    assert!(plot.starts_with("algorithm,accuracy_mean,accuracy_std,f1_mean,f1_std\n"));
    assert!(plot.contains("\nnuclear,0."), "{plot}");
    let report: Value = serde_json::from_str(&read(d, "ev/report.json")).unwrap();
    assert_eq!(report["config"]["repeats"], 6);
    assert_eq!(report["split"]["test_size"], 40);
}

#[test]
fn nuclear_only_renders_na() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "100", "c.jsonl");
    let stdout = ok(
        d,
        &[
            "evaluate",
            "--input",
            "c.jsonl",
            "--repeats",
            "4",
            "--algorithms",
            "nuclear",
            "--out",
            "ev",
        ],
    );
    let row = stdout
        .lines()
        .find(|l| l.starts_with("| Nuclear |"))
        .unwrap();
    let cells: Vec<&str> = row.split('|').map(str::trim).collect();
    assert_eq!(cells[3], "N/A", "{row}");
}

#[test]
fn usage_errors_exit_nonzero_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "100", "c.jsonl");
    let out = screenml(
        d,
        &[
            "evaluate",
            "--input",
            "c.jsonl",
            "--repeats",
            "0",
            "--out",
            "ev",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--repeats"));
    assert!(!d.join("ev").exists());

    let out = screenml(d, &["generate", "--positive-rate", "0", "--out", "z.jsonl"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!d.join("z.jsonl").exists());

    let out = screenml(
        d,
        &[
            "evaluate",
            "--input",
            "c.jsonl",
            "--algorithms",
            "knn",
            "--out",
            "ev",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(screenml(d, &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_runs_remove_partial_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "100", "c.jsonl");
    // A directory where tables.md should go makes the last write fail after
    // report.json and plot_data.csv were already written.
    fs::create_dir_all(d.join("ev/tables.md")).unwrap();
    let out = screenml(
        d,
        &[
            "evaluate",
            "--input",
            "c.jsonl",
            "--repeats",
            "2",
            "--out",
            "ev",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(!d.join("ev/report.json").exists());
    assert!(!d.join("ev/plot_data.csv").exists());
    assert!(!d.join("ev/manifest.json").exists());
}

#[test]
fn malformed_corpus_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("bad.jsonl"),
        "{\"id\":\"a\",\"text\":\"x\",\"label\":1}\n{\"id\":\"b\",\"text\":\"y\",\"label\":3}\n",
    )
    .unwrap();
    let out = screenml(
        d,
        &[
            "evaluate",
            "--input",
            "bad.jsonl",
            "--repeats",
            "2",
            "--out",
            "ev",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.jsonl:2:"), "{err}");
}

#[test]
fn generate_defaults_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["generate", "--out", "a.jsonl"]);
    ok(d, &["generate", "--out", "b.jsonl"]);
    let a = read(d, "a.jsonl");
    assert_eq!(a, read(d, "b.jsonl"));
    let rows = jsonl(&a);
    assert_eq!(rows.len(), 2042);
    assert_eq!(rows.iter().filter(|r| r["label"] == 1).count(), 551);
    assert!(d.join("a.jsonl.manifest.json").exists());
    ok(d, &["generate", "--seed", "1", "--out", "c.jsonl"]);
    assert_ne!(a, read(d, "c.jsonl"));
}

#[test]
fn train_and_predict() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "300", "train.jsonl");
    ok(
        d,
        &[
            "train",
            "--input",
            "train.jsonl",
            "--algorithm",
            "svm",
            "--seed",
            "4",
            "--model-out",
            "svm.json",
        ],
    );
    ok(
        d,
        &[
            "train",
            "--input",
            "train.jsonl",
            "--algorithm",
            "svm",
            "--seed",
            "4",
            "--model-out",
            "svm2.json",
        ],
    );
    ok(
        d,
        &[
            "train",
            "--input",
            "train.jsonl",
            "--algorithm",
            "bayes",
            "--seed",
            "4",
            "--model-out",
            "nb.json",
        ],
    );
    assert_eq!(read(d, "svm.json"), read(d, "svm2.json"));
    assert_ne!(read(d, "svm.json"), read(d, "nb.json"));
    assert!(d.join("svm.json.manifest.json").exists());

    // Unlabeled input: one row per document, labels in {0, 1}.
    let unlabeled: String = jsonl(&read(d, "train.jsonl"))
        .iter()
        .take(100)
        .map(|r| {
            format!(
                "{}\n",
                serde_json::json!({"id": r["id"], "text": r["text"]})
            )
        })
        .collect();
    fs::write(d.join("new.jsonl"), unlabeled).unwrap();
    let stdout = ok(
        d,
        &[
            "predict",
            "--model",
            "svm.json",
            "--input",
            "new.jsonl",
            "--out",
            "p.jsonl",
        ],
    );
    assert!(stdout.starts_with("predicted_negative_fraction: "));
    assert!(!stdout.contains("confusion"));
    let rows = jsonl(&read(d, "p.jsonl"));
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r["label"] == 0 || r["label"] == 1));
    assert!(rows
        .iter()
        .all(|r| (r["score"].as_f64().unwrap() > 0.0) == (r["label"] == 1)));

    // Labeled input adds the confusion matrix and metrics.
    let stdout = ok(
        d,
        &[
            "predict",
            "--model",
            "nb.json",
            "--input",
            "train.jsonl",
            "--out",
            "q.jsonl",
        ],
    );
    assert!(stdout.contains("confusion (rows actual, columns predicted):"));
    assert!(stdout.contains("accuracy: "));
    assert!(jsonl(&read(d, "q.jsonl"))
        .iter()
        .all(|r| (0.0..=1.0).contains(&r["score"].as_f64().unwrap())));
}

#[test]
fn nuclear_model_screens_out_everything() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "50", "c.jsonl");
    ok(
        d,
        &[
            "train",
            "--input",
            "c.jsonl",
            "--algorithm",
            "nuclear",
            "--model-out",
            "n.json",
        ],
    );
    let bundle: Value = serde_json::from_str(&read(d, "n.json")).unwrap();
    assert_eq!(bundle["parameters"]["type"], "none");
    let stdout = ok(
        d,
        &[
            "predict", "--model", "n.json", "--input", "c.jsonl", "--out", "p.jsonl",
        ],
    );
    assert!(
        stdout.starts_with("predicted_negative_fraction: 1.0000 (50 of 50"),
        "{stdout}"
    );
}

#[test]
fn training_needs_both_classes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("one.jsonl"),
        "{\"id\":\"a\",\"text\":\"randomized trial\",\"label\":1}\n{\"id\":\"b\",\"text\":\"placebo trial\",\"label\":1}\n",
    )
    .unwrap();
    let out = screenml(
        d,
        &["train", "--input", "one.jsonl", "--model-out", "m.json"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(!d.join("m.json").exists());
}

#[test]
fn corrupted_bundle_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "60", "c.jsonl");
    ok(
        d,
        &[
            "train",
            "--input",
            "c.jsonl",
            "--algorithm",
            "bayes",
            "--model-out",
            "m.json",
        ],
    );
    let bumped = read(d, "m.json").replacen("\"version\":1,", "\"version\":99,", 1);
    fs::write(d.join("m.json"), bumped).unwrap();
    let out = screenml(
        d,
        &[
            "predict", "--model", "m.json", "--input", "c.jsonl", "--out", "p.jsonl",
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("version 99"));
    assert!(!d.join("p.jsonl").exists());
}

#[test]
fn csv_input_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "120", "c.jsonl");
    let mut csv = String::from("id,text,label\n");
    for r in jsonl(&read(d, "c.jsonl")) {
        csv.push_str(&format!(
            "{},\"{}\",{}\n",
            r["id"].as_str().unwrap(),
            r["text"].as_str().unwrap(),
            r["label"]
        ));
    }
    fs::write(d.join("c.csv"), csv).unwrap();
    fs::write(
        d.join("run.cfg"),
        "# small run\nrepeats = 3\nseed = 8\nalgorithms = basic,svm\n",
    )
    .unwrap();
    ok(
        d,
        &[
            "evaluate", "--input", "c.jsonl", "--config", "run.cfg", "--out", "a",
        ],
    );
    ok(
        d,
        &[
            "evaluate", "--input", "c.csv", "--config", "run.cfg", "--out", "b",
        ],
    );
    assert_eq!(read(d, "a/report.json"), read(d, "b/report.json"));
    let report: Value = serde_json::from_str(&read(d, "a/report.json")).unwrap();
    assert_eq!(report["config"]["repeats"], 3);
    assert_eq!(
        report["config"]["algorithms"],
        serde_json::json!(["basic", "svm"])
    );

    // Flags win over the file.
    ok(
        d,
        &[
            "evaluate",
            "--input",
            "c.jsonl",
            "--config",
            "run.cfg",
            "--repeats",
            "2",
            "--out",
            "c",
        ],
    );
    let report: Value = serde_json::from_str(&read(d, "c/report.json")).unwrap();
    assert_eq!(report["config"]["repeats"], 2);

    fs::write(d.join("bad.cfg"), "repeets = 3\n").unwrap();
    let out = screenml(
        d,
        &[
            "evaluate", "--input", "c.jsonl", "--config", "bad.cfg", "--out", "x",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn manifest_replay_reproduces_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "150", "c.jsonl");
    ok(
        d,
        &[
            "evaluate",
            "--input",
            "c.jsonl",
            "--repeats",
            "5",
            "--seed",
            "11",
            "--out",
            "ev",
            "--emit",
            "md,json",
        ],
    );
    let manifest: Value = serde_json::from_str(&read(d, "ev/manifest.json")).unwrap();
    assert_eq!(manifest["command"], "evaluate");
    assert_eq!(manifest["master_seed"], 11);
    assert!(manifest["input_digest"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 4);
    let before: Vec<String> = ["report.json", "tables.md", "tables.json", "plot_data.csv"]
        .iter()
        .map(|f| read(d, &format!("ev/{f}")))
        .collect();
    for f in ["report.json", "tables.md", "tables.json", "plot_data.csv"] {
        fs::remove_file(d.join("ev").join(f)).unwrap();
    }

    // Replay from another directory; relative paths resolve against the
    // recorded working directory.
    let elsewhere = tempfile::tempdir().unwrap();
    let manifest_path = d.join("ev/manifest.json");
    ok(
        elsewhere.path(),
        &["replay", "--manifest", manifest_path.to_str().unwrap()],
    );
    let after: Vec<String> = ["report.json", "tables.md", "tables.json", "plot_data.csv"]
        .iter()
        .map(|f| read(d, &format!("ev/{f}")))
        .collect();
    assert_eq!(before, after);
}

#[test]
fn worker_count_does_not_change_reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    generate(d, "150", "c.jsonl");
    let mut reports = Vec::new();
    for workers in ["1", "4", "7"] {
        let out = Command::new(env!("CARGO_BIN_EXE_screenml"))
            .current_dir(d)
            .env("SCREENML_WORKERS", workers)
            .args([
                "evaluate",
                "--input",
                "c.jsonl",
                "--repeats",
                "9",
                "--out",
                workers,
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        reports.push(read(d, &format!("{workers}/report.json")));
    }
    assert!(reports.windows(2).all(|w| w[0] == w[1]));
    let out = Command::new(env!("CARGO_BIN_EXE_screenml"))
        .current_dir(d)
        .env("SCREENML_WORKERS", "0")
        .args([
            "evaluate",
            "--input",
            "c.jsonl",
            "--repeats",
            "2",
            "--out",
            "z",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
