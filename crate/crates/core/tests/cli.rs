use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use svm_coreset::bench::{read_report, ReportFormat};
use svm_coreset::{dataset, synthetic};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_svm-coreset"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = run(args, dir);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str], dir: &Path) -> i32 {
    run(args, dir).status.code().unwrap()
}

/// A temp dir holding `raw.csv` (label in column 0, with header) and its
/// preprocessed form `pre.csv`.
fn workspace() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let raw = synthetic::two_gaussians(600, 4, 3).unwrap();
    dataset::write_csv(&raw, dir.path().join("raw.csv")).unwrap();
    let p = dir.path().to_path_buf();
    ok(&["preprocess", "raw.csv", "--header", "--out", "pre.csv"], &p);
    (dir, p)
}

#[test]
fn full_pipeline() {
    let (_guard, d) = workspace();
    assert!(d.join("pre.csv.meta.json").exists());
    let pre = dataset::load_preprocessed(d.join("pre.csv")).unwrap();
    assert_eq!((pre.len(), pre.dim()), (600, 4));

    ok(&["profile", "pre.csv", "--out", "prof.csv"], &d);
    let prof = std::fs::read_to_string(d.join("prof.csv")).unwrap();
    assert!(prof.starts_with("index,norm,gamma,prob\n"));
    assert_eq!(prof.lines().count(), 601);
    ok(&["profile", "pre.csv", "--format", "json", "--out", "prof.json"], &d);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("prof.json")).unwrap()).unwrap();
    assert_eq!(v["gamma"].as_array().unwrap().len(), 600);

    ok(&["coreset", "pre.csv", "--size", "80", "--seed", "3", "--out", "cs.csv"], &d);
    let cs = std::fs::read_to_string(d.join("cs.csv")).unwrap();
    assert!(cs.starts_with("weight,label,f1,f2,f3,f4\n"));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("cs.csv.meta.json")).unwrap()).unwrap();
    for key in ["seed", "method", "m", "distinct", "epsilon", "delta", "c", "t", "generator_id"] {
        assert!(meta.get(key).is_some(), "sidecar lacks {key}");
    }
    assert_eq!(meta["m"], 80);

    ok(&["train", "cs.csv", "--coreset", "--reg-c", "0.1", "--out", "small.json"], &d);
    ok(&["train", "pre.csv", "--reg-c", "0.1", "--out", "full.json"], &d);
    let model: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("small.json")).unwrap()).unwrap();
    for key in ["w", "C", "iterations_run", "final_objective", "config"] {
        assert!(model.get(key).is_some(), "model lacks {key}");
    }

    let eval = ok(&["eval", "pre.csv", "--model", "small.json", "--reference", "full.json"], &d);
    let v: serde_json::Value = serde_json::from_str(&eval).unwrap();
    assert!(v["rel_error"].as_f64().unwrap() >= 0.0);
    assert!(v["accuracy"].as_f64().unwrap() > 0.5);

    ok(&["stream", "pre.csv", "--size", "50", "--block-size", "100", "--out", "st.csv"], &d);
    let st = svm_coreset::coreset::read_coreset(d.join("st.csv")).unwrap();
    assert_eq!(st.source_n, 600);

    ok(&["coreset", "pre.csv", "--method", "uniform", "--size", "40", "--out", "u.csv"], &d);
    assert_eq!(svm_coreset::coreset::read_coreset(d.join("u.csv")).unwrap().len(), 40);
}

#[test]
fn coreset_is_reproducible_from_seed() {
    let (_guard, d) = workspace();
    ok(&["coreset", "pre.csv", "--size", "50", "--seed", "9", "--out", "a.csv"], &d);
    ok(&["coreset", "pre.csv", "--size", "50", "--seed", "9", "--out", "b.csv"], &d);
    ok(&["coreset", "pre.csv", "--size", "50", "--seed", "10", "--out", "c.csv"], &d);
    let read = |f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));
}

#[test]
fn bench_flags_override_config() {
    let (_guard, d) = workspace();
    std::fs::write(
        d.join("plan.toml"),
        "dataset = \"pre.csv\"\nformat = \"preprocessed\"\nC = 5.0\ntrials = 50\nsizes = [10, 20]\n",
    )
    .unwrap();
    ok(
        &[
            "bench", "--config", "plan.toml", "--trials", "2", "--size", "10,30,60", "--reg-c", "0.1", "--no-timing",
            "--records", "rec.csv", "--out", "r.csv",
        ],
        &d,
    );
    let rows = read_report(d.join("r.csv"), ReportFormat::Csv).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.trials == 2));
    assert_eq!(std::fs::read_to_string(d.join("rec.csv")).unwrap().lines().count(), 13);

    ok(&["bench", "--config", "plan.toml", "--trials", "1", "--method", "uniform", "--format", "json", "--out", "r.json"], &d);
    let rows = read_report(d.join("r.json"), ReportFormat::Json).unwrap();
    assert_eq!(rows.iter().map(|r| r.size).collect::<Vec<_>>(), [10, 20]);
}

#[test]
fn exit_codes() {
    let (_guard, d) = workspace();
    assert_eq!(code(&["--help"], &d), 0);
    assert_eq!(code(&["--version"], &d), 0);
    assert_eq!(code(&[], &d), 1);
    assert_eq!(code(&["bogus"], &d), 1);
    assert_eq!(code(&["coreset", "pre.csv", "--size", "x", "--out", "o.csv"], &d), 1);
    assert_eq!(code(&["coreset", "pre.csv"], &d), 1);
    assert_eq!(code(&["coreset", "pre.csv", "--epsilon", "2", "--out", "o.csv"], &d), 1);
    assert_eq!(code(&["train", "pre.csv", "--out", "m.json"], &d), 1);
    assert_eq!(code(&["bench", "--out", "r.csv"], &d), 1);
    assert_eq!(code(&["bench", "--reg-c", "1", "--size", "1,5", "--out", "r.csv"], &d), 1);

    assert_eq!(code(&["coreset", "missing.csv", "--out", "o.csv"], &d), 2);
    assert_eq!(code(&["profile", "raw.csv", "--out", "p.csv"], &d), 2);
    std::fs::write(d.join("bad.csv"), "1,2,1\n1,1\n").unwrap();
    assert_eq!(code(&["preprocess", "bad.csv", "--out", "x.csv"], &d), 2);
}

#[test]
fn libsvm_input() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let body: String = (0..30)
        .map(|i| format!("{} 1:{} 3:{}\n", if i % 2 == 0 { "+1" } else { "-1" }, i as f64 * 0.1, 1.0 - i as f64 * 0.02))
        .collect();
    std::fs::write(d.join("data.svm"), body).unwrap();
    ok(&["preprocess", "data.svm", "--input-format", "libsvm", "--bias", "--out", "pre.csv"], d);
    let pre = dataset::load_preprocessed(d.join("pre.csv")).unwrap();
    assert_eq!((pre.len(), pre.dim()), (30, 4));
}
