use std::path::Path;
use std::process::{Command, Output};

const SMALL_RUN: &str = "\
# three walkers, just long enough for a couple of windows each
train_seconds = 12
val_seconds = 11
test_seconds = 11
calibration_seconds = 2
epochs = 2
";

fn mcl(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcl"))
        .args(args)
        .current_dir(cwd)
        .env("MCL_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let out = mcl(args, cwd);
    assert!(
        out.status.success(),
        "mcl {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn simulate_prepare_train_eval_inspect() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    std::fs::write(root.join("small.conf"), SMALL_RUN).unwrap();
    let common = ["--config", "small.conf", "--threads", "1", "--seed", "3"];
    let with = |extra: &[&'static str]| -> Vec<&str> { common.iter().copied().chain(extra.iter().copied()).collect() };

    ok(&with(&["--out-dir", "raw", "simulate"]), root);
    assert!(root.join("raw/manifest.csv").exists());
    assert!(root.join("raw/calibration.mdf").exists());
    assert!(root.join("raw/train_p0.mdf").exists());

    ok(&with(&["--data-dir", "raw", "--out-dir", "prep", "prepare", "--export-tds"]), root);
    for split in ["train", "val", "test"] {
        assert!(root.join(format!("prep/{split}.mcs")).exists(), "{split}.mcs");
        let features = std::fs::read_to_string(root.join(format!("prep/{split}_features.csv"))).unwrap();
        assert!(features.lines().count() > 1);
    }

    ok(&with(&["--data-dir", "prep", "--out-dir", "run_a", "train"]), root);
    ok(&with(&["--data-dir", "prep", "--out-dir", "run_b", "train"]), root);
    let log_a = std::fs::read(root.join("run_a/training_log.csv")).unwrap();
    let log_b = std::fs::read(root.join("run_b/training_log.csv")).unwrap();
    assert_eq!(log_a, log_b, "seeded single-thread runs must match byte for byte");
    let text = String::from_utf8(log_a).unwrap();
    assert!(text.starts_with("epoch,train_loss,train_acc,val_loss,val_acc"));
    assert_eq!(text.lines().count(), 3);
    assert_eq!(
        std::fs::read(root.join("run_a/best.mcl")).unwrap(),
        std::fs::read(root.join("run_b/best.mcl")).unwrap()
    );

    ok(&with(&["--data-dir", "prep", "--out-dir", "scores", "eval", "--checkpoint", "run_a/best.mcl"]), root);
    let metrics = std::fs::read_to_string(root.join("scores/metrics.txt")).unwrap();
    assert!(metrics.contains("split = test"));
    let confusion = std::fs::read_to_string(root.join("scores/confusion.csv")).unwrap();
    assert!(confusion.starts_with("true,pred_0,pred_1,pred_2"));

    let report = ok(&["inspect", "run_a/best.mcl"], root);
    assert!(report.contains("MCL1"));
    assert!(report.contains("classes = 3"));
    let report = ok(&["inspect", "prep/train.mcs"], root);
    assert!(report.contains("MCS1"));

    let report = ok(&["inspect", "raw/train_p1.mdf", "--pgm", "tds.pgm", "--csv", "tds.csv"], root);
    assert!(report.contains("MDF1"));
    let csv = std::fs::read_to_string(root.join("tds.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("time_s,"));
    let rows: Vec<&str> = lines.collect();
    // time column plus 205 Doppler cells
    assert!(rows.iter().all(|r| r.split(',').count() == 1 + 205));
    let pgm = std::fs::read(root.join("tds.pgm")).unwrap();
    let header = format!("P5\n205 {}\n255\n", rows.len());
    assert!(pgm.starts_with(header.as_bytes()), "PGM header");
    assert_eq!(pgm.len(), header.len() + 205 * rows.len());
}

#[test]
fn unknown_magic_fails_with_data_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("junk.bin"), b"NOPE and more bytes").unwrap();
    let out = mcl(&["inspect", "junk.bin"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("magic"));
}

#[test]
fn bad_config_fails_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.conf"), "learning_rate = fast\n").unwrap();
    let out = mcl(&["--config", "bad.conf", "simulate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_training_data_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = mcl(&["--data-dir", "nowhere", "train"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}
