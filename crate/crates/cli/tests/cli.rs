use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/e2e")
}

fn molbench(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_molbench"))
        .arg("--out-dir")
        .arg(out)
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn path(p: PathBuf) -> String {
    p.to_str().unwrap().to_string()
}

#[test]
fn prepare_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = molbench(dir.path(), &["prepare", "--dataset", &path(fixtures().join("ligands.smi"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "40 ligands, 0 invalid, 1 duplicates");
    let written = std::fs::read_to_string(dir.path().join("dataset.smi")).unwrap();
    assert_eq!(written.lines().count(), 40);
}

#[test]
fn split_then_room_recreates_seven() {
    let dir = tempfile::tempdir().unwrap();
    let ligands = path(fixtures().join("ligands.smi"));
    let o = molbench(dir.path(), &["--seed", "7", "split", "--dataset", &ligands]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let files: Vec<String> = (0..10).map(|i| path(fixtures().join(format!("alpha/split{i}.smi")))).collect();
    let spec = format!("alpha={}", files.join(","));
    let splits = path(dir.path().join("splits.json"));
    let o = molbench(dir.path(), &["room", "--dataset", &ligands, "--splits", &splits, "--model", &spec]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = String::from_utf8_lossy(&o.stdout);
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "total_recreated").unwrap();
    assert_eq!(row[col], "7");
    assert!(dir.path().join("room.json").exists());
}

#[test]
fn run_writes_a_complete_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let o = molbench(dir.path(), &["run", "--config", &path(fixtures().join("config.toml"))]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["run-manifest.json", "room.json", "ranking.json", "metrics.json", "svm-model.json"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    assert!(!dir.path().join("INCOMPLETE").exists());
}

#[test]
fn bad_input_exits_nonzero_with_stage() {
    let dir = tempfile::tempdir().unwrap();
    let o = molbench(dir.path(), &["prepare", "--dataset", "/nonexistent/ligands.smi"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("stage prepare"));
    let o = molbench(dir.path(), &["run", "--config", "/nonexistent/config.toml"]);
    assert!(!o.status.success());
}
