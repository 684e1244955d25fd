mod common;

use std::collections::BTreeSet;
use std::fs;

use common::*;
use molbench::pipeline::{ingest_dataset, make_splits};
use molbench::report::{sha256_hex, Manifest, ReportError, INCOMPLETE_MARKER, MANIFEST};

#[test]
fn fixture_embeds_seven_test_ligands() {
    // the seven ligands written into every alpha output all sit in split 0's test set
    let cfg = fixture_config();
    let d = ingest_dataset(&fixture("e2e/ligands.smi")).unwrap();
    assert_eq!(d.len(), 40);
    let splits = make_splits(&d, cfg.splits, cfg.ratio, cfg.seed).unwrap();
    let test0: BTreeSet<String> = splits.splits[0].test.iter().cloned().collect();
    let dataset: BTreeSet<String> = d.molecules.iter().cloned().collect();
    let out = fs::read_to_string(fixture("e2e/alpha/split0.smi")).unwrap();
    let embedded: BTreeSet<String> = out
        .lines()
        .filter_map(|l| molbench::chem::canonicalize(l).ok())
        .map(|c| c.text)
        .filter(|c| dataset.contains(c))
        .collect();
    assert_eq!(embedded.len(), 7);
    assert!(embedded.is_subset(&test0));
}

#[test]
fn bundle_is_reproducible_and_complete() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let s = run_fixture(a.path()).unwrap();
    run_fixture(b.path()).unwrap();
    let ta = tree(a.path());
    assert_eq!(ta, tree(b.path()));

    let alpha = s.room.reports.iter().find(|r| r.model == "alpha").unwrap();
    assert_eq!(alpha.total_recreated, 7);
    let beta = s.room.reports.iter().find(|r| r.model == "beta").unwrap();
    assert_eq!(beta.total_recreated, 3);

    // every output is listed with its hash; nothing else is left behind
    let manifest: Manifest = serde_json::from_slice(&ta[MANIFEST]).unwrap();
    assert_eq!(manifest.status, "complete");
    assert!(!ta.contains_key(INCOMPLETE_MARKER));
    let listed: BTreeSet<&str> = manifest.outputs.iter().map(|f| f.path.as_str()).collect();
    let present: BTreeSet<&str> = ta.keys().map(String::as_str).filter(|p| *p != MANIFEST).collect();
    assert_eq!(listed, present);
    for f in &manifest.outputs {
        assert_eq!(sha256_hex(&ta[&f.path]), f.sha256, "{}", f.path);
    }
    for name in ["room.json", "ranking.json", "metrics.json", "filtered/alpha.csv", "kde/svm/alpha.csv"] {
        assert!(ta.contains_key(name), "{name}");
    }
    let inputs: Vec<&str> = manifest.inputs.iter().map(|f| f.path.as_str()).collect();
    assert!(inputs.contains(&"ligands.smi") && inputs.contains(&"records.csv"));
}

#[test]
fn missing_model_file_names_model_and_stage() {
    let out = tempfile::tempdir().unwrap();
    let mut cfg = fixture_config();
    cfg.out_dir = out.path().to_path_buf();
    cfg.models.get_mut("beta").unwrap()[4] = "beta/nope.smi".into();
    let e = molbench::report::run_full_benchmark(&cfg).unwrap_err();
    let msg = e.to_string();
    assert!(matches!(e, ReportError::Config(_)), "{msg}");
    assert!(msg.contains("model beta") && msg.contains("config"), "{msg}");
    let marker = fs::read_to_string(out.path().join(INCOMPLETE_MARKER)).unwrap();
    assert!(marker.contains("model beta"));
}

#[test]
fn failing_stage_leaves_marker() {
    let dir = tempfile::tempdir().unwrap();
    // a dataset with one ligand cannot be split
    fs::write(dir.path().join("one.smi"), "CCO\n").unwrap();
    fs::write(dir.path().join("gen.smi"), "CCN\n").unwrap();
    let cfg_text = "dataset = \"one.smi\"\nsplits = 1\n[models.m]\noutputs = [\"gen.smi\"]\n";
    fs::write(dir.path().join("run.toml"), cfg_text).unwrap();
    let mut cfg = molbench::report::validate_config(&dir.path().join("run.toml")).unwrap();
    cfg.out_dir = dir.path().join("out");
    let e = molbench::report::run_full_benchmark(&cfg).unwrap_err();
    assert!(matches!(e, ReportError::Stage { stage: "split", .. }), "{e}");
    assert!(cfg.out_dir.join(INCOMPLETE_MARKER).exists());
    assert!(!cfg.out_dir.join(MANIFEST).exists());
}
