//! Reference dataset ingestion, train/test splits and filtering of
//! generated molecules.

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chem::io::parse_smiles_lines;
use crate::chem::{canonicalize, parse_and_sanitize, MolecularGraph};
use crate::cluster::{butina_cluster, ClusterError, ClusterSet, CutoffKind};
use crate::fingerprint::{
    default_fingerprint, max_similarity_to_set, mean_similarity_to_set, Fingerprint, FingerprintError,
};
use crate::rng::SeededRng;

pub const DEFAULT_SPLITS: usize = 10;
pub const DEFAULT_RATIO: f64 = 0.5;
pub const DEFAULT_TOP_K: usize = 400;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("dataset {0:?} has no valid molecules")]
    EmptyDataset(String),
    #[error("dataset has {0} molecules; at least 2 are needed to split")]
    TooSmall(usize),
    #[error("split ratio {0} leaves an empty train or test set")]
    BadRatio(f64),
    #[error("expected {expected} generated files (one per split), got {got}")]
    SplitMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Fingerprint(#[from] FingerprintError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn read_text(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

/// Curated reference ligands: valid, stereo-free, canonical, unique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LigandDataset {
    pub name: String,
    pub molecules: Vec<String>,
    pub provenance: String,
    /// Input lines dropped as invalid.
    pub invalid: usize,
    /// Valid input lines dropped as duplicates.
    pub duplicates: usize,
}

impl LigandDataset {
    pub fn len(&self) -> usize {
        self.molecules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.molecules.is_empty()
    }

    pub fn graphs(&self) -> Vec<MolecularGraph> {
        self.molecules
            .par_iter()
            .map(|s| parse_and_sanitize(s).expect("canonical SMILES re-parses"))
            .collect()
    }

    pub fn fingerprints(&self) -> Vec<Fingerprint> {
        self.molecules
            .par_iter()
            .map(|s| default_fingerprint(&parse_and_sanitize(s).expect("canonical SMILES re-parses")))
            .collect()
    }
}

/// Canonicalizes each SMILES in parallel; `None` for invalid entries.
pub fn canonicalize_all(smiles: &[String]) -> Vec<Option<String>> {
    smiles.par_iter().map(|s| canonicalize(s).ok().map(|c| c.text)).collect()
}

/// Builds a dataset from raw SMILES strings, keeping the first occurrence
/// of every canonical form.
pub fn dataset_from_smiles(name: &str, provenance: &str, smiles: &[String]) -> Result<LigandDataset, PipelineError> {
    let canonical = canonicalize_all(smiles);
    let mut seen = HashSet::new();
    let mut molecules = Vec::new();
    let (mut invalid, mut duplicates) = (0, 0);
    for c in canonical {
        match c {
            None => invalid += 1,
            Some(c) => {
                if seen.insert(c.clone()) {
                    molecules.push(c);
                } else {
                    duplicates += 1;
                }
            }
        }
    }
    if invalid > 0 {
        log::warn!("{name}: dropped {invalid} invalid SMILES");
    }
    if molecules.is_empty() {
        return Err(PipelineError::EmptyDataset(name.to_string()));
    }
    Ok(LigandDataset {
        name: name.to_string(),
        molecules,
        provenance: provenance.to_string(),
        invalid,
        duplicates,
    })
}

/// Reads a SMILES file into a curated dataset named after the file stem.
pub fn ingest_dataset(path: &Path) -> Result<LigandDataset, PipelineError> {
    let text = read_text(path)?;
    let smiles: Vec<String> = parse_smiles_lines(&text).into_iter().map(|r| r.smiles).collect();
    let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    dataset_from_smiles(name, &path.display().to_string(), &smiles)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<String>,
    pub test: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSet {
    pub seed: u64,
    pub ratio: f64,
    pub splits: Vec<Split>,
}

impl SplitSet {
    /// Every molecule that is in the training part of any split.
    pub fn training_union(&self) -> BTreeSet<String> {
        self.splits.iter().flat_map(|s| s.train.iter().cloned()).collect()
    }

    pub fn to_json(&self) -> Result<String, PipelineError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<SplitSet, PipelineError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `n` independent seeded shuffles of the dataset; the first
/// ⌊ratio·N⌋ molecules of each go to training, the rest to test.
/// Both halves are stored sorted.
pub fn make_splits(dataset: &LigandDataset, n: usize, ratio: f64, seed: u64) -> Result<SplitSet, PipelineError> {
    let size = dataset.len();
    if size < 2 {
        return Err(PipelineError::TooSmall(size));
    }
    let n_train = (ratio * size as f64 + 1e-9).floor();
    if !(1.0..size as f64).contains(&n_train) {
        return Err(PipelineError::BadRatio(ratio));
    }
    let n_train = n_train as usize;
    let mut rng = SeededRng::new(seed);
    let splits = (0..n)
        .map(|_| {
            let mut order: Vec<usize> = (0..size).collect();
            rng.shuffle(&mut order);
            let mut train: Vec<String> = order[..n_train].iter().map(|&i| dataset.molecules[i].clone()).collect();
            let mut test: Vec<String> = order[n_train..].iter().map(|&i| dataset.molecules[i].clone()).collect();
            train.sort();
            test.sort();
            Split { train, test }
        })
        .collect();
    Ok(SplitSet { seed, ratio, splits })
}

/// Centroid fingerprints of the dataset's Butina clusters, in cluster order.
pub fn centroid_fingerprints(
    dataset: &LigandDataset,
    cutoff: f64,
    kind: CutoffKind,
) -> Result<(Vec<Fingerprint>, ClusterSet), PipelineError> {
    let fps = dataset.fingerprints();
    let set = butina_cluster(&fps, kind.distance_threshold(cutoff))?;
    let centroids = set.clusters.iter().map(|c| fps[c.centroid].clone()).collect();
    Ok((centroids, set))
}

/// How a generated molecule is scored against the centroids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityAggregate {
    #[default]
    Max,
    Mean,
}

/// Molecule counts after each filtering step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct StepCounts {
    pub raw: usize,
    pub valid: usize,
    pub unique: usize,
    pub after_training_removal: usize,
    pub output: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredMolecule {
    pub smiles: String,
    pub similarity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredOutput {
    pub model: String,
    pub k: usize,
    pub molecules: Vec<ScoredMolecule>,
    pub counts: StepCounts,
    /// Fewer than `k` molecules survived.
    pub short: bool,
}

impl FilteredOutput {
    /// CSV with header `rank,canonical_smiles,similarity`; ranks start at 1.
    pub fn to_csv(&self) -> Result<String, PipelineError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["rank", "canonical_smiles", "similarity"])?;
        for (i, m) in self.molecules.iter().enumerate() {
            w.write_record([(i + 1).to_string(), m.smiles.clone(), format!("{:.6}", m.similarity)])?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
    }

    pub fn smiles(&self) -> Vec<String> {
        self.molecules.iter().map(|m| m.smiles.clone()).collect()
    }
}

/// Reads the molecules back from a filtered-output CSV.
pub fn read_filtered_csv(text: &str) -> Result<Vec<ScoredMolecule>, PipelineError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let similarity = rec.get(2).and_then(|s| s.parse().ok()).unwrap_or(f64::NAN);
        out.push(ScoredMolecule { smiles: rec.get(1).unwrap_or_default().to_string(), similarity });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PostprocessOptions {
    pub k: usize,
    pub aggregate: SimilarityAggregate,
}

impl Default for PostprocessOptions {
    fn default() -> Self {
        PostprocessOptions { k: DEFAULT_TOP_K, aggregate: SimilarityAggregate::Max }
    }
}

/// Full result of post-processing one model's outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Postprocessed {
    pub filtered: FilteredOutput,
    /// Valid canonical molecules generated for each split.
    pub per_split: Vec<BTreeSet<String>>,
    /// Valid unique molecules over all splits (before training removal).
    pub unique: BTreeSet<String>,
    /// Unique molecules that are in no training set.
    pub novel: BTreeSet<String>,
}

/// Filters one model's raw per-split outputs: pool all splits, drop
/// invalid SMILES, canonicalize, deduplicate, drop anything in any
/// training set, score against the centroids, sort by score (descending,
/// ties by SMILES) and keep the top `k`.
pub fn postprocess_generated(
    model: &str,
    raw_outputs: &[Vec<String>],
    splits: &SplitSet,
    centroids: &[Fingerprint],
    options: PostprocessOptions,
) -> Result<Postprocessed, PipelineError> {
    if raw_outputs.len() != splits.splits.len() {
        return Err(PipelineError::SplitMismatch { expected: splits.splits.len(), got: raw_outputs.len() });
    }
    let mut counts = StepCounts::default();
    let mut per_split = Vec::with_capacity(raw_outputs.len());
    for lines in raw_outputs {
        counts.raw += lines.len();
        let canonical = canonicalize_all(lines);
        let mut set = BTreeSet::new();
        for c in canonical.into_iter().flatten() {
            counts.valid += 1;
            set.insert(c);
        }
        per_split.push(set);
    }
    let unique: BTreeSet<String> = per_split.iter().flatten().cloned().collect();
    counts.unique = unique.len();
    let training = splits.training_union();
    let novel: BTreeSet<String> = unique.difference(&training).cloned().collect();
    counts.after_training_removal = novel.len();

    let candidates: Vec<&String> = novel.iter().collect();
    let scores: Vec<f64> = candidates
        .par_iter()
        .map(|s| {
            let fp = default_fingerprint(&parse_and_sanitize(s).expect("canonical SMILES re-parses"));
            match options.aggregate {
                SimilarityAggregate::Max => max_similarity_to_set(&fp, centroids).map(|(v, _)| v),
                SimilarityAggregate::Mean => mean_similarity_to_set(&fp, centroids),
            }
        })
        .collect::<Result<_, _>>()?;
    let mut scored: Vec<ScoredMolecule> = candidates
        .into_iter()
        .zip(scores)
        .map(|(s, similarity)| ScoredMolecule { smiles: s.clone(), similarity })
        .collect();
    scored.sort_by(|a, b| b.similarity.total_cmp(&a.similarity).then_with(|| a.smiles.cmp(&b.smiles)));
    let short = scored.len() < options.k;
    scored.truncate(options.k);
    counts.output = scored.len();
    if short {
        log::warn!("{model}: only {} molecules survive filtering (k = {})", scored.len(), options.k);
    }
    Ok(Postprocessed {
        filtered: FilteredOutput { model: model.to_string(), k: options.k, molecules: scored, counts, short },
        per_split,
        unique,
        novel,
    })
}

/// Reads one generated-output SMILES file per split.
pub fn read_split_outputs(paths: &[PathBuf]) -> Result<Vec<Vec<String>>, PipelineError> {
    paths
        .iter()
        .map(|p| Ok(parse_smiles_lines(&read_text(p)?).into_iter().map(|r| r.smiles).collect()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ingest_dedups_and_drops_invalid() {
        let d = dataset_from_smiles("t", "", &strings(&["CCO", "OCC", "C("])).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d.invalid, 1);
        assert_eq!(d.duplicates, 1);
        let d = dataset_from_smiles("t", "", &strings(&["C[C@H](N)O", "CC(N)O"])).unwrap();
        assert_eq!(d.len(), 1);
        assert!(matches!(dataset_from_smiles("t", "", &strings(&["C("])), Err(PipelineError::EmptyDataset(_))));
    }

    #[test]
    fn ingest_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("vdr.smi");
        fs::write(&p, "# ligands\nCCO a\n\nOCC b\nC(\n").unwrap();
        let d = ingest_dataset(&p).unwrap();
        assert_eq!(d.name, "vdr");
        assert_eq!(d.molecules, vec![canonicalize("CCO").unwrap().text]);
        assert!(ingest_dataset(&dir.path().join("missing.smi")).is_err());
    }

    fn toy(n: usize) -> LigandDataset {
        let smiles: Vec<String> = (1..=n).map(|k| "C".repeat(k)).collect();
        dataset_from_smiles("toy", "", &smiles).unwrap()
    }

    #[test]
    fn splits_partition_the_dataset() {
        let d = toy(5);
        let s = make_splits(&d, 10, 0.5, 42).unwrap();
        assert_eq!(s.splits.len(), 10);
        for sp in &s.splits {
            assert_eq!((sp.train.len(), sp.test.len()), (2, 3));
            let mut all: Vec<String> = sp.train.iter().chain(&sp.test).cloned().collect();
            all.sort();
            let mut want = d.molecules.clone();
            want.sort();
            assert_eq!(all, want);
        }
        assert_eq!(make_splits(&d, 10, 0.5, 42).unwrap(), s);
        assert_ne!(make_splits(&d, 10, 0.5, 43).unwrap(), s);
        assert!(matches!(make_splits(&toy(1), 10, 0.5, 1), Err(PipelineError::TooSmall(1))));
        assert!(matches!(make_splits(&d, 10, 0.0, 1), Err(PipelineError::BadRatio(_))));
    }

    #[test]
    fn split_json_round_trip() {
        let s = make_splits(&toy(6), 3, 0.5, 9).unwrap();
        assert_eq!(SplitSet::from_json(&s.to_json().unwrap()).unwrap(), s);
    }

    #[test]
    fn postprocess_steps() {
        let d = dataset_from_smiles(
            "d",
            "",
            &strings(&["c1ccccc1O", "c1ccccc1N", "CCCCCCO", "CC(=O)Nc1ccccc1", "c1ccncc1"]),
        )
        .unwrap();
        let splits = make_splits(&d, 2, 0.5, 3).unwrap();
        let (centroids, _) = centroid_fingerprints(&d, 0.4, CutoffKind::Distance).unwrap();
        let train = splits.training_union();
        let held_out: Vec<String> = d.molecules.iter().filter(|m| !train.contains(*m)).cloned().collect();
        let mut raw = vec![
            strings(&["C1=CC=CC=C1O", "xx(", "CCCCCCCl", "c1ccccc1C"]),
            strings(&["Cc1ccccc1", "c1ccccc1Cl"]),
        ];
        raw[1].extend(train.iter().cloned());
        raw[1].extend(held_out.iter().cloned());
        let out = postprocess_generated("m", &raw, &splits, &centroids, PostprocessOptions { k: 3, ..Default::default() })
            .unwrap();
        let c = out.filtered.counts;
        assert_eq!(c.raw, 6 + train.len() + held_out.len());
        assert_eq!(c.valid, c.raw - 1);
        assert!(c.raw >= c.valid && c.valid >= c.unique && c.unique >= c.after_training_removal && c.after_training_removal >= c.output);
        assert!(out.novel.is_disjoint(&train));
        assert_eq!(out.filtered.molecules.len(), 3);
        let sims: Vec<f64> = out.filtered.molecules.iter().map(|m| m.similarity).collect();
        assert!(sims.windows(2).all(|w| w[0] >= w[1]));
        let csv = out.filtered.to_csv().unwrap();
        assert!(csv.starts_with("rank,canonical_smiles,similarity\n1,"));
        assert_eq!(read_filtered_csv(&csv).unwrap().len(), 3);
        let err = postprocess_generated("m", &raw[..1], &splits, &centroids, PostprocessOptions::default());
        assert!(matches!(err, Err(PipelineError::SplitMismatch { expected: 2, got: 1 })));
    }

    #[test]
    fn only_training_molecules_leave_nothing() {
        let d = toy(6);
        let splits = make_splits(&d, 2, 0.5, 5).unwrap();
        let (centroids, _) = centroid_fingerprints(&d, 0.4, CutoffKind::Distance).unwrap();
        let train: Vec<String> = splits.training_union().into_iter().collect();
        let out = postprocess_generated("m", &[train.clone(), train], &splits, &centroids, PostprocessOptions::default())
            .unwrap();
        assert!(out.filtered.molecules.is_empty());
        assert!(out.filtered.short);
    }

    #[test]
    fn centroid_molecule_ranks_first() {
        let d = dataset_from_smiles("d", "", &strings(&["c1ccccc1O", "CCCCCCCCO", "C1CCNCC1"])).unwrap();
        let splits = SplitSet { seed: 0, ratio: 0.5, splits: vec![Split { train: vec![], test: d.molecules.clone() }] };
        let (centroids, _) = centroid_fingerprints(&d, 0.4, CutoffKind::Distance).unwrap();
        let raw = vec![strings(&["CCc1ccccc1", "Oc1ccccc1", "CCN"])];
        let out = postprocess_generated("m", &raw, &splits, &centroids, PostprocessOptions::default()).unwrap();
        assert_eq!(out.filtered.molecules[0].smiles, canonicalize("Oc1ccccc1").unwrap().text);
        assert_eq!(out.filtered.molecules[0].similarity, 1.0);
    }
}
