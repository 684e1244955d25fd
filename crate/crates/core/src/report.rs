//! Run configuration and the full benchmark run: curated ligands, splits,
//! post-processing of every model's outputs, recreation analysis, activity
//! scoring and ranking, distribution metrics and concordance, written as a
//! reproducible bundle with a hashed manifest.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::chem::{molecular_weight, parse_and_sanitize};
use crate::cluster::{CutoffKind, DEFAULT_CUTOFF};
use crate::dta::{
    concordance_index, ingest_external_scores, oversample_balance, prepare_target, rank_models, read_records,
    train_svm, ModalityRanking, ScoreTable, SvmModel, TrainOptions,
};
use crate::dta::scores::DEFAULT_TOP_FRACTION;
use crate::dta::svm::{DEFAULT_C_GRID, DEFAULT_FOLDS, MAX_ITERATIONS, TOLERANCE};
use crate::fingerprint::default_fingerprint;
use crate::metrics::{gaussian_kde, kde_csv, kde_grid, metrics_report, MetricsReport, DEFAULT_KDE_POINTS, DEFAULT_UNIQUE_K};
use crate::pipeline::{
    centroid_fingerprints, ingest_dataset, make_splits, postprocess_generated, read_split_outputs, PostprocessOptions,
    SimilarityAggregate, DEFAULT_RATIO, DEFAULT_SPLITS, DEFAULT_TOP_K,
};
use crate::room::{overlap_regions, room_csv, room_report, OverlapRegions, RoomReport};
use crate::stats::StdKind;

pub const MANIFEST: &str = "run-manifest.json";
pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";
pub const SVM_MODALITY: &str = "svm";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("{field}: {message}")]
    Range { field: String, message: String },
    #[error("{what}: file not found: {path}")]
    MissingFile { what: String, path: PathBuf },
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("config: {0}")]
    Config(#[from] ConfigError),
    #[error("stage {stage}: {message}")]
    Stage { stage: &'static str, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dataset: PathBuf,
    models: BTreeMap<String, RawModel>,
    seed: Option<u64>,
    k: Option<i64>,
    splits: Option<i64>,
    ratio: Option<f64>,
    cutoff: Option<f64>,
    cutoff_kind: Option<CutoffKind>,
    aggregate: Option<SimilarityAggregate>,
    c_grid: Option<Vec<f64>>,
    folds: Option<i64>,
    fraction: Option<f64>,
    std: Option<StdKind>,
    unique_k: Option<i64>,
    kde_points: Option<i64>,
    out_dir: Option<PathBuf>,
    svm: Option<RawSvm>,
    #[serde(default)]
    scores: Vec<ScoreSource>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    outputs: Vec<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSvm {
    records: PathBuf,
    target: String,
    variance_k: Option<f64>,
}

/// Activity classifier training data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SvmConfig {
    pub records: PathBuf,
    pub target: String,
    pub variance_k: f64,
}

/// An externally computed score file for one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScoreSource {
    pub model: String,
    pub modality: String,
    pub path: PathBuf,
    pub higher_is_better: bool,
}

/// Validated run configuration. Relative paths are resolved against the
/// config file's directory; the originals are kept for the manifest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub dataset: PathBuf,
    /// Per model, one generated-output file per split.
    pub models: BTreeMap<String, Vec<PathBuf>>,
    pub seed: u64,
    pub k: usize,
    pub splits: usize,
    pub ratio: f64,
    pub cutoff: f64,
    pub cutoff_kind: CutoffKind,
    pub aggregate: SimilarityAggregate,
    pub c_grid: Vec<f64>,
    pub folds: usize,
    pub fraction: f64,
    pub std: StdKind,
    pub unique_k: usize,
    pub kde_points: usize,
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub svm: Option<SvmConfig>,
    pub scores: Vec<ScoreSource>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn positive(field: &str, v: Option<i64>, default: usize) -> Result<usize, ConfigError> {
    match v {
        None => Ok(default),
        Some(x) if x >= 1 => Ok(x as usize),
        Some(x) => Err(ConfigError::Range { field: field.into(), message: format!("must be at least 1, got {x}") }),
    }
}

fn within(field: &str, v: Option<f64>, default: f64, ok: impl Fn(f64) -> bool, range: &str) -> Result<f64, ConfigError> {
    let x = v.unwrap_or(default);
    if ok(x) {
        Ok(x)
    } else {
        Err(ConfigError::Range { field: field.into(), message: format!("must be in {range}, got {x}") })
    }
}

impl RunConfig {
    /// Parses and range-checks a TOML config; does not touch the file system.
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<RunConfig, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        if raw.models.is_empty() {
            return Err(ConfigError::Range { field: "models".into(), message: "at least one model is required".into() });
        }
        let splits = positive("splits", raw.splits, DEFAULT_SPLITS)?;
        for (name, m) in &raw.models {
            if m.outputs.len() != splits {
                return Err(ConfigError::Range {
                    field: format!("models.{name}.outputs"),
                    message: format!("expected {splits} files (one per split), got {}", m.outputs.len()),
                });
            }
        }
        for (i, s) in raw.scores.iter().enumerate() {
            if !raw.models.contains_key(&s.model) {
                return Err(ConfigError::Range { field: format!("scores[{i}].model"), message: format!("unknown model {:?}", s.model) });
            }
            if s.modality == SVM_MODALITY {
                return Err(ConfigError::Range { field: format!("scores[{i}].modality"), message: "\"svm\" is reserved".into() });
            }
        }
        let c_grid = raw.c_grid.unwrap_or_else(|| DEFAULT_C_GRID.to_vec());
        if c_grid.is_empty() || c_grid.iter().any(|&c| !(c > 0.0 && c.is_finite())) {
            return Err(ConfigError::Range { field: "c_grid".into(), message: "needs positive finite values".into() });
        }
        let folds = positive("folds", raw.folds, DEFAULT_FOLDS)?;
        if folds < 2 {
            return Err(ConfigError::Range { field: "folds".into(), message: "must be at least 2".into() });
        }
        let svm = match raw.svm {
            None => None,
            Some(s) => Some(SvmConfig {
                records: s.records,
                target: s.target,
                variance_k: within("svm.variance_k", s.variance_k, 2.0, |x| x > 0.0, "(0, ∞]")?,
            }),
        };
        Ok(RunConfig {
            dataset: raw.dataset,
            models: raw.models.into_iter().map(|(k, m)| (k, m.outputs)).collect(),
            seed: raw.seed.unwrap_or(0),
            k: positive("k", raw.k, DEFAULT_TOP_K)?,
            splits,
            ratio: within("ratio", raw.ratio, DEFAULT_RATIO, |x| x > 0.0 && x < 1.0, "(0, 1)")?,
            cutoff: within("cutoff", raw.cutoff, DEFAULT_CUTOFF, |x| (0.0..=1.0).contains(&x), "[0, 1]")?,
            cutoff_kind: raw.cutoff_kind.unwrap_or_default(),
            aggregate: raw.aggregate.unwrap_or_default(),
            c_grid,
            folds,
            fraction: within("fraction", raw.fraction, DEFAULT_TOP_FRACTION, |x| x > 0.0 && x <= 1.0, "(0, 1]")?,
            std: raw.std.unwrap_or_default(),
            unique_k: positive("unique_k", raw.unique_k, DEFAULT_UNIQUE_K)?,
            kde_points: positive("kde_points", raw.kde_points, DEFAULT_KDE_POINTS)?,
            out_dir: raw.out_dir.unwrap_or_else(|| PathBuf::from("out")),
            svm,
            scores: raw.scores,
            base_dir: base_dir.to_path_buf(),
        })
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    /// Every input file with a description of what it is.
    pub fn inputs(&self) -> Vec<(String, &Path)> {
        let mut v = vec![("dataset".to_string(), self.dataset.as_path())];
        for (m, files) in &self.models {
            for (i, f) in files.iter().enumerate() {
                v.push((format!("model {m} split {i}"), f.as_path()));
            }
        }
        if let Some(s) = &self.svm {
            v.push(("svm records".to_string(), s.records.as_path()));
        }
        for s in &self.scores {
            v.push((format!("model {} {} scores", s.model, s.modality), s.path.as_path()));
        }
        v
    }

    pub fn check_files(&self) -> Result<(), ConfigError> {
        for (what, p) in self.inputs() {
            let full = self.resolve(p);
            if !full.is_file() {
                return Err(ConfigError::MissingFile { what, path: full });
            }
        }
        Ok(())
    }
}

/// Reads, parses, defaults and range-checks a config file, and checks that
/// every referenced input exists.
pub fn validate_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let cfg = RunConfig::from_toml(&text, &base)?;
    cfg.check_files()?;
    Ok(cfg)
}

fn write_number(out: &mut String, n: &serde_json::Number) {
    if n.is_f64() {
        out.push_str(&format!("{:.6}", n.as_f64().expect("f64 number")));
    } else {
        out.push_str(&n.to_string());
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Number(n) => write_number(out, n),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, item, indent + 2);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 2);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// Pretty JSON with every non-integer number printed to six decimals.
pub fn to_fixed_json<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub status: String,
    pub seed: u64,
    pub parameters: Value,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
}

/// Collects output files and their hashes as they are written.
struct Bundle {
    root: PathBuf,
    written: BTreeMap<String, String>,
}

impl Bundle {
    fn write(&mut self, rel: &str, text: &str) -> Result<(), ReportError> {
        let path = self.root.join(rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|source| ReportError::Io { path: dir.to_path_buf(), source })?;
        }
        fs::write(&path, text).map_err(|source| ReportError::Io { path: path.clone(), source })?;
        self.written.insert(rel.to_string(), sha256_hex(text.as_bytes()));
        Ok(())
    }

    fn json<T: Serialize>(&mut self, rel: &str, value: &T) -> Result<(), ReportError> {
        let text = to_fixed_json(value).map_err(|e| ReportError::Stage { stage: "report", message: e.to_string() })?;
        self.write(rel, &text)
    }
}

fn stage<T, E: std::fmt::Display>(name: &'static str, r: Result<T, E>) -> Result<T, ReportError> {
    r.map_err(|e| ReportError::Stage { stage: name, message: e.to_string() })
}

/// File-name-safe version of a model or modality name.
pub fn file_stem(name: &str) -> String {
    name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoomBundle {
    pub dataset_size: usize,
    pub reports: Vec<RoomReport>,
    pub overlap: Option<OverlapRegions>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcordanceEntry {
    pub model: String,
    pub x: String,
    pub y: String,
    pub common: usize,
    pub comparable_pairs: usize,
    pub normalized: f64,
    pub raw: f64,
}

/// What a completed run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSummary {
    pub room: RoomBundle,
    pub rankings: Vec<ModalityRanking>,
    pub metrics: Vec<MetricsReport>,
    pub concordance: Vec<ConcordanceEntry>,
    pub manifest: Manifest,
}

/// Runs every stage and writes the bundle to `config.out_dir`. While the
/// run is in progress (and after a failure) the directory holds an
/// `INCOMPLETE` marker naming the failed stage.
pub fn run_full_benchmark(config: &RunConfig) -> Result<BenchmarkSummary, ReportError> {
    let root = config.out_dir.clone();
    fs::create_dir_all(&root).map_err(|source| ReportError::Io { path: root.clone(), source })?;
    let marker = root.join(INCOMPLETE_MARKER);
    fs::write(&marker, "running\n").map_err(|source| ReportError::Io { path: marker.clone(), source })?;
    match run_stages(config, &root) {
        Ok(summary) => {
            fs::remove_file(&marker).map_err(|source| ReportError::Io { path: marker.clone(), source })?;
            Ok(summary)
        }
        Err(e) => {
            let _ = fs::write(&marker, format!("{e}\n"));
            Err(e)
        }
    }
}

fn run_stages(config: &RunConfig, root: &Path) -> Result<BenchmarkSummary, ReportError> {
    config.check_files()?;
    let mut bundle = Bundle { root: root.to_path_buf(), written: BTreeMap::new() };

    // prepare
    let dataset = stage("prepare", ingest_dataset(&config.resolve(&config.dataset)))?;
    log::info!("prepare: {} ligands ({} invalid, {} duplicates)", dataset.len(), dataset.invalid, dataset.duplicates);
    bundle.write("dataset.smi", &(dataset.molecules.join("\n") + "\n"))?;

    // split
    let splits = stage("split", make_splits(&dataset, config.splits, config.ratio, config.seed))?;
    bundle.write("splits.json", &stage("split", splits.to_json())?)?;
    let (centroids, clusters) = stage("split", centroid_fingerprints(&dataset, config.cutoff, config.cutoff_kind))?;
    log::info!("split: {} splits, {} clusters", splits.splits.len(), clusters.len());
    bundle.json("clusters.json", &clusters)?;

    // postprocess
    let options = PostprocessOptions { k: config.k, aggregate: config.aggregate };
    let mut processed = BTreeMap::new();
    let mut raw_by_model = BTreeMap::new();
    for (model, files) in &config.models {
        let paths: Vec<PathBuf> = files.iter().map(|f| config.resolve(f)).collect();
        let raw = read_split_outputs(&paths).map_err(|e| ReportError::Stage {
            stage: "postprocess",
            message: format!("model {model}: {e}"),
        })?;
        let p = postprocess_generated(model, &raw, &splits, &centroids, options).map_err(|e| ReportError::Stage {
            stage: "postprocess",
            message: format!("model {model}: {e}"),
        })?;
        bundle.write(&format!("filtered/{}.csv", file_stem(model)), &stage("postprocess", p.filtered.to_csv())?)?;
        raw_by_model.insert(model.clone(), raw.into_iter().flatten().collect::<Vec<String>>());
        processed.insert(model.clone(), p);
    }

    // room
    let test_sets: Vec<BTreeSet<String>> = splits.splits.iter().map(|s| s.test.iter().cloned().collect()).collect();
    let mut reports = Vec::new();
    let mut recreated = BTreeMap::new();
    for (model, p) in &processed {
        let r = stage("room", room_report(model, &p.per_split, &test_sets, p.unique.len(), dataset.len(), config.std))?;
        recreated.insert(model.clone(), r.recreated.iter().cloned().collect::<BTreeSet<String>>());
        reports.push(r);
    }
    let overlap = if recreated.len() >= 2 { Some(stage("room", overlap_regions(&recreated))?) } else { None };
    let room = RoomBundle { dataset_size: dataset.len(), reports, overlap };
    bundle.json("room.json", &room)?;
    bundle.write("room.csv", &room_csv(&room.reports))?;

    // dta: score each model's filtered molecules
    let mut tables: BTreeMap<String, BTreeMap<String, ScoreTable>> = BTreeMap::new();
    if let Some(svm) = &config.svm {
        let model = train_activity_model(config, svm)?;
        bundle.write("svm-model.json", &stage("dta", model.to_json())?)?;
        for (name, p) in &processed {
            let mut t = ScoreTable::new(SVM_MODALITY, true);
            for m in &p.filtered.molecules {
                let g = stage("dta", parse_and_sanitize(&m.smiles))?;
                t.scores.insert(m.smiles.clone(), model.probability(&default_fingerprint(&g)));
            }
            tables.entry(SVM_MODALITY.to_string()).or_default().insert(name.clone(), t);
        }
    }
    for src in &config.scores {
        let text = fs::read_to_string(config.resolve(&src.path))
            .map_err(|source| ReportError::Io { path: config.resolve(&src.path), source })?;
        let table = ingest_external_scores(&text, &src.modality, src.higher_is_better).map_err(|e| ReportError::Stage {
            stage: "dta",
            message: format!("{} scores for model {}: {e}", src.modality, src.model),
        })?;
        let keep: Vec<String> = processed[&src.model].filtered.smiles();
        let restricted = table.restricted_to(&keep);
        if restricted.len() < keep.len() {
            log::warn!("{} scores for {}: {} of {} filtered molecules scored", src.modality, src.model, restricted.len(), keep.len());
        }
        tables.entry(src.modality.clone()).or_default().insert(src.model.clone(), restricted);
    }
    for (modality, per_model) in &tables {
        for (model, t) in per_model {
            bundle.write(&format!("scores/{}/{}.csv", file_stem(modality), file_stem(model)), &t.to_csv())?;
        }
    }
    let mut rankings = Vec::new();
    for per_model in tables.values() {
        if per_model.len() >= 2 {
            rankings.push(stage("rank", rank_models(per_model, config.fraction))?);
        }
    }
    bundle.json("ranking.json", &rankings)?;

    // metrics
    let training = splits.training_union();
    let mut metrics = Vec::new();
    for (model, raw) in &raw_by_model {
        let r = metrics_report(model, raw, &training, &dataset.molecules, config.unique_k).map_err(|e| ReportError::Stage {
            stage: "metrics",
            message: format!("model {model}: {e}"),
        })?;
        metrics.push(r);
    }
    bundle.json("metrics.json", &metrics)?;
    let mut curves: BTreeMap<String, BTreeMap<String, Vec<f64>>> = BTreeMap::new();
    for (model, p) in &processed {
        let mw: Vec<f64> = p
            .filtered
            .molecules
            .iter()
            .filter_map(|m| parse_and_sanitize(&m.smiles).ok())
            .map(|g| molecular_weight(&g))
            .collect();
        curves.entry("molecular_weight".into()).or_default().insert(model.clone(), mw);
    }
    for (modality, per_model) in &tables {
        for (model, t) in per_model {
            curves.entry(modality.clone()).or_default().insert(model.clone(), t.scores.values().copied().collect());
        }
    }
    for (modality, per_model) in &curves {
        for (model, samples) in per_model {
            match kde_grid(samples, config.kde_points).and_then(|g| gaussian_kde(samples, &g).map(|d| (g, d))) {
                Ok((grid, density)) => bundle.write(
                    &format!("kde/{}/{}.csv", file_stem(modality), file_stem(model)),
                    &kde_csv(&grid, &density),
                )?,
                Err(e) => log::warn!("kde {modality}/{model}: {e}"),
            }
        }
    }

    // concordance between every pair of modalities, per model
    let mut concordance = Vec::new();
    let modalities: Vec<&String> = tables.keys().collect();
    for (i, x) in modalities.iter().enumerate() {
        for y in &modalities[i + 1..] {
            for (model, tx) in &tables[*x] {
                let Some(ty) = tables[*y].get(model) else { continue };
                match concordance_index(tx, ty) {
                    Ok(c) => concordance.push(ConcordanceEntry {
                        model: model.clone(),
                        x: (*x).clone(),
                        y: (*y).clone(),
                        common: c.common,
                        comparable_pairs: c.comparable_pairs,
                        normalized: c.normalized,
                        raw: c.raw,
                    }),
                    Err(e) => log::warn!("concordance {x}/{y} for {model}: {e}"),
                }
            }
        }
    }
    bundle.json("concordance.json", &concordance)?;

    // manifest
    let mut inputs = Vec::new();
    for (_, p) in config.inputs() {
        let full = config.resolve(p);
        let bytes = fs::read(&full).map_err(|source| ReportError::Io { path: full.clone(), source })?;
        inputs.push(FileHash { path: p.display().to_string(), sha256: sha256_hex(&bytes) });
    }
    let outputs = bundle.written.iter().map(|(p, h)| FileHash { path: p.clone(), sha256: h.clone() }).collect();
    let manifest = Manifest {
        status: "complete".into(),
        seed: config.seed,
        parameters: stage("report", serde_json::to_value(config))?,
        inputs,
        outputs,
    };
    let text = stage("report", to_fixed_json(&manifest))?;
    fs::write(root.join(MANIFEST), text).map_err(|source| ReportError::Io { path: root.join(MANIFEST), source })?;
    Ok(BenchmarkSummary { room, rankings, metrics, concordance, manifest })
}

/// Trains the activity classifier on the configured records.
pub fn train_activity_model(config: &RunConfig, svm: &SvmConfig) -> Result<SvmModel, ReportError> {
    let path = config.resolve(&svm.records);
    let text = fs::read_to_string(&path).map_err(|source| ReportError::Io { path: path.clone(), source })?;
    let records = stage("dta", read_records(&text))?;
    let labeled = stage("dta", prepare_target(&records.records, &svm.target, svm.variance_k))?;
    let labels: Vec<bool> = labeled.iter().map(|m| m.active).collect();
    let order = stage("dta", oversample_balance(&labels, config.seed))?;
    let mut x = Vec::with_capacity(order.len());
    let mut y = Vec::with_capacity(order.len());
    for i in order {
        let g = stage("dta", parse_and_sanitize(&labeled[i].smiles))?;
        x.push(default_fingerprint(&g));
        y.push(labels[i]);
    }
    let options = TrainOptions {
        c_grid: config.c_grid.clone(),
        folds: config.folds,
        seed: config.seed,
        tolerance: TOLERANCE,
        max_iterations: MAX_ITERATIONS,
    };
    stage("dta", train_svm(&x, &y, &options))
}
