use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use molbench::chem::parse_and_sanitize;
use molbench::cluster::{CutoffKind, DEFAULT_CUTOFF};
use molbench::dta::scores::DEFAULT_TOP_FRACTION;
use molbench::dta::svm::{DEFAULT_C_GRID, DEFAULT_FOLDS, MAX_ITERATIONS, TOLERANCE};
use molbench::dta::{
    concordance_index, ingest_external_scores, oversample_balance, prepare_target, rank_models, read_records,
    train_svm, ScoreTable, SvmModel, TrainOptions,
};
use molbench::fingerprint::default_fingerprint;
use molbench::metrics::{gaussian_kde, kde_csv, kde_grid, metrics_report, DEFAULT_KDE_POINTS, DEFAULT_UNIQUE_K};
use molbench::pipeline::{
    centroid_fingerprints, ingest_dataset, make_splits, postprocess_generated, read_filtered_csv, read_split_outputs,
    PostprocessOptions, SimilarityAggregate, SplitSet, DEFAULT_RATIO, DEFAULT_SPLITS, DEFAULT_TOP_K,
};
use molbench::report::{file_stem, run_full_benchmark, to_fixed_json, validate_config};
use molbench::room::{overlap_regions, room_csv, room_report};
use molbench::stats::StdKind;

#[derive(Parser)]
#[command(name = "molbench", version, about = "Benchmark molecular generative models against known ligands")]
struct Cli {
    /// Seed for splits, oversampling and cross-validation.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory that receives all outputs.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Curate a ligand file: validate, canonicalize, deduplicate.
    Prepare {
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Random train/test splits plus Butina clusters of the ligands.
    Split {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SPLITS)]
        splits: usize,
        #[arg(long, default_value_t = DEFAULT_RATIO)]
        ratio: f64,
        #[command(flatten)]
        cluster: ClusterArgs,
    },
    /// Filter one model's per-split outputs down to the top k.
    Postprocess {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        splits: PathBuf,
        #[arg(long)]
        model: String,
        /// One generated SMILES file per split, in split order.
        #[arg(long, num_args = 1.., required = true)]
        outputs: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TOP_K)]
        k: usize,
        #[arg(long, value_enum, default_value_t = Aggregate::Max)]
        aggregate: Aggregate,
        #[command(flatten)]
        cluster: ClusterArgs,
    },
    /// Recreation of held-out ligands for one or more models.
    Room {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        splits: PathBuf,
        /// NAME=split0.smi,split1.smi,… (repeatable)
        #[arg(long = "model", required = true)]
        models: Vec<String>,
        /// Use the n − 1 denominator for standard deviations.
        #[arg(long)]
        sample_std: bool,
    },
    /// Activity classifier and score tables.
    Dta {
        #[command(subcommand)]
        command: DtaCommand,
    },
    /// Distribution metrics of one model's raw output.
    Metrics {
        #[arg(long)]
        model: String,
        /// Raw generated SMILES files (pooled).
        #[arg(long, num_args = 1.., required = true)]
        generated: Vec<PathBuf>,
        /// Reference (test) ligands.
        #[arg(long)]
        test: PathBuf,
        /// Training ligands, for novelty.
        #[arg(long)]
        training: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_UNIQUE_K)]
        unique_k: usize,
    },
    /// Full benchmark from a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum DtaCommand {
    /// Train the RBF SVM on binding records for one target.
    Train {
        #[arg(long)]
        records: PathBuf,
        #[arg(long)]
        target: String,
        /// Drop pairs whose spread exceeds this many global standard deviations.
        #[arg(long, default_value_t = 2.0)]
        variance_k: f64,
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_C_GRID)]
        c_grid: Vec<f64>,
        #[arg(long, default_value_t = DEFAULT_FOLDS)]
        folds: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score a filtered-output CSV with a trained model.
    Score {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank models by the mean of their best-scoring fraction.
    Rank {
        /// NAME=scores.csv (repeatable)
        #[arg(long = "table", required = true)]
        tables: Vec<String>,
        #[arg(long, default_value = "score")]
        modality: String,
        #[arg(long)]
        lower_is_better: bool,
        #[arg(long, default_value_t = DEFAULT_TOP_FRACTION)]
        fraction: f64,
    },
    /// Concordance index between two score tables.
    Concordance {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        x_lower_is_better: bool,
        #[arg(long)]
        y_lower_is_better: bool,
    },
}

#[derive(Args)]
struct ClusterArgs {
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: f64,
    /// Read the cutoff as a similarity instead of a distance.
    #[arg(long)]
    similarity_cutoff: bool,
}

impl ClusterArgs {
    fn kind(&self) -> CutoffKind {
        if self.similarity_cutoff {
            CutoffKind::Similarity
        } else {
            CutoffKind::Distance
        }
    }
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Aggregate {
    Max,
    Mean,
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn named_list(spec: &str) -> Result<(String, Vec<PathBuf>)> {
    let (name, files) = spec.split_once('=').ok_or_else(|| anyhow!("expected NAME=FILE[,FILE…], got {spec:?}"))?;
    Ok((name.to_string(), files.split(',').map(PathBuf::from).collect()))
}

fn smiles_set(path: &Path) -> Result<Vec<String>> {
    Ok(read(path)?
        .lines()
        .filter_map(|l| l.split_whitespace().next())
        .map(str::to_string)
        .collect())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or(0);
    let out = cli.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    match cli.command {
        Command::Prepare { dataset } => {
            let d = ingest_dataset(&dataset).context("stage prepare")?;
            write(&out, "dataset.smi", &(d.molecules.join("\n") + "\n"))?;
            println!("{} ligands, {} invalid, {} duplicates", d.len(), d.invalid, d.duplicates);
        }
        Command::Split { dataset, splits, ratio, cluster } => {
            let d = ingest_dataset(&dataset).context("stage split")?;
            let s = make_splits(&d, splits, ratio, seed).context("stage split")?;
            write(&out, "splits.json", &s.to_json()?)?;
            let (_, clusters) = centroid_fingerprints(&d, cluster.cutoff, cluster.kind()).context("stage split")?;
            write(&out, "clusters.json", &to_fixed_json(&clusters)?)?;
        }
        Command::Postprocess { dataset, splits, model, outputs, k, aggregate, cluster } => {
            let d = ingest_dataset(&dataset).context("stage postprocess")?;
            let s = SplitSet::from_json(&read(&splits)?).context("stage postprocess")?;
            let (centroids, _) = centroid_fingerprints(&d, cluster.cutoff, cluster.kind()).context("stage postprocess")?;
            let raw = read_split_outputs(&outputs).with_context(|| format!("stage postprocess: model {model}"))?;
            let aggregate = match aggregate {
                Aggregate::Max => SimilarityAggregate::Max,
                Aggregate::Mean => SimilarityAggregate::Mean,
            };
            let p = postprocess_generated(&model, &raw, &s, &centroids, PostprocessOptions { k, aggregate })
                .with_context(|| format!("stage postprocess: model {model}"))?;
            write(&out, &format!("filtered/{}.csv", file_stem(&model)), &p.filtered.to_csv()?)?;
            println!("{}", to_fixed_json(&p.filtered.counts)?.trim_end());
        }
        Command::Room { dataset, splits, models, sample_std } => {
            let d = ingest_dataset(&dataset).context("stage room")?;
            let s = SplitSet::from_json(&read(&splits)?).context("stage room")?;
            let (centroids, _) = centroid_fingerprints(&d, DEFAULT_CUTOFF, CutoffKind::Distance).context("stage room")?;
            let tests: Vec<_> = s.splits.iter().map(|x| x.test.iter().cloned().collect()).collect();
            let std = if sample_std { StdKind::Sample } else { StdKind::Population };
            let mut reports = Vec::new();
            let mut recreated = BTreeMap::new();
            for spec in &models {
                let (name, files) = named_list(spec)?;
                let raw = read_split_outputs(&files).with_context(|| format!("stage room: model {name}"))?;
                let p = postprocess_generated(&name, &raw, &s, &centroids, PostprocessOptions::default())
                    .with_context(|| format!("stage room: model {name}"))?;
                let r = room_report(&name, &p.per_split, &tests, p.unique.len(), d.len(), std)
                    .with_context(|| format!("stage room: model {name}"))?;
                recreated.insert(name, r.recreated.iter().cloned().collect());
                reports.push(r);
            }
            write(&out, "room.json", &to_fixed_json(&reports)?)?;
            write(&out, "room.csv", &room_csv(&reports))?;
            if recreated.len() >= 2 {
                write(&out, "room-overlap.json", &to_fixed_json(&overlap_regions(&recreated)?)?)?;
            }
            print!("{}", room_csv(&reports));
        }
        Command::Dta { command } => dta(command, seed, &out)?,
        Command::Metrics { model, generated, test, training, unique_k } => {
            let mut raw = Vec::new();
            for g in &generated {
                raw.extend(smiles_set(g)?);
            }
            let test = smiles_set(&test)?;
            let training = match training {
                Some(p) => smiles_set(&p)?
                    .iter()
                    .filter_map(|s| molbench::chem::canonicalize(s).ok().map(|c| c.text))
                    .collect(),
                None => Default::default(),
            };
            let r = metrics_report(&model, &raw, &training, &test, unique_k).context("stage metrics")?;
            write(&out, &format!("metrics/{}.json", file_stem(&model)), &to_fixed_json(&r)?)?;
            let mw = molbench::metrics::molecular_weights(&raw);
            match kde_grid(&mw, DEFAULT_KDE_POINTS).and_then(|g| gaussian_kde(&mw, &g).map(|d| (g, d))) {
                Ok((g, d)) => write(&out, &format!("kde/molecular_weight/{}.csv", file_stem(&model)), &kde_csv(&g, &d))?,
                Err(e) => log::warn!("no density curve: {e}"),
            }
            print!("{}", to_fixed_json(&r)?);
        }
        Command::Run { config } => {
            let mut cfg = validate_config(&config).context("stage config")?;
            if let Some(s) = cli.seed {
                cfg.seed = s;
            }
            if let Some(o) = cli.out_dir {
                cfg.out_dir = o;
            } else {
                cfg.out_dir = cfg.resolve(&cfg.out_dir);
            }
            let summary = run_full_benchmark(&cfg)?;
            print!("{}", room_csv(&summary.room.reports));
            log::info!("bundle written to {}", cfg.out_dir.display());
        }
    }
    Ok(())
}

fn dta(command: DtaCommand, seed: u64, out: &Path) -> Result<()> {
    match command {
        DtaCommand::Train { records, target, variance_k, c_grid, folds, out: model_out } => {
            let set = read_records(&read(&records)?).context("stage dta")?;
            if set.skipped_invalid > 0 {
                log::warn!("skipped {} records with invalid SMILES", set.skipped_invalid);
            }
            let labeled = prepare_target(&set.records, &target, variance_k).context("stage dta")?;
            let labels: Vec<bool> = labeled.iter().map(|m| m.active).collect();
            let order = oversample_balance(&labels, seed).context("stage dta")?;
            let mut x = Vec::new();
            let mut y = Vec::new();
            for i in order {
                x.push(default_fingerprint(&parse_and_sanitize(&labeled[i].smiles)?));
                y.push(labels[i]);
            }
            let options = TrainOptions { c_grid, folds, seed, tolerance: TOLERANCE, max_iterations: MAX_ITERATIONS };
            let model = train_svm(&x, &y, &options).context("stage dta")?;
            let path = model_out.unwrap_or_else(|| out.join("svm-model.json"));
            write(Path::new(""), path.to_str().ok_or_else(|| anyhow!("non-UTF-8 path"))?, &model.to_json()?)?;
            for r in &model.summary.grid {
                println!("C = {}: mean CV accuracy {:.4}, fold F1 {:?}", r.c, r.mean_accuracy, r.fold_f1);
            }
            println!("selected C = {}, training accuracy {:.4}", model.c, model.summary.training_accuracy);
        }
        DtaCommand::Score { model, input, out: scores_out } => {
            let m = SvmModel::from_json(&read(&model)?).context("stage dta")?;
            let mut t = ScoreTable::new("svm", true);
            for row in read_filtered_csv(&read(&input)?).context("stage dta")? {
                let g = parse_and_sanitize(&row.smiles).with_context(|| format!("stage dta: {}", row.smiles))?;
                t.scores.insert(row.smiles, m.probability(&default_fingerprint(&g)));
            }
            match scores_out {
                Some(p) => write(Path::new(""), p.to_str().ok_or_else(|| anyhow!("non-UTF-8 path"))?, &t.to_csv())?,
                None => print!("{}", t.to_csv()),
            }
        }
        DtaCommand::Rank { tables, modality, lower_is_better, fraction } => {
            let mut map = BTreeMap::new();
            for spec in &tables {
                let (name, files) = named_list(spec)?;
                if files.len() != 1 {
                    bail!("expected one score file for {name}");
                }
                let t = ingest_external_scores(&read(&files[0])?, &modality, !lower_is_better)
                    .with_context(|| format!("stage rank: model {name}"))?;
                map.insert(name, t);
            }
            let r = rank_models(&map, fraction).context("stage rank")?;
            write(out, "ranking.json", &to_fixed_json(&r)?)?;
            for (m, rank) in &r.ranks {
                println!("{m}\t{rank}\t{:.6}", r.top_means[m]);
            }
        }
        DtaCommand::Concordance { x, y, x_lower_is_better, y_lower_is_better } => {
            let tx = ingest_external_scores(&read(&x)?, "x", !x_lower_is_better).context("stage concordance")?;
            let ty = ingest_external_scores(&read(&y)?, "y", !y_lower_is_better).context("stage concordance")?;
            let c = concordance_index(&tx, &ty).context("stage concordance")?;
            print!("{}", to_fixed_json(&c)?);
        }
    }
    Ok(())
}
