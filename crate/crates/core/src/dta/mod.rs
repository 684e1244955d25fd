//! Drug–target activity: binding-record preparation, the RBF SVM activity
//! classifier, external score tables and model ranking.

pub mod records;
pub mod scores;
pub mod svm;

pub use records::{
    aggregate_duplicates, filter_high_variance, group_records, label_activity, oversample_balance, pkd_transform,
    prepare_target, read_records, BindingRecord, LabeledMolecule, MeasureKind, RecordSet,
};
pub use scores::{
    concordance_index, ingest_external_scores, rank_models, rank_values, top_fraction_mean, Concordance,
    ModalityRanking, ScoreTable,
};
pub use svm::{train_svm, Platt, SvmModel, TrainOptions};

#[derive(Debug, thiserror::Error)]
pub enum DtaError {
    #[error("line {line}: {message}")]
    BadRecord { line: usize, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("no records")]
    NoRecords,
    #[error("records mix measure kinds")]
    MixedMeasures,
    #[error("no records for target {0:?}")]
    UnknownTarget(String),
    #[error("both classes must be present")]
    SingleClass,
    #[error("negative concentration {0}")]
    NegativeValue(f64),
    #[error("each class needs at least {folds} samples for {folds}-fold cross-validation")]
    TooFewSamples { folds: usize },
    #[error("empty C grid")]
    EmptyGrid,
    #[error("solver did not converge within {iterations} iterations")]
    NotConverged { iterations: u64 },
    #[error("bad model file: {0}")]
    BadModel(String),
    #[error("line {line}: bad SMILES: {message}")]
    BadSmiles { line: usize, message: String },
    #[error("line {line}: bad score: {message}")]
    BadScore { line: usize, message: String },
    #[error("line {line}: duplicate molecule {smiles}")]
    DuplicateKey { line: usize, smiles: String },
    #[error("empty score table for {0}")]
    EmptyTable(String),
    #[error("fraction {0} outside (0, 1]")]
    BadFraction(f64),
    #[error("ranking needs at least two models, got {0}")]
    TooFewModels(usize),
    #[error("modality mismatch: expected {expected}, found {found}")]
    ModalityMismatch { expected: String, found: String },
    #[error("need at least two common molecules, got {0}")]
    TooFewCommonKeys(usize),
    #[error("no pair with distinct x scores")]
    NoComparablePairs,
}
