//! Recreation of known ligands: how many held-out test ligands a model
//! generates, per split and overall, and how recreated sets overlap
//! between models.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::stats::{mean, std_dev, StdKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RoomError {
    #[error("{generated} generated sets for {test} test sets")]
    SplitMismatch { generated: usize, test: usize },
    #[error("overlap needs at least two models, got {0}")]
    TooFewModels(usize),
    #[error("overlap supports at most 16 models, got {0}")]
    TooManyModels(usize),
}

/// Number of generated molecules that are also test molecules.
pub fn recreation_overlap(generated: &BTreeSet<String>, test: &BTreeSet<String>) -> usize {
    generated.intersection(test).count()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoomReport {
    pub model: String,
    pub recreated_per_split: Vec<usize>,
    pub recreated_mean: f64,
    pub recreated_std: f64,
    /// Distinct test ligands recreated in any split.
    pub total_recreated: usize,
    /// `total_recreated` as a percentage of the dataset.
    pub total_recreated_percent: f64,
    pub valid_unique_total: usize,
    pub generated_per_split: Vec<usize>,
    pub generated_mean: f64,
    pub generated_std: f64,
    /// total_recreated / valid_unique_total × 10⁶, rounded.
    pub ratio_per_million: u64,
    pub recreated: Vec<String>,
}

/// total / generated × 10⁶ rounded to the nearest integer; 0 if either is 0.
pub fn recreation_ratio(total_recreated: usize, valid_unique_total: usize) -> u64 {
    if total_recreated == 0 || valid_unique_total == 0 {
        return 0;
    }
    (total_recreated as f64 / valid_unique_total as f64 * 1e6).round() as u64
}

/// Aggregates recreation over aligned splits. Each split's generated set
/// is compared with that split's test set only.
pub fn room_report(
    model: &str,
    per_split_generated: &[BTreeSet<String>],
    per_split_test: &[BTreeSet<String>],
    valid_unique_total: usize,
    dataset_size: usize,
    std_kind: StdKind,
) -> Result<RoomReport, RoomError> {
    if per_split_generated.len() != per_split_test.len() {
        return Err(RoomError::SplitMismatch {
            generated: per_split_generated.len(),
            test: per_split_test.len(),
        });
    }
    let mut union = BTreeSet::new();
    let mut recreated_per_split = Vec::with_capacity(per_split_test.len());
    for (gen, test) in per_split_generated.iter().zip(per_split_test) {
        let hits: Vec<&String> = gen.intersection(test).collect();
        recreated_per_split.push(hits.len());
        union.extend(hits.into_iter().cloned());
    }
    let generated_per_split: Vec<usize> = per_split_generated.iter().map(BTreeSet::len).collect();
    let as_f64 = |v: &[usize]| v.iter().map(|&x| x as f64).collect::<Vec<_>>();
    let rec = as_f64(&recreated_per_split);
    let gen = as_f64(&generated_per_split);
    let total = union.len();
    Ok(RoomReport {
        model: model.to_string(),
        recreated_mean: mean(&rec),
        recreated_std: std_dev(&rec, std_kind),
        total_recreated: total,
        total_recreated_percent: if dataset_size == 0 { 0.0 } else { 100.0 * total as f64 / dataset_size as f64 },
        valid_unique_total,
        generated_mean: mean(&gen),
        generated_std: std_dev(&gen, std_kind),
        ratio_per_million: recreation_ratio(total, valid_unique_total),
        recreated_per_split,
        generated_per_split,
        recreated: union.into_iter().collect(),
    })
}

/// Header of the Table-1-style CSV.
pub const ROOM_CSV_HEADER: &str =
    "model,recreated_mean,recreated_std,total_recreated,total_recreated_percent,valid_unique_total,generated_mean,generated_std,ratio_per_million";

impl RoomReport {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6},{:.6},{},{:.6},{},{:.6},{:.6},{}",
            self.model,
            self.recreated_mean,
            self.recreated_std,
            self.total_recreated,
            self.total_recreated_percent,
            self.valid_unique_total,
            self.generated_mean,
            self.generated_std,
            self.ratio_per_million
        )
    }
}

pub fn room_csv(reports: &[RoomReport]) -> String {
    let mut s = String::from(ROOM_CSV_HEADER);
    s.push('\n');
    for r in reports {
        s.push_str(&r.csv_row());
        s.push('\n');
    }
    s
}

/// Venn-diagram region sizes. Bit `i` of a mask stands for `models[i]`;
/// `regions[mask]` counts molecules recreated by exactly that set of models.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OverlapRegions {
    pub models: Vec<String>,
    pub regions: BTreeMap<u32, usize>,
    pub exactly_one: usize,
    pub at_least_two: usize,
    pub union: usize,
}

pub fn overlap_regions(per_model: &BTreeMap<String, BTreeSet<String>>) -> Result<OverlapRegions, RoomError> {
    let m = per_model.len();
    if m < 2 {
        return Err(RoomError::TooFewModels(m));
    }
    if m > 16 {
        return Err(RoomError::TooManyModels(m));
    }
    let models: Vec<String> = per_model.keys().cloned().collect();
    let mut membership: BTreeMap<&String, u32> = BTreeMap::new();
    for (i, set) in per_model.values().enumerate() {
        for s in set {
            *membership.entry(s).or_default() |= 1 << i;
        }
    }
    let mut regions: BTreeMap<u32, usize> = (1..(1u32 << m)).map(|mask| (mask, 0)).collect();
    for &mask in membership.values() {
        *regions.get_mut(&mask).expect("mask in range") += 1;
    }
    let exactly_one = regions.iter().filter(|(k, _)| k.count_ones() == 1).map(|(_, v)| v).sum();
    let at_least_two = regions.iter().filter(|(k, _)| k.count_ones() >= 2).map(|(_, v)| v).sum();
    Ok(OverlapRegions { models, regions, exactly_one, at_least_two, union: membership.len() })
}
