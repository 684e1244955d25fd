//! Binding records: reading, activity labels, duplicate aggregation,
//! variance filtering and class balancing.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::DtaError;
use crate::chem::canonicalize;
use crate::rng::SeededRng;
use crate::stats::{median, std_dev, StdKind};

/// Activity threshold in nM; strictly lower values are active.
pub const ACTIVE_THRESHOLD_NM: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MeasureKind {
    Kd,
    Ki,
    Ic50,
    Ec50,
}

impl FromStr for MeasureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_uppercase())
            .collect();
        match key.as_str() {
            "KD" => Ok(MeasureKind::Kd),
            "KI" => Ok(MeasureKind::Ki),
            "IC50" => Ok(MeasureKind::Ic50),
            "EC50" => Ok(MeasureKind::Ec50),
            _ => Err(format!("unknown measure {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BindingRecord {
    /// Canonical SMILES.
    pub smiles: String,
    pub target: String,
    pub measure: MeasureKind,
    /// Concentration in nM; 0 means below the detection limit.
    pub value_nm: f64,
}

pub fn label_activity(value_nm: f64) -> bool {
    value_nm < ACTIVE_THRESHOLD_NM
}

/// Parsed records plus the number of rows skipped for invalid SMILES.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordSet {
    pub records: Vec<BindingRecord>,
    pub skipped_invalid: usize,
}

/// Reads `smiles,target,measure,value_nM` CSV text (with header).
/// Rows whose SMILES is not a valid molecule are skipped and counted;
/// malformed measures or values are errors.
pub fn read_records(text: &str) -> Result<RecordSet, DtaError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut records = Vec::new();
    let mut skipped_invalid = 0;
    for (i, row) in reader.records().enumerate() {
        let line = i + 2;
        let row = row?;
        let field = |k: usize| row.get(k).unwrap_or_default();
        let measure = field(2)
            .parse::<MeasureKind>()
            .map_err(|message| DtaError::BadRecord { line, message })?;
        let value_nm: f64 = field(3).parse().map_err(|_| DtaError::BadRecord {
            line,
            message: format!("bad value {:?}", field(3)),
        })?;
        if !value_nm.is_finite() || value_nm < 0.0 {
            return Err(DtaError::BadRecord { line, message: format!("value {value_nm} is not a concentration") });
        }
        let Ok(smiles) = canonicalize(field(0)) else {
            skipped_invalid += 1;
            continue;
        };
        records.push(BindingRecord { smiles: smiles.text, target: field(1).to_string(), measure, value_nm });
    }
    if skipped_invalid > 0 {
        log::warn!("skipped {skipped_invalid} binding records with invalid SMILES");
    }
    Ok(RecordSet { records, skipped_invalid })
}

/// Median of the records of one drug–target pair; all must share a
/// measure kind.
pub fn aggregate_duplicates(records: &[BindingRecord]) -> Result<f64, DtaError> {
    let first = records.first().ok_or(DtaError::NoRecords)?;
    if records.iter().any(|r| r.measure != first.measure) {
        return Err(DtaError::MixedMeasures);
    }
    let values: Vec<f64> = records.iter().map(|r| r.value_nm).collect();
    Ok(median(&values))
}

/// Records grouped by (SMILES, target).
pub type PairGroups = BTreeMap<(String, String), Vec<BindingRecord>>;

pub fn group_records(records: &[BindingRecord]) -> PairGroups {
    let mut groups = PairGroups::new();
    for r in records {
        groups.entry((r.smiles.clone(), r.target.clone())).or_default().push(r.clone());
    }
    groups
}

/// Drops pairs whose own spread of values (population std) is more than
/// `k` times the population std of all values.
pub fn filter_high_variance(groups: PairGroups, k: f64) -> PairGroups {
    let all: Vec<f64> = groups.values().flatten().map(|r| r.value_nm).collect();
    let global = std_dev(&all, StdKind::Population);
    groups
        .into_iter()
        .filter(|(_, recs)| {
            let vals: Vec<f64> = recs.iter().map(|r| r.value_nm).collect();
            !(std_dev(&vals, StdKind::Population) > k * global)
        })
        .collect()
}

/// One value per pair: the median within each measure kind, then the
/// median across kinds.
pub fn pair_value(records: &[BindingRecord]) -> Result<f64, DtaError> {
    let mut by_kind: BTreeMap<MeasureKind, Vec<BindingRecord>> = BTreeMap::new();
    for r in records {
        by_kind.entry(r.measure).or_default().push(r.clone());
    }
    let medians = by_kind
        .values()
        .map(|recs| aggregate_duplicates(recs))
        .collect::<Result<Vec<_>, _>>()?;
    if medians.is_empty() {
        return Err(DtaError::NoRecords);
    }
    Ok(median(&medians))
}

/// A labelled molecule for one target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledMolecule {
    pub smiles: String,
    pub value_nm: f64,
    pub active: bool,
}

/// Groups, filters and aggregates the records of `target` into one
/// labelled entry per molecule, sorted by SMILES.
pub fn prepare_target(records: &[BindingRecord], target: &str, k: f64) -> Result<Vec<LabeledMolecule>, DtaError> {
    let own: Vec<BindingRecord> = records.iter().filter(|r| r.target == target).cloned().collect();
    if own.is_empty() {
        return Err(DtaError::UnknownTarget(target.to_string()));
    }
    let groups = filter_high_variance(group_records(&own), k);
    groups
        .iter()
        .map(|((smiles, _), recs)| {
            let value_nm = pair_value(recs)?;
            Ok(LabeledMolecule { smiles: smiles.clone(), value_nm, active: label_activity(value_nm) })
        })
        .collect()
}

/// Duplicates randomly chosen minority-class items (with replacement)
/// until both classes are the same size. Returns indices into `labels`:
/// all originals in order, then the drawn duplicates.
pub fn oversample_balance(labels: &[bool], seed: u64) -> Result<Vec<usize>, DtaError> {
    let pos: Vec<usize> = (0..labels.len()).filter(|&i| labels[i]).collect();
    let neg: Vec<usize> = (0..labels.len()).filter(|&i| !labels[i]).collect();
    if pos.is_empty() || neg.is_empty() {
        return Err(DtaError::SingleClass);
    }
    let (minority, deficit) = if pos.len() < neg.len() {
        (&pos, neg.len() - pos.len())
    } else {
        (&neg, pos.len() - neg.len())
    };
    let mut rng = SeededRng::new(seed);
    let mut out: Vec<usize> = (0..labels.len()).collect();
    for _ in 0..deficit {
        out.push(minority[rng.below(minority.len() as u64) as usize]);
    }
    Ok(out)
}

/// pK_D = −log10(value/10⁹ + 10⁻¹⁰) for a value in nM.
pub fn pkd_transform(value_nm: f64) -> Result<f64, DtaError> {
    if !(value_nm >= 0.0) {
        return Err(DtaError::NegativeValue(value_nm));
    }
    Ok(-(value_nm / 1e9 + 1e-10).log10())
}
