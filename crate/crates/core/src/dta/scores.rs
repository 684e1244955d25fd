//! Per-molecule score tables (predicted affinity, probability, docking
//! energy), top-fraction summaries, model ranking and concordance.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DtaError;
use crate::chem::canonicalize;

pub const DEFAULT_TOP_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreTable {
    pub modality: String,
    pub higher_is_better: bool,
    pub scores: BTreeMap<String, f64>,
}

impl ScoreTable {
    pub fn new(modality: &str, higher_is_better: bool) -> ScoreTable {
        ScoreTable { modality: modality.to_string(), higher_is_better, scores: BTreeMap::new() }
    }

    /// Inserts a score under an already canonical key.
    pub fn insert(&mut self, smiles: String, score: f64) -> Result<(), DtaError> {
        if !score.is_finite() {
            return Err(DtaError::BadScore { line: 0, message: format!("{score} is not finite") });
        }
        if self.scores.contains_key(&smiles) {
            return Err(DtaError::DuplicateKey { line: 0, smiles });
        }
        self.scores.insert(smiles, score);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    /// Score oriented so that larger is always better. Lower-is-better
    /// modalities (docking energies) are negated, which turns the usual
    /// negative energies into their absolute values.
    pub fn normalized(&self, score: f64) -> f64 {
        if self.higher_is_better {
            score
        } else {
            -score
        }
    }

    /// Keeps only the given keys.
    pub fn restricted_to<'a>(&self, keys: impl IntoIterator<Item = &'a String>) -> ScoreTable {
        let scores = keys
            .into_iter()
            .filter_map(|k| self.scores.get(k).map(|&v| (k.clone(), v)))
            .collect();
        ScoreTable { modality: self.modality.clone(), higher_is_better: self.higher_is_better, scores }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("smiles,score\n");
        for (k, v) in &self.scores {
            s.push_str(&format!("{k},{v:.6}\n"));
        }
        s
    }
}

/// Reads a `smiles,score` CSV (with header). Keys are canonicalized; errors
/// carry the 1-based file line.
pub fn ingest_external_scores(text: &str, modality: &str, higher_is_better: bool) -> Result<ScoreTable, DtaError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut table = ScoreTable::new(modality, higher_is_better);
    for (i, row) in reader.records().enumerate() {
        let row = row?;
        let line = row.position().map_or(i as u64 + 2, |p| p.line()) as usize;
        let smiles = row.get(0).unwrap_or("");
        let key = canonicalize(smiles)
            .map_err(|e| DtaError::BadSmiles { line, message: e.to_string() })?
            .text;
        let raw = row.get(1).unwrap_or("");
        let score: f64 = raw
            .parse()
            .map_err(|_| DtaError::BadScore { line, message: format!("cannot parse {raw:?}") })?;
        if !score.is_finite() {
            return Err(DtaError::BadScore { line, message: format!("{raw} is not finite") });
        }
        if table.scores.contains_key(&key) {
            return Err(DtaError::DuplicateKey { line, smiles: key });
        }
        table.scores.insert(key, score);
    }
    Ok(table)
}

/// Mean normalized score of the best ⌈fraction·n⌉ molecules.
pub fn top_fraction_mean(table: &ScoreTable, fraction: f64) -> Result<f64, DtaError> {
    if table.is_empty() {
        return Err(DtaError::EmptyTable(table.modality.clone()));
    }
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(DtaError::BadFraction(fraction));
    }
    let mut v: Vec<f64> = table.scores.values().map(|&s| table.normalized(s)).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    let take = ((fraction * v.len() as f64 - 1e-9).ceil() as usize).clamp(1, v.len());
    Ok(v[..take].iter().sum::<f64>() / take as f64)
}

/// Ranking of models within one modality. The best of n models gets rank
/// n; tied models share the higher rank.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalityRanking {
    pub modality: String,
    pub top_means: BTreeMap<String, f64>,
    pub ranks: BTreeMap<String, usize>,
    /// Groups of models with identical top-fraction means.
    pub ties: Vec<Vec<String>>,
}

/// Ranks already-summarized (normalized, larger = better) values.
pub fn rank_values(modality: &str, values: &BTreeMap<String, f64>) -> Result<ModalityRanking, DtaError> {
    if values.len() < 2 {
        return Err(DtaError::TooFewModels(values.len()));
    }
    let n = values.len();
    let mut ranks = BTreeMap::new();
    let mut by_value: BTreeMap<u64, Vec<String>> = BTreeMap::new();
    for (m, &v) in values {
        let better = values.values().filter(|&&w| w > v).count();
        ranks.insert(m.clone(), n - better);
        by_value.entry(v.to_bits()).or_default().push(m.clone());
    }
    let ties = by_value.into_values().filter(|g| g.len() > 1).collect();
    Ok(ModalityRanking { modality: modality.to_string(), top_means: values.clone(), ranks, ties })
}

/// Ranks models by `top_fraction_mean`; all tables must share a modality.
pub fn rank_models(tables: &BTreeMap<String, ScoreTable>, fraction: f64) -> Result<ModalityRanking, DtaError> {
    let modality = match tables.values().next() {
        Some(t) => t.modality.clone(),
        None => return Err(DtaError::TooFewModels(0)),
    };
    let mut means = BTreeMap::new();
    for (model, t) in tables {
        if t.modality != modality || t.higher_is_better != tables.values().next().map_or(true, |f| f.higher_is_better) {
            return Err(DtaError::ModalityMismatch { expected: modality, found: t.modality.clone() });
        }
        let m = top_fraction_mean(t, fraction).map_err(|e| match e {
            DtaError::EmptyTable(_) => DtaError::EmptyTable(model.clone()),
            other => other,
        })?;
        means.insert(model.clone(), m);
    }
    rank_values(&modality, &means)
}

/// Concordance of two tables over their common keys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Concordance {
    /// Computed on better-direction-normalized scores.
    pub normalized: f64,
    /// Computed on the scores as stored.
    pub raw: f64,
    pub common: usize,
    pub comparable_pairs: usize,
}

fn ci(pairs: &[(f64, f64)]) -> Option<(f64, usize)> {
    let mut num = 0.0;
    let mut den = 0usize;
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (xi, yi) = pairs[i];
            let (xj, yj) = pairs[j];
            if xi == xj {
                continue;
            }
            den += 1;
            let dx = xi - xj;
            let dy = yi - yj;
            if dy == 0.0 {
                num += 0.5;
            } else if (dx > 0.0) == (dy > 0.0) {
                num += 1.0;
            }
        }
    }
    (den > 0).then(|| (num / den as f64, den))
}

/// Fraction of pairs with distinct x that y orders the same way, ties in y
/// counting one half.
pub fn concordance_index(x: &ScoreTable, y: &ScoreTable) -> Result<Concordance, DtaError> {
    let common: Vec<(&String, f64, f64)> = x
        .scores
        .iter()
        .filter_map(|(k, &a)| y.scores.get(k).map(|&b| (k, a, b)))
        .collect();
    if common.len() < 2 {
        return Err(DtaError::TooFewCommonKeys(common.len()));
    }
    let norm: Vec<(f64, f64)> = common.iter().map(|&(_, a, b)| (x.normalized(a), y.normalized(b))).collect();
    let raw: Vec<(f64, f64)> = common.iter().map(|&(_, a, b)| (a, b)).collect();
    let (normalized, comparable_pairs) = ci(&norm).ok_or(DtaError::NoComparablePairs)?;
    let (raw, _) = ci(&raw).ok_or(DtaError::NoComparablePairs)?;
    Ok(Concordance { normalized, raw, common: common.len(), comparable_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(vals: &[(&str, f64)], hib: bool) -> ScoreTable {
        ScoreTable {
            modality: "m".into(),
            higher_is_better: hib,
            scores: vals.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
        }
    }

    fn numbered(n: usize, f: impl Fn(usize) -> f64, hib: bool) -> ScoreTable {
        let mut t = ScoreTable::new("m", hib);
        for i in 0..n {
            t.scores.insert(format!("k{i:04}"), f(i));
        }
        t
    }

    #[test]
    fn top_fraction() {
        let t = numbered(100, |i| (i + 1) as f64, true);
        assert!((top_fraction_mean(&t, 0.1).unwrap() - 95.5).abs() < 1e-12);
        let c = numbered(37, |_| 2.5, true);
        assert_eq!(top_fraction_mean(&c, 0.1).unwrap(), 2.5);
        let dock = numbered(400, |i| -(i as f64) / 10.0, false);
        // best 40 are −39.9 … −36.0, averaged on absolute value
        let expect = (360..400).map(|i| i as f64 / 10.0).sum::<f64>() / 40.0;
        assert!((top_fraction_mean(&dock, 0.1).unwrap() - expect).abs() < 1e-9);
        assert!(top_fraction_mean(&ScoreTable::new("m", true), 0.1).is_err());
        let one = numbered(3, |i| i as f64, true);
        assert_eq!(top_fraction_mean(&one, 0.1).unwrap(), 2.0);
    }

    #[test]
    fn ranks_and_ties() {
        let mut tables = BTreeMap::new();
        tables.insert("a".to_string(), table(&[("x", 1.0)], true));
        tables.insert("b".to_string(), table(&[("x", 3.0)], true));
        tables.insert("c".to_string(), table(&[("x", 2.0)], true));
        let r = rank_models(&tables, 0.1).unwrap();
        assert_eq!(r.ranks["b"], 3);
        assert_eq!(r.ranks["c"], 2);
        assert_eq!(r.ranks["a"], 1);
        assert!(r.ties.is_empty());
        tables.insert("c".to_string(), table(&[("x", 3.0)], true));
        let r = rank_models(&tables, 0.1).unwrap();
        assert_eq!((r.ranks["b"], r.ranks["c"]), (3, 3));
        assert_eq!(r.ties, vec![vec!["b".to_string(), "c".to_string()]]);
        tables.insert("d".to_string(), ScoreTable::new("m", true));
        assert!(matches!(rank_models(&tables, 0.1), Err(DtaError::EmptyTable(m)) if m == "d"));
        tables.insert("d".to_string(), ScoreTable { modality: "other".into(), ..table(&[("x", 1.0)], true) });
        assert!(matches!(rank_models(&tables, 0.1), Err(DtaError::ModalityMismatch { .. })));
    }

    #[test]
    fn concordance_basics() {
        let x = table(&[("a", 1.0), ("b", 2.0), ("c", 3.0)], true);
        assert_eq!(concordance_index(&x, &x).unwrap().normalized, 1.0);
        let neg = table(&[("a", -1.0), ("b", -2.0), ("c", -3.0)], true);
        assert_eq!(concordance_index(&x, &neg).unwrap().normalized, 0.0);
        let dock = ScoreTable { higher_is_better: false, ..neg.clone() };
        let c = concordance_index(&x, &dock).unwrap();
        assert_eq!((c.normalized, c.raw), (1.0, 0.0));
        let flat = table(&[("a", 0.0), ("b", 0.0), ("c", 0.0)], true);
        assert_eq!(concordance_index(&x, &flat).unwrap().normalized, 0.5);
        assert!(matches!(concordance_index(&flat, &x), Err(DtaError::NoComparablePairs)));
        let lone = table(&[("a", 1.0)], true);
        assert!(matches!(concordance_index(&x, &lone), Err(DtaError::TooFewCommonKeys(1))));
    }

    #[test]
    fn ingest_errors_name_the_line() {
        let t = ingest_external_scores("smiles,score\nCCO,-7.5\nc1ccccc1,-8\n", "dock", false).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.scores[&canonicalize("CCO").unwrap().text], -7.5);
        let bad = ingest_external_scores("smiles,score\nCCO,1\nC1CC,2\n", "p", true);
        assert!(matches!(bad, Err(DtaError::BadSmiles { line: 3, .. })));
        let dup = ingest_external_scores("smiles,score\nCCO,1\nOCC,2\n", "p", true);
        assert!(matches!(dup, Err(DtaError::DuplicateKey { line: 3, .. })));
        let nan = ingest_external_scores("smiles,score\nCCO,NaN\n", "p", true);
        assert!(matches!(nan, Err(DtaError::BadScore { line: 2, .. })));
        let junk = ingest_external_scores("smiles,score\nCCO,abc\n", "p", true);
        assert!(matches!(junk, Err(DtaError::BadScore { line: 2, .. })));
    }
}
