//! Distribution metrics for generated molecule sets: validity, uniqueness,
//! novelty, internal diversity, nearest-neighbour and scaffold similarity
//! to a reference set, property distances and density curves.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chem::{canonical_smiles, heavy_atom_count, molecular_weight, murcko_scaffold, parse_and_sanitize};
use crate::fingerprint::{default_fingerprint, tanimoto_unchecked, Fingerprint};
use crate::stats::{mean, quantile, std_dev, StdKind};

pub const DEFAULT_UNIQUE_K: usize = 1000;
pub const DEFAULT_KDE_POINTS: usize = 200;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("density estimate needs at least two samples with nonzero variance")]
    DegenerateSample,
}

/// Fraction of raw strings that parse into valid molecules.
pub fn validity_fraction<S: AsRef<str> + Sync>(raw: &[S]) -> Result<f64, MetricsError> {
    if raw.is_empty() {
        return Err(MetricsError::Empty("generated list"));
    }
    let valid = raw.par_iter().filter(|s| parse_and_sanitize(s.as_ref()).is_ok()).count();
    Ok(valid as f64 / raw.len() as f64)
}

/// Distinct fraction among the first min(k, n) entries.
pub fn unique_at_k<S: AsRef<str>>(canonical: &[S], k: usize) -> Result<f64, MetricsError> {
    let m = k.min(canonical.len());
    if m == 0 {
        return Err(MetricsError::Empty("valid list"));
    }
    let distinct: HashSet<&str> = canonical[..m].iter().map(AsRef::as_ref).collect();
    Ok(distinct.len() as f64 / m as f64)
}

/// Fraction of generated molecules absent from the training set.
pub fn novelty(generated: &BTreeSet<String>, training: &BTreeSet<String>) -> Result<f64, MetricsError> {
    if generated.is_empty() {
        return Err(MetricsError::Empty("generated set"));
    }
    let novel = generated.iter().filter(|s| !training.contains(*s)).count();
    Ok(novel as f64 / generated.len() as f64)
}

/// 1 − (mean of Tᵖ over all ordered pairs, self-pairs included)^(1/p).
pub fn internal_diversity(fps: &[Fingerprint], p: u32) -> Result<f64, MetricsError> {
    if fps.is_empty() {
        return Err(MetricsError::Empty("fingerprint set"));
    }
    let rows: Vec<f64> = fps
        .par_iter()
        .map(|a| fps.iter().map(|b| tanimoto_unchecked(a, b).powi(p as i32)).sum())
        .collect();
    let n = fps.len() as f64;
    let m = rows.iter().sum::<f64>() / (n * n);
    Ok(1.0 - m.powf(1.0 / p as f64))
}

/// Mean over generated molecules of their best Tanimoto to the reference.
pub fn snn_to_test(generated: &[Fingerprint], test: &[Fingerprint]) -> Result<f64, MetricsError> {
    if generated.is_empty() || test.is_empty() {
        return Err(MetricsError::Empty("fingerprint set"));
    }
    let best: Vec<f64> = generated
        .par_iter()
        .map(|g| test.iter().map(|t| tanimoto_unchecked(g, t)).fold(0.0, f64::max))
        .collect();
    Ok(mean(&best))
}

/// Canonical scaffold SMILES; acyclic molecules map to the empty string.
pub fn scaffold_key(smiles: &str) -> Option<String> {
    let g = parse_and_sanitize(smiles).ok()?;
    Some(canonical_smiles(&murcko_scaffold(&g)).text)
}

pub fn scaffold_counts<S: AsRef<str> + Sync>(smiles: &[S]) -> BTreeMap<String, usize> {
    let keys: Vec<Option<String>> = smiles.par_iter().map(|s| scaffold_key(s.as_ref())).collect();
    let mut counts = BTreeMap::new();
    for k in keys.into_iter().flatten() {
        *counts.entry(k).or_insert(0) += 1;
    }
    counts
}

/// Cosine similarity of two frequency vectors.
pub fn cosine_similarity(a: &BTreeMap<String, usize>, b: &BTreeMap<String, usize>) -> f64 {
    let dot: f64 = a.iter().filter_map(|(k, &x)| b.get(k).map(|&y| x as f64 * y as f64)).sum();
    let na = a.values().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
    let nb = b.values().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (na * nb)).min(1.0)
}

/// Cosine similarity of Murcko-scaffold frequencies.
pub fn scaffold_similarity<S: AsRef<str> + Sync>(generated: &[S], test: &[S]) -> Result<f64, MetricsError> {
    if generated.is_empty() || test.is_empty() {
        return Err(MetricsError::Empty("molecule set"));
    }
    Ok(cosine_similarity(&scaffold_counts(generated), &scaffold_counts(test)))
}

/// ∫ |F_a − F_b| over the real line for two empirical distributions.
pub fn wasserstein_1d(a: &[f64], b: &[f64]) -> Result<f64, MetricsError> {
    if a.is_empty() || b.is_empty() {
        return Err(MetricsError::Empty("sample"));
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_by(f64::total_cmp);
    sb.sort_by(f64::total_cmp);
    let mut all: Vec<f64> = sa.iter().chain(&sb).copied().collect();
    all.sort_by(f64::total_cmp);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut ia, mut ib) = (0, 0);
    let mut total = 0.0;
    for w in all.windows(2) {
        while ia < sa.len() && sa[ia] <= w[0] {
            ia += 1;
        }
        while ib < sb.len() && sb[ib] <= w[0] {
            ib += 1;
        }
        total += (ia as f64 / na - ib as f64 / nb).abs() * (w[1] - w[0]);
    }
    Ok(total)
}

/// Bandwidth by Scott's rule, n^(−1/5)·σ with the sample standard deviation.
pub fn scott_bandwidth(samples: &[f64]) -> Result<f64, MetricsError> {
    if samples.len() < 2 {
        return Err(MetricsError::DegenerateSample);
    }
    let sigma = std_dev(samples, StdKind::Sample);
    if !(sigma > 0.0) {
        return Err(MetricsError::DegenerateSample);
    }
    Ok((samples.len() as f64).powf(-0.2) * sigma)
}

/// Gaussian kernel density estimate evaluated on `grid`.
pub fn gaussian_kde(samples: &[f64], grid: &[f64]) -> Result<Vec<f64>, MetricsError> {
    let h = scott_bandwidth(samples)?;
    let norm = 1.0 / (samples.len() as f64 * h * (2.0 * std::f64::consts::PI).sqrt());
    Ok(grid
        .iter()
        .map(|&x| {
            let s: f64 = samples
                .iter()
                .map(|&xi| {
                    let u = (x - xi) / h;
                    (-0.5 * u * u).exp()
                })
                .sum();
            s * norm
        })
        .collect())
}

/// Evenly spaced grid covering the sample range padded by three bandwidths.
pub fn kde_grid(samples: &[f64], points: usize) -> Result<Vec<f64>, MetricsError> {
    let h = scott_bandwidth(samples)?;
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let points = points.max(2);
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

/// `x,density` CSV with six decimals.
pub fn kde_csv(grid: &[f64], density: &[f64]) -> String {
    let mut s = String::from("x,density\n");
    for (x, d) in grid.iter().zip(density) {
        s.push_str(&format!("{x:.6},{d:.6}\n"));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Sample standard deviation (0 for a single value).
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub fn summarize(values: &[f64]) -> Result<Summary, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::Empty("value list"));
    }
    Ok(Summary {
        count: values.len(),
        mean: mean(values),
        std: std_dev(values, StdKind::Sample),
        min: quantile(values, 0.0),
        q1: quantile(values, 0.25),
        median: quantile(values, 0.5),
        q3: quantile(values, 0.75),
        max: quantile(values, 1.0),
    })
}

/// Distribution of heavy-atom counts over valid molecules.
pub fn heavy_atom_summary<S: AsRef<str> + Sync>(smiles: &[S]) -> Result<Summary, MetricsError> {
    let counts: Vec<f64> = smiles
        .par_iter()
        .filter_map(|s| parse_and_sanitize(s.as_ref()).ok())
        .map(|g| heavy_atom_count(&g) as f64)
        .collect();
    summarize(&counts)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub model: String,
    pub generated: usize,
    pub validity: f64,
    pub unique_at_k: f64,
    pub k: usize,
    pub novelty: f64,
    pub int_div1: f64,
    pub int_div2: f64,
    pub snn_test: f64,
    pub scaffold_test: f64,
    pub mw_w1: f64,
    pub heavy_atoms: Summary,
}

/// Molecular weights of the valid molecules.
pub fn molecular_weights<S: AsRef<str> + Sync>(smiles: &[S]) -> Vec<f64> {
    smiles
        .par_iter()
        .filter_map(|s| parse_and_sanitize(s.as_ref()).ok())
        .map(|g| molecular_weight(&g))
        .collect()
}

/// All metrics for one model's raw output against training and test sets.
pub fn metrics_report(
    model: &str,
    raw: &[String],
    training: &BTreeSet<String>,
    test: &[String],
    k: usize,
) -> Result<MetricsReport, MetricsError> {
    let validity = validity_fraction(raw)?;
    let graphs: Vec<_> = raw.par_iter().filter_map(|s| parse_and_sanitize(s).ok()).collect();
    let canonical: Vec<String> = graphs.par_iter().map(|g| canonical_smiles(g).text).collect();
    let unique = unique_at_k(&canonical, k)?;
    let mut seen = HashSet::new();
    let mut distinct = Vec::new();
    for (g, c) in graphs.iter().zip(&canonical) {
        if seen.insert(c.as_str()) {
            distinct.push((g, c.clone()));
        }
    }
    let distinct_set: BTreeSet<String> = distinct.iter().map(|(_, c)| c.clone()).collect();
    let gen_fps: Vec<Fingerprint> = distinct.par_iter().map(|(g, _)| default_fingerprint(g)).collect();
    let test_graphs: Vec<_> = test.par_iter().filter_map(|s| parse_and_sanitize(s).ok()).collect();
    let test_fps: Vec<Fingerprint> = test_graphs.par_iter().map(default_fingerprint).collect();
    let gen_smiles: Vec<&str> = distinct.iter().map(|(_, c)| c.as_str()).collect();
    let test_smiles: Vec<&str> = test.iter().map(String::as_str).collect();
    let gen_mw: Vec<f64> = distinct.iter().map(|(g, _)| molecular_weight(g)).collect();
    let test_mw: Vec<f64> = test_graphs.iter().map(molecular_weight).collect();
    Ok(MetricsReport {
        model: model.to_string(),
        generated: raw.len(),
        validity,
        unique_at_k: unique,
        k,
        novelty: novelty(&distinct_set, training)?,
        int_div1: internal_diversity(&gen_fps, 1)?,
        int_div2: internal_diversity(&gen_fps, 2)?,
        snn_test: snn_to_test(&gen_fps, &test_fps)?,
        scaffold_test: scaffold_similarity(&gen_smiles, &test_smiles)?,
        mw_w1: wasserstein_1d(&gen_mw, &test_mw)?,
        heavy_atoms: summarize(&distinct.iter().map(|(g, _)| heavy_atom_count(g) as f64).collect::<Vec<_>>())?,
    })
}
