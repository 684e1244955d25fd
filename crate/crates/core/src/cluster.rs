//! Butina (sphere exclusion) clustering.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fingerprint::{tanimoto_unchecked, Fingerprint};

pub const DEFAULT_CUTOFF: f64 = 0.4;

// guards the cutoff comparison against rounding in 1 - similarity
const EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClusterError {
    #[error("nothing to cluster")]
    Empty,
    #[error("cutoff {0} is outside [0, 1]")]
    BadCutoff(f64),
    #[error("fingerprints have different lengths")]
    LengthMismatch,
}

/// How the cutoff is read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutoffKind {
    /// Neighbours are within Tanimoto distance `cutoff`.
    #[default]
    Distance,
    /// Neighbours have Tanimoto similarity of at least `cutoff`.
    Similarity,
}

impl CutoffKind {
    pub fn distance_threshold(self, cutoff: f64) -> f64 {
        match self {
            CutoffKind::Distance => cutoff,
            CutoffKind::Similarity => 1.0 - cutoff,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub centroid: usize,
    /// Member indices in ascending order, centroid included.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSet {
    pub clusters: Vec<Cluster>,
    /// Distance threshold actually applied.
    pub cutoff: f64,
}

impl ClusterSet {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn centroids(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.centroid).collect()
    }
}

/// Clusters fingerprints with the Butina algorithm at a distance cutoff.
///
/// The unassigned item with the most unassigned neighbours becomes the
/// next centroid (lowest index on ties) and takes all its unassigned
/// neighbours. Clusters are returned largest first, then by centroid.
pub fn butina_cluster(fps: &[Fingerprint], cutoff: f64) -> Result<ClusterSet, ClusterError> {
    if fps.is_empty() {
        return Err(ClusterError::Empty);
    }
    if !(0.0..=1.0).contains(&cutoff) {
        return Err(ClusterError::BadCutoff(cutoff));
    }
    if fps.iter().any(|f| f.len() != fps[0].len()) {
        return Err(ClusterError::LengthMismatch);
    }
    let n = fps.len();
    let neighbours: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && 1.0 - tanimoto_unchecked(&fps[i], &fps[j]) <= cutoff + EPS)
                .collect()
        })
        .collect();

    let mut assigned = vec![false; n];
    let mut free: Vec<usize> = neighbours.iter().map(Vec::len).collect();
    let mut clusters = Vec::new();
    let mut left = n;
    while left > 0 {
        let centroid = (0..n)
            .filter(|&i| !assigned[i])
            .max_by(|&a, &b| free[a].cmp(&free[b]).then(b.cmp(&a)))
            .expect("unassigned item exists");
        let mut members = vec![centroid];
        members.extend(neighbours[centroid].iter().copied().filter(|&j| !assigned[j]));
        members.sort_unstable();
        for &m in &members {
            assigned[m] = true;
            left -= 1;
        }
        for &m in &members {
            for &k in &neighbours[m] {
                if !assigned[k] {
                    free[k] -= 1;
                }
            }
        }
        clusters.push(Cluster { centroid, members });
    }
    clusters.sort_by(|a, b| b.members.len().cmp(&a.members.len()).then(a.centroid.cmp(&b.centroid)));
    Ok(ClusterSet { clusters, cutoff })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterReportEntry {
    pub centroid_smiles: String,
    pub size: usize,
    pub member_smiles: Vec<String>,
}

/// Cluster report rows, one per cluster in `set` order.
pub fn cluster_report(set: &ClusterSet, smiles: &[String]) -> Vec<ClusterReportEntry> {
    set.clusters
        .iter()
        .map(|c| ClusterReportEntry {
            centroid_smiles: smiles[c.centroid].clone(),
            size: c.members.len(),
            member_smiles: c.members.iter().map(|&m| smiles[m].clone()).collect(),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(bits: &[usize]) -> Fingerprint {
        Fingerprint::from_bits(64, 2, bits.iter().copied())
    }

    #[test]
    fn identical_items_form_one_cluster() {
        let fps = vec![fp(&[1, 2]); 5];
        let set = butina_cluster(&fps, 0.4).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.clusters[0].members, vec![0, 1, 2, 3, 4]);
        assert_eq!(set.clusters[0].centroid, 0);
    }

    #[test]
    fn zero_cutoff_gives_singletons() {
        let fps: Vec<_> = (0..6).map(|i| fp(&[i, i + 10])).collect();
        let set = butina_cluster(&fps, 0.0).unwrap();
        assert_eq!(set.len(), 6);
        assert_eq!(set.centroids(), vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn errors() {
        assert_eq!(butina_cluster(&[], 0.4), Err(ClusterError::Empty));
        assert_eq!(butina_cluster(&[fp(&[1])], 1.5), Err(ClusterError::BadCutoff(1.5)));
        let mixed = vec![fp(&[1]), Fingerprint::from_bits(128, 2, [1])];
        assert_eq!(butina_cluster(&mixed, 0.4), Err(ClusterError::LengthMismatch));
    }

    #[test]
    fn densest_item_is_picked_first() {
        // item 2 is close to 1 and 3, which are not close to each other
        let fps = vec![
            fp(&[40, 41, 42]),
            fp(&[1, 2, 3, 4]),
            fp(&[1, 2, 3, 4, 5, 6]),
            fp(&[3, 4, 5, 6]),
        ];
        let set = butina_cluster(&fps, 0.4).unwrap();
        assert_eq!(set.clusters[0], Cluster { centroid: 2, members: vec![1, 2, 3] });
        assert_eq!(set.clusters[1], Cluster { centroid: 0, members: vec![0] });
    }

    #[test]
    fn similarity_reading() {
        assert!((CutoffKind::Similarity.distance_threshold(0.4) - 0.6).abs() < 1e-12);
        assert_eq!(CutoffKind::Distance.distance_threshold(0.4), 0.4);
    }
}
