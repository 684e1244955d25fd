//! Canonical atom ranking and canonical SMILES.
//!
//! Atoms are first partitioned by invariants and refined by neighbour
//! colours until stable. Remaining ties are broken by an
//! individualization–refinement search: every leaf of the search gives a
//! complete ranking, the ranking is turned into a SMILES string, and the
//! lexicographically smallest string wins. Leaves with identical strings
//! reveal automorphisms, which are used to skip symmetric branches.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::graph::MolecularGraph;
use super::sanitize::{parse_and_sanitize, MoleculeError};
use super::write::write_ranked;

/// A canonical, stereo-free SMILES string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalSmiles {
    pub text: String,
    /// FNV-1a hash of `text`.
    pub hash: u64,
}

impl CanonicalSmiles {
    fn new(text: String) -> CanonicalSmiles {
        let hash = fnv1a(text.as_bytes());
        CanonicalSmiles { text, hash }
    }
}

impl std::fmt::Display for CanonicalSmiles {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.text)
    }
}

pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Parses, strips stereo, normalizes and writes the canonical form.
pub fn canonicalize(text: &str) -> Result<CanonicalSmiles, MoleculeError> {
    let g = parse_and_sanitize(text)?;
    Ok(canonical_smiles(&g))
}

/// Canonical SMILES of an already sanitized, stereo-free graph.
pub fn canonical_smiles(graph: &MolecularGraph) -> CanonicalSmiles {
    let ranks = canonical_ranks(graph);
    CanonicalSmiles::new(write_ranked(graph, &ranks).0)
}

/// Canonical rank of every atom (a permutation of `0..n`).
pub fn canonical_ranks(graph: &MolecularGraph) -> Vec<usize> {
    let n = graph.atom_count();
    if n == 0 {
        return Vec::new();
    }
    let ring = graph.ring_atoms();
    let invariants: Vec<_> = (0..n)
        .map(|i| {
            let a = graph.atom(i);
            (
                a.element.atomic_number(),
                a.isotope.unwrap_or(0),
                a.charge,
                a.hydrogens,
                graph.degree(i),
                a.aromatic,
                ring[i],
            )
        })
        .collect();
    let colours = rank_keys(&invariants);
    let nbrs: Vec<Vec<(u8, usize)>> = (0..n)
        .map(|i| {
            graph
                .neighbors(i)
                .iter()
                .map(|&(w, b)| (graph.bond(b).order.code(), w))
                .collect()
        })
        .collect();
    let mut search = Search {
        graph,
        nbrs,
        best: None,
        seen: HashMap::new(),
        generators: Vec::new(),
    };
    let start = search.refine(colours);
    search.descend(start, &mut Vec::new());
    search.best.expect("search reaches at least one leaf").1
}

/// Dense ranks of arbitrary ordered keys.
fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut distinct: Vec<K> = keys.to_vec();
    distinct.sort();
    distinct.dedup();
    keys.iter()
        .map(|k| distinct.binary_search(k).expect("key present"))
        .collect()
}

fn cell_count(colours: &[usize]) -> usize {
    colours.iter().max().map_or(0, |&m| m + 1)
}

const MAX_REMEMBERED_LEAVES: usize = 4096;

struct Search<'a> {
    graph: &'a MolecularGraph,
    nbrs: Vec<Vec<(u8, usize)>>,
    best: Option<(String, Vec<usize>)>,
    // leaf string -> atoms in emission order
    seen: HashMap<String, Vec<usize>>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Refines a colouring until the number of cells stops growing. Each
    /// new colour is ordered by (old colour, neighbour multiset), so the
    /// result only depends on the graph up to isomorphism.
    fn refine(&self, mut colours: Vec<usize>) -> Vec<usize> {
        let mut cells = cell_count(&colours);
        loop {
            let keys: Vec<(usize, Vec<(u8, usize)>)> = (0..colours.len())
                .map(|i| {
                    let mut env: Vec<(u8, usize)> =
                        self.nbrs[i].iter().map(|&(b, w)| (b, colours[w])).collect();
                    env.sort_unstable();
                    (colours[i], env)
                })
                .collect();
            let next = rank_keys(&keys);
            let next_cells = cell_count(&next);
            colours = next;
            if next_cells == cells {
                return colours;
            }
            cells = next_cells;
        }
    }

    fn descend(&mut self, colours: Vec<usize>, path: &mut Vec<usize>) {
        let n = colours.len();
        if cell_count(&colours) == n {
            self.leaf(colours);
            return;
        }
        // first non-singleton cell
        let mut size = vec![0usize; n];
        for &c in &colours {
            size[c] += 1;
        }
        let target = (0..n).find(|&c| size[c] > 1).expect("non-discrete colouring");
        let members: Vec<usize> = (0..n).filter(|&i| colours[i] == target).collect();
        let mut tried: Vec<usize> = Vec::new();
        for &v in &members {
            if !tried.is_empty() {
                let orbit = self.orbit_labels(path);
                if tried.iter().any(|&t| orbit[t] == orbit[v]) {
                    continue;
                }
            }
            tried.push(v);
            // v keeps the cell's colour, the rest of the cell moves up by one
            let keys: Vec<(usize, bool)> = (0..n)
                .map(|i| (colours[i], colours[i] == target && i != v))
                .collect();
            let split = self.refine(rank_keys(&keys));
            path.push(v);
            self.descend(split, path);
            path.pop();
        }
    }

    fn leaf(&mut self, ranks: Vec<usize>) {
        let (text, emitted) = write_ranked(self.graph, &ranks);
        if let Some(other) = self.seen.get(&text) {
            let mut perm = vec![0usize; emitted.len()];
            for (k, &a) in other.iter().enumerate() {
                perm[a] = emitted[k];
            }
            if perm.iter().enumerate().any(|(i, &p)| i != p) {
                self.generators.push(perm);
            }
        } else if self.seen.len() < MAX_REMEMBERED_LEAVES {
            self.seen.insert(text.clone(), emitted);
        }
        let better = match &self.best {
            None => true,
            Some((best, _)) => text < *best,
        };
        if better {
            self.best = Some((text, ranks));
        }
    }

    /// Orbit representative of every atom under the automorphisms found so
    /// far that fix all atoms on `path`.
    fn orbit_labels(&self, path: &[usize]) -> Vec<usize> {
        let n = self.graph.atom_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in &self.generators {
            if path.iter().any(|&p| g[p] != p) {
                continue;
            }
            for (i, &j) in g.iter().enumerate() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        (0..n).map(|i| find(&mut parent, i)).collect()
    }
}
