//! Circular (Morgan / ECFP-style) fingerprints and Tanimoto similarity.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use rayon::prelude::*;

use crate::chem::MolecularGraph;

pub const DEFAULT_RADIUS: usize = 2;
pub const DEFAULT_NBITS: usize = 2048;

#[derive(Debug, thiserror::Error)]
pub enum FingerprintError {
    #[error("fingerprint lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("reference set is empty")]
    EmptyReferences,
    #[error("line {line}: {message}")]
    BadCache { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Fixed-length bitset with its popcount cached.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    nbits: usize,
    radius: usize,
    words: Vec<u64>,
    count: u32,
}

impl Fingerprint {
    pub fn empty(nbits: usize, radius: usize) -> Fingerprint {
        Fingerprint {
            nbits,
            radius,
            words: vec![0; nbits.div_ceil(64)],
            count: 0,
        }
    }

    /// Builds a fingerprint from explicit bit positions (taken modulo `nbits`).
    pub fn from_bits(nbits: usize, radius: usize, bits: impl IntoIterator<Item = usize>) -> Fingerprint {
        let mut fp = Fingerprint::empty(nbits, radius);
        for b in bits {
            fp.set(b % nbits);
        }
        fp
    }

    fn set(&mut self, bit: usize) {
        let (w, m) = (bit / 64, 1u64 << (bit % 64));
        if self.words[w] & m == 0 {
            self.words[w] |= m;
            self.count += 1;
        }
    }

    pub fn contains(&self, bit: usize) -> bool {
        bit < self.nbits && self.words[bit / 64] & (1 << (bit % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn count_ones(&self) -> u32 {
        self.count
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.nbits).filter(move |&b| self.contains(b))
    }

    /// Size of the intersection with `other`; lengths must match.
    pub fn and_count(&self, other: &Fingerprint) -> u32 {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Hex string of the bitset, 64-bit words in order, each in
    /// little-endian byte order.
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(self.words.len() * 16);
        for w in &self.words {
            for byte in w.to_le_bytes() {
                let _ = write!(s, "{byte:02x}");
            }
        }
        let nbytes = self.nbits.div_ceil(8);
        s.truncate(nbytes * 2);
        s
    }

    pub fn from_hex(text: &str, nbits: usize, radius: usize) -> Option<Fingerprint> {
        let bytes = hex::decode(text).ok()?;
        if bytes.len() != nbits.div_ceil(8) {
            return None;
        }
        let mut fp = Fingerprint::empty(nbits, radius);
        for (i, &byte) in bytes.iter().enumerate() {
            for k in 0..8 {
                if byte & (1 << k) != 0 {
                    let bit = i * 8 + k;
                    if bit >= nbits {
                        return None;
                    }
                    fp.set(bit);
                }
            }
        }
        Some(fp)
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn initial_identifier(graph: &MolecularGraph, i: usize, ring: &[bool]) -> u64 {
    let a = graph.atom(i);
    let mut buf = Vec::with_capacity(8);
    buf.push(a.element.atomic_number());
    buf.extend_from_slice(&(graph.heavy_degree(i) as u16).to_le_bytes());
    buf.push(graph.total_hydrogens(i));
    buf.push(a.charge as u8);
    buf.push(ring[i] as u8);
    fnv1a(&buf)
}

/// ECFP-style fingerprint over heavy atoms.
///
/// Each atom starts from a hash of (atomic number, heavy degree, total H,
/// charge, ring membership). At every iteration an atom's identifier is
/// rehashed with the sorted (bond order, neighbour identifier) pairs of its
/// neighbours. Identifiers describing an atom set already covered by an
/// earlier environment are dropped; the rest are folded into `nbits`.
pub fn morgan_fingerprint(graph: &MolecularGraph, radius: usize, nbits: usize) -> Fingerprint {
    let n = graph.atom_count();
    let heavy: Vec<usize> = (0..n).filter(|&i| !graph.atom(i).is_hydrogen()).collect();
    let ring = graph.ring_atoms();
    let words = n.div_ceil(64);

    let mut ids = vec![0u64; n];
    let mut cover: Vec<Vec<u64>> = vec![vec![0; words]; n];
    // atom sets already represented by a kept identifier
    let mut seen: BTreeSet<Vec<u64>> = BTreeSet::new();
    let mut kept: Vec<u64> = Vec::new();

    let mut level: Vec<(Vec<u64>, u64)> = Vec::new();
    for &i in &heavy {
        ids[i] = initial_identifier(graph, i, &ring);
        cover[i][i / 64] |= 1 << (i % 64);
        level.push((cover[i].clone(), ids[i]));
    }
    let mut commit = |level: &mut Vec<(Vec<u64>, u64)>, seen: &mut BTreeSet<Vec<u64>>| {
        level.sort();
        for (set, id) in level.drain(..) {
            if seen.insert(set) {
                kept.push(id);
            }
        }
    };
    commit(&mut level, &mut seen);

    for r in 1..=radius {
        let mut next_ids = ids.clone();
        let mut next_cover = cover.clone();
        for &i in &heavy {
            let mut env: Vec<(u8, u64)> = graph
                .neighbors(i)
                .iter()
                .filter(|&&(w, _)| !graph.atom(w).is_hydrogen())
                .map(|&(w, b)| (graph.bond(b).order.code(), ids[w]))
                .collect();
            env.sort_unstable();
            let mut buf = Vec::with_capacity(16 + env.len() * 9);
            buf.extend_from_slice(&(r as u32).to_le_bytes());
            buf.extend_from_slice(&ids[i].to_le_bytes());
            for (code, id) in &env {
                buf.push(*code);
                buf.extend_from_slice(&id.to_le_bytes());
            }
            next_ids[i] = fnv1a(&buf);
            for &(w, _) in graph.neighbors(i) {
                if !graph.atom(w).is_hydrogen() {
                    for k in 0..words {
                        next_cover[i][k] |= cover[w][k];
                    }
                }
            }
            level.push((next_cover[i].clone(), next_ids[i]));
        }
        ids = next_ids;
        cover = next_cover;
        commit(&mut level, &mut seen);
    }

    Fingerprint::from_bits(nbits, radius, kept.into_iter().map(|id| (id % nbits as u64) as usize))
}

/// Fingerprint with the standard radius 2 and 2048 bits.
pub fn default_fingerprint(graph: &MolecularGraph) -> Fingerprint {
    morgan_fingerprint(graph, DEFAULT_RADIUS, DEFAULT_NBITS)
}

/// |a ∧ b| / |a ∨ b|, taken as 1 when both are empty.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.nbits != b.nbits {
        return Err(FingerprintError::LengthMismatch(a.nbits, b.nbits));
    }
    Ok(tanimoto_unchecked(a, b))
}

pub(crate) fn tanimoto_unchecked(a: &Fingerprint, b: &Fingerprint) -> f64 {
    let both = a.and_count(b);
    let either = a.count + b.count - both;
    if either == 0 {
        1.0
    } else {
        both as f64 / either as f64
    }
}

/// Highest similarity of `query` to any reference, with the first index
/// that attains it.
pub fn max_similarity_to_set(
    query: &Fingerprint,
    references: &[Fingerprint],
) -> Result<(f64, usize), FingerprintError> {
    if references.is_empty() {
        return Err(FingerprintError::EmptyReferences);
    }
    let mut best = (f64::NEG_INFINITY, 0);
    for (i, r) in references.iter().enumerate() {
        let s = tanimoto(query, r)?;
        if s > best.0 {
            best = (s, i);
        }
    }
    Ok(best)
}

/// Mean similarity of `query` to the references.
pub fn mean_similarity_to_set(query: &Fingerprint, references: &[Fingerprint]) -> Result<f64, FingerprintError> {
    if references.is_empty() {
        return Err(FingerprintError::EmptyReferences);
    }
    let mut total = 0.0;
    for r in references {
        total += tanimoto(query, r)?;
    }
    Ok(total / references.len() as f64)
}

pub fn fingerprints(graphs: &[MolecularGraph]) -> Vec<Fingerprint> {
    graphs.par_iter().map(default_fingerprint).collect()
}

/// `max_similarity_to_set` for many queries in parallel.
pub fn bulk_max_similarity(
    queries: &[Fingerprint],
    references: &[Fingerprint],
) -> Result<Vec<(f64, usize)>, FingerprintError> {
    queries
        .par_iter()
        .map(|q| max_similarity_to_set(q, references))
        .collect()
}

/// Full similarity matrix, row by row in parallel.
pub fn similarity_matrix(fps: &[Fingerprint]) -> Result<Vec<Vec<f64>>, FingerprintError> {
    fps.par_iter()
        .map(|a| fps.iter().map(|b| tanimoto(a, b)).collect())
        .collect()
}

/// Writes `smiles<TAB>hex` lines.
pub fn write_cache(path: &Path, entries: &[(String, Fingerprint)]) -> io::Result<()> {
    let mut out = String::new();
    for (smiles, fp) in entries {
        out.push_str(smiles);
        out.push('\t');
        out.push_str(&fp.to_hex());
        out.push('\n');
    }
    fs::write(path, out)
}

pub fn read_cache(path: &Path) -> Result<Vec<(String, Fingerprint)>, FingerprintError> {
    let text = fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |message: &str| FingerprintError::BadCache { line: i + 1, message: message.into() };
        let (smiles, hex) = line.split_once('\t').ok_or_else(|| bad("missing tab"))?;
        let fp = Fingerprint::from_hex(hex.trim(), DEFAULT_NBITS, DEFAULT_RADIUS)
            .ok_or_else(|| bad("bad fingerprint hex"))?;
        out.push((smiles.to_string(), fp));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_and_sanitize;

    fn fp(s: &str) -> Fingerprint {
        default_fingerprint(&parse_and_sanitize(s).unwrap())
    }

    #[test]
    fn small_molecules() {
        assert_eq!(fp("C").count_ones(), 1);
        assert_eq!(fp("CC").count_ones(), 2);
        assert_eq!(fp("CCO").len(), 2048);
        // propane: end and middle atoms at radius 0 and 1; radius 2 adds nothing new
        assert_eq!(fp("CCC").count_ones(), 4);
    }

    #[test]
    fn permutation_invariant() {
        let a = fp("CC(=O)Oc1ccccc1C(=O)O");
        let b = fp("OC(=O)c1ccccc1OC(C)=O");
        assert_eq!(a, b);
    }

    #[test]
    fn tanimoto_basics() {
        let a = Fingerprint::from_bits(2048, 2, [1, 2]);
        let b = Fingerprint::from_bits(2048, 2, [2, 3]);
        assert!((tanimoto(&a, &b).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        let c = Fingerprint::from_bits(2048, 2, [10]);
        assert_eq!(tanimoto(&a, &c).unwrap(), 0.0);
        assert_eq!(tanimoto(&a, &a).unwrap(), 1.0);
        let e = Fingerprint::empty(2048, 2);
        assert_eq!(tanimoto(&e, &e).unwrap(), 1.0);
        let short = Fingerprint::empty(1024, 2);
        assert!(matches!(tanimoto(&a, &short), Err(FingerprintError::LengthMismatch(2048, 1024))));
    }

    #[test]
    fn max_similarity_first_index() {
        let q = Fingerprint::from_bits(2048, 2, [1, 2]);
        let refs = vec![
            Fingerprint::from_bits(2048, 2, [5]),
            Fingerprint::from_bits(2048, 2, [1, 2]),
            Fingerprint::from_bits(2048, 2, [1, 2]),
        ];
        assert_eq!(max_similarity_to_set(&q, &refs).unwrap(), (1.0, 1));
        assert!(matches!(max_similarity_to_set(&q, &[]), Err(FingerprintError::EmptyReferences)));
    }

    #[test]
    fn hex_round_trip() {
        let a = fp("c1ccccc1O");
        let h = a.to_hex();
        assert_eq!(h.len(), 512);
        assert_eq!(Fingerprint::from_hex(&h, 2048, 2).unwrap(), a);
        let one = Fingerprint::from_bits(2048, 2, [0, 9]);
        assert!(one.to_hex().starts_with("0102"));
    }

    #[test]
    fn cache_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("fp.tsv");
        let entries = vec![("CCO".to_string(), fp("CCO")), ("c1ccccc1".to_string(), fp("c1ccccc1"))];
        write_cache(&path, &entries).unwrap();
        assert_eq!(read_cache(&path).unwrap(), entries);
    }
}
