#![allow(dead_code)]

use std::path::PathBuf;

use molbench::chem::{parse_and_sanitize, sanitize, Atom, BondOrder, Element, MolecularGraph};
use molbench::rng::SeededRng;
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;

pub fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(rel)
}

/// (SMILES, name) pairs of the drug-like corpus.
pub fn corpus() -> Vec<(String, String)> {
    std::fs::read_to_string(fixture("drugs.smi"))
        .expect("corpus fixture")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let mut it = l.split_whitespace();
            (it.next().unwrap().to_string(), it.next().unwrap_or("").to_string())
        })
        .collect()
}

pub fn random_permutation(n: usize, rng: &mut SeededRng) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut p);
    p
}

type Labeled = UnGraph<(u8, i8, u8, bool, Option<u16>), u8>;

fn labeled(g: &MolecularGraph) -> Labeled {
    let mut out = Labeled::default();
    let nodes: Vec<_> = (0..g.atom_count())
        .map(|i| {
            let a = g.atom(i);
            out.add_node((a.element.atomic_number(), a.charge, g.total_hydrogens(i), a.aromatic, a.isotope))
        })
        .collect();
    for b in g.bonds() {
        out.add_edge(nodes[b.begin], nodes[b.end], b.order.code());
    }
    out
}

/// Graph isomorphism respecting element, charge, hydrogens, aromaticity,
/// isotope and bond order (VF2, independent of the canonicalizer).
pub fn isomorphic(a: &MolecularGraph, b: &MolecularGraph) -> bool {
    is_isomorphic_matching(&labeled(a), &labeled(b), |x, y| x == y, |x, y| x == y)
}

const TEMPLATES: [&str; 6] = ["c1ccccc1", "c1ccncc1", "c1ccoc1", "c1cc[nH]c1", "c1ccc2ccccc2c1", "c1cscn1"];
const ELEMENTS: [(Element, u8); 9] = [
    (Element::C, 4),
    (Element::C, 4),
    (Element::C, 4),
    (Element::C, 4),
    (Element::N, 3),
    (Element::O, 2),
    (Element::S, 2),
    (Element::F, 1),
    (Element::CL, 1),
];

/// A random valid molecule: optionally an aromatic template, grown by
/// attaching atoms at hydrogen positions, plus a few ring closures.
pub fn random_molecule(seed: u64, max_atoms: usize) -> Option<MolecularGraph> {
    let mut rng = SeededRng::new(seed);
    let mut g = if rng.below(2) == 0 {
        parse_and_sanitize(TEMPLATES[rng.below(TEMPLATES.len() as u64) as usize]).ok()?
    } else {
        let (e, v) = ELEMENTS[rng.below(4) as usize];
        let mut a = Atom::new(e);
        a.hydrogens = v;
        let mut g = MolecularGraph::new();
        g.add_atom(a);
        g
    };
    let target = 1 + rng.below(max_atoms as u64) as usize;
    while g.atom_count() < target {
        let open: Vec<usize> = (0..g.atom_count()).filter(|&i| g.atom(i).hydrogens > 0).collect();
        if open.is_empty() {
            break;
        }
        let at = open[rng.below(open.len() as u64) as usize];
        let (e, v) = ELEMENTS[rng.below(ELEMENTS.len() as u64) as usize];
        let cap = g.atom(at).hydrogens.min(v).min(if g.atom(at).aromatic { 1 } else { 3 });
        let order = match rng.below(10) {
            0..=6 => 1,
            7 | 8 => 2.min(cap),
            _ => 3.min(cap),
        };
        let mut a = Atom::new(e);
        a.hydrogens = v - order;
        let j = g.add_atom(a);
        g.atoms_mut()[at].hydrogens -= order;
        let bo = match order {
            1 => BondOrder::Single,
            2 => BondOrder::Double,
            _ => BondOrder::Triple,
        };
        g.add_bond(at, j, bo).ok()?;
    }
    for _ in 0..rng.below(3) {
        let open: Vec<usize> = (0..g.atom_count()).filter(|&i| g.atom(i).hydrogens > 0).collect();
        if open.len() < 2 {
            break;
        }
        let a = open[rng.below(open.len() as u64) as usize];
        let b = open[rng.below(open.len() as u64) as usize];
        if a == b || g.bond_between(a, b).is_some() {
            continue;
        }
        g.atoms_mut()[a].hydrogens -= 1;
        g.atoms_mut()[b].hydrogens -= 1;
        g.add_bond(a, b, BondOrder::Single).ok()?;
    }
    sanitize(&g).ok()
}

// ---- independent oracles -------------------------------------------------

use molbench::fingerprint::Fingerprint;

pub fn random_fingerprint(rng: &mut SeededRng, nbits: usize, density: u64) -> Fingerprint {
    let bits: Vec<usize> = (0..nbits).filter(|_| rng.below(1000) < density).collect();
    Fingerprint::from_bits(nbits, 2, bits)
}

fn bit(fp: &Fingerprint, i: usize) -> bool {
    fp.contains(i)
}

/// Tanimoto by explicit bit scan.
pub fn tanimoto_scan(a: &Fingerprint, b: &Fingerprint) -> f64 {
    let (mut both, mut either) = (0usize, 0usize);
    for i in 0..a.len() {
        let (x, y) = (bit(a, i), bit(b, i));
        both += (x && y) as usize;
        either += (x || y) as usize;
    }
    if either == 0 {
        1.0
    } else {
        both as f64 / either as f64
    }
}

/// Naive Butina: recount every candidate's unassigned neighbours each round.
pub fn butina_oracle(fps: &[Fingerprint], cutoff: f64) -> Vec<(usize, Vec<usize>)> {
    let n = fps.len();
    let near: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| 1.0 - tanimoto_scan(&fps[i], &fps[j]) <= cutoff + 1e-12).collect())
        .collect();
    let mut assigned = vec![false; n];
    let mut clusters = Vec::new();
    loop {
        let mut best: Option<(usize, usize)> = None;
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let c = (0..n).filter(|&j| !assigned[j] && near[i][j]).count();
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((i, c));
            }
        }
        let Some((centre, _)) = best else { break };
        let members: Vec<usize> = (0..n).filter(|&j| !assigned[j] && near[centre][j]).collect();
        for &m in &members {
            assigned[m] = true;
        }
        clusters.push((centre, members));
    }
    clusters.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.cmp(&b.0)));
    clusters
}

/// Σ coefᵢ·exp(−γ·‖svᵢ − x‖²) + b with the distance counted bit by bit.
pub fn kernel_sum(support: &[Fingerprint], coef: &[f64], bias: f64, gamma: f64, x: &Fingerprint) -> f64 {
    let mut s = bias;
    for (sv, c) in support.iter().zip(coef) {
        let d2 = (0..x.len()).filter(|&i| bit(sv, i) != bit(x, i)).count() as f64;
        s += c * (-gamma * d2).exp();
    }
    s
}

/// Ordered-pair enumeration of the concordance index.
pub fn concordance_oracle(x: &[f64], y: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..x.len() {
        for j in 0..x.len() {
            if x[i] > x[j] {
                den += 1.0;
                if y[i] > y[j] {
                    num += 1.0;
                } else if y[i] == y[j] {
                    num += 0.5;
                }
            }
        }
    }
    num / den
}

pub fn int_div_oracle(fps: &[Fingerprint], p: i32) -> f64 {
    let n = fps.len() as f64;
    let mut s = 0.0;
    for a in fps {
        for b in fps {
            s += tanimoto_scan(a, b).powi(p);
        }
    }
    1.0 - (s / (n * n)).powf(1.0 / p as f64)
}

pub fn snn_oracle(gen: &[Fingerprint], test: &[Fingerprint]) -> f64 {
    let mut s = 0.0;
    for g in gen {
        let mut best = 0.0f64;
        for t in test {
            best = best.max(tanimoto_scan(g, t));
        }
        s += best;
    }
    s / gen.len() as f64
}

/// (1/(n·h))·Σ φ((x − xᵢ)/h), h = n^(−1/5)·s with a two-pass sample std.
pub fn kde_oracle(samples: &[f64], x: f64) -> f64 {
    let n = samples.len() as f64;
    let m = samples.iter().sum::<f64>() / n;
    let s = (samples.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let h = n.powf(-0.2) * s;
    let phi = |u: f64| (-u * u / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    samples.iter().map(|&xi| phi((x - xi) / h)).sum::<f64>() / (n * h)
}

/// Projected-gradient solution of the C-SVC dual
///   min ½ αᵀQα − Σα  s.t. 0 ≤ αᵢ ≤ Cᵢ, Σ yᵢαᵢ = 0,
/// returning the decision values at the training points.
pub fn dual_oracle(k: &[Vec<f64>], y: &[f64], cost: &[f64], iterations: usize) -> Vec<f64> {
    let n = y.len();
    let q = |i: usize, j: usize| y[i] * y[j] * k[i][j];
    // Lipschitz bound of the gradient
    let l: f64 = (0..n).map(|i| (0..n).map(|j| q(i, j).abs()).sum::<f64>()).fold(0.0, f64::max);
    let step = 1.0 / l;
    let mut a = vec![0.0; n];
    let project = |v: &[f64]| -> Vec<f64> {
        // find ν with Σ yᵢ·clip(vᵢ − ν·yᵢ) = 0 by bisection
        let f = |nu: f64| -> f64 { (0..n).map(|i| y[i] * (v[i] - nu * y[i]).clamp(0.0, cost[i])).sum() };
        let (mut lo, mut hi) = (-1e6, 1e6);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let nu = 0.5 * (lo + hi);
        (0..n).map(|i| (v[i] - nu * y[i]).clamp(0.0, cost[i])).collect()
    };
    for _ in 0..iterations {
        let g: Vec<f64> = (0..n).map(|i| (0..n).map(|j| q(i, j) * a[j]).sum::<f64>() - 1.0).collect();
        let v: Vec<f64> = (0..n).map(|i| a[i] - step * g[i]).collect();
        a = project(&v);
    }
    // bias from free variables (or the midpoint of the feasible interval)
    let grad: Vec<f64> = (0..n).map(|i| (0..n).map(|j| q(i, j) * a[j]).sum::<f64>() - 1.0).collect();
    let tol = 1e-6;
    let free: Vec<usize> = (0..n).filter(|&i| a[i] > tol && a[i] < cost[i] - tol).collect();
    let rho = if free.is_empty() {
        let (mut ub, mut lb) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..n {
            let yg = y[i] * grad[i];
            let at_upper = a[i] >= cost[i] - tol;
            if (y[i] > 0.0) == at_upper {
                lb = lb.max(yg);
            } else {
                ub = ub.min(yg);
            }
        }
        0.5 * (ub + lb)
    } else {
        free.iter().map(|&i| y[i] * grad[i]).sum::<f64>() / free.len() as f64
    };
    (0..n).map(|i| (0..n).map(|j| y[j] * a[j] * k[j][i]).sum::<f64>() - rho).collect()
}

// ---- end-to-end fixture --------------------------------------------------

use std::collections::BTreeMap;
use std::path::Path;

use molbench::report::{run_full_benchmark, validate_config, BenchmarkSummary, ReportError, RunConfig};

pub fn fixture_config() -> RunConfig {
    validate_config(&fixture("e2e/config.toml")).expect("fixture config")
}

pub fn run_fixture(out: &Path) -> Result<BenchmarkSummary, ReportError> {
    let mut cfg = fixture_config();
    cfg.out_dir = out.to_path_buf();
    run_full_benchmark(&cfg)
}

/// Relative path → contents for every file below `root`.
pub fn tree(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for entry in std::fs::read_dir(dir).unwrap() {
            let p = entry.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}
