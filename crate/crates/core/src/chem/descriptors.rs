//! Per-molecule descriptors.

use super::aromatic::kekulize;
use super::element::Element;
use super::graph::MolecularGraph;
use super::sanitize::sanitize;

/// Number of atoms other than hydrogen.
pub fn heavy_atom_count(graph: &MolecularGraph) -> usize {
    graph.atoms().iter().filter(|a| !a.is_hydrogen()).count()
}

/// Molecular weight in daltons, implicit hydrogens included. Atoms with an
/// explicit isotope count at their mass number.
pub fn molecular_weight(graph: &MolecularGraph) -> f64 {
    graph
        .atoms()
        .iter()
        .map(|a| {
            let own = match a.isotope {
                Some(m) => m as f64,
                None => a.element.mass(),
            };
            own + a.hydrogens as f64 * Element::H.mass()
        })
        .sum()
}

/// Bemis–Murcko scaffold: ring systems plus the chains linking them.
///
/// Side chains are pruned one terminal atom at a time. Atoms bound to the
/// remaining core by a double or triple bond (ring carbonyl oxygens,
/// exocyclic methylenes) are kept, as they fix the core's electronic
/// structure. Vacated valences are filled with hydrogen. A molecule
/// without rings has an empty scaffold.
pub fn murcko_scaffold(graph: &MolecularGraph) -> MolecularGraph {
    let mut g = graph.clone();
    if kekulize(&mut g).is_err() {
        g = graph.clone();
    }
    let n = g.atom_count();
    let ring = g.ring_atoms();
    if !ring.iter().any(|&r| r) {
        return MolecularGraph::new();
    }
    let mut removed = vec![false; n];
    let mut degree: Vec<usize> = (0..n).map(|i| g.degree(i)).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&i| !ring[i] && degree[i] <= 1).collect();
    while let Some(v) = stack.pop() {
        if removed[v] {
            continue;
        }
        removed[v] = true;
        for &(w, _) in g.neighbors(v) {
            if !removed[w] {
                degree[w] -= 1;
                if !ring[w] && degree[w] <= 1 {
                    stack.push(w);
                }
            }
        }
    }
    // restore multiply bonded terminal atoms on the core
    let core = removed.clone();
    for v in 0..n {
        if !core[v] || g.atom(v).is_hydrogen() {
            continue;
        }
        let attached = g
            .neighbors(v)
            .iter()
            .any(|&(w, b)| !core[w] && g.bond(b).order.valence() > 1);
        if attached {
            removed[v] = false;
        }
    }
    let mut filled = g.clone();
    for v in 0..n {
        if removed[v] {
            continue;
        }
        let lost: u8 = g
            .neighbors(v)
            .iter()
            .filter(|&&(w, _)| removed[w])
            .map(|&(_, b)| g.bond(b).order.valence())
            .sum();
        filled.atoms_mut()[v].hydrogens += lost;
    }
    let pruned = filled.without_atoms(&removed);
    sanitize(&pruned).unwrap_or(pruned)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::canon::canonical_smiles;
    use crate::chem::sanitize::parse_and_sanitize;

    fn mol(s: &str) -> MolecularGraph {
        parse_and_sanitize(s).unwrap()
    }

    fn scaffold(s: &str) -> String {
        canonical_smiles(&murcko_scaffold(&mol(s))).text
    }

    fn canon(s: &str) -> String {
        canonical_smiles(&mol(s)).text
    }

    #[test]
    fn heavy_atoms() {
        assert_eq!(heavy_atom_count(&mol("CCO")), 3);
        assert_eq!(heavy_atom_count(&mol("c1ccccc1")), 6);
        assert_eq!(heavy_atom_count(&mol("[H][H]")), 0);
    }

    #[test]
    fn weights() {
        assert!((molecular_weight(&mol("C")) - 16.043).abs() < 0.01);
        assert!((molecular_weight(&mol("c1ccccc1")) - 78.114).abs() < 0.01);
        assert!((molecular_weight(&mol("[C]")) - 12.011).abs() < 1e-9);
        assert!((molecular_weight(&mol("[13CH4]")) - (13.0 + 4.0 * 1.008)).abs() < 1e-9);
        let a = molecular_weight(&mol("OCC"));
        let b = molecular_weight(&mol("[H]OC([H])([H])C"));
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn scaffolds() {
        assert_eq!(scaffold("CCc1ccccc1"), canon("c1ccccc1"));
        assert!(murcko_scaffold(&mol("CCCC")).is_empty());
        assert_eq!(scaffold("c1ccc(-c2ccccc2)cc1"), canon("c1ccc(-c2ccccc2)cc1"));
        assert_eq!(scaffold("c1ccccc1CCc1ccccc1"), canon("c1ccccc1CCc1ccccc1"));
        assert_eq!(scaffold("CC(=O)Nc1ccc(O)cc1"), canon("c1ccccc1"));
        assert_eq!(scaffold("O=c1cccc[nH]1"), canon("O=c1cccc[nH]1"));
        assert_eq!(scaffold("CC1CCC(=O)CC1"), canon("O=C1CCCCC1"));
        assert_eq!(scaffold("Cc1ccc(cc1)[N+](=O)[O-]"), canon("c1ccccc1"));
    }
}
