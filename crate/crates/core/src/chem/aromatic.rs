//! Kekulization of aromatic input and re-perception of aromaticity.
//!
//! Perception works on a Kekulé structure and is independent of which
//! Kekulé structure was chosen: an atom's pi-electron contribution only
//! depends on whether its double bond is a ring bond, and that does not
//! change between resonance forms. A ring (simple cycle) of candidate
//! atoms is aromatic when it holds 4n+2 pi electrons. Bonds between
//! aromatic atoms that flip between single and double across Kekulé
//! structures are also flagged aromatic, so the output never depends on
//! the particular double-bond placement.

use super::element::{allowed_valences, Element};
use super::graph::{BondOrder, MolecularGraph};
use super::matching::{has_perfect_matching, maximum_matching};

const MAX_RING: usize = 24;
const SMALL_RING: usize = 8;
// ring systems with a larger cycle rank only look at rings up to SMALL_RING
const MAX_CYCLE_RANK: usize = 12;

/// Whether an aromatic atom must take part in a ring double bond.
///
/// Counts aromatic bonds as single; the atom needs a pi bond when its
/// sigma valence is not an allowed valence but one more would be.
pub fn needs_pi_bond(graph: &MolecularGraph, i: usize) -> bool {
    let atom = graph.atom(i);
    if !atom.aromatic {
        return false;
    }
    let Some(valences) = allowed_valences(atom.element, atom.charge) else {
        return false;
    };
    let t = graph.bond_valence(i) + atom.hydrogens;
    !valences.contains(&t) && valences.contains(&(t + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KekulizeError {
    /// An aromatic bond or atom that is not part of any ring, or an
    /// aromatic bond touching a non-aromatic atom.
    AromaticOutsideRing,
    /// No alternating single/double assignment exists.
    NoAssignment,
}

/// Replaces aromatic bonds by an explicit single/double assignment and
/// clears aromatic atom flags.
pub fn kekulize(graph: &mut MolecularGraph) -> Result<(), KekulizeError> {
    let ring_bonds = graph.ring_bonds();
    let n = graph.atom_count();
    let mut has_aromatic_bond = vec![false; n];
    for (b, bond) in graph.bonds().iter().enumerate() {
        if bond.order == BondOrder::Aromatic {
            if !ring_bonds[b]
                || !graph.atom(bond.begin).aromatic
                || !graph.atom(bond.end).aromatic
            {
                return Err(KekulizeError::AromaticOutsideRing);
            }
            has_aromatic_bond[bond.begin] = true;
            has_aromatic_bond[bond.end] = true;
        }
    }
    if (0..n).any(|i| graph.atom(i).aromatic && !has_aromatic_bond[i]) {
        return Err(KekulizeError::AromaticOutsideRing);
    }
    let need: Vec<bool> = (0..n).map(|i| needs_pi_bond(graph, i)).collect();
    let mut adj = vec![Vec::new(); n];
    for bond in graph.bonds() {
        if bond.order == BondOrder::Aromatic && need[bond.begin] && need[bond.end] {
            adj[bond.begin].push(bond.end);
            adj[bond.end].push(bond.begin);
        }
    }
    let mate = maximum_matching(&adj);
    if (0..n).any(|i| need[i] && mate[i].is_none()) {
        return Err(KekulizeError::NoAssignment);
    }
    for b in 0..graph.bond_count() {
        let bond = graph.bond(b);
        if bond.order == BondOrder::Aromatic {
            let order = if mate[bond.begin] == Some(bond.end) {
                BondOrder::Double
            } else {
                BondOrder::Single
            };
            graph.set_bond_order(b, order);
        }
    }
    for atom in graph.atoms_mut() {
        atom.aromatic = false;
    }
    Ok(())
}

/// Pi electrons an atom donates to a ring, or `None` if it cannot be part
/// of an aromatic ring.
fn pi_electrons(graph: &MolecularGraph, i: usize, ring_bonds: &[bool], ring_atoms: &[bool]) -> Option<u8> {
    let atom = graph.atom(i);
    if !ring_atoms[i] || !atom.element.can_be_aromatic() {
        return None;
    }
    let valences = allowed_valences(atom.element, atom.charge)?;
    let total = graph.bond_valence(i) + atom.hydrogens;
    if !valences.contains(&total) {
        return None;
    }
    let connections = graph.degree(i) + atom.hydrogens as usize;
    if connections > 3 {
        return None;
    }
    let mut double = None;
    for &(nbr, b) in graph.neighbors(i) {
        match graph.bond(b).order {
            BondOrder::Single => {}
            BondOrder::Double if double.is_none() => double = Some((nbr, b)),
            _ => return None,
        }
    }
    match double {
        Some((_, b)) if ring_bonds[b] => Some(1),
        Some((nbr, _)) => {
            let e = graph.atom(nbr).element;
            (e == Element::O || e == Element::N || e == Element::S).then_some(0)
        }
        None => {
            let group = match atom.element.atomic_number() {
                5 => 3,
                6 => 4,
                7 | 15 | 33 => 5,
                8 | 16 | 34 | 52 => 6,
                _ => return None,
            };
            let nonbonding = group - atom.charge as i32 - total as i32;
            match nonbonding {
                0 => Some(0),
                n if n >= 2 => Some(2),
                _ => None,
            }
        }
    }
}

/// Flags aromatic atoms and bonds on a Kekulé graph.
pub fn perceive(graph: &mut MolecularGraph) {
    let n = graph.atom_count();
    let ring_bonds = graph.ring_bonds();
    let ring_atoms = graph.ring_atoms();
    let electrons: Vec<Option<u8>> = (0..n)
        .map(|i| pi_electrons(graph, i, &ring_bonds, &ring_atoms))
        .collect();

    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (b, bond) in graph.bonds().iter().enumerate() {
        if ring_bonds[b] && electrons[bond.begin].is_some() && electrons[bond.end].is_some() {
            adj[bond.begin].push((bond.end, b));
            adj[bond.end].push((bond.begin, b));
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
    }

    let mut aromatic_atom = vec![false; n];
    let mut aromatic_bond = vec![false; graph.bond_count()];
    for system in systems(&adj) {
        let edges: usize = system.iter().map(|&v| adj[v].len()).sum::<usize>() / 2;
        let rank = edges + 1 - system.len();
        let max_len = if rank <= MAX_CYCLE_RANK { MAX_RING } else { SMALL_RING };
        for_each_cycle(&adj, &system, max_len, |atoms, bonds| {
            let total: u32 = atoms.iter().map(|&a| electrons[a].unwrap() as u32).sum();
            if total % 4 == 2 {
                for &a in atoms {
                    aromatic_atom[a] = true;
                }
                for &b in bonds {
                    aromatic_bond[b] = true;
                }
            }
        });
    }

    // bonds between aromatic atoms whose order is not fixed across Kekulé forms
    let pi_atoms: Vec<bool> = (0..n)
        .map(|i| {
            graph
                .neighbors(i)
                .iter()
                .any(|&(_, b)| ring_bonds[b] && graph.bond(b).order == BondOrder::Double)
        })
        .collect();
    for b in 0..graph.bond_count() {
        let bond = graph.bond(b);
        if aromatic_bond[b]
            || !ring_bonds[b]
            || !aromatic_atom[bond.begin]
            || !aromatic_atom[bond.end]
            || !pi_atoms[bond.begin]
            || !pi_atoms[bond.end]
        {
            continue;
        }
        if resonance_variable(graph, &ring_bonds, &pi_atoms, b) {
            aromatic_bond[b] = true;
        }
    }

    for (i, atom) in graph.atoms_mut().iter_mut().enumerate() {
        atom.aromatic = aromatic_atom[i];
    }
    for (b, &arom) in aromatic_bond.iter().enumerate() {
        if arom {
            graph.set_bond_order(b, BondOrder::Aromatic);
        }
    }
}

fn systems(adj: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] || adj[s].is_empty() {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            k += 1;
            for &(w, _) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Calls `f(atoms, bonds)` once per simple cycle of length ≤ `max_len`
/// inside `system`.
fn for_each_cycle<F: FnMut(&[usize], &[usize])>(
    adj: &[Vec<(usize, usize)>],
    system: &[usize],
    max_len: usize,
    mut f: F,
) {
    let n = adj.len();
    let mut on_path = vec![false; n];
    for &start in system {
        // distances back to `start` through vertices > start, for pruning
        let mut dist = vec![usize::MAX; n];
        dist[start] = 0;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &adj[v] {
                if w > start && dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        let mut atoms = vec![start];
        let mut bonds = Vec::new();
        on_path[start] = true;
        extend(adj, start, max_len, &dist, &mut on_path, &mut atoms, &mut bonds, &mut f);
        on_path[start] = false;
    }
}

#[allow(clippy::too_many_arguments)]
fn extend<F: FnMut(&[usize], &[usize])>(
    adj: &[Vec<(usize, usize)>],
    start: usize,
    max_len: usize,
    dist: &[usize],
    on_path: &mut [bool],
    atoms: &mut Vec<usize>,
    bonds: &mut Vec<usize>,
    f: &mut F,
) {
    let v = *atoms.last().unwrap();
    for &(w, b) in &adj[v] {
        if w == start {
            // close; each cycle is seen in two directions, keep one
            if atoms.len() >= 3 && atoms[1] < v {
                bonds.push(b);
                f(atoms, bonds);
                bonds.pop();
            }
            continue;
        }
        if w < start || on_path[w] || dist[w] == usize::MAX {
            continue;
        }
        if atoms.len() + dist[w] > max_len {
            continue;
        }
        on_path[w] = true;
        atoms.push(w);
        bonds.push(b);
        extend(adj, start, max_len, dist, on_path, atoms, bonds, f);
        bonds.pop();
        atoms.pop();
        on_path[w] = false;
    }
}

/// Whether bond `b` is double in some but not all Kekulé structures of the
/// pi system it belongs to.
fn resonance_variable(graph: &MolecularGraph, ring_bonds: &[bool], pi_atoms: &[bool], b: usize) -> bool {
    let n = graph.atom_count();
    let bond = graph.bond(b);
    let (u, v) = (bond.begin, bond.end);
    let is_double = bond.order == BondOrder::Double;
    // component of the pi graph containing the bond
    let mut index = vec![usize::MAX; n];
    let mut members = vec![u];
    index[u] = 0;
    let mut k = 0;
    while k < members.len() {
        let x = members[k];
        k += 1;
        for &(y, e) in graph.neighbors(x) {
            if ring_bonds[e] && pi_atoms[y] && index[y] == usize::MAX {
                index[y] = members.len();
                members.push(y);
            }
        }
    }
    let mut adj = vec![Vec::new(); members.len()];
    for &x in &members {
        if !is_double && (x == u || x == v) {
            continue;
        }
        for &(y, e) in graph.neighbors(x) {
            if e == b || !ring_bonds[e] || index[y] == usize::MAX {
                continue;
            }
            if !is_double && (y == u || y == v) {
                continue;
            }
            adj[index[x]].push(index[y]);
        }
    }
    if is_double {
        // double in all forms unless the rest can be matched without it
        has_perfect_matching(&adj)
    } else {
        // single in all forms unless a matching exists that uses it
        let keep: Vec<usize> = (0..members.len())
            .filter(|&i| members[i] != u && members[i] != v)
            .collect();
        let mut remap = vec![usize::MAX; members.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let sub: Vec<Vec<usize>> = keep
            .iter()
            .map(|&old| adj[old].iter().map(|&y| remap[y]).collect())
            .collect();
        has_perfect_matching(&sub)
    }
}
