//! SMILES writer.

use std::fmt::Write as _;

use super::canon::canonical_ranks;
use super::graph::{Atom, BondOrder, MolecularGraph};
use super::parse::organic_implicit_hydrogens;
use super::sanitize::{sanitize, strip_stereochemistry};

/// Writes a SMILES string for `graph`.
///
/// With `canonical` set the graph is stereo-stripped, normalized and
/// written in canonical atom order, so the result equals
/// `canonicalize` of any SMILES of the same molecule. Otherwise atoms are
/// visited in storage order and the graph is written as is (minus stereo).
pub fn write_smiles(graph: &MolecularGraph, canonical: bool) -> String {
    if canonical {
        let stripped = strip_stereochemistry(graph);
        let g = sanitize(&stripped).unwrap_or(stripped);
        let ranks = canonical_ranks(&g);
        write_ranked(&g, &ranks).0
    } else {
        let ranks: Vec<usize> = (0..graph.atom_count()).collect();
        write_ranked(graph, &ranks).0
    }
}

/// Writes `graph` visiting atoms by ascending `rank`. Returns the text and
/// the atoms in the order their symbols appear in it.
pub(crate) fn write_ranked(graph: &MolecularGraph, rank: &[usize]) -> (String, Vec<usize>) {
    let n = graph.atom_count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| rank[i]);
    let mut sorted_nbrs: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|i| {
            let mut v = graph.neighbors(i).to_vec();
            v.sort_by_key(|&(w, _)| rank[w]);
            v
        })
        .collect();

    // first pass: spanning forest and ring closures
    let mut plan = Plan {
        visited: vec![false; n],
        bond_used: vec![false; graph.bond_count()],
        children: vec![Vec::new(); n],
        rings: vec![Vec::new(); n],
        roots: Vec::new(),
    };
    for &start in &order {
        if !plan.visited[start] {
            plan.roots.push(start);
            plan.visit(start, &sorted_nbrs);
        }
    }
    for list in plan.rings.iter_mut() {
        list.sort_by_key(|&(w, _)| rank[w]);
    }
    sorted_nbrs.clear();

    // second pass: emit
    let mut out = Emitter {
        graph,
        plan: &plan,
        text: String::new(),
        emitted: Vec::with_capacity(n),
        done: vec![false; n],
        digits: Vec::new(),
        open: vec![None; graph.bond_count()],
    };
    for (k, &root) in plan.roots.iter().enumerate() {
        if k > 0 {
            out.text.push('.');
        }
        out.emit(root);
    }
    (out.text, out.emitted)
}

struct Plan {
    visited: Vec<bool>,
    bond_used: Vec<bool>,
    children: Vec<Vec<(usize, usize)>>,
    // ring closure bonds touching each atom: (partner, bond)
    rings: Vec<Vec<(usize, usize)>>,
    roots: Vec<usize>,
}

impl Plan {
    fn visit(&mut self, v: usize, nbrs: &[Vec<(usize, usize)>]) {
        self.visited[v] = true;
        for &(w, b) in &nbrs[v] {
            if self.bond_used[b] {
                continue;
            }
            self.bond_used[b] = true;
            if self.visited[w] {
                self.rings[v].push((w, b));
                self.rings[w].push((v, b));
            } else {
                self.children[v].push((w, b));
                self.visit(w, nbrs);
            }
        }
    }
}

struct Emitter<'a> {
    graph: &'a MolecularGraph,
    plan: &'a Plan,
    text: String,
    emitted: Vec<usize>,
    done: Vec<bool>,
    // digits currently in use
    digits: Vec<bool>,
    open: Vec<Option<usize>>,
}

impl Emitter<'_> {
    fn emit(&mut self, v: usize) {
        self.done[v] = true;
        self.emitted.push(v);
        write_atom(&mut self.text, self.graph, v);
        let mut freed = Vec::new();
        // closings first, then openings, each by partner rank
        for pass in [true, false] {
            for &(w, b) in &self.plan.rings[v] {
                let closing = self.done[w];
                if closing != pass {
                    continue;
                }
                if closing {
                    let d = self.open[b].take().expect("ring opened before closing");
                    push_digit(&mut self.text, d);
                    freed.push(d);
                } else {
                    let d = self.digits.iter().position(|&u| !u).unwrap_or(self.digits.len());
                    if d == self.digits.len() {
                        self.digits.push(true);
                    } else {
                        self.digits[d] = true;
                    }
                    self.open[b] = Some(d);
                    write_bond(&mut self.text, self.graph, b);
                    push_digit(&mut self.text, d);
                }
            }
        }
        for d in freed {
            self.digits[d] = false;
        }
        let children = &self.plan.children[v];
        for (k, &(w, b)) in children.iter().enumerate() {
            let last = k + 1 == children.len();
            if !last {
                self.text.push('(');
            }
            write_bond(&mut self.text, self.graph, b);
            self.emit(w);
            if !last {
                self.text.push(')');
            }
        }
    }
}

fn push_digit(text: &mut String, d: usize) {
    let d = d + 1;
    if d < 10 {
        text.push(char::from(b'0' + d as u8));
    } else {
        let _ = write!(text, "%{d:02}");
    }
}

fn write_bond(text: &mut String, graph: &MolecularGraph, b: usize) {
    let bond = graph.bond(b);
    match bond.order {
        BondOrder::Single => {
            if graph.atom(bond.begin).aromatic && graph.atom(bond.end).aromatic {
                text.push('-');
            }
        }
        BondOrder::Double => text.push('='),
        BondOrder::Triple => text.push('#'),
        BondOrder::Aromatic => {}
    }
}

fn needs_bracket(graph: &MolecularGraph, i: usize, atom: &Atom) -> bool {
    if !atom.element.is_organic_subset() || atom.charge != 0 || atom.isotope.is_some() {
        return true;
    }
    organic_implicit_hydrogens(atom.element, atom.aromatic, graph.bond_valence(i)) != atom.hydrogens
}

fn write_atom(text: &mut String, graph: &MolecularGraph, i: usize) {
    let atom = graph.atom(i);
    let symbol = atom.element.symbol();
    if !needs_bracket(graph, i, atom) {
        push_symbol(text, symbol, atom.aromatic);
        return;
    }
    text.push('[');
    if let Some(iso) = atom.isotope {
        let _ = write!(text, "{iso}");
    }
    push_symbol(text, symbol, atom.aromatic);
    match atom.hydrogens {
        0 => {}
        1 => text.push('H'),
        h => {
            let _ = write!(text, "H{h}");
        }
    }
    match atom.charge {
        0 => {}
        1 => text.push('+'),
        -1 => text.push('-'),
        c if c > 0 => {
            let _ = write!(text, "+{c}");
        }
        c => {
            let _ = write!(text, "-{}", -(c as i32));
        }
    }
    text.push(']');
}

fn push_symbol(text: &mut String, symbol: &str, aromatic: bool) {
    if aromatic {
        text.push_str(&symbol.to_ascii_lowercase());
    } else {
        text.push_str(symbol);
    }
}
