use super::element::Element;

/// Tetrahedral or higher-order chirality marker as written in a bracket atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// `@`
    Anticlockwise,
    /// `@@`
    Clockwise,
    /// `@TH1`, `@SP2`, `@OH17`, ... kept verbatim as class and number.
    Other { class: [u8; 2], number: u8 },
}

/// `/` or `\` on a single bond, relative to the bond's stored atom order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to an atom's valence; aromatic bonds count as one
    /// (the extra pi bond is accounted for separately).
    pub fn valence(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }

    /// Small integer code used in hashing and canonical invariants.
    pub fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub element: Element,
    pub charge: i8,
    pub isotope: Option<u16>,
    pub aromatic: bool,
    /// Attached hydrogens that are not explicit graph atoms
    /// (implicit hydrogens plus bracket `H` counts).
    pub hydrogens: u8,
    pub chirality: Option<Chirality>,
}

impl Atom {
    pub fn new(element: Element) -> Atom {
        Atom {
            element,
            charge: 0,
            isotope: None,
            aromatic: false,
            hydrogens: 0,
            chirality: None,
        }
    }

    pub fn is_hydrogen(&self) -> bool {
        self.element == Element::H
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bond {
    pub begin: usize,
    pub end: usize,
    pub order: BondOrder,
    pub direction: Option<BondDirection>,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.begin == atom {
            self.end
        } else {
            self.begin
        }
    }
}

/// Attributed molecular graph.
///
/// Atoms and bonds are stored in insertion order; the adjacency list is
/// derived and kept in sync by [`MolecularGraph::add_bond`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MolecularGraph {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("bond endpoint {0} is not an atom index")]
    BadEndpoint(usize),
    #[error("bond from atom {0} to itself")]
    SelfLoop(usize),
    #[error("duplicate bond between atoms {0} and {1}")]
    DuplicateBond(usize, usize),
}

impl MolecularGraph {
    pub fn new() -> MolecularGraph {
        MolecularGraph::default()
    }

    pub fn add_atom(&mut self, atom: Atom) -> usize {
        self.atoms.push(atom);
        self.adjacency.push(Vec::new());
        self.atoms.len() - 1
    }

    pub fn add_bond(&mut self, a: usize, b: usize, order: BondOrder) -> Result<usize, GraphError> {
        self.add_bond_with_direction(a, b, order, None)
    }

    pub fn add_bond_with_direction(
        &mut self,
        a: usize,
        b: usize,
        order: BondOrder,
        direction: Option<BondDirection>,
    ) -> Result<usize, GraphError> {
        let n = self.atoms.len();
        for x in [a, b] {
            if x >= n {
                return Err(GraphError::BadEndpoint(x));
            }
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if self.bond_between(a, b).is_some() {
            return Err(GraphError::DuplicateBond(a, b));
        }
        let idx = self.bonds.len();
        self.bonds.push(Bond {
            begin: a,
            end: b,
            order,
            direction,
        });
        self.adjacency[a].push((b, idx));
        self.adjacency[b].push((a, idx));
        Ok(idx)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn atoms_mut(&mut self) -> &mut [Atom] {
        &mut self.atoms
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    pub fn set_bond_order(&mut self, i: usize, order: BondOrder) {
        self.bonds[i].order = order;
    }

    pub fn set_bond_direction(&mut self, i: usize, direction: Option<BondDirection>) {
        self.bonds[i].direction = direction;
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `(neighbour, bond index)` pairs of atom `i`.
    pub fn neighbors(&self, i: usize) -> &[(usize, usize)] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency
            .get(a)?
            .iter()
            .find(|(n, _)| *n == b)
            .map(|&(_, bond)| bond)
    }

    /// Sum of bond valences at atom `i` (aromatic bonds count one).
    pub fn bond_valence(&self, i: usize) -> u8 {
        self.adjacency[i]
            .iter()
            .map(|&(_, b)| self.bonds[b].order.valence())
            .sum()
    }

    /// Number of non-hydrogen neighbours.
    pub fn heavy_degree(&self, i: usize) -> usize {
        self.adjacency[i]
            .iter()
            .filter(|&&(n, _)| !self.atoms[n].is_hydrogen())
            .count()
    }

    /// Total hydrogens on atom `i`, counting explicit hydrogen neighbours.
    pub fn total_hydrogens(&self, i: usize) -> u8 {
        let explicit = self.adjacency[i]
            .iter()
            .filter(|&&(n, _)| self.atoms[n].is_hydrogen())
            .count() as u8;
        self.atoms[i].hydrogens + explicit
    }

    /// Marks bonds that lie on at least one cycle (i.e. are not bridges).
    pub fn ring_bonds(&self) -> Vec<bool> {
        let n = self.atoms.len();
        let mut in_ring = vec![true; self.bonds.len()];
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0usize;
        // iterative Tarjan bridge search: (atom, parent bond, next neighbour slot)
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(top) = stack.last_mut() {
                let (v, parent_bond) = (top.0, top.1);
                if top.2 < self.adjacency[v].len() {
                    let (w, b) = self.adjacency[v][top.2];
                    top.2 += 1;
                    if b == parent_bond {
                        continue;
                    }
                    if disc[w] == usize::MAX {
                        disc[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, b, 0));
                    } else {
                        low[v] = low[v].min(disc[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(u, _, _)) = stack.last() {
                        low[u] = low[u].min(low[v]);
                        if low[v] > disc[u] {
                            in_ring[parent_bond] = false;
                        }
                    }
                }
            }
        }
        in_ring
    }

    /// Marks atoms that have at least one ring bond.
    pub fn ring_atoms(&self) -> Vec<bool> {
        let ring_bonds = self.ring_bonds();
        let mut atoms = vec![false; self.atoms.len()];
        for (b, bond) in self.bonds.iter().enumerate() {
            if ring_bonds[b] {
                atoms[bond.begin] = true;
                atoms[bond.end] = true;
            }
        }
        atoms
    }

    /// Connected components as sorted atom index lists, ordered by their
    /// smallest atom index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &(w, _) in &self.adjacency[v] {
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

    /// Returns the same molecule with atoms renumbered: atom `i` of `self`
    /// becomes atom `perm[i]` of the result. Bonds are re-inserted in an
    /// order sorted by their new endpoints.
    pub fn permuted(&self, perm: &[usize]) -> MolecularGraph {
        assert_eq!(perm.len(), self.atoms.len(), "permutation length");
        let mut atoms = vec![None; self.atoms.len()];
        for (old, atom) in self.atoms.iter().enumerate() {
            atoms[perm[old]] = Some(atom.clone());
        }
        let mut g = MolecularGraph::new();
        for atom in atoms {
            g.add_atom(atom.expect("perm is a permutation"));
        }
        let mut bonds: Vec<(usize, usize, &Bond)> = self
            .bonds
            .iter()
            .map(|b| (perm[b.begin], perm[b.end], b))
            .collect();
        bonds.sort_by_key(|&(a, b, _)| (a.min(b), a.max(b)));
        for (a, b, bond) in bonds {
            g.add_bond_with_direction(a, b, bond.order, bond.direction)
                .expect("permutation preserves simple graph");
        }
        g
    }

    /// Removes the atoms flagged in `remove`, renumbering the rest in order.
    pub fn without_atoms(&self, remove: &[bool]) -> MolecularGraph {
        let mut map = vec![usize::MAX; self.atoms.len()];
        let mut g = MolecularGraph::new();
        for (i, atom) in self.atoms.iter().enumerate() {
            if !remove[i] {
                map[i] = g.add_atom(atom.clone());
            }
        }
        for bond in &self.bonds {
            let (a, b) = (map[bond.begin], map[bond.end]);
            if a != usize::MAX && b != usize::MAX {
                g.add_bond_with_direction(a, b, bond.order, bond.direction)
                    .expect("subgraph of a simple graph");
            }
        }
        g
    }
}
