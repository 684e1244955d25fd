//! SMILES reader.
//!
//! Supports the organic subset, bracket atoms (isotope, chirality, hydrogen
//! count, charge, atom class), branches, ring closures including `%nn`,
//! explicit bond symbols, aromatic lowercase atoms and `.`-separated
//! fragments. Wildcards (`*`), quadruple bonds (`$`) and reaction syntax
//! (`>`) are rejected as unsupported rather than silently ignored.

use std::collections::BTreeMap;

use super::element::{allowed_valences, Element};
use super::graph::{Atom, BondDirection, BondOrder, Chirality, MolecularGraph};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SmilesErrorKind {
    #[error("empty SMILES")]
    Empty,
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("bracket atom is not closed")]
    UnclosedBracket,
    #[error("')' without a matching '('")]
    UnmatchedCloseParen,
    #[error("branch opened with '(' is never closed")]
    UnclosedBranch,
    #[error("empty branch")]
    EmptyBranch,
    #[error("branch or bond without a preceding atom")]
    MissingAtom,
    #[error("bond symbol is not followed by an atom")]
    DanglingBond,
    #[error("ring closure {0} is never closed")]
    UnclosedRing(u32),
    #[error("ring closure {0} has conflicting bond symbols")]
    RingBondConflict(u32),
    #[error("ring closure {0} bonds an atom to itself")]
    RingToSelf(u32),
    #[error("ring closure {0} duplicates an existing bond")]
    DuplicateBond(u32),
    #[error("malformed charge")]
    BadCharge,
    #[error("element {0} cannot be aromatic")]
    BadAromatic(String),
    #[error("unsupported SMILES feature: {0}")]
    Unsupported(&'static str),
}

impl SmilesErrorKind {
    pub fn is_unsupported(&self) -> bool {
        matches!(self, SmilesErrorKind::Unsupported(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("SMILES error at position {position}: {kind}")]
pub struct SmilesError {
    pub position: usize,
    pub kind: SmilesErrorKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BondSpec {
    Order(BondOrder),
    Directional(BondDirection),
}

impl BondSpec {
    fn order(self) -> BondOrder {
        match self {
            BondSpec::Order(o) => o,
            BondSpec::Directional(_) => BondOrder::Single,
        }
    }

    fn direction(self) -> Option<BondDirection> {
        match self {
            BondSpec::Order(_) => None,
            BondSpec::Directional(d) => Some(d),
        }
    }
}

struct OpenRing {
    atom: usize,
    bond: Option<BondSpec>,
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    graph: MolecularGraph,
    organic: Vec<bool>,
    rings: BTreeMap<u32, OpenRing>,
    branches: Vec<(Option<usize>, usize)>,
    prev: Option<usize>,
    pending: Option<(BondSpec, usize)>,
}

/// Parses a SMILES string into a molecular graph.
///
/// Hydrogen counts are resolved during parsing: bracket atoms carry
/// exactly their written count, organic-subset atoms receive implicit
/// hydrogens from the default valence rules. Stereo markers are kept on
/// the graph; aromatic atoms and bonds are kept as written.
pub fn parse_smiles(text: &str) -> Result<MolecularGraph, SmilesError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(SmilesError {
            position: 0,
            kind: SmilesErrorKind::Empty,
        });
    }
    let mut p = Parser {
        s: trimmed.as_bytes(),
        pos: 0,
        graph: MolecularGraph::new(),
        organic: Vec::new(),
        rings: BTreeMap::new(),
        branches: Vec::new(),
        prev: None,
        pending: None,
    };
    p.run()?;
    let Parser {
        mut graph, organic, ..
    } = p;
    assign_implicit_hydrogens(&mut graph, &organic);
    Ok(graph)
}

impl<'a> Parser<'a> {
    fn err<T>(&self, kind: SmilesErrorKind) -> Result<T, SmilesError> {
        Err(SmilesError {
            position: self.pos,
            kind,
        })
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        while let Some(c) = self.peek() {
            match c {
                b'(' => {
                    if self.prev.is_none() {
                        return self.err(SmilesErrorKind::MissingAtom);
                    }
                    if self.pending.is_some() {
                        return self.err(SmilesErrorKind::DanglingBond);
                    }
                    self.branches.push((self.prev, self.graph.atom_count()));
                    self.pos += 1;
                }
                b')' => {
                    let Some((anchor, atoms_before)) = self.branches.pop() else {
                        return self.err(SmilesErrorKind::UnmatchedCloseParen);
                    };
                    if self.pending.is_some() {
                        return self.err(SmilesErrorKind::DanglingBond);
                    }
                    if self.graph.atom_count() == atoms_before {
                        return self.err(SmilesErrorKind::EmptyBranch);
                    }
                    self.prev = anchor;
                    self.pos += 1;
                }
                b'.' => {
                    if self.pending.is_some() {
                        return self.err(SmilesErrorKind::DanglingBond);
                    }
                    if self.prev.is_none() {
                        return self.err(SmilesErrorKind::MissingAtom);
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' | b'$' => {
                    let spec = match c {
                        b'-' => BondSpec::Order(BondOrder::Single),
                        b'=' => BondSpec::Order(BondOrder::Double),
                        b'#' => BondSpec::Order(BondOrder::Triple),
                        b':' => BondSpec::Order(BondOrder::Aromatic),
                        b'/' => BondSpec::Directional(BondDirection::Up),
                        b'\\' => BondSpec::Directional(BondDirection::Down),
                        _ => return self.err(SmilesErrorKind::Unsupported("quadruple bond '$'")),
                    };
                    if self.pending.is_some() {
                        return self.err(SmilesErrorKind::UnexpectedChar(c as char));
                    }
                    if self.prev.is_none() {
                        return self.err(SmilesErrorKind::MissingAtom);
                    }
                    self.pending = Some((spec, self.pos));
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => self.ring_bond()?,
                b'[' => {
                    let atom = self.bracket_atom()?;
                    self.push_atom(atom, false)?;
                }
                b'*' => return self.err(SmilesErrorKind::Unsupported("wildcard atom '*'")),
                b'>' => return self.err(SmilesErrorKind::Unsupported("reaction SMILES '>'")),
                _ if c.is_ascii_alphabetic() => {
                    let atom = self.organic_atom()?;
                    self.push_atom(atom, true)?;
                }
                _ => return self.err(SmilesErrorKind::UnexpectedChar(c as char)),
            }
        }
        if let Some((_, at)) = self.pending {
            self.pos = at;
            return self.err(SmilesErrorKind::DanglingBond);
        }
        if !self.branches.is_empty() {
            return self.err(SmilesErrorKind::UnclosedBranch);
        }
        if let Some((&n, _)) = self.rings.iter().next() {
            return self.err(SmilesErrorKind::UnclosedRing(n));
        }
        Ok(())
    }

    fn push_atom(&mut self, atom: Atom, organic: bool) -> Result<(), SmilesError> {
        let idx = self.graph.add_atom(atom);
        self.organic.push(organic);
        match (self.prev, self.pending.take()) {
            (Some(prev), spec) => {
                let order = spec
                    .map(|(s, _)| s.order())
                    .unwrap_or_else(|| self.default_order(prev, idx));
                let dir = spec.and_then(|(s, _)| s.direction());
                self.graph
                    .add_bond_with_direction(prev, idx, order, dir)
                    .expect("new atom cannot already be bonded");
            }
            (None, Some(_)) => return self.err(SmilesErrorKind::MissingAtom),
            (None, None) => {}
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn default_order(&self, a: usize, b: usize) -> BondOrder {
        if self.graph.atom(a).aromatic && self.graph.atom(b).aromatic {
            BondOrder::Aromatic
        } else {
            BondOrder::Single
        }
    }

    fn ring_bond(&mut self) -> Result<(), SmilesError> {
        let start = self.pos;
        let number = if self.peek() == Some(b'%') {
            let digits = self.s.get(self.pos + 1..self.pos + 3);
            match digits {
                Some(d) if d.iter().all(u8::is_ascii_digit) => {
                    self.pos += 3;
                    ((d[0] - b'0') * 10 + (d[1] - b'0')) as u32
                }
                _ => return self.err(SmilesErrorKind::UnexpectedChar('%')),
            }
        } else {
            let d = self.s[self.pos] - b'0';
            self.pos += 1;
            d as u32
        };
        let Some(atom) = self.prev else {
            self.pos = start;
            return self.err(SmilesErrorKind::MissingAtom);
        };
        let spec = self.pending.take().map(|(s, _)| s);
        match self.rings.remove(&number) {
            None => {
                self.rings.insert(number, OpenRing { atom, bond: spec });
            }
            Some(open) => {
                if open.atom == atom {
                    self.pos = start;
                    return self.err(SmilesErrorKind::RingToSelf(number));
                }
                let chosen = match (open.bond, spec) {
                    (Some(a), Some(b)) => {
                        if a.order() != b.order() {
                            self.pos = start;
                            return self.err(SmilesErrorKind::RingBondConflict(number));
                        }
                        Some(a)
                    }
                    (a, b) => a.or(b),
                };
                let order = chosen
                    .map(BondSpec::order)
                    .unwrap_or_else(|| self.default_order(open.atom, atom));
                let dir = chosen.and_then(BondSpec::direction);
                if self
                    .graph
                    .add_bond_with_direction(open.atom, atom, order, dir)
                    .is_err()
                {
                    self.pos = start;
                    return self.err(SmilesErrorKind::DuplicateBond(number));
                }
            }
        }
        Ok(())
    }

    fn organic_atom(&mut self) -> Result<Atom, SmilesError> {
        let c = self.s[self.pos];
        let next = self.s.get(self.pos + 1).copied();
        let (element, aromatic, len) = match (c, next) {
            (b'C', Some(b'l')) => (Element::CL, false, 2),
            (b'B', Some(b'r')) => (Element::BR, false, 2),
            (b'B', _) => (Element::B, false, 1),
            (b'C', _) => (Element::C, false, 1),
            (b'N', _) => (Element::N, false, 1),
            (b'O', _) => (Element::O, false, 1),
            (b'P', _) => (Element::P, false, 1),
            (b'S', _) => (Element::S, false, 1),
            (b'F', _) => (Element::F, false, 1),
            (b'I', _) => (Element::I, false, 1),
            (b'b', _) => (Element::B, true, 1),
            (b'c', _) => (Element::C, true, 1),
            (b'n', _) => (Element::N, true, 1),
            (b'o', _) => (Element::O, true, 1),
            (b'p', _) => (Element::P, true, 1),
            (b's', _) => (Element::S, true, 1),
            _ => {
                let sym = (c as char).to_string();
                return self.err(SmilesErrorKind::UnknownElement(sym));
            }
        };
        self.pos += len;
        let mut atom = Atom::new(element);
        atom.aromatic = aromatic;
        Ok(atom)
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(d @ b'0'..=b'9') = self.peek() {
            value = value.saturating_mul(10).saturating_add((d - b'0') as u32);
            self.pos += 1;
        }
        (self.pos > start).then_some(value)
    }

    fn bracket_atom(&mut self) -> Result<Atom, SmilesError> {
        let open = self.pos;
        self.pos += 1;
        let isotope = self.number();
        let (element, aromatic) = self.bracket_symbol()?;
        let mut atom = Atom::new(element);
        atom.aromatic = aromatic;
        if let Some(iso) = isotope {
            if iso > u16::MAX as u32 {
                return self.err(SmilesErrorKind::UnexpectedChar('['));
            }
            atom.isotope = Some(iso as u16);
        }
        atom.chirality = self.chirality();
        if self.peek() == Some(b'H') {
            self.pos += 1;
            let h = self.number().unwrap_or(1);
            if h > 32 {
                return self.err(SmilesErrorKind::UnexpectedChar('H'));
            }
            atom.hydrogens = h as u8;
        }
        atom.charge = self.charge()?;
        if self.peek() == Some(b':') {
            self.pos += 1;
            if self.number().is_none() {
                return self.err(SmilesErrorKind::UnexpectedChar(':'));
            }
        }
        match self.peek() {
            Some(b']') => {
                self.pos += 1;
                Ok(atom)
            }
            Some(c) if c != b'[' => self.err(SmilesErrorKind::UnexpectedChar(c as char)),
            _ => {
                self.pos = open;
                self.err(SmilesErrorKind::UnclosedBracket)
            }
        }
    }

    fn bracket_symbol(&mut self) -> Result<(Element, bool), SmilesError> {
        let Some(c) = self.peek() else {
            return self.err(SmilesErrorKind::UnclosedBracket);
        };
        if c == b'*' {
            return self.err(SmilesErrorKind::Unsupported("wildcard atom '*'"));
        }
        if c.is_ascii_lowercase() {
            for sym in ["se", "as", "te", "b", "c", "n", "o", "p", "s"] {
                if self.s[self.pos..].starts_with(sym.as_bytes()) {
                    self.pos += sym.len();
                    let mut upper = sym.to_string();
                    upper[..1].make_ascii_uppercase();
                    let e = Element::from_symbol(&upper).expect("aromatic symbols are elements");
                    return Ok((e, true));
                }
            }
            return self.err(SmilesErrorKind::UnknownElement((c as char).to_string()));
        }
        if !c.is_ascii_uppercase() {
            return self.err(SmilesErrorKind::UnexpectedChar(c as char));
        }
        if let Some(l) = self.s.get(self.pos + 1).copied().filter(u8::is_ascii_lowercase) {
            let two = format!("{}{}", c as char, l as char);
            if let Some(e) = Element::from_symbol(&two) {
                self.pos += 2;
                return Ok((e, false));
            }
        }
        let one = (c as char).to_string();
        match Element::from_symbol(&one) {
            Some(e) => {
                self.pos += 1;
                Ok((e, false))
            }
            None => self.err(SmilesErrorKind::UnknownElement(one)),
        }
    }

    fn chirality(&mut self) -> Option<Chirality> {
        if self.peek() != Some(b'@') {
            return None;
        }
        self.pos += 1;
        if self.peek() == Some(b'@') {
            self.pos += 1;
            return Some(Chirality::Clockwise);
        }
        if let Some(two) = self.s.get(self.pos..self.pos + 2) {
            if matches!(two, b"TH" | b"AL" | b"SP" | b"TB" | b"OH") {
                let class = [two[0], two[1]];
                self.pos += 2;
                let number = self.number().unwrap_or(1).min(255) as u8;
                return Some(Chirality::Other { class, number });
            }
        }
        Some(Chirality::Anticlockwise)
    }

    fn charge(&mut self) -> Result<i8, SmilesError> {
        let sign: i32 = match self.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Ok(0),
        };
        let sym = self.s[self.pos];
        self.pos += 1;
        let magnitude = if let Some(n) = self.number() {
            n as i32
        } else {
            let mut m = 1;
            while self.peek() == Some(sym) {
                m += 1;
                self.pos += 1;
            }
            m
        };
        if magnitude > 15 {
            return self.err(SmilesErrorKind::BadCharge);
        }
        Ok((sign * magnitude) as i8)
    }
}

/// Implicit hydrogen count for an unbracketed atom.
///
/// Non-aromatic atoms fill up to the smallest default valence that is not
/// below their bond valence. Aromatic atoms already satisfied by their
/// sigma bonds (pyrrole-type `n` with three neighbours, `o`, `s`) get none;
/// otherwise one valence unit is reserved for the ring pi bond.
pub fn organic_implicit_hydrogens(element: Element, aromatic: bool, bond_valence: u8) -> u8 {
    let Some(valences) = allowed_valences(element, 0) else {
        return 0;
    };
    if aromatic {
        if valences.contains(&bond_valence) {
            return 0;
        }
        valences
            .iter()
            .find(|&&v| v > bond_valence)
            .map(|&v| v - bond_valence - 1)
            .unwrap_or(0)
    } else {
        valences
            .iter()
            .find(|&&v| v >= bond_valence)
            .map(|&v| v - bond_valence)
            .unwrap_or(0)
    }
}

fn assign_implicit_hydrogens(graph: &mut MolecularGraph, organic: &[bool]) {
    for i in 0..graph.atom_count() {
        if organic[i] {
            let atom = graph.atom(i);
            let h = organic_implicit_hydrogens(atom.element, atom.aromatic, graph.bond_valence(i));
            graph.atoms_mut()[i].hydrogens = h;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kind(s: &str) -> SmilesErrorKind {
        parse_smiles(s).unwrap_err().kind
    }

    #[test]
    fn methane_has_four_hydrogens() {
        let g = parse_smiles("C").unwrap();
        assert_eq!(g.atom_count(), 1);
        assert_eq!(g.atom(0).element, Element::C);
        assert_eq!(g.atom(0).hydrogens, 4);
    }

    #[test]
    fn unmatched_branch_is_syntax_error() {
        assert_eq!(kind("C("), SmilesErrorKind::UnclosedBranch);
        assert_eq!(kind("C)"), SmilesErrorKind::UnmatchedCloseParen);
        assert_eq!(kind("C()C"), SmilesErrorKind::EmptyBranch);
        assert_eq!(kind("(C)"), SmilesErrorKind::MissingAtom);
    }

    #[test]
    fn ring_errors() {
        assert_eq!(kind("C1CC"), SmilesErrorKind::UnclosedRing(1));
        assert_eq!(kind("C11"), SmilesErrorKind::RingToSelf(1));
        assert_eq!(kind("C12CC12"), SmilesErrorKind::DuplicateBond(2));
        assert_eq!(kind("C=1CC#1"), SmilesErrorKind::RingBondConflict(1));
    }

    #[test]
    fn unsupported_features_are_explicit() {
        assert!(kind("C*C").is_unsupported());
        assert!(kind("CC>>CC").is_unsupported());
        assert!(kind("C$C").is_unsupported());
        assert!(kind("[*]C").is_unsupported());
    }

    #[test]
    fn unknown_elements() {
        assert!(matches!(kind("X"), SmilesErrorKind::UnknownElement(_)));
        assert!(matches!(kind("[Xx]"), SmilesErrorKind::UnknownElement(_)));
        assert!(matches!(kind("Q"), SmilesErrorKind::UnknownElement(_)));
    }

    #[test]
    fn bracket_atom_fields() {
        let g = parse_smiles("[13CH3+]").unwrap();
        let a = g.atom(0);
        assert_eq!(a.isotope, Some(13));
        assert_eq!(a.hydrogens, 3);
        assert_eq!(a.charge, 1);
        let g = parse_smiles("[O--]").unwrap();
        assert_eq!(g.atom(0).charge, -2);
        let g = parse_smiles("[Fe+3]").unwrap();
        assert_eq!(g.atom(0).charge, 3);
        let g = parse_smiles("[NH4+:12]").unwrap();
        assert_eq!(g.atom(0).hydrogens, 4);
        let g = parse_smiles("[Sc]").unwrap();
        assert_eq!(g.atom(0).element.symbol(), "Sc");
        assert_eq!(kind("[C"), SmilesErrorKind::UnclosedBracket);
    }

    #[test]
    fn stereo_is_recorded() {
        let g = parse_smiles("C[C@H](N)O").unwrap();
        assert_eq!(g.atom(1).chirality, Some(Chirality::Anticlockwise));
        assert_eq!(g.atom(1).hydrogens, 1);
        let g = parse_smiles("F/C=C\\F").unwrap();
        assert_eq!(g.bond(0).direction, Some(BondDirection::Up));
        assert_eq!(g.bond(2).direction, Some(BondDirection::Down));
        let g = parse_smiles("[C@TH2H](F)(Cl)Br").unwrap();
        assert!(matches!(g.atom(0).chirality, Some(Chirality::Other { .. })));
    }

    #[test]
    fn aromatic_defaults() {
        let g = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(g.atom_count(), 6);
        assert!(g.atoms().iter().all(|a| a.aromatic && a.hydrogens == 1));
        assert!(g.bonds().iter().all(|b| b.order == BondOrder::Aromatic));
        // biphenyl link between aromatic atoms is written explicitly
        let g = parse_smiles("c1ccccc1-c1ccccc1").unwrap();
        assert_eq!(g.bond(6).order, BondOrder::Single);
        let g = parse_smiles("c1cc[nH]c1").unwrap();
        assert_eq!(g.atom(3).hydrogens, 1);
        let g = parse_smiles("n1ccccc1").unwrap();
        assert_eq!(g.atom(0).hydrogens, 0);
        let g = parse_smiles("s1cccc1").unwrap();
        assert_eq!(g.atom(0).hydrogens, 0);
        let g = parse_smiles("[se]1cccc1").unwrap();
        assert!(g.atom(0).aromatic);
    }

    #[test]
    fn ring_closure_percent_and_fragments() {
        let g = parse_smiles("C%10CC%10").unwrap();
        assert_eq!(g.bond_count(), 3);
        let g = parse_smiles("[Na+].[Cl-]").unwrap();
        assert_eq!(g.bond_count(), 0);
        assert_eq!(g.components().len(), 2);
        assert_eq!(kind("C..C"), SmilesErrorKind::MissingAtom);
    }

    #[test]
    fn implicit_hydrogens_follow_valence() {
        let g = parse_smiles("CS(=O)(=O)C").unwrap();
        assert_eq!(g.atom(1).hydrogens, 0);
        let g = parse_smiles("OP(=O)(O)O").unwrap();
        assert_eq!(g.atom(1).hydrogens, 0);
        let g = parse_smiles("C=C").unwrap();
        assert_eq!(g.atom(0).hydrogens, 2);
        let g = parse_smiles("C#N").unwrap();
        assert_eq!(g.atom(0).hydrogens, 1);
        assert_eq!(g.atom(1).hydrogens, 0);
        let g = parse_smiles("ClC(Cl)(Cl)(Cl)Cl").unwrap();
        assert_eq!(g.atom(1).hydrogens, 0);
    }
}
