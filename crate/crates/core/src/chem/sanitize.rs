//! Validity checking and normalization of parsed graphs.

use serde::{Deserialize, Serialize};

use super::aromatic::{kekulize, perceive};
use super::element::allowed_valences;
use super::graph::{BondOrder, MolecularGraph};
use super::parse::{parse_smiles, SmilesError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, thiserror::Error)]
#[serde(rename_all = "snake_case")]
pub enum ValidityFailure {
    #[error("syntax error")]
    SyntaxError,
    #[error("valence violation")]
    ValenceViolation,
    #[error("aromatic system cannot be kekulized")]
    UnkekulizableAromatic,
    #[error("unsupported SMILES feature")]
    UnsupportedFeature,
}

impl From<&SmilesError> for ValidityFailure {
    fn from(e: &SmilesError) -> Self {
        if e.kind.is_unsupported() {
            ValidityFailure::UnsupportedFeature
        } else {
            ValidityFailure::SyntaxError
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub failure: Option<ValidityFailure>,
}

impl ValidityReport {
    pub fn ok() -> ValidityReport {
        ValidityReport { valid: true, failure: None }
    }

    pub fn failed(reason: ValidityFailure) -> ValidityReport {
        ValidityReport { valid: false, failure: Some(reason) }
    }
}

/// Error from [`parse_and_sanitize`]: either the text did not parse or the
/// parsed graph is not a valid molecule.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoleculeError {
    #[error(transparent)]
    Syntax(#[from] SmilesError),
    #[error("invalid molecule: {0}")]
    Invalid(ValidityFailure),
}

impl MoleculeError {
    pub fn failure(&self) -> ValidityFailure {
        match self {
            MoleculeError::Syntax(e) => e.into(),
            MoleculeError::Invalid(f) => *f,
        }
    }
}

pub fn validate(graph: &MolecularGraph) -> ValidityReport {
    match sanitize(graph) {
        Ok(_) => ValidityReport::ok(),
        Err(f) => ValidityReport::failed(f),
    }
}

/// Parses and validates a SMILES string in one step.
pub fn check_smiles(text: &str) -> ValidityReport {
    match parse_smiles(text) {
        Ok(g) => validate(&g),
        Err(e) => ValidityReport::failed((&e).into()),
    }
}

/// Removes all tetrahedral and double-bond stereo markers.
pub fn strip_stereochemistry(graph: &MolecularGraph) -> MolecularGraph {
    let mut g = graph.clone();
    for atom in g.atoms_mut() {
        atom.chirality = None;
    }
    for b in 0..g.bond_count() {
        g.set_bond_direction(b, None);
    }
    g
}

fn valence_ok(graph: &MolecularGraph, i: usize) -> bool {
    let atom = graph.atom(i);
    match allowed_valences(atom.element, atom.charge) {
        Some(v) => {
            let max = *v.iter().max().unwrap();
            graph.bond_valence(i) as u32 + atom.hydrogens as u32 <= max as u32
        }
        None => true,
    }
}

/// Folds plain explicit hydrogen atoms (`[H]` with one single bond to a
/// heavy atom, no charge or isotope) into their neighbour's H count.
pub fn suppress_hydrogens(graph: &MolecularGraph) -> MolecularGraph {
    let n = graph.atom_count();
    let mut remove = vec![false; n];
    let mut extra = vec![0u8; n];
    for i in 0..n {
        let atom = graph.atom(i);
        if !atom.is_hydrogen() || atom.charge != 0 || atom.isotope.is_some() || atom.hydrogens != 0 {
            continue;
        }
        if let [(nbr, b)] = graph.neighbors(i) {
            if graph.bond(*b).order == BondOrder::Single && !graph.atom(*nbr).is_hydrogen() {
                remove[i] = true;
                extra[*nbr] += 1;
            }
        }
    }
    if !remove.iter().any(|&r| r) {
        return graph.clone();
    }
    let mut g = graph.clone();
    for (atom, &k) in g.atoms_mut().iter_mut().zip(&extra) {
        atom.hydrogens += k;
    }
    g.without_atoms(&remove)
}

/// Checks a graph and brings it to normal form: explicit hydrogens folded
/// in, aromatic input kekulized and aromaticity re-perceived.
///
/// Aromatic input must survive re-perception: a ring written in lowercase
/// that does not satisfy the 4n+2 rule (cyclobutadiene, `c1ccc1`) is
/// rejected even though an alternating bond pattern exists.
pub fn sanitize(graph: &MolecularGraph) -> Result<MolecularGraph, ValidityFailure> {
    if (0..graph.atom_count()).any(|i| !valence_ok(graph, i)) {
        return Err(ValidityFailure::ValenceViolation);
    }
    let mut g = suppress_hydrogens(graph);
    let written_aromatic: Vec<bool> = g.atoms().iter().map(|a| a.aromatic).collect();
    kekulize(&mut g).map_err(|_| ValidityFailure::UnkekulizableAromatic)?;
    if (0..g.atom_count()).any(|i| !valence_ok(&g, i)) {
        return Err(ValidityFailure::ValenceViolation);
    }
    perceive(&mut g);
    if g.atoms().iter().zip(&written_aromatic).any(|(a, &w)| w && !a.aromatic) {
        return Err(ValidityFailure::UnkekulizableAromatic);
    }
    Ok(g)
}

/// Parse, strip stereo and sanitize.
pub fn parse_and_sanitize(text: &str) -> Result<MolecularGraph, MoleculeError> {
    let g = parse_smiles(text)?;
    sanitize(&strip_stereochemistry(&g)).map_err(MoleculeError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::element::Element;
    use crate::chem::graph::Atom;

    fn failure(s: &str) -> Option<ValidityFailure> {
        check_smiles(s).failure
    }

    #[test]
    fn simple_molecules_are_valid() {
        for s in ["CCO", "c1ccccc1", "[C]", "[NH4+]", "C[N+](C)(C)C", "[O-]C=O", "c1cc[nH]c1", "[Na+].[Cl-]"] {
            assert_eq!(failure(s), None, "{s}");
        }
    }

    #[test]
    fn failure_reasons() {
        assert_eq!(failure("C("), Some(ValidityFailure::SyntaxError));
        assert_eq!(failure("C*C"), Some(ValidityFailure::UnsupportedFeature));
        assert_eq!(failure("CC>>CC"), Some(ValidityFailure::UnsupportedFeature));
        assert_eq!(failure("C(C)(C)(C)(C)C"), Some(ValidityFailure::ValenceViolation));
        assert_eq!(failure("c1ccc1"), Some(ValidityFailure::UnkekulizableAromatic));
        assert_eq!(failure("c1cccc1"), Some(ValidityFailure::UnkekulizableAromatic));
        assert_eq!(failure("O=[N](=O)C"), Some(ValidityFailure::ValenceViolation));
    }

    #[test]
    fn five_bonded_carbon_graph_is_invalid() {
        let mut g = MolecularGraph::new();
        let c = g.add_atom(Atom::new(Element::C));
        for _ in 0..5 {
            let f = g.add_atom(Atom::new(Element::F));
            g.add_bond(c, f, BondOrder::Single).unwrap();
        }
        let r = validate(&g);
        assert!(!r.valid);
        assert_eq!(r.failure, Some(ValidityFailure::ValenceViolation));
    }

    #[test]
    fn report_flag_matches_reason() {
        for s in ["CCO", "C(", "c1ccc1", "C*"] {
            let r = check_smiles(s);
            assert_eq!(r.valid, r.failure.is_none());
        }
    }

    #[test]
    fn stripping_stereo() {
        let a = strip_stereochemistry(&parse_smiles("C[C@H](N)O").unwrap());
        assert_eq!(a, parse_smiles("CC(N)O").unwrap());
        let b = strip_stereochemistry(&parse_smiles("F/C=C/F").unwrap());
        let c = strip_stereochemistry(&parse_smiles("F/C=C\\F").unwrap());
        assert_eq!(b, c);
        assert_eq!(b, parse_smiles("FC=CF").unwrap());
        let plain = parse_smiles("CCO").unwrap();
        assert_eq!(strip_stereochemistry(&plain), plain);
    }

    #[test]
    fn explicit_hydrogens_are_folded() {
        let a = parse_and_sanitize("[H]C([H])([H])[H]").unwrap();
        let b = parse_and_sanitize("C").unwrap();
        assert_eq!(a, b);
        let h2 = parse_and_sanitize("[H][H]").unwrap();
        assert_eq!(h2.atom_count(), 2);
        let d = parse_and_sanitize("[2H]C").unwrap();
        assert_eq!(d.atom_count(), 2);
    }

    #[test]
    fn kekule_and_aromatic_input_agree() {
        assert_eq!(
            parse_and_sanitize("C1=CC=CC=C1").unwrap(),
            parse_and_sanitize("c1ccccc1").unwrap()
        );
    }
}
