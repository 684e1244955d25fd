//! Molecular graphs, SMILES reading and writing, validity and canonical
//! forms.

pub mod aromatic;
pub mod canon;
pub mod descriptors;
pub mod element;
pub mod graph;
pub mod io;
pub mod matching;
pub mod parse;
pub mod sanitize;
pub mod write;

pub use canon::{canonical_ranks, canonical_smiles, canonicalize, CanonicalSmiles};
pub use descriptors::{heavy_atom_count, molecular_weight, murcko_scaffold};
pub use element::Element;
pub use graph::{Atom, Bond, BondOrder, MolecularGraph};
pub use io::{read_smiles_file, SmilesRecord};
pub use parse::{parse_smiles, SmilesError};
pub use sanitize::{
    check_smiles, parse_and_sanitize, sanitize, strip_stereochemistry, validate, MoleculeError,
    ValidityFailure, ValidityReport,
};
pub use write::write_smiles;
