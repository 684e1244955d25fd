//! Plain-text SMILES files: one record per line, an optional
//! whitespace-separated name after the SMILES, `#` comments and blank
//! lines skipped.

use std::fs;
use std::io;
use std::path::Path;

/// One line of a SMILES file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmilesRecord {
    /// 1-based line number in the source file.
    pub line: usize,
    pub smiles: String,
    pub name: Option<String>,
}

pub fn parse_smiles_lines(text: &str) -> Vec<SmilesRecord> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                return None;
            }
            let mut parts = line.splitn(2, char::is_whitespace);
            let smiles = parts.next()?.to_string();
            let name = parts
                .next()
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_string);
            Some(SmilesRecord { line: i + 1, smiles, name })
        })
        .collect()
}

pub fn read_smiles_file(path: &Path) -> io::Result<Vec<SmilesRecord>> {
    Ok(parse_smiles_lines(&fs::read_to_string(path)?))
}
