//! Built-in codes, stored as JSON code definitions under `data/`.

use crate::codes::{Code, CodeDefinition};
use crate::error::{Error, Result};

const ENTRIES: &[(&str, &str, &str)] = &[
    (
        "hamming743",
        "[7,4,3] Hamming code, 3x7 full-rank parity checks",
        include_str!("../data/hamming743.json"),
    ),
    (
        "hamming743_circ",
        "[7,4,3] Hamming code, 7x7 circulant parity checks (rank 3)",
        include_str!("../data/hamming743_circ.json"),
    ),
    (
        "five_one_three",
        "[[5,1,3]] code, logical rows X^5 and Z^5",
        include_str!("../data/five_one_three.json"),
    ),
    (
        "five_one_three_sparse",
        "[[5,1,3]] code, sparser logical rows",
        include_str!("../data/five_one_three_sparse.json"),
    ),
    (
        "shor913",
        "[[9,1,3]] Shor code, stabilizers then logical X^9, Z^9",
        include_str!("../data/shor913.json"),
    ),
    (
        "shor913_sparse",
        "[[9,1,3]] Shor code, row-reduced sparser normalizer basis",
        include_str!("../data/shor913_sparse.json"),
    ),
];

/// Identifiers and one-line descriptions of the built-in codes.
pub fn list() -> impl Iterator<Item = (&'static str, &'static str)> {
    ENTRIES.iter().map(|&(id, desc, _)| (id, desc))
}

pub fn definition(id: &str) -> Result<CodeDefinition> {
    let (_, _, text) = ENTRIES
        .iter()
        .find(|(name, _, _)| *name == id)
        .ok_or_else(|| Error::UnknownCode(id.to_string()))?;
    CodeDefinition::from_json(text)
}

/// Load and validate a built-in code.
pub fn load(id: &str) -> Result<Code> {
    definition(id)?.build()
}
