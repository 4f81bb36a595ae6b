//! Sliding block codes between alphabets.

use crate::alphabet::{Alphabet, SymbolId};
use crate::error::{Error, Result};
use crate::lattice::{Coord, Support};
use crate::pattern::Pattern;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Rule {
    /// Image of each source symbol (single-cell neighbourhood).
    Cell(Vec<SymbolId>),
    /// Image keyed by the neighbourhood pattern in canonical cell order.
    Table(BTreeMap<Vec<SymbolId>, SymbolId>),
}

/// A local rule `pattern on neighbourhood -> symbol`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCode {
    neighborhood: Support,
    source_len: usize,
    target: Alphabet,
    rule: Rule,
}

impl BlockCode {
    pub fn single_cell(dim: usize, source_len: usize, target: Alphabet, map: Vec<SymbolId>) -> Result<Self> {
        if map.len() != source_len {
            return Err(Error::InvalidInput("cell map must cover the source alphabet".into()));
        }
        if map.iter().any(|&s| s as usize >= target.len()) {
            return Err(Error::InvalidInput("cell map leaves the target alphabet".into()));
        }
        Ok(BlockCode { neighborhood: crate::lattice::box_support(dim, 0), source_len, target, rule: Rule::Cell(map) })
    }

    pub fn identity(dim: usize, alphabet: &Alphabet) -> Self {
        let n = alphabet.len();
        BlockCode::single_cell(dim, n, alphabet.clone(), (0..n as u32).map(|s| s as SymbolId).collect())
            .expect("identity code")
    }

    pub fn table(
        neighborhood: Support,
        source_len: usize,
        target: Alphabet,
        table: BTreeMap<Vec<SymbolId>, SymbolId>,
    ) -> Result<Self> {
        if table.keys().any(|k| k.len() != neighborhood.len()) {
            return Err(Error::InvalidInput("table key length differs from neighbourhood".into()));
        }
        Ok(BlockCode { neighborhood, source_len, target, rule: Rule::Table(table) })
    }

    pub fn neighborhood(&self) -> &Support {
        &self.neighborhood
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    /// The per-symbol image when the code has a single-cell neighbourhood.
    pub fn cell_map(&self) -> Option<&[SymbolId]> {
        match &self.rule {
            Rule::Cell(m) => Some(m),
            Rule::Table(_) => None,
        }
    }

    pub fn eval(&self, block: &[SymbolId]) -> Result<SymbolId> {
        match &self.rule {
            Rule::Cell(m) => m
                .get(block[0] as usize)
                .copied()
                .ok_or(Error::SymbolOutOfRange { symbol: block[0] as usize, alphabet: self.source_len }),
            Rule::Table(t) => t.get(block).copied().ok_or_else(|| Error::CodeNotTotal(format!("{block:?}"))),
        }
    }
}

/// Applies a code; the output lives on the cells whose neighbourhood fits in
/// the input support.
pub fn apply_code(code: &BlockCode, p: &Pattern) -> Result<Pattern> {
    let mut out = Vec::new();
    let mut block = Vec::with_capacity(code.neighborhood.len());
    for c in p.support() {
        block.clear();
        let mut fits = true;
        for o in code.neighborhood.iter() {
            match p.get(&(*c + *o)) {
                Some(s) => block.push(s),
                None => {
                    fits = false;
                    break;
                }
            }
        }
        if fits {
            out.push((*c, code.eval(&block)?));
        }
    }
    if out.is_empty() && !p.is_empty() {
        return Err(Error::SupportTooSmall);
    }
    Ok(Pattern::new(p.dim(), out))
}

/// Image of a single cell symbol under a single-cell code.
pub fn image_of(code: &BlockCode, s: SymbolId) -> Option<SymbolId> {
    code.cell_map().map(|m| m[s as usize])
}

/// Coordinates of the neighbourhood, for callers that tabulate rules.
pub fn offsets(code: &BlockCode) -> Vec<Coord> {
    code.neighborhood.cells().to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::box_support;

    #[test]
    fn identity_is_identity() {
        let a = Alphabet::numeric(3);
        let p = Pattern::constant(&box_support(2, 1), 2);
        assert_eq!(apply_code(&BlockCode::identity(2, &a), &p).unwrap(), p);
    }

    #[test]
    fn table_code_erodes_support() {
        // xor of a cell and its right neighbour
        let nb = Support::new(1, [Coord::new(&[0]), Coord::new(&[1])]);
        let mut t = BTreeMap::new();
        for a in 0..2u8 {
            for b in 0..2u8 {
                t.insert(vec![a, b], a ^ b);
            }
        }
        let code = BlockCode::table(nb, 2, Alphabet::numeric(2), t).unwrap();
        let out = apply_code(&code, &Pattern::word(0, &[0, 1, 1])).unwrap();
        assert_eq!(out, Pattern::word(0, &[1, 0]));
        assert!(matches!(apply_code(&code, &Pattern::word(0, &[1])), Err(Error::SupportTooSmall)));
    }
}
