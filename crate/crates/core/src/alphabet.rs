//! Finite alphabets, symbol sets and Wang face labels.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Dense symbol index.
pub type SymbolId = u8;

/// Upper bound on alphabet size (domains are 128-bit sets).
pub const MAX_SYMBOLS: usize = 128;

/// A subset of an alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolSet(pub u128);

impl SymbolSet {
    pub const EMPTY: SymbolSet = SymbolSet(0);

    pub fn full(n: usize) -> Self {
        if n >= 128 {
            SymbolSet(u128::MAX)
        } else {
            SymbolSet((1u128 << n) - 1)
        }
    }

    pub fn single(s: SymbolId) -> Self {
        SymbolSet(1u128 << s)
    }

    pub fn from_iter<I: IntoIterator<Item = SymbolId>>(it: I) -> Self {
        SymbolSet(it.into_iter().fold(0, |a, s| a | (1u128 << s)))
    }

    pub fn contains(self, s: SymbolId) -> bool {
        self.0 >> s & 1 == 1
    }

    pub fn insert(&mut self, s: SymbolId) {
        self.0 |= 1u128 << s;
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_single(self) -> bool {
        self.0 != 0 && self.0 & (self.0 - 1) == 0
    }

    /// Smallest member.
    pub fn first(self) -> Option<SymbolId> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as SymbolId)
    }

    pub fn and(self, o: SymbolSet) -> SymbolSet {
        SymbolSet(self.0 & o.0)
    }

    pub fn or(self, o: SymbolSet) -> SymbolSet {
        SymbolSet(self.0 | o.0)
    }

    pub fn minus(self, o: SymbolSet) -> SymbolSet {
        SymbolSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: SymbolSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn complement(self, n: usize) -> SymbolSet {
        SymbolSet(!self.0 & SymbolSet::full(n).0)
    }

    pub fn iter(self) -> SymbolIter {
        SymbolIter(self.0)
    }
}

impl fmt::Debug for SymbolSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct SymbolIter(u128);

impl Iterator for SymbolIter {
    type Item = SymbolId;
    fn next(&mut self) -> Option<SymbolId> {
        if self.0 == 0 {
            return None;
        }
        let s = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(s as SymbolId)
    }
}

/// A named symbol with optional Wang faces and integer attributes.
///
/// Faces are ordered per axis as `[negative, positive]`, so in 2D the order
/// is left, right, bottom, top.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attrs: BTreeMap<String, i64>,
}

impl Symbol {
    pub fn plain(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), faces: None, attrs: BTreeMap::new() }
    }

    pub fn with_faces(name: impl Into<String>, faces: &[&str]) -> Self {
        Symbol {
            name: name.into(),
            faces: Some(faces.iter().map(|s| s.to_string()).collect()),
            attrs: BTreeMap::new(),
        }
    }

    pub fn attr(mut self, key: &str, value: i64) -> Self {
        self.attrs.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<i64> {
        self.attrs.get(key).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        if symbols.len() > MAX_SYMBOLS {
            return Err(Error::AlphabetTooLarge(symbols.len()));
        }
        let mut seen = std::collections::HashSet::new();
        for s in &symbols {
            if s.name.is_empty() || s.name.contains(|c: char| c.is_whitespace() || ",{}=@#".contains(c)) {
                return Err(Error::InvalidSpec(format!("bad symbol name `{}`", s.name)));
            }
            if !seen.insert(s.name.as_str()) {
                return Err(Error::InvalidSpec(format!("duplicate symbol `{}`", s.name)));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Symbols named `0, 1, ..., k-1`.
    pub fn numeric(k: usize) -> Self {
        Alphabet::new((0..k).map(|i| Symbol::plain(i.to_string())).collect()).expect("numeric alphabet")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id as usize]
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id as usize].name
    }

    pub fn id(&self, name: &str) -> Result<SymbolId> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as SymbolId)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn all(&self) -> SymbolSet {
        SymbolSet::full(self.len())
    }

    /// Symbols satisfying a predicate.
    pub fn select(&self, f: impl Fn(&Symbol) -> bool) -> SymbolSet {
        SymbolSet::from_iter((0..self.len()).filter(|&i| f(&self.symbols[i])).map(|i| i as SymbolId))
    }

    pub fn has_faces(&self) -> bool {
        self.symbols.iter().any(|s| s.faces.is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let a = SymbolSet::from_iter([1, 3, 127]);
        assert_eq!(a.len(), 3);
        assert!(a.contains(127));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![1, 3, 127]);
        assert!(SymbolSet::single(5).is_single());
        assert!(!a.is_single());
        assert_eq!(a.complement(4), SymbolSet::from_iter([0, 2]));
        assert_eq!(SymbolSet::full(128).len(), 128);
    }

    #[test]
    fn duplicate_names_rejected() {
        assert!(Alphabet::new(vec![Symbol::plain("a"), Symbol::plain("a")]).is_err());
        assert!(Alphabet::new(vec![Symbol::plain("a b")]).is_err());
    }
}
