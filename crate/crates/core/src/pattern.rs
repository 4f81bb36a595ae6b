//! Finite patterns and fully periodic configurations.

use crate::alphabet::SymbolId;
use crate::error::{Error, Result};
use crate::lattice::{Coord, Support};
use serde::{Deserialize, Serialize};

/// A map from a finite support to symbols.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Pattern {
    support: Support,
    symbols: Vec<SymbolId>,
}

impl Pattern {
    /// Builds a pattern; later entries for a repeated cell win.
    pub fn new(dim: usize, cells: impl IntoIterator<Item = (Coord, SymbolId)>) -> Self {
        let mut v: Vec<(Coord, SymbolId)> = cells.into_iter().collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Coord, SymbolId)> = Vec::with_capacity(v.len());
        for (c, s) in v {
            match out.last_mut() {
                Some(last) if last.0 == c => last.1 = s,
                _ => out.push((c, s)),
            }
        }
        let support = Support::new(dim, out.iter().map(|e| e.0));
        Pattern { support, symbols: out.into_iter().map(|e| e.1).collect() }
    }

    /// Symbols listed in the support's canonical order.
    pub fn from_parts(support: Support, symbols: Vec<SymbolId>) -> Result<Self> {
        if support.len() != symbols.len() {
            return Err(Error::InvalidInput(format!(
                "{} symbols for {} cells",
                symbols.len(),
                support.len()
            )));
        }
        Ok(Pattern { support, symbols })
    }

    pub fn constant(support: &Support, s: SymbolId) -> Self {
        Pattern { support: support.clone(), symbols: vec![s; support.len()] }
    }

    /// A Z^1 pattern on `start, start+1, ...`.
    pub fn word(start: i32, symbols: &[SymbolId]) -> Self {
        Pattern::new(1, symbols.iter().enumerate().map(|(i, &s)| (Coord::new(&[start + i as i32]), s)))
    }

    pub fn dim(&self) -> usize {
        self.support.dim()
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, c: &Coord) -> Option<SymbolId> {
        self.support.index_of(c).map(|i| self.symbols[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Coord, SymbolId)> + '_ {
        self.support.iter().copied().zip(self.symbols.iter().copied())
    }

    pub fn translate(&self, v: Coord) -> Pattern {
        Pattern { support: self.support.translate(v), symbols: self.symbols.clone() }
    }

    /// Restriction to a sub-support; `None` if `s` is not contained in the support.
    pub fn restrict(&self, s: &Support) -> Option<Pattern> {
        let symbols: Option<Vec<SymbolId>> = s.iter().map(|c| self.get(c)).collect();
        Some(Pattern { support: s.clone(), symbols: symbols? })
    }

    /// Cells on which two patterns with the same support disagree.
    pub fn diff(&self, other: &Pattern) -> Support {
        Support::new(
            self.dim(),
            self.iter().filter(|(c, s)| other.get(c) != Some(*s)).map(|(c, _)| c),
        )
    }

    pub fn max_symbol(&self) -> Option<SymbolId> {
        self.symbols.iter().copied().max()
    }
}

/// A fully periodic configuration stored as its fundamental domain
/// `[0, p_0) x ... x [0, p_{d-1})` in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct TorusConfig {
    periods: Vec<u32>,
    data: Vec<SymbolId>,
}

impl TorusConfig {
    pub fn new(periods: Vec<u32>, data: Vec<SymbolId>) -> Result<Self> {
        if periods.is_empty() || periods.len() > crate::lattice::MAX_DIM || periods.contains(&0) {
            return Err(Error::InvalidInput(format!("bad periods {periods:?}")));
        }
        let n: usize = periods.iter().map(|&p| p as usize).product();
        if n != data.len() {
            return Err(Error::InvalidInput(format!("{} symbols for {} torus cells", data.len(), n)));
        }
        Ok(TorusConfig { periods, data })
    }

    pub fn constant(periods: Vec<u32>, s: SymbolId) -> Self {
        let n: usize = periods.iter().map(|&p| p as usize).product();
        TorusConfig { periods, data: vec![s; n] }
    }

    pub fn from_fn(periods: Vec<u32>, f: impl Fn(&Coord) -> SymbolId) -> Self {
        let dom = domain(&periods);
        let data = dom.iter().map(f).collect();
        TorusConfig { periods, data }
    }

    pub fn dim(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[u32] {
        &self.periods
    }

    pub fn data(&self) -> &[SymbolId] {
        &self.data
    }

    pub fn cells(&self) -> usize {
        self.data.len()
    }

    /// Row-major index of a cell of the fundamental domain.
    pub fn index(&self, c: &Coord) -> usize {
        let w = c.wrap(&self.periods);
        let mut idx = 0usize;
        for (i, &p) in self.periods.iter().enumerate() {
            idx = idx * p as usize + w[i] as usize;
        }
        idx
    }

    /// Value of the periodic configuration at any lattice point.
    pub fn get(&self, c: &Coord) -> SymbolId {
        self.data[self.index(c)]
    }

    pub fn set(&mut self, c: &Coord, s: SymbolId) {
        let i = self.index(c);
        self.data[i] = s;
    }

    pub fn domain(&self) -> Support {
        domain(&self.periods)
    }

    /// The configuration seen through a finite window.
    pub fn window(&self, s: &Support) -> Pattern {
        Pattern { support: s.clone(), symbols: s.iter().map(|c| self.get(c)).collect() }
    }
}

/// Fundamental domain of the given periods.
pub fn domain(periods: &[u32]) -> Support {
    let hi: Vec<i32> = periods.iter().map(|&p| p as i32 - 1).collect();
    Support::rect(&vec![0; periods.len()], &hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::box_support;

    #[test]
    fn translate_roundtrip() {
        let p = Pattern::word(0, &[1, 0, 1]);
        let v = Coord::new(&[3]);
        assert_eq!(p.translate(v).get(&Coord::new(&[5])), Some(1));
        assert_eq!(p.translate(v).translate(-v), p);
        assert_eq!(p.translate(Coord::new(&[0])), p);
    }

    #[test]
    fn torus_indexing_wraps() {
        let t = TorusConfig::from_fn(vec![2, 3], |c| (c[0] * 3 + c[1]) as SymbolId);
        assert_eq!(t.get(&Coord::new(&[1, 2])), 5);
        assert_eq!(t.get(&Coord::new(&[-1, -1])), 5);
        assert_eq!(t.window(&box_support(2, 0)).symbols(), &[0]);
    }

    #[test]
    fn restrict_and_diff() {
        let p = Pattern::constant(&box_support(2, 1), 0);
        let mut q = p.clone();
        q = Pattern::new(2, q.iter().map(|(c, s)| (c, if c == Coord::zero(2) { 1 } else { s })));
        assert_eq!(p.diff(&q).cells(), &[Coord::zero(2)]);
        assert!(p.restrict(&box_support(2, 2)).is_none());
        assert_eq!(p.restrict(&box_support(2, 0)).unwrap().len(), 1);
    }
}
