//! Shift specifications, Wang compilation and local validity.

use crate::alphabet::{Alphabet, SymbolId, SymbolSet};
use crate::error::{Error, Result};
use crate::lattice::{Coord, Support};
use crate::pattern::{Pattern, TorusConfig};
use std::collections::{BTreeMap, BTreeSet};

/// A cylinder: each listed offset must carry a symbol from its set for the
/// pattern to occur. A plain forbidden pattern uses singleton sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ForbiddenPattern {
    cells: Vec<(Coord, SymbolSet)>,
}

impl ForbiddenPattern {
    pub fn new(cells: Vec<(Coord, SymbolSet)>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::InvalidSpec("empty forbidden pattern".into()));
        }
        let d = cells[0].0.dim();
        let mut cells = cells;
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        for w in cells.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidSpec(format!("repeated offset {}", w[0].0)));
            }
        }
        if cells.iter().any(|(c, s)| c.dim() != d || s.is_empty()) {
            return Err(Error::InvalidSpec("malformed forbidden pattern".into()));
        }
        Ok(ForbiddenPattern { cells })
    }

    pub fn from_pattern(p: &Pattern) -> Result<Self> {
        ForbiddenPattern::new(p.iter().map(|(c, s)| (c, SymbolSet::single(s))).collect())
    }

    pub fn cells(&self) -> &[(Coord, SymbolSet)] {
        &self.cells
    }

    pub fn arity(&self) -> usize {
        self.cells.len()
    }

    pub fn dim(&self) -> usize {
        self.cells[0].0.dim()
    }

    /// `hi - lo` of the offsets along `axis`.
    pub fn span(&self, axis: usize) -> u32 {
        let lo = self.cells.iter().map(|c| c.0[axis]).min().unwrap();
        let hi = self.cells.iter().map(|c| c.0[axis]).max().unwrap();
        (hi - lo) as u32
    }

    /// Whether the placement translated by `t` occurs under `lookup`.
    pub fn occurs(&self, t: Coord, lookup: impl Fn(&Coord) -> Option<SymbolId>) -> bool {
        self.cells.iter().all(|(o, set)| lookup(&(t + *o)).is_some_and(|s| set.contains(s)))
    }

    /// Every plain pattern covered by this cylinder.
    pub fn expand(&self) -> Vec<Pattern> {
        let d = self.dim();
        let mut out = vec![Vec::new()];
        for (c, set) in &self.cells {
            let mut next = Vec::new();
            for partial in &out {
                for s in set.iter() {
                    let mut v: Vec<(Coord, SymbolId)> = Vec::clone(partial);
                    v.push((*c, s));
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(|v| Pattern::new(d, v)).collect()
    }
}

/// A location where a forbidden pattern occurs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: usize,
    pub at: Coord,
}

/// An SFT presentation: alphabet plus forbidden cylinders, optionally in
/// Wang mode (face labels still to be compiled into dominoes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSpec {
    name: String,
    dimension: usize,
    rule_radius: Vec<u32>,
    alphabet: Alphabet,
    classes: BTreeMap<String, SymbolSet>,
    forbidden: Vec<ForbiddenPattern>,
    wang_mode: bool,
    notes: Vec<String>,
}

impl ShiftSpec {
    pub fn new(
        name: impl Into<String>,
        dimension: usize,
        rule_radius: Vec<u32>,
        alphabet: Alphabet,
        forbidden: Vec<ForbiddenPattern>,
        wang_mode: bool,
    ) -> Result<Self> {
        let spec = ShiftSpec {
            name: name.into(),
            dimension,
            rule_radius,
            alphabet,
            classes: BTreeMap::new(),
            forbidden,
            wang_mode,
            notes: Vec::new(),
        };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        let d = self.dimension;
        if d == 0 || d > crate::lattice::MAX_DIM {
            return Err(Error::UnsupportedDimension(d));
        }
        if self.rule_radius.len() != d {
            return Err(Error::InvalidSpec(format!("rule_radius needs {d} entries")));
        }
        let n = self.alphabet.len();
        if n == 0 {
            return Err(Error::InvalidSpec("empty alphabet".into()));
        }
        for f in &self.forbidden {
            if f.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: f.dim() });
            }
            for (_, set) in f.cells() {
                if !set.is_subset(self.alphabet.all()) {
                    return Err(Error::InvalidSpec("forbidden pattern uses unknown symbol".into()));
                }
            }
            for axis in 0..d {
                if f.span(axis) > 2 * self.rule_radius[axis] {
                    return Err(Error::InvalidSpec(format!(
                        "forbidden pattern spans {} cells along axis {axis}, beyond rule radius {}",
                        f.span(axis) + 1,
                        self.rule_radius[axis]
                    )));
                }
            }
        }
        for sym in self.alphabet.symbols() {
            if let Some(faces) = &sym.faces {
                if faces.len() != 2 * d {
                    return Err(Error::InvalidSpec(format!("symbol `{}` needs {} faces", sym.name, 2 * d)));
                }
            }
        }
        if self.alphabet.has_faces() {
            if let Some(s) = self.alphabet.symbols().iter().find(|s| s.faces.is_none()) {
                return Err(Error::MissingFaceLabels(s.name.clone()));
            }
        }
        Ok(())
    }

    /// Named symbol classes, used by the file format for readability.
    pub fn with_classes(mut self, classes: BTreeMap<String, SymbolSet>) -> Self {
        self.classes = classes;
        self
    }

    /// Free-text header lines carried through the file format.
    pub fn with_notes(mut self, notes: Vec<String>) -> Self {
        self.notes = notes;
        self
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rule_radius(&self) -> &[u32] {
        &self.rule_radius
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn classes(&self) -> &BTreeMap<String, SymbolSet> {
        &self.classes
    }

    pub fn forbidden(&self) -> &[ForbiddenPattern] {
        &self.forbidden
    }

    pub fn wang_mode(&self) -> bool {
        self.wang_mode
    }

    pub fn symbol(&self, name: &str) -> Result<SymbolId> {
        self.alphabet.id(name)
    }

    fn check_symbols(&self, max: Option<SymbolId>) -> Result<()> {
        match max {
            Some(s) if s as usize >= self.alphabet.len() => {
                Err(Error::SymbolOutOfRange { symbol: s as usize, alphabet: self.alphabet.len() })
            }
            _ => Ok(()),
        }
    }

    fn ready(&self) -> Result<()> {
        if self.wang_mode {
            Err(Error::NotCompiled)
        } else {
            Ok(())
        }
    }

    /// First forbidden placement inside the pattern, if any.
    pub fn first_violation(&self, p: &Pattern) -> Result<Option<Violation>> {
        self.ready()?;
        self.check_symbols(p.max_symbol())?;
        if p.dim() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: p.dim() });
        }
        Ok(scan(&self.forbidden, p.support().cells(), |c| p.get(c)))
    }

    /// Local admissibility of a finite pattern.
    pub fn validate_pattern(&self, p: &Pattern) -> Result<bool> {
        Ok(self.first_violation(p)?.is_none())
    }

    /// Validity of the periodic configuration (placements wrap).
    pub fn validate_torus(&self, t: &TorusConfig) -> Result<bool> {
        Ok(self.torus_violation(t)?.is_none())
    }

    pub fn torus_violation(&self, t: &TorusConfig) -> Result<Option<Violation>> {
        self.ready()?;
        self.check_symbols(t.data().iter().copied().max())?;
        if t.dim() != self.dimension {
            return Err(Error::DimensionMismatch { expected: self.dimension, got: t.dim() });
        }
        let dom = t.domain();
        Ok(scan(&self.forbidden, dom.cells(), |c| Some(t.get(c))))
    }

    /// Validity of a configuration periodic along the first `lateral.len()`
    /// axes and finite along the rest; `p` holds one lateral period.
    pub fn validate_slab(&self, p: &Pattern, lateral: &[u32]) -> Result<bool> {
        self.ready()?;
        self.check_symbols(p.max_symbol())?;
        let k = lateral.len();
        let lookup = |c: &Coord| {
            let mut w = *c;
            for (i, &per) in lateral.iter().enumerate().take(k) {
                w = w.with(i, c[i].rem_euclid(per as i32));
            }
            p.get(&w)
        };
        Ok(scan(&self.forbidden, p.support().cells(), lookup).is_none())
    }
}

/// Finds a placement of a rule whose first cell lands on one of `cells`.
/// Every placement meeting the region is found this way.
pub fn scan(
    rules: &[ForbiddenPattern],
    cells: &[Coord],
    lookup: impl Fn(&Coord) -> Option<SymbolId>,
) -> Option<Violation> {
    for (ri, f) in rules.iter().enumerate() {
        let (o0, s0) = f.cells()[0];
        for &c in cells {
            match lookup(&c) {
                Some(s) if s0.contains(s) => {}
                _ => continue,
            }
            let t = c - o0;
            if f.occurs(t, &lookup) {
                return Some(Violation { rule: ri, at: t });
            }
        }
    }
    None
}

/// Direct Wang check: every pair of adjacent cells agrees on the shared face.
pub fn faces_match(alphabet: &Alphabet, p: &Pattern) -> Result<bool> {
    for (c, s) in p.iter() {
        let fs = alphabet.symbol(s).faces.as_ref().ok_or_else(|| Error::MissingFaceLabels(alphabet.name(s).into()))?;
        for axis in 0..p.dim() {
            let n = c + Coord::unit(p.dim(), axis);
            if let Some(t) = p.get(&n) {
                let ft = alphabet.symbol(t).faces.as_ref().ok_or_else(|| Error::MissingFaceLabels(alphabet.name(t).into()))?;
                if fs[2 * axis + 1] != ft[2 * axis] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Compiles face matching into forbidden dominoes and leaves Wang mode.
///
/// For each axis and each label `L` on a positive face, the domino
/// (positive face = `L`, next cell's negative face != `L`) is forbidden.
pub fn compile_wang(spec: &ShiftSpec) -> Result<ShiftSpec> {
    if !spec.wang_mode {
        return Err(Error::NotWang);
    }
    let alpha = &spec.alphabet;
    for s in alpha.symbols() {
        if s.faces.is_none() {
            return Err(Error::MissingFaceLabels(s.name.clone()));
        }
    }
    let d = spec.dimension;
    let face = |s: usize, f: usize| alpha.symbols()[s].faces.as_ref().unwrap()[f].as_str();
    let mut forbidden = spec.forbidden.clone();
    for axis in 0..d {
        let labels: BTreeSet<&str> = (0..alpha.len()).map(|s| face(s, 2 * axis + 1)).collect();
        for l in labels {
            let a = SymbolSet::from_iter((0..alpha.len()).filter(|&s| face(s, 2 * axis + 1) == l).map(|s| s as SymbolId));
            let b = SymbolSet::from_iter((0..alpha.len()).filter(|&s| face(s, 2 * axis) != l).map(|s| s as SymbolId));
            if !b.is_empty() {
                forbidden.push(ForbiddenPattern::new(vec![(Coord::zero(d), a), (Coord::unit(d, axis), b)])?);
            }
        }
    }
    let mut radius = spec.rule_radius.clone();
    for r in radius.iter_mut() {
        *r = (*r).max(1);
    }
    let mut out = ShiftSpec::new(spec.name.clone(), d, radius, alpha.clone(), forbidden, false)?;
    out.classes = spec.classes.clone();
    out.notes = spec.notes.clone();
    Ok(out)
}

/// The support of a forbidden pattern's offsets.
pub fn rule_support(f: &ForbiddenPattern) -> Support {
    Support::new(f.dim(), f.cells().iter().map(|c| c.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Symbol;

    fn golden() -> ShiftSpec {
        let one = SymbolSet::single(1);
        ShiftSpec::new(
            "gm",
            1,
            vec![1],
            Alphabet::numeric(2),
            vec![ForbiddenPattern::new(vec![(Coord::new(&[0]), one), (Coord::new(&[1]), one)]).unwrap()],
            false,
        )
        .unwrap()
    }

    #[test]
    fn golden_mean_validation() {
        let g = golden();
        assert!(!g.validate_pattern(&Pattern::word(0, &[1, 1])).unwrap());
        assert!(g.validate_pattern(&Pattern::word(0, &[1, 0, 1])).unwrap());
        assert!(matches!(
            g.validate_pattern(&Pattern::word(0, &[2])),
            Err(Error::SymbolOutOfRange { .. })
        ));
        let t = TorusConfig::constant(vec![1], 1);
        assert!(!g.validate_torus(&t).unwrap());
    }

    #[test]
    fn wang_two_symbol_dominoes() {
        let a = Alphabet::new(vec![Symbol::with_faces("A", &["0", "0"]), Symbol::with_faces("B", &["1", "1"])]).unwrap();
        let spec = ShiftSpec::new("ab", 1, vec![1], a, vec![], true).unwrap();
        assert!(matches!(spec.validate_pattern(&Pattern::word(0, &[0])), Err(Error::NotCompiled)));
        let c = compile_wang(&spec).unwrap();
        assert!(!c.wang_mode());
        let mut dominoes: Vec<Vec<SymbolId>> =
            c.forbidden().iter().flat_map(|f| f.expand()).map(|p| p.symbols().to_vec()).collect();
        dominoes.sort();
        assert_eq!(dominoes, vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(compile_wang(&c), Err(Error::NotWang)));
    }

    #[test]
    fn missing_faces_rejected() {
        let a = Alphabet::new(vec![Symbol::with_faces("A", &["0", "0"]), Symbol::plain("B")]).unwrap();
        assert!(matches!(ShiftSpec::new("x", 1, vec![1], a, vec![], true), Err(Error::MissingFaceLabels(_))));
    }

    #[test]
    fn radius_enforced() {
        let one = SymbolSet::single(1);
        let f = ForbiddenPattern::new(vec![(Coord::new(&[0]), one), (Coord::new(&[3]), one)]).unwrap();
        assert!(ShiftSpec::new("x", 1, vec![1], Alphabet::numeric(2), vec![f], false).is_err());
    }

    #[test]
    fn slab_wraps_laterally() {
        let g2 = {
            let one = SymbolSet::single(1);
            ShiftSpec::new(
                "hs-x",
                2,
                vec![1, 1],
                Alphabet::numeric(2),
                vec![ForbiddenPattern::new(vec![(Coord::new(&[0, 0]), one), (Coord::new(&[1, 0]), one)]).unwrap()],
                false,
            )
            .unwrap()
        };
        // period 2 along x, finite along y: 1 at x=0 and x=1 collide through the wrap
        let p = Pattern::new(2, [(Coord::new(&[0, 0]), 1), (Coord::new(&[1, 0]), 0)]);
        assert!(g2.validate_slab(&p, &[2]).unwrap());
        let p = Pattern::new(2, [(Coord::new(&[0, 0]), 1)]);
        assert!(!g2.validate_slab(&p, &[1]).unwrap());
    }
}
