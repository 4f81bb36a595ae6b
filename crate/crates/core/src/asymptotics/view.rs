use crate::alphabet::{Alphabet, SymbolId, SymbolSet};
use crate::code::BlockCode;
use crate::error::{Error, Result};
use crate::lattice::Support;
use crate::pattern::{Pattern, TorusConfig};
use crate::solver::{enumerate_language, solve_space, Language, Outcome, Region, SearchBudget, Shift, Space};

/// The shift whose patterns are classified: an SFT, or the image of one
/// under a single-cell code (the Worm Shift is the colour-erased precursor).
#[derive(Clone, Debug)]
pub enum ShiftView {
    Sft(Shift),
    Factor { source: Shift, code: BlockCode },
}

impl ShiftView {
    pub fn factor(source: Shift, code: BlockCode) -> Result<Self> {
        if code.cell_map().is_none() {
            return Err(Error::InvalidInput("factor views need a single-cell code".into()));
        }
        if code.source_len() != source.alphabet_len() {
            return Err(Error::InvalidInput("code source alphabet differs from the shift's".into()));
        }
        Ok(ShiftView::Factor { source, code })
    }

    pub fn source(&self) -> &Shift {
        match self {
            ShiftView::Sft(s) | ShiftView::Factor { source: s, .. } => s,
        }
    }

    pub fn name(&self) -> String {
        match self {
            ShiftView::Sft(s) => s.name().to_string(),
            ShiftView::Factor { source, .. } => format!("{}/factor", source.name()),
        }
    }

    pub fn dimension(&self) -> usize {
        self.source().dimension()
    }

    /// Alphabet of the view's patterns.
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            ShiftView::Sft(s) => s.spec().alphabet(),
            ShiftView::Factor { code, .. } => code.target(),
        }
    }

    pub fn cell_map(&self) -> Option<&[SymbolId]> {
        match self {
            ShiftView::Sft(_) => None,
            ShiftView::Factor { code, .. } => code.cell_map(),
        }
    }

    /// Source symbols showing as `s`.
    pub fn preimage(&self, s: SymbolId) -> SymbolSet {
        match self.cell_map() {
            None => SymbolSet::single(s),
            Some(map) => SymbolSet::from_iter((0..map.len()).filter(|&a| map[a] == s).map(|a| a as SymbolId)),
        }
    }

    pub fn pins(&self, p: &Pattern) -> Vec<(crate::lattice::Coord, SymbolSet)> {
        p.iter().map(|(c, s)| (c, self.preimage(s))).collect()
    }

    pub fn image(&self, p: &Pattern) -> Pattern {
        match self.cell_map() {
            None => p.clone(),
            Some(map) => Pattern::new(p.dim(), p.iter().map(|(c, s)| (c, map[s as usize]))),
        }
    }

    pub fn image_torus(&self, t: &TorusConfig) -> TorusConfig {
        match self.cell_map() {
            None => t.clone(),
            Some(map) => TorusConfig::new(t.periods().to_vec(), t.data().iter().map(|&s| map[s as usize]).collect())
                .expect("same shape"),
        }
    }

    /// Local validity: for a factor, some locally valid source pattern on
    /// the same support maps onto `p`.
    pub fn validate(&self, p: &Pattern, budget: &SearchBudget) -> Result<bool> {
        if p.max_symbol().is_some_and(|s| s as usize >= self.alphabet().len()) {
            return Err(Error::SymbolOutOfRange { symbol: p.max_symbol().unwrap() as usize, alphabet: self.alphabet().len() });
        }
        match self {
            ShiftView::Sft(s) => s.validate(p),
            ShiftView::Factor { source, .. } => {
                let mut space = Space::single(source, Region::Cells(p.support().clone()));
                for (c, set) in self.pins(p) {
                    space.pin(0, &c, set);
                }
                match solve_space(source, &space, false, budget) {
                    Outcome::Found(_) => Ok(true),
                    Outcome::Refuted => Ok(false),
                    Outcome::BudgetExhausted => Err(Error::BudgetExhausted { lower_bound: "0".into() }),
                }
            }
        }
    }

    /// The m-extendable language of the view on `f`, sorted.
    pub fn language(&self, f: &Support, m: u32, budget: &SearchBudget, cap: usize) -> Result<Language> {
        match self {
            ShiftView::Sft(s) => enumerate_language(s, f, m, budget, cap),
            ShiftView::Factor { source, .. } => {
                // Source languages can be much larger than their images.
                let src = enumerate_language(source, f, m, budget, usize::MAX)?;
                let mut pats: Vec<Pattern> = src.patterns.iter().map(|p| self.image(p)).collect();
                pats.sort_by(|a, b| a.symbols().cmp(b.symbols()));
                pats.dedup();
                let truncated = pats.len() > cap;
                pats.truncate(cap);
                Ok(Language { support: f.clone(), margin: m, patterns: pats, truncated })
            }
        }
    }

    /// Id of the symbol named `white` in the view alphabet.
    pub fn white(&self) -> Option<SymbolId> {
        self.alphabet().id("white").ok()
    }

    /// Symbols with attribute `cube = 1`.
    pub fn cubes(&self) -> SymbolSet {
        self.alphabet().select(|s| s.get("cube") == Some(1))
    }
}
