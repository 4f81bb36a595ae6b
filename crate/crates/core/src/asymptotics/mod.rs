//! Exchangeability of patterns: asymptotic-pair witnesses, structural
//! obstructions, exchangeability graphs, chain distances and BCE profiles.
//!
//! A pair `p, q` on `F` is exchangeable when some asymptotic pair `(x, y)`
//! has `x|F = p` and `y|F = q`. Witnesses are searched inside `K`, the box
//! of radius `r` around the centre of `F`'s bounding box:
//!
//! * torus: `x` has period `P = 2(r+m)+1` on every axis and `y` differs from
//!   `x` on a single copy of `K`. Both periodic configurations `x` and
//!   `x'` (the `K`-modification repeated with period `P`) are checked; when
//!   `P >= |K| + span` on every axis, every rule window meets at most one
//!   copy of `K`, so `y` is valid as well;
//! * background: `x` and `y` equal a constant valid configuration outside
//!   the box of radius `r+m`;
//! * open: two finite patterns on the box of radius `r+m`. Not a
//!   certificate, exploration only.

mod graph;
mod obstruction;
mod view;

pub use graph::{
    bce_profile, chain_distance, exchangeability_graph, BceProfile, BceRecord, Edge, EdgeClass, ExchangeabilityGraph,
    PairSelection,
};
pub use obstruction::{check_obstruction, Obstruction, ObstructionKind, ObstructionRegistry, Side};
pub use view::ShiftView;

use crate::alphabet::{SymbolId, SymbolSet};
use crate::error::{Error, Result};
use crate::lattice::{box_support, Coord, Support};
use crate::pattern::{Pattern, TorusConfig};
use crate::solver::{solve_space, Axis, Link, Outcome, Region, SearchBudget, Shift, Space};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessMode {
    Torus,
    Background,
    Open,
    /// Torus first, then background.
    Auto,
}

impl std::str::FromStr for WitnessMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(WitnessMode::Torus),
            "background" => Ok(WitnessMode::Background),
            "open" => Ok(WitnessMode::Open),
            "auto" => Ok(WitnessMode::Auto),
            _ => Err(Error::InvalidInput(format!("unknown witness mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExchangeabilityParams {
    /// Pairs agree outside the box of this radius around `F`'s centre.
    pub r: u32,
    pub m: u32,
    pub mode: WitnessMode,
    pub budget: SearchBudget,
}

impl ExchangeabilityParams {
    pub fn new(r: u32, m: u32) -> Self {
        ExchangeabilityParams { r, m, mode: WitnessMode::Auto, budget: SearchBudget::default() }
    }

    /// Smallest `r` whose box covers `f`, and the smallest safe margin.
    pub fn for_support(shift: &Shift, f: &Support) -> Self {
        let (c, _) = frame(f);
        let r = f.iter().map(|x| (*x - c).linf()).max().unwrap_or(0);
        Self::new(r, min_margin(shift))
    }

    pub fn mode(mut self, mode: WitnessMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn budget(mut self, budget: SearchBudget) -> Self {
        self.budget = budget;
        self
    }

    pub fn periods(&self, d: usize) -> Vec<u32> {
        vec![2 * (self.r + self.m) + 1; d]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    TorusPair,
    BackgroundPair,
    OpenPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layer {
    Torus(TorusConfig),
    Pattern(Pattern),
}

/// A pair of configurations (over the source shift for factor views).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub kind: WitnessKind,
    pub left: Layer,
    pub right: Layer,
    /// Centre and radius of `K`.
    pub centre: Coord,
    pub r: u32,
    /// Cells of `K` where the views of the two layers differ.
    pub differing: Support,
    /// Symbol outside the finite part, for background pairs.
    pub background: Option<SymbolId>,
}

impl Witness {
    /// A torus pair built by hand; `differing` is computed from the layers.
    pub fn torus_pair(view: &ShiftView, left: TorusConfig, right: TorusConfig, centre: Coord, r: u32) -> Self {
        let (left, right) = (Layer::Torus(left), Layer::Torus(right));
        let differing = view_diff(view, &left, &right, &cube(centre, r));
        Witness { kind: WitnessKind::TorusPair, left, right, centre, r, differing, background: None }
    }

    pub fn certifying(&self) -> bool {
        self.kind != WitnessKind::OpenPair
    }

    fn swap(mut self) -> Self {
        std::mem::swap(&mut self.left, &mut self.right);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Classification {
    Witness(Witness),
    /// The whole search space at these parameters was refuted. Not a proof.
    NoWitnessUpTo { r: u32, m: u32, mode: WitnessMode },
    Obstructed(Obstruction),
    BudgetExhausted,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Witness(_) => "witness",
            Classification::NoWitnessUpTo { .. } => "no-witness",
            Classification::Obstructed(_) => "obstructed",
            Classification::BudgetExhausted => "budget-exhausted",
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Classification::Witness(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_witness(&self) -> bool {
        matches!(self, Classification::Witness(_))
    }
}

/// Largest rule span per axis.
pub fn rule_spans(shift: &Shift) -> Vec<u32> {
    let d = shift.dimension();
    let mut out = vec![0; d];
    for f in shift.spec().forbidden() {
        for (i, o) in out.iter_mut().enumerate() {
            *o = (*o).max(f.span(i));
        }
    }
    out
}

/// Smallest margin for which torus witnesses are sound.
pub fn min_margin(shift: &Shift) -> u32 {
    rule_spans(shift).iter().map(|s| s.div_ceil(2)).max().unwrap_or(0)
}

/// Centre of the bounding box (rounded down) and the bounding box itself.
fn frame(f: &Support) -> (Coord, Option<(Vec<i32>, Vec<i32>)>) {
    let d = f.dim();
    match f.bounds() {
        None => (Coord::zero(d), None),
        Some((lo, hi)) => {
            let c: Vec<i32> = lo.iter().zip(&hi).map(|(l, h)| (l + h).div_euclid(2)).collect();
            (Coord::new(&c), Some((lo, hi)))
        }
    }
}

fn cube(centre: Coord, r: u32) -> Support {
    box_support(centre.dim(), r).translate(centre)
}

fn range_region(centre: Coord, radius: &[u32]) -> Region {
    Region::Product(
        radius.iter().enumerate().map(|(i, &r)| Axis::Range(centre[i] - r as i32, centre[i] + r as i32)).collect(),
    )
}

/// Classifies a pair using the default obstruction registry.
pub fn exchangeable(view: &ShiftView, p: &Pattern, q: &Pattern, params: &ExchangeabilityParams) -> Result<Classification> {
    exchangeable_with(view, &ObstructionRegistry::default(), p, q, params)
}

/// Witness search first; registered obstructions only when no witness is
/// found. Pairs are searched in canonical order so the answer is symmetric.
pub fn exchangeable_with(
    view: &ShiftView,
    registry: &ObstructionRegistry,
    p: &Pattern,
    q: &Pattern,
    params: &ExchangeabilityParams,
) -> Result<Classification> {
    check_pair(view, p, q, params)?;
    if q.symbols() < p.symbols() {
        let c = exchangeable_with(view, registry, q, p, params)?;
        return Ok(match c {
            Classification::Witness(w) => Classification::Witness(w.swap()),
            Classification::Obstructed(o) => Classification::Obstructed(o.swapped()),
            other => other,
        });
    }
    let modes: &[WitnessMode] = match params.mode {
        WitnessMode::Auto => &[WitnessMode::Torus, WitnessMode::Background],
        WitnessMode::Torus => &[WitnessMode::Torus],
        WitnessMode::Background => &[WitnessMode::Background],
        WitnessMode::Open => &[WitnessMode::Open],
    };
    let mut exhausted = false;
    for &mode in modes {
        match search(view, p, q, params, mode)? {
            Outcome::Found(w) => return Ok(Classification::Witness(w)),
            Outcome::Refuted => {}
            Outcome::BudgetExhausted => exhausted = true,
        }
    }
    if let Some(o) = registry.find(view, p, q) {
        return Ok(Classification::Obstructed(o));
    }
    Ok(if exhausted {
        Classification::BudgetExhausted
    } else {
        Classification::NoWitnessUpTo { r: params.r, m: params.m, mode: params.mode }
    })
}

fn check_pair(view: &ShiftView, p: &Pattern, q: &Pattern, params: &ExchangeabilityParams) -> Result<()> {
    let shift = view.source();
    if p.dim() != shift.dimension() || q.dim() != shift.dimension() {
        return Err(Error::DimensionMismatch { expected: shift.dimension(), got: p.dim().max(q.dim()) });
    }
    if p.support() != q.support() {
        return Err(Error::InvalidInput("patterns have different supports".into()));
    }
    let (c, _) = frame(p.support());
    if p.support().iter().any(|x| (*x - c).linf() > params.r) {
        return Err(Error::InvalidInput(format!("support does not fit in a box of radius {}", params.r)));
    }
    let need = min_margin(shift);
    if params.mode != WitnessMode::Open && params.m < need {
        return Err(Error::InvalidInput(format!("margin {} is below the rule reach {need}", params.m)));
    }
    let vb = params.budget.clone();
    if !view.validate(p, &vb)? || !view.validate(q, &vb)? {
        return Err(Error::InvalidInput("pattern violates the shift's rules".into()));
    }
    Ok(())
}

fn pin_pair(view: &ShiftView, space: &mut Space, p: &Pattern, q: &Pattern) {
    for (c, s) in p.iter() {
        space.pin(0, &c, view.preimage(s));
    }
    for (c, s) in q.iter() {
        space.pin(1, &c, view.preimage(s));
    }
}

fn search(
    view: &ShiftView,
    p: &Pattern,
    q: &Pattern,
    params: &ExchangeabilityParams,
    mode: WitnessMode,
) -> Result<Outcome<Witness>> {
    let shift = view.source();
    let d = shift.dimension();
    let (centre, _) = frame(p.support());
    let k = cube(centre, params.r);
    let own = if p == q { Support::empty(d) } else { k.clone() };
    let budget = &params.budget;
    let witness = |kind, left: Layer, right: Layer, background| {
        let differing = view_diff(view, &left, &right, &k);
        Witness { kind, left, right, centre, r: params.r, differing, background }
    };
    let out = match mode {
        WitnessMode::Torus | WitnessMode::Auto => {
            let periods = params.periods(d);
            let mut space = Space::pair(shift, Region::torus(&periods), &own, Link::Alias);
            pin_pair(view, &mut space, p, q);
            solve_space(shift, &space, true, budget).map(|v| {
                let t = |vals: &[SymbolId]| {
                    let mut t = TorusConfig::constant(periods.clone(), 0);
                    for (c, s) in space.cells.iter().zip(vals) {
                        t.set(c, *s);
                    }
                    t
                };
                witness(WitnessKind::TorusPair, Layer::Torus(t(&v[0])), Layer::Torus(t(&v[1])), None)
            })
        }
        WitnessMode::Background => {
            let spans = rule_spans(shift);
            let inner = cube(centre, params.r + params.m);
            let radius: Vec<u32> = spans.iter().map(|s| params.r + params.m + s).collect();
            let mut exhausted = false;
            let mut found = None;
            for b in backgrounds(shift)? {
                let mut space = Space::pair(shift, range_region(centre, &radius), &own, Link::Alias);
                pin_pair(view, &mut space, p, q);
                let cells = space.cells.clone();
                for c in cells.iter().filter(|c| !inner.contains(c)) {
                    space.pin(0, c, SymbolSet::single(b));
                }
                match solve_space(shift, &space, false, budget) {
                    Outcome::Found(v) => {
                        let pat = |vals: &[SymbolId]| {
                            Pattern::new(d, cells.iter().copied().zip(vals.iter().copied()))
                                .restrict(&inner)
                                .expect("inner box inside the region")
                        };
                        let (l, r) = (pat(&v[0]), pat(&v[1]));
                        found = Some(witness(WitnessKind::BackgroundPair, Layer::Pattern(l), Layer::Pattern(r), Some(b)));
                        break;
                    }
                    Outcome::Refuted => {}
                    Outcome::BudgetExhausted => exhausted = true,
                }
            }
            match found {
                Some(w) => Outcome::Found(w),
                None if exhausted => Outcome::BudgetExhausted,
                None => Outcome::Refuted,
            }
        }
        WitnessMode::Open => {
            let region = cube(centre, params.r + params.m);
            let link = match view.cell_map() {
                Some(map) => Link::Image(map),
                None => Link::Alias,
            };
            let mut space = Space::pair(shift, Region::Cells(region), &own, link);
            pin_pair(view, &mut space, p, q);
            solve_space(shift, &space, false, budget).map(|v| {
                let pat = |vals: &[SymbolId]| Pattern::new(d, space.cells.iter().copied().zip(vals.iter().copied()));
                witness(WitnessKind::OpenPair, Layer::Pattern(pat(&v[0])), Layer::Pattern(pat(&v[1])), None)
            })
        }
    };
    if let Outcome::Found(w) = &out {
        if !check_witness(view, w, p, q)? {
            return Err(Error::Precondition("internal consistency check failed: witness".into()));
        }
    }
    Ok(out)
}

/// Symbols whose constant configuration is valid.
fn backgrounds(shift: &Shift) -> Result<Vec<SymbolId>> {
    let d = shift.dimension();
    let mut out = Vec::new();
    for b in 0..shift.alphabet_len() {
        if shift.validate_torus(&TorusConfig::constant(vec![1; d], b as SymbolId))? {
            out.push(b as SymbolId);
        }
    }
    Ok(out)
}

fn layer_at(l: &Layer, c: &Coord, background: Option<SymbolId>) -> Option<SymbolId> {
    match l {
        Layer::Torus(t) => Some(t.get(c)),
        Layer::Pattern(p) => p.get(c).or(background),
    }
}

fn view_diff(view: &ShiftView, left: &Layer, right: &Layer, k: &Support) -> Support {
    let img = |s: Option<SymbolId>| s.map(|s| view.cell_map().map_or(s, |m| m[s as usize]));
    Support::new(k.dim(), k.iter().filter(|c| img(layer_at(left, c, None)) != img(layer_at(right, c, None))).copied())
}

/// Replays a witness against `p` and `q` without the search engine.
pub fn check_witness(view: &ShiftView, w: &Witness, p: &Pattern, q: &Pattern) -> Result<bool> {
    let shift = view.source();
    let d = shift.dimension();
    if p.support() != q.support() || w.centre.dim() != d {
        return Ok(false);
    }
    let k = cube(w.centre, w.r);
    if !p.support().is_subset(&k) {
        return Ok(false);
    }
    let image = |s: SymbolId| view.cell_map().map_or(s, |m| m[s as usize]);
    let shows = |l: &Layer, pat: &Pattern| {
        pat.iter().all(|(c, s)| layer_at(l, &c, w.background).map(image) == Some(s))
    };
    if !shows(&w.left, p) || !shows(&w.right, q) {
        return Ok(false);
    }
    if view_diff(view, &w.left, &w.right, &k) != w.differing {
        return Ok(false);
    }
    let spans = rule_spans(shift);
    match (w.kind, &w.left, &w.right) {
        (WitnessKind::TorusPair, Layer::Torus(a), Layer::Torus(b)) => {
            if a.periods() != b.periods() || a.dim() != d {
                return Ok(false);
            }
            // every rule window meets at most one copy of K
            let side = 2 * w.r + 1;
            if a.periods().iter().zip(&spans).any(|(&p, &s)| p < side + s) {
                return Ok(false);
            }
            let kw: std::collections::HashSet<Coord> = k.iter().map(|c| c.wrap(a.periods())).collect();
            let outside_k = a.domain().iter().all(|c| a.get(c) == b.get(c) || kw.contains(c));
            Ok(outside_k && shift.validate_torus(a)? && shift.validate_torus(b)?)
        }
        (WitnessKind::BackgroundPair, Layer::Pattern(a), Layer::Pattern(b)) => {
            let Some(bg) = w.background else { return Ok(false) };
            if a.support() != b.support() || !k.is_subset(a.support()) {
                return Ok(false);
            }
            let outside_k = a.iter().all(|(c, s)| k.contains(&c) || b.get(&c) == Some(s));
            Ok(outside_k && shift.validate_eventually_constant(a, bg)? && shift.validate_eventually_constant(b, bg)?)
        }
        (WitnessKind::OpenPair, Layer::Pattern(a), Layer::Pattern(b)) => {
            if a.support() != b.support() || !k.is_subset(a.support()) {
                return Ok(false);
            }
            let outside_k = a.iter().all(|(c, s)| k.contains(&c) || b.get(&c).map(image) == Some(image(s)));
            Ok(outside_k && shift.validate(a)? && shift.validate(b)?)
        }
        _ => Ok(false),
    }
}
