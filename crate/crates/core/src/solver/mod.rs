//! Extension, enumeration, counting and torus completion by backtracking
//! search with constraint propagation.
//!
//! Value order is ascending symbol index when the budget seed is 0 and a
//! seeded shuffle otherwise. Refutations (`Outcome::Refuted`) are only
//! reported after the whole search space was explored.

mod csp;
pub(crate) mod region;

pub use crate::pattern::TorusConfig;

use crate::alphabet::{SymbolId, SymbolSet};
use crate::error::{Error, Result};
use crate::lattice::{Coord, Support};
use crate::par;
use crate::pattern::Pattern;
use crate::spec::{compile_wang, ForbiddenPattern, ShiftSpec};
use csp::{Engine, Stop, Tracker};
use num_bigint::BigUint;
use num_traits::Zero;
pub(crate) use region::{Axis, Link, Region, Space};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

/// Search limits. Zero means unlimited.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_millis: u64,
    pub seed: u64,
    #[serde(skip)]
    pub trace: Option<Arc<Trace>>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: 20_000_000, max_millis: 0, seed: 0, trace: None }
    }
}

impl SearchBudget {
    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes, ..Default::default() }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn traced(mut self) -> (Self, Arc<Trace>) {
        let t = Arc::new(Trace::default());
        self.trace = Some(t.clone());
        (self, t)
    }

    fn tracker(&self) -> Tracker {
        Tracker::new(self.max_nodes, self.max_millis)
    }

    fn record(&self, t: &Tracker) {
        if let Some(tr) = &self.trace {
            tr.searches.fetch_add(1, Ordering::Relaxed);
            tr.nodes.fetch_add(t.nodes.load(Ordering::Relaxed), Ordering::Relaxed);
            tr.propagations.fetch_add(t.props.load(Ordering::Relaxed), Ordering::Relaxed);
            tr.failures.fetch_add(t.fails.load(Ordering::Relaxed), Ordering::Relaxed);
        }
    }
}

/// Accumulated search statistics.
#[derive(Debug, Default)]
pub struct Trace {
    pub searches: AtomicU64,
    pub nodes: AtomicU64,
    pub propagations: AtomicU64,
    pub failures: AtomicU64,
}

impl Trace {
    /// Line-oriented text; `refutation_size` counts failed search nodes.
    pub fn render(&self) -> String {
        format!(
            "searches {}\nnodes {}\npropagations {}\nrefutation_size {}\n",
            self.searches.load(Ordering::Relaxed),
            self.nodes.load(Ordering::Relaxed),
            self.propagations.load(Ordering::Relaxed),
            self.failures.load(Ordering::Relaxed)
        )
    }
}

/// Result of a search that may fail to decide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    /// The whole search space was explored without success.
    Refuted,
    BudgetExhausted,
}

impl<T> Outcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Refuted => Outcome::Refuted,
            Outcome::BudgetExhausted => Outcome::BudgetExhausted,
        }
    }
}

/// Acceptance test for shifts that are not of finite type.
///
/// Must be translation invariant and monotone under restriction.
pub trait CustomValidator: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;
    /// Whether the cells can occur in a valid configuration. With
    /// `periodic`, the cells are a fundamental domain repeated forever.
    fn accepts_cells(&self, cells: &[(Coord, SymbolId)], periodic: bool) -> bool;
}

#[derive(Debug)]
pub(crate) struct BinaryRule {
    pub offset: Coord,
    pub fwd: Vec<SymbolSet>,
    pub rev: Vec<SymbolSet>,
}

/// Forbidden cylinders sorted by arity: unary masks, merged binary tables
/// per offset, and the rest.
#[derive(Debug)]
pub(crate) struct Compiled {
    pub unary: SymbolSet,
    pub binary: Vec<BinaryRule>,
    pub nary: Vec<ForbiddenPattern>,
}

impl Compiled {
    fn new(spec: &ShiftSpec) -> Self {
        let n = spec.alphabet().len();
        let full = SymbolSet::full(n);
        let mut unary = SymbolSet::EMPTY;
        let mut binary: Vec<BinaryRule> = Vec::new();
        let mut nary = Vec::new();
        for f in spec.forbidden() {
            match f.cells() {
                [(_, s)] => unary = unary.or(*s),
                [(o1, s1), (o2, s2)] => {
                    let d = *o2 - *o1;
                    let idx = match binary.iter().position(|b| b.offset == d) {
                        Some(i) => i,
                        None => {
                            binary.push(BinaryRule { offset: d, fwd: vec![full; n], rev: vec![full; n] });
                            binary.len() - 1
                        }
                    };
                    let b = &mut binary[idx];
                    for a in s1.iter() {
                        b.fwd[a as usize] = b.fwd[a as usize].minus(*s2);
                    }
                    for c in s2.iter() {
                        b.rev[c as usize] = b.rev[c as usize].minus(*s1);
                    }
                }
                _ => nary.push(f.clone()),
            }
        }
        Compiled { unary, binary, nary }
    }
}

/// A shift ready for search: compiled rules plus an optional validator.
#[derive(Clone)]
pub struct Shift {
    spec: Arc<ShiftSpec>,
    rules: Arc<Compiled>,
    validator: Option<Arc<dyn CustomValidator>>,
}

impl fmt::Debug for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Shift").field("name", &self.spec.name()).field("validator", &self.validator).finish()
    }
}

impl Shift {
    /// Wraps a specification, compiling Wang faces first if needed.
    pub fn new(spec: ShiftSpec) -> Result<Self> {
        let spec = if spec.wang_mode() { compile_wang(&spec)? } else { spec };
        let rules = Arc::new(Compiled::new(&spec));
        Ok(Shift { spec: Arc::new(spec), rules, validator: None })
    }

    pub fn with_validator(spec: ShiftSpec, v: Arc<dyn CustomValidator>) -> Result<Self> {
        let mut s = Shift::new(spec)?;
        s.validator = Some(v);
        Ok(s)
    }

    pub fn spec(&self) -> &ShiftSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        self.spec.name()
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension()
    }

    pub fn alphabet_len(&self) -> usize {
        self.spec.alphabet().len()
    }

    pub fn validator(&self) -> Option<&Arc<dyn CustomValidator>> {
        self.validator.as_ref()
    }

    pub(crate) fn rules(&self) -> &Compiled {
        &self.rules
    }

    /// Local validity under the rules and the validator.
    pub fn validate(&self, p: &Pattern) -> Result<bool> {
        if !self.spec.validate_pattern(p)? {
            return Ok(false);
        }
        Ok(match &self.validator {
            Some(v) => v.accepts_cells(&p.iter().collect::<Vec<_>>(), false),
            None => true,
        })
    }

    pub fn validate_torus(&self, t: &TorusConfig) -> Result<bool> {
        if !self.spec.validate_torus(t)? {
            return Ok(false);
        }
        Ok(match &self.validator {
            Some(v) => {
                let dom = t.domain();
                let cells: Vec<(Coord, SymbolId)> = dom.iter().map(|c| (*c, t.get(c))).collect();
                v.accepts_cells(&cells, true)
            }
            None => true,
        })
    }

    /// Validity of the configuration equal to `p` on its support and to
    /// `background` everywhere else.
    pub fn validate_eventually_constant(&self, p: &Pattern, background: SymbolId) -> Result<bool> {
        let d = self.dimension();
        let ring: Vec<u32> = self.spec.rule_radius().iter().map(|r| 2 * r).collect();
        let outer = p.support().dilate_aniso(&ring);
        let padded = Pattern::new(d, outer.iter().map(|c| (*c, p.get(c).unwrap_or(background))));
        let bg = TorusConfig::constant(vec![1; d], background);
        if !self.spec.validate_pattern(&padded)? || !self.spec.validate_torus(&bg)? {
            return Ok(false);
        }
        Ok(match &self.validator {
            Some(v) => {
                v.accepts_cells(&p.iter().collect::<Vec<_>>(), false)
                    && v.accepts_cells(&[(Coord::zero(d), background)], true)
            }
            None => true,
        })
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.dimension() {
            return Err(Error::DimensionMismatch { expected: self.dimension(), got: d });
        }
        Ok(())
    }
}

/// Validator hook over decided cells of every layer.
fn layer_check<'a>(shift: &'a Shift, space: &'a Space, periodic: bool) -> Option<impl Fn(&[SymbolSet]) -> bool + Sync + 'a> {
    let v = shift.validator.clone()?;
    Some(move |dom: &[SymbolSet]| (0..space.layers.len()).all(|l| v.accepts_cells(&space.decided(dom, l), periodic)))
}

fn stop_outcome<T>(s: Stop) -> Outcome<T> {
    match s {
        Stop::Budget | Stop::Halt => Outcome::BudgetExhausted,
    }
}

/// Solves a prepared space for all variables.
pub(crate) fn solve_space(
    shift: &Shift,
    space: &Space,
    periodic: bool,
    budget: &SearchBudget,
) -> Outcome<Vec<Vec<SymbolId>>> {
    let tracker = budget.tracker();
    let check = layer_check(shift, space, periodic);
    let check_ref: Option<csp::Check<'_>> = check.as_ref().map(|f| f as csp::Check<'_>);
    let mut eng = Engine::new(&space.problem, &tracker, budget.seed, check_ref);
    let out = if !eng.start() {
        Outcome::Refuted
    } else {
        match eng.solve(&space.all_vars()) {
            Ok(true) => Outcome::Found((0..space.layers.len()).map(|l| space.read(&eng.dom, l)).collect()),
            Ok(false) => Outcome::Refuted,
            Err(s) => stop_outcome(s),
        }
    };
    budget.record(&tracker);
    out
}

fn pattern_from(space: &Space, values: &[SymbolId], dim: usize) -> Pattern {
    Pattern::new(dim, space.cells.iter().copied().zip(values.iter().copied()))
}

fn internal(msg: &str) -> Error {
    Error::Precondition(format!("internal consistency check failed: {msg}"))
}

/// Extends a locally valid pattern to a locally valid pattern on `target`.
pub fn extend(shift: &Shift, p: &Pattern, target: &Support, budget: &SearchBudget) -> Result<Outcome<Pattern>> {
    shift.check_dim(p.dim())?;
    if !p.support().is_subset(target) {
        return Err(Error::InvalidInput("pattern support is not inside the target".into()));
    }
    if !shift.validate(p)? {
        return Err(Error::InvalidInput("pattern violates the shift's rules".into()));
    }
    let mut space = Space::single(shift, Region::Cells(target.clone()));
    for (c, s) in p.iter() {
        space.pin(0, &c, SymbolSet::single(s));
    }
    let out = solve_space(shift, &space, false, budget).map(|v| pattern_from(&space, &v[0], p.dim()));
    if let Outcome::Found(e) = &out {
        if !shift.validate(e)? || e.restrict(p.support()).as_ref() != Some(p) {
            return Err(internal("extension"));
        }
    }
    Ok(out)
}

/// The m-extendable language on a support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Language {
    pub support: Support,
    pub margin: u32,
    pub patterns: Vec<Pattern>,
    /// More than `cap` patterns exist; only the first `cap` are kept.
    pub truncated: bool,
}

/// Engines after branching on the most constrained primary variable.
fn split<'a>(eng: Engine<'a>, primary: &[u32]) -> Vec<Engine<'a>> {
    let mut probe = eng.clone();
    let Some(v) = primary.iter().copied().filter(|&v| probe.dom[v as usize].len() > 1).min_by_key(|&v| (probe.dom[v as usize].len(), v)) else {
        return vec![eng];
    };
    let vals: Vec<u8> = probe.dom[v as usize].iter().collect();
    let mut out = Vec::new();
    for a in vals {
        let mut e = eng.clone();
        if e.try_assign(v, a) {
            out.push(e);
        }
    }
    probe.undo(0);
    out
}

/// Patterns on `f` extending to a locally valid pattern on `f` dilated by `m`.
pub fn enumerate_language(shift: &Shift, f: &Support, m: u32, budget: &SearchBudget, cap: usize) -> Result<Language> {
    shift.check_dim(f.dim())?;
    let space = Space::single(shift, Region::Cells(f.dilate(m)));
    let primary: Vec<u32> = f.iter().map(|c| space.layers[0][space.index_of(c).unwrap()]).collect();
    let all = space.all_vars();
    let tracker = budget.tracker();
    let check = layer_check(shift, &space, false);
    let check_ref: Option<csp::Check<'_>> = check.as_ref().map(|f| f as csp::Check<'_>);
    let mut eng = Engine::new(&space.problem, &tracker, budget.seed, check_ref);
    let mut patterns = Vec::new();
    let mut truncated = false;
    let mut exhausted = false;
    if eng.start() {
        let branches = split(eng, &primary);
        let results = par::map(branches, |mut e| {
            let mut found: Vec<Vec<SymbolId>> = Vec::new();
            let r = e.enumerate(&primary, &all, &mut |dom| {
                found.push(primary.iter().map(|&v| dom[v as usize].first().unwrap()).collect());
                found.len() <= cap
            });
            (found, r)
        });
        for (found, r) in results {
            match r {
                Err(Stop::Budget) => exhausted = true,
                Err(Stop::Halt) => truncated = true,
                Ok(()) => {}
            }
            for vals in found {
                patterns.push(Pattern::from_parts(f.clone(), vals)?);
            }
        }
    }
    budget.record(&tracker);
    if exhausted && !truncated {
        return Err(Error::BudgetExhausted { lower_bound: patterns.len().to_string() });
    }
    patterns.sort_by(|a, b| a.symbols().cmp(b.symbols()));
    if patterns.len() > cap {
        truncated = true;
        patterns.truncate(cap);
    }
    Ok(Language { support: f.clone(), margin: m, patterns, truncated })
}

/// Streams the m-extendable language on `f` without materializing it. The
/// callback sees symbols in the support's order and returns false to stop.
/// Returns the number of patterns visited.
pub fn for_each_pattern(
    shift: &Shift,
    f: &Support,
    m: u32,
    budget: &SearchBudget,
    mut cb: impl FnMut(&[SymbolId]) -> bool,
) -> Result<u64> {
    shift.check_dim(f.dim())?;
    let space = Space::single(shift, Region::Cells(f.dilate(m)));
    let primary: Vec<u32> = f.iter().map(|c| space.layers[0][space.index_of(c).unwrap()]).collect();
    let all = space.all_vars();
    let tracker = budget.tracker();
    let check = layer_check(shift, &space, false);
    let check_ref: Option<csp::Check<'_>> = check.as_ref().map(|f| f as csp::Check<'_>);
    let mut eng = Engine::new(&space.problem, &tracker, budget.seed, check_ref);
    let mut n = 0u64;
    let mut buf = vec![0; primary.len()];
    let r = if eng.start() {
        eng.enumerate(&primary, &all, &mut |dom| {
            for (b, &v) in buf.iter_mut().zip(&primary) {
                *b = dom[v as usize].first().unwrap();
            }
            n += 1;
            cb(&buf)
        })
    } else {
        Ok(())
    };
    budget.record(&tracker);
    match r {
        Err(Stop::Budget) => Err(Error::BudgetExhausted { lower_bound: n.to_string() }),
        _ => Ok(n),
    }
}

/// An exact language count stamped with its margin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LanguageCount {
    pub count: BigUint,
    pub margin: u32,
    pub cells: usize,
}

/// Counts the m-extendable language without materializing it.
pub fn count_language(shift: &Shift, f: &Support, m: u32, budget: &SearchBudget) -> Result<LanguageCount> {
    shift.check_dim(f.dim())?;
    let space = Space::single(shift, Region::Cells(f.dilate(m)));
    let mut is_primary = vec![false; space.problem.len()];
    let mut primary = Vec::new();
    for c in f.iter() {
        let v = space.layers[0][space.index_of(c).unwrap()];
        is_primary[v as usize] = true;
        primary.push(v);
    }
    let all = space.all_vars();
    let tracker = budget.tracker();
    let check = layer_check(shift, &space, false);
    let check_ref: Option<csp::Check<'_>> = check.as_ref().map(|f| f as csp::Check<'_>);
    let mut eng = Engine::new(&space.problem, &tracker, budget.seed, check_ref);
    let mut total = BigUint::zero();
    let mut exhausted = false;
    if eng.start() {
        let results = par::map(split(eng, &primary), |mut e| e.count(&all, &is_primary));
        for r in results {
            match r {
                Ok(n) => total += n,
                Err(_) => exhausted = true,
            }
        }
    }
    budget.record(&tracker);
    if exhausted {
        return Err(Error::BudgetExhausted { lower_bound: total.to_string() });
    }
    Ok(LanguageCount { count: total, margin: m, cells: f.len() })
}

fn check_fits(p: &Pattern, periods: &[u32]) -> Result<()> {
    if periods.len() != p.dim() || periods.contains(&0) {
        return Err(Error::InvalidInput(format!("periods {periods:?} do not match dimension {}", p.dim())));
    }
    if let Some((lo, hi)) = p.support().bounds() {
        for i in 0..p.dim() {
            if (hi[i] - lo[i]) as u32 >= periods[i] {
                return Err(Error::InvalidInput("pattern does not fit in the fundamental domain".into()));
            }
        }
    }
    Ok(())
}

/// Completes a pattern to a valid fully periodic configuration. Pattern
/// cells are placed at their coordinates modulo the periods.
pub fn complete_torus(shift: &Shift, p: &Pattern, periods: &[u32], budget: &SearchBudget) -> Result<Outcome<TorusConfig>> {
    complete_torus_pinned(shift, &pins_of(p), p.dim(), periods, budget)
}

fn pins_of(p: &Pattern) -> Vec<(Coord, SymbolSet)> {
    p.iter().map(|(c, s)| (c, SymbolSet::single(s))).collect()
}

/// Torus completion with per-cell candidate sets instead of fixed symbols.
pub fn complete_torus_pinned(
    shift: &Shift,
    pins: &[(Coord, SymbolSet)],
    dim: usize,
    periods: &[u32],
    budget: &SearchBudget,
) -> Result<Outcome<TorusConfig>> {
    shift.check_dim(dim)?;
    let probe = Pattern::new(dim, pins.iter().map(|(c, _)| (*c, 0)));
    check_fits(&probe, periods)?;
    let mut space = Space::single(shift, Region::torus(periods));
    for (c, s) in pins {
        space.pin(0, c, *s);
    }
    let out = solve_space(shift, &space, true, budget);
    let out = match out {
        Outcome::Found(v) => {
            let mut t = TorusConfig::constant(periods.to_vec(), 0);
            for (c, s) in space.cells.iter().zip(&v[0]) {
                t.set(c, *s);
            }
            if !shift.validate_torus(&t)? || pins.iter().any(|(c, s)| !s.contains(t.get(c))) {
                return Err(internal("torus completion"));
            }
            Outcome::Found(t)
        }
        Outcome::Refuted => Outcome::Refuted,
        Outcome::BudgetExhausted => Outcome::BudgetExhausted,
    };
    Ok(out)
}

/// Visits every valid torus with the given periods (and pins). The callback
/// returns false to stop early. Returns the number visited, or
/// `BudgetExhausted` if the budget ran out first.
pub fn for_each_torus(
    shift: &Shift,
    periods: &[u32],
    pins: &[(Coord, SymbolSet)],
    budget: &SearchBudget,
    mut cb: impl FnMut(TorusConfig) -> bool,
) -> Result<u64> {
    let dim = periods.len();
    shift.check_dim(dim)?;
    let mut space = Space::single(shift, Region::torus(periods));
    for (c, s) in pins {
        space.pin(0, c, *s);
    }
    let all = space.all_vars();
    let tracker = budget.tracker();
    let check = layer_check(shift, &space, true);
    let check_ref: Option<csp::Check<'_>> = check.as_ref().map(|f| f as csp::Check<'_>);
    let mut eng = Engine::new(&space.problem, &tracker, budget.seed, check_ref);
    let mut n = 0u64;
    let mut err = None;
    let r = if eng.start() {
        eng.enumerate(&all, &all, &mut |dom| {
            let mut t = TorusConfig::constant(periods.to_vec(), 0);
            for (c, &v) in space.cells.iter().zip(&space.layers[0]) {
                t.set(c, dom[v as usize].first().unwrap());
            }
            match shift.validate_torus(&t) {
                Ok(true) => {}
                Ok(false) => {
                    err = Some(internal("torus enumeration"));
                    return false;
                }
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
            n += 1;
            cb(t)
        })
    } else {
        Ok(())
    };
    budget.record(&tracker);
    if let Some(e) = err {
        return Err(e);
    }
    match r {
        Err(Stop::Budget) => Err(Error::BudgetExhausted { lower_bound: n.to_string() }),
        _ => Ok(n),
    }
}

/// Two locally valid patterns on `target` extending `p` and `q`, equal
/// outside `k`. With `outside`, every cell of `target` outside `k` is
/// additionally pinned to that symbol.
pub fn joint_extend(
    shift: &Shift,
    p: &Pattern,
    q: &Pattern,
    k: &Support,
    target: &Support,
    outside: Option<SymbolId>,
    budget: &SearchBudget,
) -> Result<Outcome<(Pattern, Pattern)>> {
    shift.check_dim(p.dim())?;
    if p.support() != q.support() {
        return Err(Error::InvalidInput("patterns have different supports".into()));
    }
    if !p.support().is_subset(k) || !k.is_subset(target) {
        return Err(Error::InvalidInput("need F inside K inside target".into()));
    }
    if !shift.validate(p)? || !shift.validate(q)? {
        return Err(Error::InvalidInput("pattern violates the shift's rules".into()));
    }
    let mut space = Space::pair(shift, Region::Cells(target.clone()), k, Link::Alias);
    for (c, s) in p.iter() {
        space.pin(0, &c, SymbolSet::single(s));
    }
    for (c, s) in q.iter() {
        space.pin(1, &c, SymbolSet::single(s));
    }
    if let Some(b) = outside {
        for c in target.difference(k).iter() {
            space.pin(0, c, SymbolSet::single(b));
        }
    }
    let d = p.dim();
    let out = solve_space(shift, &space, false, budget)
        .map(|v| (pattern_from(&space, &v[0], d), pattern_from(&space, &v[1], d)));
    if let Outcome::Found((a, b)) = &out {
        let outside_k = target.difference(k);
        if !shift.validate(a)?
            || !shift.validate(b)?
            || a.restrict(p.support()).as_ref() != Some(p)
            || b.restrict(q.support()).as_ref() != Some(q)
            || a.restrict(&outside_k) != b.restrict(&outside_k)
        {
            return Err(internal("joint extension"));
        }
    }
    Ok(out)
}
