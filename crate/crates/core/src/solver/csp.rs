//! Finite-domain constraint engine over symbol bitsets.
//!
//! Binary constraints are support tables revised by union over the source
//! domain; n-ary negative cylinders use entailment-based propagation, which
//! is generalized arc consistency for a single forbidden cylinder.

use crate::alphabet::SymbolSet;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub(crate) struct Nary {
    pub vars: Vec<u32>,
    pub sets: Vec<SymbolSet>,
}

#[derive(Clone, Debug, Default)]
pub(crate) struct Problem {
    pub init: Vec<SymbolSet>,
    pub tables: Vec<Vec<SymbolSet>>,
    pub arcs: Vec<Vec<(u32, u32)>>,
    pub nary: Vec<Nary>,
    pub var_nary: Vec<Vec<u32>>,
    seen_bin: HashSet<(u32, u32, u32)>,
    seen_nary: HashSet<Vec<(u32, SymbolSet)>>,
}

impl Problem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, dom: SymbolSet) -> u32 {
        self.init.push(dom);
        self.arcs.push(Vec::new());
        self.var_nary.push(Vec::new());
        (self.init.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.init.len()
    }

    pub fn restrict(&mut self, v: u32, set: SymbolSet) {
        let d = &mut self.init[v as usize];
        *d = d.and(set);
    }

    pub fn add_table(&mut self, t: Vec<SymbolSet>) -> u32 {
        self.tables.push(t);
        (self.tables.len() - 1) as u32
    }

    /// `v` must take a value in `fwd[a]` whenever `u = a`; `rev` is the transpose.
    pub fn add_binary(&mut self, u: u32, v: u32, fwd: u32, rev: u32) {
        if u == v {
            let t = &self.tables[fwd as usize];
            let keep = SymbolSet::from_iter(self.init[u as usize].iter().filter(|&a| t[a as usize].contains(a)));
            self.init[u as usize] = keep;
            return;
        }
        if self.seen_bin.insert((u, v, fwd)) {
            self.arcs[u as usize].push((v, fwd));
            self.arcs[v as usize].push((u, rev));
        }
    }

    /// Forbids `vars[i] in sets[i]` for all i simultaneously.
    pub fn add_forbidden(&mut self, vars: &[u32], sets: &[SymbolSet]) {
        let mut merged: Vec<(u32, SymbolSet)> = Vec::with_capacity(vars.len());
        for (&v, &s) in vars.iter().zip(sets) {
            match merged.iter_mut().find(|e| e.0 == v) {
                Some(e) => e.1 = e.1.and(s),
                None => merged.push((v, s)),
            }
        }
        if merged.iter().any(|e| e.1.is_empty()) {
            return;
        }
        merged.sort();
        if merged.len() == 1 {
            let (v, s) = merged[0];
            self.init[v as usize] = self.init[v as usize].minus(s);
            return;
        }
        if !self.seen_nary.insert(merged.clone()) {
            return;
        }
        let id = self.nary.len() as u32;
        for &(v, _) in &merged {
            self.var_nary[v as usize].push(id);
        }
        self.nary.push(Nary { vars: merged.iter().map(|e| e.0).collect(), sets: merged.iter().map(|e| e.1).collect() });
    }
}

/// Shared node/time budget for one search, global across workers.
#[derive(Debug)]
pub(crate) struct Tracker {
    max_nodes: u64,
    deadline: Option<Instant>,
    pub nodes: AtomicU64,
    pub props: AtomicU64,
    pub fails: AtomicU64,
    exhausted: AtomicBool,
}

impl Tracker {
    pub fn new(max_nodes: u64, max_millis: u64) -> Self {
        Tracker {
            max_nodes,
            deadline: (max_millis > 0).then(|| Instant::now() + Duration::from_millis(max_millis)),
            nodes: AtomicU64::new(0),
            props: AtomicU64::new(0),
            fails: AtomicU64::new(0),
            exhausted: AtomicBool::new(false),
        }
    }

    fn tick(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return false;
        }
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        let over = (self.max_nodes > 0 && n > self.max_nodes)
            || (n % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() > d));
        if over {
            self.exhausted.store(true, Ordering::Relaxed);
        }
        !over
    }
}

/// Why a search stopped early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    Budget,
    Halt,
}

pub(crate) type Check<'a> = &'a (dyn Fn(&[SymbolSet]) -> bool + Sync);

#[derive(Clone)]
pub(crate) struct Engine<'a> {
    p: &'a Problem,
    pub dom: Vec<SymbolSet>,
    trail: Vec<(u32, SymbolSet)>,
    queue: Vec<u32>,
    queued: Vec<bool>,
    check: Option<Check<'a>>,
    tracker: &'a Tracker,
    rng: Option<ChaCha8Rng>,
    pub decompose: bool,
    props: u64,
}

impl<'a> Engine<'a> {
    pub fn new(p: &'a Problem, tracker: &'a Tracker, seed: u64, check: Option<Check<'a>>) -> Self {
        let n = p.len();
        Engine {
            p,
            dom: p.init.clone(),
            trail: Vec::new(),
            queue: Vec::new(),
            queued: vec![false; n],
            check,
            tracker,
            rng: (seed != 0).then(|| ChaCha8Rng::seed_from_u64(seed)),
            decompose: check.is_none(),
            props: 0,
        }
    }

    /// Initial propagation; false if the problem is already inconsistent.
    pub fn start(&mut self) -> bool {
        if self.dom.iter().any(|d| d.is_empty()) {
            return false;
        }
        for v in 0..self.dom.len() {
            self.enqueue(v as u32);
        }
        self.propagate()
    }

    fn enqueue(&mut self, v: u32) {
        if !self.queued[v as usize] {
            self.queued[v as usize] = true;
            self.queue.push(v);
        }
    }

    fn clear_queue(&mut self) {
        for &v in &self.queue {
            self.queued[v as usize] = false;
        }
        self.queue.clear();
    }

    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    pub fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (v, old) = self.trail.pop().unwrap();
            self.dom[v as usize] = old;
        }
    }

    /// Narrows a domain; false on wipe-out.
    pub fn restrict(&mut self, v: u32, set: SymbolSet) -> bool {
        let old = self.dom[v as usize];
        let new = old.and(set);
        if new == old {
            return true;
        }
        if new.is_empty() {
            return false;
        }
        self.trail.push((v, old));
        self.dom[v as usize] = new;
        self.enqueue(v);
        true
    }

    pub fn propagate(&mut self) -> bool {
        let p = self.p;
        while let Some(x) = self.queue.pop() {
            self.queued[x as usize] = false;
            self.props += 1;
            let dx = self.dom[x as usize];
            for &(y, t) in &p.arcs[x as usize] {
                let table = &p.tables[t as usize];
                let mut sup = SymbolSet::EMPTY;
                for a in dx.iter() {
                    sup = sup.or(table[a as usize]);
                }
                if !self.restrict(y, sup) {
                    self.clear_queue();
                    return false;
                }
            }
            for &c in &p.var_nary[x as usize] {
                let con = &p.nary[c as usize];
                let mut free = None;
                let mut n_free = 0;
                let mut entailed = false;
                for (i, &v) in con.vars.iter().enumerate() {
                    let d = self.dom[v as usize];
                    if d.and(con.sets[i]).is_empty() {
                        entailed = true;
                        break;
                    }
                    if !d.is_subset(con.sets[i]) {
                        n_free += 1;
                        free = Some(i);
                        if n_free > 1 {
                            break;
                        }
                    }
                }
                if entailed || n_free > 1 {
                    continue;
                }
                match free {
                    None => {
                        self.clear_queue();
                        return false;
                    }
                    Some(i) => {
                        let v = con.vars[i];
                        let s = con.sets[i];
                        if !self.restrict(v, self.dom[v as usize].minus(s)) {
                            self.clear_queue();
                            return false;
                        }
                    }
                }
            }
        }
        match self.check {
            Some(f) => f(&self.dom),
            None => true,
        }
    }

    fn tick(&mut self) -> Result<(), Stop> {
        if self.props > 0 {
            self.tracker.props.fetch_add(self.props, Ordering::Relaxed);
            self.props = 0;
        }
        if self.tracker.tick() {
            Ok(())
        } else {
            Err(Stop::Budget)
        }
    }

    fn fail(&self) {
        self.tracker.fails.fetch_add(1, Ordering::Relaxed);
    }

    /// Most constrained undecided variable, ties by lowest index.
    fn select(&self, vars: &[u32]) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        for &v in vars {
            let n = self.dom[v as usize].len();
            if n > 1 && best.is_none_or(|(bn, bv)| n < bn || (n == bn && v < bv)) {
                best = Some((n, v));
            }
        }
        best.map(|b| b.1)
    }

    fn values(&mut self, v: u32) -> Vec<u8> {
        let mut vals: Vec<u8> = self.dom[v as usize].iter().collect();
        if let Some(r) = self.rng.as_mut() {
            vals.shuffle(r);
        }
        vals
    }

    /// Assigns `v = a` and propagates; on failure the state is restored.
    pub fn try_assign(&mut self, v: u32, a: u8) -> bool {
        let m = self.mark();
        if self.restrict(v, SymbolSet::single(a)) && self.propagate() {
            true
        } else {
            self.clear_queue();
            self.undo(m);
            false
        }
    }

    /// Depth-first search for a total assignment of `vars`. On success the
    /// solution stays in `dom`; on refutation the state is restored.
    pub fn solve(&mut self, vars: &[u32]) -> Result<bool, Stop> {
        self.tick()?;
        let Some(v) = self.select(vars) else { return Ok(true) };
        for a in self.values(v) {
            let m = self.mark();
            if self.try_assign(v, a) {
                if self.solve(vars)? {
                    return Ok(true);
                }
                self.undo(m);
            }
        }
        self.fail();
        Ok(false)
    }

    /// Satisfiability of `vars` without keeping the witness.
    pub fn satisfiable(&mut self, vars: &[u32]) -> Result<bool, Stop> {
        let m = self.mark();
        let ok = self.solve(vars)?;
        self.undo(m);
        Ok(ok)
    }

    /// Visits every assignment of `primary` that extends to `all`.
    /// The callback returns false to halt.
    pub fn enumerate(
        &mut self,
        primary: &[u32],
        all: &[u32],
        cb: &mut dyn FnMut(&[SymbolSet]) -> bool,
    ) -> Result<(), Stop> {
        self.tick()?;
        if let Some(v) = self.select(primary) {
            for a in self.values(v) {
                let m = self.mark();
                if self.try_assign(v, a) {
                    self.enumerate(primary, all, cb)?;
                    self.undo(m);
                }
            }
            return Ok(());
        }
        let m = self.mark();
        if self.solve(all)? {
            let go = cb(&self.dom);
            self.undo(m);
            if !go {
                return Err(Stop::Halt);
            }
        }
        Ok(())
    }

    fn entailed_arc(&self, u: u32, v: u32, t: u32) -> bool {
        let table = &self.p.tables[t as usize];
        let dv = self.dom[v as usize];
        self.dom[u as usize].iter().all(|a| dv.is_subset(table[a as usize]))
    }

    /// Splits undecided variables into independent groups.
    fn components(&self, vars: &[u32]) -> Vec<Vec<u32>> {
        let open: Vec<u32> = vars.iter().copied().filter(|&v| !self.dom[v as usize].is_single()).collect();
        if !self.decompose || open.len() <= 1 {
            return if open.is_empty() { vec![] } else { vec![open] };
        }
        let mut pos = std::collections::HashMap::with_capacity(open.len());
        for (i, &v) in open.iter().enumerate() {
            pos.insert(v, i);
        }
        let mut parent: Vec<usize> = (0..open.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (i, &u) in open.iter().enumerate() {
            for &(v, t) in &self.p.arcs[u as usize] {
                if let Some(&j) = pos.get(&v) {
                    if j > i && !self.entailed_arc(u, v, t) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
            for &c in &self.p.var_nary[u as usize] {
                let con = &self.p.nary[c as usize];
                if con.vars.iter().zip(&con.sets).any(|(&w, s)| self.dom[w as usize].and(*s).is_empty()) {
                    continue;
                }
                for &w in &con.vars {
                    if let Some(&j) = pos.get(&w) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
        for (i, &v) in open.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<u32>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Number of assignments of the primary variables in `scope` extending
    /// to all of `scope`.
    pub fn count(&mut self, scope: &[u32], is_primary: &[bool]) -> Result<BigUint, Stop> {
        self.tick()?;
        let comps = self.components(scope);
        let mut total = BigUint::one();
        let (plain, mixed): (Vec<_>, Vec<_>) =
            comps.into_iter().partition(|c| !c.iter().any(|&v| is_primary[v as usize]));
        for c in &plain {
            if !self.satisfiable(c)? {
                return Ok(BigUint::zero());
            }
        }
        for c in &mixed {
            let n = self.count_component(c, is_primary)?;
            if n.is_zero() {
                return Ok(n);
            }
            total *= n;
        }
        Ok(total)
    }

    fn count_component(&mut self, comp: &[u32], is_primary: &[bool]) -> Result<BigUint, Stop> {
        let prim: Vec<u32> = comp.iter().copied().filter(|&v| is_primary[v as usize]).collect();
        let v = self.select(&prim).expect("component has an open primary variable");
        let mut sum = BigUint::zero();
        for a in self.values(v) {
            let m = self.mark();
            if self.try_assign(v, a) {
                sum += self.count(comp, is_primary)?;
                self.undo(m);
            }
        }
        Ok(sum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neq_table(n: usize) -> Vec<SymbolSet> {
        (0..n).map(|a| SymbolSet::full(n).minus(SymbolSet::single(a as u8))).collect()
    }

    #[test]
    fn coloring_path_counts() {
        // proper 3-colourings of a path with 4 vertices: 3 * 2^3
        let mut p = Problem::new();
        let t = p.add_table(neq_table(3));
        let vs: Vec<u32> = (0..4).map(|_| p.add_var(SymbolSet::full(3))).collect();
        for w in vs.windows(2) {
            p.add_binary(w[0], w[1], t, t);
        }
        let tr = Tracker::new(0, 0);
        let mut e = Engine::new(&p, &tr, 0, None);
        assert!(e.start());
        let prim = vec![true; 4];
        assert_eq!(e.count(&vs, &prim).unwrap(), BigUint::from(24u32));
    }

    #[test]
    fn triangle_two_colours_refuted() {
        let mut p = Problem::new();
        let t = p.add_table(neq_table(2));
        let vs: Vec<u32> = (0..3).map(|_| p.add_var(SymbolSet::full(2))).collect();
        p.add_binary(vs[0], vs[1], t, t);
        p.add_binary(vs[1], vs[2], t, t);
        p.add_binary(vs[0], vs[2], t, t);
        let tr = Tracker::new(0, 0);
        let mut e = Engine::new(&p, &tr, 0, None);
        assert!(e.start());
        assert!(!e.solve(&vs).unwrap());
        assert_eq!(e.dom, p.init);
    }

    #[test]
    fn nary_forbids_exact_tuple() {
        let mut p = Problem::new();
        let vs: Vec<u32> = (0..3).map(|_| p.add_var(SymbolSet::full(2))).collect();
        p.add_forbidden(&vs, &[SymbolSet::single(1); 3]);
        let tr = Tracker::new(0, 0);
        let mut e = Engine::new(&p, &tr, 0, None);
        assert!(e.start());
        let mut n = 0;
        e.enumerate(&vs, &vs, &mut |_| {
            n += 1;
            true
        })
        .unwrap();
        assert_eq!(n, 7);
        assert_eq!(e.count(&vs, &[true; 3]).unwrap(), BigUint::from(7u32));
    }

    #[test]
    fn budget_stops() {
        let mut p = Problem::new();
        let vs: Vec<u32> = (0..20).map(|_| p.add_var(SymbolSet::full(2))).collect();
        let tr = Tracker::new(5, 0);
        let mut e = Engine::new(&p, &tr, 0, None);
        e.decompose = false;
        assert!(e.start());
        assert_eq!(e.count(&vs, &[true; 20]), Err(Stop::Budget));
    }
}
