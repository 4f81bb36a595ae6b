//! Search regions and their translation into constraint problems.

use super::csp::Problem;
use super::Shift;
use crate::alphabet::{SymbolId, SymbolSet};
use crate::lattice::{Coord, Support};
use std::collections::HashMap;

/// One axis of a product region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Axis {
    Range(i32, i32),
    Wrap(u32),
}

#[derive(Clone, Debug)]
pub(crate) enum Region {
    Cells(Support),
    Product(Vec<Axis>),
}

impl Region {
    pub fn torus(periods: &[u32]) -> Self {
        Region::Product(periods.iter().map(|&p| Axis::Wrap(p)).collect())
    }

    pub fn cells(&self) -> Vec<Coord> {
        match self {
            Region::Cells(s) => s.cells().to_vec(),
            Region::Product(axes) => {
                let lo: Vec<i32> = axes.iter().map(|a| if let Axis::Range(l, _) = a { *l } else { 0 }).collect();
                let hi: Vec<i32> = axes
                    .iter()
                    .map(|a| match a {
                        Axis::Range(_, h) => *h,
                        Axis::Wrap(p) => *p as i32 - 1,
                    })
                    .collect();
                Support::rect(&lo, &hi).cells().to_vec()
            }
        }
    }

    /// Canonical representative of a lattice point, if it lies in the region.
    pub fn locate(&self, c: &Coord) -> Option<Coord> {
        match self {
            Region::Cells(s) => s.contains(c).then_some(*c),
            Region::Product(axes) => {
                let mut out = *c;
                for (i, a) in axes.iter().enumerate() {
                    match a {
                        Axis::Range(l, h) => {
                            if c[i] < *l || c[i] > *h {
                                return None;
                            }
                        }
                        Axis::Wrap(p) => out = out.with(i, c[i].rem_euclid(*p as i32)),
                    }
                }
                Some(out)
            }
        }
    }
}

/// How the second layer relates to the first outside its own cells.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Link<'a> {
    /// Same variable.
    Alias,
    /// Distinct variables with equal images under a cell map.
    Image(&'a [SymbolId]),
}

/// A problem over one or two layers of a region.
pub(crate) struct Space {
    pub problem: Problem,
    pub region: Region,
    pub cells: Vec<Coord>,
    pub layers: Vec<Vec<u32>>,
    pos: HashMap<Coord, usize>,
}

impl Space {
    pub fn single(shift: &Shift, region: Region) -> Self {
        Self::build(shift, region, None)
    }

    pub fn pair(shift: &Shift, region: Region, own: &Support, link: Link<'_>) -> Self {
        Self::build(shift, region, Some((own, link)))
    }

    fn build(shift: &Shift, region: Region, second: Option<(&Support, Link<'_>)>) -> Self {
        let rules = shift.rules();
        let n = shift.spec().alphabet().len();
        let cells = region.cells();
        let pos: HashMap<Coord, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let mut problem = Problem::new();
        for b in &rules.binary {
            problem.add_table(b.fwd.clone());
            problem.add_table(b.rev.clone());
        }
        let dom = SymbolSet::full(n).minus(rules.unary);
        let first: Vec<u32> = cells.iter().map(|_| problem.add_var(dom)).collect();
        let mut layers = vec![first];
        if let Some((own, link)) = second {
            let own_cells: std::collections::HashSet<Coord> = own.iter().filter_map(|c| region.locate(c)).collect();
            let mut layer = Vec::with_capacity(cells.len());
            let image_table = match link {
                Link::Image(map) => Some(problem.add_table(
                    (0..n)
                        .map(|a| SymbolSet::from_iter((0..n).filter(|&b| map[b] == map[a]).map(|b| b as SymbolId)))
                        .collect(),
                )),
                Link::Alias => None,
            };
            for (i, c) in cells.iter().enumerate() {
                if own_cells.contains(c) {
                    layer.push(problem.add_var(dom));
                } else if let Some(t) = image_table {
                    let v = problem.add_var(dom);
                    problem.add_binary(layers[0][i], v, t, t);
                    layer.push(v);
                } else {
                    layer.push(layers[0][i]);
                }
            }
            layers.push(layer);
        }
        let mut space = Space { problem, region, cells, layers, pos };
        for l in 0..space.layers.len() {
            space.add_rules(shift, l);
        }
        space
    }

    fn var_at(&self, layer: usize, c: &Coord) -> Option<u32> {
        let r = self.region.locate(c)?;
        self.pos.get(&r).map(|&i| self.layers[layer][i])
    }

    fn add_rules(&mut self, shift: &Shift, layer: usize) {
        let rules = shift.rules();
        for (j, b) in rules.binary.iter().enumerate() {
            for i in 0..self.cells.len() {
                let c = self.cells[i];
                if let Some(v) = self.var_at(layer, &(c + b.offset)) {
                    let u = self.layers[layer][i];
                    self.problem.add_binary(u, v, 2 * j as u32, 2 * j as u32 + 1);
                }
            }
        }
        let mut vars = Vec::new();
        for f in &rules.nary {
            let o0 = f.cells()[0].0;
            let sets: Vec<SymbolSet> = f.cells().iter().map(|e| e.1).collect();
            for i in 0..self.cells.len() {
                let t = self.cells[i] - o0;
                vars.clear();
                for (o, _) in f.cells() {
                    match self.var_at(layer, &(t + *o)) {
                        Some(v) => vars.push(v),
                        None => break,
                    }
                }
                if vars.len() == sets.len() {
                    self.problem.add_forbidden(&vars, &sets);
                }
            }
        }
    }

    /// Restricts a layer at a lattice point; false if the point is outside.
    pub fn pin(&mut self, layer: usize, c: &Coord, set: SymbolSet) -> bool {
        match self.var_at(layer, c) {
            Some(v) => {
                self.problem.restrict(v, set);
                true
            }
            None => false,
        }
    }

    pub fn index_of(&self, c: &Coord) -> Option<usize> {
        self.region.locate(c).and_then(|r| self.pos.get(&r).copied())
    }

    pub fn all_vars(&self) -> Vec<u32> {
        (0..self.problem.len() as u32).collect()
    }

    /// Values of a layer read from decided domains.
    pub fn read(&self, dom: &[SymbolSet], layer: usize) -> Vec<SymbolId> {
        self.layers[layer].iter().map(|&v| dom[v as usize].first().expect("decided variable")).collect()
    }

    /// Decided cells of every layer, for validator checks.
    pub fn decided(&self, dom: &[SymbolSet], layer: usize) -> Vec<(Coord, SymbolId)> {
        self.layers[layer]
            .iter()
            .zip(&self.cells)
            .filter(|(&v, _)| dom[v as usize].is_single())
            .map(|(&v, c)| (*c, dom[v as usize].first().unwrap()))
            .collect()
    }
}
