use super::{exchangeable_with, Classification, ExchangeabilityParams, Obstruction, ObstructionRegistry, ShiftView, Witness};
use crate::error::{Error, Result};
use crate::lattice::Support;
use crate::par;
use crate::pattern::Pattern;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::fmt::Write as _;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairSelection {
    All,
    /// Distinct unordered pairs drawn with a seeded generator.
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeClass {
    Witness,
    Obstructed,
    NoWitness,
    BudgetExhausted,
}

/// A classified pair `a < b` of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub class: EdgeClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<Obstruction>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExchangeabilityGraph {
    pub shift: String,
    pub support: Support,
    pub vertices: Vec<Pattern>,
    pub params: ExchangeabilityParams,
    pub selection: PairSelection,
    /// Every classified pair. Only witness pairs are edges of the graph.
    pub pairs: Vec<Edge>,
    /// Pairs carrying both a witness and an accepted obstruction. Always
    /// empty unless a registered invariant is unsound.
    pub conflicts: Vec<(usize, usize)>,
    /// Component index of each vertex under witness edges.
    pub component: Vec<usize>,
}

impl ExchangeabilityGraph {
    pub fn vertex(&self, p: &Pattern) -> Result<usize> {
        if p.support() != &self.support {
            return Err(Error::VertexNotFound);
        }
        self.vertices.binary_search_by(|v| v.symbols().cmp(p.symbols())).map_err(|_| Error::VertexNotFound)
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.pairs.iter().filter(|e| e.class == EdgeClass::Witness)
    }

    /// Pairs that were neither connected nor obstructed.
    pub fn unknown(&self) -> impl Iterator<Item = &Edge> {
        self.pairs.iter().filter(|e| matches!(e.class, EdgeClass::NoWitness | EdgeClass::BudgetExhausted))
    }

    pub fn count(&self, class: EdgeClass) -> usize {
        self.pairs.iter().filter(|e| e.class == class).count()
    }

    pub fn components(&self) -> usize {
        self.component.iter().max().map_or(0, |m| m + 1)
    }

    /// Vertex lists of the components, in order of their smallest vertex.
    pub fn component_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.components()];
        for (v, &c) in self.component.iter().enumerate() {
            out[c].push(v);
        }
        out
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in self.edges() {
            adj[e.a].push(e.b);
            adj[e.b].push(e.a);
        }
        adj
    }

    /// Eccentricity-based diameter of each component.
    pub fn diameters(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut out = vec![0; self.components()];
        let ecc = par::map_range(self.vertices.len(), |v| bfs(&adj, v).into_iter().flatten().max().unwrap_or(0));
        for (v, e) in ecc.into_iter().enumerate() {
            let c = self.component[v];
            out[c] = out[c].max(e);
        }
        out
    }

    pub fn to_dot(&self, names: impl Fn(&Pattern) -> String) -> String {
        let mut s = String::from("graph exchangeability {\n");
        let _ = writeln!(s, "  label=\"{} on {} cells\";", self.shift, self.support.len());
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\", component={}];", names(v).replace('"', "'"), self.component[i]);
        }
        for e in &self.pairs {
            let style = match e.class {
                EdgeClass::Witness => "solid",
                EdgeClass::Obstructed => "invis",
                EdgeClass::NoWitness | EdgeClass::BudgetExhausted => "dotted",
            };
            let class = serde_json::to_value(e.class).unwrap();
            let _ = writeln!(s, "  v{} -- v{} [class={}, style={style}];", e.a, e.b, class);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialises")
    }
}

fn bfs(adj: &[Vec<usize>], from: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; adj.len()];
    dist[from] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in &adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

fn select_pairs(n: usize, selection: &PairSelection) -> Vec<(usize, usize)> {
    let total = n * n.saturating_sub(1) / 2;
    let all = |k: usize| {
        // k-th pair in (a, b) lexicographic order
        let mut a = 0;
        let mut k = k;
        while k >= n - 1 - a {
            k -= n - 1 - a;
            a += 1;
        }
        (a, a + 1 + k)
    };
    match selection {
        PairSelection::All => (0..total).map(all).collect(),
        PairSelection::Sample { count, seed } => {
            if *count >= total {
                return (0..total).map(all).collect();
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut idx = sample(&mut rng, total, *count).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(all).collect()
        }
    }
}

/// Classifies pairs of the `m`-extendable language on `f` (or of the given
/// vertices) and assembles the witness graph.
pub fn exchangeability_graph(
    view: &ShiftView,
    registry: &ObstructionRegistry,
    f: &Support,
    vertices: Option<Vec<Pattern>>,
    params: &ExchangeabilityParams,
    selection: PairSelection,
    cap: usize,
) -> Result<ExchangeabilityGraph> {
    let mut vertices = match vertices {
        Some(v) => v,
        None => {
            let lang = view.language(f, params.m, &params.budget, cap)?;
            if lang.truncated {
                return Err(Error::CapExceeded { cap });
            }
            lang.patterns
        }
    };
    if vertices.iter().any(|v| v.support() != f) {
        return Err(Error::InvalidInput("vertex on a different support".into()));
    }
    vertices.sort_by(|a, b| a.symbols().cmp(b.symbols()));
    vertices.dedup();
    let pairs = select_pairs(vertices.len(), &selection);
    let classified = par::map(pairs, |(a, b)| -> Result<Edge> {
        let (p, q) = (&vertices[a], &vertices[b]);
        let c = exchangeable_with(view, registry, p, q, params)?;
        let mut e = Edge { a, b, class: EdgeClass::NoWitness, witness: None, obstruction: None };
        match c {
            Classification::Witness(w) => {
                e.class = EdgeClass::Witness;
                e.witness = Some(w);
                // a witness next to an accepted certificate is a conflict
                e.obstruction = registry.find(view, p, q);
            }
            Classification::Obstructed(o) => {
                e.class = EdgeClass::Obstructed;
                e.obstruction = Some(o);
            }
            Classification::NoWitnessUpTo { .. } => {}
            Classification::BudgetExhausted => e.class = EdgeClass::BudgetExhausted,
        }
        Ok(e)
    });
    let pairs: Vec<Edge> = classified.into_iter().collect::<Result<_>>()?;
    let conflicts = pairs
        .iter()
        .filter(|e| e.class == EdgeClass::Witness && e.obstruction.is_some())
        .map(|e| (e.a, e.b))
        .collect();
    let mut g = ExchangeabilityGraph {
        shift: view.name(),
        support: f.clone(),
        vertices,
        params: params.clone(),
        selection,
        pairs,
        conflicts,
        component: Vec::new(),
    };
    let adj = g.adjacency();
    let mut comp = vec![usize::MAX; g.vertices.len()];
    let mut next = 0;
    for v in 0..comp.len() {
        if comp[v] == usize::MAX {
            for (u, d) in bfs(&adj, v).into_iter().enumerate() {
                if d.is_some() {
                    comp[u] = next;
                }
            }
            next += 1;
        }
    }
    g.component = comp;
    Ok(g)
}

/// Length of a shortest chain of witness edges, or `None` across components.
pub fn chain_distance(g: &ExchangeabilityGraph, p: &Pattern, q: &Pattern) -> Result<Option<usize>> {
    let (a, b) = (g.vertex(p)?, g.vertex(q)?);
    Ok(bfs(&g.adjacency(), a)[b])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BceRecord {
    pub cells: usize,
    pub bounds: Option<(Vec<i32>, Vec<i32>)>,
    pub r: u32,
    pub vertices: usize,
    pub pairs: usize,
    pub components: usize,
    pub diameters: Vec<usize>,
    pub max_diameter: usize,
    pub obstructed: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BceProfile {
    pub shift: String,
    pub m: u32,
    pub mode: super::WitnessMode,
    pub records: Vec<BceRecord>,
}

impl BceProfile {
    /// Whether the largest within-component diameter never grows.
    pub fn bounded_so_far(&self) -> bool {
        self.records.windows(2).all(|w| w[1].max_diameter <= w[0].max_diameter.max(1))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("profile serialises")
    }
}

/// Component counts and diameters over a list of supports. Each support
/// uses `r = max(params.r, radius of its bounding box)`.
pub fn bce_profile(
    view: &ShiftView,
    registry: &ObstructionRegistry,
    supports: &[Support],
    params: &ExchangeabilityParams,
    selection: PairSelection,
    cap: usize,
) -> Result<BceProfile> {
    let mut records = Vec::new();
    for f in supports {
        let fit = ExchangeabilityParams::for_support(view.source(), f).r;
        let mut p = params.clone();
        p.r = p.r.max(fit);
        let g = exchangeability_graph(view, registry, f, None, &p, selection.clone(), cap)?;
        let diameters = g.diameters();
        records.push(BceRecord {
            cells: f.len(),
            bounds: f.bounds(),
            r: p.r,
            vertices: g.vertices.len(),
            pairs: g.pairs.len(),
            components: g.components(),
            max_diameter: diameters.iter().copied().max().unwrap_or(0),
            diameters,
            obstructed: g.count(EdgeClass::Obstructed),
            unknown: g.unknown().count(),
        });
    }
    Ok(BceProfile { shift: view.name(), m: params.m, mode: params.mode, records })
}
