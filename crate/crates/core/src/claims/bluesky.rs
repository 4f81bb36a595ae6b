//! Blue sky completion for X_struct: every pattern on `[-n, n]^2` sits in a
//! configuration that is the blue cross tile outside `[-4n, 4n]^2`.
//!
//! The completion is searched on the torus of period `2R + 1` with the ring
//! `linf = R` pinned to the blue cross, `R = 4n + 1` by default. The ring
//! closes up across the seam, so a torus completion is exactly a planar
//! configuration with blue sky beyond `R - 1`.
//!
//! For a face-matching shift an extension of `p` depends on `p` only
//! through the labels on its outer faces, so the exhaustive run solves one
//! completion per face signature. Every pattern of the class then completes
//! by stamping it into that torus. When the rules are anything but face
//! matching, each stamp is revalidated on the cells around `p`.

use super::density::sample_language;
use super::{Artifact, ClaimReport, Verdict};
use crate::alphabet::{SymbolId, SymbolSet};
use crate::error::Result;
use crate::lattice::{box_support, Coord, Support};
use crate::pattern::{Pattern, TorusConfig};
use crate::spec::{compile_wang, ShiftSpec};
use crate::solver::{complete_torus_pinned, extend, for_each_pattern, Outcome, SearchBudget, Shift};
use crate::zoo;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlueSkyParams {
    /// Ring radius; defaults to `4n + 1`.
    pub ring: Option<u32>,
    /// Enumerate the whole language on `box(n)` up to this `n`.
    pub exhaustive_up_to: u32,
    pub samples: usize,
    /// Margin of the sampled language.
    pub margin: u32,
    pub seed: u64,
    /// Larger rings tried on a failure, to tell a late blue sky apart from a
    /// pattern outside the language.
    pub slack: u32,
}

impl Default for BlueSkyParams {
    fn default() -> Self {
        BlueSkyParams { ring: None, exhaustive_up_to: 1, samples: 500, margin: 2, seed: 1, slack: 2 }
    }
}

fn ring_pins(ring: u32, sky: SymbolId) -> Vec<(Coord, SymbolSet)> {
    box_support(2, ring).iter().filter(|c| c.linf() == ring).map(|c| (*c, SymbolSet::single(sky))).collect()
}

fn sky_torus(shift: &Shift, p: &Pattern, ring: u32, sky: SymbolId, budget: &SearchBudget) -> Result<Outcome<TorusConfig>> {
    let mut pins = ring_pins(ring, sky);
    pins.extend(p.iter().map(|(c, s)| (c, SymbolSet::single(s))));
    complete_torus_pinned(shift, &pins, 2, &[2 * ring + 1; 2], budget)
}

/// Whether the rules are exactly the face-matching dominoes of the
/// alphabet, so that validity across a boundary depends on face labels only.
fn face_determined(shift: &Shift) -> bool {
    let spec = shift.spec();
    if !spec.alphabet().has_faces() || shift.validator().is_some() {
        return false;
    }
    let wang = ShiftSpec::new(spec.name(), spec.dimension(), spec.rule_radius().to_vec(), spec.alphabet().clone(), vec![], true);
    match wang.and_then(|w| compile_wang(&w)) {
        Ok(c) => {
            c.forbidden().len() == spec.forbidden().len() && c.forbidden().iter().all(|r| spec.forbidden().contains(r))
        }
        Err(_) => false,
    }
}

/// Outer face labels of a pattern on `f`, or its full symbol list when the
/// alphabet has no faces.
struct Signer {
    faces: Option<Vec<[u16; 4]>>,
    outer: Vec<(usize, usize)>,
}

impl Signer {
    fn new(shift: &Shift, f: &Support) -> Self {
        let a = shift.spec().alphabet();
        let mut ids: HashMap<&str, u16> = HashMap::new();
        let faces = a.has_faces().then(|| {
            a.symbols()
                .iter()
                .map(|s| {
                    let fs = s.faces.as_ref().expect("faces");
                    let mut out = [0u16; 4];
                    for (o, l) in out.iter_mut().zip(fs) {
                        let n = ids.len() as u16;
                        *o = *ids.entry(l.as_str()).or_insert(n);
                    }
                    out
                })
                .collect()
        });
        let mut outer = Vec::new();
        for (i, c) in f.iter().enumerate() {
            for (side, (axis, step)) in [(0, -1), (0, 1), (1, -1), (1, 1)].into_iter().enumerate() {
                if !f.contains(&c.with(axis, c[axis] + step)) {
                    outer.push((i, side));
                }
            }
        }
        Signer { faces, outer }
    }

    fn sign(&self, symbols: &[SymbolId]) -> Vec<u16> {
        match &self.faces {
            Some(t) => self.outer.iter().map(|&(i, side)| t[symbols[i] as usize][side]).collect(),
            None => symbols.iter().map(|&s| s as u16).collect(),
        }
    }
}

/// Checks the blue sky claim on `box(n)` and reports every pattern whose
/// sky starts later than the ring.
pub fn verify_blue_sky(n: u32, params: &BlueSkyParams, budget: &SearchBudget) -> Result<ClaimReport> {
    let shift = Shift::new(zoo::x_struct())?;
    let sky = shift.spec().symbol("cross_bbbb")?;
    let ring = params.ring.unwrap_or(4 * n + 1);
    let f = box_support(2, n);
    let exhaustive = n <= params.exhaustive_up_to;
    let mut report = ClaimReport::new("blue-sky").param("n", n).param("ring", ring).param("torus", [2 * ring + 1; 2]);
    report.exhaustive = exhaustive;

    // Patterns as flat symbol rows, grouped into classes.
    let k = f.len();
    let mut flat: Vec<SymbolId> = Vec::new();
    let mut class_of: Vec<u32> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    let signer = Signer::new(&shift, &f);
    let mut index: HashMap<Vec<u16>, u32> = HashMap::new();
    let mut push = |syms: &[SymbolId], flat: &mut Vec<SymbolId>, class_of: &mut Vec<u32>| {
        let i = class_of.len();
        let next = reps.len() as u32;
        let c = *index.entry(signer.sign(syms)).or_insert_with(|| {
            reps.push(i);
            next
        });
        flat.extend_from_slice(syms);
        class_of.push(c);
    };
    if exhaustive {
        for_each_pattern(&shift, &f, 0, budget, |syms| {
            push(syms, &mut flat, &mut class_of);
            true
        })?;
        report = report.param("margin", 0);
    } else {
        let (ps, draws) = sample_language(&shift, &f, params.margin, params.samples, params.seed, budget)?;
        for p in &ps {
            push(p.symbols(), &mut flat, &mut class_of);
        }
        report = report.param("margin", params.margin).param("samples", ps.len()).param("draws", draws).param("seed", params.seed);
    }
    let classes = index.len();
    let pattern_at = |i: usize| Pattern::from_parts(f.clone(), flat[i * k..(i + 1) * k].to_vec()).expect("row length");

    let solved = crate::par::map_range(classes, |c| sky_torus(&shift, &pattern_at(reps[c]), ring, sky, budget));
    let mut tori = Vec::with_capacity(classes);
    for s in solved {
        tori.push(s?);
    }

    // Stamp every pattern into its class's torus and revalidate around it;
    // for face matching only the representatives, the rest being implied.
    let recheck_all = !(signer.faces.is_some() && face_determined(&shift));
    let spans: Vec<u32> = (0..2).map(|a| shift.spec().forbidden().iter().map(|r| r.span(a)).max().unwrap_or(0)).collect();
    let around = f.dilate_aniso(&spans);
    let mut late: HashMap<u32, Option<u32>> = HashMap::new();
    for (i, &c) in class_of.iter().enumerate() {
        report.tested += 1;
        match &tori[c as usize] {
            Outcome::Found(_) if !recheck_all && reps[c as usize] != i => report.passed += 1,
            Outcome::Found(t) => {
                let mut w = t.window(&around);
                let p = pattern_at(i);
                w = Pattern::new(2, w.iter().map(|(x, s)| (x, p.get(&x).unwrap_or(s))));
                if shift.validate(&w)? {
                    report.passed += 1;
                } else {
                    let mut t = t.clone();
                    for (x, s) in p.iter() {
                        t.set(&x, s);
                    }
                    report.fail(Verdict::Counterexample, Some(Artifact::torus("stamp failed", t)));
                }
            }
            Outcome::BudgetExhausted => report.fail(Verdict::BudgetExhausted, None),
            Outcome::Refuted => {
                late.entry(c).or_insert(None);
            }
        }
    }

    // Refuted classes: a completion with a wider ring proves the pattern is
    // in the language and the sky starts late; no completion at all and no
    // extension to the ring means the pattern is outside the language.
    let mut late_classes: Vec<u32> = late.keys().copied().collect();
    late_classes.sort_unstable();
    let mut sizes = vec![0u64; classes];
    for &c in &class_of {
        sizes[c as usize] += 1;
    }
    let mut outside = 0u64;
    let mut latest = 0;
    let mut undecided = 0u64;
    for c in &late_classes {
        let p = pattern_at(reps[*c as usize]);
        let members = sizes[*c as usize];
        let mut found = None;
        for r in ring + 1..=ring + params.slack {
            match sky_torus(&shift, &p, r, sky, budget)? {
                Outcome::Found(t) => {
                    found = Some((r, t));
                    break;
                }
                Outcome::Refuted => {}
                Outcome::BudgetExhausted => break,
            }
        }
        match found {
            Some((r, t)) => {
                latest = latest.max(r);
                report.fail(Verdict::Counterexample, Some(Artifact::torus(format!("blue sky needs ring {r}"), t)));
            }
            None => match extend(&shift, &p, &box_support(2, ring), budget)? {
                Outcome::Refuted => {
                    outside += members;
                    report.tested -= members;
                }
                _ => {
                    undecided += members;
                    report.fail(Verdict::BudgetExhausted, Some(Artifact::pattern("undecided", p)));
                }
            },
        }
    }
    let failed = report.tested - report.passed - undecided;
    report = report.param("signature_classes", classes).param("stamps_rechecked", if recheck_all { "all" } else { "representatives" });
    if outside > 0 {
        report.note(format!("{outside} locally valid patterns do not extend to the ring and are outside the language"));
    }
    if failed > 0 {
        report.note(format!(
            "{failed} patterns in {} classes need a later sky; all complete with the ring at {latest}",
            late_classes.len()
        ));
    }
    if undecided > 0 {
        report.note(format!("{undecided} patterns undecided"));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blue_cross_pattern_is_immediate() {
        let shift = Shift::new(zoo::x_struct()).unwrap();
        let sky = shift.spec().symbol("cross_bbbb").unwrap();
        let p = Pattern::constant(&box_support(2, 1), sky);
        let t = sky_torus(&shift, &p, 5, sky, &SearchBudget::default()).unwrap().found().unwrap();
        assert_eq!(t, TorusConfig::constant(vec![11, 11], sky));
    }

    #[test]
    fn small_square_completes() {
        let shift = Shift::new(zoo::x_struct()).unwrap();
        let sky = shift.spec().symbol("cross_bbbb").unwrap();
        let grid = zoo::grid_torus(3, 1);
        let p = grid.window(&box_support(2, 1));
        let t = sky_torus(&shift, &p, 5, sky, &SearchBudget::default()).unwrap().found().unwrap();
        assert!(shift.validate_torus(&t).unwrap());
        assert_eq!(t.window(&box_support(2, 1)), p);
    }

    #[test]
    fn faces_group_patterns() {
        let shift = Shift::new(zoo::x_struct()).unwrap();
        let f = box_support(2, 1);
        let s = Signer::new(&shift, &f);
        assert_eq!(s.outer.len(), 12);
        let a = zoo::grid_torus(3, 1).window(&f);
        assert_eq!(s.sign(a.symbols()).len(), 12);
        assert!(face_determined(&shift));
        assert!(!face_determined(&Shift::new(zoo::golden_mean()).unwrap()));
    }
}
