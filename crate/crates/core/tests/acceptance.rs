//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria whose failure is understood and recorded are listed in
//! `KNOWN_RED` with the reason; the run exits nonzero only when any other
//! criterion fails, or when a known-red criterion fails for a different
//! reason than the recorded one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use subshift::asymptotics::{
    check_obstruction, check_witness, exchangeability_graph, EdgeClass, ExchangeabilityGraph,
    ExchangeabilityParams, Layer, ObstructionKind, ObstructionRegistry, PairSelection, ShiftView, Witness,
    WitnessKind, WitnessMode,
};
use subshift::claims::{
    sample_language, torus_pool, verify_blue_sky, verify_good_wave, verify_pasting, verify_periodic_density,
    verify_weak_mixing_gluing, worm_chain, worm_view, BlueSkyParams, ClaimReport, DensityParams, GoodWaveParams, Verdict,
};
use subshift::entropy::{entropy_upper_box, strip_table, strip_transfer_entropy, StripOptions};
use subshift::solver::enumerate_language;
use subshift::{box_support, zoo, Coord, Pattern, SearchBudget, Shift, ShiftSpec, Support, SymbolId, TorusConfig};

/// Criteria expected to fail, with the clause that fails.
const KNOWN_RED: &[(u32, &str)] = &[
    (4, "cross pairs without worm-column certificate"),
    (5, "cross pairs without wave-presence certificate"),
    (6, "blue sky needs ring 4n+2 at n=1"),
];

struct Line {
    pass: bool,
    /// Failing clauses.
    red: Vec<String>,
    detail: String,
}

impl Line {
    fn new() -> Self {
        Line { pass: true, red: Vec::new(), detail: String::new() }
    }

    fn check(&mut self, ok: bool, clause: &str) {
        if !ok {
            self.pass = false;
            self.red.push(clause.to_string());
        }
    }

    fn info(&mut self, s: impl AsRef<str>) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(s.as_ref());
    }
}

fn shift(spec: ShiftSpec) -> Shift {
    Shift::new(spec).unwrap()
}

// ---------------------------------------------------------------------------
// Independent oracles.

/// Whether no forbidden placement fits inside the pattern, by scanning every
/// translate that anchors a rule cell on a pattern cell.
fn brute_valid(spec: &ShiftSpec, cells: &[(Coord, SymbolId)], lookup: &dyn Fn(&Coord) -> Option<SymbolId>) -> bool {
    for rule in spec.forbidden() {
        let anchor = rule.cells()[0].0;
        for (c, _) in cells {
            let t = *c - anchor;
            if rule.cells().iter().all(|(o, set)| lookup(&(t + *o)).is_some_and(|s| set.contains(s))) {
                return false;
            }
        }
    }
    true
}

/// Every assignment of the dilated support, filtered and projected.
fn brute_language(spec: &ShiftSpec, f: &Support, m: u32) -> BTreeSet<Vec<SymbolId>> {
    let big: Vec<Coord> = f.dilate(m).iter().copied().collect();
    let k = spec.alphabet().len() as u64;
    let total = k.pow(big.len() as u32);
    assert!(total <= 1 << 20, "search space {total}");
    let pos: std::collections::HashMap<Coord, usize> = big.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut out = BTreeSet::new();
    let mut digits = vec![0 as SymbolId; big.len()];
    for _ in 0..total {
        let cells: Vec<(Coord, SymbolId)> = big.iter().zip(&digits).map(|(c, s)| (*c, *s)).collect();
        let lookup = |c: &Coord| pos.get(c).map(|&i| digits[i]);
        if brute_valid(spec, &cells, &lookup) {
            out.insert(f.iter().map(|c| digits[pos[c]]).collect());
        }
        for d in digits.iter_mut() {
            *d += 1;
            if (*d as u64) < k {
                break;
            }
            *d = 0;
        }
    }
    out
}

fn spans(spec: &ShiftSpec) -> Vec<i32> {
    let d = spec.dimension();
    (0..d)
        .map(|a| {
            spec.forbidden()
                .iter()
                .map(|r| {
                    let v: Vec<i32> = r.cells().iter().map(|c| c.0[a]).collect();
                    v.iter().max().unwrap() - v.iter().min().unwrap()
                })
                .max()
                .unwrap_or(0)
        })
        .collect()
}

fn torus_valid(spec: &ShiftSpec, t: &TorusConfig) -> bool {
    let cells: Vec<(Coord, SymbolId)> = all_cells(t.periods()).into_iter().map(|c| (c, t.get(&c))).collect();
    brute_valid(spec, &cells, &|c: &Coord| Some(t.get(c)))
}

fn all_cells(periods: &[u32]) -> Vec<Coord> {
    let mut out = vec![Vec::<i32>::new()];
    for &p in periods {
        out = out.into_iter().flat_map(|v| (0..p as i32).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.into_iter().map(|v| Coord::new(&v)).collect()
}

/// Replays a certifying witness without the library's checker: both layers
/// pass the rule scan, agree outside K, and show `p` and `q` on F.
fn independent_check(view: &ShiftView, w: &Witness, p: &Pattern, q: &Pattern) -> bool {
    let spec = view.source().spec();
    let img = |s: SymbolId| view.cell_map().map_or(s, |m| m[s as usize]);
    let k = box_support(w.centre.dim(), w.r).translate(w.centre);
    if !p.support().is_subset(&k) {
        return false;
    }
    match (&w.kind, &w.left, &w.right) {
        (WitnessKind::TorusPair, Layer::Torus(a), Layer::Torus(b)) => {
            let per = a.periods();
            let sp = spans(spec);
            let room = per.iter().zip(&sp).all(|(&pp, &s)| pp as i32 >= 2 * w.r as i32 + 1 + s);
            let kw: BTreeSet<Vec<i32>> = k.iter().map(|c| c.wrap(per).entries().to_vec()).collect();
            let outside_equal =
                all_cells(per).iter().filter(|c| !kw.contains(c.entries())).all(|c| a.get(c) == b.get(c));
            let shows = p.iter().all(|(c, s)| img(a.get(&c)) == s) && q.iter().all(|(c, s)| img(b.get(&c)) == s);
            room && b.periods() == per && torus_valid(spec, a) && torus_valid(spec, b) && outside_equal && shows
        }
        (WitnessKind::BackgroundPair, Layer::Pattern(a), Layer::Pattern(b)) => {
            let Some(bg) = w.background else { return false };
            let ok_layer = |x: &Pattern| view.source().validate_eventually_constant(x, bg).unwrap_or(false);
            let outside_equal = a.support() == b.support()
                && a.iter().filter(|(c, _)| !k.contains(c)).all(|(c, s)| b.get(&c) == Some(s));
            let shows = p.iter().all(|(c, s)| a.get(&c).map(img) == Some(s)) && q.iter().all(|(c, s)| b.get(&c).map(img) == Some(s));
            ok_layer(a) && ok_layer(b) && outside_equal && shows
        }
        _ => false,
    }
}

fn witnesses_of(g: &ExchangeabilityGraph) -> impl Iterator<Item = (&Witness, &Pattern, &Pattern)> {
    g.pairs.iter().filter_map(|e| e.witness.as_ref().map(|w| (w, &g.vertices[e.a], &g.vertices[e.b])))
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Line {
    let mut line = Line::new();
    let b = SearchBudget::default();
    let rect = |lo: &[i32], hi: &[i32]| Support::rect(lo, hi);
    let cases: Vec<(&str, ShiftSpec, Vec<(Support, u32)>)> = vec![
        ("golden mean", zoo::golden_mean(), vec![(rect(&[0], &[11]), 0), (rect(&[0], &[7]), 2), (rect(&[0], &[15]), 1)]),
        (
            "hard squares",
            zoo::hard_squares(),
            vec![(rect(&[0, 0], &[3, 3]), 0), (rect(&[0, 0], &[1, 1]), 1), (box_support(2, 1), 0), (rect(&[0, 0], &[4, 2]), 0)],
        ),
        (
            "worm precursor",
            zoo::worm_precursor(),
            vec![(rect(&[0, 0], &[1, 2]), 0), (rect(&[0, 0], &[2, 1]), 0), (rect(&[0, 0], &[6, 0]), 0), (rect(&[0, 0], &[0, 6]), 0)],
        ),
        (
            "x_struct",
            zoo::x_struct(),
            vec![
                (rect(&[0, 0], &[2, 0]), 0),
                (rect(&[0, 0], &[0, 2]), 0),
                (Support::new(2, [Coord::new(&[0, 0]), Coord::new(&[1, 0]), Coord::new(&[0, 1])]), 0),
            ],
        ),
    ];
    for (name, spec, supports) in cases {
        let s = shift(spec.clone());
        let t = Instant::now();
        let mut agree = true;
        let mut total = 0;
        for (f, m) in &supports {
            let lib: BTreeSet<Vec<SymbolId>> = enumerate_language(&s, f, *m, &b, usize::MAX)
                .unwrap()
                .patterns
                .iter()
                .map(|p| p.symbols().to_vec())
                .collect();
            let oracle = brute_language(&spec, f, *m);
            total += oracle.len();
            agree &= lib == oracle;
        }
        let secs = t.elapsed().as_secs_f64();
        line.check(agree, &format!("{name} language differs from brute force"));
        line.check(secs < 60.0, &format!("{name} took {secs:.1}s"));
        line.info(format!("{name}: {} supports, {total} patterns, {secs:.1}s", supports.len()));
    }
    line
}

fn criterion_2() -> Line {
    let mut line = Line::new();
    let b = SearchBudget::default();
    let mut worst: f64 = 0.0;
    for k in [2usize, 3] {
        for d in 1..=3 {
            let s = shift(zoo::full_shift(k, d).unwrap());
            for n in 0..=3 {
                let e = entropy_upper_box(&s, n, 0, &b).unwrap();
                let cells = (2 * n as usize + 1).pow(d as u32);
                let exact = num_bigint::BigUint::from(k).pow(cells as u32).to_string();
                line.check(e.count.as_deref() == Some(exact.as_str()), &format!("full {k}-shift d={d} n={n} count"));
                worst = worst.max((e.upper - (k as f64).ln()).abs());
            }
        }
    }
    line.check(worst < 1e-12, "full shift box entropy is not log k");
    line.info(format!("full shifts: counts exact, max |h - ln k| = {worst:.1e}"));

    // Dominant eigenvalue of [[1,1],[1,0]] in closed form.
    let lam = (1.0 + 5f64.sqrt()) / 2.0;
    let gm = strip_transfer_entropy(&shift(zoo::golden_mean()), 1, &StripOptions::default()).unwrap();
    let err = (gm.upper - lam.ln()).abs().max((gm.lower - lam.ln()).abs());
    line.check(err < 1e-9, "golden mean strip entropy");
    line.info(format!("golden mean {:.12} (err {err:.1e})", gm.upper));

    let hs = strip_table(&shift(zoo::hard_squares()), 8, &StripOptions::default()).unwrap();
    let last = hs.last().unwrap();
    let gap = last.upper - last.lower;
    line.check(gap < 0.01, "hard squares gap at w=8");
    let window: Vec<_> = hs.iter().filter(|e| e.window >= 2).collect();
    let mono = window.windows(2).all(|w| w[1].upper <= w[0].upper && w[1].lower >= w[0].lower);
    line.check(mono, "hard squares bounds not monotone");
    line.info(format!("hard squares w=8: [{:.6}, {:.6}], gap {gap:.5}", last.lower, last.upper));
    line
}

fn graph(view: &ShiftView, f: &Support, vertices: Option<Vec<Pattern>>, sel: PairSelection) -> ExchangeabilityGraph {
    let params = ExchangeabilityParams::for_support(view.source(), f);
    exchangeability_graph(view, &ObstructionRegistry::default(), f, vertices, &params, sel, 100_000).unwrap()
}

fn criterion_3() -> Line {
    let mut line = Line::new();
    let sft = |name: &str| ShiftView::Sft(zoo::builtin(name).unwrap());
    let rect = |lo: &[i32], hi: &[i32]| Support::rect(lo, hi);
    let sample = |count| PairSelection::Sample { count, seed: 3 };
    let cases: Vec<(&str, ShiftView, Support, PairSelection)> = vec![
        ("golden-mean", sft("golden-mean"), rect(&[0], &[5]), PairSelection::All),
        ("golden-mean-rows", sft("golden-mean-rows"), box_support(2, 1), sample(2000)),
        ("hard-squares", sft("hard-squares"), box_support(2, 1), PairSelection::All),
        ("full-shift-2-2", sft("full-shift-2-2"), box_support(2, 1), sample(5000)),
        ("full-shift-3-1", sft("full-shift-3-1"), rect(&[0], &[4]), sample(3000)),
        ("hard-squares 2x3", sft("hard-squares"), rect(&[0, 0], &[1, 2]), sample(2000)),
        ("sunny-side-up", sft("sunny-side-up"), rect(&[0], &[3]), PairSelection::All),
        ("worm-precursor", sft("worm-precursor"), rect(&[0, 0], &[1, 1]), sample(400)),
        ("worm-shift", worm_view().unwrap(), rect(&[0, 0], &[1, 1]), sample(400)),
        ("x-struct", sft("x-struct"), box_support(2, 0), sample(600)),
        ("good-wave", sft("good-wave"), box_support(3, 0), sample(300)),
    ];
    let (mut emitted, mut good) = (0usize, 0usize);
    let mut per = Vec::new();
    for (name, view, f, sel) in cases {
        let t = Instant::now();
        let g = graph(&view, &f, None, sel);
        let mut n = 0;
        for (w, p, q) in witnesses_of(&g) {
            n += 1;
            if w.certifying() && independent_check(&view, w, p, q) && check_witness(&view, w, p, q).unwrap() {
                good += 1;
            }
        }
        emitted += n;
        per.push(format!("{name} {n} ({:.1}s)", t.elapsed().as_secs_f64()));
    }
    line.check(emitted >= 10_000, "fewer than 10^4 witnesses");
    line.check(good == emitted, "a witness failed the independent check");
    line.info(format!("{good}/{emitted} witnesses re-validate: {}", per.join(", ")));
    line
}

fn white_of(view: &ShiftView) -> SymbolId {
    view.alphabet().id("white").unwrap()
}

/// Cross pairs (one side in `a`, the other not) and how many carry a checked
/// certificate of the given kind.
fn cross_certified(view: &ShiftView, g: &ExchangeabilityGraph, a: impl Fn(&Pattern) -> bool, kind: ObstructionKind) -> (usize, usize, usize) {
    let reg = ObstructionRegistry::default();
    let (mut cross, mut cert, mut witness) = (0, 0, 0);
    for e in &g.pairs {
        let (p, q) = (&g.vertices[e.a], &g.vertices[e.b]);
        if a(p) == a(q) {
            continue;
        }
        cross += 1;
        if e.class == EdgeClass::Witness {
            witness += 1;
        }
        if let Some(o) = &e.obstruction {
            if o.kind() == kind && check_obstruction(&reg, view, o, p, q).unwrap_or(false) {
                cert += 1;
            }
        }
    }
    (cross, cert, witness)
}

fn separated(g: &ExchangeabilityGraph, a: impl Fn(&Pattern) -> bool) -> bool {
    let comps = g.component_members();
    comps.iter().all(|c| c.iter().all(|&i| a(&g.vertices[i])) || c.iter().all(|&i| !a(&g.vertices[i])))
}

fn criterion_4() -> Line {
    let mut line = Line::new();
    let view = worm_view().unwrap();
    let white = white_of(&view);
    let f = box_support(2, 1);
    let t = Instant::now();
    let g = graph(&view, &f, None, PairSelection::All);
    let worm = |p: &Pattern| p.symbols().iter().any(|&s| s != white);
    let comps = g.components();
    line.check(comps >= 2, "fewer than two components");
    line.check(separated(&g, worm), "a component mixes worm and white patterns");
    let (cross, cert, wit) = cross_certified(&view, &g, worm, ObstructionKind::WormColumn);
    line.check(cert == cross, "cross pairs without worm-column certificate");
    line.info(format!(
        "box(2,1): {} patterns, {} pairs, {comps} components, {cross} cross pairs ({wit} witnessed, {cert} certified) in {:.1}s",
        g.vertices.len(),
        g.pairs.len(),
        t.elapsed().as_secs_f64()
    ));

    let chain = worm_chain(0, 3, 3).unwrap();
    let ok = chain.len() == 3
        && chain.iter().enumerate().all(|(i, w)| {
            let (p, q) = (subshift::claims::straight_worm(i as i32, 3), subshift::claims::straight_worm(i as i32 + 1, 3));
            check_witness(&view, w, &p, &q).unwrap() && independent_check(&view, w, &p, &q)
        });
    line.check(ok, "worm chain 0 -> 3");
    line.info(format!("worm_chain(0,3): {} validated steps", if ok { chain.len() } else { 0 }));
    line
}

fn criterion_5() -> Line {
    let mut line = Line::new();
    let b = SearchBudget::default();
    let gw = zoo::good_wave();
    let s = shift(gw.clone());
    let sp = spans(&gw);
    line.check(!gw.forbidden().is_empty() && sp[0] <= 2 && sp[1] <= 2 && sp[2] <= 4, "rule supports exceed 3x3x5");
    line.info(format!("{} rules, spans {sp:?}", gw.forbidden().len()));

    let t = Instant::now();
    let r = verify_good_wave(&[3, 3, 5], &GoodWaveParams::default(), &b).unwrap();
    line.check(r.verified() && r.exhaustive, "good wave torus check");
    line.info(format!(
        "(3,3,5): {} tori, {} waves, {} consecutive-level offsets refuted, {:.1}s",
        r.tested, r.params["waves"], r.params["consecutive_level_offsets_refuted"], t.elapsed().as_secs_f64()
    ));

    let t = Instant::now();
    let pools = [torus_pool(&s, &[3, 3, 5], 2000, &b).unwrap(), torus_pool(&s, &[3, 3, 6], 2000, &b).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pick = |rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..2);
        pools[i][rng.gen_range(0..pools[i].len())].clone()
    };
    let mut pasted = 0;
    for _ in 0..100 {
        let (x, y) = (pick(&mut rng), pick(&mut rng));
        let k = rng.gen_range(-3..=3);
        if verify_pasting(&x, &y, k, &b).unwrap().verified() {
            pasted += 1;
        }
    }
    line.check(pasted == 100, "pasting");
    line.info(format!("pasting {pasted}/100 ({:.1}s)", t.elapsed().as_secs_f64()));

    let t = Instant::now();
    let f = box_support(3, 1);
    let mut glued = 0;
    for _ in 0..25 {
        let mut w = || {
            let c = pick(&mut rng);
            let at = Coord::new(&[rng.gen_range(0..3), rng.gen_range(0..3), rng.gen_range(0..6)]);
            c.window(&f.translate(at)).translate(Coord::zero(3) - at)
        };
        let (p, q, p2, q2) = (w(), w(), w(), w());
        if verify_weak_mixing_gluing(&p, &q, &p2, &q2, None, &b).unwrap().verified() {
            glued += 1;
        }
    }
    line.check(glued == 25, "weak mixing gluing");
    line.info(format!("gluing {glued}/25 ({:.1}s)", t.elapsed().as_secs_f64()));

    // The language on box(3,1) is far too large to enumerate: sampled
    // cube-containing patterns against the blank one.
    let t = Instant::now();
    let view = ShiftView::Sft(s.clone());
    let blank = gw.symbol("white.e").unwrap();
    let (mut vertices, _) = sample_language(&s, &f, 2, 12, 9, &b).unwrap();
    let blank_p = Pattern::constant(&f, blank);
    if !vertices.contains(&blank_p) {
        vertices.push(blank_p);
    }
    vertices.sort_by(|a, b| a.symbols().cmp(b.symbols()));
    let g = graph(&view, &f, Some(vertices), PairSelection::All);
    let cubes = |p: &Pattern| p.symbols().iter().any(|&x| zoo::gw_parts(x).cube);
    line.check(separated(&g, cubes), "a component mixes cube and blank patterns");
    let (cross, cert, wit) = cross_certified(&view, &g, cubes, ObstructionKind::WavePresence);
    line.check(cert == cross, "cross pairs without wave-presence certificate");
    line.info(format!(
        "box(3,1) graph on {} sampled patterns: {} components, {cross} cross pairs ({wit} witnessed, {cert} certified), {:.1}s",
        g.vertices.len(),
        g.components(),
        t.elapsed().as_secs_f64()
    ));
    line
}

fn criterion_6() -> Line {
    let mut line = Line::new();
    let b = SearchBudget::default();
    let limit = Duration::from_secs(600);
    for n in [1, 2] {
        let t = Instant::now();
        let r = verify_blue_sky(n, &BlueSkyParams::default(), &b).unwrap();
        let el = t.elapsed();
        line.check(el < limit, &format!("n={n} over ten minutes"));
        if n == 1 {
            line.check(r.exhaustive, "n=1 not exhaustive");
            if !r.verified() {
                // Recorded failure: every late class completes one ring out.
                let late_ok = r.verdict == Verdict::Counterexample
                    && r.params["ring"] == 5
                    && r.notes.iter().any(|s| s.ends_with("all complete with the ring at 6"));
                line.check(false, if late_ok { "blue sky needs ring 4n+2 at n=1" } else { "n=1 fails" });
            }
        } else {
            line.check(r.verified() && r.tested >= 500, "n=2 sampled");
        }
        line.info(format!(
            "n={n}: {:?}, {}/{} patterns, {:.0}s{}",
            r.verdict,
            r.passed,
            r.tested,
            el.as_secs_f64(),
            r.notes.iter().map(|s| format!(" [{s}]")).collect::<String>()
        ));
    }
    line
}

fn criterion_7() -> Line {
    let mut line = Line::new();
    let b = SearchBudget::default();
    let gm = shift(zoo::golden_mean());
    for n in 1..=3 {
        let r = verify_periodic_density(&gm, n, &DensityParams::default(), &b).unwrap();
        line.check(r.verified() && r.exhaustive, &format!("golden mean n={n}"));
        line.info(format!("golden mean n={n}: {}/{} exhaustive", r.passed, r.tested));
    }
    let sampled = DensityParams { exhaustive_cap: 0, ..Default::default() };
    for (name, spec) in [("x_struct", zoo::x_struct()), ("good wave", zoo::good_wave())] {
        let t = Instant::now();
        let r = verify_periodic_density(&shift(spec), 1, &sampled, &b).unwrap();
        line.check(r.verified() && r.tested > 0, &format!("{name} n=1"));
        line.info(format!("{name} n=1: {}/{} sampled, {:.1}s", r.passed, r.tested, t.elapsed().as_secs_f64()));
    }
    line
}

fn criterion_8() -> Line {
    let mut line = Line::new();
    let b = SearchBudget::default();
    let s = zoo::builtin("sunny-side-up").unwrap();
    let mut prev = f64::INFINITY;
    let mut ok = true;
    let mut last = 0.0;
    for n in 0..=12 {
        let e = entropy_upper_box(&s, n, 0, &b).unwrap();
        let bound = ((2 * n + 2) as f64).ln() / (2 * n + 1) as f64;
        ok &= e.upper <= bound + 1e-12 && e.upper < prev;
        prev = e.upper;
        last = e.upper;
    }
    line.check(ok, "box bound not below ln(2n+2)/(2n+1) or not decreasing");
    line.info(format!("h(box(12)) <= {last:.4}"));
    let view = ShiftView::Sft(s);
    let mut complete = true;
    for n in 0..=3u32 {
        let f = Support::rect(&[0], &[n as i32 * 2]);
        let g = graph(&view, &f, None, PairSelection::All);
        let k = g.vertices.len();
        complete &= g.count(EdgeClass::Witness) == k * (k - 1) / 2;
    }
    line.check(complete, "graph not complete");
    line.info("graphs on supports of 1, 3, 5, 7 cells are complete");
    line
}

/// JSON outputs of a small seeded pipeline.
fn pipeline(seed: u64) -> Vec<String> {
    let b = SearchBudget::default();
    let mut out = Vec::new();
    let gw = shift(zoo::good_wave());
    let dp = DensityParams { exhaustive_cap: 0, samples: 10, seed, ..Default::default() };
    out.push(verify_periodic_density(&gw, 1, &dp, &b).unwrap().to_json());
    let bp = BlueSkyParams { samples: 60, seed, ..Default::default() };
    out.push(verify_blue_sky(2, &bp, &b).unwrap().to_json());
    let hs = ShiftView::Sft(shift(zoo::hard_squares()));
    let f = box_support(2, 1);
    let params = ExchangeabilityParams::for_support(hs.source(), &f).mode(WitnessMode::Auto);
    let g = exchangeability_graph(&hs, &ObstructionRegistry::default(), &f, None, &params, PairSelection::Sample { count: 80, seed }, 1000)
        .unwrap();
    out.push(g.to_json());
    let pool = torus_pool(&gw, &[3, 3, 5], 500, &b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..5 {
        let (x, y) = (&pool[rng.gen_range(0..pool.len())], &pool[rng.gen_range(0..pool.len())]);
        let r: ClaimReport = verify_pasting(x, y, 0, &b).unwrap();
        out.push(r.to_json());
    }
    out.push(serde_json::to_string(&strip_table(&shift(zoo::hard_squares()), 5, &StripOptions::default()).unwrap()).unwrap());
    out
}

fn criterion_9() -> Line {
    let mut line = Line::new();
    let (a, b) = (pipeline(11), pipeline(11));
    let same = a == b;
    line.check(same, "runs differ");
    let bytes: usize = a.iter().map(|s| s.len()).sum();
    line.info(format!("{} artifacts, {bytes} bytes, identical across runs", a.len()));
    line
}

fn main() {
    let criteria: [(u32, fn() -> Line); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut unexpected = Vec::new();
    for (i, f) in criteria {
        if only.is_some_and(|o| o != i) {
            continue;
        }
        let t = Instant::now();
        let line = f();
        let verdict = if line.pass { "PASS" } else { "FAIL" };
        println!("criterion {i}: {verdict} ({:.0}s) {}", t.elapsed().as_secs_f64(), line.detail);
        if !line.pass {
            println!("criterion {i}: failing clauses: {}", line.red.join(", "));
            let known = KNOWN_RED.iter().find(|(k, _)| *k == i).map(|(_, why)| *why);
            match known {
                Some(why) if line.red.iter().all(|r| r == why) => println!("criterion {i}: known failure, see decisions ledger"),
                _ => unexpected.push(i),
            }
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
