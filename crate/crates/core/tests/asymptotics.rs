use subshift::asymptotics::{
    check_obstruction, check_witness, exchangeability_graph, exchangeable, Classification, ExchangeabilityParams,
    Obstruction, ObstructionRegistry, PairSelection, ShiftView,
};
use subshift::lattice::box_support;
use subshift::zoo;
use subshift::{Coord, Pattern, Shift};

fn worm_view() -> ShiftView {
    let (spec, code) = zoo::worm_shift();
    ShiftView::factor(Shift::new(spec).unwrap(), code).unwrap()
}

#[test]
fn worm_tile_against_white_is_obstructed() {
    let v = worm_view();
    let f = box_support(2, 2);
    let white = v.alphabet().id("white").unwrap();
    let line = v.alphabet().id("line").unwrap();
    let q = Pattern::constant(&f, white);
    let mut cells: Vec<_> = q.iter().collect();
    for c in cells.iter_mut() {
        if c.0[0] == 0 {
            c.1 = line;
        }
    }
    let p = Pattern::new(2, cells);
    let params = ExchangeabilityParams::for_support(v.source(), &f);
    let c = exchangeable(&v, &p, &q, &params).unwrap();
    let Classification::Obstructed(o) = &c else { panic!("{c:?}") };
    let reg = ObstructionRegistry::default();
    assert!(check_obstruction(&reg, &v, o, &p, &q).unwrap());
    assert!(!check_obstruction(&reg, &v, o, &q, &p).unwrap());
    // narrowing the band breaks the certificate
    let Obstruction::WormColumn { holder, cell, row, nonwhite, .. } = o.clone() else { panic!() };
    let narrow = Obstruction::WormColumn { holder, cell, row, band: (cell[0], cell[0]), nonwhite };
    assert!(!check_obstruction(&reg, &v, &narrow, &p, &q).unwrap());
    // symmetric classification
    let back = exchangeable(&v, &q, &p, &params).unwrap();
    assert_eq!(back.label(), "obstructed");
}

#[test]
fn wave_presence_certificate() {
    let v = ShiftView::Sft(Shift::new(zoo::good_wave()).unwrap());
    let f = box_support(3, 2);
    let blank = zoo::gw_symbol(v.alphabet().id("white.e").map(|s| s / 2).unwrap(), false);
    let q = Pattern::constant(&f, blank);
    let cube = zoo::gw_symbol(blank / 2, true);
    let p = Pattern::new(3, f.iter().map(|c| (*c, if c[2] == 0 { cube } else { blank })));
    let o = Obstruction::WavePresence { holder: subshift::asymptotics::Side::Left, cell: Coord::zero(3), column: (-2, 2) };
    let reg = ObstructionRegistry::default();
    assert!(check_obstruction(&reg, &v, &o, &p, &q).unwrap());
    let short = Obstruction::WavePresence { holder: subshift::asymptotics::Side::Left, cell: Coord::zero(3), column: (-1, 1) };
    assert!(!check_obstruction(&reg, &v, &short, &p, &q).unwrap());
    // unregistered kind on another shift
    let gm = ShiftView::Sft(Shift::new(zoo::golden_mean()).unwrap());
    let (a, b) = (Pattern::word(0, &[0]), Pattern::word(0, &[1]));
    assert!(check_obstruction(&reg, &gm, &o, &a, &b).is_err());
}

#[test]
fn golden_mean_witnesses_validate_and_translate() {
    let v = ShiftView::Sft(Shift::new(zoo::golden_mean()).unwrap());
    let f = subshift::Support::rect(&[0], &[2]);
    let params = ExchangeabilityParams::for_support(v.source(), &f);
    let g = exchangeability_graph(&v, &ObstructionRegistry::default(), &f, None, &params, PairSelection::All, 100).unwrap();
    assert_eq!(g.components(), 1);
    for e in g.edges() {
        let w = e.witness.as_ref().unwrap();
        assert!(check_witness(&v, w, &g.vertices[e.a], &g.vertices[e.b]).unwrap());
    }
    let shift = Coord::new(&[7]);
    let ft = f.translate(shift);
    let gt = exchangeability_graph(&v, &ObstructionRegistry::default(), &ft, None, &params, PairSelection::All, 100)
        .unwrap();
    let labels = |g: &subshift::asymptotics::ExchangeabilityGraph| g.pairs.iter().map(|e| (e.a, e.b, e.class)).collect::<Vec<_>>();
    assert_eq!(labels(&g), labels(&gt));
}
