//! The Good Wave Shift over Z^3: X_struct tiles paired with filled/empty
//! cubes.
//!
//! Symbol `2t + c` is tile `t` of X_struct with cube bit `c`; names are
//! `<tile>.e` and `<tile>.c`. Rules, with `e` ranging over the four lateral
//! unit vectors:
//!
//! 1. every z-plane of tiles is an X_struct configuration;
//! 2. a non-white tile forces white tiles one and two levels above;
//! 3. a filled cube forces empty cubes one and two levels above;
//! 4. a filled cube sees exactly one filled cube among `e - z`, `e`, `e + z`;
//! 5. a non-white tile has a filled cube at its own level or the one above;
//! 6. a wire tile has filled cubes at `(0,0,SW)`, `(1,0,SE)`, `(0,1,NW)`,
//!    `(1,1,NE)`;
//! 7. a cube step up along x (or y) sits on a wire with SW=0, SE=1 (NW=1);
//!    a step down sits one level lower on a wire with SW=1, SE=0 (NW=0).

use super::xstruct::{tile_info, x_struct};
use crate::alphabet::{Alphabet, Symbol, SymbolId, SymbolSet};
use crate::lattice::Coord;
use crate::spec::{ForbiddenPattern, ShiftSpec};
use std::collections::BTreeMap;

/// A Good Wave symbol split into its two layers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GwSymbol {
    pub tile: SymbolId,
    pub cube: bool,
}

pub fn gw_symbol(tile: SymbolId, cube: bool) -> SymbolId {
    2 * tile + cube as SymbolId
}

pub fn gw_parts(s: SymbolId) -> GwSymbol {
    GwSymbol { tile: s / 2, cube: s % 2 == 1 }
}

fn lift(tiles: SymbolSet, cubes: &[bool]) -> SymbolSet {
    let mut out = SymbolSet::EMPTY;
    for t in tiles.iter() {
        for &c in cubes {
            out.insert(gw_symbol(t, c));
        }
    }
    out
}

fn at(x: i32, y: i32, z: i32) -> Coord {
    Coord::new(&[x, y, z])
}

fn rule(cells: Vec<(Coord, SymbolSet)>) -> ForbiddenPattern {
    ForbiddenPattern::new(cells).expect("good wave rule")
}

pub fn good_wave() -> ShiftSpec {
    let xs = x_struct();
    let xa = xs.alphabet();
    let mut symbols = Vec::with_capacity(2 * xa.len());
    for s in xa.symbols() {
        for cube in [false, true] {
            let mut sym = Symbol::plain(format!("{}.{}", s.name, if cube { 'c' } else { 'e' }));
            sym.attrs = s.attrs.clone();
            symbols.push(sym.attr("cube", cube as i64));
        }
    }
    let alphabet = Alphabet::new(symbols).expect("good wave alphabet");

    let both = [false, true];
    let all_tiles = xa.all();
    let white = SymbolSet::single(xa.id("white").expect("white tile"));
    let nonwhite_tiles = all_tiles.minus(white);
    let cube = lift(all_tiles, &[true]);
    let empty = lift(all_tiles, &[false]);
    let nonwhite = lift(nonwhite_tiles, &both);
    let nonwhite_empty = lift(nonwhite_tiles, &[false]);

    let corner_tiles = |corner: usize, v: u8| {
        xa.select(|s| match tile_info(s) {
            Some((_, Some(c))) => [c.sw, c.se, c.nw, c.ne][corner] == v,
            _ => false,
        })
    };
    let wire_with = |a: usize, va: u8, b: usize, vb: u8| corner_tiles(a, va).and(corner_tiles(b, vb));

    let mut forbidden = Vec::new();

    // Each z-plane is an X_struct configuration.
    for f in xs.forbidden() {
        forbidden.push(rule(
            f.cells()
                .iter()
                .map(|(c, set)| (at(c[0], c[1], 0), lift(*set, &both)))
                .collect(),
        ));
    }
    // Non-white tiles and filled cubes are followed by two quiet levels.
    for dz in [1, 2] {
        forbidden.push(rule(vec![(at(0, 0, 0), nonwhite), (at(0, 0, dz), nonwhite)]));
        forbidden.push(rule(vec![(at(0, 0, 0), cube), (at(0, 0, dz), cube)]));
    }
    // Exactly one lateral neighbour cube within one level.
    for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
        forbidden.push(rule(vec![
            (at(0, 0, 0), cube),
            (at(dx, dy, -1), empty),
            (at(dx, dy, 0), empty),
            (at(dx, dy, 1), empty),
        ]));
        for (a, b) in [(-1, 0), (-1, 1), (0, 1)] {
            forbidden.push(rule(vec![(at(0, 0, 0), cube), (at(dx, dy, a), cube), (at(dx, dy, b), cube)]));
        }
    }
    // A non-white tile has a cube at its level or the next.
    forbidden.push(rule(vec![(at(0, 0, 0), nonwhite_empty), (at(0, 0, 1), empty)]));
    // Wire corners point at cubes.
    let mut classes = BTreeMap::new();
    for (corner, (dx, dy), cname) in [(0, (0, 0), "sw"), (1, (1, 0), "se"), (2, (0, 1), "nw"), (3, (1, 1), "ne")] {
        for v in [0u8, 1] {
            let tiles = lift(corner_tiles(corner, v), &both);
            classes.insert(format!("{cname}{v}"), tiles);
            let target = at(dx, dy, v as i32);
            if target == at(0, 0, 0) {
                let unary = tiles.and(empty);
                classes.insert(format!("{cname}{v}_empty"), unary);
                forbidden.push(rule(vec![(target, unary)]));
            } else {
                forbidden.push(rule(vec![(at(0, 0, 0), tiles), (target, empty)]));
            }
        }
    }
    // Steps in the wave height sit on matching wires.
    let up_x = cube.minus(lift(wire_with(0, 0, 1, 1), &both));
    let down_x = lift(all_tiles.minus(wire_with(0, 1, 1, 0)), &both);
    let up_y = cube.minus(lift(wire_with(0, 0, 2, 1), &both));
    let down_y = lift(all_tiles.minus(wire_with(0, 1, 2, 0)), &both);
    forbidden.push(rule(vec![(at(0, 0, 0), up_x), (at(1, 0, 1), cube)]));
    forbidden.push(rule(vec![(at(0, 0, 0), cube), (at(1, 0, -1), cube), (at(0, 0, -1), down_x)]));
    forbidden.push(rule(vec![(at(0, 0, 0), up_y), (at(0, 1, 1), cube)]));
    forbidden.push(rule(vec![(at(0, 0, 0), cube), (at(0, 1, -1), cube), (at(0, 0, -1), down_y)]));

    for (name, set) in [
        ("cube", cube),
        ("empty", empty),
        ("nonwhite", nonwhite),
        ("nonwhite_empty", nonwhite_empty),
        ("cube_not_up_x", up_x),
        ("not_down_x", down_x),
        ("cube_not_up_y", up_y),
        ("not_down_y", down_y),
    ] {
        classes.insert(name.to_string(), set);
    }

    let notes = vec![
        "Good Wave Shift: X_struct tiles times filled (.c) / empty (.e) cubes.".to_string(),
        "symbol 2t+c pairs X_struct tile t with cube bit c.".to_string(),
        "rules: planes are X_struct; non-white tiles and cubes are followed by two quiet levels;".to_string(),
        "each cube sees exactly one lateral cube within one level; non-white tiles sit under a cube;".to_string(),
        "wire corners SW,SE,NW,NE point at cubes; height steps sit on matching wires.".to_string(),
    ];
    ShiftSpec::new("good_wave", 3, vec![1, 1, 2], alphabet, forbidden, false)
        .expect("good wave")
        .with_classes(classes)
        .with_notes(notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::TorusConfig;

    fn flat(periods: &[u32], level: i32) -> TorusConfig {
        let gw = good_wave();
        let w = gw.symbol("white.e").unwrap();
        let c = gw.symbol("white.c").unwrap();
        TorusConfig::from_fn(periods.to_vec(), |x| if x[2] == level { c } else { w })
    }

    #[test]
    fn alphabet_and_rule_box() {
        let gw = good_wave();
        assert_eq!(gw.alphabet().len(), 118);
        for f in gw.forbidden() {
            assert!(f.span(0) <= 2 && f.span(1) <= 2 && f.span(2) <= 4);
        }
        let s = gw.symbol("cross_rbbr.c").unwrap();
        assert_eq!(gw_parts(s), GwSymbol { tile: x_struct().symbol("cross_rbbr").unwrap(), cube: true });
        assert_eq!(gw_symbol(gw_parts(s).tile, true), s);
    }

    #[test]
    fn flat_wave_and_blank_are_valid() {
        let gw = good_wave();
        assert!(gw.validate_torus(&flat(&[3, 3, 5], 0)).unwrap());
        let w = gw.symbol("white.e").unwrap();
        assert!(gw.validate_torus(&TorusConfig::constant(vec![3, 3, 5], w)).unwrap());
    }

    #[test]
    fn cubes_two_apart_are_forbidden() {
        let gw = good_wave();
        let (w, c) = (gw.symbol("white.e").unwrap(), gw.symbol("white.c").unwrap());
        let t = TorusConfig::from_fn(vec![3, 3, 6], |x| if x[2] % 3 == 0 { c } else { w });
        assert!(gw.validate_torus(&t).unwrap());
        let t = TorusConfig::from_fn(vec![3, 3, 6], |x| if x[2] % 2 == 0 { c } else { w });
        assert!(!gw.validate_torus(&t).unwrap());
    }

    #[test]
    fn blue_cross_plane_under_flat_wave() {
        // Blue corners point at the cube level itself.
        let gw = good_wave();
        let bc = gw.symbol("cross_bbbb.c").unwrap();
        let w = gw.symbol("white.e").unwrap();
        let t = TorusConfig::from_fn(vec![3, 3, 5], |x| if x[2] == 0 { bc } else { w });
        assert!(gw.validate_torus(&t).unwrap());
        let rc = gw.symbol("cross_rrrr.e").unwrap();
        let wc = gw.symbol("white.c").unwrap();
        let t = TorusConfig::from_fn(vec![3, 3, 5], |x| match x[2] {
            0 => rc,
            1 => wc,
            _ => w,
        });
        assert!(gw.validate_torus(&t).unwrap());
    }
}
