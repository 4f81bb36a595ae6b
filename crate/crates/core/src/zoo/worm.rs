//! The seven-tile precursor of the Worm Shift and its colour-erasing factor.
//!
//! Faces are `n` (no line), `b` (blue) and `r` (red), in the order left,
//! right, bottom, top. A worm occupies two adjacent columns: red on the
//! left, blue on the right, jogging sideways through the corner pairs
//! (red_down, blue_up) and (red_up, blue_down).

use crate::alphabet::{Alphabet, Symbol, SymbolId};
use crate::code::BlockCode;
use crate::spec::{compile_wang, ShiftSpec};

/// Tiles of the precursor, in alphabet order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WormTile {
    White = 0,
    BlueLine = 1,
    RedLine = 2,
    /// Red line from below turning right (blue to the right).
    RedDown = 3,
    /// Red line from above turning right.
    RedUp = 4,
    /// Blue line from below turning left (red to the left).
    BlueDown = 5,
    /// Blue line turning upward, entered from the left.
    BlueUp = 6,
}

const TILES: [(&str, [&str; 4], &str); 7] = [
    ("white", ["n", "n", "n", "n"], "white"),
    ("blue_line", ["n", "n", "b", "b"], "line"),
    ("red_line", ["n", "n", "r", "r"], "line"),
    ("red_down", ["n", "b", "r", "n"], "down_right"),
    ("red_up", ["n", "r", "n", "r"], "up_right"),
    ("blue_down", ["r", "n", "b", "n"], "down_left"),
    ("blue_up", ["b", "n", "n", "b"], "up_left"),
];

/// Uncompiled Wang table, as shipped.
pub fn worm_precursor_table() -> ShiftSpec {
    let symbols = TILES
        .iter()
        .map(|(name, faces, _)| {
            let colour = if name.starts_with("red") { 2 } else if name.starts_with("blue") { 1 } else { 0 };
            Symbol::with_faces(*name, faces).attr("colour", colour)
        })
        .collect();
    ShiftSpec::new("worm_precursor", 2, vec![1, 1], Alphabet::new(symbols).expect("worm tiles"), vec![], true)
        .expect("worm precursor")
        .with_notes(vec![
            "Worm Shift precursor: seven Wang tiles.".into(),
            "faces = left,right,bottom,top; n = no line, b = blue, r = red.".into(),
            "attribute colour: 0 none, 1 blue, 2 red (colour of the lower/entering line).".into(),
        ])
}

/// The precursor with face matching compiled into dominoes.
pub fn worm_precursor() -> ShiftSpec {
    compile_wang(&worm_precursor_table()).expect("compile worm")
}

/// Alphabet of the Worm Shift (colours erased).
pub fn worm_alphabet() -> Alphabet {
    let names = ["white", "line", "down_right", "up_right", "down_left", "up_left"];
    Alphabet::new(names.iter().map(|n| Symbol::plain(*n).attr("white", (*n == "white") as i64)).collect())
        .expect("worm alphabet")
}

/// Single-cell code erasing wire colours.
pub fn worm_shift_code() -> BlockCode {
    let target = worm_alphabet();
    let map: Vec<SymbolId> = TILES.iter().map(|t| target.id(t.2).unwrap()).collect();
    BlockCode::single_cell(2, TILES.len(), target, map).expect("worm code")
}

/// The precursor together with its factor code.
pub fn worm_shift() -> (ShiftSpec, BlockCode) {
    (worm_precursor(), worm_shift_code())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::apply_code;
    use crate::lattice::Coord;
    use crate::pattern::Pattern;

    fn col(tiles: &[WormTile]) -> Pattern {
        Pattern::new(2, tiles.iter().enumerate().map(|(y, t)| (Coord::new(&[0, y as i32]), *t as SymbolId)))
    }

    #[test]
    fn census_and_lines() {
        let s = worm_precursor();
        assert_eq!(s.alphabet().len(), 7);
        use WormTile::*;
        assert!(s.validate_pattern(&col(&[BlueLine, BlueLine])).unwrap());
        assert!(!s.validate_pattern(&col(&[RedLine, BlueLine])).unwrap());
        assert!(!s.validate_pattern(&col(&[BlueLine, RedLine])).unwrap());
    }

    #[test]
    fn jog_pairs() {
        use WormTile::*;
        let s = worm_precursor();
        let row = |a: WormTile, b: WormTile| Pattern::new(2, [(Coord::new(&[0, 0]), a as u8), (Coord::new(&[1, 0]), b as u8)]);
        let corners = [RedDown, RedUp, BlueDown, BlueUp];
        let mut ok = Vec::new();
        for a in corners {
            let crossing = s.alphabet().symbol(a as u8).faces.as_ref().unwrap()[1] != "n";
            for b in corners {
                if crossing && s.validate_pattern(&row(a, b)).unwrap() {
                    ok.push((a, b));
                }
            }
        }
        assert_eq!(ok, vec![(RedDown, BlueUp), (RedUp, BlueDown)]);
    }

    #[test]
    fn code_erases_colour() {
        use WormTile::*;
        let code = worm_shift_code();
        let img = apply_code(&code, &col(&[BlueLine, RedLine, White])).unwrap();
        let a = worm_alphabet();
        let names: Vec<&str> = img.symbols().iter().map(|&s| a.name(s)).collect();
        assert_eq!(names, vec!["line", "line", "white"]);
        assert!(a.symbols().iter().all(|s| s.get("colour").is_none()));
    }
}
