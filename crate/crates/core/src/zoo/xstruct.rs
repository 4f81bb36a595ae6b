//! The Wang shift X_struct: nested squares drawn by coloured wires.
//!
//! Tile table (faces left, right, bottom, top):
//!
//! | shape    | wired faces              | plain faces          | free corners         |
//! |----------|--------------------------|----------------------|----------------------|
//! | white    | -                        | all `w`              | -                    |
//! | diagonal | -                        | l=g r=w b=w t=g      | -                    |
//! | dash     | -                        | all `g`              | -                    |
//! | vdouble  | bottom, top              | l=w r=g              | SW=NW, SE=NE         |
//! | hdouble  | left, right              | b=g t=w              | SW=SE, NW=NE         |
//! | cross    | all four                 | -                    | all four             |
//! | tee_n    | left, right, top         | b=g                  | SW=SE                |
//! | tee_s    | left, right, bottom      | t=w                  | NW=NE                |
//! | tee_e    | right, bottom, top       | l=w                  | SW=NW                |
//! | tee_w    | left, bottom, top        | r=g                  | SE=NE                |
//!
//! A wired face carries the colours of the two wire ends crossing it, which
//! are the values at the two corners it joins: bottom `v:SW SE`, top
//! `v:NW NE`, left `h:SW NW`, right `h:SE NE` (b = blue = 0, r = red = 1).

use crate::alphabet::{Alphabet, Symbol};
use crate::pattern::TorusConfig;
use crate::spec::{compile_wang, ShiftSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TileShape {
    White,
    Diagonal,
    Dash,
    VDouble,
    HDouble,
    Cross,
    TeeN,
    TeeS,
    TeeE,
    TeeW,
}

impl TileShape {
    pub fn name(self) -> &'static str {
        match self {
            TileShape::White => "white",
            TileShape::Diagonal => "diagonal",
            TileShape::Dash => "dash",
            TileShape::VDouble => "vdouble",
            TileShape::HDouble => "hdouble",
            TileShape::Cross => "cross",
            TileShape::TeeN => "tee_n",
            TileShape::TeeS => "tee_s",
            TileShape::TeeE => "tee_e",
            TileShape::TeeW => "tee_w",
        }
    }

    pub fn code(self) -> i64 {
        self as i64
    }

    pub fn from_code(c: i64) -> Option<TileShape> {
        ALL_SHAPES.get(c as usize).copied()
    }

    pub fn is_wire(self) -> bool {
        self.code() >= TileShape::VDouble.code()
    }

    /// Which faces (left, right, bottom, top) carry wires.
    fn wired(self) -> [bool; 4] {
        match self {
            TileShape::VDouble => [false, false, true, true],
            TileShape::HDouble => [true, true, false, false],
            TileShape::Cross => [true; 4],
            TileShape::TeeN => [true, true, false, true],
            TileShape::TeeS => [true, true, true, false],
            TileShape::TeeE => [false, true, true, true],
            TileShape::TeeW => [true, false, true, true],
            _ => [false; 4],
        }
    }

    /// Labels of the unwired faces.
    fn plain(self) -> [&'static str; 4] {
        match self {
            TileShape::White => ["w", "w", "w", "w"],
            TileShape::Diagonal => ["g", "w", "w", "g"],
            TileShape::Dash => ["g", "g", "g", "g"],
            TileShape::VDouble => ["w", "g", "", ""],
            TileShape::HDouble => ["", "", "g", "w"],
            TileShape::TeeN => ["", "", "g", ""],
            TileShape::TeeS => ["", "", "", "w"],
            TileShape::TeeE => ["w", "", "", ""],
            TileShape::TeeW => ["", "g", "", ""],
            TileShape::Cross => ["", "", "", ""],
        }
    }

    /// Whether a corner assignment is realizable: corners joined by a
    /// single straight wire share its colour.
    fn admits(self, c: Corners) -> bool {
        match self {
            TileShape::VDouble => c.sw == c.nw && c.se == c.ne,
            TileShape::HDouble => c.sw == c.se && c.nw == c.ne,
            TileShape::Cross => true,
            TileShape::TeeN => c.sw == c.se,
            TileShape::TeeS => c.nw == c.ne,
            TileShape::TeeE => c.sw == c.nw,
            TileShape::TeeW => c.se == c.ne,
            _ => false,
        }
    }
}

const ALL_SHAPES: [TileShape; 10] = [
    TileShape::White,
    TileShape::Diagonal,
    TileShape::Dash,
    TileShape::VDouble,
    TileShape::HDouble,
    TileShape::Cross,
    TileShape::TeeN,
    TileShape::TeeS,
    TileShape::TeeE,
    TileShape::TeeW,
];

/// The seven wire shapes.
pub fn wire_shapes() -> &'static [TileShape] {
    &ALL_SHAPES[3..]
}

/// Corner values SW, SE, NW, NE (0 blue, 1 red).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Corners {
    pub sw: u8,
    pub se: u8,
    pub nw: u8,
    pub ne: u8,
}

impl Corners {
    fn from_bits(b: u8) -> Self {
        Corners { sw: b >> 3 & 1, se: b >> 2 & 1, nw: b >> 1 & 1, ne: b & 1 }
    }

    fn letters(self) -> String {
        [self.sw, self.se, self.nw, self.ne].iter().map(|&v| if v == 1 { 'r' } else { 'b' }).collect()
    }
}

fn colour(v: u8) -> char {
    if v == 1 {
        'r'
    } else {
        'b'
    }
}

fn wire_tile(shape: TileShape, c: Corners) -> Symbol {
    let wired_labels = [
        format!("h:{}{}", colour(c.sw), colour(c.nw)),
        format!("h:{}{}", colour(c.se), colour(c.ne)),
        format!("v:{}{}", colour(c.sw), colour(c.se)),
        format!("v:{}{}", colour(c.nw), colour(c.ne)),
    ];
    let w = shape.wired();
    let p = shape.plain();
    let faces: Vec<String> = (0..4).map(|i| if w[i] { wired_labels[i].clone() } else { p[i].to_string() }).collect();
    let faces: Vec<&str> = faces.iter().map(String::as_str).collect();
    Symbol::with_faces(format!("{}_{}", shape.name(), c.letters()), &faces)
        .attr("NE", c.ne as i64)
        .attr("NW", c.nw as i64)
        .attr("SE", c.se as i64)
        .attr("SW", c.sw as i64)
        .attr("shape", shape.code())
        .attr("wire", 1)
}

fn plain_tile(shape: TileShape) -> Symbol {
    Symbol::with_faces(shape.name(), &shape.plain()).attr("shape", shape.code()).attr("wire", 0)
}

/// Tiles in alphabet order: white, diagonal, dash, then each wire shape
/// with its admissible corner colourings in binary order of SW SE NW NE.
pub fn x_struct_symbols() -> Vec<Symbol> {
    let mut out = vec![plain_tile(TileShape::White), plain_tile(TileShape::Diagonal), plain_tile(TileShape::Dash)];
    for &shape in wire_shapes() {
        for bits in 0..16u8 {
            let c = Corners::from_bits(bits);
            if shape.admits(c) {
                out.push(wire_tile(shape, c));
            }
        }
    }
    out
}

/// The uncompiled tile table, as shipped.
pub fn x_struct_table() -> ShiftSpec {
    let notes = vec![
        "X_struct: nested squares drawn by coloured wires.".to_string(),
        "faces = left,right,bottom,top.".to_string(),
        "w = white side, g = hatched side of the square's diagonal.".to_string(),
        "wired faces: bottom v:SW,SE  top v:NW,NE  left h:SW,NW  right h:SE,NE (b blue 0, r red 1).".to_string(),
        "wire shapes and independent wires:".to_string(),
        "  vdouble: two vertical straights (SW=NW, SE=NE), 4 colourings".to_string(),
        "  hdouble: two horizontal straights (SW=SE, NW=NE), 4 colourings".to_string(),
        "  cross: four corner L-wires, 16 colourings".to_string(),
        "  tee_n: lower straight + NW,NE L-wires (SW=SE), 8 colourings".to_string(),
        "  tee_s: upper straight + SW,SE L-wires (NW=NE), 8 colourings".to_string(),
        "  tee_e: left straight + SE,NE L-wires (SW=NW), 8 colourings".to_string(),
        "  tee_w: right straight + SW,NW L-wires (SE=NE), 8 colourings".to_string(),
        "total 3 + 56 = 59 tiles; attribute shape: 0 white .. 9 tee_w.".to_string(),
    ];
    ShiftSpec::new("x_struct", 2, vec![1, 1], Alphabet::new(x_struct_symbols()).expect("x_struct tiles"), vec![], true)
        .expect("x_struct")
        .with_notes(notes)
}

/// X_struct with face matching compiled.
pub fn x_struct() -> ShiftSpec {
    compile_wang(&x_struct_table()).expect("compile x_struct")
}

/// The square grid of side `k`, all wires blue, repeated `copies` times
/// in each direction. Squares have their lower-left cross at multiples of `k`.
pub fn grid_torus(k: u32, copies: u32) -> TorusConfig {
    let a = x_struct_table().alphabet().clone();
    let id = |n: &str| a.id(n).expect("grid tile");
    let (cross, v, h) = (id("cross_bbbb"), id("vdouble_bbbb"), id("hdouble_bbbb"));
    let (diag, dash, white) = (id("diagonal"), id("dash"), id("white"));
    let k = k as i32;
    TorusConfig::from_fn(vec![k as u32 * copies; 2], |c| {
        let (i, j) = (c[0].rem_euclid(k), c[1].rem_euclid(k));
        match (i == 0, j == 0) {
            (true, true) => cross,
            (true, false) => v,
            (false, true) => h,
            _ if i == j => diag,
            _ if j > i => dash,
            _ => white,
        }
    })
}

/// Shape and corner values of a tile, read from its attributes.
pub fn tile_info(s: &Symbol) -> Option<(TileShape, Option<Corners>)> {
    let shape = TileShape::from_code(s.get("shape")?)?;
    let corners = if shape.is_wire() {
        Some(Corners {
            sw: s.get("SW")? as u8,
            se: s.get("SE")? as u8,
            nw: s.get("NW")? as u8,
            ne: s.get("NE")? as u8,
        })
    } else {
        None
    };
    Some((shape, corners))
}
