//! SVG and PPM renders of patterns and tori.
//!
//! Tiles are drawn from their attributes: X_struct shapes get their wires
//! (blue or red by corner value), the worm tiles their lines, Good Wave
//! symbols a shaded square when the cube is filled. Anything else gets a
//! palette colour and its name. Three-dimensional input becomes one sheet
//! per z-level. Output depends only on the input.

use std::fmt::Write;
use subshift::claims::{extract_waves, WaveFunction, Waves};
use subshift::zoo::{tile_info, TileShape};
use subshift::{Alphabet, Coord, Error, Pattern, Result, SymbolId, TorusConfig};

const CELL: i32 = 24;
const GAP: i32 = 16;
const BLUE: &str = "#2b59c3";
const RED: &str = "#c8312b";
const GREY: &str = "#8c8c8c";
const CUBE: &str = "#d9b97a";
const CREST: &str = "#f2c200";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// Tile glyphs, one sheet per z-level.
    Svg,
    /// Height map, two tile planes and a side view of a Good Wave torus.
    Panels,
    /// Flat colours, 8 pixels per cell.
    Ppm,
}

impl std::str::FromStr for Style {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "svg" => Ok(Style::Svg),
            "panels" => Ok(Style::Panels),
            "ppm" => Ok(Style::Ppm),
            _ => Err(format!("unknown style `{s}` (svg, panels, ppm)")),
        }
    }
}

pub enum Art<'a> {
    Pattern(&'a Pattern),
    Torus(&'a TorusConfig),
}

/// A rectangle of cells, `None` outside a pattern's support.
#[derive(Clone)]
struct Sheet {
    title: String,
    w: i32,
    h: i32,
    cells: Vec<Option<SymbolId>>,
    /// Cells to outline as crest.
    crest: Vec<(i32, i32)>,
}

impl Sheet {
    fn get(&self, x: i32, y: i32) -> Option<SymbolId> {
        self.cells[(y * self.w + x) as usize]
    }
}

fn sheets(art: &Art) -> Result<Vec<Sheet>> {
    let dim = match art {
        Art::Pattern(p) => p.dim(),
        Art::Torus(t) => t.dim(),
    };
    if !(2..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim));
    }
    let (lo, hi) = match art {
        Art::Pattern(p) => match p.support().bounds() {
            Some((lo, hi)) => (lo, hi),
            None => return Ok(Vec::new()),
        },
        Art::Torus(t) => {
            (vec![0; dim], t.periods().iter().map(|&p| p as i32 - 1).collect())
        }
    };
    let get = |c: &Coord| match art {
        Art::Pattern(p) => p.get(c),
        Art::Torus(t) => Some(t.get(c)),
    };
    let (w, h) = (hi[0] - lo[0] + 1, hi[1] - lo[1] + 1);
    let levels: Vec<Option<i32>> = if dim == 3 { (lo[2]..=hi[2]).map(Some).collect() } else { vec![None] };
    let crest_at = |z: i32| -> Vec<(i32, i32)> {
        let Art::Torus(t) = art else { return Vec::new() };
        match extract_waves(t) {
            Ok(Waves::Found(ws)) => ws
                .iter()
                .flat_map(|wv| {
                    let top = wv.base + wv.heights.iter().max().copied().unwrap_or(0);
                    let p2 = t.periods()[2] as i32;
                    if top.rem_euclid(p2) == z {
                        wv.crest()
                    } else {
                        Vec::new()
                    }
                })
                .collect(),
            _ => Vec::new(),
        }
    };
    Ok(levels
        .into_iter()
        .map(|z| {
            let mut cells = Vec::with_capacity((w * h) as usize);
            for row in 0..h {
                for col in 0..w {
                    // Row 0 is the top of the picture.
                    let mut c = vec![lo[0] + col, hi[1] - row];
                    c.extend(z);
                    cells.push(get(&Coord::new(&c)));
                }
            }
            let crest = z
                .map(|z| crest_at(z).into_iter().map(|(x, y)| (x - lo[0], hi[1] - y)).collect())
                .unwrap_or_default();
            Sheet { title: z.map(|z| format!("z = {z}")).unwrap_or_default(), w, h, cells, crest }
        })
        .collect())
}

fn palette(s: SymbolId) -> String {
    // Fixed hue walk; enough contrast for small alphabets.
    let hue = (s as u32 * 137) % 360;
    let (r, g, b) = hsl(hue as f64, 0.45, 0.72);
    format!("#{r:02x}{g:02x}{b:02x}")
}

fn hsl(h: f64, s: f64, l: f64) -> (u8, u8, u8) {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let q = |v: f64| ((v + m) * 255.0).round() as u8;
    (q(r), q(g), q(b))
}

fn hex(c: &str) -> [u8; 3] {
    let v = u32::from_str_radix(&c[1..], 16).unwrap_or(0);
    [(v >> 16) as u8, (v >> 8) as u8, v as u8]
}

/// Face order left, right, bottom, top; `(dx, dy)` of each face midpoint in
/// picture coordinates (y down).
const FACES: [(i32, i32); 4] = [(-1, 0), (1, 0), (0, 1), (0, -1)];

enum Glyph {
    Blank,
    Fill(String),
    Label(String, String),
    /// Segments from the centre to faces, with colours.
    Lines(Vec<(usize, &'static str)>, Option<[u8; 4]>),
    Diagonal,
    Dash,
}

fn glyph(a: &Alphabet, s: SymbolId) -> (Glyph, bool) {
    let sym = a.symbol(s);
    let cube = sym.get("cube") == Some(1);
    if let Some((shape, corners)) = tile_info(sym) {
        let g = match (shape, corners) {
            (TileShape::White, _) => Glyph::Blank,
            (TileShape::Diagonal, _) => Glyph::Diagonal,
            (TileShape::Dash, _) => Glyph::Dash,
            (shape, Some(c)) => {
                let wired: [bool; 4] = match shape {
                    TileShape::VDouble => [false, false, true, true],
                    TileShape::HDouble => [true, true, false, false],
                    TileShape::TeeN => [true, true, false, true],
                    TileShape::TeeS => [true, true, true, false],
                    TileShape::TeeE => [false, true, true, true],
                    TileShape::TeeW => [true, false, true, true],
                    _ => [true; 4],
                };
                let pair = [c.sw.max(c.nw), c.se.max(c.ne), c.sw.max(c.se), c.nw.max(c.ne)];
                let lines = (0..4).filter(|&i| wired[i]).map(|i| (i, if pair[i] == 1 { RED } else { BLUE })).collect();
                Glyph::Lines(lines, Some([c.sw, c.se, c.nw, c.ne]))
            }
            _ => Glyph::Blank,
        };
        return (g, cube);
    }
    if let Some(faces) = &sym.faces {
        let lines: Vec<(usize, &str)> = faces
            .iter()
            .take(4)
            .enumerate()
            .filter_map(|(i, l)| match l.as_str() {
                "b" => Some((i, BLUE)),
                "r" => Some((i, RED)),
                _ => None,
            })
            .collect();
        if faces.iter().all(|l| matches!(l.as_str(), "n" | "b" | "r")) {
            return (if lines.is_empty() { Glyph::Blank } else { Glyph::Lines(lines, None) }, cube);
        }
    }
    let worm: Option<&[usize]> = match sym.name.as_str() {
        "white" => Some(&[]),
        "line" => Some(&[2, 3]),
        "down_right" => Some(&[2, 1]),
        "up_right" => Some(&[1, 3]),
        "down_left" => Some(&[0, 2]),
        "up_left" => Some(&[0, 3]),
        _ => None,
    };
    if let Some(faces) = worm {
        let g = if faces.is_empty() { Glyph::Blank } else { Glyph::Lines(faces.iter().map(|&i| (i, "#202020")).collect(), None) };
        return (g, cube);
    }
    if a.len() <= 16 {
        (Glyph::Label(palette(s), sym.name.clone()), cube)
    } else {
        (Glyph::Fill(palette(s)), cube)
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn cell_svg(out: &mut String, a: &Alphabet, s: SymbolId, x0: i32, y0: i32) {
    let (g, cube) = glyph(a, s);
    let h = CELL / 2;
    let (cx, cy) = (x0 + h, y0 + h);
    if cube {
        let _ = writeln!(out, r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{CUBE}"/>"#, x0 + 2, y0 + 2, CELL - 4, CELL - 4);
    }
    match g {
        Glyph::Blank => {}
        Glyph::Fill(c) => {
            let _ = writeln!(out, r#"<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="{c}"/>"#);
        }
        Glyph::Label(c, name) => {
            let _ = writeln!(out, r#"<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="{c}"/>"#);
            let _ = writeln!(
                out,
                r#"<text x="{cx}" y="{}" font-size="8" text-anchor="middle" font-family="monospace">{}</text>"#,
                cy + 3,
                esc(&name.chars().take(4).collect::<String>())
            );
        }
        Glyph::Diagonal => {
            let _ = writeln!(out, r#"<line x1="{x0}" y1="{}" x2="{}" y2="{y0}" stroke="{GREY}" stroke-width="1.5"/>"#, y0 + CELL, x0 + CELL);
        }
        Glyph::Dash => {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{cy}" x2="{}" y2="{cy}" stroke="{GREY}" stroke-width="1.5" stroke-dasharray="3 2"/>"#,
                x0 + 3,
                x0 + CELL - 3
            );
        }
        Glyph::Lines(lines, corners) => {
            for (face, colour) in lines {
                let (dx, dy) = FACES[face];
                let _ = writeln!(
                    out,
                    r#"<line x1="{cx}" y1="{cy}" x2="{}" y2="{}" stroke="{colour}" stroke-width="3" stroke-linecap="round"/>"#,
                    cx + dx * h,
                    cy + dy * h
                );
            }
            if let Some(c) = corners {
                // SW, SE, NW, NE.
                for (i, (px, py)) in [(x0, y0 + CELL), (x0 + CELL, y0 + CELL), (x0, y0), (x0 + CELL, y0)].into_iter().enumerate() {
                    let colour = if c[i] == 1 { RED } else { BLUE };
                    let (px, py) = (px + if px == x0 { 3 } else { -3 }, py + if py == y0 { 3 } else { -3 });
                    let _ = writeln!(out, r#"<circle cx="{px}" cy="{py}" r="2" fill="{colour}"/>"#);
                }
            }
        }
    }
}

fn sheet_svg(out: &mut String, a: &Alphabet, sheet: &Sheet, ox: i32, oy: i32) {
    if !sheet.title.is_empty() {
        let _ = writeln!(out, r#"<text x="{ox}" y="{}" font-size="11" font-family="sans-serif">{}</text>"#, oy - 4, esc(&sheet.title));
    }
    let _ = writeln!(
        out,
        r##"<rect x="{ox}" y="{oy}" width="{}" height="{}" fill="white" stroke="#bbbbbb"/>"##,
        sheet.w * CELL,
        sheet.h * CELL
    );
    for row in 0..sheet.h {
        for col in 0..sheet.w {
            let (x0, y0) = (ox + col * CELL, oy + row * CELL);
            match sheet.get(col, row) {
                Some(s) => cell_svg(out, a, s, x0, y0),
                None => {
                    let _ = writeln!(out, r##"<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="#eeeeee"/>"##);
                }
            }
        }
    }
    for &(col, row) in &sheet.crest {
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{CREST}" stroke-width="2"/>"#,
            ox + col * CELL + 1,
            oy + row * CELL + 1,
            CELL - 2,
            CELL - 2
        );
    }
    for i in 0..=sheet.w {
        let x = ox + i * CELL;
        let _ = writeln!(out, r##"<line x1="{x}" y1="{oy}" x2="{x}" y2="{}" stroke="#dddddd" stroke-width="0.5"/>"##, oy + sheet.h * CELL);
    }
    for i in 0..=sheet.h {
        let y = oy + i * CELL;
        let _ = writeln!(out, r##"<line x1="{ox}" y1="{y}" x2="{}" y2="{y}" stroke="#dddddd" stroke-width="0.5"/>"##, ox + sheet.w * CELL);
    }
}

fn svg_doc(width: i32, height: i32, body: &str) -> Vec<u8> {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
    .into_bytes()
}

fn svg(a: &Alphabet, art: &Art) -> Result<Vec<u8>> {
    let sheets = sheets(art)?;
    let mut body = String::new();
    let mut x = GAP;
    let mut height = GAP;
    for s in &sheets {
        sheet_svg(&mut body, a, s, x, GAP + 14);
        x += s.w * CELL + GAP;
        height = height.max(s.h * CELL + 2 * GAP + 14);
    }
    Ok(svg_doc(x.max(2 * GAP), height, &body))
}

fn ppm(a: &Alphabet, art: &Art) -> Result<Vec<u8>> {
    const PX: i32 = 8;
    let sheets = sheets(art)?;
    let width = sheets.iter().map(|s| s.w * PX + PX).sum::<i32>().max(1);
    let height = sheets.iter().map(|s| s.h * PX).max().unwrap_or(1).max(1);
    let mut img = vec![255u8; (width * height * 3) as usize];
    let mut ox = 0;
    for s in &sheets {
        for row in 0..s.h {
            for col in 0..s.w {
                let colour = match s.get(col, row) {
                    None => [238, 238, 238],
                    Some(sym) => match glyph(a, sym) {
                        (_, true) => hex(CUBE),
                        (Glyph::Blank, _) => [255, 255, 255],
                        (Glyph::Diagonal | Glyph::Dash, _) => hex(GREY),
                        (Glyph::Fill(c) | Glyph::Label(c, _), _) => hex(&c),
                        (Glyph::Lines(l, _), _) => hex(if l.iter().any(|e| e.1 == RED) { RED } else if l.iter().any(|e| e.1 == BLUE) { BLUE } else { "#202020" }),
                    },
                };
                for py in row * PX..(row + 1) * PX {
                    for px in ox + col * PX..ox + (col + 1) * PX {
                        let i = ((py * width + px) * 3) as usize;
                        img[i..i + 3].copy_from_slice(&colour);
                    }
                }
            }
        }
        ox += s.w * PX + PX;
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend(img);
    Ok(out)
}

/// Grey level for a height between `lo` and `hi`.
fn shade(v: i32, lo: i32, hi: i32) -> String {
    let t = if hi > lo { (v - lo) as f64 / (hi - lo) as f64 } else { 0.5 };
    let g = (220.0 - 140.0 * t).round() as u8;
    format!("#{g:02x}{g:02x}{g:02x}")
}

/// Four views of a Good Wave torus: the wave's height map with its crest,
/// the tile planes at the wave's lowest and highest levels, and the x-z
/// section at y = 0.
fn panels(a: &Alphabet, t: &TorusConfig) -> Result<Vec<u8>> {
    if t.dim() != 3 {
        return Err(Error::UnsupportedDimension(t.dim()));
    }
    let p = t.periods();
    let (w, d, hz) = (p[0] as i32, p[1] as i32, p[2] as i32);
    let wave: Option<WaveFunction> = match extract_waves(t)? {
        Waves::Found(ws) => ws.into_iter().next(),
        Waves::NoCubes => None,
    };
    let mut body = String::new();
    let top = GAP + 14;
    let mut x = GAP;

    // Height map.
    let _ = writeln!(body, r#"<text x="{x}" y="{}" font-size="11" font-family="sans-serif">height</text>"#, top - 4);
    for row in 0..d {
        for col in 0..w {
            let y = d - 1 - row;
            let (fill, crest) = match &wave {
                Some(wv) => {
                    let (lo, hi) = (*wv.heights.iter().min().unwrap(), *wv.heights.iter().max().unwrap());
                    let h = wv.phi(col, y) - wv.base;
                    (shade(h, lo, hi), h == hi)
                }
                None => ("#ffffff".to_string(), false),
            };
            let (x0, y0) = (x + col * CELL, top + row * CELL);
            let _ = writeln!(body, r##"<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="{fill}" stroke="#bbbbbb"/>"##);
            if crest {
                let _ = writeln!(
                    body,
                    r#"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="{CREST}" stroke-width="2"/>"#,
                    x0 + 1,
                    y0 + 1,
                    CELL - 2,
                    CELL - 2
                );
            }
        }
    }
    x += w * CELL + GAP;

    // Tile planes at the lowest and highest level of the wave.
    let (base, crest_level) = match &wave {
        Some(wv) => (wv.base, wv.base + wv.heights.iter().max().copied().unwrap_or(0)),
        None => (0, 0),
    };
    let all = sheets(&Art::Torus(t))?;
    for (name, z) in [("base", base), ("crest", crest_level)] {
        let mut s = all[z.rem_euclid(hz) as usize].clone();
        s.title = format!("{name} z = {}", z.rem_euclid(hz));
        sheet_svg(&mut body, a, &s, x, top);
        x += w * CELL + GAP;
    }

    // Section at y = 0: columns x, rows z (top is the highest level).
    let _ = writeln!(body, r#"<text x="{x}" y="{}" font-size="11" font-family="sans-serif">section y = 0</text>"#, top - 4);
    for row in 0..hz {
        let z = hz - 1 - row;
        for col in 0..w {
            let s = t.get(&Coord::new(&[col, 0, z]));
            let (x0, y0) = (x + col * CELL, top + row * CELL);
            let _ = writeln!(body, r##"<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="white" stroke="#dddddd"/>"##);
            cell_svg(&mut body, a, s, x0, y0);
        }
    }
    x += w * CELL + GAP;
    let height = top + d.max(hz) * CELL + GAP;
    Ok(svg_doc(x, height, &body))
}

/// Renders `art` over `alphabet`. `Panels` needs a three-dimensional
/// torus.
pub fn render(alphabet: &Alphabet, art: &Art, style: Style) -> Result<Vec<u8>> {
    match (style, art) {
        (Style::Svg, _) => svg(alphabet, art),
        (Style::Ppm, _) => ppm(alphabet, art),
        (Style::Panels, Art::Torus(t)) => panels(alphabet, t),
        (Style::Panels, Art::Pattern(p)) => Err(Error::InvalidInput(format!(
            "panel view needs a three-dimensional torus, got a {}-dimensional pattern",
            p.dim()
        ))),
    }
}
