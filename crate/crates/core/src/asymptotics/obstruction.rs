//! Structural certificates of non-exchangeability.
//!
//! Worm column: a non-white cell at `(x, y)` of one pattern lies on a worm
//! inside two adjacent columns of `x-1..x+1`. An asymptotic partner carries
//! the same worm far away, so its worm crosses every row inside the same
//! columns. A row of the other pattern that is white on `x-2..x+2` rules
//! the partner out.
//!
//! Wave presence: a cube at `w` lies on a good wave, which has amplitude at
//! most one. The partner's wave agrees far away, so it meets the column
//! `w + (0, 0, [-2, 2])`. A cube-free column there rules the partner out.

use super::view::ShiftView;
use crate::error::{Error, Result};
use crate::lattice::Coord;
use crate::pattern::Pattern;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionKind {
    WormColumn,
    WavePresence,
    ExhaustiveRefutation,
}

impl ObstructionKind {
    pub fn name(self) -> &'static str {
        match self {
            ObstructionKind::WormColumn => "worm-column",
            ObstructionKind::WavePresence => "wave-presence",
            ObstructionKind::ExhaustiveRefutation => "exhaustive-refutation",
        }
    }
}

/// Which pattern of the pair holds the structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Obstruction {
    WormColumn {
        holder: Side,
        /// Non-white cell of the holder.
        cell: Coord,
        /// Row of the other pattern that is white across the band.
        row: i32,
        band: (i32, i32),
        /// Non-white cells of the holder.
        nonwhite: usize,
    },
    WavePresence {
        holder: Side,
        cell: Coord,
        /// Third-coordinate range of the cube-free column of the other pattern.
        column: (i32, i32),
    },
    /// No witness at the stated window; not a proof of non-exchangeability.
    ExhaustiveRefutation { radius: u32, margin: u32, mode: super::WitnessMode },
}

impl Obstruction {
    pub fn kind(&self) -> ObstructionKind {
        match self {
            Obstruction::WormColumn { .. } => ObstructionKind::WormColumn,
            Obstruction::WavePresence { .. } => ObstructionKind::WavePresence,
            Obstruction::ExhaustiveRefutation { .. } => ObstructionKind::ExhaustiveRefutation,
        }
    }

    /// The same certificate for the pair in the other order.
    pub fn swapped(mut self) -> Self {
        if let Obstruction::WormColumn { holder, .. } | Obstruction::WavePresence { holder, .. } = &mut self {
            *holder = match holder {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            };
        }
        self
    }
}

/// Structural obstructions available per source shift name.
#[derive(Clone, Debug)]
pub struct ObstructionRegistry {
    entries: Vec<(String, ObstructionKind)>,
}

impl Default for ObstructionRegistry {
    fn default() -> Self {
        ObstructionRegistry {
            entries: vec![
                ("worm_precursor".into(), ObstructionKind::WormColumn),
                ("good_wave".into(), ObstructionKind::WavePresence),
            ],
        }
    }
}

impl ObstructionRegistry {
    pub fn empty() -> Self {
        ObstructionRegistry { entries: Vec::new() }
    }

    pub fn with(mut self, shift_name: &str, kind: ObstructionKind) -> Self {
        self.entries.push((shift_name.to_string(), kind));
        self
    }

    pub fn kinds(&self, view: &ShiftView) -> Vec<ObstructionKind> {
        let name = view.source().name();
        self.entries.iter().filter(|(n, _)| n == name).map(|e| e.1).collect()
    }

    /// First certificate of a registered kind for the pair, in canonical order.
    pub fn find(&self, view: &ShiftView, p: &Pattern, q: &Pattern) -> Option<Obstruction> {
        self.kinds(view).into_iter().find_map(|k| match k {
            ObstructionKind::WormColumn => find_worm(view, p, q),
            ObstructionKind::WavePresence => find_wave(view, p, q),
            ObstructionKind::ExhaustiveRefutation => None,
        })
    }
}

fn sides<'a>(p: &'a Pattern, q: &'a Pattern, holder: Side) -> (&'a Pattern, &'a Pattern) {
    match holder {
        Side::Left => (p, q),
        Side::Right => (q, p),
    }
}

fn find_worm(view: &ShiftView, p: &Pattern, q: &Pattern) -> Option<Obstruction> {
    let white = view.white()?;
    if view.dimension() != 2 {
        return None;
    }
    for holder in [Side::Left, Side::Right] {
        let (a, b) = sides(p, q, holder);
        let nonwhite = a.iter().filter(|e| e.1 != white).count();
        let rows: std::collections::BTreeSet<i32> = b.support().iter().map(|c| c[1]).collect();
        for (cell, s) in a.iter() {
            if s == white {
                continue;
            }
            let band = (cell[0] - 2, cell[0] + 2);
            for &row in &rows {
                if (band.0..=band.1).all(|x| b.get(&Coord::new(&[x, row])) == Some(white)) {
                    return Some(Obstruction::WormColumn { holder, cell, row, band, nonwhite });
                }
            }
        }
    }
    None
}

fn find_wave(view: &ShiftView, p: &Pattern, q: &Pattern) -> Option<Obstruction> {
    let cubes = view.cubes();
    if cubes.is_empty() || view.dimension() != 3 {
        return None;
    }
    for holder in [Side::Left, Side::Right] {
        let (a, b) = sides(p, q, holder);
        for (cell, s) in a.iter() {
            if !cubes.contains(s) {
                continue;
            }
            let column = (cell[2] - 2, cell[2] + 2);
            let free = (column.0..=column.1)
                .all(|z| b.get(&cell.with(2, z)).is_some_and(|t| !cubes.contains(t)));
            if free {
                return Some(Obstruction::WavePresence { holder, cell, column });
            }
        }
    }
    None
}

/// Replays a certificate against the pair, independently of how it was found.
pub fn check_obstruction(
    registry: &ObstructionRegistry,
    view: &ShiftView,
    obstruction: &Obstruction,
    p: &Pattern,
    q: &Pattern,
) -> Result<bool> {
    let kind = obstruction.kind();
    if !registry.kinds(view).contains(&kind) {
        return Err(Error::UnknownObstructionKind(kind.name().to_string()));
    }
    if p.support() != q.support() {
        return Ok(false);
    }
    Ok(match obstruction {
        Obstruction::WormColumn { holder, cell, row, band, nonwhite } => {
            let Some(white) = view.white() else { return Ok(false) };
            let (a, b) = sides(p, q, *holder);
            let holds = a.get(cell).is_some_and(|s| s != white);
            let count = a.iter().filter(|e| e.1 != white).count() == *nonwhite;
            let wide = band.0 <= cell[0] - 2 && band.1 >= cell[0] + 2;
            let blank = (band.0..=band.1).all(|x| b.get(&Coord::new(&[x, *row])) == Some(white));
            holds && count && wide && blank
        }
        Obstruction::WavePresence { holder, cell, column } => {
            let cubes = view.cubes();
            let (a, b) = sides(p, q, *holder);
            let holds = a.get(cell).is_some_and(|s| cubes.contains(s));
            let tall = column.0 <= cell[2] - 2 && column.1 >= cell[2] + 2;
            let free =
                (column.0..=column.1).all(|z| b.get(&cell.with(2, z)).is_some_and(|t| !cubes.contains(t)));
            holds && tall && free
        }
        Obstruction::ExhaustiveRefutation { .. } => false,
    })
}
