//! Waves of Good Wave tori: height functions of cube sheets.

use crate::alphabet::SymbolId;
use crate::error::{Error, Result};
use crate::lattice::Coord;
use crate::pattern::TorusConfig;
use crate::zoo::{gw_parts, tile_info};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;

/// One wave of a torus: a cube in every column, neighbouring columns at
/// most one level apart.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveFunction {
    /// Lateral periods.
    pub periods: [u32; 2],
    /// Lowest level, reduced modulo the vertical period.
    pub base: i32,
    /// `phi(x, y) - base` in row-major `(x, y)` order.
    pub heights: Vec<i32>,
    /// The lifted height function does not close up around the torus, so
    /// the wave on the plane is unbounded.
    pub winding: bool,
}

impl WaveFunction {
    fn at(&self, x: i32, y: i32) -> usize {
        let (a, b) = (self.periods[0] as i32, self.periods[1] as i32);
        (x.rem_euclid(a) * b + y.rem_euclid(b)) as usize
    }

    pub fn phi(&self, x: i32, y: i32) -> i32 {
        self.base + self.heights[self.at(x, y)]
    }

    /// `sup phi - inf phi`, or `None` for winding waves.
    pub fn amplitude(&self) -> Option<i32> {
        if self.winding {
            return None;
        }
        Some(self.heights.iter().max().unwrap() - self.heights.iter().min().unwrap())
    }

    pub fn is_flat(&self) -> bool {
        self.amplitude() == Some(0)
    }

    pub fn is_good(&self) -> bool {
        self.amplitude().is_some_and(|a| a <= 1)
    }

    /// Lateral cells at maximal height.
    pub fn crest(&self) -> Vec<(i32, i32)> {
        let top = self.heights.iter().max().copied().unwrap_or(0);
        let b = self.periods[1] as i32;
        (0..self.heights.len() as i32).filter(|&i| self.heights[i as usize] == top).map(|i| (i / b, i % b)).collect()
    }

    /// Neighbouring columns differ by at most one, which on the plane is
    /// the l1 Lipschitz condition.
    pub fn is_lipschitz(&self) -> bool {
        let (a, b) = (self.periods[0] as i32, self.periods[1] as i32);
        !self.winding
            && (0..a).all(|x| {
                (0..b).all(|y| {
                    let h = self.phi(x, y);
                    (h - self.phi(x + 1, y)).abs() <= 1 && (h - self.phi(x, y + 1)).abs() <= 1
                })
            })
    }
}

/// Result of wave extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Waves {
    NoCubes,
    Found(Vec<WaveFunction>),
}

fn is_cube(s: SymbolId) -> bool {
    gw_parts(s).cube
}

/// Partitions the cubes of a Good Wave torus into waves by lateral
/// propagation: each cube has exactly one cube among the three cells one
/// step sideways and at most one level up or down.
pub fn extract_waves(t: &TorusConfig) -> Result<Waves> {
    if t.dim() != 3 {
        return Err(Error::UnsupportedDimension(t.dim()));
    }
    let p = t.periods();
    let (a, b, h) = (p[0] as i32, p[1] as i32, p[2] as i32);
    let cell = |x: i32, y: i32, z: i32| Coord::new(&[x, y, z]);
    let mut owner = vec![usize::MAX; t.cells()];
    let mut waves = Vec::new();
    for start in t.domain().iter() {
        let idx = t.index(start);
        if !is_cube(t.data()[idx]) || owner[idx] != usize::MAX {
            continue;
        }
        let id = waves.len();
        // unwrapped heights per column
        let mut lift: Vec<Option<i32>> = vec![None; (a * b) as usize];
        let col = |x: i32, y: i32| (x.rem_euclid(a) * b + y.rem_euclid(b)) as usize;
        let mut winding = false;
        lift[col(start[0], start[1])] = Some(start[2]);
        owner[idx] = id;
        let mut queue = VecDeque::from([(start[0], start[1])]);
        while let Some((x, y)) = queue.pop_front() {
            let z = lift[col(x, y)].unwrap();
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                let hits: Vec<i32> = (-1..=1).map(|dz| z + dz).filter(|&w| is_cube(t.get(&cell(nx, ny, w)))).collect();
                let [w] = hits[..] else {
                    return Err(Error::ExtractionFailure(format!(
                        "column ({nx},{ny}) has {} cubes next to ({x},{y},{z})",
                        hits.len()
                    )));
                };
                let c = col(nx, ny);
                match lift[c] {
                    Some(prev) if prev == w => {}
                    Some(prev) if (prev - w).rem_euclid(h) == 0 => winding = true,
                    Some(prev) => {
                        return Err(Error::ExtractionFailure(format!(
                            "column ({nx},{ny}) reached at levels {prev} and {w}"
                        )))
                    }
                    None => {
                        let j = t.index(&cell(nx, ny, w));
                        if owner[j] != usize::MAX && owner[j] != id {
                            return Err(Error::ExtractionFailure(format!("cube ({nx},{ny},{w}) in two waves")));
                        }
                        owner[j] = id;
                        lift[c] = Some(w);
                        queue.push_back((nx, ny));
                    }
                }
            }
        }
        let lift: Vec<i32> = lift.into_iter().map(|v| v.expect("waves cover every column")).collect();
        let lo = *lift.iter().min().unwrap();
        waves.push(WaveFunction {
            periods: [a as u32, b as u32],
            base: lo.rem_euclid(h),
            heights: lift.iter().map(|v| v - lo).collect(),
            winding,
        });
    }
    Ok(if waves.is_empty() { Waves::NoCubes } else { Waves::Found(waves) })
}

/// Whether the plane at the wave's lowest level carries a wire with a red
/// segment.
pub fn red_wire_at_base(t: &TorusConfig, w: &WaveFunction, alphabet: &crate::alphabet::Alphabet) -> bool {
    let (a, b) = (w.periods[0] as i32, w.periods[1] as i32);
    (0..a).any(|x| {
        (0..b).any(|y| {
            let s = t.get(&Coord::new(&[x, y, w.base]));
            let tile = alphabet.symbol(s);
            matches!(tile_info(tile), Some((_, Some(c))) if c.sw + c.se + c.nw + c.ne > 0)
        })
    })
}

/// Levels holding a non-white tile, in increasing order.
pub fn busy_levels(t: &TorusConfig, alphabet: &crate::alphabet::Alphabet) -> Vec<i32> {
    let p = t.periods();
    let white = alphabet.symbols().iter().position(|s| s.name == "white.e").map(|i| gw_parts(i as SymbolId).tile);
    (0..p[2] as i32)
        .filter(|&z| {
            (0..p[0] as i32).any(|x| (0..p[1] as i32).any(|y| Some(gw_parts(t.get(&Coord::new(&[x, y, z]))).tile) != white))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::good_wave;

    #[test]
    fn flat_and_blank() {
        let gw = good_wave();
        let (e, c) = (gw.symbol("white.e").unwrap(), gw.symbol("white.c").unwrap());
        let flat = TorusConfig::from_fn(vec![3, 3, 5], |x| if x[2] == 2 { c } else { e });
        let Waves::Found(w) = extract_waves(&flat).unwrap() else { panic!() };
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].base, 2);
        assert!(w[0].is_flat() && w[0].is_lipschitz());
        assert_eq!(w[0].crest().len(), 9);
        assert!(!red_wire_at_base(&flat, &w[0], gw.alphabet()));
        assert_eq!(extract_waves(&TorusConfig::constant(vec![3, 3, 5], e)).unwrap(), Waves::NoCubes);
        assert!(busy_levels(&flat, gw.alphabet()).is_empty());
    }

    #[test]
    fn broken_sheet_fails() {
        let gw = good_wave();
        let (e, c) = (gw.symbol("white.e").unwrap(), gw.symbol("white.c").unwrap());
        let hole = TorusConfig::from_fn(vec![3, 3, 5], |x| if x[2] == 0 && (x[0], x[1]) != (1, 1) { c } else { e });
        assert!(matches!(extract_waves(&hole), Err(Error::ExtractionFailure(_))));
    }
}
