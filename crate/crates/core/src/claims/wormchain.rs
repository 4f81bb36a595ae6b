//! Moving a straight worm one column at a time.
//!
//! A straight worm at column `n` is one full line in column `n`. The
//! configuration `e(m)` agrees with it for `|y| > m` and jogs to column
//! `n + 1` (or `n - 1`) in between, so it is asymptotic to the straight worm
//! and looks like the moved worm on any window of height below `2m + 1`.
//! Each step is realized on a torus pair tall and wide enough that every
//! rule window meets one copy of the differing box at most.

use crate::asymptotics::{rule_spans, ShiftView, Witness};
use crate::error::{Error, Result};
use crate::lattice::{box_support, Coord};
use crate::pattern::{Pattern, TorusConfig};
use crate::solver::Shift;
use crate::zoo::{self, WormTile};

/// The Worm Shift as a factor of its precursor.
pub fn worm_view() -> Result<ShiftView> {
    let (spec, code) = zoo::worm_shift();
    ShiftView::factor(Shift::new(spec)?, code)
}

/// Factor-level window `[-w, w]^2` with a straight worm at column `n`.
pub fn straight_worm(n: i32, w: u32) -> Pattern {
    let a = zoo::worm_alphabet();
    let (white, line) = (a.id("white").expect("white"), a.id("line").expect("line"));
    Pattern::new(2, box_support(2, w).iter().map(|c| (*c, if c[0] == n { line } else { white })))
}

fn at(t: &mut TorusConfig, x: i32, y: i32, tile: WormTile) {
    t.set(&Coord::new(&[x, y]), tile as u8);
}

/// Source tori for one step from column `n` to `n + dir`, jogging at `±m`.
fn step_tori(n: i32, dir: i32, m: i32, periods: [u32; 2]) -> (TorusConfig, TorusConfig) {
    use WormTile::*;
    let straight = if dir > 0 { RedLine } else { BlueLine };
    let mut before = TorusConfig::constant(periods.to_vec(), White as u8);
    for y in 0..periods[1] as i32 {
        at(&mut before, n, y, straight);
    }
    let mut after = before.clone();
    let moved = if dir > 0 { BlueLine } else { RedLine };
    for y in -m + 1..m {
        at(&mut after, n, y, White);
        at(&mut after, n + dir, y, moved);
    }
    let (low, high) = if dir > 0 { ([RedDown, BlueUp], [RedUp, BlueDown]) } else { ([BlueDown, RedUp], [BlueUp, RedDown]) };
    at(&mut after, n, -m, low[0]);
    at(&mut after, n + dir, -m, low[1]);
    at(&mut after, n, m, high[0]);
    at(&mut after, n + dir, m, high[1]);
    (before, after)
}

/// Witnesses moving a straight worm from column `a` to column `b` inside
/// the window `[-w, w]^2`, one column per step. Step `i` certifies that the
/// windows with the worm at consecutive columns are exchangeable.
pub fn worm_chain(a: i32, b: i32, w: u32) -> Result<Vec<Witness>> {
    if a.unsigned_abs() > w || b.unsigned_abs() > w {
        return Err(Error::WindowTooSmall(format!("columns {a} and {b} do not fit in [-{w}, {w}]")));
    }
    let view = worm_view()?;
    let spans = rule_spans(view.source());
    let m = w as i32 + 1;
    let dir = (b - a).signum();
    let mut out = Vec::new();
    let mut n = a;
    while n != b {
        let r = (m as u32).max(n.unsigned_abs() + 1).max(w);
        let side = 2 * r + 1;
        let periods = [side + spans[0], side + spans[1]];
        let (before, after) = step_tori(n, dir, m, periods);
        out.push(Witness::torus_pair(&view, before, after, Coord::zero(2), r));
        n += dir;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::check_witness;

    #[test]
    fn chain_steps_validate() {
        let view = worm_view().unwrap();
        for (a, b) in [(0, 1), (0, 3), (2, -2)] {
            let chain = worm_chain(a, b, 3).unwrap();
            assert_eq!(chain.len(), (a - b).unsigned_abs() as usize);
            let dir = (b - a).signum();
            for (i, w) in chain.iter().enumerate() {
                let n = a + dir * i as i32;
                let (p, q) = (straight_worm(n, 3), straight_worm(n + dir, 3));
                assert!(check_witness(&view, w, &p, &q).unwrap(), "step {i} of {a}->{b}");
                assert!(!check_witness(&view, w, &q, &p).unwrap());
            }
        }
    }

    #[test]
    fn trivial_and_too_small() {
        assert!(worm_chain(1, 1, 2).unwrap().is_empty());
        assert!(matches!(worm_chain(0, 3, 2), Err(Error::WindowTooSmall(_))));
    }
}
