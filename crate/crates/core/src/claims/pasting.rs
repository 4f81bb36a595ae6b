//! Pasting two Good Wave configurations along a blank seam, and the
//! transitivity of the square that follows from it.
//!
//! The pasted torus stacks `c1` on `[k-2-S, k-3]`, a seam on `[k-2, k+2]`,
//! `c2` on `[k+3, k+2+S]` and a second seam with `c2` below and `c1` above,
//! so its height is `2S + 10`. Seam planes `k-1..k+1` are blank; planes
//! `k-2` and `k+2` are left to the solver, which completes the partial
//! waves. With `S` at least the vertical rule reach, every rule window of
//! the planar paste (`c1` below, `c2` above) occurs in the torus, so a valid
//! torus certifies the planar configuration too.

use super::{Artifact, ClaimReport, Verdict};
use crate::alphabet::SymbolSet;
use crate::error::{Error, Result};
use crate::lattice::Coord;
use crate::pattern::{Pattern, TorusConfig};
use crate::solver::{complete_torus, complete_torus_pinned, for_each_torus, Outcome, SearchBudget, Shift};
use crate::zoo;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pasted {
    pub torus: TorusConfig,
    pub k: i32,
    /// Centre of the second seam.
    pub k2: i32,
    /// Planes copied from the lower input, inclusive.
    pub lower: (i32, i32),
    /// Planes copied from the upper input, inclusive.
    pub upper: (i32, i32),
}

fn gw_shift() -> Result<Shift> {
    Shift::new(zoo::good_wave())
}

fn check_input(shift: &Shift, c: &TorusConfig) -> Result<()> {
    if c.dim() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: c.dim() });
    }
    if !shift.validate_torus(c)? {
        return Err(Error::InvalidInput("input torus is not a valid configuration".into()));
    }
    Ok(())
}

/// Pastes `c1` below and `c2` above the seam at `k`. Blocks are at least
/// `block` planes tall.
pub fn paste(c1: &TorusConfig, c2: &TorusConfig, k: i32, block: u32, budget: &SearchBudget) -> Result<Outcome<Pasted>> {
    let shift = gw_shift()?;
    check_input(&shift, c1)?;
    check_input(&shift, c2)?;
    if c1.periods()[..2] != c2.periods()[..2] {
        return Err(Error::InvalidInput("lateral periods differ".into()));
    }
    let (a, b) = (c1.periods()[0] as i32, c1.periods()[1] as i32);
    let s = block.max(c1.periods()[2]).max(c2.periods()[2]).max(5) as i32;
    let h = 2 * s + 10;
    let k2 = k + 5 + s;
    let blank = SymbolSet::single(shift.spec().symbol("white.e")?);
    let mut pins = Vec::new();
    for z in k - 2 - s..k - 2 - s + h {
        let source = if z <= k - 3 {
            Some(c1)
        } else if (k + 3..=k + 2 + s).contains(&z) {
            Some(c2)
        } else {
            None
        };
        let seam = if z < k2 - 2 { z - k } else { z - k2 };
        for x in 0..a {
            for y in 0..b {
                let at = Coord::new(&[x, y, z.rem_euclid(h)]);
                match source {
                    Some(c) => pins.push((at, SymbolSet::single(c.get(&Coord::new(&[x, y, z]))))),
                    None if seam.abs() <= 1 => pins.push((at, blank)),
                    None => {}
                }
            }
        }
    }
    let out = complete_torus_pinned(&shift, &pins, 3, &[a as u32, b as u32, h as u32], budget)?;
    Ok(out.map(|torus| Pasted { torus, k, k2, lower: (k - 2 - s, k - 3), upper: (k + 3, k + 2 + s) }))
}

fn agrees(t: &TorusConfig, c: &TorusConfig, planes: (i32, i32)) -> bool {
    let p = t.periods();
    (planes.0..=planes.1).all(|z| {
        (0..p[0] as i32).all(|x| (0..p[1] as i32).all(|y| t.get(&Coord::new(&[x, y, z])) == c.get(&Coord::new(&[x, y, z]))))
    })
}

/// Pastes `c1` below and `c2` above the seam at `k` and checks the result:
/// valid, equal to `c1` below `k-2` and to `c2` above `k+2`.
pub fn verify_pasting(c1: &TorusConfig, c2: &TorusConfig, k: i32, budget: &SearchBudget) -> Result<ClaimReport> {
    let mut report = ClaimReport::new("pasting")
        .param("k", k)
        .param("lower_periods", c1.periods())
        .param("upper_periods", c2.periods());
    report.tested = 1;
    report.exhaustive = true;
    match paste(c1, c2, k, 0, budget)? {
        Outcome::Found(p) => {
            let shift = gw_shift()?;
            report = report.param("torus", p.torus.periods());
            if shift.validate_torus(&p.torus)? && agrees(&p.torus, c1, p.lower) && agrees(&p.torus, c2, p.upper) {
                report.passed = 1;
            } else {
                report.fail(Verdict::Counterexample, Some(Artifact::torus("pasted", p.torus)));
            }
        }
        Outcome::Refuted => {
            report.fail(Verdict::Counterexample, Some(Artifact::torus("lower", c1.clone())));
            report.fail(Verdict::Counterexample, Some(Artifact::torus("upper", c2.clone())));
            report.note("no valid seam");
        }
        Outcome::BudgetExhausted => report.fail(Verdict::BudgetExhausted, None),
    }
    Ok(report)
}

/// The first `cap` valid tori with the given periods, in search order.
pub fn torus_pool(shift: &Shift, periods: &[u32], cap: usize, budget: &SearchBudget) -> Result<Vec<TorusConfig>> {
    let mut out = Vec::new();
    for_each_torus(shift, periods, &[], budget, |t| {
        out.push(t);
        out.len() < cap
    })?;
    Ok(out)
}

fn z_range(p: &Pattern) -> Result<(i32, i32)> {
    let (lo, hi) = p.support().bounds().ok_or_else(|| Error::InvalidInput("empty pattern".into()))?;
    Ok((lo[2], hi[2]))
}

fn lateral_width(ps: &[&Pattern]) -> u32 {
    ps.iter()
        .filter_map(|p| p.support().bounds())
        .map(|(lo, hi)| (hi[0] - lo[0]).max(hi[1] - lo[1]) as u32 + 1)
        .max()
        .unwrap_or(1)
}

/// Tori through each pattern sharing one lateral period, trying periods
/// from the smallest that fits upwards.
fn common_tori(shift: &Shift, ps: &[&Pattern], budget: &SearchBudget) -> Result<Option<Vec<TorusConfig>>> {
    let w = lateral_width(ps).max(3);
    'lateral: for a in w..w + 6 {
        let mut out = Vec::new();
        for p in ps {
            let (lo, hi) = z_range(p)?;
            let tall = ((hi - lo + 1) as u32).max(5);
            let mut found = None;
            for h in tall..tall + 6 {
                if let Outcome::Found(t) = complete_torus(shift, p, &[a, a, h], budget)? {
                    found = Some(t);
                    break;
                }
            }
            match found {
                Some(t) => out.push(t),
                None => continue 'lateral,
            }
        }
        return Ok(Some(out));
    }
    Ok(None)
}

/// Builds a pair of valid tori `(x, y)` with `x = p` on F, `y = q` on F,
/// `x = p'` on `u + F'` and `y = q'` on `u + F'` by completing each pattern
/// to a torus and pasting twice. `u` defaults to the vertical translate that
/// puts `u + F'` just above the seam.
pub fn verify_weak_mixing_gluing(
    p: &Pattern,
    q: &Pattern,
    p2: &Pattern,
    q2: &Pattern,
    u: Option<Coord>,
    budget: &SearchBudget,
) -> Result<ClaimReport> {
    let shift = gw_shift()?;
    for x in [p, q, p2, q2] {
        if x.dim() != 3 {
            return Err(Error::DimensionMismatch { expected: 3, got: x.dim() });
        }
        if !shift.validate(x)? {
            return Err(Error::InvalidInput("pattern violates the shift's rules".into()));
        }
    }
    if p.support() != q.support() || p2.support() != q2.support() {
        return Err(Error::InvalidInput("paired patterns need equal supports".into()));
    }
    let (lo, hi) = z_range(p)?;
    let (lo2, hi2) = z_range(p2)?;
    let k = hi + 3;
    let u = match u {
        Some(u) if u.dim() != 3 => return Err(Error::DimensionMismatch { expected: 3, got: u.dim() }),
        Some(u) if lo2 + u[2] <= k + 2 => {
            return Err(Error::Precondition(format!(
                "the translate puts u+F' at height {} but it must lie above {}",
                lo2 + u[2],
                k + 2
            )))
        }
        Some(u) => u,
        None => Coord::new(&[0, 0, k + 3 - lo2]),
    };
    let (p2u, q2u) = (p2.translate(u), q2.translate(u));
    let mut report = ClaimReport::new("weak-mixing-gluing").param("k", k).param("u", u.entries());
    report.tested = 1;
    report.exhaustive = true;
    let Some(tori) = common_tori(&shift, &[p, q, &p2u, &q2u], budget)? else {
        report.fail(Verdict::BudgetExhausted, None);
        report.note("a pattern has no torus completion at the periods tried");
        return Ok(report);
    };
    // Blocks must hold F below the seam and u + F' above it.
    let block = (hi + 1 - lo).max(hi2 + u[2] - k - 2).max(0) as u32;
    let mut layers = Vec::new();
    for (lower, upper) in [(&tori[0], &tori[2]), (&tori[1], &tori[3])] {
        match paste(lower, upper, k, block, budget)? {
            Outcome::Found(x) => layers.push(x.torus),
            Outcome::Refuted => {
                report.fail(Verdict::Counterexample, Some(Artifact::torus("lower", lower.clone())));
                report.fail(Verdict::Counterexample, Some(Artifact::torus("upper", upper.clone())));
                return Ok(report);
            }
            Outcome::BudgetExhausted => {
                report.fail(Verdict::BudgetExhausted, None);
                return Ok(report);
            }
        }
    }
    report = report.param("torus", layers[0].periods());
    let ok = shift.validate_torus(&layers[0])?
        && shift.validate_torus(&layers[1])?
        && layers[0].window(p.support()) == *p
        && layers[1].window(q.support()) == *q
        && layers[0].window(p2u.support()) == p2u
        && layers[1].window(q2u.support()) == q2u;
    if ok {
        report.passed = 1;
        report.artifacts.push(Artifact::torus("x", layers[0].clone()));
        report.artifacts.push(Artifact::torus("y", layers[1].clone()));
    } else {
        report.fail(Verdict::Counterexample, Some(Artifact::torus("x", layers[0].clone())));
        report.fail(Verdict::Counterexample, Some(Artifact::torus("y", layers[1].clone())));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::box_support;

    fn flat(level: i32) -> TorusConfig {
        let gw = zoo::good_wave();
        let (e, c) = (gw.symbol("white.e").unwrap(), gw.symbol("white.c").unwrap());
        TorusConfig::from_fn(vec![3, 3, 5], |x| if x[2] == level.rem_euclid(5) { c } else { e })
    }

    #[test]
    fn flat_waves_paste() {
        let r = verify_pasting(&flat(-5), &flat(5), 0, &SearchBudget::default()).unwrap();
        assert!(r.verified(), "{r:?}");
        let r = verify_pasting(&flat(1), &flat(1), 0, &SearchBudget::default()).unwrap();
        assert!(r.verified());
    }

    #[test]
    fn blank_quadruple_glues() {
        let gw = zoo::good_wave();
        let e = gw.symbol("white.e").unwrap();
        let p = Pattern::constant(&box_support(3, 1), e);
        let r = verify_weak_mixing_gluing(&p, &p, &p, &p, None, &SearchBudget::default()).unwrap();
        assert!(r.verified(), "{r:?}");
        let bad = Some(Coord::new(&[0, 0, 2]));
        assert!(matches!(
            verify_weak_mixing_gluing(&p, &p, &p, &p, bad, &SearchBudget::default()),
            Err(Error::Precondition(_))
        ));
    }
}
