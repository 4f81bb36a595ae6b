//! Every wave is a good wave, checked on every torus of a given size.

use super::waves::{busy_levels, extract_waves, red_wire_at_base, Waves};
use super::{Artifact, ClaimReport, Verdict};
use crate::alphabet::SymbolSet;
use crate::error::{Error, Result};
use crate::lattice::Coord;
use crate::pattern::TorusConfig;
use crate::solver::{complete_torus_pinned, for_each_torus, Outcome, SearchBudget, Shift};
use crate::zoo::{self, gw_parts};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GoodWaveParams {
    /// Stop after this many tori; the report is then not exhaustive.
    pub max_tori: u64,
    /// Also search for tori with non-white tiles on consecutive levels.
    pub refute_consecutive: bool,
}

impl Default for GoodWaveParams {
    fn default() -> Self {
        GoodWaveParams { max_tori: 1_000_000, refute_consecutive: true }
    }
}

/// What is wrong with one torus, if anything.
fn torus_defect(t: &TorusConfig, shift: &Shift) -> Option<String> {
    let alphabet = shift.spec().alphabet();
    let p = t.periods();
    let waves = match extract_waves(t) {
        Ok(Waves::NoCubes) => Vec::new(),
        Ok(Waves::Found(w)) => w,
        Err(e) => return Some(e.to_string()),
    };
    let cubes = t.data().iter().filter(|&&s| gw_parts(s).cube).count();
    if cubes != waves.len() * (p[0] * p[1]) as usize {
        return Some(format!("{cubes} cubes in {} waves", waves.len()));
    }
    for w in &waves {
        match w.amplitude() {
            None => return Some("winding wave".into()),
            Some(a) if a > 1 => return Some(format!("wave of amplitude {a}")),
            _ => {}
        }
        if !w.is_lipschitz() {
            return Some("wave is not 1-Lipschitz".into());
        }
        if w.is_flat() == red_wire_at_base(t, w, alphabet) {
            return Some(format!("wave at {} breaks the crest/red wire correspondence", w.base));
        }
    }
    let busy = busy_levels(t, alphabet);
    let h = p[2] as i32;
    if let Some(z) = busy.iter().find(|&&z| busy.contains(&(z + 1).rem_euclid(h))) {
        return Some(format!("non-white tiles on levels {z} and {}", z + 1));
    }
    None
}

/// Enumerates the valid tori with the given periods and checks that every
/// wave is good (amplitude at most one, 1-Lipschitz, not winding), that
/// cubes are partitioned into waves, that no two consecutive levels hold
/// non-white tiles, and that a wave is curved exactly when its lowest level
/// carries a red wire.
pub fn verify_good_wave(periods: &[u32], params: &GoodWaveParams, budget: &SearchBudget) -> Result<ClaimReport> {
    if periods.len() != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: periods.len() });
    }
    let shift = Shift::new(zoo::good_wave())?;
    let mut report = ClaimReport::new("good-wave").param("torus", periods).param("max_tori", params.max_tori);
    let (mut waves, mut curved, mut blank) = (0u64, 0u64, 0u64);
    let mut defects = Vec::new();
    let visited = for_each_torus(&shift, periods, &[], budget, |t| {
        report.tested += 1;
        match torus_defect(&t, &shift) {
            None => report.passed += 1,
            Some(why) => defects.push((why, t.clone())),
        }
        if let Ok(Waves::Found(ws)) = extract_waves(&t) {
            waves += ws.len() as u64;
            curved += ws.iter().filter(|w| !w.is_flat()).count() as u64;
        } else {
            blank += 1;
        }
        report.tested < params.max_tori
    });
    match visited {
        Ok(n) => report.exhaustive = n < params.max_tori,
        Err(Error::BudgetExhausted { .. }) => report.fail(Verdict::BudgetExhausted, None),
        Err(e) => return Err(e),
    }
    for (why, t) in defects {
        report.note(why.clone());
        report.fail(Verdict::Counterexample, Some(Artifact::torus(why, t)));
    }
    report = report.param("waves", waves).param("curved_waves", curved).param("blank_tori", blank);

    if params.refute_consecutive {
        let alphabet = shift.spec().alphabet();
        let busy: SymbolSet = alphabet.select(|s| !s.name.starts_with("white."));
        let mut refuted = 0;
        for dx in 0..periods[0] as i32 {
            for dy in 0..periods[1] as i32 {
                let pins = [(Coord::new(&[0, 0, 0]), busy), (Coord::new(&[dx, dy, 1]), busy)];
                match complete_torus_pinned(&shift, &pins, 3, periods, budget)? {
                    Outcome::Refuted => refuted += 1,
                    Outcome::Found(t) => {
                        report.fail(Verdict::Counterexample, Some(Artifact::torus("consecutive busy levels", t)))
                    }
                    Outcome::BudgetExhausted => report.fail(Verdict::BudgetExhausted, None),
                }
            }
        }
        report = report.param("consecutive_level_offsets_refuted", refuted);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::box_support;
    use crate::pattern::Pattern;

    #[test]
    fn three_level_wave_is_rejected() {
        // Cubes stepping up twice along x: no wires carry the steps.
        let gw = zoo::good_wave();
        let (e, c) = (gw.symbol("white.e").unwrap(), gw.symbol("white.c").unwrap());
        let f = box_support(3, 2);
        let p = Pattern::new(3, f.iter().map(|x| (*x, if x[2] == x[0].clamp(-1, 1) { c } else { e })));
        let v = gw.first_violation(&p).unwrap();
        assert!(v.is_some());
    }

    #[test]
    fn small_tori_are_good() {
        let r = verify_good_wave(&[2, 2, 4], &GoodWaveParams::default(), &SearchBudget::default()).unwrap();
        assert!(r.verified() && r.exhaustive, "{r:?}");
        assert!(r.tested > 1);
    }
}
