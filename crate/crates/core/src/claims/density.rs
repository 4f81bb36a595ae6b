//! Strongly periodic points are dense: every pattern on a box completes to
//! a torus.

use super::{Artifact, ClaimReport, Verdict};
use crate::error::{Error, Result};
use crate::lattice::{box_support, Support};
use crate::pattern::Pattern;
use crate::solver::{complete_torus, enumerate_language, extend, Outcome, SearchBudget, Shift};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How the tested patterns were chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "coverage", rename_all = "kebab-case")]
pub enum Coverage {
    /// The whole m-extendable language.
    Exhaustive { patterns: usize },
    /// Distinct patterns read off seeded random extensions.
    Sampled { patterns: usize, draws: usize },
}

/// Up to `count` distinct patterns on `f`, each the restriction of a
/// locally valid pattern on `f` dilated by `m`. Draw `i` uses seed
/// `seed + i`; at most `20 * count` draws are made. Sorted.
pub fn sample_language(
    shift: &Shift,
    f: &Support,
    m: u32,
    count: usize,
    seed: u64,
    budget: &SearchBudget,
) -> Result<(Vec<Pattern>, usize)> {
    let target = f.dilate(m);
    let empty = Pattern::new(f.dim(), []);
    let mut seen = BTreeMap::new();
    let mut draws = 0;
    while seen.len() < count && draws < 20 * count.max(1) {
        let b = budget.clone().with_seed(seed.wrapping_add(draws as u64).max(1));
        draws += 1;
        match extend(shift, &empty, &target, &b)? {
            Outcome::Found(e) => {
                let p = e.restrict(f).expect("f inside its dilation");
                seen.insert(p.symbols().to_vec(), p);
            }
            Outcome::Refuted => return Ok((Vec::new(), draws)),
            Outcome::BudgetExhausted => {}
        }
    }
    Ok((seen.into_iter().map(|e| e.1).collect(), draws))
}

/// Options for [`verify_periodic_density`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DensityParams {
    /// Torus periods; defaults to `8n+1` on every axis.
    pub periods: Option<Vec<u32>>,
    /// Margin for the tested language.
    pub margin: u32,
    /// Above this many patterns, sample instead of enumerating.
    pub exhaustive_cap: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for DensityParams {
    fn default() -> Self {
        DensityParams { periods: None, margin: 2, exhaustive_cap: 100_000, samples: 50, seed: 1 }
    }
}

/// Completes every tested pattern on `box(d, n)` to a torus. A pattern
/// with no completion at the given periods is a counterexample.
pub fn verify_periodic_density(
    shift: &Shift,
    n: u32,
    params: &DensityParams,
    budget: &SearchBudget,
) -> Result<ClaimReport> {
    let d = shift.dimension();
    let periods = params.periods.clone().unwrap_or_else(|| vec![8 * n + 1; d]);
    if periods.len() != d || periods.iter().any(|&p| p < 2 * n + 1) {
        return Err(Error::InvalidInput(format!("periods {periods:?} cannot hold box({n})")));
    }
    let f = box_support(d, n);
    let lang = enumerate_language(shift, &f, params.margin, budget, params.exhaustive_cap);
    let (patterns, coverage) = match lang {
        Ok(l) if !l.truncated => {
            let k = l.patterns.len();
            (l.patterns, Coverage::Exhaustive { patterns: k })
        }
        Ok(_) | Err(Error::BudgetExhausted { .. }) => {
            let (ps, draws) = sample_language(shift, &f, params.margin, params.samples, params.seed, budget)?;
            let k = ps.len();
            (ps, Coverage::Sampled { patterns: k, draws })
        }
        Err(e) => return Err(e),
    };
    let mut report = ClaimReport::new("periodic-density")
        .param("shift", shift.name())
        .param("n", n)
        .param("periods", &periods)
        .param("margin", params.margin)
        .param("seed", params.seed)
        .param("coverage", coverage);
    report.exhaustive = matches!(coverage, Coverage::Exhaustive { .. });
    let results = crate::par::map(patterns, |p| {
        let out = complete_torus(shift, &p, &periods, budget);
        (p, out)
    });
    // A pattern without completion that does not even extend by a wider
    // margin is outside the language, not a counterexample.
    let wider = f.dilate(params.margin + 2);
    let mut outside = 0;
    for (p, out) in results {
        report.tested += 1;
        match out? {
            Outcome::Found(_) => report.passed += 1,
            Outcome::Refuted => match extend(shift, &p, &wider, budget)? {
                Outcome::Refuted => {
                    report.tested -= 1;
                    outside += 1;
                }
                _ => report.fail(Verdict::Counterexample, Some(Artifact::pattern("no completion", p))),
            },
            Outcome::BudgetExhausted => report.fail(Verdict::BudgetExhausted, Some(Artifact::pattern("undecided", p))),
        }
    }
    if outside > 0 {
        report.note(format!("{outside} patterns do not extend by margin {} and are outside the language", params.margin + 2));
    }
    if report.tested == 0 {
        report.note("no patterns to test");
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn full_shift_always_completes() {
        let s = Shift::new(zoo::full_shift(2, 2).unwrap()).unwrap();
        let r = verify_periodic_density(&s, 1, &DensityParams::default(), &SearchBudget::default()).unwrap();
        assert!(r.verified() && r.exhaustive);
        assert_eq!(r.tested, 512);
    }

    #[test]
    fn short_golden_mean_periods_fail() {
        let s = Shift::new(zoo::golden_mean()).unwrap();
        let params = DensityParams { periods: Some(vec![7]), ..Default::default() };
        let r = verify_periodic_density(&s, 3, &params, &SearchBudget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Counterexample);
        let r = verify_periodic_density(&s, 3, &DensityParams::default(), &SearchBudget::default()).unwrap();
        assert!(r.verified());
    }

    #[test]
    fn samples_are_distinct_and_valid() {
        let s = Shift::new(zoo::hard_squares()).unwrap();
        let f = box_support(2, 1);
        let (ps, _) = sample_language(&s, &f, 1, 20, 7, &SearchBudget::default()).unwrap();
        assert_eq!(ps.len(), 20);
        assert!(ps.windows(2).all(|w| w[0].symbols() < w[1].symbols()));
        assert!(ps.iter().all(|p| s.validate(p).unwrap()));
    }
}
