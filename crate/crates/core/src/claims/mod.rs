//! Finite-scale checks of the example shifts' structural claims, with
//! constructive witnesses for the chain arguments.
//!
//! Every check runs on tori (or on windows that close up into tori), so a
//! positive answer is a genuine point of the shift.

mod bluesky;
mod density;
mod goodwave;
mod pasting;
mod waves;
mod wormchain;

pub use bluesky::{verify_blue_sky, BlueSkyParams};
pub use density::{sample_language, verify_periodic_density, Coverage, DensityParams};
pub use goodwave::{verify_good_wave, GoodWaveParams};
pub use pasting::{paste, torus_pool, verify_pasting, verify_weak_mixing_gluing, Pasted};
pub use waves::{busy_levels, extract_waves, red_wire_at_base, WaveFunction, Waves};
pub use wormchain::{straight_worm, worm_chain, worm_view};

use crate::pattern::{Pattern, TorusConfig};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Counterexample,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Artifact {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Pattern>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torus: Option<TorusConfig>,
}

impl Artifact {
    pub fn pattern(label: impl Into<String>, p: Pattern) -> Self {
        Artifact { label: label.into(), pattern: Some(p), torus: None }
    }

    pub fn torus(label: impl Into<String>, t: TorusConfig) -> Self {
        Artifact { label: label.into(), pattern: None, torus: Some(t) }
    }
}

/// Outcome of one claim check. Contains no timings, so identical inputs
/// give byte-identical JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub claim: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub verdict: Verdict,
    pub tested: u64,
    pub passed: u64,
    pub exhaustive: bool,
    pub notes: Vec<String>,
    pub artifacts: Vec<Artifact>,
}

impl ClaimReport {
    pub fn new(claim: &str) -> Self {
        ClaimReport {
            claim: claim.to_string(),
            params: BTreeMap::new(),
            verdict: Verdict::Verified,
            tested: 0,
            passed: 0,
            exhaustive: false,
            notes: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("param serialises"));
        self
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    /// Counterexamples win over exhaustion; artifacts are capped.
    pub fn fail(&mut self, verdict: Verdict, artifact: Option<Artifact>) {
        if verdict == Verdict::Counterexample || self.verdict == Verdict::Verified {
            self.verdict = verdict;
        }
        if let Some(a) = artifact {
            if self.artifacts.len() < 8 {
                self.artifacts.push(a);
            }
        }
    }

    pub fn verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}
