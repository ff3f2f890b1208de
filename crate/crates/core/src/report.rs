//! Machine-readable verification results.
//!
//! A suite produces a list of [`CheckResult`]s. Field names are stable and
//! versioned by [`SCHEMA_VERSION`]; see `docs/report-schema.md`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Version of the report layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Outcome of a single check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    HypothesisNotMet,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::HypothesisNotMet => "hypothesis-not-met",
        }
    }
}

/// One verified statement about one subject (a sample, a scenario, or a
/// scenario at a prime).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    /// Stable check identifier such as `psi.kernel`.
    pub check: String,
    /// What was checked, such as `sample-3` or `scenario-1@(x)`.
    pub subject: String,
    pub verdict: Verdict,
    /// For failures: a concrete element or module that violates the
    /// statement. For unmet hypotheses: the failing hypothesis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Ideals computed along the way, by name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideals: Option<BTreeMap<String, String>>,
    /// Further key/value observations (resample counts, lengths, ranks).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, String>,
    /// Wall-clock timings in milliseconds, filled in by drivers that can
    /// measure time. Excluded from the verdict section.
    #[serde(default)]
    pub timings: BTreeMap<String, f64>,
}

impl CheckResult {
    pub fn new(check: &str, subject: &str, verdict: Verdict) -> Self {
        CheckResult {
            check: check.to_string(),
            subject: subject.to_string(),
            verdict,
            witness: None,
            ideals: None,
            details: BTreeMap::new(),
            timings: BTreeMap::new(),
        }
    }

    pub fn pass(check: &str, subject: &str) -> Self {
        Self::new(check, subject, Verdict::Pass)
    }

    /// Pass if `ok`, otherwise fail with the given witness.
    pub fn from_bool(check: &str, subject: &str, ok: bool, witness: impl FnOnce() -> String) -> Self {
        let mut c = Self::new(check, subject, Verdict::from_bool(ok));
        if !ok {
            c.witness = Some(witness());
        }
        c
    }

    pub fn fail(check: &str, subject: &str, witness: String) -> Self {
        let mut c = Self::new(check, subject, Verdict::Fail);
        c.witness = Some(witness);
        c
    }

    pub fn not_met(check: &str, subject: &str, hypothesis: String) -> Self {
        let mut c = Self::new(check, subject, Verdict::HypothesisNotMet);
        c.witness = Some(hypothesis);
        c
    }

    pub fn with_ideal(mut self, name: &str, value: String) -> Self {
        self.ideals.get_or_insert_with(BTreeMap::new).insert(name.to_string(), value);
        self
    }

    pub fn with_detail(mut self, key: &str, value: String) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    /// The fields that must be reproducible: everything except timings.
    pub fn verdict_part(&self) -> CheckResult {
        CheckResult { timings: BTreeMap::new(), ..self.clone() }
    }
}

/// Counts of verdicts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub hypothesis_not_met: usize,
}

impl Summary {
    pub fn of(checks: &[CheckResult]) -> Self {
        let mut s = Summary::default();
        for c in checks {
            match c.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::HypothesisNotMet => s.hypothesis_not_met += 1,
            }
        }
        s
    }

    pub fn all_ok(&self) -> bool {
        self.fail == 0
    }
}

/// Checks with a given identifier prefix.
pub fn select<'a>(checks: &'a [CheckResult], prefix: &'a str) -> impl Iterator<Item = &'a CheckResult> + 'a {
    checks.iter().filter(move |c| c.check.starts_with(prefix))
}

/// Sets the same timing entry on every check of a batch.
pub fn stamp_timing(checks: &mut [CheckResult], key: &str, ms: f64) {
    for c in checks {
        c.timings.insert(key.to_string(), ms);
    }
}

/// Collects checks from several batches in order.
pub fn concat(batches: Vec<Vec<CheckResult>>) -> Vec<CheckResult> {
    batches.into_iter().flatten().collect()
}
