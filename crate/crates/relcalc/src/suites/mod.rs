//! Named verification suites behind a common trait, registered and
//! selected by name.
//!
//! Every suite runs a family of laws over the deterministic corpus and
//! returns plain [`Check`]s; the command line and the acceptance harness
//! both dispatch through [`registry`]/[`find`], so adding a suite is one
//! registration line.

mod bounds;
mod section2;
mod theorems;

use rand_chacha::ChaCha8Rng;

use crate::report::Check;
use crate::subspace::Frame;
use crate::tolerance::TolerancePolicy;
use crate::CVector;

/// Configuration shared by every suite run.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Ambient dimensions the corpus is generated at.
    pub sizes: Vec<usize>,
    pub tol: TolerancePolicy,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            sizes: crate::corpus::DEFAULT_SIZES.to_vec(),
            tol: TolerancePolicy::default(),
        }
    }
}

/// A named family of checks.
pub trait LawSuite: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, cfg: &SuiteConfig) -> Vec<Check>;
}

static SUITES: &[&dyn LawSuite] = &[
    &section2::Lemma21,
    &section2::Lemma22,
    &section2::Lemma24,
    &section2::Lemma25,
    &section2::Lemma26,
    &bounds::Lemma29,
    &bounds::Lemma31,
    &bounds::Lemma32,
    &theorems::Thm31Suite,
    &theorems::Thm32Suite,
    &theorems::Corollaries,
];

/// All registered suites in registry order.
pub fn registry() -> &'static [&'static dyn LawSuite] {
    SUITES
}

/// Look up a suite by name.
pub fn find(name: &str) -> Option<&'static dyn LawSuite> {
    SUITES.iter().copied().find(|s| s.name() == name)
}

/// Registered names, for diagnostics and help text.
pub fn suite_names() -> Vec<&'static str> {
    SUITES.iter().map(|s| s.name()).collect()
}

/// Aggregates many instances of one law into a single check.
pub(crate) struct LawTally {
    name: &'static str,
    anchor: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl LawTally {
    pub fn new(name: &'static str, anchor: &'static str) -> Self {
        Self {
            name,
            anchor,
            cases: 0,
            failures: Vec::new(),
        }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    pub fn cases(&self) -> usize {
        self.cases
    }

    pub fn into_check(self) -> Check {
        let name = format!("{} ({} cases)", self.name, self.cases);
        if self.failures.is_empty() {
            Check::pass(name, self.anchor)
        } else {
            let shown = self.failures.len().min(3);
            Check::fail(
                name,
                self.anchor,
                format!(
                    "{} of {} cases failed; first: {}",
                    self.failures.len(),
                    self.cases,
                    self.failures[..shown].join(" | ")
                ),
            )
        }
    }
}

/// Random unit vector inside a frame's span; `None` for the zero subspace.
pub(crate) fn random_in_frame(frame: &Frame, rng: &mut ChaCha8Rng) -> Option<CVector> {
    use rand_distr::{Distribution, StandardNormal};
    if frame.rank() == 0 {
        return None;
    }
    let coords = CVector::from_fn(frame.rank(), |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        crate::C64::new(re, im)
    });
    let v = frame.basis() * coords;
    let n = v.norm();
    if n == 0.0 {
        return None;
    }
    Some(v / crate::C64::new(n, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_contains_every_required_suite() {
        let names = suite_names();
        for required in [
            "lemma21", "lemma22", "lemma29", "lemma31", "lemma32", "thm31", "thm32",
            "corollaries",
        ] {
            assert!(names.contains(&required), "missing suite {required}");
        }
        assert!(find("lemma29").is_some());
        assert!(find("missing").is_none());
    }

    #[test]
    fn every_suite_passes_on_a_small_corpus() {
        let cfg = SuiteConfig {
            seed: 7,
            sizes: vec![1, 2, 3],
            tol: TolerancePolicy::default(),
        };
        for suite in registry() {
            let checks = suite.run(&cfg);
            assert!(!checks.is_empty(), "{} produced no checks", suite.name());
            for check in &checks {
                assert_ne!(
                    check.status,
                    crate::report::CheckStatus::Fail,
                    "{}::{} failed: {:?}",
                    suite.name(),
                    check.name,
                    check.witness
                );
            }
        }
    }
}
