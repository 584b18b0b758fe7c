//! The self-describing report document shared by every command and suite.
//!
//! A report is a list of named checks, each carrying an anchor tag that
//! identifies which law or guarantee it exercises, a pass/fail/skip status,
//! and — on failure — a witness describing the offending instance. Exit
//! statuses are derived from report content and from nothing else.

use serde::{Deserialize, Serialize};

use crate::tolerance::TolerancePolicy;

/// Serialize `Complex64` as a two-element `[re, im]` array.
pub mod complex_pair {
    use crate::C64;
    use serde::de::Deserialize;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &C64, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = ser.serialize_tuple(2)?;
        t.serialize_element(&value.re)?;
        t.serialize_element(&value.im)?;
        t.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(de)?;
        Ok(C64::new(re, im))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Hypotheses did not hold on this instance; no claim is made.
    Skip,
}

/// One verified statement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Which law or guarantee the check exercises (matches suite naming,
    /// e.g. `lemma29`, `thm31`, `cli`).
    pub anchor: String,
    pub status: CheckStatus,
    /// On failure, the concrete instance that broke the check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            status: CheckStatus::Pass,
            witness: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        anchor: impl Into<String>,
        witness: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            status: CheckStatus::Fail,
            witness: Some(witness.into()),
        }
    }

    pub fn skip(
        name: impl Into<String>,
        anchor: impl Into<String>,
        reason: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            status: CheckStatus::Skip,
            witness: Some(reason.into()),
        }
    }

    /// Build from a boolean condition, attaching the witness only on failure.
    pub fn expect(
        name: impl Into<String>,
        anchor: impl Into<String>,
        ok: bool,
        witness: impl Into<String>,
    ) -> Self {
        if ok {
            Self::pass(name, anchor)
        } else {
            Self::fail(name, anchor, witness)
        }
    }
}

/// The report document emitted by every command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub format_version: u32,
    pub command: String,
    pub tolerance: TolerancePolicy,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    /// Command-specific payload (parts, indices, frontier points, traces).
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub data: serde_json::Value,
    /// `pass` exactly when no check failed.
    pub status: CheckStatus,
}

impl Report {
    pub fn new(command: impl Into<String>, tolerance: TolerancePolicy, seed: Option<u64>) -> Self {
        Self {
            tool: "relcalc",
            format_version: 1,
            command: command.into(),
            tolerance,
            seed,
            checks: Vec::new(),
            data: serde_json::Value::Null,
            status: CheckStatus::Pass,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.refresh_status();
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
        self.refresh_status();
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    fn refresh_status(&mut self) {
        self.status = if self.any_failed() {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        };
    }

    /// One human line per check plus a summary line.
    pub fn human_summary(&self) -> String {
        let mut out = String::new();
        for check in &self.checks {
            let tag = match check.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "SKIP",
            };
            out.push_str(&format!("{tag} [{}] {}", check.anchor, check.name));
            if let Some(witness) = &check.witness {
                out.push_str(&format!(" — {witness}"));
            }
            out.push('\n');
        }
        let (passed, failed, skipped) = self.counts();
        out.push_str(&format!(
            "{}: {passed} passed, {failed} failed, {skipped} skipped\n",
            self.command
        ));
        out
    }

    pub fn counts(&self) -> (usize, usize, usize) {
        let mut counts = (0, 0, 0);
        for c in &self.checks {
            match c.status {
                CheckStatus::Pass => counts.0 += 1,
                CheckStatus::Fail => counts.1 += 1,
                CheckStatus::Skip => counts.2 += 1,
            }
        }
        counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_checks() {
        let mut r = Report::new("verify", TolerancePolicy::default(), Some(1));
        r.push(Check::pass("a", "x"));
        assert_eq!(r.status, CheckStatus::Pass);
        r.push(Check::skip("b", "x", "hypothesis off"));
        assert_eq!(r.status, CheckStatus::Pass);
        r.push(Check::fail("c", "x", "witness"));
        assert_eq!(r.status, CheckStatus::Fail);
        assert!(r.any_failed());
    }

    #[test]
    fn complex_pair_round_trip() {
        #[derive(serde::Serialize, serde::Deserialize)]
        struct Holder {
            #[serde(with = "complex_pair")]
            z: crate::C64,
        }
        let h = Holder {
            z: crate::C64::new(1.5, -2.25),
        };
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, "{\"z\":[1.5,-2.25]}");
        let back: Holder = serde_json::from_str(&text).unwrap();
        assert_eq!(back.z, h.z);
    }
}
