//! Check records shared by the verification suites and reports.

use std::fmt::Display;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// One verified claim: what was expected, what was computed, and how long
/// it took.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// Short anchor naming the claim being checked.
    #[serde(rename = "paper_ref")]
    pub anchor: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
    pub ms: u64,
}

impl Check {
    /// Runs `f` and passes when its output renders equal to `expected`.
    pub fn equal(id: &str, anchor: &str, expected: impl Display, f: impl FnOnce() -> Result<String>) -> Result<Check> {
        let expected = expected.to_string();
        let start = Instant::now();
        let actual = f()?;
        Ok(Check {
            id: id.into(),
            anchor: anchor.into(),
            pass: actual == expected,
            expected,
            actual,
            ms: start.elapsed().as_millis() as u64,
        })
    }

    /// Runs `f`, which returns the rendered value and its verdict.
    pub fn judged(
        id: &str,
        anchor: &str,
        expected: impl Display,
        f: impl FnOnce() -> Result<(String, bool)>,
    ) -> Result<Check> {
        let start = Instant::now();
        let (actual, pass) = f()?;
        Ok(Check {
            id: id.into(),
            anchor: anchor.into(),
            expected: expected.to_string(),
            actual,
            pass,
            ms: start.elapsed().as_millis() as u64,
        })
    }
}

/// A suite run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn new(suite: &str, seed: u64, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        Report { suite: suite.into(), seed, checks, pass }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for c in &self.checks {
            out.push_str(&format!(
                "  [{}] {:<32} {:>7} ms  expected {}  got {}\n",
                if c.pass { "pass" } else { "FAIL" },
                c.id,
                c.ms,
                c.expected,
                c.actual
            ));
        }
        out.push_str(if self.pass { "all checks passed\n" } else { "some checks FAILED\n" });
        out
    }
}
