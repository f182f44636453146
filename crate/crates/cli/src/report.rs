//! Run reports and their text rendering.

use std::fmt::Write as _;
use std::time::Duration;

use matpi::identity::{IdentitySpace, MinDegreeReport};
use matpi::lemmas::LemmaCheck;
use matpi::{ClassificationVerdict, IdentityReport, Matrix, RingSpec};
use serde::{Deserialize, Serialize};

pub const ARTIFACT_VERSION: &str = concat!("matpi-cli ", env!("CARGO_PKG_VERSION"));

/// Output of one subcommand.
///
/// Apart from `wall_time_us`, which is only filled in on request, the
/// structured form depends only on the inputs and the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    /// Canonical echo of the command and its effective parameters.
    pub command: String,
    /// SHA-256 of the spec file, or of `command` when there is none.
    pub input_digest: String,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    /// True when every check came out as expected.
    pub consistent: bool,
    pub artifact_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_us: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// What the check expects, or "none" when it only records a result.
    pub expectation: String,
    pub passed: bool,
    pub summary: String,
    pub result: CheckResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckResult {
    Identity(IdentityReport),
    Classification {
        verdict: ClassificationVerdict,
        cross_check: IdentityReport,
    },
    MinDegree(MinDegreeReport),
    IdentitySpace(IdentitySpace),
    Lemma(LemmaCheck),
    Value {
        value: Matrix,
        expected: Matrix,
    },
    Bench {
        rows: Vec<BenchRow>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub evaluator: String,
    pub t: usize,
    pub size: usize,
    pub field: RingSpec,
    pub evals_per_sec: f64,
}

impl RunReport {
    pub fn new(command: String, input_digest: String, seed: Option<u64>, checks: Vec<Check>) -> Self {
        let consistent = checks.iter().all(|c| c.passed);
        Self {
            command,
            input_digest,
            seed,
            checks,
            consistent,
            artifact_version: ARTIFACT_VERSION.to_string(),
            wall_time_us: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render_text(&self, elapsed: Duration) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.command);
        let _ = writeln!(out, "input sha256 {}", self.input_digest);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed {seed}");
        }
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{mark} {}: {}", c.name, c.summary);
            if let CheckResult::Bench { rows } = &c.result {
                let _ = writeln!(out, "     {:<9} {:>3} {:>5} {:<9} {:>14}", "evaluator", "t", "size", "field", "evals/sec");
                for r in rows {
                    let _ = writeln!(
                        out,
                        "     {:<9} {:>3} {:>5} {:<9} {:>14.1}",
                        r.evaluator,
                        r.t,
                        r.size,
                        r.field.to_string(),
                        r.evals_per_sec
                    );
                }
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            out,
            "{} ({passed}/{} checks as expected)",
            if self.consistent { "consistent" } else { "INCONSISTENT" },
            self.checks.len()
        );
        let _ = writeln!(out, "wall time {:.3}s, {}", elapsed.as_secs_f64(), self.artifact_version);
        out
    }
}
