//! Structured run reports.
//!
//! Every subcommand that performs checks emits a report with a stable,
//! deterministic shape: checks are sorted by name, optional fields are
//! omitted when absent, and wall-clock timings only appear when explicitly
//! requested so that repeated runs on the same input are byte-identical.

use serde::Serialize;

/// Outcome of one named check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// One check inside a report.  Failures always carry a counterexample;
/// bounded searches that come back empty carry the bound that was tried.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
}

impl CheckResult {
    pub fn pass(name: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Pass,
            detail: None,
            counterexample: None,
            bound: None,
            millis: None,
        }
    }

    pub fn fail(name: impl Into<String>, counterexample: serde_json::Value) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Fail,
            detail: None,
            counterexample: Some(counterexample),
            bound: None,
            millis: None,
        }
    }

    pub fn inconclusive(name: impl Into<String>, bound: u32) -> Self {
        CheckResult {
            name: name.into(),
            status: Status::Inconclusive,
            detail: None,
            counterexample: None,
            bound: Some(bound),
            millis: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// A full run report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub seed: u64,
    pub maxdeg: u32,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    /// Computed artifacts (matrices, witnesses, dimension counts), keyed by
    /// name in sorted order.
    #[serde(skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub witnesses: std::collections::BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    /// Total wall-clock time; only present when explicitly requested so
    /// that repeated runs stay byte-identical.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_millis: Option<u128>,
}

impl Report {
    /// Assembles a report: sorts checks by name and aggregates the overall
    /// status.  `strict` promotes inconclusive bounded searches to failures.
    pub fn new(
        command: impl Into<String>,
        inputs_digest: impl Into<String>,
        seed: u64,
        maxdeg: u32,
        mut checks: Vec<CheckResult>,
        notes: Vec<String>,
        strict: bool,
        timings: bool,
    ) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        if !timings {
            for c in &mut checks {
                c.millis = None;
            }
        }
        let mut status = Status::Pass;
        for c in &checks {
            match c.status {
                Status::Fail => status = Status::Fail,
                Status::Inconclusive if strict && status != Status::Fail => {
                    status = Status::Fail
                }
                _ => {}
            }
        }
        Report {
            command: command.into(),
            inputs_digest: inputs_digest.into(),
            seed,
            maxdeg,
            status,
            checks,
            witnesses: std::collections::BTreeMap::new(),
            notes,
            total_millis: None,
        }
    }

    pub fn with_witness(
        mut self,
        name: impl Into<String>,
        value: serde_json::Value,
    ) -> Self {
        self.witnesses.insert(name.into(), value);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Human-readable rendering: one line per check plus an overall verdict.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("inputs:  {}\n", self.inputs_digest));
        out.push_str(&format!("seed:    {}\n", self.seed));
        out.push_str(&format!("maxdeg:  {}\n", self.maxdeg));
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "INCONCLUSIVE",
            };
            out.push_str(&format!("  [{tag}] {}", c.name));
            if let Some(d) = &c.detail {
                out.push_str(&format!(" — {d}"));
            }
            if let Some(b) = c.bound {
                out.push_str(&format!(" (bound {b})"));
            }
            if let Some(ms) = c.millis {
                out.push_str(&format!(" ({ms} ms)"));
            }
            out.push('\n');
            if let Some(ce) = &c.counterexample {
                out.push_str(&format!("         counterexample: {ce}\n"));
            }
        }
        for (name, value) in &self.witnesses {
            out.push_str(&format!(
                "{name}: {}\n",
                serde_json::to_string(value).expect("witness serializes")
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        if let Some(ms) = self.total_millis {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
        let verdict = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
        };
        out.push_str(&format!("overall: {verdict}\n"));
        out
    }

    /// Process exit code for this report: 0 on pass, 1 on failure, 3 when
    /// the only blemish is a bounded search that came back inconclusive and
    /// strict mode is on.
    pub fn exit_code(&self, strict: bool) -> i32 {
        match self.status {
            Status::Pass | Status::Inconclusive => 0,
            Status::Fail => {
                if strict
                    && self.checks.iter().all(|c| c.status != Status::Fail)
                {
                    3
                } else {
                    1
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(strict: bool) -> Report {
        Report::new(
            "verify",
            "sha256:0",
            0,
            8,
            vec![
                CheckResult::pass("b_second"),
                CheckResult::inconclusive("a_first", 8),
            ],
            vec![],
            strict,
            false,
        )
    }

    #[test]
    fn checks_are_sorted_by_name() {
        let r = sample(false);
        assert_eq!(r.checks[0].name, "a_first");
        assert_eq!(r.checks[1].name, "b_second");
    }

    #[test]
    fn inconclusive_counts_as_pass_unless_strict() {
        assert_eq!(sample(false).status, Status::Pass);
        assert_eq!(sample(false).exit_code(false), 0);
        assert_eq!(sample(true).status, Status::Fail);
        assert_eq!(sample(true).exit_code(true), 3);
    }

    #[test]
    fn real_failures_dominate_strict_inconclusive() {
        let r = Report::new(
            "verify",
            "sha256:0",
            0,
            8,
            vec![
                CheckResult::inconclusive("a", 8),
                CheckResult::fail("b", serde_json::json!({"x": 1})),
            ],
            vec![],
            true,
            false,
        );
        assert_eq!(r.exit_code(true), 1);
    }

    #[test]
    fn timings_are_stripped_unless_requested() {
        let mut c = CheckResult::pass("t");
        c.millis = Some(12);
        let r = Report::new("verify", "d", 0, 8, vec![c.clone()], vec![], false, false);
        assert!(r.checks[0].millis.is_none());
        let r = Report::new("verify", "d", 0, 8, vec![c], vec![], false, true);
        assert_eq!(r.checks[0].millis, Some(12));
    }
}
