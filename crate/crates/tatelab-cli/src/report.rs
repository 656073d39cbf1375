//! Run reports: a JSON document and a plain-text digest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use tatelab::report::{Check, Status};
use tatelab::suites::SuiteResult;

pub const SCHEMA: &str = "tatelab-report/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub computed: usize,
}

impl Summary {
    fn of(checks: &[Check]) -> Self {
        let count = |s| checks.iter().filter(|c| c.status == s).count();
        Summary { pass: count(Status::Pass), fail: count(Status::Fail), computed: count(Status::Computed) }
    }
}

#[derive(Debug, Serialize)]
pub struct SuiteRecord {
    pub name: String,
    pub summary: Summary,
    pub checks: Vec<Check>,
}

/// Wall-clock durations, kept apart from the deterministic part of the report.
#[derive(Debug, Default, Serialize)]
pub struct Timing {
    pub suites: Vec<(String, f64)>,
    pub total_seconds: f64,
}

#[derive(Debug, Serialize)]
pub struct Report<C: Serialize> {
    pub schema: &'static str,
    pub command: String,
    pub config: C,
    pub summary: Summary,
    pub suites: Vec<SuiteRecord>,
    #[serde(skip)]
    pub timing: Timing,
}

impl<C: Serialize> Report<C> {
    pub fn new(command: &str, config: C, results: Vec<SuiteResult>, timing: Timing) -> Self {
        let suites: Vec<SuiteRecord> = results
            .into_iter()
            .map(|r| SuiteRecord { summary: Summary::of(&r.checks), name: r.name, checks: r.checks })
            .collect();
        let mut summary = Summary::default();
        for s in &suites {
            summary.pass += s.summary.pass;
            summary.fail += s.summary.fail;
            summary.computed += s.summary.computed;
        }
        Report { schema: SCHEMA, command: command.to_string(), config, summary, suites, timing }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    /// A plain-text table, one line per check.
    pub fn digest(&self) -> String {
        let mut s = String::new();
        for suite in &self.suites {
            let _ = writeln!(
                s,
                "== {} ({} pass, {} fail, {} computed)",
                suite.name, suite.summary.pass, suite.summary.fail, suite.summary.computed
            );
            let width = suite.checks.iter().map(|c| c.id.chars().count()).max().unwrap_or(0);
            for c in &suite.checks {
                let status = match c.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Computed => "INFO",
                };
                let _ = writeln!(s, "{status}  {:<width$}  {}", c.id, one_line(&c.details, 160));
            }
        }
        let _ = writeln!(
            s,
            "total: {} pass, {} fail, {} computed",
            self.summary.pass, self.summary.fail, self.summary.computed
        );
        s
    }

    /// Write `<stem>.json`, `<stem>.txt` and `<stem>.timing.json` into `dir`.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let json = dir.join(format!("{stem}.json"));
        let body = serde_json::to_string_pretty(self)?;
        fs::write(&json, body + "\n").with_context(|| format!("writing {}", json.display()))?;
        let txt = dir.join(format!("{stem}.txt"));
        fs::write(&txt, self.digest()).with_context(|| format!("writing {}", txt.display()))?;
        let timing = dir.join(format!("{stem}.timing.json"));
        fs::write(&timing, serde_json::to_string_pretty(&self.timing)? + "\n")
            .with_context(|| format!("writing {}", timing.display()))?;
        Ok(json)
    }
}

fn one_line(text: &str, max: usize) -> String {
    let flat = text.replace('\n', " ");
    if flat.chars().count() <= max {
        flat
    } else {
        flat.chars().take(max).collect::<String>() + "..."
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report<()> {
        let checks = vec![
            Check::new("a", "first", true, "ok"),
            Check::new("b", "second", false, "witness"),
            Check::computed("c", "third", "value"),
        ];
        Report::new("test", (), vec![SuiteResult { name: "s".into(), checks }], Timing::default())
    }

    #[test]
    fn summary_counts_and_exit_rule() {
        let r = sample();
        assert_eq!(r.summary, Summary { pass: 1, fail: 1, computed: 1 });
        assert!(!r.passed());
        assert!(r.digest().contains("FAIL  b  witness"));
    }

    #[test]
    fn json_is_deterministic_and_excludes_timing() {
        let mut a = sample();
        a.timing.total_seconds = 1.0;
        let mut b = sample();
        b.timing.total_seconds = 2.0;
        let ja = serde_json::to_string(&a).unwrap();
        assert_eq!(ja, serde_json::to_string(&b).unwrap());
        assert!(ja.contains("\"schema\":\"tatelab-report/1\""));
        assert!(!ja.contains("timing"));
    }
}
