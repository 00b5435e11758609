use std::fmt::Write as _;
use std::time::Instant;

use algset::classes::{AxiomReport, Status};
use serde::Serialize;
use serde_json::Value;

/// Bumped whenever a field is renamed or removed.
pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: String,
    pub status: Status,
    /// Wall time in milliseconds; the only field allowed to vary between runs.
    pub wall_ms: u64,
    pub detail: Value,
    /// One-line summary for the terminal.
    #[serde(skip)]
    pub summary: String,
}

impl Check {
    pub fn new(id: impl Into<String>, status: Status, detail: impl Serialize) -> Self {
        Check {
            id: id.into(),
            status,
            wall_ms: 0,
            detail: serde_json::to_value(detail).expect("reports serialize"),
            summary: String::new(),
        }
    }

    pub fn summary(mut self, s: impl Into<String>) -> Self {
        self.summary = s.into();
        self
    }

    pub fn from_axiom(r: &AxiomReport) -> Self {
        let mut summary = format!("{} instances", r.instances);
        if let Some(n) = &r.note {
            let _ = write!(summary, "; {n}");
        }
        Check::new(r.id.clone(), r.status, r).summary(summary)
    }
}

/// Runs `f` and stamps the wall time on every check it returns.
pub fn timed(f: impl FnOnce() -> Vec<Check>) -> Vec<Check> {
    let start = Instant::now();
    let mut checks = f();
    let ms = start.elapsed().as_millis() as u64;
    for c in &mut checks {
        c.wall_ms = ms;
    }
    checks
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: Vec<String>,
    pub status: Status,
    pub checks: Vec<Check>,
    /// Lines printed to stdout besides the per-check table.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub output: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>, checks: Vec<Check>, output: Vec<String>) -> Self {
        let status = overall(&checks);
        Report { schema: SCHEMA, command, status, checks, output }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            Status::Inconclusive => 3,
            Status::Pass | Status::OutOfScope => 0,
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for line in &self.output {
            let _ = writeln!(s, "{line}");
        }
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
        for c in &self.checks {
            let _ = writeln!(s, "{:<width$}  {:<12}  {:>6} ms  {}", c.id, c.status.to_string(), c.wall_ms, c.summary);
        }
        s
    }
}

/// Any failure wins, then any inconclusive check; out-of-scope checks do not
/// count against a run.
fn overall(checks: &[Check]) -> Status {
    if checks.iter().any(|c| c.status == Status::Fail) {
        Status::Fail
    } else if checks.iter().any(|c| c.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with(statuses: &[Status]) -> Report {
        let checks = statuses.iter().enumerate().map(|(i, &s)| Check::new(i.to_string(), s, ())).collect();
        Report::new(vec![], checks, vec![])
    }

    #[test]
    fn exit_codes_follow_the_worst_status() {
        use Status::*;
        assert_eq!(with(&[]).exit_code(), 0);
        assert_eq!(with(&[Pass, OutOfScope]).exit_code(), 0);
        assert_eq!(with(&[Pass, Inconclusive]).exit_code(), 3);
        assert_eq!(with(&[Inconclusive, Fail, Pass]).exit_code(), 1);
    }
}
