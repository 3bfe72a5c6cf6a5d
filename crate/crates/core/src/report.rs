//! Structured pass/fail records for verification runs.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub input: String,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The result this check certifies.
    pub anchor: String,
    pub degree_certified: u32,
    pub status: Status,
    /// Number of individual comparisons performed.
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Accumulates comparisons for one check, keeping the first failure.
pub struct CheckAcc {
    name: String,
    anchor: String,
    degree: u32,
    cases: usize,
    fail: Option<Counterexample>,
    note: Option<String>,
}

impl CheckAcc {
    pub fn new(name: &str, anchor: &str, degree: u32) -> Self {
        CheckAcc { name: name.into(), anchor: anchor.into(), degree, cases: 0, fail: None, note: None }
    }

    pub fn ok(&self) -> bool {
        self.fail.is_none()
    }

    /// Records one comparison; the strings are only built on failure.
    pub fn expect(&mut self, good: bool, describe: impl FnOnce() -> (String, String, String)) {
        self.cases += 1;
        if !good && self.fail.is_none() {
            let (input, expected, got) = describe();
            self.fail = Some(Counterexample { input, expected, got });
        }
    }

    pub fn fail(&mut self, input: String, expected: String, got: String) {
        self.expect(false, || (input, expected, got));
    }

    pub fn note(&mut self, s: String) {
        self.note = Some(s);
    }

    pub fn finish(self) -> Check {
        let status = if self.fail.is_some() { Status::Fail } else { Status::Pass };
        Check {
            name: self.name,
            anchor: self.anchor,
            degree_certified: if status == Status::Pass { self.degree } else { 0 },
            status,
            cases: self.cases,
            counterexample: self.fail,
            note: self.note,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub tool_version: String,
    pub config: Value,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        VerificationReport { tool_version: env!("CARGO_PKG_VERSION").to_string(), config: Value::Null, checks: Vec::new() }
    }

    pub fn with_config(mut self, config: Value) -> Self {
        self.config = config;
        self
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed())
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn sort(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
    }

    /// Deterministic JSON (checks sorted by name).
    pub fn to_json(&self) -> Value {
        let mut r = self.clone();
        r.sort();
        serde_json::to_value(&r).expect("serializable")
    }

    pub fn summary(&self) -> String {
        let mut r = self.clone();
        r.sort();
        let mut s = String::new();
        for c in &r.checks {
            let st = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skip",
            };
            s.push_str(&format!("{:4} {} (deg {}, {} cases)\n", st, c.name, c.degree_certified, c.cases));
            if let Some(ce) = &c.counterexample {
                s.push_str(&format!("     input: {}\n     expected: {}\n     got: {}\n", ce.input, ce.expected, ce.got));
            }
        }
        s
    }
}
