//! Named pass/fail checks shared by the validators.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub counterexample: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct ValidationReport {
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self { pass: true, checks: Vec::new() }
    }

    pub fn push(&mut self, name: &str, counterexample: Option<String>) {
        self.pass &= counterexample.is_none();
        self.checks.push(Check {
            name: name.to_string(),
            pass: counterexample.is_none(),
            counterexample,
        });
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.check(name).is_some_and(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn summary(&self) -> String {
        let parts: Vec<String> = self
            .failures()
            .map(|c| format!("{}: {}", c.name, c.counterexample.as_deref().unwrap_or("failed")))
            .collect();
        parts.join("; ")
    }
}
