//! Check-suite reports shared by the library suites and the CLI.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    /// Short machine-friendly name.
    pub name: String,
    /// The axiom or identity the check instantiates.
    pub tag: String,
    pub pass: bool,
}

impl CheckItem {
    pub fn new(name: &str, tag: &str, pass: bool) -> CheckItem {
        CheckItem { name: name.into(), tag: tag.into(), pass }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub suite: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(suite: &str) -> CheckReport {
        CheckReport { suite: suite.into(), items: Vec::new() }
    }

    pub fn push(&mut self, name: &str, tag: &str, pass: bool) {
        self.items.push(CheckItem::new(name, tag, pass));
    }

    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.items.extend(other.items);
    }
}
