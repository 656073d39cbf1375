//! Check records shared by the verification suites.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// A value that is computed and recorded but not compared with anything.
    Computed,
}

/// One verified statement: a stable identifier, a short description of what was
/// checked, the outcome and a witness or value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub details: String,
}

impl Check {
    pub fn new(id: &str, anchor: &str, ok: bool, details: impl Into<String>) -> Self {
        Check {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            details: details.into(),
        }
    }

    pub fn computed(id: &str, anchor: &str, details: impl Into<String>) -> Self {
        Check { id: id.to_string(), anchor: anchor.to_string(), status: Status::Computed, details: details.into() }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Whether no check in the list failed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(Check::passed)
}
