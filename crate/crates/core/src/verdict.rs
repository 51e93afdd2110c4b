//! Check results that carry the full violation list.
//!
//! Validators never stop at the first failure: classification sweeps and the
//! agreement tests assert on specific failing tuples, so a verdict records
//! every law that failed and where.

use serde::{Deserialize, Serialize};

/// One failed law instance: the law's identifier and the basis indices of the
/// tuple where it failed.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub law: String,
    pub at: Vec<usize>,
}

impl Violation {
    pub fn new(law: &str, at: &[usize]) -> Self {
        Violation { law: law.to_string(), at: at.to_vec() }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Verdict {
    pub violations: Vec<Violation>,
}

impl Verdict {
    pub fn ok() -> Self {
        Verdict { violations: Vec::new() }
    }

    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, law: &str, at: &[usize]) {
        self.violations.push(Violation::new(law, at));
    }

    /// Sorts violations into the canonical order (law id, then indices).
    pub fn canonicalize(mut self) -> Self {
        self.violations.sort();
        self.violations.dedup();
        self
    }

    pub fn merge(mut self, other: Verdict) -> Verdict {
        self.violations.extend(other.violations);
        self
    }

    /// True when some violation carries the given law id.
    pub fn has_law(&self, law: &str) -> bool {
        self.violations.iter().any(|v| v.law == law)
    }
}
