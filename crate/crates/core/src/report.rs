//! Residual reports shared by every checker.

use std::fmt;

/// One evaluated instance of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residual {
    /// Which identity, e.g. `gen-jacobi`.
    pub check: String,
    pub arity: usize,
    /// Printed inputs.
    pub tuple: Vec<String>,
    /// Sub-condition label, e.g. `m=3` or `(ii) k=2`.
    pub condition: String,
    /// Printed residual; `"0"` when the identity holds.
    pub value: String,
    pub nonzero: bool,
}

impl Residual {
    pub fn new(
        check: &str,
        arity: usize,
        tuple: Vec<String>,
        condition: impl Into<String>,
        value: String,
        nonzero: bool,
    ) -> Self {
        Residual { check: check.to_string(), arity, tuple, condition: condition.into(), value, nonzero }
    }
}

impl fmt::Display for Residual {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] k={} ({}): {}", self.check, self.condition, self.arity, self.tuple.join(", "), self.value)
    }
}

/// Ordered collection of residuals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub rows: Vec<Residual>,
    /// Free-form disclosures, such as sign conventions that were applied.
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: Residual) {
        self.rows.push(r);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| !r.nonzero)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.rows.iter().filter(|r| r.nonzero)
    }

    pub fn first_failure(&self) -> Option<&Residual> {
        self.failures().next()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}
