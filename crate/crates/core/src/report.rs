use std::fmt;

use serde::Serialize;

/// Outcome of an exhaustive invariant check. Violations are data, not errors:
/// an empty list certifies the checked object.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport<V> {
    pub subject: &'static str,
    pub violations: Vec<V>,
}

impl<V> ValidationReport<V> {
    pub fn new(subject: &'static str) -> Self {
        ValidationReport {
            subject,
            violations: Vec::new(),
        }
    }

    pub fn push(&mut self, v: V) {
        self.violations.push(v);
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl<V: fmt::Display> ValidationReport<V> {
    /// Converts a failing report into an [`crate::Error::Invalid`].
    pub fn into_result(self) -> crate::Result<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(crate::Error::Invalid {
                what: self.subject,
                detail: self.summary(),
            })
        }
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl<V: fmt::Display> fmt::Display for ValidationReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "{}: valid", self.subject)
        } else {
            writeln!(f, "{}: {} violation(s)", self.subject, self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  - {v}")?;
            }
            Ok(())
        }
    }
}
