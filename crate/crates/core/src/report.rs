//! Verification reports shared by the nodal and cubic suites.

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportItem {
    pub id: String,
    pub citation: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub dim: u32,
    pub items: Vec<ReportItem>,
    pub all_pass: bool,
}

/// Collects items; an error marks its item failed and is kept for callers
/// that need to tell failures from indeterminate results.
#[derive(Debug, Default)]
pub struct ReportBuilder {
    items: Vec<ReportItem>,
    errors: Vec<Error>,
}

impl ReportBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records an item comparing rendered values.
    pub fn check<T: ToString>(
        &mut self,
        id: impl Into<String>,
        citation: &str,
        expected: impl ToString,
        got: Result<T, Error>,
    ) -> bool {
        let expected = expected.to_string();
        let (got, pass) = match got {
            Ok(v) => {
                let g = v.to_string();
                let pass = g == expected;
                (g, pass)
            }
            Err(e) => {
                let g = format!("error: {e}");
                self.errors.push(e);
                (g, false)
            }
        };
        self.items.push(ReportItem {
            id: id.into(),
            citation: citation.to_string(),
            expected,
            got,
            pass,
        });
        pass
    }

    pub fn errors(&self) -> &[Error] {
        &self.errors
    }

    pub fn finish(self, dim: u32) -> (VerificationReport, Vec<Error>) {
        let all_pass = self.items.iter().all(|i| i.pass);
        (
            VerificationReport {
                dim,
                items: self.items,
                all_pass,
            },
            self.errors,
        )
    }
}
