//! Severity-tagged findings shared by the linter, the OWL/SKOS checks and the
//! diagram builder.

use std::fmt;

use serde::Serialize;

use crate::model::{Term, Triple};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Info,
    Hint,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
            Severity::Hint => "hint",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.as_str().to_ascii_uppercase())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Focus {
    Triple(Triple),
    Term(Term),
}

impl fmt::Display for Focus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Focus::Triple(t) => t.fmt(f),
            Focus::Term(t) => t.fmt(f),
        }
    }
}

impl From<Triple> for Focus {
    fn from(t: Triple) -> Self {
        Focus::Triple(t)
    }
}

impl From<Term> for Focus {
    fn from(t: Term) -> Self {
        Focus::Term(t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    /// Stable identifier such as `RDFE003`.
    pub code: &'static str,
    pub message: String,
    pub focus: Focus,
    /// Name of the operation that produced the finding.
    pub source_op: &'static str,
}

impl Diagnostic {
    pub fn new(
        severity: Severity,
        code: &'static str,
        focus: impl Into<Focus>,
        message: impl Into<String>,
        source_op: &'static str,
    ) -> Self {
        Diagnostic {
            severity,
            code,
            message: message.into(),
            focus: focus.into(),
            source_op,
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `SEVERITY CODE focus: message`
    pub fn to_text(&self) -> String {
        format!(
            "{} {} {}: {}",
            self.severity, self.code, self.focus, self.message
        )
    }

    /// One JSON object with the fields severity, code, message and focus.
    pub fn to_record(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            severity: Severity,
            code: &'a str,
            message: &'a str,
            focus: String,
        }
        serde_json::to_string(&Record {
            severity: self.severity,
            code: self.code,
            message: &self.message,
            focus: self.focus.to_string(),
        })
        .expect("diagnostic record serializes")
    }

    fn order_key(&self) -> (&'static str, String, &str, Severity) {
        (
            self.code,
            self.focus.to_string(),
            &self.message,
            self.severity,
        )
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Sorts by code, then focus text, then message, and drops exact duplicates.
pub fn sort_diagnostics(diagnostics: &mut Vec<Diagnostic>) {
    diagnostics.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
    diagnostics.dedup();
}
