//! Pass/fail reports with concrete witnesses.

use std::fmt;

use crate::graded::{format_scalar, Scalar};
use crate::linalg::Vector;

/// Witnesses retained per law; the total failure count is always kept.
pub const WITNESS_CAP: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub inputs: Vec<String>,
    /// Nonzero defect, as labelled coefficients.
    pub defect: Vec<(String, Scalar)>,
}

impl Witness {
    pub fn new(inputs: Vec<String>, defect: &Vector, label: impl Fn(usize) -> String) -> Self {
        Self { inputs, defect: defect.iter().map(|(i, c)| (label(i), c.clone())).collect() }
    }

    pub fn render_defect(&self) -> String {
        render_terms(&self.defect)
    }
}

pub fn render_terms(terms: &[(String, Scalar)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms.iter().map(|(l, c)| format!("{} {}", format_scalar(c), l)).collect::<Vec<_>>().join(", ")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawResult {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
    /// Free-form remark, e.g. why a law was not applicable.
    pub note: Option<String>,
}

impl LawResult {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), checked: 0, failures: 0, witnesses: Vec::new(), note: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn record(&mut self, witness: Option<Witness>) {
        self.checked += 1;
        if let Some(w) = witness {
            self.failures += 1;
            if self.witnesses.len() < WITNESS_CAP {
                self.witnesses.push(w);
            }
        }
    }

    pub fn fail_with(mut self, note: impl Into<String>) -> Self {
        self.checked += 1;
        self.failures += 1;
        self.note = Some(note.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub laws: Vec<LawResult>,
}

impl StructureReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, law: LawResult) {
        self.laws.push(law);
    }

    pub fn extend(&mut self, other: StructureReport) {
        self.laws.extend(other.laws);
    }

    pub fn passed(&self) -> bool {
        self.laws.iter().all(LawResult::passed)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.name == name)
    }

    pub fn failing(&self) -> impl Iterator<Item = &LawResult> {
        self.laws.iter().filter(|l| !l.passed())
    }
}

impl From<Vec<LawResult>> for StructureReport {
    fn from(laws: Vec<LawResult>) -> Self {
        StructureReport { laws }
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.laws.iter().map(|l| l.name.len()).max().unwrap_or(0);
        for law in &self.laws {
            let verdict = if law.passed() { "pass" } else { "FAIL" };
            write!(f, "{:width$}  {verdict}  checked={}", law.name, law.checked)?;
            if !law.passed() {
                write!(f, " failures={}", law.failures)?;
            }
            if let Some(note) = &law.note {
                write!(f, "  ({note})")?;
            }
            writeln!(f)?;
            for w in law.witnesses.iter().take(3) {
                writeln!(f, "{:width$}    at ({}) defect {}", "", w.inputs.join(", "), w.render_defect())?;
            }
        }
        Ok(())
    }
}
