//! Certificates: everything a command computed and checked, in one canonical text form.
//!
//! ```text
//! hptk-certificate 1
//! tool hptk 0.1.0
//! command transfer
//! input H3CE
//! digest sha256:…
//! param arity 5
//! check flatness pass 126 0
//! witness stasheff_3 | a a b | -1 ac
//! table m3
//! row a a b -> -1 ac
//! end
//! verdict pass
//! ```
//!
//! Lines are emitted in a fixed order, so equal inputs give byte-identical certificates.

use std::fmt::Write;

use sha2::{Digest, Sha256};

use crate::report::StructureReport;

pub const FORMAT_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rows `inputs -> value`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub rows: Vec<(Vec<String>, String)>,
}

impl Table {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), rows: Vec::new() }
    }

    pub fn row(&mut self, inputs: Vec<String>, value: impl Into<String>) {
        self.rows.push((inputs, value.into()));
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub command: String,
    pub input: String,
    pub digest: String,
    pub params: Vec<(String, String)>,
    pub checks: StructureReport,
    pub tables: Vec<Table>,
    pub notes: Vec<String>,
}

pub fn digest(text: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

impl Certificate {
    /// `canonical_input` is the canonical serialization of the input document.
    pub fn new(command: &str, input: &str, canonical_input: &str) -> Self {
        Self {
            command: command.into(),
            input: input.into(),
            digest: digest(canonical_input),
            params: Vec::new(),
            checks: StructureReport::new(),
            tables: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.passed()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// The normative machine-readable form.
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "hptk-certificate {FORMAT_VERSION}").unwrap();
        writeln!(out, "tool hptk {TOOL_VERSION}").unwrap();
        writeln!(out, "command {}", self.command).unwrap();
        writeln!(out, "input {}", self.input).unwrap();
        writeln!(out, "digest {}", self.digest).unwrap();
        for (k, v) in &self.params {
            writeln!(out, "param {k} {v}").unwrap();
        }
        for note in &self.notes {
            writeln!(out, "note {note}").unwrap();
        }
        for law in &self.checks.laws {
            let verdict = if law.passed() { "pass" } else { "fail" };
            writeln!(out, "check {} {verdict} {} {}", law.name, law.checked, law.failures).unwrap();
            if let Some(n) = &law.note {
                writeln!(out, "check-note {} {n}", law.name).unwrap();
            }
            for w in &law.witnesses {
                writeln!(out, "witness {} | {} | {}", law.name, w.inputs.join(" "), w.render_defect()).unwrap();
            }
        }
        for t in &self.tables {
            writeln!(out, "table {}", t.name).unwrap();
            for (inputs, value) in &t.rows {
                writeln!(out, "row {} -> {value}", inputs.join(" ")).unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        writeln!(out, "verdict {}", if self.passed() { "pass" } else { "fail" }).unwrap();
        out
    }

    /// Aligned tables for reading.
    pub fn human(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{} {}  ({})", self.command, self.input, self.digest).unwrap();
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "parameters: {}", ps.join(" ")).unwrap();
        }
        for note in &self.notes {
            writeln!(out, "note: {note}").unwrap();
        }
        for t in &self.tables {
            writeln!(out, "\n{}:", t.name).unwrap();
            if t.rows.is_empty() {
                writeln!(out, "  (all zero)").unwrap();
                continue;
            }
            let width = t.rows.iter().map(|(i, _)| i.join(" ").chars().count()).max().unwrap_or(0);
            for (inputs, value) in &t.rows {
                let lhs = inputs.join(" ");
                let pad = width - lhs.chars().count();
                writeln!(out, "  {lhs}{}  ->  {value}", " ".repeat(pad)).unwrap();
            }
        }
        if !self.checks.laws.is_empty() {
            writeln!(out, "\nchecks:").unwrap();
            write!(out, "{}", self.checks).unwrap();
        }
        writeln!(out, "\nverdict: {}", if self.passed() { "pass" } else { "FAIL" }).unwrap();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::LawResult;

    #[test]
    fn render_is_stable_and_ordered() {
        let mut c = Certificate::new("validate", "X", "name X\n");
        c.param("arity", 3);
        let mut law = LawResult::new("unit");
        law.record(None);
        c.checks.push(law);
        let mut t = Table::new("m2");
        t.row(vec!["a".into(), "b".into()], "1 ab");
        c.tables.push(t);
        let text = c.render();
        assert_eq!(text, c.clone().render());
        let order: Vec<usize> =
            ["tool", "param", "check", "table", "verdict"].iter().map(|k| text.find(k).unwrap()).collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
        assert!(text.ends_with("verdict pass\n"));
    }

    #[test]
    fn digest_is_sha256() {
        assert_eq!(digest(""), "sha256:e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
