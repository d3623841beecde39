//! The line-oriented algebra document format.
//!
//! ```text
//! name H3CE
//! scalars rational
//! basis 1 0
//! basis a 1
//! unit 1
//! product a b -> 1 ab
//! differential c -> 1 ab
//! bracket-shift -1
//! bracket a b -> -1/2 c
//! bv ab -> 1 c
//! inner-product monomial-orthonormal
//! gram 1 1 0; 0 2
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Coefficients must be written in
//! lowest terms. Omitted structure constants are zero.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::{AlgebraPresentation, Bilinear, Bracket, InnerProduct};
use crate::error::{Error, Result};
use crate::graded::{format_scalar, parse_scalar, GradedSpace, Scalar};
use crate::linalg::{LinMap, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

fn join_errors(errors: &[ParseError]) -> Error {
    Error::Parse(errors.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"))
}

struct Parser {
    name: Option<String>,
    basis: Vec<(String, i64)>,
    index: BTreeMap<String, usize>,
    unit: Option<usize>,
    product: Bilinear,
    differential: BTreeMap<usize, Vector>,
    bracket_shift: Option<i64>,
    bracket: Bilinear,
    bracket_lines: Vec<usize>,
    bv: BTreeMap<usize, Vector>,
    inner: Option<InnerProduct>,
    gram: BTreeMap<i64, Vec<Vec<Scalar>>>,
    seen: BTreeSet<(String, Vec<usize>)>,
    errors: Vec<ParseError>,
    scalars_declared: bool,
}

impl Parser {
    fn err(&mut self, line: usize, message: impl Into<String>) {
        self.errors.push(ParseError { line, message: message.into() });
    }

    fn symbol(&mut self, line: usize, sym: &str) -> Option<usize> {
        let found = self.index.get(sym).copied();
        if found.is_none() {
            self.err(line, format!("unknown symbol \"{sym}\""));
        }
        found
    }

    fn terms(&mut self, line: usize, text: &str) -> Option<Vector> {
        let mut v = Vector::zero();
        let mut used = BTreeSet::new();
        for term in text.split(',') {
            let parts: Vec<&str> = term.split_whitespace().collect();
            if parts.len() != 2 {
                self.err(line, format!("expected \"<coefficient> <symbol>\", found \"{}\"", term.trim()));
                return None;
            }
            let Some(c) = parse_scalar(parts[0]) else {
                self.err(line, format!("coefficient \"{}\" is not a rational in lowest terms", parts[0]));
                return None;
            };
            if c == Scalar::default() {
                self.err(line, "zero coefficient; omit the term instead");
                return None;
            }
            let k = self.symbol(line, parts[1])?;
            if !used.insert(k) {
                self.err(line, format!("symbol \"{}\" repeated in one result", parts[1]));
                return None;
            }
            v.add_term(k, &c);
        }
        Some(v)
    }

    fn check_degree(&mut self, line: usize, v: &Vector, expected: i64, what: &str) -> bool {
        for (k, _) in v.iter() {
            if self.basis[k].1 != expected {
                let msg = format!(
                    "degree mismatch in {what}: \"{}\" has degree {}, expected {expected}",
                    self.basis[k].0, self.basis[k].1
                );
                self.err(line, msg);
                return false;
            }
        }
        true
    }

    fn first_entry(&mut self, line: usize, kind: &str, key: Vec<usize>) -> bool {
        if !self.seen.insert((kind.to_string(), key)) {
            self.err(line, format!("duplicate {kind} entry"));
            return false;
        }
        true
    }

    fn line(&mut self, no: usize, raw: &str) {
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            return;
        }
        let (keyword, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
        let rest = rest.trim();
        let (lhs, rhs) = match rest.split_once("->") {
            Some((l, r)) => (l.trim(), Some(r.trim())),
            None => (rest, None),
        };
        let args: Vec<&str> = lhs.split_whitespace().collect();
        if !matches!(keyword, "product" | "differential" | "bracket" | "bv") && rhs.is_some() {
            self.err(no, format!("unexpected \"->\" after {keyword}"));
            return;
        }
        match keyword {
            "name" => {
                if args.len() != 1 {
                    return self.err(no, "expected: name <identifier>");
                }
                if self.name.replace(args[0].to_string()).is_some() {
                    self.err(no, "name declared twice");
                }
            }
            "scalars" => {
                if args != ["rational"] {
                    return self.err(no, "only \"scalars rational\" is supported");
                }
                self.scalars_declared = true;
            }
            "basis" => {
                if args.len() != 2 {
                    return self.err(no, "expected: basis <symbol> <degree>");
                }
                let sym = args[0];
                if sym.contains(',') || sym == "->" {
                    return self.err(no, format!("invalid symbol \"{sym}\""));
                }
                let Ok(deg) = args[1].parse::<i64>() else {
                    return self.err(no, format!("invalid degree \"{}\"", args[1]));
                };
                if self.index.contains_key(sym) {
                    return self.err(no, format!("symbol \"{sym}\" declared twice"));
                }
                self.index.insert(sym.to_string(), self.basis.len());
                self.basis.push((sym.to_string(), deg));
            }
            "unit" => {
                if args.len() != 1 {
                    return self.err(no, "expected: unit <symbol>");
                }
                if let Some(u) = self.symbol(no, args[0]) {
                    if self.basis[u].1 != 0 {
                        return self.err(no, "the unit must have degree 0");
                    }
                    if self.unit.replace(u).is_some() {
                        self.err(no, "unit declared twice");
                    }
                }
            }
            "product" | "bracket" => {
                let Some(rhs) = rhs else {
                    return self.err(no, format!("expected: {keyword} <left> <right> -> <terms>"));
                };
                if args.len() != 2 {
                    return self.err(no, format!("expected: {keyword} <left> <right> -> <terms>"));
                }
                let (Some(l), Some(r)) = (self.symbol(no, args[0]), self.symbol(no, args[1])) else { return };
                let Some(v) = self.terms(no, rhs) else { return };
                if !self.first_entry(no, keyword, vec![l, r]) {
                    return;
                }
                let base = self.basis[l].1 + self.basis[r].1;
                if keyword == "product" {
                    if self.check_degree(no, &v, base, "product") {
                        self.product.set(l, r, v);
                    }
                } else {
                    // degrees are checked once the shift is known
                    self.bracket_lines.push(no);
                    self.bracket.set(l, r, v);
                }
            }
            "differential" | "bv" => {
                let Some(rhs) = rhs else { return self.err(no, format!("expected: {keyword} <argument> -> <terms>")) };
                if args.len() != 1 {
                    return self.err(no, format!("expected: {keyword} <argument> -> <terms>"));
                }
                let Some(a) = self.symbol(no, args[0]) else { return };
                let Some(v) = self.terms(no, rhs) else { return };
                if !self.first_entry(no, keyword, vec![a]) {
                    return;
                }
                if keyword == "differential" {
                    let expected = self.basis[a].1 + 1;
                    if self.check_degree(no, &v, expected, "differential") {
                        self.differential.insert(a, v);
                    }
                } else {
                    self.bv.insert(a, v);
                }
            }
            "bracket-shift" => match args.as_slice() {
                ["0"] | ["-1"] => {
                    if self.bracket_shift.replace(args[0].parse().unwrap()).is_some() {
                        self.err(no, "bracket-shift declared twice");
                    }
                }
                _ => self.err(no, "bracket-shift must be 0 or -1"),
            },
            "inner-product" => {
                if args != ["monomial-orthonormal"] {
                    return self.err(no, "expected: inner-product monomial-orthonormal (or gram lines)");
                }
                if self.inner.replace(InnerProduct::MonomialOrthonormal).is_some() {
                    self.err(no, "inner product declared twice");
                }
            }
            "gram" => {
                let (Some(d), Some(rows)) = (args.first(), lhs.split_once(char::is_whitespace).map(|x| x.1)) else {
                    return self.err(no, "expected: gram <degree> <row>; <row>; ...");
                };
                let Ok(d) = d.parse::<i64>() else { return self.err(no, format!("invalid degree \"{d}\"")) };
                let mut matrix = Vec::new();
                for row in rows.split(';') {
                    let mut r = Vec::new();
                    for tok in row.split_whitespace() {
                        match parse_scalar(tok) {
                            Some(q) => r.push(q),
                            None => return self.err(no, format!("entry \"{tok}\" is not a rational in lowest terms")),
                        }
                    }
                    matrix.push(r);
                }
                if self.gram.insert(d, matrix).is_some() {
                    self.err(no, format!("gram block for degree {d} declared twice"));
                }
            }
            other => self.err(no, format!("unknown keyword \"{other}\"")),
        }
    }

    fn finish(mut self) -> std::result::Result<AlgebraPresentation, Vec<ParseError>> {
        if self.name.is_none() {
            self.err(0, "missing \"name\" line");
        }
        if !self.scalars_declared {
            self.err(0, "missing \"scalars rational\" line");
        }
        if !self.bracket.is_zero() && self.bracket_shift.is_none() {
            let line = self.bracket_lines[0];
            self.err(line, "bracket entries require a bracket-shift line");
        }
        if let Some(shift) = self.bracket_shift {
            let entries: Vec<((usize, usize), Vector)> =
                self.bracket.entries.iter().map(|(k, v)| (*k, v.clone())).collect();
            for (((l, r), v), line) in entries.into_iter().zip(self.bracket_lines.clone()) {
                let expected = self.basis[l].1 + self.basis[r].1 - shift;
                self.check_degree(line, &v, expected, "bracket");
            }
        }
        if !self.gram.is_empty() {
            if self.inner.is_some() {
                self.err(0, "both monomial-orthonormal and gram blocks given");
            }
            self.inner = Some(InnerProduct::PerDegree(std::mem::take(&mut self.gram)));
        }
        if !self.errors.is_empty() {
            self.errors.sort_by_key(|e| e.line);
            return Err(self.errors);
        }
        let space = GradedSpace::new(self.basis.clone()).expect("symbols checked unique");
        let n = space.dim();
        let mut p = AlgebraPresentation::new(self.name.unwrap(), space);
        p.unit = self.unit;
        p.product = Some(self.product);
        if !self.differential.is_empty() {
            let cols = (0..n).map(|j| self.differential.get(&j).cloned().unwrap_or_default()).collect();
            p.differential = Some(LinMap::from_columns(n, cols));
        }
        if let Some(shift) = self.bracket_shift {
            p.bracket = Some(Bracket { shift, table: self.bracket });
        }
        if !self.bv.is_empty() {
            let cols = (0..n).map(|j| self.bv.get(&j).cloned().unwrap_or_default()).collect();
            p.bv_operator = Some(LinMap::from_columns(n, cols));
        }
        p.inner_product = self.inner;
        Ok(p)
    }
}

/// Parses a document, collecting every error with its line number.
pub fn parse_document(text: &str) -> std::result::Result<AlgebraPresentation, Vec<ParseError>> {
    let mut parser = Parser {
        name: None,
        basis: Vec::new(),
        index: BTreeMap::new(),
        unit: None,
        product: Bilinear::new(),
        differential: BTreeMap::new(),
        bracket_shift: None,
        bracket: Bilinear::new(),
        bracket_lines: Vec::new(),
        bv: BTreeMap::new(),
        inner: None,
        gram: BTreeMap::new(),
        seen: BTreeSet::new(),
        errors: Vec::new(),
        scalars_declared: false,
    };
    for (i, line) in text.lines().enumerate() {
        parser.line(i + 1, line);
    }
    parser.finish()
}

pub fn parse(text: &str) -> Result<AlgebraPresentation> {
    parse_document(text).map_err(|e| join_errors(&e))
}

fn render_result(p: &AlgebraPresentation, v: &Vector) -> String {
    v.iter().map(|(k, c)| format!("{} {}", format_scalar(c), p.label(k))).collect::<Vec<_>>().join(", ")
}

/// The canonical serialization: fixed section order, entries sorted by basis index.
pub fn serialize(p: &AlgebraPresentation) -> String {
    let mut out = String::new();
    out.push_str(&format!("name {}\nscalars rational\n", p.name));
    for (sym, deg) in p.space.basis() {
        out.push_str(&format!("basis {sym} {deg}\n"));
    }
    if let Some(u) = p.unit {
        out.push_str(&format!("unit {}\n", p.label(u)));
    }
    if let Some(prod) = &p.product {
        for ((l, r), v) in &prod.entries {
            out.push_str(&format!("product {} {} -> {}\n", p.label(*l), p.label(*r), render_result(p, v)));
        }
    }
    if let Some(d) = &p.differential {
        for j in 0..d.cols() {
            if !d.column(j).is_zero() {
                out.push_str(&format!("differential {} -> {}\n", p.label(j), render_result(p, d.column(j))));
            }
        }
    }
    if let Some(br) = &p.bracket {
        out.push_str(&format!("bracket-shift {}\n", br.shift));
        for ((l, r), v) in &br.table.entries {
            out.push_str(&format!("bracket {} {} -> {}\n", p.label(*l), p.label(*r), render_result(p, v)));
        }
    }
    if let Some(bv) = &p.bv_operator {
        for j in 0..bv.cols() {
            if !bv.column(j).is_zero() {
                out.push_str(&format!("bv {} -> {}\n", p.label(j), render_result(p, bv.column(j))));
            }
        }
    }
    match &p.inner_product {
        None => {}
        Some(InnerProduct::MonomialOrthonormal) => out.push_str("inner-product monomial-orthonormal\n"),
        Some(InnerProduct::PerDegree(blocks)) => {
            for (d, m) in blocks {
                let rows: Vec<String> =
                    m.iter().map(|r| r.iter().map(format_scalar).collect::<Vec<_>>().join(" ")).collect();
                out.push_str(&format!("gram {d} {}\n", rows.join("; ")));
            }
        }
    }
    out
}
