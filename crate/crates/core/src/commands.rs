//! The command layer behind the `hptk` binary and the browser demo: each command takes a
//! document, runs the relevant pipeline and returns a status, a certificate and the text
//! to print.

#![allow(clippy::result_large_err)]

use std::collections::BTreeMap;

use crate::algebra::{
    bracket_from_delta, check_dga, check_dgla, check_gbv, check_gerstenhaber, check_poisson, cohomology,
    AlgebraPresentation, Bilinear, Bracket,
};
use crate::certificate::{Certificate, Table};
use crate::coalgebra::{check_linfty, check_stasheff, Chain, MultiMap};
use crate::document::{parse_document, serialize};
use crate::error::Error;
use crate::graded::{sign, Flavor};
use crate::linalg::Vector;
use crate::perturbation::{deform_dga, deform_poisson_gerstenhaber, CoefficientRing, Deformation, InitiatorKind};
use crate::report::{render_terms, LawResult, StructureReport};
use crate::splitting::{compute_splitting, hodge_splitting, make_sdr, verify_sdr_labelled, Splitting};
use crate::transfer::{chen_transfer, hain_transfer, render_word, transfer_report, Series, Transfer};

/// Process exit status; the numeric values are the exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Success = 0,
    Invalid = 1,
    VerificationFailed = 2,
    Usage = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug)]
pub struct Output {
    pub status: Status,
    pub text: String,
    pub certificate: Option<Certificate>,
}

impl Output {
    fn fail(status: Status, text: impl Into<String>) -> Self {
        Self { status, text: text.into(), certificate: None }
    }

    fn from_certificate(cert: Certificate, failure: Status) -> Self {
        let status = if cert.passed() { Status::Success } else { failure };
        Self { status, text: cert.human(), certificate: Some(cert) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplittingChoice {
    Auto,
    Hodge,
}

impl SplittingChoice {
    pub fn name(self) -> &'static str {
        match self {
            SplittingChoice::Auto => "auto",
            SplittingChoice::Hodge => "hodge",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    AInfty,
    LInfty,
}

/// Refuse jobs whose coefficient tables would exceed this many slots.
pub const DEFAULT_MAX_SLOTS: usize = 10_000_000;

#[derive(Clone, Copy, Debug)]
pub struct TransferOptions {
    pub arity: usize,
    pub mode: Mode,
    pub splitting: SplittingChoice,
    pub max_slots: usize,
}

impl Default for TransferOptions {
    fn default() -> Self {
        Self { arity: 4, mode: Mode::AInfty, splitting: SplittingChoice::Auto, max_slots: DEFAULT_MAX_SLOTS }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DeformOptions {
    pub word_bound: usize,
    pub sym_bound: usize,
    pub initiator: InitiatorKind,
    pub splitting: SplittingChoice,
    pub max_slots: usize,
}

impl Default for DeformOptions {
    fn default() -> Self {
        Self {
            word_bound: 4,
            sym_bound: 2,
            initiator: InitiatorKind::LieAdjoint,
            splitting: SplittingChoice::Auto,
            max_slots: DEFAULT_MAX_SLOTS,
        }
    }
}

fn load(text: &str) -> Result<AlgebraPresentation, Output> {
    parse_document(text).map_err(|errs| {
        let lines: Vec<String> = errs.iter().map(|e| format!("line {}: {}", e.line, e.message)).collect();
        Output::fail(Status::Usage, lines.join("\n"))
    })
}

/// The validator suite matching the structure a document declares.
pub fn validation_suite(p: &AlgebraPresentation) -> StructureReport {
    if p.bv_operator.is_some() {
        return check_gbv(p);
    }
    match &p.bracket {
        Some(b) if b.shift == -1 => check_gerstenhaber(p),
        Some(_) if p.product_or_zero().is_zero() => check_dgla(p),
        Some(_) => check_poisson(p),
        None => check_dga(p),
    }
}

fn new_certificate(command: &str, p: &AlgebraPresentation) -> Certificate {
    Certificate::new(command, &p.name, &serialize(p))
}

fn invalid(cert: Certificate, report: StructureReport) -> Output {
    let mut cert = cert;
    cert.checks = report;
    Output::from_certificate(cert, Status::Invalid)
}

pub fn validate(text: &str) -> Output {
    let p = match load(text) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let mut cert = new_certificate("validate", &p);
    cert.checks = validation_suite(&p);
    Output::from_certificate(cert, Status::Invalid)
}

fn split(p: &AlgebraPresentation, choice: SplittingChoice, cert: &mut Certificate) -> Result<Splitting, Output> {
    let result = match choice {
        SplittingChoice::Auto => compute_splitting(p),
        SplittingChoice::Hodge => hodge_splitting(p).map(|(s, hodge)| {
            cert.checks.extend(prefixed("hodge.", hodge.verify(p, &s)));
            s
        }),
    };
    let s = result.map_err(|e| Output::fail(Status::Invalid, e.to_string()))?;
    cert.checks.extend(prefixed("split.", s.verify(p)));
    let labels = s.labels(p);
    let sdr = make_sdr(p, &s);
    cert.checks.extend(prefixed("sdr.", verify_sdr_labelled(&sdr, &|i| labels[i].clone(), &|i| p.label(i))));
    Ok(s)
}

fn prefixed(prefix: &str, report: StructureReport) -> StructureReport {
    report
        .laws
        .into_iter()
        .map(|mut l| {
            l.name = format!("{prefix}{}", l.name);
            l
        })
        .collect::<Vec<_>>()
        .into()
}

fn require(cert: Certificate, report: StructureReport) -> Result<Certificate, Output> {
    if report.passed() {
        Ok(cert)
    } else {
        Err(invalid(cert, report))
    }
}

fn harmonic_table(p: &AlgebraPresentation, s: &Splitting, labels: &[String]) -> Table {
    let mut t = Table::new("harmonic");
    for (j, v) in s.harmonic.iter().enumerate() {
        t.row(vec![labels[j].clone(), s.harmonic_degrees[j].to_string()], render_terms_in(v, &|i| p.label(i)));
    }
    t
}

fn render_terms_in(v: &Vector, label: &dyn Fn(usize) -> String) -> String {
    let terms: Vec<_> = v.iter().map(|(i, c)| (label(i), c.clone())).collect();
    render_terms(&terms)
}

fn render_chain(chain: &Chain, gen: &dyn Fn(usize) -> String) -> String {
    let terms: Vec<_> = chain.iter().map(|(w, c)| (render_word(w, gen), c.clone())).collect();
    render_terms(&terms)
}

pub fn cohomology_command(text: &str, splitting: SplittingChoice) -> Output {
    let p = match load(text) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let mut cert = new_certificate("cohomology", &p);
    cert.param("splitting", splitting.name());
    let s = match split(&p, splitting, &mut cert) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let labels = s.labels(&p);
    let mut betti = Table::new("betti");
    for (d, n) in s.betti(&p) {
        betti.row(vec![d.to_string()], n.to_string());
    }
    let mut agree = LawResult::new("betti_rank_agreement");
    match cohomology(&p) {
        Ok(h) => {
            for ((d, a), (_, b)) in s.betti(&p).iter().zip(&h.betti) {
                agree.record((a != b).then(|| crate::report::Witness {
                    inputs: vec![d.to_string()],
                    defect: vec![(format!("rank {b} vs {a}"), sign(1))],
                }));
            }
        }
        Err(e) => agree = agree.fail_with(e.to_string()),
    }
    cert.checks.push(agree);
    cert.tables.push(betti);
    cert.tables.push(harmonic_table(&p, &s, &labels));
    let prod = p.product_or_zero();
    let mut induced = Table::new("induced_product");
    for a in 0..s.harmonic_dim() {
        for b in 0..s.harmonic_dim() {
            let v = s.projector.apply(&prod.apply(&s.harmonic[a], &s.harmonic[b]));
            if !v.is_zero() {
                induced.row(vec![labels[a].clone(), labels[b].clone()], render_terms_in(&v, &|i| labels[i].clone()));
            }
        }
    }
    cert.tables.push(induced);
    Output::from_certificate(cert, Status::VerificationFailed)
}

fn too_large(what: &str, slots: usize, cap: usize) -> Output {
    Output::fail(
        Status::Usage,
        format!("refusing {what}: needs about {slots} coefficient slots, above the limit of {cap}"),
    )
}

/// The bracket used for the L∞ reading: the declared one, else one derived from Δ, else
/// the graded commutator of the product.
pub fn lie_reading(p: &AlgebraPresentation) -> Bracket {
    if let Some(b) = &p.bracket {
        return b.clone();
    }
    if let Ok(b) = bracket_from_delta(p) {
        return b;
    }
    let prod = p.product_or_zero();
    let deg = p.degrees();
    let mut table = Bilinear::new();
    for a in 0..p.dim() {
        for b in 0..p.dim() {
            let mut v = prod.basis(a, b);
            v.add_scaled(&prod.basis(b, a), &-sign(deg[a] * deg[b]));
            if !v.is_zero() {
                table.set(a, b, v);
            }
        }
    }
    Bracket { shift: 0, table }
}

fn omega_table(name: &str, p: &AlgebraPresentation, omega: &Series, gen: &dyn Fn(usize) -> String) -> Table {
    let mut t = Table::new(name);
    for (w, v) in omega {
        t.row(w.iter().map(|&i| gen(i)).collect(), render_terms_in(v, &|i| p.label(i)));
    }
    t
}

fn partial_table(name: &str, t: &Transfer, gen: &dyn Fn(usize) -> String) -> Table {
    let mut table = Table::new(name);
    for (j, img) in t.partial.images.iter().enumerate() {
        if !img.is_empty() {
            table.row(vec![gen(j)], render_chain(img, gen));
        }
    }
    table
}

fn operation_tables(prefix: &str, m: &MultiMap, bound: usize, label: &dyn Fn(usize) -> String) -> Vec<Table> {
    (1..=bound)
        .map(|n| {
            let mut t = Table::new(format!("{prefix}{n}"));
            for (w, v) in m.entries(n) {
                if !v.is_zero() {
                    t.row(w.iter().map(|&i| label(i)).collect(), render_terms_in(v, label));
                }
            }
            t
        })
        .collect()
}

pub fn transfer(text: &str, opts: TransferOptions) -> Output {
    let p = match load(text) {
        Ok(p) => p,
        Err(o) => return o,
    };
    if opts.arity == 0 {
        return Output::fail(Status::Usage, "--arity must be at least 1");
    }
    let mut cert = new_certificate("transfer", &p);
    cert.param("arity", opts.arity);
    cert.param("mode", if opts.mode == Mode::AInfty { "ainfty" } else { "linfty" });
    cert.param("splitting", opts.splitting.name());

    let bracket = (opts.mode == Mode::LInfty).then(|| lie_reading(&p));
    let pre = match &bracket {
        None => check_dga(&p),
        Some(b) => {
            let mut reading = p.clone();
            reading.bracket = Some(b.clone());
            reading.product = None;
            check_dgla(&reading)
        }
    };
    let mut cert = match require(cert, pre) {
        Ok(c) => c,
        Err(o) => return o,
    };

    let s = match split(&p, opts.splitting, &mut cert) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let labels = s.labels(&p);
    let flavor = if bracket.is_some() { Flavor::Symmetric } else { Flavor::Tensor };
    let gen_degrees: Vec<i64> = s.harmonic_degrees.iter().map(|d| 1 - d).collect();
    let slots = p.dim().saturating_mul(CoefficientRing::count(&gen_degrees, flavor, opts.arity));
    if slots > opts.max_slots {
        return too_large("this transfer", slots, opts.max_slots);
    }
    let result = match &bracket {
        None => chen_transfer(&p, &s, opts.arity),
        Some(b) => hain_transfer(&p, &s, &b.table, b.shift, opts.arity),
    };
    let t = match result {
        Ok(t) => t,
        Err(e) => return error_output(e),
    };
    let gen = |j: usize| format!("X{}", labels[j]);
    let label = |i: usize| labels[i].clone();
    cert.checks.extend(transfer_report(&p, &t, bracket.as_ref().map(|b| (b.table.clone(), b.shift))));
    let m = t.infinity();
    let (prefix, identities) = match flavor {
        Flavor::Tensor => ("m", check_stasheff(&m, opts.arity, &label)),
        Flavor::Symmetric => ("l", check_linfty(&m, opts.arity, &label)),
    };
    cert.checks.extend(identities);
    if let Some(b) = &bracket {
        cert.notes.push(format!("bracket shift {}", b.shift));
    }
    cert.tables.push(harmonic_table(&p, &s, &labels));
    cert.tables.push(omega_table("omega", &p, &t.omega, &gen));
    cert.tables.push(partial_table("partial", &t, &gen));
    cert.tables.extend(operation_tables(prefix, &m, opts.arity, &label));
    Output::from_certificate(cert, Status::VerificationFailed)
}

fn error_output(e: Error) -> Output {
    let status = match e {
        Error::Structure(_) => Status::Invalid,
        Error::Verification(_) => Status::VerificationFailed,
        Error::ResourceLimit(_) | Error::Parse(_) => Status::Usage,
    };
    Output::fail(status, e.to_string())
}

/// Accepts `a` or `[a]`.
fn find_label(labels: &[String], given: &str) -> Option<usize> {
    let bare = given.strip_prefix('[').and_then(|g| g.strip_suffix(']')).unwrap_or(given);
    labels.iter().position(|l| l == bare)
}

pub fn massey(text: &str, classes: [&str; 3], splitting: SplittingChoice) -> Output {
    let p = match load(text) {
        Ok(p) => p,
        Err(o) => return o,
    };
    let mut cert = new_certificate("massey", &p);
    cert.param("classes", classes.join(" "));
    cert.param("splitting", splitting.name());
    let mut cert = match require(cert, check_dga(&p)) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let s = match split(&p, splitting, &mut cert) {
        Ok(s) => s,
        Err(o) => return o,
    };
    let labels = s.labels(&p);
    let mut word = Vec::new();
    for c in classes {
        match find_label(&labels, c) {
            Some(i) => word.push(i),
            None => {
                return Output::fail(
                    Status::Usage,
                    format!("unknown cohomology class {c:?}; classes are {}", labels.join(", ")),
                )
            }
        }
    }
    let t = match chen_transfer(&p, &s, 3) {
        Ok(t) => t,
        Err(e) => return error_output(e),
    };
    cert.checks.extend(transfer_report(&p, &t, None));
    let value = t.infinity().eval(&word);
    let rendered = render_terms_in(&value, &|i| labels[i].clone());
    let mut table = Table::new("m3");
    table.row(word.iter().map(|&i| labels[i].clone()).collect(), rendered.clone());
    cert.tables.push(table);
    let mut out = Output::from_certificate(cert, Status::VerificationFailed);
    out.text = format!("m3({}) = {rendered}\n", word.iter().map(|&i| labels[i].clone()).collect::<Vec<_>>().join(", "));
    out
}

pub fn deform(text: &str, opts: DeformOptions) -> Output {
    let p = match load(text) {
        Ok(p) => p,
        Err(o) => return o,
    };
    if opts.word_bound == 0 {
        return Output::fail(Status::Usage, "--word-bound must be at least 1");
    }
    let mut cert = new_certificate("deform", &p);
    cert.param("word-bound", opts.word_bound);
    cert.param("sym-bound", opts.sym_bound);
    cert.param("initiator", opts.initiator.name());
    cert.param("splitting", opts.splitting.name());

    let pre = match opts.initiator {
        InitiatorKind::Associative => check_dga(&p),
        _ => match (&p.bracket, &p.bv_operator) {
            (_, Some(_)) => check_gbv(&p),
            (Some(b), None) if b.shift == -1 => check_gerstenhaber(&p),
            (Some(_), None) => check_poisson(&p),
            (None, None) => {
                return Output::fail(
                    Status::Invalid,
                    "deform needs a bracket or a BV operator (use --initiator a for the associative pipeline)",
                )
            }
        },
    };
    let mut cert = match require(cert, pre) {
        Ok(c) => c,
        Err(o) => return o,
    };
    let s = match split(&p, opts.splitting, &mut cert) {
        Ok(s) => s,
        Err(o) => return o,
    };

    let h = s.harmonic_dim();
    let (flavor, shift) = match opts.initiator {
        InitiatorKind::Associative => (Flavor::Tensor, 0),
        _ => (Flavor::Symmetric, p.bracket.as_ref().map_or(-1, |b| b.shift)),
    };
    let gen_degrees: Vec<i64> = s.harmonic_degrees.iter().map(|d| 1 - d + shift).collect();
    let ring = CoefficientRing::count(&gen_degrees, flavor, opts.sym_bound);
    let big = p.dim().saturating_mul(ring);
    let arity_words = CoefficientRing::count(&s.harmonic_degrees, Flavor::Tensor, opts.word_bound);
    let slots = big.saturating_mul(big).max(h.saturating_mul(ring).saturating_mul(arity_words));
    if slots > opts.max_slots {
        return too_large("this deformation", slots, opts.max_slots);
    }

    let result = match opts.initiator {
        InitiatorKind::Associative => deform_dga(&p, &s, opts.word_bound, opts.sym_bound),
        kind => deform_poisson_gerstenhaber(&p, &s, opts.word_bound, opts.sym_bound, kind),
    };
    let d = match result {
        Ok(d) => d,
        Err(e) => return error_output(e),
    };
    deformation_certificate(&p, &d, &mut cert);
    Output::from_certificate(cert, Status::VerificationFailed)
}

fn deformation_certificate(p: &AlgebraPresentation, d: &Deformation, cert: &mut Certificate) {
    let labels = &d.harmonic_labels;
    let gen = |j: usize| format!("X{}", labels[j]);
    cert.checks.extend(d.report.clone());
    let name = if d.kind == InitiatorKind::Associative { "maa" } else { "maL" };
    cert.notes.push(format!("{name}_n are given in the orientation of the stage-one transfer, so {name}1 = -D"));
    cert.tables.push(partial_table("a.partial", &d.stage_one, &gen));
    if let Some((lie, _)) = &d.lie {
        cert.tables.push(partial_table("L.partial", lie, &gen));
        cert.tables.push(omega_table("L.omega", p, &lie.omega, &gen));
    }
    let small = |i: usize| d.small_label(i);
    let mut table = Table::new("D");
    let dm = d.deformed_differential();
    for j in 0..dm.cols() {
        if !dm.column(j).is_zero() {
            table.row(vec![small(j)], render_terms_in(dm.column(j), &small));
        }
    }
    cert.tables.push(table);
    let mut by_arity: BTreeMap<usize, Table> = BTreeMap::new();
    for n in 1..=d.word_bound {
        let t = by_arity.entry(n).or_insert_with(|| Table::new(format!("{name}{n}")));
        for (w, v) in d.structure.entries(n) {
            if !v.is_zero() {
                t.row(w.iter().map(|&i| small(i)).collect(), render_terms_in(v, &small));
            }
        }
    }
    cert.tables.extend(by_arity.into_values());
}
