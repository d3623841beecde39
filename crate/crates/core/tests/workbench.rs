mod common;

use common::replace_line;
use hptk::certificate::Certificate;
use hptk::commands::{self, DeformOptions, Mode, SplittingChoice, Status, TransferOptions};
use hptk::corpus;
use hptk::perturbation::InitiatorKind;

fn cert(out: &commands::Output) -> &Certificate {
    out.certificate.as_ref().expect("certificate")
}

fn rows(out: &commands::Output, table: &str) -> Vec<String> {
    let t = cert(out).table(table).unwrap_or_else(|| panic!("no table {table}"));
    t.rows.iter().map(|(i, v)| format!("{} -> {v}", i.join(" "))).collect()
}

#[test]
fn validate_statuses() {
    for (name, src) in corpus::ALL {
        assert_eq!(commands::validate(src).status, Status::Success, "{name}");
    }
    let broken = format!("{}differential ac -> 1 abc\n", corpus::H3CE);
    let out = commands::validate(&broken);
    assert_eq!(out.status, Status::Invalid);
    assert!(out.text.contains("at (a, c) defect 1 abc"), "{}", out.text);
    assert_eq!(commands::validate("name E\nscalars rational\n").status, Status::Success);
    let out = commands::validate("name E\nscalars rational\nbasis x 1\nproduct x q -> 1 x\n");
    assert_eq!(out.status, Status::Usage);
    assert!(out.text.contains("line 4"));
}

#[test]
fn transfer_tables() {
    let t2 = commands::transfer(corpus::T2, TransferOptions { arity: 4, ..Default::default() });
    assert_eq!(t2.status, Status::Success);
    assert!(rows(&t2, "m2").contains(&"x y -> 1 xy".to_string()));
    assert!(rows(&t2, "m3").is_empty() && rows(&t2, "m4").is_empty());

    let h3 = commands::transfer(corpus::H3CE, TransferOptions { arity: 5, ..Default::default() });
    assert_eq!(h3.status, Status::Success, "{}", h3.text);
    let m3 = rows(&h3, "m3");
    assert!(m3.contains(&"a a b -> -1 ac".to_string()), "{m3:?}");
    assert!(m3.contains(&"a b b -> 1 bc".to_string()), "{m3:?}");

    let lie = commands::transfer(corpus::H3CE, TransferOptions { arity: 3, mode: Mode::LInfty, ..Default::default() });
    assert_eq!(lie.status, Status::Success);
    // H3CE is graded commutative, so its commutator reading is abelian
    assert!(rows(&lie, "l2").is_empty());
    assert!(cert(&lie).checks.law("jacobi_3").is_some());

    let mat = commands::transfer(corpus::MAT2, TransferOptions { arity: 3, mode: Mode::LInfty, ..Default::default() });
    assert_eq!(mat.status, Status::Success);
    assert!(cert(&mat).checks.law("jacobi_3").is_some_and(|l| l.checked > 0));
}

#[test]
fn slot_cap_is_enforced() {
    let out = commands::transfer(corpus::H3CE, TransferOptions { arity: 5, max_slots: 100, ..Default::default() });
    assert_eq!(out.status, Status::Usage);
    let out = commands::deform(corpus::MAT2, DeformOptions { max_slots: 100, ..Default::default() });
    assert_eq!(out.status, Status::Usage);
}

#[test]
fn massey_products() {
    let abb = commands::massey(corpus::H3CE, ["a", "b", "b"], SplittingChoice::Auto);
    assert_eq!(abb.text, "m3(a, b, b) = 1 bc\n");
    let aab = commands::massey(corpus::H3CE, ["[a]", "[a]", "[b]"], SplittingChoice::Hodge);
    assert_eq!(aab.text, "m3(a, a, b) = -1 ac\n");
    let xyx = commands::massey(corpus::T2, ["x", "y", "x"], SplittingChoice::Auto);
    assert_eq!(xyx.text, "m3(x, y, x) = 0\n");
    assert_eq!(commands::massey(corpus::H3CE, ["a", "c", "b"], SplittingChoice::Auto).status, Status::Usage);
}

#[test]
fn deform_pipelines() {
    for src in [corpus::H3GBV, corpus::MAT2] {
        let out = commands::deform(src, DeformOptions::default());
        assert_eq!(out.status, Status::Success, "{}", out.text);
        for t in ["a.partial", "L.partial", "L.omega", "D", "maL1", "maL4"] {
            assert!(cert(&out).table(t).is_some(), "{t}");
        }
    }
    let out = commands::deform(corpus::T2, DeformOptions::default());
    assert_eq!(out.status, Status::Invalid);
    let out =
        commands::deform(corpus::H3CE, DeformOptions { initiator: InitiatorKind::Associative, ..Default::default() });
    assert_eq!(out.status, Status::Success);
}

#[test]
fn zero_bracket_deformation_is_trivial() {
    let doc = format!("{}bracket-shift 0\n", corpus::T2);
    let out = commands::deform(&doc, DeformOptions { word_bound: 3, ..Default::default() });
    assert_eq!(out.status, Status::Success, "{}", out.text);
    assert!(rows(&out, "D").is_empty());
    assert!(rows(&out, "maL3").is_empty());
    let chen = commands::transfer(corpus::T2, TransferOptions { arity: 3, ..Default::default() });
    assert_eq!(rows(&out, "maL2"), rows(&chen, "m2"));
}

#[test]
fn certificates_are_canonical() {
    let noisy = format!("# a comment\n\n{}", corpus::H3CE.replace("basis a 1", "basis   a   1"));
    let a = commands::validate(corpus::H3CE);
    let b = commands::validate(&noisy);
    assert_eq!(cert(&a).render(), cert(&b).render());
    let reordered = replace_line(corpus::T2, "product x y -> 1 xy", "");
    let reordered = replace_line(
        &reordered,
        "inner-product monomial-orthonormal",
        "product x y -> 1 xy\ninner-product monomial-orthonormal",
    );
    assert_eq!(cert(&commands::validate(&reordered)).digest, cert(&commands::validate(corpus::T2)).digest);
    let text = cert(&a).render();
    assert!(text.starts_with("hptk-certificate 1\n"));
    assert!(text.ends_with("verdict pass\n"));
}
