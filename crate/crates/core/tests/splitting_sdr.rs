mod common;

use common::random_filtered_complex;
use hptk::algebra::degree_block;
use hptk::corpus;
use hptk::linalg::{solve_exact, LinMap, Vector};
use hptk::splitting::{compute_splitting, gram_matrix, hodge_splitting, make_sdr, verify_sdr, verify_sdr_labelled};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn betti_by_rank(d: &LinMap, degrees: &[i64]) -> Vec<usize> {
    let rank = |k: i64| {
        let (src, dst, block) = degree_block(d, degrees, k);
        if src.is_empty() || dst.is_empty() {
            0
        } else {
            solve_exact(&block).rank()
        }
    };
    (0..=2).map(|k| degrees.iter().filter(|&&x| x == k).count() - rank(k) - rank(k - 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn both_splittings_verify(seed in any::<u64>()) {
        let c = random_filtered_complex(&mut ChaCha8Rng::seed_from_u64(seed), 7);
        let p = c.presentation();
        let expected = betti_by_rank(&c.d, &c.degrees);
        let (hodge, data) = hodge_splitting(&p).unwrap();
        for s in [compute_splitting(&p).unwrap(), hodge] {
            let betti: Vec<usize> = (0..=2).map(|k| s.harmonic_degrees.iter().filter(|&&d| d == k).count()).collect();
            prop_assert_eq!(&betti, &expected);
            let r = s.verify(&p);
            prop_assert!(r.passed(), "{}", r);
            let sdr = verify_sdr(&make_sdr(&p, &s));
            prop_assert!(sdr.passed(), "{}", sdr);
        }
        let hr = data.verify(&p, &hodge_splitting(&p).unwrap().0);
        prop_assert!(hr.passed(), "{}", hr);
    }

    #[test]
    fn standard_retraction_is_sdr(seed in any::<u64>()) {
        let c = random_filtered_complex(&mut ChaCha8Rng::seed_from_u64(seed), 7);
        prop_assert!(verify_sdr(&c.sdr).passed());
    }
}

#[test]
fn h3ce_homotopy_inverts_d_on_exact_part() {
    let p = corpus::load("H3CE");
    let s = compute_splitting(&p).unwrap();
    let ab = Vector::unit(p.index("ab").unwrap());
    let c = Vector::unit(p.index("c").unwrap());
    assert_eq!(s.q.apply(&ab), c);
    assert!(s.q.apply(&c).is_zero());
    assert_eq!(s.labels(&p), ["1", "a", "b", "ac", "bc", "abc"]);
}

#[test]
fn acyclic_model_has_empty_harmonic_part() {
    let p = corpus::load("D2");
    let s = compute_splitting(&p).unwrap();
    assert_eq!(s.harmonic_dim(), 0);
    assert!(verify_sdr(&make_sdr(&p, &s)).passed());
}

#[test]
fn monomial_gram_is_identity() {
    let p = corpus::load("MAT2");
    assert_eq!(gram_matrix(&p).unwrap(), LinMap::identity(p.dim()));
}

#[test]
fn broken_homotopy_is_reported() {
    let p = corpus::load("H3CE");
    let mut sdr = make_sdr(&p, &compute_splitting(&p).unwrap());
    sdr.phi = LinMap::zero(p.dim(), p.dim());
    let r = verify_sdr_labelled(&sdr, &|i| format!("h{i}"), &|i| p.label(i));
    let law = r.law("sdr2").unwrap();
    assert!(!law.passed());
    assert!(law.witnesses.iter().any(|w| w.inputs == ["ab"] || w.inputs == ["c"]));
}
