#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::BTreeMap;

use common::random_derivation;

use hptk::coalgebra::{
    basis_words, check_linfty, check_stasheff, coderivation_square, derivation_to_infinity, dualize,
    infinity_to_derivation, undualize, Derivation, MultiMap, Symmetry,
};
use hptk::graded::{int, sign, Flavor, Scalar};
use hptk::linalg::Vector;
use num::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn derivation_strategy(flavor: Flavor) -> impl Strategy<Value = Derivation> {
    any::<u64>().prop_map(move |seed| random_derivation(&mut ChaCha8Rng::seed_from_u64(seed), flavor, 0.6))
}

fn multiplicity(word: &[usize], flavor: Flavor) -> Scalar {
    if flavor == Flavor::Tensor {
        return Scalar::one();
    }
    let mut counts = BTreeMap::new();
    for &w in word {
        *counts.entry(w).or_insert(0i64) += 1;
    }
    counts.values().map(|&k| (1..=k).product::<i64>()).map(int).product()
}

fn pair_sign(word: &[usize], wdeg: &[i64]) -> Scalar {
    let mut p = 0;
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            p += wdeg[word[a]] * wdeg[word[b]];
        }
    }
    sign(p)
}

/// `b²` read through the pairing equals `∂²` up to one global sign.
fn square_matches(d: &Derivation) -> Result<(), TestCaseError> {
    let b = dualize(d);
    let sq = coderivation_square(&b, 3).map_err(|e| TestCaseError::fail(format!("{e:?}")))?;
    let d2 = d.square_on_generators(3);
    let wdeg: Vec<i64> = d.degrees.iter().map(|x| -x).collect();
    let mut global: Option<Scalar> = None;
    for w in basis_words(d.degrees.len(), 3, d.flavor, &d.degrees) {
        let lhs = sq.ops.eval(&w);
        for j in 0..d.degrees.len() {
            let c = d2[j].get(&w).cloned().unwrap_or_else(Scalar::zero);
            let rhs = c * pair_sign(&w, &wdeg) * multiplicity(&w, d.flavor);
            let l = lhs.get(j);
            if l.is_zero() && rhs.is_zero() {
                continue;
            }
            prop_assert!(!rhs.is_zero() && !l.is_zero(), "word {w:?} gen {j}: {l} vs {rhs}");
            let ratio = l / rhs;
            prop_assert!(ratio == int(1) || ratio == int(-1));
            match &global {
                None => global = Some(ratio),
                Some(g) => prop_assert_eq!(g, &ratio),
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_square_is_dual(d in derivation_strategy(Flavor::Tensor)) {
        square_matches(&d)?;
    }

    #[test]
    fn symmetric_square_is_dual(d in derivation_strategy(Flavor::Symmetric)) {
        square_matches(&d)?;
    }

    #[test]
    fn dualize_round_trips(d in derivation_strategy(Flavor::Tensor)) {
        prop_assert_eq!(undualize(&dualize(&d)), d.clone());
        prop_assert_eq!(infinity_to_derivation(&derivation_to_infinity(&d)), d);
    }

    #[test]
    fn dualize_round_trips_symmetric(d in derivation_strategy(Flavor::Symmetric)) {
        prop_assert_eq!(undualize(&dualize(&d)), d.clone());
        prop_assert_eq!(infinity_to_derivation(&derivation_to_infinity(&d)), d);
    }

    #[test]
    fn stasheff_agrees_with_b_squared(d in derivation_strategy(Flavor::Tensor)) {
        let m = derivation_to_infinity(&d);
        let r = check_stasheff(&m, 3, &|i| format!("v{i}"));
        prop_assert!(r.law("dictionary_agreement").unwrap().passed(), "{}", r);
    }

    #[test]
    fn jacobi_agrees_with_b_squared(d in derivation_strategy(Flavor::Symmetric)) {
        let l = derivation_to_infinity(&d);
        prop_assert_eq!(l.symmetry, Symmetry::Antisymmetric);
        let r = check_linfty(&l, 3, &|i| format!("v{i}"));
        prop_assert!(r.law("dictionary_agreement").unwrap().passed(), "{}", r);
    }

    #[test]
    fn symmetric_corestrictions_are_invariant(d in derivation_strategy(Flavor::Symmetric)) {
        let b = dualize(&d);
        let wdeg = b.ops.degrees.clone();
        for w in basis_words(wdeg.len(), 3, Flavor::Tensor, &wdeg) {
            for i in 0..w.len().saturating_sub(1) {
                let mut s = w.clone();
                s.swap(i, i + 1);
                let k = sign(wdeg[w[i]] * wdeg[w[i + 1]]);
                prop_assert_eq!(b.ops.eval(&w), b.ops.eval(&s).scaled(&k));
            }
        }
    }
}

#[test]
fn multimap_zero_is_empty() {
    let m = MultiMap::new(vec![0], Symmetry::None);
    assert!(m.is_zero());
    assert!(m.eval_vectors(&[Vector::unit(0)]).is_zero());
}
