#![allow(dead_code)]

use hptk::algebra::{AlgebraPresentation, Bilinear, InnerProduct};
use hptk::coalgebra::{basis_words, Chain, Derivation};
use hptk::graded::{int, ratio, Flavor, GradedSpace, Scalar};
use hptk::linalg::{inverse, LinMap, Vector};
use hptk::splitting::SdrData;
use num::One;
use rand::Rng;

/// Random degree-1 derivation on at most three generators with images of word length
/// 1..=3. `density` is the chance that an admissible coefficient is nonzero.
pub fn random_derivation(rng: &mut impl Rng, flavor: Flavor, density: f64) -> Derivation {
    let dim = rng.random_range(1..=3);
    let degrees: Vec<i64> = (0..dim).map(|_| rng.random_range(-1..=2)).collect();
    let words = basis_words(dim, 3, flavor, &degrees);
    let images = (0..dim)
        .map(|j| {
            let mut c = Chain::new();
            for w in &words {
                let d: i64 = w.iter().map(|&i| degrees[i]).sum();
                if d == degrees[j] + 1 && rng.random_bool(density) {
                    let x = *[-2i64, -1, 1, 2].get(rng.random_range(0..4)).unwrap();
                    c.insert(w.clone(), int(x));
                }
            }
            c
        })
        .collect();
    Derivation { degrees, flavor, images }
}

/// Replaces one exact line of a document, panicking if it is absent.
pub fn replace_line(doc: &str, from: &str, to: &str) -> String {
    assert!(doc.lines().any(|l| l == from), "line not found: {from}");
    doc.lines().map(|l| if l == from { to } else { l }).collect::<Vec<_>>().join("\n") + "\n"
}

/// A complex `(V, D)` with `D = P D₀ P⁻¹`: `D₀` pairs basis vectors of equal weight
/// and `P = 1 + N` with `N` strictly raising weight. `t = D − D₀` is then a perturbation
/// of `D₀` raising weight by at least one.
pub struct FilteredComplex {
    pub degrees: Vec<i64>,
    pub weights: Vec<usize>,
    pub d0: LinMap,
    pub d: LinMap,
    /// The standard retraction of `(V, D₀)` onto its unpaired basis vectors.
    pub sdr: SdrData,
}

impl FilteredComplex {
    pub fn perturbation(&self) -> LinMap {
        self.d.sub(&self.d0)
    }

    pub fn presentation(&self) -> AlgebraPresentation {
        let space = GradedSpace::from_degrees("v", &self.degrees);
        let mut p = AlgebraPresentation::new("random", space);
        p.product = Some(Bilinear::new());
        p.differential = Some(self.d.clone());
        p.inner_product = Some(InnerProduct::MonomialOrthonormal);
        p
    }
}

fn small_nonzero(rng: &mut impl Rng) -> Scalar {
    [int(-2), int(-1), int(1), int(2), ratio(1, 2)][rng.random_range(0..5)].clone()
}

pub fn random_filtered_complex(rng: &mut impl Rng, max_dim: usize) -> FilteredComplex {
    let n = rng.random_range(1..=max_dim);
    let degrees: Vec<i64> = (0..n).map(|_| rng.random_range(0..=2)).collect();
    let weights: Vec<usize> = (0..n).map(|_| rng.random_range(0..=2)).collect();
    let mut partner: Vec<Option<usize>> = vec![None; n];
    let mut d0 = LinMap::zero(n, n);
    let mut phi = LinMap::zero(n, n);
    for i in 0..n {
        if partner[i].is_some() || !rng.random_bool(0.6) {
            continue;
        }
        let target = (0..n)
            .find(|&j| j != i && partner[j].is_none() && degrees[j] == degrees[i] + 1 && weights[j] == weights[i]);
        if let Some(j) = target {
            let c = small_nonzero(rng);
            d0.columns[i] = Vector::from_pairs([(j, c.clone())]);
            phi.columns[j] = Vector::from_pairs([(i, -(Scalar::one() / c))]);
            partner[i] = Some(j);
            partner[j] = Some(i);
        }
    }
    let harmonic: Vec<usize> = (0..n).filter(|&i| partner[i].is_none()).collect();
    let h = harmonic.len();
    let nabla = LinMap::from_columns(n, harmonic.iter().map(|&i| Vector::unit(i)).collect());
    let f = LinMap::from_columns(
        h,
        (0..n)
            .map(|i| match harmonic.iter().position(|&k| k == i) {
                Some(k) => Vector::unit(k),
                None => Vector::zero(),
            })
            .collect(),
    );
    let mut p = LinMap::identity(n);
    for i in 0..n {
        for j in 0..n {
            if degrees[i] == degrees[j] && weights[j] > weights[i] && rng.random_bool(0.5) {
                p.columns[i].add_term(j, &small_nonzero(rng));
            }
        }
    }
    let d = p.compose(&d0).compose(&inverse(&p).expect("unipotent"));
    let sdr = SdrData { d_small: LinMap::zero(h, h), d_big: d0.clone(), nabla, f, phi };
    FilteredComplex { degrees, weights, d0, d, sdr }
}
