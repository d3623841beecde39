//! Formal power series connections: Chen's inductive construction over `T̄(sℋ^t)`,
//! its Lie version over `S̄(sℋ^t)`, flatness checks, and the twisting cochain.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::algebra::{AlgebraPresentation, Bilinear};
use crate::coalgebra::{
    basis_words, derivation_to_infinity, dualize, extend_coderivation, sort_word, Chain, Coderivation, Derivation,
    MultiMap, Symmetry,
};
use crate::error::{Error, Result};
use crate::graded::{ratio, sign, Flavor, Scalar, Word};
use crate::linalg::{LinMap, Vector};
use crate::report::{LawResult, StructureReport, Witness};
use crate::splitting::Splitting;

/// Truncated element of `𝒜 ⊗ T̄(X)` or `ℒ ⊗ S̄(X)`: word ↦ coefficient in 𝒜.
pub type Series = BTreeMap<Word, Vector>;

pub fn series_add(target: &mut Series, word: Word, v: &Vector, c: &Scalar) {
    if v.is_zero() || c.is_zero() {
        return;
    }
    let e = target.entry(word.clone()).or_default();
    e.add_scaled(v, c);
    if e.is_zero() {
        target.remove(&word);
    }
}

pub fn series_sum(a: &Series, b: &Series, c: &Scalar) -> Series {
    let mut out = a.clone();
    for (w, v) in b {
        series_add(&mut out, w.clone(), v, c);
    }
    out
}

/// Part of a series made of words of exactly the given length.
pub fn length_part(s: &Series, len: usize) -> Series {
    s.iter().filter(|(w, _)| w.len() == len).map(|(w, v)| (w.clone(), v.clone())).collect()
}

pub fn truncate(s: &Series, max_len: usize) -> Series {
    s.iter().filter(|(w, _)| w.len() <= max_len).map(|(w, v)| (w.clone(), v.clone())).collect()
}

/// Arithmetic on truncated series with coefficients in a presented algebra.
pub struct SeriesContext<'a> {
    pub p: &'a AlgebraPresentation,
    pub flavor: Flavor,
    /// 0 for the associative or degree-0 bracket reading, −1 for a Gerstenhaber bracket.
    pub shift: i64,
    pub gen_degrees: Vec<i64>,
    pub max_len: usize,
    degrees: Vec<i64>,
    bracket: Option<Bilinear>,
    differential: LinMap,
}

impl<'a> SeriesContext<'a> {
    pub fn new(
        p: &'a AlgebraPresentation,
        flavor: Flavor,
        bracket: Option<(Bilinear, i64)>,
        gen_degrees: Vec<i64>,
        max_len: usize,
    ) -> Self {
        let shift = bracket.as_ref().map_or(0, |b| b.1);
        Self {
            p,
            flavor,
            shift,
            gen_degrees,
            max_len,
            degrees: p.degrees(),
            bracket: bracket.map(|b| b.0),
            differential: p.differential_or_zero(),
        }
    }

    /// Degree used for signs: the algebra degree, shifted for a Gerstenhaber bracket.
    fn coef_degree(&self, k: usize) -> i64 {
        self.degrees[k] - self.shift
    }

    fn word_degree(&self, w: &[usize]) -> i64 {
        w.iter().map(|&i| self.gen_degrees[i]).sum()
    }

    fn join(&self, v: &[usize], w: &[usize]) -> Option<(Word, Scalar)> {
        if v.len() + w.len() > self.max_len {
            return None;
        }
        let mut j = v.to_vec();
        j.extend_from_slice(w);
        match self.flavor {
            Flavor::Tensor => Some((j, Scalar::one())),
            Flavor::Symmetric => sort_word(&j, &self.gen_degrees, Symmetry::Symmetric),
        }
    }

    /// `(αv)(βw) = (−1)^{|v||β|}(αβ)(vw)`.
    pub fn mul(&self, a: &Series, b: &Series) -> Series {
        let prod = self.p.product_or_zero();
        self.combine(a, b, &prod, false)
    }

    /// `[αv, βw] = (−1)^{|v||β|}[α, β](v ⊙ w)`, degrees of `β` in the Lie grading.
    pub fn bracket(&self, a: &Series, b: &Series) -> Series {
        match &self.bracket {
            Some(br) => self.combine(a, b, br, true),
            None => Series::new(),
        }
    }

    fn combine(&self, a: &Series, b: &Series, op: &Bilinear, lie: bool) -> Series {
        let mut out = Series::new();
        for (v, alpha) in a {
            let dv = self.word_degree(v);
            for (w, beta) in b {
                let Some((vw, s)) = self.join(v, w) else { continue };
                for (k, bk) in beta.iter() {
                    let dk = if lie { self.coef_degree(k) } else { self.degrees[k] };
                    let value = op.apply(alpha, &Vector::unit(k));
                    series_add(&mut out, vw.clone(), &value, &(bk * &s * sign(dv * dk)));
                }
            }
        }
        out
    }

    /// `𝔡(αw) = (𝔡α)w`.
    pub fn d(&self, a: &Series) -> Series {
        let mut out = Series::new();
        for (w, alpha) in a {
            series_add(&mut out, w.clone(), &self.differential.apply(alpha), &Scalar::one());
        }
        out
    }

    /// `∂(αw) = (−1)^{|α|} α ∂w`.
    pub fn partial(&self, a: &Series, d: &Derivation) -> Series {
        let mut out = Series::new();
        for (w, alpha) in a {
            let image = d.apply_word(w, self.max_len);
            for (k, c) in alpha.iter() {
                let s = c * sign(self.coef_degree(k));
                for (w2, c2) in &image {
                    series_add(&mut out, w2.clone(), &Vector::unit(k), &(&s * c2));
                }
            }
        }
        out
    }

    /// `∂ω + 𝔡ω + ω·ω`, or `∂ω + 𝔡ω + ½[ω, ω]` in the Lie flavor.
    pub fn curvature(&self, omega: &Series, d: &Derivation) -> Series {
        let mut out = series_sum(&self.partial(omega, d), &self.d(omega), &Scalar::one());
        match self.flavor {
            Flavor::Tensor => out = series_sum(&out, &self.mul(omega, omega), &Scalar::one()),
            Flavor::Symmetric => out = series_sum(&out, &self.bracket(omega, omega), &ratio(1, 2)),
        }
        out
    }

    pub fn render(&self, s: &Series) -> Vec<(String, String)> {
        s.iter()
            .map(|(w, v)| (render_word(w, &|i| format!("X{i}")), crate::algebra::render_vector(self.p, v)))
            .collect()
    }
}

pub fn render_word(w: &[usize], label: &dyn Fn(usize) -> String) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter().map(|&i| label(i)).collect::<Vec<_>>().join(" ")
}

/// Output of an inductive transfer.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub flavor: Flavor,
    pub shift: i64,
    pub bound: usize,
    pub harmonic: Vec<Vector>,
    /// `|α_j|` (minus the bracket shift in the Lie flavor).
    pub harmonic_degrees: Vec<i64>,
    pub omega: Series,
    pub partial: Derivation,
}

impl Transfer {
    pub fn gen_degrees(&self) -> Vec<i64> {
        self.partial.degrees.clone()
    }

    /// The transferred `m_n` (tensor flavor) or `l_n` (symmetric flavor) on ℋ.
    pub fn infinity(&self) -> MultiMap {
        derivation_to_infinity(&self.partial)
    }

    pub fn context<'a>(&self, p: &'a AlgebraPresentation, bracket: Option<(Bilinear, i64)>) -> SeriesContext<'a> {
        SeriesContext::new(p, self.flavor, bracket, self.gen_degrees(), self.bound)
    }
}

fn first_order(s: &Splitting) -> Series {
    s.harmonic.iter().enumerate().map(|(j, a)| (vec![j], a.clone())).collect()
}

fn induction(
    p: &AlgebraPresentation,
    s: &Splitting,
    flavor: Flavor,
    bracket: Option<(Bilinear, i64)>,
    bound: usize,
) -> Result<Transfer> {
    if bound == 0 {
        return Err(Error::Parse("truncation order must be at least 1".into()));
    }
    let shift = bracket.as_ref().map_or(0, |b| b.1);
    let harmonic_degrees: Vec<i64> = s.harmonic_degrees.iter().map(|d| d - shift).collect();
    let gen_degrees: Vec<i64> = harmonic_degrees.iter().map(|d| 1 - d).collect();
    let ctx = SeriesContext::new(p, flavor, bracket, gen_degrees.clone(), bound);
    let mut omega = first_order(s);
    let mut partial = Derivation::zero(gen_degrees.clone(), flavor);
    let d = p.differential_or_zero();
    for k in 2..=bound {
        let gamma = length_part(&ctx.curvature(&omega, &partial), k);
        for (w, g) in &gamma {
            if !d.apply(g).is_zero() {
                return Err(Error::Verification(format!(
                    "step {k}: Γ is not 𝔡-closed at word {}",
                    render_word(w, &|i| format!("X{i}"))
                )));
            }
        }
        for (w, g) in &gamma {
            let coords = s.projector.apply(g);
            for (j, c) in coords.iter() {
                let coef = -(c * sign(harmonic_degrees[j]));
                let e = partial.images[j].entry(w.clone()).or_insert_with(Scalar::zero);
                *e += coef;
            }
            let q = s.q.apply(g);
            series_add(&mut omega, w.clone(), &q, &-Scalar::one());
        }
        for img in partial.images.iter_mut() {
            img.retain(|_, c| !c.is_zero());
        }
    }
    Ok(Transfer { flavor, shift, bound, harmonic: s.harmonic.clone(), harmonic_degrees, omega, partial })
}

/// Chen's construction on a DGA: `(∂, ω)` to word length `bound`.
pub fn chen_transfer(p: &AlgebraPresentation, s: &Splitting, bound: usize) -> Result<Transfer> {
    induction(p, s, Flavor::Tensor, None, bound)
}

/// The Lie version over `S̄(sℋ^t)` for a bracket of the given shift.
pub fn hain_transfer(
    p: &AlgebraPresentation,
    s: &Splitting,
    bracket: &Bilinear,
    shift: i64,
    bound: usize,
) -> Result<Transfer> {
    induction(p, s, Flavor::Symmetric, Some((bracket.clone(), shift)), bound)
}

/// Re-checks (a) `ω ≡ Σ α_j X^j mod I²`, (b) flatness mod `I^{N+1}`, the curvature being
/// 𝔡-closed, and (d) `∂² ≡ 0 mod I^{N+1}` with `∂I ⊆ I²`.
pub fn verify_flatness(p: &AlgebraPresentation, t: &Transfer, bracket: Option<(Bilinear, i64)>) -> StructureReport {
    let ctx = t.context(p, bracket);
    let word_label = |w: &[usize]| render_word(w, &|i| format!("X{i}"));
    let label = |i: usize| p.label(i);
    let mut report = StructureReport::new();

    let mut linear = LawResult::new("omega_linear_part");
    for (j, a) in t.harmonic.iter().enumerate() {
        let got = t.omega.get(&vec![j]).cloned().unwrap_or_default();
        let defect = &got - a;
        linear.record((!defect.is_zero()).then(|| Witness::new(vec![format!("X{j}")], &defect, label)));
    }
    let extra = t.omega.keys().filter(|w| w.is_empty() || (w.len() == 1 && w[0] >= t.harmonic.len())).count();
    if extra > 0 {
        linear = linear.fail_with("ω has terms outside the ideal I");
    }
    report.push(linear);

    let curvature = ctx.curvature(&t.omega, &t.partial);
    let mut flat = LawResult::new(match t.flavor {
        Flavor::Tensor => "flatness",
        Flavor::Symmetric => "lie_flatness",
    });
    for (w, v) in &curvature {
        flat.record(Some(Witness::new(vec![word_label(w)], v, label)));
    }
    let words = basis_words(t.harmonic.len(), t.bound, t.flavor, &t.gen_degrees()).len();
    flat.checked = flat.checked.max(words);
    report.push(flat);

    let mut closed = LawResult::new("curvature_closed");
    for (w, v) in ctx.d(&curvature) {
        closed.record(Some(Witness::new(vec![word_label(&w)], &v, label)));
    }
    closed.checked = closed.checked.max(words);
    report.push(closed);

    let mut sq = LawResult::new("partial_squared");
    for (j, img) in t.partial.square_on_generators(t.bound).iter().enumerate() {
        let defect: Vec<(String, Scalar)> = img.iter().map(|(w, c)| (word_label(w), c.clone())).collect();
        sq.checked += 1;
        if !defect.is_empty() {
            sq.failures += 1;
            sq.witnesses.push(Witness { inputs: vec![format!("X{j}")], defect });
        }
    }
    report.push(sq);

    let mut raises = LawResult::new("partial_raises_length");
    for (j, img) in t.partial.images.iter().enumerate() {
        let low: Vec<(String, Scalar)> =
            img.iter().filter(|(w, _)| w.len() < 2).map(|(w, c)| (word_label(w), c.clone())).collect();
        raises.checked += 1;
        if !low.is_empty() {
            raises.failures += 1;
            raises.witnesses.push(Witness { inputs: vec![format!("X{j}")], defect: low });
        }
    }
    report.push(raises);
    report
}

/// A twisting cochain `τ : T^c(s⁻¹ℋ) → 𝒜` stored on words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistingCochain {
    /// Degrees of the letters `e_j = s⁻¹α_j`.
    pub degrees: Vec<i64>,
    pub values: BTreeMap<Word, Vector>,
    pub bound: usize,
}

/// `τ(e_I) = −(−1)^{Σ_{a<b}|e_{i_a}||e_{i_b}|} ω_I`, the coefficient of `X^I` in ω read
/// through the pairing.
pub fn twisting_cochain(t: &Transfer) -> TwistingCochain {
    let degrees: Vec<i64> = t.harmonic_degrees.iter().map(|d| d - 1).collect();
    let values = t
        .omega
        .iter()
        .map(|(w, v)| {
            let mut parity = 0;
            for a in 0..w.len() {
                for b in a + 1..w.len() {
                    parity += degrees[w[a]] * degrees[w[b]];
                }
            }
            (w.clone(), v.scaled(&-sign(parity)))
        })
        .collect();
    TwistingCochain { degrees, values, bound: t.bound }
}

/// Verifies `τb + 𝔡τ = τ ∪ τ` on every word of length `≤ bound`, with `b` dual to ∂.
pub fn verify_twisting_cochain(p: &AlgebraPresentation, tau: &TwistingCochain, b: &Coderivation) -> LawResult {
    let d = p.differential_or_zero();
    let prod = p.product_or_zero();
    let eval = |w: &[usize]| tau.values.get(w).cloned().unwrap_or_default();
    let words = basis_words(tau.degrees.len(), tau.bound, Flavor::Tensor, &tau.degrees);
    let defects = crate::par_map(&words, |w: &Word| {
        let mut defect = d.apply(&eval(w));
        let bw: Chain = extend_coderivation(b, w);
        for (w2, c) in &bw {
            defect.add_scaled(&eval(w2), c);
        }
        let mut prefix = 0i64;
        for k in 1..w.len() {
            prefix += tau.degrees[w[k - 1]];
            let cup = prod.apply(&eval(&w[..k]), &eval(&w[k..]));
            defect.add_scaled(&cup, &-sign(prefix));
        }
        defect
    });
    let mut law = LawResult::new("twisting_cochain");
    for (w, defect) in words.iter().zip(defects) {
        let inputs = w.iter().map(|&i| format!("e{i}")).collect();
        law.record((!defect.is_zero()).then(|| Witness::new(inputs, &defect, |i| p.label(i))));
    }
    law
}

/// Transfer plus all of its verifications, in one report.
pub fn transfer_report(p: &AlgebraPresentation, t: &Transfer, bracket: Option<(Bilinear, i64)>) -> StructureReport {
    let mut report = verify_flatness(p, t, bracket);
    if t.flavor == Flavor::Tensor {
        let tau = twisting_cochain(t);
        report.push(verify_twisting_cochain(p, &tau, &dualize(&t.partial)));
    }
    report
}
