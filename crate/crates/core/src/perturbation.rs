//! The basic perturbation lemma, coefficient extension of SDR data, tree-formula transfer
//! across a general SDR, and the two deformation pipelines built from them.

use std::collections::HashMap;
use std::sync::Mutex;

use num::One;

use crate::algebra::{bracket_from_delta, AlgebraPresentation, Bilinear, Bracket};
use crate::coalgebra::{
    basis_words, dictionary_sign, sort_word, stasheff_on_words, Chain, Derivation, MultiMap, Operations, Symmetry,
};
use crate::error::{Error, Result};
use crate::graded::{sign, word_degree, Flavor, Scalar, Word};
use crate::linalg::{LinMap, Vector};
use crate::report::{LawResult, StructureReport, Witness};
use crate::splitting::{make_sdr, verify_sdr_labelled, SdrData, Splitting};
use crate::transfer::{chen_transfer, hain_transfer, render_word, verify_flatness, Series, Transfer};

/// Truncated `T̄(X)` or `S̄(X)` with the empty word adjoined, as an algebra of coefficients.
#[derive(Clone, Debug)]
pub struct CoefficientRing {
    pub flavor: Flavor,
    pub gen_degrees: Vec<i64>,
    pub bound: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl CoefficientRing {
    pub fn new(gen_degrees: Vec<i64>, flavor: Flavor, bound: usize) -> Self {
        let mut words = vec![Word::new()];
        words.extend(basis_words(gen_degrees.len(), bound, flavor, &gen_degrees));
        let index = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
        Self { flavor, gen_degrees, bound, words, index }
    }

    /// Number of canonical words of length `≤ bound` over `gens` generators, computed
    /// without building them.
    pub fn count(gen_degrees: &[i64], flavor: Flavor, bound: usize) -> usize {
        let n = gen_degrees.len();
        match flavor {
            Flavor::Tensor => {
                (0..=bound).fold((0usize, 1usize), |(acc, pw), _| (acc.saturating_add(pw), pw.saturating_mul(n))).0
            }
            Flavor::Symmetric => {
                // coefficients of Π_even 1/(1-x) Π_odd (1+x) up to x^bound
                let mut poly = vec![0usize; bound + 1];
                poly[0] = 1;
                for &d in gen_degrees {
                    if d.rem_euclid(2) == 1 {
                        for k in (1..=bound).rev() {
                            poly[k] = poly[k].saturating_add(poly[k - 1]);
                        }
                    } else {
                        for k in 1..=bound {
                            poly[k] = poly[k].saturating_add(poly[k - 1]);
                        }
                    }
                }
                poly.iter().fold(0usize, |a, &b| a.saturating_add(b))
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.words.len()
    }

    pub fn word(&self, r: usize) -> &Word {
        &self.words[r]
    }

    pub fn degree(&self, r: usize) -> i64 {
        word_degree(&self.words[r], &self.gen_degrees)
    }

    pub fn index_of(&self, w: &[usize]) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Product of two basis words; `None` past the bound or when the product vanishes.
    pub fn mul(&self, r: usize, s: usize) -> Option<(usize, Scalar)> {
        let (a, b) = (&self.words[r], &self.words[s]);
        if a.len() + b.len() > self.bound {
            return None;
        }
        let mut joined = a.clone();
        joined.extend_from_slice(b);
        let (w, c) = match self.flavor {
            Flavor::Tensor => (joined, Scalar::one()),
            Flavor::Symmetric => sort_word(&joined, &self.gen_degrees, Symmetry::Symmetric)?,
        };
        Some((self.index[&w], c))
    }

    /// A chain of canonical words as a coordinate vector, dropping words past the bound.
    pub fn vector(&self, chain: &Chain) -> Vector {
        Vector::from_pairs(chain.iter().filter_map(|(w, c)| self.index_of(w).map(|i| (i, c.clone()))))
    }
}

/// `V ⊗ R` with basis `(v, w)` ordered by `v` first.
#[derive(Clone, Debug)]
pub struct TensorSpace {
    pub left_degrees: Vec<i64>,
    pub ring: CoefficientRing,
}

impl TensorSpace {
    pub fn new(left_degrees: Vec<i64>, ring: CoefficientRing) -> Self {
        Self { left_degrees, ring }
    }

    pub fn dim(&self) -> usize {
        self.left_degrees.len() * self.ring.dim()
    }

    pub fn index(&self, left: usize, word: usize) -> usize {
        left * self.ring.dim() + word
    }

    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.ring.dim(), i % self.ring.dim())
    }

    pub fn degrees(&self) -> Vec<i64> {
        (0..self.dim())
            .map(|i| {
                let (a, r) = self.split(i);
                self.left_degrees[a] + self.ring.degree(r)
            })
            .collect()
    }

    pub fn word_len(&self, i: usize) -> usize {
        self.ring.word(self.split(i).1).len()
    }

    /// `v` or `v[X.. X..]`.
    pub fn label(&self, i: usize, left: &dyn Fn(usize) -> String, gen: &dyn Fn(usize) -> String) -> String {
        let (a, r) = self.split(i);
        let w = self.ring.word(r);
        if w.is_empty() {
            left(a)
        } else {
            format!("{}[{}]", left(a), render_word(w, gen))
        }
    }
}

/// `A ⊗ R` with `(αv)(βw) = (−1)^{|v||β|}(αβ)(vw)`.
#[derive(Clone, Debug)]
pub struct TensorAlgebra {
    pub space: TensorSpace,
    pub product: Bilinear,
}

impl TensorAlgebra {
    pub fn mul_basis(&self, x: usize, y: usize) -> Vector {
        let ring = &self.space.ring;
        let ((a, r), (b, s)) = (self.space.split(x), self.space.split(y));
        let Some((rs, c)) = ring.mul(r, s) else { return Vector::zero() };
        let c = c * sign(ring.degree(r) * self.space.left_degrees[b]);
        let ab = self.product.basis(a, b);
        Vector::from_pairs(ab.iter().map(|(k, e)| (self.space.index(k, rs), e * &c)))
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, ci) in x.iter() {
            for (j, cj) in y.iter() {
                out.add_scaled(&self.mul_basis(i, j), &(ci * cj));
            }
        }
        out
    }
}

/// `g ⊗ 1` for `g : V → W`.
pub fn extend_coefficientwise(map: &LinMap, ring_dim: usize) -> LinMap {
    let mut cols = Vec::with_capacity(map.cols() * ring_dim);
    for j in 0..map.cols() {
        for r in 0..ring_dim {
            cols.push(Vector::from_pairs(map.column(j).iter().map(|(i, c)| (i * ring_dim + r, c.clone()))));
        }
    }
    LinMap::from_columns(map.rows * ring_dim, cols)
}

/// SDR data tensored with a coefficient ring. The algebra factor sits on the left, so
/// every map extends without signs.
pub fn tensor_sdr(sdr: &SdrData, ring_dim: usize) -> SdrData {
    SdrData {
        d_small: extend_coefficientwise(&sdr.d_small, ring_dim),
        d_big: extend_coefficientwise(&sdr.d_big, ring_dim),
        nabla: extend_coefficientwise(&sdr.nabla, ring_dim),
        f: extend_coefficientwise(&sdr.f, ring_dim),
        phi: extend_coefficientwise(&sdr.phi, ring_dim),
    }
}

/// `α ⊗ w ↦ (−1)^{|α| − shift} α ⊗ ∂w`.
pub fn derivation_initiator(space: &TensorSpace, shift: i64, d: &Derivation) -> LinMap {
    let ring = &space.ring;
    let cols = (0..space.dim())
        .map(|i| {
            let (a, r) = space.split(i);
            let image = ring.vector(&d.apply_word(ring.word(r), ring.bound));
            let s = sign(space.left_degrees[a] - shift);
            Vector::from_pairs(image.iter().map(|(w, c)| (space.index(a, w), c * &s)))
        })
        .collect();
    LinMap::from_columns(space.dim(), cols)
}

/// `β ⊗ w ↦ Σ (−1)^{|v|(|β| − shift)} [α, β] ⊗ (v ⊙ w)` over the terms `αv` of `ω`.
pub fn adjoint_initiator(space: &TensorSpace, bracket: &Bilinear, shift: i64, omega: &Series) -> LinMap {
    let ring = &space.ring;
    let terms: Vec<(usize, i64, &Vector)> = omega
        .iter()
        .filter_map(|(v, alpha)| ring.index_of(v).map(|iv| (iv, word_degree(v, &ring.gen_degrees), alpha)))
        .collect();
    let cols = (0..space.dim())
        .map(|i| {
            let (b, r) = space.split(i);
            let lie_b = space.left_degrees[b] - shift;
            let mut out = Vector::zero();
            for &(iv, dv, alpha) in &terms {
                let Some((vw, c)) = ring.mul(iv, r) else { continue };
                let value = bracket.apply(alpha, &Vector::unit(b));
                let c = c * sign(dv * lie_b);
                for (k, e) in value.iter() {
                    out.add_term(space.index(k, vw), &(e * &c));
                }
            }
            out
        })
        .collect();
    LinMap::from_columns(space.dim(), cols)
}

/// Preconditions of the perturbation: degree +1, strictly raising word length, a
/// derivation of the product, and `(d + t)² = 0`.
pub fn check_initiator(
    algebra: &TensorAlgebra,
    d_big: &LinMap,
    t: &LinMap,
    label: &dyn Fn(usize) -> String,
) -> StructureReport {
    let space = &algebra.space;
    let n = space.dim();
    let deg = space.degrees();
    let mut report = StructureReport::new();

    let mut degree = LawResult::new("initiator_degree");
    let mut raises = LawResult::new("initiator_raises_length");
    for j in 0..n {
        let col = t.column(j);
        let bad_degree = col.filtered(|i| deg[i] != deg[j] + 1);
        degree.record((!bad_degree.is_zero()).then(|| Witness::new(vec![label(j)], &bad_degree, label)));
        let short = col.filtered(|i| space.word_len(i) <= space.word_len(j));
        raises.record((!short.is_zero()).then(|| Witness::new(vec![label(j)], &short, label)));
    }
    report.push(degree);
    report.push(raises);

    let ids: Vec<usize> = (0..n).collect();
    let rows: Vec<Vec<(usize, Vector)>> = crate::par_map(&ids, |&x| {
        let tx = t.column(x);
        let mut bad = Vec::new();
        for y in 0..n {
            if space.word_len(x) + space.word_len(y) > space.ring.bound {
                continue;
            }
            let mut defect = t.apply(&algebra.mul_basis(x, y));
            defect.add_scaled(&algebra.mul(tx, &Vector::unit(y)), &-Scalar::one());
            defect.add_scaled(&algebra.mul(&Vector::unit(x), t.column(y)), &-sign(deg[x]));
            if !defect.is_zero() {
                bad.push((y, defect));
            }
        }
        bad
    });
    let mut derivation = LawResult::new("initiator_derivation");
    for (x, bad) in rows.into_iter().enumerate() {
        derivation.checked += n;
        derivation.failures += bad.len();
        for (y, defect) in bad {
            if derivation.witnesses.len() < crate::report::WITNESS_CAP {
                derivation.witnesses.push(Witness::new(vec![label(x), label(y)], &defect, label));
            }
        }
    }
    report.push(derivation);

    let total = d_big.add(t);
    let mut square = LawResult::new("perturbed_square_zero");
    for j in 0..n {
        let v = total.apply(total.column(j));
        square.record((!v.is_zero()).then(|| Witness::new(vec![label(j)], &v, label)));
    }
    report.push(square);
    report
}

/// The corrections `t_n = (tφ)^{n−1} t` and their sum `Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BplState {
    pub terms: Vec<LinMap>,
    pub sigma: LinMap,
}

impl BplState {
    pub fn stages(&self) -> usize {
        self.terms.len()
    }

    /// `Σ_n = t_1 + ⋯ + t_n`.
    pub fn partial_sum(&self, n: usize) -> LinMap {
        let dim = self.sigma.rows;
        self.terms.iter().take(n).fold(LinMap::zero(dim, dim), |acc, t| acc.add(t))
    }
}

#[derive(Clone, Debug)]
pub struct BplOutput {
    pub sdr: SdrData,
    pub state: BplState,
}

/// Runs the perturbation recursion until `t_{n+1} = 0`; more than `max_stages` nonzero
/// corrections means the perturbation is not nilpotent at this truncation.
pub fn run_bpl(sdr: &SdrData, t: &LinMap, max_stages: usize) -> Result<BplOutput> {
    let dim = sdr.d_big.cols();
    let t_phi = t.compose(&sdr.phi);
    let mut terms = Vec::new();
    let mut current = t.clone();
    while !current.is_zero() {
        if terms.len() == max_stages {
            return Err(Error::Verification(format!("perturbation did not stabilize after {max_stages} stages")));
        }
        let next = t_phi.compose(&current);
        terms.push(current);
        current = next;
    }
    let sigma = terms.iter().fold(LinMap::zero(dim, dim), |acc, x| acc.add(x));
    let sigma_nabla = sigma.compose(&sdr.nabla);
    let sigma_phi = sigma.compose(&sdr.phi);
    let out = SdrData {
        d_small: sdr.d_small.add(&sdr.f.compose(&sigma_nabla)),
        d_big: sdr.d_big.add(t),
        nabla: sdr.nabla.add(&sdr.phi.compose(&sigma_nabla)),
        f: sdr.f.add(&sdr.f.compose(&sigma_phi)),
        phi: sdr.phi.add(&sdr.phi.compose(&sigma_phi)),
    };
    Ok(BplOutput { sdr: out, state: BplState { terms, sigma } })
}

/// The n-th correction raises word length by at least n, so the stage-n maps agree with
/// the stage-(n−1) maps below word length n.
pub fn stabilization_law(
    state: &BplState,
    word_len: &dyn Fn(usize) -> usize,
    label: &dyn Fn(usize) -> String,
) -> LawResult {
    let mut law = LawResult::new("stabilization");
    for (k, tn) in state.terms.iter().enumerate() {
        let n = k + 1;
        for j in 0..tn.cols() {
            let low = tn.column(j).filtered(|i| word_len(i) < word_len(j) + n);
            law.record((!low.is_zero()).then(|| Witness::new(vec![format!("t{n}"), label(j)], &low, label)));
        }
    }
    law
}

/// SDR identities of the perturbed data plus `𝒟_M² = 0`.
pub fn verify_bpl(out: &BplOutput, small: &dyn Fn(usize) -> String, big: &dyn Fn(usize) -> String) -> StructureReport {
    let mut report = verify_sdr_labelled(&out.sdr, small, big);
    let d = &out.sdr.d_small;
    let mut sq = LawResult::new("small_square_zero");
    for j in 0..d.cols() {
        let v = d.apply(d.column(j));
        sq.record((!v.is_zero()).then(|| Witness::new(vec![small(j)], &v, small)));
    }
    report.push(sq);
    report
}

/// Homotopy transfer of the product of a DGA across arbitrary SDR data by the tree
/// formula, evaluated lazily on words of the small space. `m_1` is the small differential
/// and `m_2` the product induced through `(∇, f)`.
pub struct TreeTransfer<'a> {
    algebra: &'a TensorAlgebra,
    sdr: &'a SdrData,
    big_degrees: Vec<i64>,
    small_degrees: Vec<i64>,
    memo: Mutex<HashMap<Word, Vector>>,
}

impl<'a> TreeTransfer<'a> {
    pub fn new(algebra: &'a TensorAlgebra, sdr: &'a SdrData, small_degrees: Vec<i64>) -> Self {
        Self { algebra, sdr, big_degrees: algebra.space.degrees(), small_degrees, memo: Mutex::new(HashMap::new()) }
    }

    /// `b₂(x, y) = (−1)^{|x|} xy`.
    fn b2(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, c) in x.iter() {
            for (j, e) in y.iter() {
                out.add_scaled(&self.algebra.mul_basis(i, j), &(c * e * sign(self.big_degrees[i])));
            }
        }
        out
    }

    /// `i_1 = ∇`, `i_n = φ C_n`.
    fn lift(&self, word: &[usize]) -> Vector {
        if word.len() == 1 {
            return self.sdr.nabla.column(word[0]).clone();
        }
        self.sdr.phi.apply(&self.tree(word))
    }

    /// `C_n = Σ_{a+b=n} b₂(i_a, i_b)`.
    fn tree(&self, word: &[usize]) -> Vector {
        if let Some(v) = self.memo.lock().unwrap().get(word) {
            return v.clone();
        }
        let mut out = Vector::zero();
        for a in 1..word.len() {
            let x = self.lift(&word[..a]);
            if x.is_zero() {
                continue;
            }
            out.add_scaled(&self.b2(&x, &self.lift(&word[a..])), &Scalar::one());
        }
        self.memo.lock().unwrap().insert(word.to_vec(), out.clone());
        out
    }

    /// The bar-side operation `b_n` on the small space.
    pub fn b(&self, word: &[usize]) -> Vector {
        match word.len() {
            0 => Vector::zero(),
            1 => self.sdr.d_small.column(word[0]).clone(),
            _ => self.sdr.f.apply(&self.tree(word)),
        }
    }
}

impl Operations for TreeTransfer<'_> {
    fn op_degrees(&self) -> &[i64] {
        &self.small_degrees
    }

    fn eval_word(&self, word: &[usize]) -> Vector {
        self.b(word).scaled(&dictionary_sign(word, &self.small_degrees))
    }
}

/// Operations rescaled by `(−1)^n` in arity `n`, a symmetry of the Stasheff identities.
/// The inductive construction reads off `m_n` in this orientation (its first-order term
/// is `τ₁ = −∇`), so tree-transferred structures are reported through it.
pub struct Reoriented<'a, O: Operations + ?Sized>(pub &'a O);

impl<O: Operations + ?Sized> Operations for Reoriented<'_, O> {
    fn op_degrees(&self) -> &[i64] {
        self.0.op_degrees()
    }

    fn eval_word(&self, word: &[usize]) -> Vector {
        self.0.eval_word(word).scaled(&sign(word.len() as i64))
    }

    fn has_arity(&self, n: usize) -> bool {
        self.0.has_arity(n)
    }
}

/// Which perturbation drives the second stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitiatorKind {
    /// `∂^a` on `𝒜 ⊗ T̄(sℋ^t)`.
    Associative,
    /// `∂^L + ad_{ω^L}` on `𝒜 ⊗ S̄(sℋ^t)`.
    LieAdjoint,
    /// `∂^L` alone.
    Lie,
}

impl InitiatorKind {
    pub fn name(self) -> &'static str {
        match self {
            InitiatorKind::Associative => "a",
            InitiatorKind::LieAdjoint => "aL",
            InitiatorKind::Lie => "L",
        }
    }
}

/// Output of a two-stage deformation.
#[derive(Clone, Debug)]
pub struct Deformation {
    pub kind: InitiatorKind,
    pub word_bound: usize,
    pub coefficient_bound: usize,
    pub stage_one: Transfer,
    /// `(∂^L, ω^L)` and the bracket used, for the Lie pipelines.
    pub lie: Option<(Transfer, Bracket)>,
    pub big: TensorAlgebra,
    pub small: TensorSpace,
    pub initiator: LinMap,
    pub bpl: BplOutput,
    /// `∂^{aa}` or `∂^{aL}` as `m_n` on words of `ℋ ⊗ 1`, valued in `ℋ ⊗ R`, in the
    /// orientation of the stage-one transfer (so `m_1 = −𝒟`).
    pub structure: MultiMap,
    pub report: StructureReport,
    pub harmonic_labels: Vec<String>,
}

impl Deformation {
    pub fn small_label(&self, i: usize) -> String {
        let h = &self.harmonic_labels;
        self.small.label(i, &|a| h[a].clone(), &|g| format!("X{}", h[g]))
    }

    /// `𝒟` as a map on `ℋ ⊗ R`.
    pub fn deformed_differential(&self) -> &LinMap {
        &self.bpl.sdr.d_small
    }
}

fn prefixed(prefix: &str, report: StructureReport) -> StructureReport {
    StructureReport {
        laws: report
            .laws
            .into_iter()
            .map(|mut l| {
                l.name = format!("{prefix}{}", l.name);
                l
            })
            .collect(),
    }
}

/// Stage one `∂^a` and stage two `∂^{aa}`: the perturbation `∂^a` of `𝔡 ⊗ 1` on
/// `𝒜 ⊗ T̄(sℋ^t)` truncated at `coefficient_bound`, transferred to `ℋ ⊗ T̄(sℋ^t)`.
pub fn deform_dga(
    p: &AlgebraPresentation,
    s: &Splitting,
    word_bound: usize,
    coefficient_bound: usize,
) -> Result<Deformation> {
    let stage_one = chen_transfer(p, s, word_bound.max(coefficient_bound).max(1))?;
    let mut report = prefixed("a.", verify_flatness(p, &stage_one, None));
    let ring = CoefficientRing::new(stage_one.gen_degrees(), Flavor::Tensor, coefficient_bound);
    let space = TensorSpace::new(p.degrees(), ring);
    let t = derivation_initiator(&space, 0, &stage_one.partial);
    let (pieces, stage_two) = stage_two(p, s, space, t, word_bound)?;
    report.extend(stage_two);
    Ok(pieces.finish(InitiatorKind::Associative, word_bound, coefficient_bound, stage_one, None, report))
}

/// The Poisson (`shift = 0`) or Gerstenhaber (`shift = −1`) pipeline: `∂^a` from the
/// product, `(∂^L, ω^L)` from the bracket, then the perturbation of `𝔡 ⊗ 1` on
/// `𝒜 ⊗ S̄(sℋ^t)` by `∂^L + ad_{ω^L}` (or `∂^L`), transferred to `∂^{aL}`.
pub fn deform_poisson_gerstenhaber(
    p: &AlgebraPresentation,
    s: &Splitting,
    word_bound: usize,
    coefficient_bound: usize,
    kind: InitiatorKind,
) -> Result<Deformation> {
    if kind == InitiatorKind::Associative {
        return deform_dga(p, s, word_bound, coefficient_bound);
    }
    let bracket = match (&p.bracket, &p.bv_operator) {
        (Some(b), _) => b.clone(),
        (None, Some(_)) => bracket_from_delta(p)?,
        (None, None) => return Err(Error::Structure("deformation needs a bracket or a BV operator".into())),
    };
    let stage_one = chen_transfer(p, s, word_bound.max(1))?;
    let mut report = prefixed("a.", verify_flatness(p, &stage_one, None));
    let lie = hain_transfer(p, s, &bracket.table, bracket.shift, coefficient_bound.max(1))?;
    report.extend(prefixed("L.", verify_flatness(p, &lie, Some((bracket.table.clone(), bracket.shift)))));

    let ring = CoefficientRing::new(lie.gen_degrees(), Flavor::Symmetric, coefficient_bound);
    let space = TensorSpace::new(p.degrees(), ring);
    let mut t = derivation_initiator(&space, bracket.shift, &lie.partial);
    if kind == InitiatorKind::LieAdjoint {
        t = t.add(&adjoint_initiator(&space, &bracket.table, bracket.shift, &lie.omega));
    }
    let (pieces, stage_two) = stage_two(p, s, space, t, word_bound)?;
    report.extend(stage_two);
    Ok(pieces.finish(kind, word_bound, coefficient_bound, stage_one, Some((lie, bracket)), report))
}

struct StageTwo {
    big: TensorAlgebra,
    small: TensorSpace,
    initiator: LinMap,
    bpl: BplOutput,
    structure: MultiMap,
    labels: Vec<String>,
}

impl StageTwo {
    fn finish(
        self,
        kind: InitiatorKind,
        word_bound: usize,
        coefficient_bound: usize,
        stage_one: Transfer,
        lie: Option<(Transfer, Bracket)>,
        report: StructureReport,
    ) -> Deformation {
        Deformation {
            kind,
            word_bound,
            coefficient_bound,
            stage_one,
            lie,
            big: self.big,
            small: self.small,
            initiator: self.initiator,
            bpl: self.bpl,
            structure: self.structure,
            report,
            harmonic_labels: self.labels,
        }
    }
}

fn stage_two(
    p: &AlgebraPresentation,
    s: &Splitting,
    space: TensorSpace,
    t: LinMap,
    word_bound: usize,
) -> Result<(StageTwo, StructureReport)> {
    let labels = s.labels(p);
    let ring = space.ring.clone();
    let big = TensorAlgebra { space, product: p.product_or_zero() };
    let small = TensorSpace::new(s.harmonic_degrees.clone(), ring.clone());
    let gen = |g: usize| format!("X{}", labels[g]);
    let big_label = |i: usize| big.space.label(i, &|a| p.label(a), &gen);
    let small_label = |i: usize| small.label(i, &|a| labels[a].clone(), &gen);

    let base = tensor_sdr(&make_sdr(p, s), ring.dim());
    let mut report = prefixed("initial.", verify_sdr_labelled(&base, &small_label, &big_label));
    let pre = check_initiator(&big, &base.d_big, &t, &big_label);
    for name in ["initiator_derivation", "perturbed_square_zero"] {
        let law = pre.law(name).expect("law present");
        if let Some(w) = law.witnesses.first() {
            return Err(Error::Verification(format!(
                "{name} fails at ({}) with defect {}",
                w.inputs.join(", "),
                w.render_defect()
            )));
        }
    }
    report.extend(pre);

    let bpl = run_bpl(&base, &t, ring.bound + 1)?;
    report.push(stabilization_law(&bpl.state, &|i| big.space.word_len(i), &big_label));
    report.extend(verify_bpl(&bpl, &small_label, &big_label));

    let natural = TreeTransfer::new(&big, &bpl.sdr, small.degrees());
    let tree = Reoriented(&natural);
    let h = s.harmonic_dim();
    let words: Vec<Word> = basis_words(h, word_bound, Flavor::Tensor, &s.harmonic_degrees)
        .into_iter()
        .map(|w| w.into_iter().map(|a| small.index(a, 0)).collect())
        .collect();
    let values = crate::par_map(&words, |w| tree.eval_word(w));
    let mut structure = MultiMap::new(small.degrees(), Symmetry::None);
    for (w, v) in words.iter().zip(values) {
        structure.set(w, v);
    }
    report.extend(stasheff_on_words(&tree, &words, &small_label));
    drop(natural);
    Ok((StageTwo { big, small, initiator: t, bpl, structure, labels }, report))
}

/// The inductively transferred `m_n`, recomputed by the tree formula across the SDR of a
/// splitting.
pub fn tree_transfer_on_splitting(p: &AlgebraPresentation, s: &Splitting, bound: usize) -> MultiMap {
    let ring = CoefficientRing::new(Vec::new(), Flavor::Tensor, 0);
    let big = TensorAlgebra { space: TensorSpace::new(p.degrees(), ring), product: p.product_or_zero() };
    let sdr = make_sdr(p, s);
    let natural = TreeTransfer::new(&big, &sdr, s.harmonic_degrees.clone());
    let tree = Reoriented(&natural);
    let words = basis_words(s.harmonic_dim(), bound, Flavor::Tensor, &s.harmonic_degrees);
    let mut out = MultiMap::new(s.harmonic_degrees.clone(), Symmetry::None);
    for (w, v) in words.iter().zip(crate::par_map(&words, |w| tree.eval_word(w))) {
        out.set(w, v);
    }
    out
}
