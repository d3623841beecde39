//! Tensor and symmetric coalgebras, coderivations, and the A∞ / L∞ dictionaries.
//!
//! Conventions. For an A∞ structure `m` on `V` the codifferential lives on
//! `T^c(W)`, `W = s⁻¹V` with `|e_i| = |v_i| − 1`, and
//! `b_k(e_1, …, e_k) = (−1)^{Σ_j (k−j)|v_j|} m_k(v_1, …, v_k)`.
//! The same formula relates an L∞ structure to a coderivation of `S^c(W)`.
//! Derivations of `T̄(W^t)` / `S̄(W^t)` are paired with coderivations through
//! `⟨X^{i_1}⋯X^{i_k}, e_{j_1}⋯e_{j_k}⟩ = (−1)^{Σ_{a<b}|e_{j_a}||X^{i_b}|} Π δ`.

use std::collections::BTreeMap;

use num::{BigInt, One, Zero};

use crate::graded::{is_odd, sign, Flavor, Scalar, Word};
use crate::linalg::Vector;
use crate::report::{LawResult, StructureReport, Witness};

/// How a family of multilinear maps behaves under permutation of its inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symmetry {
    None,
    /// Graded symmetric: swapping `a, b` costs `(−1)^{|a||b|}`.
    Symmetric,
    /// Graded antisymmetric: swapping `a, b` costs `−(−1)^{|a||b|}`.
    Antisymmetric,
}

/// Sorts a word, returning the sign of the sorting permutation, or `None` if the word
/// is forced to vanish.
pub fn sort_word(word: &[usize], degrees: &[i64], symmetry: Symmetry) -> Option<(Word, Scalar)> {
    let mut w = word.to_vec();
    if symmetry == Symmetry::None {
        return Some((w, Scalar::one()));
    }
    let anti = symmetry == Symmetry::Antisymmetric;
    let mut parity = 0i64;
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            parity += degrees[w[j - 1]] * degrees[w[j]] + anti as i64;
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    let vanishes = |d: i64| if anti { !is_odd(d) } else { is_odd(d) };
    if w.windows(2).any(|p| p[0] == p[1] && vanishes(degrees[p[0]])) {
        return None;
    }
    Some((w, sign(parity)))
}

/// A family of multilinear maps `V^{⊗n} → V` for several arities `n`, stored on
/// canonical words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiMap {
    pub degrees: Vec<i64>,
    pub symmetry: Symmetry,
    pub maps: BTreeMap<usize, BTreeMap<Word, Vector>>,
}

impl MultiMap {
    pub fn new(degrees: Vec<i64>, symmetry: Symmetry) -> Self {
        Self { degrees, symmetry, maps: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn max_arity(&self) -> usize {
        self.maps.keys().next_back().copied().unwrap_or(0)
    }

    /// Sets the value on a word, which is canonicalized first.
    pub fn set(&mut self, word: &[usize], value: Vector) {
        let Some((w, s)) = sort_word(word, &self.degrees, self.symmetry) else { return };
        if value.is_zero() {
            if let Some(table) = self.maps.get_mut(&word.len()) {
                table.remove(&w);
                if table.is_empty() {
                    self.maps.remove(&word.len());
                }
            }
        } else {
            self.maps.entry(word.len()).or_default().insert(w, value.scaled(&s));
        }
    }

    pub fn eval(&self, word: &[usize]) -> Vector {
        let Some(table) = self.maps.get(&word.len()) else { return Vector::zero() };
        let Some((w, s)) = sort_word(word, &self.degrees, self.symmetry) else { return Vector::zero() };
        table.get(&w).map(|v| v.scaled(&s)).unwrap_or_default()
    }

    /// Multilinear extension to arbitrary vectors.
    pub fn eval_vectors(&self, args: &[Vector]) -> Vector {
        if !self.maps.get(&args.len()).is_some_and(|t| !t.is_empty()) {
            return Vector::zero();
        }
        let mut out = Vector::zero();
        let mut word = Vec::with_capacity(args.len());
        expand(args, &mut word, Scalar::one(), &mut |w, c| out.add_scaled(&self.eval(w), c));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|t| t.is_empty())
    }

    pub fn arity_is_zero(&self, n: usize) -> bool {
        self.maps.get(&n).is_none_or(|t| t.is_empty())
    }

    /// Entries of one arity in canonical order.
    pub fn entries(&self, n: usize) -> impl Iterator<Item = (&Word, &Vector)> {
        self.maps.get(&n).into_iter().flat_map(|t| t.iter())
    }

    fn prune(&mut self) {
        self.maps.retain(|_, t| {
            t.retain(|_, v| !v.is_zero());
            !t.is_empty()
        });
    }
}

/// Anything that evaluates multilinear operations on basis words.
pub trait Operations: Sync {
    fn op_degrees(&self) -> &[i64];
    fn eval_word(&self, word: &[usize]) -> Vector;
    /// `false` only when the arity is known to vanish identically.
    fn has_arity(&self, _n: usize) -> bool {
        true
    }
    fn eval_args(&self, args: &[Vector]) -> Vector {
        if !self.has_arity(args.len()) {
            return Vector::zero();
        }
        let mut out = Vector::zero();
        let mut word = Vec::with_capacity(args.len());
        expand(args, &mut word, Scalar::one(), &mut |w, c| out.add_scaled(&self.eval_word(w), c));
        out
    }
}

impl Operations for MultiMap {
    fn op_degrees(&self) -> &[i64] {
        &self.degrees
    }
    fn eval_word(&self, word: &[usize]) -> Vector {
        self.eval(word)
    }
    fn has_arity(&self, n: usize) -> bool {
        !self.arity_is_zero(n)
    }
}

fn expand(args: &[Vector], word: &mut Vec<usize>, coef: Scalar, f: &mut dyn FnMut(&[usize], &Scalar)) {
    if args.is_empty() {
        f(word, &coef);
        return;
    }
    for (i, c) in args[0].iter() {
        word.push(i);
        expand(&args[1..], word, &coef * c, f);
        word.pop();
    }
}

/// A∞ structure: `m_n` of degree `2 − n`, no symmetry.
pub type AInftyStructure = MultiMap;
/// L∞ structure: graded antisymmetric `l_n` of degree `2 − n`.
pub type LInftyStructure = MultiMap;

/// Coderivation of `T^c(W)` or `S^c(W)` given by its corestrictions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coderivation {
    pub ops: MultiMap,
    pub degree: i64,
}

impl Coderivation {
    pub fn flavor(&self) -> Flavor {
        match self.ops.symmetry {
            Symmetry::Symmetric => Flavor::Symmetric,
            _ => Flavor::Tensor,
        }
    }
}

/// Linear combination of words in a coalgebra.
pub type Chain = BTreeMap<Word, Scalar>;

fn chain_add(chain: &mut Chain, word: Word, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    let e = chain.entry(word).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        let key: Vec<usize> = chain.iter().find(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).unwrap();
        chain.remove(&key);
    }
}

/// Canonical form of a chain: symmetric words sorted with their Koszul signs.
pub fn canonical_chain(chain: &Chain, degrees: &[i64], flavor: Flavor) -> Chain {
    let mut out = Chain::new();
    for (w, c) in chain {
        match flavor {
            Flavor::Tensor => chain_add(&mut out, w.clone(), c),
            Flavor::Symmetric => {
                if let Some((sw, s)) = sort_word(w, degrees, Symmetry::Symmetric) {
                    chain_add(&mut out, sw, &(c * s));
                }
            }
        }
    }
    out
}

/// `(k, n)`-unshuffles: permutations `σ` with `σ(1) < ⋯ < σ(k)` and `σ(k+1) < ⋯ < σ(n)`,
/// listed as the sequence of positions taken first, with the sign of the permutation.
pub fn unshuffles(k: usize, n: usize) -> Vec<(Vec<usize>, Scalar)> {
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    fn rec(start: usize, k: usize, n: usize, chosen: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Scalar)>) {
        if chosen.len() == k {
            let mut perm = chosen.clone();
            perm.extend((0..n).filter(|i| !chosen.contains(i)));
            let inversions: usize = chosen.iter().enumerate().map(|(a, &p)| p - a).sum();
            out.push((perm, sign(inversions as i64)));
            return;
        }
        for i in start..n {
            chosen.push(i);
            rec(i + 1, k, n, chosen, out);
            chosen.pop();
        }
    }
    rec(0, k, n, &mut chosen, &mut out);
    out
}

/// Koszul sign of reordering `word` into `perm` order, for the given symmetry.
fn permutation_sign(perm: &[usize], word: &[usize], degrees: &[i64], symmetry: Symmetry) -> Scalar {
    let anti = (symmetry == Symmetry::Antisymmetric) as i64;
    let mut parity = 0i64;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                parity += degrees[word[perm[a]]] * degrees[word[perm[b]]] + anti;
            }
        }
    }
    sign(parity)
}

/// Value of the unique coderivation with the given corestrictions on one word.
pub fn extend_coderivation(c: &Coderivation, word: &[usize]) -> Chain {
    let deg = &c.ops.degrees;
    let n = word.len();
    let mut out = Chain::new();
    match c.flavor() {
        Flavor::Tensor => {
            let mut prefix = 0i64;
            for i in 0..n {
                for s in 1..=n - i {
                    if c.ops.arity_is_zero(s) {
                        continue;
                    }
                    let value = c.ops.eval(&word[i..i + s]);
                    let koszul = sign(c.degree * prefix);
                    for (k, coef) in value.iter() {
                        let mut w = word[..i].to_vec();
                        w.push(k);
                        w.extend_from_slice(&word[i + s..]);
                        chain_add(&mut out, w, &(coef * &koszul));
                    }
                }
                prefix += deg[word[i]];
            }
        }
        Flavor::Symmetric => {
            for s in 1..=n {
                if c.ops.arity_is_zero(s) {
                    continue;
                }
                for (perm, _) in unshuffles(s, n) {
                    let koszul = permutation_sign(&perm, word, deg, Symmetry::Symmetric);
                    let inner: Vec<usize> = perm[..s].iter().map(|&p| word[p]).collect();
                    let value = c.ops.eval(&inner);
                    for (k, coef) in value.iter() {
                        let mut w = vec![k];
                        w.extend(perm[s..].iter().map(|&p| word[p]));
                        if let Some((sw, sg)) = sort_word(&w, deg, Symmetry::Symmetric) {
                            chain_add(&mut out, sw, &(coef * &koszul * sg));
                        }
                    }
                }
            }
        }
    }
    out
}

fn extend_chain(c: &Coderivation, chain: &Chain) -> Chain {
    let mut out = Chain::new();
    for (w, coef) in chain {
        for (w2, c2) in extend_coderivation(c, w) {
            chain_add(&mut out, w2, &(coef * c2));
        }
    }
    out
}

/// Corestriction of `c ∘ c` on one word, from the displayed corestriction formula.
fn square_corestriction(c: &Coderivation, word: &[usize]) -> Vector {
    let deg = &c.ops.degrees;
    let n = word.len();
    let mut out = Vector::zero();
    match c.flavor() {
        Flavor::Tensor => {
            for r in 1..=n {
                let s = n + 1 - r;
                if c.ops.arity_is_zero(r) || c.ops.arity_is_zero(s) {
                    continue;
                }
                let mut prefix = 0i64;
                for k in 0..r {
                    let inner = c.ops.eval(&word[k..k + s]);
                    let koszul = sign(c.degree * prefix);
                    let mut args: Vec<Vector> = word[..k].iter().map(|&i| Vector::unit(i)).collect();
                    args.push(inner);
                    args.extend(word[k + s..].iter().map(|&i| Vector::unit(i)));
                    out.add_scaled(&c.ops.eval_vectors(&args), &koszul);
                    prefix += deg[word[k]];
                }
            }
        }
        Flavor::Symmetric => {
            for r in 1..=n {
                let s = n + 1 - r;
                if c.ops.arity_is_zero(r) || c.ops.arity_is_zero(s) {
                    continue;
                }
                for (perm, _) in unshuffles(s, n) {
                    let koszul = permutation_sign(&perm, word, deg, Symmetry::Symmetric);
                    let inner_word: Vec<usize> = perm[..s].iter().map(|&p| word[p]).collect();
                    let mut args = vec![c.ops.eval(&inner_word)];
                    args.extend(perm[s..].iter().map(|&p| Vector::unit(word[p])));
                    out.add_scaled(&c.ops.eval_vectors(&args), &koszul);
                }
            }
        }
    }
    out
}

/// Error raised when the two evaluations of `c²` disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareMismatch {
    pub word: Word,
    pub composed: Vector,
    pub displayed: Vector,
}

/// Corestrictions of `c ∘ c` up to `bound`, computed by composing extensions and by the
/// corestriction formula; the two must agree.
pub fn coderivation_square(c: &Coderivation, bound: usize) -> Result<Coderivation, SquareMismatch> {
    let mut sq = MultiMap::new(c.ops.degrees.clone(), c.ops.symmetry);
    for word in basis_words(c.ops.dim(), bound, c.flavor(), &c.ops.degrees) {
        let composed = extend_chain(c, &extend_coderivation(c, &word));
        let composed = Vector::from_pairs(composed.into_iter().filter(|(w, _)| w.len() == 1).map(|(w, x)| (w[0], x)));
        let displayed = square_corestriction(c, &word);
        if composed != displayed {
            return Err(SquareMismatch { word, composed, displayed });
        }
        if !composed.is_zero() {
            sq.maps.entry(word.len()).or_default().insert(word, composed);
        }
    }
    Ok(Coderivation { ops: sq, degree: 2 * c.degree })
}

/// All words of length `1..=bound` over `dim` letters; canonical (non-vanishing, sorted)
/// ones for the symmetric flavor.
pub fn basis_words(dim: usize, bound: usize, flavor: Flavor, degrees: &[i64]) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &layer {
            let start = match flavor {
                Flavor::Tensor => 0,
                Flavor::Symmetric => w.last().copied().unwrap_or(0),
            };
            for g in start..dim {
                if flavor == Flavor::Symmetric && w.last() == Some(&g) && is_odd(degrees[g]) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(g);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Nondecreasing words of length `1..=bound` (inputs on which symmetric identities are checked).
fn sorted_words(dim: usize, bound: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..bound {
        let mut next = Vec::new();
        for w in &layer {
            for g in w.last().copied().unwrap_or(0)..dim {
                let mut nw = w.clone();
                nw.push(g);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `(−1)^{Σ_j (k−j)|v_j|}`, relating `m_k` and `b_k` on a word of length `k`.
pub fn dictionary_sign(word: &[usize], degrees: &[i64]) -> Scalar {
    let k = word.len() as i64;
    sign(word.iter().enumerate().map(|(j, &i)| (k - 1 - j as i64) * degrees[i]).sum())
}

fn reindex(m: &MultiMap, degrees: Vec<i64>, symmetry: Symmetry, factor: impl Fn(&[usize]) -> Scalar) -> MultiMap {
    let mut out = MultiMap::new(degrees, symmetry);
    for (&n, table) in &m.maps {
        let t = out.maps.entry(n).or_default();
        for (w, v) in table {
            t.insert(w.clone(), v.scaled(&factor(w)));
        }
    }
    out.prune();
    out
}

/// The codifferential `b` on `T^c(s⁻¹V)` of an A∞ structure.
pub fn ainfty_to_codifferential(m: &AInftyStructure) -> Coderivation {
    let deg = m.degrees.clone();
    let wdeg: Vec<i64> = deg.iter().map(|d| d - 1).collect();
    Coderivation { ops: reindex(m, wdeg, Symmetry::None, |w| dictionary_sign(w, &deg)), degree: 1 }
}

pub fn codifferential_to_ainfty(b: &Coderivation) -> AInftyStructure {
    let deg: Vec<i64> = b.ops.degrees.iter().map(|d| d + 1).collect();
    reindex(&b.ops, deg.clone(), Symmetry::None, |w| dictionary_sign(w, &deg))
}

/// The codifferential on `S^c(s⁻¹V)` of an L∞ structure.
pub fn linfty_to_codifferential(l: &LInftyStructure) -> Coderivation {
    let deg = l.degrees.clone();
    let wdeg: Vec<i64> = deg.iter().map(|d| d - 1).collect();
    // canonical words coincide: a sorted word is sorted in either grading
    Coderivation { ops: reindex(l, wdeg, Symmetry::Symmetric, |w| dictionary_sign(w, &deg)), degree: 1 }
}

pub fn codifferential_to_linfty(b: &Coderivation) -> LInftyStructure {
    let deg: Vec<i64> = b.ops.degrees.iter().map(|d| d + 1).collect();
    reindex(&b.ops, deg.clone(), Symmetry::Antisymmetric, |w| dictionary_sign(w, &deg))
}

fn unit_args(word: &[usize]) -> Vec<Vector> {
    word.iter().map(|&i| Vector::unit(i)).collect()
}

/// Left side of the Stasheff identity of arity `n = word.len()`:
/// `Σ_{r+s=n+1} Σ_k (−1)^{(s+1)k + s(n + Σ_{i<k}|v_i|)} m_r(v_1, …, m_s(v_k, …), …)`.
pub fn stasheff_defect<O: Operations + ?Sized>(m: &O, word: &[usize]) -> Vector {
    let n = word.len();
    let deg = m.op_degrees();
    let mut out = Vector::zero();
    for r in 1..=n {
        let s = n + 1 - r;
        if !m.has_arity(r) || !m.has_arity(s) {
            continue;
        }
        let mut prefix = 0i64;
        for k in 1..=r {
            let eps = (s as i64 + 1) * k as i64 + s as i64 * (n as i64 + prefix);
            let inner = m.eval_word(&word[k - 1..k - 1 + s]);
            if !inner.is_zero() {
                let mut args = unit_args(&word[..k - 1]);
                args.push(inner);
                args.extend(unit_args(&word[k - 1 + s..]));
                out.add_scaled(&m.eval_args(&args), &sign(eps));
            }
            prefix += deg[word[k - 1]];
        }
    }
    out
}

/// Left side of the generalized Jacobi identity of arity `n`:
/// `Σ_{r+s=n+1} Σ_{σ ∈ Sh^u(s,n)} (−1)^σ ε(σ) (−1)^{s(r−1)} l_r(l_s(v_σ…), v_σ…)`.
pub fn jacobi_defect(l: &LInftyStructure, word: &[usize]) -> Vector {
    let n = word.len();
    let mut out = Vector::zero();
    for r in 1..=n {
        let s = n + 1 - r;
        if l.arity_is_zero(r) || l.arity_is_zero(s) {
            continue;
        }
        for (perm, _) in unshuffles(s, n) {
            let koszul = permutation_sign(&perm, word, &l.degrees, Symmetry::Antisymmetric);
            let inner_word: Vec<usize> = perm[..s].iter().map(|&p| word[p]).collect();
            let inner = l.eval(&inner_word);
            if inner.is_zero() {
                continue;
            }
            let mut args = vec![inner];
            args.extend(perm[s..].iter().map(|&p| Vector::unit(word[p])));
            let extra = sign(s as i64 * (r as i64 - 1));
            out.add_scaled(&l.eval_vectors(&args), &(koszul * extra));
        }
    }
    out
}

/// Evaluates an identity on every word up to `bound`, and compares it word by word with
/// `b² = 0` from the dictionary. `label` names basis elements of the space.
fn check_identity(
    name: &str,
    ops: &MultiMap,
    bound: usize,
    words: Vec<Word>,
    defect: impl Fn(&[usize]) -> Vector + Sync,
    b: &Coderivation,
    label: &dyn Fn(usize) -> String,
) -> StructureReport {
    let mut per_arity: BTreeMap<usize, LawResult> =
        (1..=bound).map(|n| (n, LawResult::new(format!("{name}_{n}")))).collect();
    let mut agree = LawResult::new("dictionary_agreement");
    let evaluate = |w: &Word| -> (Vector, Vector) { (defect(w), square_corestriction(b, w)) };
    let results: Vec<(Vector, Vector)> = crate::par_map(&words, evaluate);
    for (w, (d, bsq)) in words.iter().zip(results) {
        let inputs: Vec<String> = w.iter().map(|&i| label(i)).collect();
        per_arity.get_mut(&w.len()).unwrap().record((!d.is_zero()).then(|| Witness::new(inputs.clone(), &d, label)));
        let same = d == bsq || d == -&bsq;
        agree.record((!same).then(|| Witness::new(inputs, &(&d - &bsq), label)));
    }
    let mut report = StructureReport::new();
    for (_, law) in per_arity {
        report.push(law);
    }
    if ops.symmetry != Symmetry::None {
        report.push(antisymmetry_law(ops, bound, label));
    }
    report.push(agree);
    report
}

fn antisymmetry_law(ops: &MultiMap, bound: usize, label: &dyn Fn(usize) -> String) -> LawResult {
    let mut law = LawResult::new("graded_antisymmetry");
    for w in basis_words(ops.dim(), bound, Flavor::Tensor, &ops.degrees) {
        for i in 0..w.len().saturating_sub(1) {
            let mut swapped = w.clone();
            swapped.swap(i, i + 1);
            let s = -sign(ops.degrees[w[i]] * ops.degrees[w[i + 1]]);
            let defect = &ops.eval(&w) - &ops.eval(&swapped).scaled(&s);
            let inputs = w.iter().map(|&k| label(k)).collect();
            law.record((!defect.is_zero()).then(|| Witness::new(inputs, &defect, label)));
        }
    }
    law
}

pub fn check_stasheff(m: &AInftyStructure, bound: usize, label: &dyn Fn(usize) -> String) -> StructureReport {
    let b = ainfty_to_codifferential(m);
    let words = basis_words(m.dim(), bound, Flavor::Tensor, &m.degrees);
    check_identity("stasheff", m, bound, words, |w| stasheff_defect(m, w), &b, label)
}

pub fn check_linfty(l: &LInftyStructure, bound: usize, label: &dyn Fn(usize) -> String) -> StructureReport {
    let b = linfty_to_codifferential(l);
    let words = sorted_words(l.dim(), bound);
    check_identity("jacobi", l, bound, words, |w| jacobi_defect(l, w), &b, label)
}

/// Stasheff identities of lazily evaluated operations on the given input words, one law
/// per arity.
pub fn stasheff_on_words<O: Operations + ?Sized>(
    m: &O,
    words: &[Word],
    label: &dyn Fn(usize) -> String,
) -> StructureReport {
    let defects = crate::par_map(words, |w| stasheff_defect(m, w));
    let mut per_arity: BTreeMap<usize, LawResult> = BTreeMap::new();
    for (w, d) in words.iter().zip(defects) {
        let law = per_arity.entry(w.len()).or_insert_with(|| LawResult::new(format!("stasheff_{}", w.len())));
        let inputs = w.iter().map(|&i| label(i)).collect();
        law.record((!d.is_zero()).then(|| Witness::new(inputs, &d, label)));
    }
    StructureReport { laws: per_arity.into_values().collect() }
}

/// A derivation of `T̄(X)` or `S̄(X)` of degree +1, given by the images of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    /// Degrees of the generators `X^j`.
    pub degrees: Vec<i64>,
    pub flavor: Flavor,
    /// `∂X^j` as a chain of (canonical) words.
    pub images: Vec<Chain>,
}

impl Derivation {
    pub fn zero(degrees: Vec<i64>, flavor: Flavor) -> Self {
        let images = vec![Chain::new(); degrees.len()];
        Self { degrees, flavor, images }
    }

    /// `∂` on a word, as a derivation of degree +1 (Koszul sign past earlier letters).
    pub fn apply_word(&self, word: &[usize], max_len: usize) -> Chain {
        let mut out = Chain::new();
        let mut prefix = 0i64;
        for (i, &g) in word.iter().enumerate() {
            let s = sign(prefix);
            for (img, c) in &self.images[g] {
                if word.len() - 1 + img.len() > max_len {
                    continue;
                }
                let mut w = word[..i].to_vec();
                w.extend_from_slice(img);
                w.extend_from_slice(&word[i + 1..]);
                let coef = c * &s;
                match self.flavor {
                    Flavor::Tensor => chain_add(&mut out, w, &coef),
                    Flavor::Symmetric => {
                        if let Some((sw, sg)) = sort_word(&w, &self.degrees, Symmetry::Symmetric) {
                            chain_add(&mut out, sw, &(coef * sg));
                        }
                    }
                }
            }
            prefix += self.degrees[g];
        }
        out
    }

    pub fn apply_chain(&self, chain: &Chain, max_len: usize) -> Chain {
        let mut out = Chain::new();
        for (w, c) in chain {
            for (w2, c2) in self.apply_word(w, max_len) {
                chain_add(&mut out, w2, &(c * c2));
            }
        }
        out
    }

    /// `∂²` on every generator, keeping words of length `≤ max_len`.
    pub fn square_on_generators(&self, max_len: usize) -> Vec<Chain> {
        self.images.iter().map(|img| self.apply_chain(img, max_len)).collect()
    }

    pub fn truncated(&self, max_len: usize) -> Derivation {
        let images = self
            .images
            .iter()
            .map(|c| c.iter().filter(|(w, _)| w.len() <= max_len).map(|(w, x)| (w.clone(), x.clone())).collect())
            .collect();
        Derivation { degrees: self.degrees.clone(), flavor: self.flavor, images }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|c| c.is_empty())
    }
}

/// Pairing sign `(−1)^{Σ_{a<b} |e_{i_a}||e_{i_b}|}` of a word of `W` with its dual word.
fn pairing_sign(word: &[usize], wdeg: &[i64]) -> Scalar {
    let mut parity = 0i64;
    for a in 0..word.len() {
        for b in a + 1..word.len() {
            parity += wdeg[word[a]] * wdeg[word[b]];
        }
    }
    sign(parity)
}

/// `⟨X^I, e_I⟩` for a canonical symmetric word counts the `Π mult!` matching terms.
fn multiplicity_factor(word: &[usize], flavor: Flavor) -> Scalar {
    if flavor == Flavor::Tensor {
        return Scalar::one();
    }
    let mut f = BigInt::one();
    let mut run = 1u32;
    for i in 1..=word.len() {
        if i < word.len() && word[i] == word[i - 1] {
            run += 1;
            f *= BigInt::from(run);
        } else {
            run = 1;
        }
    }
    Scalar::from_integer(f)
}

/// The global sign relating a derivation and its dual coderivation: `b = −∂*`. With it
/// `m₂` is the induced product (rather than its negative) and `τb + 𝔡τ = τ ∪ τ`.
pub const DUAL_SIGN: i64 = 1;

fn dual_factor(j_degree: i64, word: &[usize], wdeg: &[i64], flavor: Flavor) -> Scalar {
    sign(DUAL_SIGN + j_degree) * pairing_sign(word, wdeg) * multiplicity_factor(word, flavor)
}

/// The coderivation of `T^c(W)` / `S^c(W)`, `W = (X)^t`, dual to a derivation.
pub fn dualize(d: &Derivation) -> Coderivation {
    let wdeg: Vec<i64> = d.degrees.iter().map(|x| -x).collect();
    let symmetry = match d.flavor {
        Flavor::Tensor => Symmetry::None,
        Flavor::Symmetric => Symmetry::Symmetric,
    };
    let mut ops = MultiMap::new(wdeg.clone(), symmetry);
    for (j, img) in d.images.iter().enumerate() {
        for (w, c) in img {
            let f = dual_factor(d.degrees[j], w, &wdeg, d.flavor);
            let table = ops.maps.entry(w.len()).or_default();
            table.entry(w.clone()).or_default().add_term(j, &(c * f));
        }
    }
    ops.prune();
    Coderivation { ops, degree: 1 }
}

/// Inverse of [`dualize`].
pub fn undualize(b: &Coderivation) -> Derivation {
    let wdeg = b.ops.degrees.clone();
    let degrees: Vec<i64> = wdeg.iter().map(|x| -x).collect();
    let flavor = b.flavor();
    let mut images = vec![Chain::new(); degrees.len()];
    for table in b.ops.maps.values() {
        for (w, v) in table {
            for (j, c) in v.iter() {
                let f = dual_factor(degrees[j], w, &wdeg, flavor);
                chain_add(&mut images[j], w.clone(), &(c / f));
            }
        }
    }
    Derivation { degrees, flavor, images }
}

/// Transferred structure maps read off a derivation: `m_n` (tensor) or `l_n` (symmetric)
/// on the space whose degrees are `1 − |X^j|`.
pub fn derivation_to_infinity(d: &Derivation) -> MultiMap {
    let b = dualize(d);
    match d.flavor {
        Flavor::Tensor => codifferential_to_ainfty(&b),
        Flavor::Symmetric => codifferential_to_linfty(&b),
    }
}

pub fn infinity_to_derivation(m: &MultiMap) -> Derivation {
    match m.symmetry {
        Symmetry::Antisymmetric => undualize(&linfty_to_codifferential(m)),
        _ => undualize(&ainfty_to_codifferential(m)),
    }
}

/// `|Sh^u(k, n)|` must be the binomial coefficient.
pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
