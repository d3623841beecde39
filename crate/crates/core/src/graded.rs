//! Graded vector spaces over the rationals, Koszul signs and word bookkeeping.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Every computation in the crate is done over ℚ.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `(-1)^e` as a scalar.
pub fn sign(e: i64) -> Scalar {
    if e.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        -Scalar::one()
    }
}

pub fn is_odd(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

/// Parses `p`, `-p` or `p/q`. Only canonical (lowest-terms, positive denominator,
/// no `/1`) spellings are accepted.
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let valid_int = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) && (digits == "0" || !digits.starts_with('0'))
    };
    if !valid_int(num) {
        return None;
    }
    let n: BigInt = num.parse().ok()?;
    match den {
        None => Some(BigRational::from_integer(n)),
        Some(d) => {
            if d.starts_with('-') || !valid_int(d) {
                return None;
            }
            let d: BigInt = d.parse().ok()?;
            if d <= BigInt::one() {
                return None;
            }
            let q = BigRational::new(n.clone(), d.clone());
            (q.numer() == &n && q.denom() == &d).then_some(q)
        }
    }
}

/// Canonical text form of a scalar (`3`, `-1/2`).
pub fn format_scalar(q: &Scalar) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sign of moving a block of total degree `Σ left` past a block of total degree `Σ right`.
pub fn koszul_sign(left: &[i64], right: &[i64]) -> Scalar {
    let l: i64 = left.iter().sum();
    let r: i64 = right.iter().sum();
    sign(l * r)
}

/// A finite-dimensional ℤ-graded space with a named, ordered basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedSpace {
    basis: Vec<(String, i64)>,
}

impl GradedSpace {
    pub fn new(basis: Vec<(String, i64)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (sym, _) in &basis {
            if !seen.insert(sym.as_str()) {
                return Err(Error::Structure(format!("duplicate basis symbol `{sym}`")));
            }
        }
        Ok(Self { basis })
    }

    pub fn from_degrees(prefix: &str, degrees: &[i64]) -> Self {
        Self { basis: degrees.iter().enumerate().map(|(i, d)| (format!("{prefix}{i}"), *d)).collect() }
    }

    pub fn empty() -> Self {
        Self { basis: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis[i].1
    }

    pub fn symbol(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.basis.iter().map(|(_, d)| *d).collect()
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.basis.iter().position(|(s, _)| s == symbol)
    }

    pub fn basis(&self) -> &[(String, i64)] {
        &self.basis
    }

    /// Indices of basis elements in degree `d`, in basis order.
    pub fn indices_in_degree(&self, d: i64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) == d).collect()
    }

    /// Distinct degrees in increasing order.
    pub fn degree_range(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.basis.iter().map(|(_, d)| *d).collect();
        set.into_iter().collect()
    }

    /// Dimension per degree, increasing degree.
    pub fn dims_by_degree(&self) -> Vec<(i64, usize)> {
        self.degree_range().into_iter().map(|d| (d, self.indices_in_degree(d).len())).collect()
    }

    /// The suspension `s^amount V`: every degree is lowered by `amount`, so `(sV)_n = V_{n+1}`.
    pub fn shift(&self, amount: i64) -> Self {
        let basis = self.basis.iter().map(|(s, d)| (shift_symbol(s, amount), d - amount)).collect();
        Self { basis }
    }

    /// The graded dual: symbols gain a `^t` suffix (or lose it) and degrees are negated.
    /// Duality passes through suspension markers, so `(s^{-1}V)^t = sV^t` symbol by symbol.
    pub fn dual(&self) -> Self {
        let basis = self
            .basis
            .iter()
            .map(|(s, d)| {
                // (s^k x)^t is written s^-k (x^t)
                let (level, base) = parse_shift_prefix(s);
                let base = match base.strip_suffix("^t") {
                    Some(b) => b.to_string(),
                    None => format!("{base}^t"),
                };
                (shift_symbol(&base, -level), -d)
            })
            .collect();
        Self { basis }
    }
}

/// Suspension markers compose: `s(s^-1 x) = x`.
fn shift_symbol(sym: &str, amount: i64) -> String {
    let (mut level, base) = parse_shift_prefix(sym);
    level += amount;
    match level {
        0 => base.to_string(),
        1 => format!("s{{{base}}}"),
        k => format!("s^{k}{{{base}}}"),
    }
}

fn parse_shift_prefix(sym: &str) -> (i64, &str) {
    if let Some(rest) = sym.strip_prefix("s{") {
        if let Some(base) = rest.strip_suffix('}') {
            return (1, base);
        }
    }
    if let Some(rest) = sym.strip_prefix("s^") {
        if let Some((k, tail)) = rest.split_once('{') {
            if let (Ok(k), Some(base)) = (k.parse::<i64>(), tail.strip_suffix('}')) {
                return (k, base);
            }
        }
    }
    (0, sym)
}

impl fmt::Display for GradedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis.iter().map(|(s, d)| format!("{s}:{d}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    Tensor,
    Symmetric,
}

/// A word in the generators of a graded space. Symmetric words are kept sorted.
pub type Word = Vec<usize>;

pub fn word_degree(word: &[usize], degrees: &[i64]) -> i64 {
    word.iter().map(|&i| degrees[i]).sum()
}

/// Brings a symmetric word into sorted order. Returns `None` when the word vanishes
/// (a repeated factor of odd degree), otherwise the sorted word and the Koszul sign of
/// the sorting permutation.
pub fn canonicalize_symmetric(word: &[usize], degrees: &[i64]) -> Option<(Word, Scalar)> {
    let mut w = word.to_vec();
    let mut parity = 0i64;
    // insertion sort, counting Koszul transpositions
    for i in 1..w.len() {
        let mut j = i;
        while j > 0 && w[j - 1] > w[j] {
            parity += degrees[w[j - 1]] * degrees[w[j]];
            w.swap(j - 1, j);
            j -= 1;
        }
    }
    if w.windows(2).any(|p| p[0] == p[1] && is_odd(degrees[p[0]])) {
        return None;
    }
    Some((w, sign(parity)))
}

/// Words grouped for one enumeration call.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordList {
    pub flavor: Flavor,
    /// Words in canonical order: by length, then lexicographically.
    pub words: Vec<Word>,
}

impl WordList {
    /// `(length, degree) -> count` in increasing order.
    pub fn counts(&self, degrees: &[i64]) -> Vec<((usize, i64), usize)> {
        let mut map = std::collections::BTreeMap::new();
        for w in &self.words {
            *map.entry((w.len(), word_degree(w, degrees))).or_insert(0usize) += 1;
        }
        map.into_iter().collect()
    }
}

/// Default cap on enumerated words.
pub const DEFAULT_WORD_CAP: usize = 2_000_000;

/// Enumerates all tensor words, or all nonvanishing canonical symmetric words, of
/// length `0..=max_length`.
pub fn enumerate_words(degrees: &[i64], flavor: Flavor, max_length: usize, cap: usize) -> Result<WordList> {
    let n = degrees.len();
    let mut words: Vec<Word> = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_length {
        let mut next = Vec::new();
        for w in &layer {
            let start = match flavor {
                Flavor::Tensor => 0,
                Flavor::Symmetric => w.last().copied().unwrap_or(0),
            };
            for g in start..n {
                if flavor == Flavor::Symmetric && w.last() == Some(&g) && is_odd(degrees[g]) {
                    continue;
                }
                let mut nw = w.clone();
                nw.push(g);
                next.push(nw);
            }
            if words.len() + next.len() > cap {
                return Err(Error::ResourceLimit(format!("word enumeration exceeds the cap of {cap} words")));
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    Ok(WordList { flavor, words })
}

/// True when every entry of the vector is zero.
pub fn all_zero<'a>(it: impl IntoIterator<Item = &'a Scalar>) -> bool {
    it.into_iter().all(|q| q.is_zero())
}

pub fn abs_is_one(q: &Scalar) -> bool {
    q.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[1], &[1]), int(-1));
        assert_eq!(koszul_sign(&[2], &[1]), int(1));
        // pairing sign with |w1| = 1, |phi^2| = -1
        assert_eq!(koszul_sign(&[1], &[-1]), int(-1));
    }

    #[test]
    fn koszul_is_multiplicative_over_concatenation() {
        let a = [1, 2];
        let b = [3];
        let c = [1, 1, 1];
        let joined: Vec<i64> = b.iter().chain(c.iter()).copied().collect();
        assert_eq!(koszul_sign(&a, &joined), koszul_sign(&a, &b) * koszul_sign(&a, &c));
    }

    #[test]
    fn shift_and_dual() {
        let v = GradedSpace::new(vec![("x".into(), 1), ("y".into(), 1), ("z".into(), 2)]).unwrap();
        assert_eq!(v.shift(1).degrees(), vec![0, 0, 1]);
        assert_eq!(v.shift(1).shift(-1), v);
        let w = GradedSpace::new(vec![("p".into(), 1), ("q".into(), 2)]).unwrap();
        assert_eq!(w.shift(-1).dual(), w.dual().shift(1));
        let u = GradedSpace::new(vec![("x".into(), 1)]).unwrap();
        assert_eq!(u.dual().basis(), &[("x^t".to_string(), -1)]);
        assert_eq!(v.dual().dual(), v);
        let t = GradedSpace::new(vec![("a".into(), 1), ("b".into(), 1), ("c".into(), -2)]).unwrap();
        assert_eq!(t.dual().degrees(), vec![-1, -1, 2]);
    }

    #[test]
    fn duplicate_symbols_rejected() {
        assert!(GradedSpace::new(vec![("x".into(), 0), ("x".into(), 1)]).is_err());
    }

    #[test]
    fn word_enumeration() {
        let t = enumerate_words(&[1, 1], Flavor::Tensor, 2, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(t.words.iter().filter(|w| w.len() == 2).count(), 4);
        // two generators whose shifted degree is even: x⊙x, x⊙y, y⊙y
        let s = enumerate_words(&[0, 0], Flavor::Symmetric, 2, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(s.words.iter().filter(|w| w.len() == 2).count(), 3);
        // odd generators: only x⊙y survives
        let s = enumerate_words(&[1, 1], Flavor::Symmetric, 2, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(s.words.iter().filter(|w| w.len() == 2).count(), 1);
        let e = enumerate_words(&[3, 4], Flavor::Tensor, 0, DEFAULT_WORD_CAP).unwrap();
        assert_eq!(e.words, vec![Vec::<usize>::new()]);
        assert!(enumerate_words(&[0; 5], Flavor::Tensor, 6, 100).is_err());
    }

    #[test]
    fn canonicalization() {
        let degs = [1, 1, 2];
        assert_eq!(canonicalize_symmetric(&[1, 0], &degs), Some((vec![0, 1], int(-1))));
        assert_eq!(canonicalize_symmetric(&[2, 0], &degs), Some((vec![0, 2], int(1))));
        assert_eq!(canonicalize_symmetric(&[0, 1, 0], &degs), None);
        assert_eq!(canonicalize_symmetric(&[2, 2], &degs), Some((vec![2, 2], int(1))));
    }

    #[test]
    fn scalar_parsing() {
        assert_eq!(parse_scalar("3"), Some(int(3)));
        assert_eq!(parse_scalar("-1/2"), Some(ratio(-1, 2)));
        assert_eq!(parse_scalar("2/4"), None);
        assert_eq!(parse_scalar("3/1"), None);
        assert_eq!(parse_scalar("03"), None);
        assert_eq!(parse_scalar("1/-2"), None);
        assert_eq!(format_scalar(&ratio(-3, 6)), "-1/2");
    }
}
