//! Sparse exact vectors, linear maps and reduced-echelon elimination.

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num::{One, Zero};

use crate::graded::Scalar;

/// A sparse vector: basis index to nonzero coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Vector(BTreeMap<usize, Scalar>);

impl Vector {
    pub fn zero() -> Self {
        Self(BTreeMap::new())
    }

    pub fn unit(i: usize) -> Self {
        let mut m = BTreeMap::new();
        m.insert(i, Scalar::one());
        Self(m)
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut v = Self::zero();
        for (i, c) in pairs {
            v.add_term(i, &c);
        }
        v
    }

    pub fn from_dense(entries: &[Scalar]) -> Self {
        Self::from_pairs(entries.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); dim];
        for (i, c) in &self.0 {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.0.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.0.iter().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, i: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(i).or_insert_with(Scalar::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &Vector, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, &(x * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Self(self.0.iter().map(|(i, x)| (*i, x * c)).collect())
    }

    pub fn remove(&mut self, i: usize) -> Option<Scalar> {
        self.0.remove(&i)
    }

    /// Keeps only indices for which `keep` holds.
    pub fn filtered(&self, keep: impl Fn(usize) -> bool) -> Vector {
        Self(self.0.iter().filter(|(i, _)| keep(**i)).map(|(i, c)| (*i, c.clone())).collect())
    }

    pub fn first_index(&self) -> Option<usize> {
        self.0.keys().next().copied()
    }

    /// The common degree of all entries, if the vector is homogeneous and nonzero.
    pub fn degree(&self, degrees: &[i64]) -> Option<i64> {
        let mut it = self.0.keys().map(|&i| degrees[i]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Splits a vector into homogeneous components.
    pub fn homogeneous_parts(&self, degrees: &[i64]) -> BTreeMap<i64, Vector> {
        let mut out: BTreeMap<i64, Vector> = BTreeMap::new();
        for (i, c) in self.iter() {
            out.entry(degrees[i]).or_default().add_term(i, c);
        }
        out
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scaled(&-Scalar::one())
    }
}

/// A linear map stored by columns: column `j` is the image of source basis element `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub rows: usize,
    pub columns: Vec<Vector>,
}

impl LinMap {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, columns: vec![Vector::zero(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, columns: (0..n).map(Vector::unit).collect() }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vector>) -> Self {
        debug_assert!(columns.iter().all(|c| c.iter().all(|(i, _)| i < rows)));
        Self { rows, columns }
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.columns[j]
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (j, c) in v.iter() {
            out.add_scaled(&self.columns[j], c);
        }
        out
    }

    /// `self ∘ rhs`.
    pub fn compose(&self, rhs: &LinMap) -> LinMap {
        assert_eq!(self.cols(), rhs.rows, "dimension mismatch in composition");
        LinMap { rows: self.rows, columns: rhs.columns.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, rhs: &LinMap) -> LinMap {
        self.combine(rhs, &Scalar::one())
    }

    pub fn sub(&self, rhs: &LinMap) -> LinMap {
        self.combine(rhs, &-Scalar::one())
    }

    fn combine(&self, rhs: &LinMap, c: &Scalar) -> LinMap {
        assert_eq!((self.rows, self.cols()), (rhs.rows, rhs.cols()), "dimension mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut v = a.clone();
                v.add_scaled(b, c);
                v
            })
            .collect();
        LinMap { rows: self.rows, columns }
    }

    pub fn scaled(&self, c: &Scalar) -> LinMap {
        LinMap { rows: self.rows, columns: self.columns.iter().map(|v| v.scaled(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vector::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vector::len).sum()
    }

    pub fn transpose(&self) -> LinMap {
        let mut cols = vec![Vector::zero(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, c) in col.iter() {
                cols[i].add_term(j, c);
            }
        }
        LinMap { rows: self.cols(), columns: cols }
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.columns[j].get(i)
    }

    /// Checks that every entry connects degree `n` to degree `n + shift`.
    pub fn respects_degree(&self, src: &[i64], dst: &[i64], shift: i64) -> bool {
        self.columns.iter().enumerate().all(|(j, col)| col.iter().all(|(i, _)| dst[i] == src[j] + shift))
    }

    /// First source basis element whose column differs between the two maps.
    pub fn first_difference(&self, rhs: &LinMap) -> Option<(usize, Vector)> {
        self.columns.iter().zip(&rhs.columns).enumerate().find_map(|(j, (a, b))| {
            let d = a - b;
            (!d.is_zero()).then_some((j, d))
        })
    }
}

/// Result of exact Gaussian elimination of a matrix `A` (acting on column vectors).
#[derive(Clone, Debug)]
pub struct Solved {
    pub rows: usize,
    pub cols: usize,
    /// Reduced row echelon rows of `A` together with the row operations applied to the identity.
    rref: Vec<Vec<Scalar>>,
    transform: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

/// Outcome of asking for a preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Preimage {
    Found(Vector),
    NotInImage,
}

/// Row-reduces the matrix given by `rows × cols` dense entries. Pivoting takes the
/// first nonzero column and the smallest eligible row index, so results depend only on
/// basis order.
pub fn solve_exact(matrix: &LinMap) -> Solved {
    let rows = matrix.rows;
    let cols = matrix.cols();
    let mut a: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); cols]; rows];
    for (j, col) in matrix.columns.iter().enumerate() {
        for (i, c) in col.iter() {
            a[i][j] = c.clone();
        }
    }
    let mut t: Vec<Vec<Scalar>> =
        (0..rows).map(|i| (0..rows).map(|k| if i == k { Scalar::one() } else { Scalar::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        t.swap(r, p);
        let inv = Scalar::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for x in t[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (pr, pt) = (a[r].clone(), t[r].clone());
                for (x, y) in a[i].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
                for (x, y) in t[i].iter_mut().zip(&pt) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Solved { rows, cols, rref: a, transform: t, pivots }
}

impl Solved {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Kernel basis in reduced echelon form: one vector per free column, with a 1 there.
    pub fn kernel(&self) -> Vec<Vector> {
        let free: Vec<usize> = (0..self.cols).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = Vector::unit(f);
                for (r, &p) in self.pivots.iter().enumerate() {
                    v.add_term(p, &-self.rref[r][f].clone());
                }
                v
            })
            .collect()
    }

    /// Image basis: the pivot columns of the original matrix.
    pub fn image(&self, matrix: &LinMap) -> Vec<Vector> {
        self.pivots.iter().map(|&p| matrix.column(p).clone()).collect()
    }

    /// An exact preimage of `target` with free variables set to zero.
    pub fn preimage(&self, target: &Vector) -> Preimage {
        let b = target.to_dense(self.rows);
        let tb: Vec<Scalar> = self.transform.iter().map(|row| row.iter().zip(&b).map(|(x, y)| x * y).sum()).collect();
        if tb[self.rank()..].iter().any(|x| !x.is_zero()) {
            return Preimage::NotInImage;
        }
        Preimage::Found(Vector::from_pairs(self.pivots.iter().enumerate().map(|(r, &p)| (p, tb[r].clone()))))
    }
}

/// Rank of a family of vectors living in a space of dimension `dim`.
pub fn rank_of(vectors: &[Vector], dim: usize) -> usize {
    solve_exact(&LinMap::from_columns(dim, vectors.to_vec())).rank()
}

/// Solves `Σ x_k basis_k = target` for coordinates `x`.
pub fn coordinates(basis: &[Vector], dim: usize, target: &Vector) -> Option<Vec<Scalar>> {
    let m = LinMap::from_columns(dim, basis.to_vec());
    match solve_exact(&m).preimage(target) {
        Preimage::Found(x) => Some(x.to_dense(basis.len())),
        Preimage::NotInImage => None,
    }
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(m: &LinMap) -> Option<LinMap> {
    let n = m.rows;
    if m.cols() != n {
        return None;
    }
    let s = solve_exact(m);
    if s.rank() != n {
        return None;
    }
    let cols = (0..n)
        .map(|j| match s.preimage(&Vector::unit(j)) {
            Preimage::Found(x) => x,
            Preimage::NotInImage => unreachable!("full rank"),
        })
        .collect();
    Some(LinMap::from_columns(n, cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::int;

    #[test]
    fn zero_matrix() {
        let m = LinMap::zero(1, 1);
        let s = solve_exact(&m);
        assert_eq!(s.kernel(), vec![Vector::unit(0)]);
        assert!(s.image(&m).is_empty());
    }

    #[test]
    fn forced_preimage() {
        // d: span{x} -> span{y}, dx = y
        let m = LinMap::from_columns(1, vec![Vector::unit(0)]);
        let s = solve_exact(&m);
        assert!(s.kernel().is_empty());
        assert_eq!(s.image(&m), vec![Vector::unit(0)]);
        assert_eq!(s.preimage(&Vector::unit(0)), Preimage::Found(Vector::unit(0)));
    }

    #[test]
    fn not_in_image_is_an_outcome() {
        let m = LinMap::from_columns(2, vec![Vector::unit(0)]);
        assert_eq!(solve_exact(&m).preimage(&Vector::unit(1)), Preimage::NotInImage);
    }

    #[test]
    fn inverse_roundtrip() {
        let m =
            LinMap::from_columns(2, vec![Vector::from_dense(&[int(2), int(1)]), Vector::from_dense(&[int(1), int(1)])]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.compose(&inv), LinMap::identity(2));
    }
}
