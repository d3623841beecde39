//! Cohomological splittings `𝒜 = ℋ ⊕ 𝔡M ⊕ M`, Hodge data, and SDR data.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::algebra::{cohomology, AlgebraPresentation, InnerProduct};
use crate::error::{Error, Result};
use crate::graded::{format_scalar, Scalar};
use crate::linalg::{coordinates, inverse, rank_of, solve_exact, LinMap, Vector};
use crate::report::{LawResult, StructureReport, Witness};

#[derive(Clone, Debug)]
pub struct Splitting {
    /// Harmonic representatives, as vectors of 𝒜.
    pub harmonic: Vec<Vector>,
    pub harmonic_degrees: Vec<i64>,
    /// Complement `M` of `ker 𝔡`.
    pub complement: Vec<Vector>,
    /// Homotopy of degree -1 with `1 - (𝔡Q + Q𝔡) = inclusion ∘ projector`.
    pub q: LinMap,
    /// `𝒜 → ℋ`, in harmonic coordinates.
    pub projector: LinMap,
    /// `ℋ → 𝒜`.
    pub inclusion: LinMap,
    pub dim: usize,
}

impl Splitting {
    /// Builds the projector and `Q` from explicit bases of `ℋ` and `M`.
    fn from_bases(p: &AlgebraPresentation, harmonic: Vec<Vector>, complement: Vec<Vector>) -> Result<Splitting> {
        let n = p.dim();
        let d = p.differential_or_zero();
        let deg = p.degrees();
        let h = harmonic.len();
        let m = complement.len();
        let exact: Vec<Vector> = complement.iter().map(|x| d.apply(x)).collect();
        let mut basis = harmonic.clone();
        basis.extend(exact.iter().cloned());
        basis.extend(complement.iter().cloned());
        if basis.len() != n || rank_of(&basis, n) != n {
            return Err(Error::Structure("ℋ ⊕ 𝔡M ⊕ M is not a direct sum decomposition".into()));
        }
        let change = inverse(&LinMap::from_columns(n, basis)).expect("full rank");
        let mut proj_cols = Vec::with_capacity(n);
        let mut q_cols = Vec::with_capacity(n);
        for j in 0..n {
            let c = change.column(j);
            proj_cols.push(c.filtered(|k| k < h));
            let mut x1 = Vector::zero();
            for (k, coef) in c.iter().filter(|(k, _)| (h..h + m).contains(k)) {
                x1.add_scaled(&complement[k - h], coef);
            }
            q_cols.push(x1);
        }
        let harmonic_degrees = harmonic.iter().map(|v| v.degree(&deg).unwrap_or(0)).collect();
        Ok(Splitting {
            inclusion: LinMap::from_columns(n, harmonic.clone()),
            harmonic,
            harmonic_degrees,
            complement,
            q: LinMap::from_columns(n, q_cols),
            projector: LinMap::from_columns(h, proj_cols),
            dim: n,
        })
    }

    /// Names for the harmonic basis: the symbol of a monomial representative, else `h<j>`.
    pub fn labels(&self, p: &AlgebraPresentation) -> Vec<String> {
        self.harmonic
            .iter()
            .enumerate()
            .map(|(j, v)| match v.iter().next() {
                Some((i, c)) if v.len() == 1 && c.is_one() => p.label(i),
                _ => format!("h{j}"),
            })
            .collect()
    }

    pub fn harmonic_dim(&self) -> usize {
        self.harmonic.len()
    }

    /// `(degree, rank ℋ)` over the degrees of the parent space.
    pub fn betti(&self, p: &AlgebraPresentation) -> Vec<(i64, usize)> {
        p.space
            .degree_range()
            .into_iter()
            .map(|k| (k, self.harmonic_degrees.iter().filter(|&&d| d == k).count()))
            .collect()
    }

    /// Checks every defining property of a cohomological splitting.
    pub fn verify(&self, p: &AlgebraPresentation) -> StructureReport {
        let n = self.dim;
        let d = p.differential_or_zero();
        let deg = p.degrees();
        let label = |i: usize| p.label(i);
        let mut report = StructureReport::new();

        let mut closed = LawResult::new("harmonic_closed");
        for (k, v) in self.harmonic.iter().enumerate() {
            let dv = d.apply(v);
            closed.record((!dv.is_zero()).then(|| Witness::new(vec![format!("h{k}")], &dv, label)));
        }
        report.push(closed);

        let mut inj = LawResult::new("d_injective_on_complement");
        let images: Vec<Vector> = self.complement.iter().map(|x| d.apply(x)).collect();
        inj.checked = 1;
        if rank_of(&images, n) != images.len() {
            inj = inj.fail_with("𝔡 has a kernel on M");
        }
        report.push(inj);

        let mut htpy = LawResult::new("homotopy_formula");
        let incl_proj = self.inclusion.compose(&self.projector);
        let dq = d.compose(&self.q).add(&self.q.compose(&d));
        for j in 0..n {
            let mut defect = Vector::unit(j);
            defect.add_scaled(dq.column(j), &-Scalar::one());
            defect.add_scaled(incl_proj.column(j), &-Scalar::one());
            htpy.record((!defect.is_zero()).then(|| Witness::new(vec![p.label(j)], &defect, label)));
        }
        report.push(htpy);

        let mut side = LawResult::new("q_side_conditions");
        let q2 = self.q.compose(&self.q);
        let qi = self.q.compose(&self.inclusion);
        let pq = self.projector.compose(&self.q);
        for j in 0..n {
            side.record(
                (!q2.column(j).is_zero())
                    .then(|| Witness::new(vec![format!("Q²({})", p.label(j))], q2.column(j), label)),
            );
            side.record(
                (!pq.column(j).is_zero())
                    .then(|| Witness::new(vec![format!("PQ({})", p.label(j))], pq.column(j), |i| format!("h{i}"))),
            );
        }
        for k in 0..self.harmonic_dim() {
            side.record((!qi.column(k).is_zero()).then(|| Witness::new(vec![format!("Q(h{k})")], qi.column(k), label)));
        }
        report.push(side);

        let mut degree = LawResult::new("q_degree");
        degree.checked = 1;
        if !self.q.respects_degree(&deg, &deg, -1) {
            degree = degree.fail_with("Q is not of degree -1");
        }
        report.push(degree);
        report
    }
}

fn require_square_zero(p: &AlgebraPresentation) -> Result<LinMap> {
    let d = p.differential_or_zero();
    if !d.compose(&d).is_zero() {
        return Err(Error::Structure("differential does not square to zero".into()));
    }
    Ok(d)
}

/// Greedy extension of `span` by unit vectors from `candidates`, in order.
fn greedy_complement(span: &[Vector], candidates: &[usize], dim: usize) -> Vec<Vector> {
    let mut current = span.to_vec();
    let mut chosen = Vec::new();
    for &c in candidates {
        current.push(Vector::unit(c));
        if rank_of(&current, dim) == current.len() {
            chosen.push(Vector::unit(c));
        } else {
            current.pop();
        }
    }
    chosen
}

/// The combinatorial splitting: ℋ is the echelon choice of representatives made by
/// [`cohomology`], M a greedy complement of `ker 𝔡` among basis monomials.
pub fn compute_splitting(p: &AlgebraPresentation) -> Result<Splitting> {
    require_square_zero(p)?;
    let h = cohomology(p)?;
    let deg = p.degrees();
    let mut complement = Vec::new();
    for k in p.space.degree_range() {
        let idx: Vec<usize> = (0..p.dim()).filter(|&i| deg[i] == k).collect();
        let kernel = h.kernels.get(&k).cloned().unwrap_or_default();
        complement.extend(greedy_complement(&kernel, &idx, p.dim()));
    }
    Splitting::from_bases(p, h.representatives.clone(), complement)
}

/// Gram matrices, adjoint, Laplacian and Green operator on the whole space.
#[derive(Clone, Debug)]
pub struct HodgeData {
    pub gram: LinMap,
    pub adjoint: LinMap,
    pub laplacian: LinMap,
    pub green: LinMap,
}

/// Assembles the block-diagonal gram matrix, rejecting any block that is not
/// symmetric positive definite (Sylvester's criterion on leading principal minors).
pub fn gram_matrix(p: &AlgebraPresentation) -> Result<LinMap> {
    let n = p.dim();
    let deg = p.degrees();
    let blocks: BTreeMap<i64, Vec<Vec<Scalar>>> = match &p.inner_product {
        None | Some(InnerProduct::MonomialOrthonormal) => return Ok(LinMap::identity(n)),
        Some(InnerProduct::PerDegree(b)) => b.clone(),
    };
    let mut cols = vec![Vector::zero(); n];
    for k in p.space.degree_range() {
        let idx: Vec<usize> = (0..n).filter(|&i| deg[i] == k).collect();
        let block = blocks.get(&k).ok_or_else(|| Error::Structure(format!("no gram block for degree {k}")))?;
        if block.len() != idx.len() || block.iter().any(|r| r.len() != idx.len()) {
            return Err(Error::Structure(format!("gram block for degree {k} has the wrong size")));
        }
        for a in 0..idx.len() {
            for b in 0..idx.len() {
                if block[a][b] != block[b][a] {
                    return Err(Error::Structure(format!("gram block for degree {k} is not symmetric")));
                }
            }
        }
        for size in 1..=idx.len() {
            let minor = determinant(&block[..size].iter().map(|r| r[..size].to_vec()).collect::<Vec<_>>());
            if minor <= Scalar::zero() {
                return Err(Error::Structure(format!(
                    "gram block for degree {k} is not positive definite: leading minor of order {size} is {}",
                    format_scalar(&minor)
                )));
            }
        }
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                cols[j].add_term(i, &block[a][b]);
            }
        }
    }
    Ok(LinMap::from_columns(n, cols))
}

fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else { return Scalar::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..n {
            let f = &a[r][c] / &a[c][c];
            let pivot = a[c].clone();
            for (x, y) in a[r].iter_mut().zip(&pivot) {
                *x -= &f * y;
            }
        }
    }
    det
}

/// Hodge-style splitting: ℋ = ker □, M = im 𝔡*, Q = 𝔡*G.
pub fn hodge_splitting(p: &AlgebraPresentation) -> Result<(Splitting, HodgeData)> {
    let n = p.dim();
    let d = require_square_zero(p)?;
    let gram = gram_matrix(p)?;
    let gram_inv = inverse(&gram).expect("positive definite");
    let adjoint = gram_inv.compose(&d.transpose()).compose(&gram);
    let laplacian = d.compose(&adjoint).add(&adjoint.compose(&d));
    let solved = solve_exact(&laplacian);
    let kernel = solved.kernel();
    let image = solved.image(&laplacian);
    // □ restricted to its image is invertible; G is its inverse there and 0 on ker □.
    let mut basis = kernel.clone();
    basis.extend(image.iter().cloned());
    let change = inverse(&LinMap::from_columns(n, basis))
        .ok_or_else(|| Error::Structure("ker □ and im □ are not complementary".into()))?;
    let restricted: Vec<Vector> = image
        .iter()
        .map(|v| {
            let c = coordinates(&image, n, &laplacian.apply(v)).expect("□ preserves its image");
            Vector::from_dense(&c)
        })
        .collect();
    let restricted_inv = inverse(&LinMap::from_columns(image.len(), restricted))
        .ok_or_else(|| Error::Structure("□ is not invertible on its image".into()))?;
    let k = kernel.len();
    let green_cols = (0..n)
        .map(|j| {
            let c = change.column(j);
            let img_part = Vector::from_pairs(c.iter().filter(|(i, _)| *i >= k).map(|(i, x)| (i - k, x.clone())));
            let pre = restricted_inv.apply(&img_part);
            let mut out = Vector::zero();
            for (i, x) in pre.iter() {
                out.add_scaled(&image[i], x);
            }
            out
        })
        .collect();
    let green = LinMap::from_columns(n, green_cols);
    let complement_all = solve_exact(&adjoint).image(&adjoint);
    let mut split = Splitting::from_bases(p, kernel, complement_all)?;
    split.q = adjoint.compose(&green);
    Ok((split, HodgeData { gram, adjoint, laplacian, green }))
}

impl HodgeData {
    /// Adjointness, Laplacian, Green-operator identities and the explicit decomposition
    /// `α − α^H = 𝔡𝔡*Gα + 𝔡*G𝔡α`.
    pub fn verify(&self, p: &AlgebraPresentation, split: &Splitting) -> StructureReport {
        let n = p.dim();
        let d = p.differential_or_zero();
        let label = |i: usize| p.label(i);
        let mut report = StructureReport::new();
        let mut adj = LawResult::new("adjointness");
        let lhs = d.transpose().compose(&self.gram);
        let rhs = self.gram.compose(&self.adjoint);
        for j in 0..n {
            let defect = lhs.column(j) - rhs.column(j);
            adj.record((!defect.is_zero()).then(|| Witness::new(vec![p.label(j)], &defect, label)));
        }
        report.push(adj);
        let harm = split.inclusion.compose(&split.projector);
        let id_minus_h = LinMap::identity(n).sub(&harm);
        let mut green = LawResult::new("green_inverts_laplacian");
        let gl = self.green.compose(&self.laplacian);
        let lg = self.laplacian.compose(&self.green);
        for j in 0..n {
            let a = gl.column(j) - id_minus_h.column(j);
            let b = lg.column(j) - id_minus_h.column(j);
            green.record((!a.is_zero()).then(|| Witness::new(vec![p.label(j)], &a, label)));
            green.record((!b.is_zero()).then(|| Witness::new(vec![p.label(j)], &b, label)));
        }
        report.push(green);
        let mut comm = LawResult::new("green_commutes");
        let c1 = self.green.compose(&d).sub(&d.compose(&self.green));
        let c2 = self.green.compose(&self.adjoint).sub(&self.adjoint.compose(&self.green));
        for j in 0..n {
            comm.record((!c1.column(j).is_zero()).then(|| Witness::new(vec![p.label(j)], c1.column(j), label)));
            comm.record((!c2.column(j).is_zero()).then(|| Witness::new(vec![p.label(j)], c2.column(j), label)));
        }
        report.push(comm);
        let mut decomp = LawResult::new("hodge_decomposition");
        let ddg = d.compose(&self.adjoint).compose(&self.green);
        let dgd = self.adjoint.compose(&self.green).compose(&d);
        let total = ddg.add(&dgd);
        for j in 0..n {
            let defect = id_minus_h.column(j) - total.column(j);
            decomp.record((!defect.is_zero()).then(|| Witness::new(vec![p.label(j)], &defect, label)));
        }
        report.push(decomp);
        // Q = 𝔡*G must agree with the x₁-component of a = a^H + 𝔡x₁ + x₂
        let mut qform = LawResult::new("q_is_adjoint_green");
        let q = match Splitting::from_bases(p, split.harmonic.clone(), split.complement.clone()) {
            Ok(s) => s.q,
            Err(e) => {
                report.push(qform.fail_with(e.to_string()));
                return report;
            }
        };
        for j in 0..n {
            let defect = q.column(j) - split.q.column(j);
            qform.record((!defect.is_zero()).then(|| Witness::new(vec![p.label(j)], &defect, label)));
        }
        report.push(qform);
        report
    }
}

/// Strong deformation retract data between a small complex `(M, d_M)` and a big one `(A, d_A)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdrData {
    pub d_small: LinMap,
    pub d_big: LinMap,
    /// `∇ : M → A`
    pub nabla: LinMap,
    /// `f : A → M`
    pub f: LinMap,
    /// `φ : A → A`, degree -1
    pub phi: LinMap,
}

/// `A = 𝒜, M = ℋ, ∇` the inclusion, `f` the projection and `φ = −Q`.
pub fn make_sdr(p: &AlgebraPresentation, s: &Splitting) -> SdrData {
    SdrData {
        d_small: LinMap::zero(s.harmonic_dim(), s.harmonic_dim()),
        d_big: p.differential_or_zero(),
        nabla: s.inclusion.clone(),
        f: s.projector.clone(),
        phi: s.q.scaled(&-Scalar::one()),
    }
}

fn column_law(
    name: &str,
    lhs: &LinMap,
    rhs: &LinMap,
    input: &dyn Fn(usize) -> String,
    output: &dyn Fn(usize) -> String,
) -> LawResult {
    let mut law = LawResult::new(name);
    if lhs.rows != rhs.rows || lhs.cols() != rhs.cols() {
        return law.fail_with(format!(
            "dimension mismatch: {}×{} vs {}×{}",
            lhs.rows,
            lhs.cols(),
            rhs.rows,
            rhs.cols()
        ));
    }
    for j in 0..lhs.cols() {
        let defect = lhs.column(j) - rhs.column(j);
        law.record((!defect.is_zero()).then(|| Witness::new(vec![input(j)], &defect, output)));
    }
    law
}

fn composable(a: &LinMap, b: &LinMap) -> bool {
    a.cols() == b.rows
}

/// Checks SDR1, SDR2, the chain-map properties and the three side conditions.
/// `small` / `big` label basis elements of M and A.
pub fn verify_sdr_labelled(
    sdr: &SdrData,
    small: &dyn Fn(usize) -> String,
    big: &dyn Fn(usize) -> String,
) -> StructureReport {
    let mut report = StructureReport::new();
    let m = sdr.d_small.cols();
    let a = sdr.d_big.cols();
    let shapes_ok = sdr.nabla.rows == a
        && sdr.nabla.cols() == m
        && sdr.f.rows == m
        && sdr.f.cols() == a
        && sdr.phi.rows == a
        && sdr.phi.cols() == a;
    if !shapes_ok || !composable(&sdr.f, &sdr.nabla) {
        report.push(LawResult::new("sdr1").fail_with(format!(
            "shape mismatch: ∇ is {}×{}, f is {}×{}, φ is {}×{}, M has dim {m}, A has dim {a}",
            sdr.nabla.rows,
            sdr.nabla.cols(),
            sdr.f.rows,
            sdr.f.cols(),
            sdr.phi.rows,
            sdr.phi.cols()
        )));
        return report;
    }
    report.push(column_law("sdr1", &sdr.f.compose(&sdr.nabla), &LinMap::identity(m), small, small));
    let rhs = LinMap::identity(a).add(&sdr.d_big.compose(&sdr.phi)).add(&sdr.phi.compose(&sdr.d_big));
    report.push(column_law("sdr2", &sdr.nabla.compose(&sdr.f), &rhs, big, big));
    report.push(column_law(
        "nabla_chain_map",
        &sdr.d_big.compose(&sdr.nabla),
        &sdr.nabla.compose(&sdr.d_small),
        small,
        big,
    ));
    report.push(column_law("f_chain_map", &sdr.f.compose(&sdr.d_big), &sdr.d_small.compose(&sdr.f), big, small));
    report.push(column_law("side_phi_nabla", &sdr.phi.compose(&sdr.nabla), &LinMap::zero(a, m), small, big));
    report.push(column_law("side_f_phi", &sdr.f.compose(&sdr.phi), &LinMap::zero(m, a), big, small));
    report.push(column_law("side_phi_phi", &sdr.phi.compose(&sdr.phi), &LinMap::zero(a, a), big, big));
    report
}

pub fn verify_sdr(sdr: &SdrData) -> StructureReport {
    verify_sdr_labelled(sdr, &|i| format!("m{i}"), &|i| format!("e{i}"))
}
