//! Algebras presented by structure constants, their validators and cohomology.
//!
//! Every law is checked on basis elements only; by multilinearity that is enough.

use std::collections::BTreeMap;

use num::One;

use crate::error::{Error, Result};
use crate::graded::{sign, GradedSpace, Scalar};
use crate::linalg::{solve_exact, LinMap, Preimage, Vector};
use crate::report::{LawResult, StructureReport, Witness};

/// Sparse structure constants of a bilinear operation: `e_i ∘ e_j = Σ_k c^k_{ij} e_k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bilinear {
    pub entries: BTreeMap<(usize, usize), Vector>,
}

impl Bilinear {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Vector) {
        if v.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), v);
        }
    }

    pub fn basis(&self, i: usize, j: usize) -> Vector {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some(v) = self.entries.get(&(i, j)) {
                    out.add_scaled(v, &(a * b));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// True if every entry `e_i ∘ e_j` has degree `|e_i| + |e_j| + shift`.
    pub fn respects_degree(&self, degrees: &[i64], shift: i64) -> Option<(usize, usize)> {
        self.entries.iter().find_map(|(&(i, j), v)| {
            v.iter().any(|(k, _)| degrees[k] != degrees[i] + degrees[j] + shift).then_some((i, j))
        })
    }
}

/// A Lie-type bracket of degree `-shift`. `shift = 0` is a Poisson / DGLA bracket;
/// `shift = -1` is a Gerstenhaber bracket, a Lie bracket for the grading `|a| + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub shift: i64,
    pub table: Bilinear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InnerProduct {
    MonomialOrthonormal,
    /// Gram matrices per degree, in the basis order of that degree.
    PerDegree(BTreeMap<i64, Vec<Vec<Scalar>>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    pub name: String,
    pub space: GradedSpace,
    pub unit: Option<usize>,
    pub product: Option<Bilinear>,
    pub differential: Option<LinMap>,
    pub bracket: Option<Bracket>,
    pub bv_operator: Option<LinMap>,
    pub inner_product: Option<InnerProduct>,
}

impl AlgebraPresentation {
    pub fn new(name: impl Into<String>, space: GradedSpace) -> Self {
        Self {
            name: name.into(),
            space,
            unit: None,
            product: None,
            differential: None,
            bracket: None,
            bv_operator: None,
            inner_product: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.space.degrees()
    }

    pub fn label(&self, i: usize) -> String {
        self.space.symbol(i).to_string()
    }

    pub fn product_or_zero(&self) -> Bilinear {
        self.product.clone().unwrap_or_default()
    }

    pub fn differential_or_zero(&self) -> LinMap {
        self.differential.clone().unwrap_or_else(|| LinMap::zero(self.dim(), self.dim()))
    }

    pub fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        self.product.as_ref().map(|p| p.apply(x, y)).unwrap_or_default()
    }

    pub fn d(&self, x: &Vector) -> Vector {
        self.differential.as_ref().map(|d| d.apply(x)).unwrap_or_default()
    }

    /// Parses a symbol list like `a*b` into a basis index.
    pub fn index(&self, sym: &str) -> Option<usize> {
        self.space.index_of(sym)
    }
}

fn lbl(p: &AlgebraPresentation) -> impl Fn(usize) -> String + '_ {
    move |i| p.label(i)
}

fn triples(n: usize) -> impl Iterator<Item = (usize, usize, usize)> {
    (0..n).flat_map(move |a| (0..n).flat_map(move |b| (0..n).map(move |c| (a, b, c))))
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn witness(p: &AlgebraPresentation, inputs: &[usize], defect: Vector) -> Option<Witness> {
    (!defect.is_zero()).then(|| Witness::new(inputs.iter().map(|&i| p.label(i)).collect(), &defect, lbl(p)))
}

fn degree_law(name: &str, bad: Option<String>) -> LawResult {
    let mut law = LawResult::new(name);
    match bad {
        None => law.checked = 1,
        Some(msg) => law = law.fail_with(msg),
    }
    law
}

/// Laws of the associative product and of a degree +1 differential.
fn dga_laws(p: &AlgebraPresentation, report: &mut StructureReport) {
    let n = p.dim();
    let deg = p.degrees();
    let prod = p.product_or_zero();
    report.push(degree_law(
        "product_degree",
        prod.respects_degree(&deg, 0).map(|(i, j)| format!("{}·{} has the wrong degree", p.label(i), p.label(j))),
    ));
    let mut assoc = LawResult::new("associativity");
    for (a, b, c) in triples(n) {
        let (ea, eb, ec) = (Vector::unit(a), Vector::unit(b), Vector::unit(c));
        let lhs = prod.apply(&prod.apply(&ea, &eb), &ec);
        let rhs = prod.apply(&ea, &prod.apply(&eb, &ec));
        assoc.record(witness(p, &[a, b, c], &lhs - &rhs));
    }
    report.push(assoc);
    if let Some(u) = p.unit {
        let mut law = LawResult::new("unit");
        for a in 0..n {
            let ea = Vector::unit(a);
            let left = &prod.apply(&Vector::unit(u), &ea) - &ea;
            let right = &prod.apply(&ea, &Vector::unit(u)) - &ea;
            law.record(witness(p, &[a], &left + &right).or_else(|| witness(p, &[a], right)));
        }
        report.push(law);
    }
    if let Some(d) = &p.differential {
        differential_laws(p, d, report);
        let mut leibniz = LawResult::new("leibniz");
        for (a, b) in pairs(n) {
            let (ea, eb) = (Vector::unit(a), Vector::unit(b));
            let mut defect = d.apply(&prod.apply(&ea, &eb));
            defect.add_scaled(&prod.apply(&d.apply(&ea), &eb), &-Scalar::one());
            defect.add_scaled(&prod.apply(&ea, &d.apply(&eb)), &-sign(deg[a]));
            leibniz.record(witness(p, &[a, b], defect));
        }
        report.push(leibniz);
    }
}

fn differential_laws(p: &AlgebraPresentation, d: &LinMap, report: &mut StructureReport) {
    let deg = p.degrees();
    report.push(degree_law(
        "differential_degree",
        (!d.respects_degree(&deg, &deg, 1)).then(|| "differential is not of degree +1".to_string()),
    ));
    let mut sq = LawResult::new("d_squared");
    let d2 = d.compose(d);
    for a in 0..p.dim() {
        sq.record(witness(p, &[a], d2.column(a).clone()));
    }
    report.push(sq);
}

/// Lie laws of a bracket with the given shift, read in Lie degrees `|a| - shift`.
fn lie_laws(p: &AlgebraPresentation, br: &Bilinear, shift: i64, report: &mut StructureReport) {
    let n = p.dim();
    let deg = p.degrees();
    let ld: Vec<i64> = deg.iter().map(|d| d - shift).collect();
    report.push(degree_law(
        "bracket_degree",
        br.respects_degree(&deg, -shift).map(|(i, j)| format!("[{}, {}] has the wrong degree", p.label(i), p.label(j))),
    ));
    let mut anti = LawResult::new("antisymmetry");
    for (a, b) in pairs(n) {
        let mut defect = br.basis(a, b);
        defect.add_scaled(&br.basis(b, a), &sign(ld[a] * ld[b]));
        anti.record(witness(p, &[a, b], defect));
    }
    report.push(anti);
    let mut jac = LawResult::new("jacobi");
    for (a, b, c) in triples(n) {
        let (ea, eb, ec) = (Vector::unit(a), Vector::unit(b), Vector::unit(c));
        let mut defect = br.apply(&ea, &br.apply(&eb, &ec));
        defect.add_scaled(&br.apply(&br.apply(&ea, &eb), &ec), &-Scalar::one());
        defect.add_scaled(&br.apply(&eb, &br.apply(&ea, &ec)), &-sign(ld[a] * ld[b]));
        jac.record(witness(p, &[a, b, c], defect));
    }
    report.push(jac);
    if let Some(d) = &p.differential {
        let mut law = LawResult::new("d_bracket_derivation");
        for (a, b) in pairs(n) {
            let (ea, eb) = (Vector::unit(a), Vector::unit(b));
            let mut defect = d.apply(&br.apply(&ea, &eb));
            defect.add_scaled(&br.apply(&d.apply(&ea), &eb), &-Scalar::one());
            defect.add_scaled(&br.apply(&ea, &d.apply(&eb)), &-sign(ld[a]));
            law.record(witness(p, &[a, b], defect));
        }
        report.push(law);
    }
}

/// `[a, b·c] = [a, b]·c + (-1)^{(|a|-shift)|b|} b·[a, c]`.
fn compatibility_law(p: &AlgebraPresentation, br: &Bilinear, shift: i64, name: &str) -> LawResult {
    let n = p.dim();
    let deg = p.degrees();
    let prod = p.product_or_zero();
    let mut law = LawResult::new(name);
    for (a, b, c) in triples(n) {
        let (ea, eb, ec) = (Vector::unit(a), Vector::unit(b), Vector::unit(c));
        let mut defect = br.apply(&ea, &prod.apply(&eb, &ec));
        defect.add_scaled(&prod.apply(&br.apply(&ea, &eb), &ec), &-Scalar::one());
        defect.add_scaled(&prod.apply(&eb, &br.apply(&ea, &ec)), &-sign((deg[a] - shift) * deg[b]));
        law.record(witness(p, &[a, b, c], defect));
    }
    law
}

fn missing(name: &str, what: &str) -> StructureReport {
    let mut r = StructureReport::new();
    r.push(LawResult::new(name).fail_with(format!("{what} not present")));
    r
}

pub fn check_dga(p: &AlgebraPresentation) -> StructureReport {
    let mut report = StructureReport::new();
    if p.product.is_none() && p.dim() > 0 {
        return missing("product_present", "product");
    }
    dga_laws(p, &mut report);
    report
}

pub fn check_dgla(p: &AlgebraPresentation) -> StructureReport {
    let Some(br) = &p.bracket else { return missing("bracket_present", "bracket") };
    let mut report = StructureReport::new();
    if let Some(d) = &p.differential {
        differential_laws(p, d, &mut report);
    }
    lie_laws(p, &br.table, br.shift, &mut report);
    report
}

pub fn check_poisson(p: &AlgebraPresentation) -> StructureReport {
    let Some(br) = &p.bracket else { return missing("bracket_present", "bracket") };
    if br.shift != 0 {
        return missing("bracket_shift_0", "a degree-0 bracket");
    }
    let mut report = check_dga(p);
    lie_laws(p, &br.table, 0, &mut report);
    report.push(compatibility_law(p, &br.table, 0, "poisson_leibniz"));
    report
}

pub fn check_gerstenhaber(p: &AlgebraPresentation) -> StructureReport {
    let Some(br) = &p.bracket else { return missing("bracket_present", "bracket") };
    if br.shift != -1 {
        return missing("bracket_shift_-1", "a shifted bracket");
    }
    let mut report = check_dga(p);
    lie_laws(p, &br.table, -1, &mut report);
    report.push(compatibility_law(p, &br.table, -1, "gerstenhaber_leibniz"));
    report
}

/// The bracket `[a•b]_Δ = (-1)^{|a|}(Δ(ab) - Δa·b - (-1)^{|a|} a·Δb)`, without checking Δ² = 0.
fn derived_bracket(p: &AlgebraPresentation, delta: &LinMap) -> Bilinear {
    let n = p.dim();
    let deg = p.degrees();
    let prod = p.product_or_zero();
    let mut out = Bilinear::new();
    for (a, b) in pairs(n) {
        let (ea, eb) = (Vector::unit(a), Vector::unit(b));
        let mut v = delta.apply(&prod.apply(&ea, &eb));
        v.add_scaled(&prod.apply(&delta.apply(&ea), &eb), &-Scalar::one());
        v.add_scaled(&prod.apply(&ea, &delta.apply(&eb)), &-sign(deg[a]));
        out.set(a, b, v.scaled(&sign(deg[a])));
    }
    out
}

/// The Gerstenhaber bracket generated by the BV operator.
pub fn bracket_from_delta(p: &AlgebraPresentation) -> Result<Bracket> {
    let delta = p.bv_operator.as_ref().ok_or_else(|| Error::Structure("no BV operator declared".into()))?;
    if !delta.compose(delta).is_zero() {
        return Err(Error::Structure("BV operator does not square to zero".into()));
    }
    Ok(Bracket { shift: -1, table: derived_bracket(p, delta) })
}

pub fn check_gbv(p: &AlgebraPresentation) -> StructureReport {
    let Some(delta) = &p.bv_operator else { return missing("bv_present", "BV operator") };
    let n = p.dim();
    let deg = p.degrees();
    let prod = p.product_or_zero();
    let mut report = StructureReport::new();

    // the underlying algebra: associative, graded commutative, unital
    let mut base = AlgebraPresentation { differential: None, ..p.clone() };
    base.bracket = None;
    report.extend(check_dga(&base));
    let mut comm = LawResult::new("graded_commutativity");
    for (a, b) in pairs(n) {
        let mut defect = prod.basis(a, b);
        defect.add_scaled(&prod.basis(b, a), &-sign(deg[a] * deg[b]));
        comm.record(witness(p, &[a, b], defect));
    }
    report.push(comm);

    report.push(degree_law(
        "delta_odd",
        (0..n)
            .find(|&j| delta.column(j).iter().any(|(i, _)| (deg[i] - deg[j]).rem_euclid(2) == 0))
            .map(|j| format!("Δ is not of odd degree at {}", p.label(j))),
    ));
    let mut sq = LawResult::new("delta_squared");
    let d2 = delta.compose(delta);
    for a in 0..n {
        sq.record(witness(p, &[a], d2.column(a).clone()));
    }
    report.push(sq);

    let br = derived_bracket(p, delta);
    report.push(compatibility_law(p, &br, -1, "gerstenhaber_leibniz"));
    let mut lie = StructureReport::new();
    lie_laws(&AlgebraPresentation { differential: None, ..p.clone() }, &br, -1, &mut lie);
    for law in lie.laws.into_iter().filter(|l| l.name != "bracket_degree") {
        report.push(law);
    }

    let mut dglaw = LawResult::new("delta_bracket_derivation");
    for (a, b) in pairs(n) {
        let (ea, eb) = (Vector::unit(a), Vector::unit(b));
        let mut defect = delta.apply(&br.apply(&ea, &eb));
        defect.add_scaled(&br.apply(&delta.apply(&ea), &eb), &-Scalar::one());
        defect.add_scaled(&br.apply(&ea, &delta.apply(&eb)), &-sign(deg[a] - 1));
        dglaw.record(witness(p, &[a, b], defect));
    }
    report.push(dglaw);

    if let Some(u) = p.unit {
        let mut law = LawResult::new("unit_bracket");
        for a in 0..n {
            law.record(witness(p, &[u, a], br.basis(u, a)));
        }
        report.push(law);
    }

    // [a•b]_Δ is Δ-exact whenever Δa = Δb = 0
    let mut triv = LawResult::new("trivial_bracket_on_delta_cohomology");
    let solved = solve_exact(delta);
    let closed = solved.kernel();
    for (x, y) in
        closed.iter().enumerate().flat_map(|(i, x)| closed.iter().map(move |y| (i, x, y)).map(|(_, x, y)| (x, y)))
    {
        let value = br.apply(x, y);
        let exact = matches!(solved.preimage(&value), Preimage::Found(_));
        triv.checked += 1;
        if !exact {
            triv.failures += 1;
            if triv.witnesses.len() < crate::report::WITNESS_CAP {
                triv.witnesses.push(Witness::new(vec![render_vector(p, x), render_vector(p, y)], &value, lbl(p)));
            }
        }
    }
    report.push(triv);

    if let Some(d) = &p.differential {
        differential_laws(p, d, &mut report);
        let mut anti = LawResult::new("d_delta_anticommute");
        let s = d.compose(delta).add(&delta.compose(d));
        for a in 0..n {
            anti.record(witness(p, &[a], s.column(a).clone()));
        }
        report.push(anti);
        let mut der = LawResult::new("d_bracket_derivation");
        for (a, b) in pairs(n) {
            let (ea, eb) = (Vector::unit(a), Vector::unit(b));
            let mut defect = d.apply(&br.apply(&ea, &eb));
            defect.add_scaled(&br.apply(&d.apply(&ea), &eb), &-Scalar::one());
            defect.add_scaled(&br.apply(&ea, &d.apply(&eb)), &-sign(deg[a] - 1));
            der.record(witness(p, &[a, b], defect));
        }
        report.push(der);
    }
    report
}

pub fn render_vector(p: &AlgebraPresentation, v: &Vector) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter()
        .map(
            |(i, c)| {
                if c.is_one() {
                    p.label(i)
                } else {
                    format!("{}*{}", crate::graded::format_scalar(c), p.label(i))
                }
            },
        )
        .collect::<Vec<_>>()
        .join(" + ")
}

/// The bracket to use for adjoint actions: the declared one, else one derived from Δ.
pub fn effective_bracket(p: &AlgebraPresentation) -> Result<Bracket> {
    if let Some(b) = &p.bracket {
        return Ok(b.clone());
    }
    bracket_from_delta(p)
}

/// Matrix of `b ↦ [a, b]`.
pub fn adjoint_action(p: &AlgebraPresentation, a: &Vector) -> Result<LinMap> {
    let br = effective_bracket(p)?;
    let cols = (0..p.dim()).map(|b| br.table.apply(a, &Vector::unit(b))).collect();
    Ok(LinMap::from_columns(p.dim(), cols))
}

/// Cohomology of `(𝒜, 𝔡)` with chosen representatives and the induced product.
#[derive(Clone, Debug)]
pub struct Cohomology {
    /// `(degree, dimension)` for every degree present in the space.
    pub betti: Vec<(i64, usize)>,
    pub representatives: Vec<Vector>,
    pub rep_degrees: Vec<i64>,
    /// Per degree: kernel and image bases.
    pub kernels: BTreeMap<i64, Vec<Vector>>,
    pub images: BTreeMap<i64, Vec<Vector>>,
    /// Structure constants of the induced product in the representative basis.
    pub product: Option<Bilinear>,
    dim: usize,
}

impl Cohomology {
    /// Coordinates of the class of a closed vector, or `None` if it is not closed-looking
    /// (not in span of representatives + image).
    pub fn class_of(&self, v: &Vector) -> Option<Vec<Scalar>> {
        let mut basis = self.representatives.clone();
        let k = basis.len();
        for im in self.images.values() {
            basis.extend(im.iter().cloned());
        }
        let coords = crate::linalg::coordinates(&basis, self.dim, v)?;
        Some(coords[..k].to_vec())
    }

    pub fn total_dim(&self) -> usize {
        self.representatives.len()
    }
}

/// Restriction of `d` to degree `deg`, as a map between the degree blocks.
pub fn degree_block(d: &LinMap, degrees: &[i64], deg: i64) -> (Vec<usize>, Vec<usize>, LinMap) {
    let src: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == deg).collect();
    let dst: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == deg + 1).collect();
    let pos: BTreeMap<usize, usize> = dst.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let cols = src.iter().map(|&j| Vector::from_pairs(d.column(j).iter().map(|(i, c)| (pos[&i], c.clone())))).collect();
    (src.clone(), dst, LinMap::from_columns(pos.len(), cols))
}

fn embed(v: &Vector, indices: &[usize]) -> Vector {
    Vector::from_pairs(v.iter().map(|(k, c)| (indices[k], c.clone())))
}

pub fn cohomology(p: &AlgebraPresentation) -> Result<Cohomology> {
    let n = p.dim();
    let deg = p.degrees();
    let d = p.differential_or_zero();
    if !d.compose(&d).is_zero() {
        return Err(Error::Structure("differential does not square to zero".into()));
    }
    let mut kernels = BTreeMap::new();
    let mut images: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    for k in p.space.degree_range() {
        let (src, dst, block) = degree_block(&d, &deg, k);
        let solved = solve_exact(&block);
        kernels.insert(k, solved.kernel().iter().map(|v| embed(v, &src)).collect::<Vec<_>>());
        images.insert(k + 1, solved.image(&block).iter().map(|v| embed(v, &dst)).collect());
    }
    let mut representatives = Vec::new();
    let mut rep_degrees = Vec::new();
    let mut betti = Vec::new();
    for k in p.space.degree_range() {
        let mut span: Vec<Vector> = images.get(&k).cloned().unwrap_or_default();
        let mut count = 0;
        for z in &kernels[&k] {
            let mut trial = span.clone();
            trial.push(z.clone());
            if crate::linalg::rank_of(&trial, n) > span.len() {
                span = trial;
                representatives.push(z.clone());
                rep_degrees.push(k);
                count += 1;
            }
        }
        let expected = kernels[&k].len() - images.get(&k).map_or(0, Vec::len);
        debug_assert_eq!(count, expected);
        betti.push((k, count));
    }
    let mut h = Cohomology { betti, representatives, rep_degrees, kernels, images, product: None, dim: n };
    if let Some(prod) = &p.product {
        let mut table = Bilinear::new();
        for i in 0..h.total_dim() {
            for j in 0..h.total_dim() {
                let v = prod.apply(&h.representatives[i], &h.representatives[j]);
                let coords = h
                    .class_of(&v)
                    .ok_or_else(|| Error::Structure("product of cocycles is not a cocycle (Leibniz fails)".into()))?;
                table.set(i, j, Vector::from_dense(&coords));
            }
        }
        h.product = Some(table);
    }
    Ok(h)
}

/// Induced product recomputed after moving every representative by an exact element.
/// Equal to `cohomology(p).product` whenever the product is well defined on classes.
pub fn induced_product_with_perturbed_representatives(p: &AlgebraPresentation) -> Result<Option<Bilinear>> {
    let h = cohomology(p)?;
    let Some(prod) = &p.product else { return Ok(None) };
    let perturbed: Vec<Vector> = h
        .representatives
        .iter()
        .zip(&h.rep_degrees)
        .map(|(r, k)| match h.images.get(k).and_then(|im| im.first()) {
            Some(b) => r + b,
            None => r.clone(),
        })
        .collect();
    let mut table = Bilinear::new();
    for i in 0..perturbed.len() {
        for j in 0..perturbed.len() {
            let v = prod.apply(&perturbed[i], &perturbed[j]);
            let coords =
                h.class_of(&v).ok_or_else(|| Error::Structure("perturbed product left the cocycles".into()))?;
            table.set(i, j, Vector::from_dense(&coords));
        }
    }
    Ok(Some(table))
}
