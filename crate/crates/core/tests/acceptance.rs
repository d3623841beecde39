//! Acceptance suite: one PASS/FAIL line per criterion. Runs as a plain binary so the
//! lines are always printed; exits nonzero if any criterion fails.

#![allow(clippy::type_complexity, clippy::needless_range_loop)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{random_derivation, replace_line};
use hptk::algebra::{check_gbv, degree_block, AlgebraPresentation, Bilinear, Bracket};
use hptk::coalgebra::{
    ainfty_to_codifferential, basis_words, binomial, check_linfty, check_stasheff, coderivation_square,
    codifferential_to_ainfty, codifferential_to_linfty, derivation_to_infinity, dualize, infinity_to_derivation,
    linfty_to_codifferential, undualize, unshuffles,
};
use hptk::commands::{self, DeformOptions, Mode, SplittingChoice, TransferOptions};
use hptk::corpus;
use hptk::document::parse;
use hptk::graded::{int, sign, Flavor};
use hptk::linalg::{solve_exact, LinMap, Vector};
use hptk::perturbation::{deform_dga, deform_poisson_gerstenhaber, derivation_initiator, run_bpl, InitiatorKind};
use hptk::report::StructureReport;
use hptk::splitting::{compute_splitting, hodge_splitting, make_sdr, verify_sdr, Splitting};
use hptk::transfer::{chen_transfer, twisting_cochain, verify_flatness, verify_twisting_cochain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ensure_passed(r: &StructureReport, what: &str) -> Result<(), String> {
    ensure(r.passed(), || format!("{what}:\n{r}"))
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn vec_of(p: &AlgebraPresentation, terms: &[(i64, &str)]) -> Vector {
    Vector::from_pairs(terms.iter().map(|&(c, s)| (p.index(s).unwrap(), int(c))))
}

// 1 ------------------------------------------------------------------------------------

/// Each defect: model, line replaced (or appended when `from` is empty), law, witness
/// inputs, defect.
const DEFECTS: [(&str, &str, &str, &str, &[&str], &str); 5] = [
    ("T2", "product 1 x -> 1 x", "product 1 x -> 2 x", "unit", &["x"], "1 x"),
    ("D2", "", "product x y -> 1 y", "leibniz", &["x", "x"], "-1 y"),
    ("H3CE", "", "differential ac -> 1 abc", "leibniz", &["a", "c"], "1 abc"),
    ("H3GBV", "product e2 e1 -> -1 e1e2", "product e2 e1 -> 1 e1e2", "graded_commutativity", &["e1", "e2"], "2 e1e2"),
    (
        "MAT2",
        "bracket E12 E21 -> 1 E11, -1 E22",
        "bracket E12 E21 -> 1 E11, 1 E22",
        "antisymmetry",
        &["E12", "E21"],
        "2 E22",
    ),
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for (name, src) in corpus::ALL {
        ensure_passed(&commands::validation_suite(&parse(src).unwrap()), name)?;
    }
    let mut found = Vec::new();
    for (name, from, to, law, inputs, defect) in DEFECTS {
        let src = corpus::source(name).unwrap();
        let doc = if from.is_empty() { format!("{src}{to}\n") } else { replace_line(src, from, to) };
        let report = commands::validation_suite(&parse(&doc).map_err(|e| e.to_string())?);
        let l = report.law(law).ok_or(format!("{name}: no law {law}"))?;
        let hit = l.witnesses.iter().find(|w| w.inputs == inputs);
        let w = hit.ok_or_else(|| format!("{name}: {law} lacks witness {inputs:?}:\n{report}"))?;
        ensure(w.render_defect() == defect, || format!("{name}: defect {} != {defect}", w.render_defect()))?;
        found.push(format!("{name}:{law}({})", inputs.join(",")));
    }
    within(start, Duration::from_secs(5), "validation")?;
    Ok(found.join(" "))
}

// 2 ------------------------------------------------------------------------------------

/// `dim H^k = dim A^k − rank d_k − rank d_{k−1}`, from row reduction of degree blocks.
fn betti_by_rank(p: &AlgebraPresentation) -> Vec<(i64, usize)> {
    let d = p.differential_or_zero();
    let deg = p.degrees();
    let rank = |k: i64| {
        let (src, dst, block) = degree_block(&d, &deg, k);
        if src.is_empty() || dst.is_empty() {
            0
        } else {
            solve_exact(&block).rank()
        }
    };
    p.space
        .degree_range()
        .into_iter()
        .map(|k| (k, deg.iter().filter(|&&x| x == k).count() - rank(k) - rank(k - 1)))
        .collect()
}

fn criterion_2() -> Outcome {
    for (name, src) in corpus::ALL {
        let p = parse(src).unwrap();
        let expected = betti_by_rank(&p);
        let routes: [(&str, Splitting); 2] =
            [("auto", compute_splitting(&p).unwrap()), ("hodge", hodge_splitting(&p).unwrap().0)];
        for (route, s) in routes {
            let what = format!("{name}/{route}");
            ensure(s.betti(&p) == expected, || format!("{what}: betti {:?} vs {expected:?}", s.betti(&p)))?;
            ensure_passed(&s.verify(&p), &what)?;
            let sdr = verify_sdr(&make_sdr(&p, &s));
            for side in ["side_phi_nabla", "side_f_phi", "side_phi_phi"] {
                // vacuous on ∇ when the model is acyclic
                let checked = sdr.law(side).map(|l| l.checked);
                ensure(checked.is_some_and(|c| c > 0 || s.harmonic_dim() == 0), || {
                    format!("{what}: {side} not checked")
                })?;
            }
            ensure_passed(&sdr, &what)?;
            if name == "H3CE" {
                let betti: Vec<usize> = s.betti(&p).into_iter().map(|(_, b)| b).collect();
                ensure(betti == [1, 2, 2, 1], || format!("{what}: betti {betti:?}"))?;
                let q = s.q.apply(&vec_of(&p, &[(1, "ab")]));
                ensure(q == vec_of(&p, &[(1, "c")]), || format!("{what}: Q(ab) = {q:?}"))?;
            }
        }
    }
    Ok("Betti numbers agree on both routes; H3CE (1,2,2,1), Q(ab)=c".into())
}

// 3 ------------------------------------------------------------------------------------

/// Massey product `⟨x,y,z⟩ = Ū z + x̄ V` with `dU = x̄ y`, `dV = ȳ z`, `ū = (−1)^{1+|u|} u`.
/// In H3CE the only nonzero exact element of degree 2 is `ab = d c`.
fn massey_h3ce(p: &AlgebraPresentation, x: &str, y: &str, z: &str) -> Vector {
    let primitive = |v: &Vector| -> Vector {
        if v.is_zero() {
            return Vector::zero();
        }
        let ab = vec_of(p, &[(1, "ab")]);
        let c = v.get(p.index("ab").unwrap());
        assert_eq!(v, &ab.scaled(&c), "not a multiple of ab");
        vec_of(p, &[(1, "c")]).scaled(&c)
    };
    let bar = |v: &Vector| {
        let d = v.degree(&p.degrees()).unwrap_or(0);
        v.scaled(&sign(1 + d))
    };
    let (x, y, z) = (vec_of(p, &[(1, x)]), vec_of(p, &[(1, y)]), vec_of(p, &[(1, z)]));
    let u = primitive(&p.mul(&bar(&x), &y));
    let v = primitive(&p.mul(&bar(&y), &z));
    let mut out = p.mul(&bar(&u), &z);
    out.add_scaled(&p.mul(&bar(&x), &v), &int(1));
    out
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let p = corpus::load("H3CE");
    let s = compute_splitting(&p).unwrap();
    let t = chen_transfer(&p, &s, 5).map_err(|e| e.to_string())?;
    let flat = verify_flatness(&p, &t, None);
    ensure_passed(&flat, "flatness")?;
    let m = t.infinity();
    let names = s.labels(&p);
    let stasheff = check_stasheff(&m, 5, &|i| names[i].clone());
    ensure_passed(&stasheff, "stasheff")?;
    ensure(stasheff.law("stasheff_5").is_some(), || "arity 5 not checked".into())?;
    ensure(m.arity_is_zero(1), || "m1 != 0".into())?;

    let h = s.harmonic_dim();
    for i in 0..h {
        for j in 0..h {
            let product = s.projector.apply(&p.mul(&s.harmonic[i], &s.harmonic[j]));
            let m2 = m.eval(&[i, j]);
            ensure(m2 == product, || format!("m2({}, {}) = {m2:?}, product {product:?}", names[i], names[j]))?;
        }
    }

    let idx = |l: &str| names.iter().position(|n| n == l).unwrap();
    let mut ratio = None;
    let mut shown = Vec::new();
    for (x, y, z) in [("a", "a", "b"), ("a", "b", "b")] {
        let massey = s.projector.apply(&massey_h3ce(&p, x, y, z));
        let m3 = m.eval(&[idx(x), idx(y), idx(z)]);
        ensure(!m3.is_zero() && !massey.is_zero(), || format!("m3({x},{y},{z}) vanishes"))?;
        let eps = if m3 == massey {
            1
        } else if m3 == massey.scaled(&int(-1)) {
            -1
        } else {
            0
        };
        ensure(eps != 0, || format!("m3({x},{y},{z}) = {m3:?} vs Massey {massey:?}"))?;
        ensure(*ratio.get_or_insert(eps) == eps, || "inconsistent Massey sign".into())?;
        let (k, c) = m3.iter().next().unwrap();
        shown.push(format!("m3({x},{y},{z})={} {}", c, names[k]));
    }
    within(start, Duration::from_secs(30), "H3CE transfer")?;
    Ok(format!("{} (= {}Massey)", shown.join(" "), if ratio == Some(1) { "+" } else { "-" }))
}

// 4 ------------------------------------------------------------------------------------

fn criterion_4() -> Outcome {
    let p = corpus::load("T2");
    let s = compute_splitting(&p).unwrap();
    let t = chen_transfer(&p, &s, 5).map_err(|e| e.to_string())?;
    let m = t.infinity();
    for n in 3..=5 {
        ensure(m.arity_is_zero(n), || format!("m{n} != 0"))?;
    }
    let linear: Vec<_> = t.omega.keys().filter(|w| w.len() != 1).collect();
    ensure(linear.is_empty(), || format!("ω has terms {linear:?}"))?;
    for (j, a) in s.harmonic.iter().enumerate() {
        ensure(t.omega.get(&vec![j]) == Some(a), || format!("ω coefficient of X{j}"))?;
    }
    Ok("m3 = m4 = m5 = 0, ω = ω[1]".into())
}

// 5 ------------------------------------------------------------------------------------

fn stasheff_laws_pass(r: &StructureReport, prefix: &str) -> bool {
    r.laws.iter().filter(|l| l.name.starts_with(prefix)).all(|l| l.passed())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let label = |i: usize| format!("v{i}");
    let (mut a_zero, mut l_zero) = (0, 0);
    const CASES: usize = 300;
    for case in 0..CASES {
        let density = [0.15, 0.3, 0.5][case % 3];
        let d = random_derivation(&mut rng, Flavor::Tensor, density);
        let m = derivation_to_infinity(&d);
        let b = ainfty_to_codifferential(&m);
        let square_zero = coderivation_square(&b, 3).map_err(|e| format!("{e:?}"))?.ops.is_zero();
        let pass = stasheff_laws_pass(&check_stasheff(&m, 3, &label), "stasheff_");
        ensure(pass == square_zero, || format!("A∞ case {case}: stasheff {pass}, b²=0 {square_zero}"))?;
        a_zero += square_zero as usize;
        ensure(codifferential_to_ainfty(&b) == m, || format!("A∞ case {case}: m → b → m"))?;
        ensure(infinity_to_derivation(&m) == d && undualize(&dualize(&d)) == d, || {
            format!("A∞ case {case}: dual round trip")
        })?;

        let d = random_derivation(&mut rng, Flavor::Symmetric, density);
        let l = derivation_to_infinity(&d);
        let b = linfty_to_codifferential(&l);
        let square_zero = coderivation_square(&b, 3).map_err(|e| format!("{e:?}"))?.ops.is_zero();
        let pass = stasheff_laws_pass(&check_linfty(&l, 3, &label), "jacobi_");
        ensure(pass == square_zero, || format!("L∞ case {case}: jacobi {pass}, b²=0 {square_zero}"))?;
        l_zero += square_zero as usize;
        ensure(codifferential_to_linfty(&b) == l, || format!("L∞ case {case}: l → b → l"))?;
        ensure(infinity_to_derivation(&l) == d && undualize(&dualize(&d)) == d, || {
            format!("L∞ case {case}: dual round trip")
        })?;
    }
    ensure(a_zero > 0 && a_zero < CASES && l_zero > 0 && l_zero < CASES, || {
        format!("degenerate sample: {a_zero}/{l_zero} square-zero")
    })?;
    for n in 1..=6 {
        for k in 0..=n {
            let factorial = |m: usize| (1..=m).product::<usize>();
            let c = factorial(n) / (factorial(k) * factorial(n - k));
            ensure(unshuffles(k, n).len() == c && binomial(n, k) == c, || format!("|Sh({k},{n})| != {c}"))?;
        }
    }
    Ok(format!("{CASES}+{CASES} structures ({a_zero} A∞ / {l_zero} L∞ square-zero); unshuffles n ≤ 6"))
}

// 6 ------------------------------------------------------------------------------------

fn criterion_6() -> Outcome {
    let p = corpus::load("H3CE");
    let s = compute_splitting(&p).unwrap();
    let t = chen_transfer(&p, &s, 5).map_err(|e| e.to_string())?;
    let law = verify_twisting_cochain(&p, &twisting_cochain(&t), &dualize(&t.partial));
    let words = basis_words(s.harmonic_dim(), 5, Flavor::Tensor, &s.harmonic_degrees).len();
    ensure(law.passed() && law.checked == words, || format!("{}", StructureReport::from(vec![law.clone()])))?;
    Ok(format!("τb + 𝔡τ = τ∪τ on {words} words"))
}

// 7 ------------------------------------------------------------------------------------

/// `∂X^k` to word length 2 on H3CE with harmonic basis 1, a, b, ac, bc, abc, from
/// `∂X^k = −(−1)^{|α_k|} Σ (−1)^{|X^i||α_j|} c^k_{ij} X^i X^j`, `|X^i| = 1 − |α_i|`.
const H3CE_PARTIAL: [(&str, &[(i64, &str, &str)]); 6] = [
    ("1", &[(-1, "1", "1")]),
    ("a", &[(-1, "1", "a"), (1, "a", "1")]),
    ("b", &[(-1, "1", "b"), (1, "b", "1")]),
    ("ac", &[(-1, "1", "ac"), (-1, "ac", "1")]),
    ("bc", &[(-1, "1", "bc"), (-1, "bc", "1")]),
    ("abc", &[(-1, "1", "abc"), (1, "a", "bc"), (-1, "b", "ac"), (1, "ac", "b"), (-1, "bc", "a"), (1, "abc", "1")]),
];

fn criterion_7() -> Outcome {
    // t = 0
    for (name, src) in corpus::ALL {
        let p = parse(src).unwrap();
        let sdr = make_sdr(&p, &compute_splitting(&p).unwrap());
        let out = run_bpl(&sdr, &LinMap::zero(p.dim(), p.dim()), 1).map_err(|e| e.to_string())?;
        ensure(out.sdr == sdr && out.state.stages() == 0, || format!("{name}: t = 0 changed the SDR"))?;
    }

    // tφ = 0: t = ∇uf with u : a ↦ ac on ℋ
    let p = corpus::load("H3CE");
    let s = compute_splitting(&p).unwrap();
    let names = s.labels(&p);
    let hidx = |l: &str| names.iter().position(|n| n == l).unwrap();
    let sdr = make_sdr(&p, &s);
    let h = s.harmonic_dim();
    let mut u = LinMap::zero(h, h);
    u.columns[hidx("a")] = Vector::unit(hidx("ac"));
    let t = sdr.nabla.compose(&u).compose(&sdr.f);
    ensure(t.compose(&sdr.phi).is_zero(), || "tφ != 0".into())?;
    let out = run_bpl(&sdr, &t, 4).map_err(|e| e.to_string())?;
    let expected = sdr.d_small.add(&sdr.f.compose(&t).compose(&sdr.nabla));
    ensure(out.sdr.d_small == expected && expected == u, || "collapse: 𝒟 != 𝔡_M + ft∇".into())?;
    ensure_passed(&verify_sdr(&out.sdr), "collapse SDR")?;

    // ∂^a on H3CE ⊗ T̄ to word length 2
    let def = deform_dga(&p, &s, 3, 2).map_err(|e| e.to_string())?;
    let stab = def.report.law("stabilization").ok_or("no stabilization law")?;
    ensure(stab.passed() && stab.checked > 0, || format!("stabilization: {stab:?}"))?;
    ensure_passed(&def.report, "deform_dga")?;
    let ring = &def.small.ring;
    let gen = |l: &str| hidx(l);
    let hdeg = &s.harmonic_degrees;
    let mut expected = LinMap::zero(def.small.dim(), def.small.dim());
    for a in 0..h {
        for (k, terms) in H3CE_PARTIAL {
            let col = def.small.index(a, ring.index_of(&[gen(k)]).unwrap());
            let mut v = Vector::zero();
            for &(c, i, j) in terms {
                let w = ring.index_of(&[gen(i), gen(j)]).unwrap();
                v.add_term(def.small.index(a, w), &(int(c) * sign(hdeg[a])));
            }
            expected.columns[col] = v;
        }
    }
    let state = &def.bpl.state;
    let sum12 = state.partial_sum(2);
    let base = hptk::perturbation::tensor_sdr(&make_sdr(&p, &s), ring.dim());
    let f_sum_nabla = base.f.compose(&sum12).compose(&base.nabla);
    ensure(f_sum_nabla == expected, || "f(t1 + t2)∇ differs from the hand expansion".into())?;
    ensure(def.deformed_differential() == &expected, || "𝒟 differs from the hand expansion".into())?;
    let oracle = derivation_initiator(&def.small, 0, &def.stage_one.partial);
    ensure(oracle == expected, || "𝒟 differs from ∂^a on ℋ ⊗ T̄".into())?;
    Ok(format!("t=0 identity, tφ=0 collapse, 𝒟 matches hand expansion (BPL stages used: {})", state.stages()))
}

// 8 ------------------------------------------------------------------------------------

const REQUIRED_LAWS: [&str; 6] =
    ["initiator_derivation", "perturbed_square_zero", "initial.sdr1", "sdr1", "stabilization", "stasheff_3"];

fn criterion_8() -> Outcome {
    let mut shown = Vec::new();
    for name in ["H3GBV", "MAT2"] {
        let start = Instant::now();
        let p = corpus::load(name);
        let s = compute_splitting(&p).unwrap();
        let d = deform_poisson_gerstenhaber(&p, &s, 3, 2, InitiatorKind::LieAdjoint).map_err(|e| e.to_string())?;
        ensure_passed(&d.report, name)?;
        for law in REQUIRED_LAWS {
            ensure(d.report.law(law).is_some(), || format!("{name}: {law} missing"))?;
        }
        within(start, Duration::from_secs(120), name)?;
        shown.push(format!("{name} {} checks in {:.2?}", d.report.laws.len(), start.elapsed()));
    }

    // zero bracket: ∂^{aL} restricted to ℋ ⊗ 1 is Chen's ∂^a
    let mut p = corpus::load("H3CE");
    p.bracket = Some(Bracket { shift: 0, table: Bilinear::new() });
    let s = compute_splitting(&p).unwrap();
    let d = deform_poisson_gerstenhaber(&p, &s, 4, 2, InitiatorKind::LieAdjoint).map_err(|e| e.to_string())?;
    ensure_passed(&d.report, "zero bracket")?;
    ensure(d.deformed_differential().is_zero(), || "zero bracket: 𝒟 != 0".into())?;
    let chen = chen_transfer(&p, &s, 4).unwrap().infinity();
    for n in 1..=4 {
        for w in basis_words(s.harmonic_dim(), n, Flavor::Tensor, &s.harmonic_degrees).iter().filter(|w| w.len() == n) {
            let lifted: Vec<usize> = w.iter().map(|&a| d.small.index(a, 0)).collect();
            let promoted = Vector::from_pairs(chen.eval(w).iter().map(|(k, c)| (d.small.index(k, 0), c.clone())));
            ensure(d.structure.eval(&lifted) == promoted, || format!("zero bracket differs at {w:?}"))?;
        }
    }
    shown.push("zero bracket reproduces ∂^a".into());
    Ok(shown.join("; "))
}

// 9 ------------------------------------------------------------------------------------

const THETA: &str = "name THETA
scalars rational
basis 1 0
basis t1 1
basis t2 1
basis t1t2 2
unit 1
product 1 1 -> 1 1
product 1 t1 -> 1 t1
product 1 t2 -> 1 t2
product 1 t1t2 -> 1 t1t2
product t1 1 -> 1 t1
product t2 1 -> 1 t2
product t1t2 1 -> 1 t1t2
product t1 t2 -> 1 t1t2
product t2 t1 -> -1 t1t2
bv t1t2 -> 1 1
";

fn criterion_9() -> Outcome {
    let p = corpus::load("H3GBV");
    let r = check_gbv(&p);
    ensure_passed(&r, "H3GBV")?;
    let triv = r.law("trivial_bracket_on_delta_cohomology").ok_or("exactness law missing")?;
    ensure(triv.checked > 0, || "no Δ-closed pairs checked".into())?;

    let theta = parse(THETA).map_err(|e| e.to_string())?;
    let r = check_gbv(&theta);
    let leibniz = r.law("gerstenhaber_leibniz").ok_or("leibniz law missing")?;
    let w = leibniz.witnesses.iter().find(|w| w.inputs == ["t1", "t2", "t2"]);
    let w = w.ok_or_else(|| format!("no witness (t1, t2, t2):\n{r}"))?;
    ensure(w.render_defect() == "2 t2", || format!("defect {}", w.render_defect()))?;
    Ok(format!("H3GBV passes ({} closed pairs); Λ(θ1,θ2) rejected at (θ1,θ2,θ2)", triv.checked))
}

// 10 -----------------------------------------------------------------------------------

fn all_certificates() -> Vec<String> {
    let mut out = Vec::new();
    let mut push = |o: commands::Output| out.push(o.certificate.map(|c| c.render()).unwrap_or(o.text));
    for (_, src) in corpus::ALL {
        push(commands::validate(src));
        push(commands::cohomology_command(src, SplittingChoice::Auto));
        push(commands::cohomology_command(src, SplittingChoice::Hodge));
        push(commands::transfer(src, TransferOptions { arity: 4, ..Default::default() }));
        push(commands::transfer(src, TransferOptions { arity: 3, mode: Mode::LInfty, ..Default::default() }));
    }
    push(commands::massey(corpus::H3CE, ["a", "b", "b"], SplittingChoice::Auto));
    push(commands::deform(corpus::H3CE, DeformOptions { initiator: InitiatorKind::Associative, ..Default::default() }));
    push(commands::deform(corpus::H3GBV, DeformOptions::default()));
    push(commands::deform(corpus::MAT2, DeformOptions::default()));
    out
}

fn criterion_10() -> Outcome {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(all_certificates)
    };
    let one = run(1);
    let four = run(4);
    ensure(one.len() == four.len(), || "different certificate counts".into())?;
    for (k, (a, b)) in one.iter().zip(&four).enumerate() {
        ensure(a == b, || format!("certificate {k} differs between 1 and 4 threads"))?;
    }
    ensure(run(4) == four, || "certificates differ between two 4-thread runs".into())?;
    Ok(format!("{} certificates byte-identical across 1/4 threads", one.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("structure validation", criterion_1),
        ("splitting and SDR", criterion_2),
        ("Chen transfer on H3CE", criterion_3),
        ("formality of T2", criterion_4),
        ("dictionary biconditional", criterion_5),
        ("twisting cochain", criterion_6),
        ("perturbation lemma", criterion_7),
        ("deformation pipelines", criterion_8),
        ("GBV laws", criterion_9),
        ("determinism", criterion_10),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", k + 1);
        if !filter.is_empty() && !filter.iter().any(|f| f == &id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or(e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} [{took:.2?}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {id:>2} {name} [{took:.2?}]: {why}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
