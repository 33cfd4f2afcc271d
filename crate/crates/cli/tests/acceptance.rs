//! Acceptance criteria 1 to 11, one verdict line each.
//!
//! The lines go straight to stderr and show up in plain `cargo test` output.
//! Criteria listed in `KNOWN_RED` are computed in full and
//! reported as FAIL; the test asserts that they still fail so the list cannot
//! silently go stale, and asserts every other criterion passes.

use std::io::Write;
use std::process::Command;

use kahler_twistor::bilinear::{
    gap_forms, kahlerian_cky_residual, prop2_condition_check, theorem1_residual, BracketMode, GapSpec,
};
use kahler_twistor::identities::{fiber_suite, field_suite};
use kahler_twistor::sample;
use kahler_twistor::spinor::{chirality_consistency, raising_lowering_check};
use kahler_twistor::twistor::{solve_space_unbounded, SolutionSpace};
use kahler_twistor::{
    Bigrade, BilinearContext, Exact, Float, FormFiber, Involution, PairingMatrix, Sampling, Scalar, SpinGeometry,
    SpinorFiber, Theorem1Options, TwistorVariant, TypeConvention,
};
use num_traits::{One, Zero};

const KNOWN_RED: &[&str] = &["3", "6", "8a", "8b", "8c", "8d"];

type Family = Vec<(usize, TwistorVariant)>;

struct Verdict {
    id: &'static str,
    title: &'static str,
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(id: &'static str, title: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Self { id, title, pass, detail: detail.into() }
    }
}

fn binomial(n: usize, k: i64) -> usize {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = k as usize;
    let num: u128 = ((n - k + 1)..=n).map(|x| x as u128).product();
    let den: u128 = (1..=k).map(|x| x as u128).product();
    (num / den) as usize
}

fn exact_geometry(m: usize) -> SpinGeometry<Exact> {
    SpinGeometry::flat(m, TypeConvention::Spectral).unwrap()
}

fn context<'a, S: Scalar>(geo: &'a SpinGeometry<S>, pm: &'a PairingMatrix<S>) -> BilinearContext<'a, S> {
    BilinearContext::new(geo, pm).unwrap()
}

fn criterion_1() -> Vec<Verdict> {
    let mut bad = Vec::new();
    let mut total = 0;
    for m in 1..=3 {
        for rep in fiber_suite(m, 1000, 0xacc1).unwrap() {
            total += 1;
            if !rep.pass {
                bad.push(format!("m={m} {} ({} failures)", rep.identity, rep.failures));
            }
        }
    }
    let detail = format!("{} identities x m=1..3 x 1000 cases; failing: {:?}", total / 3, bad);
    vec![Verdict::new("1", "fiber identity suite", bad.is_empty(), detail)]
}

fn criterion_2() -> Vec<Verdict> {
    let mut bad = Vec::new();
    let mut total = 0;
    for m in 1..=2 {
        for degree in [1, 3] {
            for rep in field_suite(m, 25, degree, 0xacc2).unwrap() {
                total += 1;
                if !rep.pass {
                    bad.push(format!("m={m} deg={degree} {} ({} failures)", rep.identity, rep.failures));
                }
            }
        }
    }
    let detail = format!("{total} suite runs (m=1,2; degree 1 and 3; 25 cases); failing: {bad:?}");
    vec![Verdict::new("2", "field identity suite", bad.is_empty(), detail)]
}

/// Eigenvalue, ladder and parity checks under one labelling.
fn spectrum_checks(m: usize, conv: TypeConvention) -> (bool, bool, bool) {
    let geo = SpinGeometry::<Exact>::flat(m, conv).unwrap();
    let omega = geo.kahler().kahler_form().clone();
    let mut total = 0;
    let mut spectrum = true;
    for r in 0..=m {
        let basis = geo.type_basis(r).unwrap();
        total += basis.len();
        spectrum &= basis.len() == binomial(m, r as i64);
        let ev = Exact::new(Zero::zero(), num_rational::BigRational::from_integer((2 * r as i64 - m as i64).into()));
        for v in &basis {
            spectrum &= geo.rep().act_raw(&omega, v) == v.scale(&ev);
        }
    }
    spectrum &= total == 1 << m;
    let ladder = raising_lowering_check(&geo).unwrap().pass();
    let parity = chirality_consistency(&geo).pass();
    (spectrum, ladder, parity)
}

fn criterion_3() -> Vec<Verdict> {
    let mut pass = true;
    let mut parts = Vec::new();
    for m in 1..=4 {
        let mut any = false;
        let mut line = format!("m={m}");
        for conv in TypeConvention::ALL {
            let (s, l, p) = spectrum_checks(m, conv);
            any |= s && l && p;
            line += &format!(" {conv}[spectrum={s} ladder={l} parity={p}]");
        }
        pass &= any;
        parts.push(line);
    }
    vec![Verdict::new("3", "spectrum calibration", pass, parts.join("; "))]
}

fn rank(mut rows: Vec<Vec<Exact>>) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n {
        let Some(piv) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = Exact::one() / rows[rank][col].clone();
        let pivot_row: Vec<Exact> = rows[rank].iter().map(|x| x.clone() * inv.clone()).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

fn criterion_4() -> Vec<Verdict> {
    let mut bad = Vec::new();
    for m in 1..=3 {
        let geo = exact_geometry(m);
        let rep = geo.rep();
        let n = rep.spinor_dim();
        for inv in Involution::PAIRING_CHOICES {
            let Ok(pm) = PairingMatrix::<Exact>::build(rep, inv) else {
                bad.push(format!("m={m} {inv}: no solution"));
                continue;
            };
            let e = |i| SpinorFiber::<Exact>::basis(m, i);
            let gram: Vec<Vec<Exact>> = (0..n).map(|i| (0..n).map(|j| pm.pair(&e(i), &e(j))).collect()).collect();
            if rank(gram) != n {
                bad.push(format!("m={m} {inv}: degenerate"));
            }
            for k in 0..2 * m {
                let g = FormFiber::<Exact>::generator(m, k);
                let gj = g.involution(inv);
                for i in 0..n {
                    for j in 0..n {
                        if pm.pair(&e(i), &rep.act_raw(&g, &e(j))) != pm.pair(&rep.act_raw(&gj, &e(i)), &e(j)) {
                            bad.push(format!("m={m} {inv}: invariance fails on generator {k}"));
                        }
                    }
                }
            }
        }
    }
    bad.dedup();
    let detail = format!("m=1..3, 4 involutions, every generator and basis pair; failing: {bad:?}");
    vec![Verdict::new("4", "pairing existence", bad.is_empty(), detail)]
}

fn criterion_5() -> Vec<Verdict> {
    let sampling = Sampling::default();
    let mut checked = 0;
    let mut bad = Vec::new();
    for m in 1..=2 {
        let geo = exact_geometry(m);
        let space = solve_space_unbounded(&TwistorVariant::Riemannian, &geo, 1).unwrap();
        let mut spinors = space.basis.clone();
        spinors.push(space.basis.iter().skip(1).fold(space.basis[0].clone(), |a, b| a.add(b)));
        for inv in Involution::PAIRING_CHOICES {
            let pm = PairingMatrix::build(geo.rep(), inv).unwrap();
            let ctx = context(&geo, &pm);
            for (i, psi) in spinors.iter().enumerate() {
                let dec = ctx.decompose(psi);
                for p in 0..=2 * m {
                    let rep = kahler_twistor::bilinear::cky_residual(&dec.grade(p).unwrap(), p, &sampling).unwrap();
                    checked += 1;
                    if !rep.pass || rep.max_residual != kahler_twistor::MaxResidual::ExactZero {
                        bad.push(format!("m={m} {inv} spinor {i} p={p}"));
                    }
                }
            }
        }
    }
    let detail = format!("{checked} grade bilinears of degree-1 Riemannian solutions (m=1,2); failing: {bad:?}");
    vec![Verdict::new("5", "CKY property of bilinears", bad.is_empty(), detail)]
}

#[derive(Default)]
struct FamilyStats {
    spaces: Vec<String>,
    rows: usize,
    failed_rows: usize,
    float_rows: usize,
    float_failed: usize,
    constants_exact: bool,
    nonconstant: usize,
    first_failures: Vec<String>,
}

fn solve(variant: &TwistorVariant, geo: &SpinGeometry<Exact>, degree: usize) -> SolutionSpace {
    solve_space_unbounded(variant, geo, degree).unwrap()
}

/// Run the bilinear equation on every basis element of every space, under
/// every admissible involution, exactly and (optionally) in floating point.
fn theorem1_family(variants: &[(usize, TwistorVariant)], degree: usize, with_float: bool) -> FamilyStats {
    let mut st = FamilyStats { constants_exact: true, ..FamilyStats::default() };
    let opts = Theorem1Options::default();
    for (m, variant) in variants {
        let m = *m;
        let geo = exact_geometry(m);
        let fgeo = SpinGeometry::<Float>::flat(m, TypeConvention::Spectral).unwrap();
        let space = solve(variant, &geo, degree);
        let nonconstant = space.nonconstant().count();
        st.nonconstant += nonconstant;
        let vacuous = if nonconstant == 0 { " vacuous" } else { "" };
        st.spaces.push(format!("m={m} {variant} dim={}{vacuous}", space.dimension));
        for inv in Involution::PAIRING_CHOICES {
            let pm = PairingMatrix::build(geo.rep(), inv).unwrap();
            let ctx = context(&geo, &pm);
            let fpm = PairingMatrix::build(fgeo.rep(), inv).unwrap();
            let fctx = context(&fgeo, &fpm);
            for (i, psi) in space.basis.iter().enumerate() {
                let constant = psi.degree().unwrap_or(0) == 0;
                for rep in theorem1_residual(&ctx, variant, psi, &opts).unwrap() {
                    st.rows += 1;
                    let exact_zero = rep.max_residual == kahler_twistor::MaxResidual::ExactZero;
                    if constant && !exact_zero {
                        st.constants_exact = false;
                    }
                    if !exact_zero {
                        st.failed_rows += 1;
                        if st.first_failures.len() < 4 {
                            st.first_failures.push(format!(
                                "m={m} {variant} {inv} basis {i} ({},{}) residual {:.3e}",
                                rep.p.unwrap(),
                                rep.q.unwrap(),
                                rep.max_residual.value()
                            ));
                        }
                    }
                }
                if with_float {
                    let fpsi = psi.to_float().normalized();
                    for rep in theorem1_residual(&fctx, variant, &fpsi, &opts).unwrap() {
                        st.float_rows += 1;
                        if !rep.pass {
                            st.float_failed += 1;
                        }
                    }
                }
            }
        }
    }
    st
}

fn describe(st: &FamilyStats) -> String {
    let mut s = format!(
        "exact rows {}/{} zero; constant solutions exact: {}; nonconstant basis elements: {}",
        st.rows - st.failed_rows,
        st.rows,
        st.constants_exact,
        st.nonconstant
    );
    if st.float_rows > 0 {
        s += &format!("; float rows {}/{} within 1e-9", st.float_rows - st.float_failed, st.float_rows);
    }
    s += &format!("; spaces: [{}]", st.spaces.join(", "));
    if !st.first_failures.is_empty() {
        s += &format!("; first failures: {:?}", st.first_failures);
    }
    s
}

fn kahlerian_list() -> Vec<(usize, TwistorVariant)> {
    (2..=3).flat_map(|m| (0..=m).map(move |r| (m, TwistorVariant::Kahlerian { r }))).collect()
}

fn criterion_6() -> Vec<Verdict> {
    let st = theorem1_family(&kahlerian_list(), 2, true);
    assert!(st.constants_exact, "parallel spinors must always pass exactly: {}", describe(&st));
    let pass = st.failed_rows == 0 && st.float_failed == 0;
    vec![Verdict::new("6", "bilinear equation, Kählerian solutions", pass, describe(&st))]
}

fn criterion_7() -> Vec<Verdict> {
    let mut checked = 0;
    let mut bad = Vec::new();
    let mut runs: Vec<(usize, usize)> = (1..=3).flat_map(|m| (0..=2).map(move |d| (m, d))).collect();
    runs.extend([(1, 3), (2, 3)]);
    for (m, degree) in runs {
        let geo = exact_geometry(m);
        let mut variants: Vec<TwistorVariant> = Vec::new();
        for r in 0..=m {
            variants.extend([
                TwistorVariant::Kahlerian { r },
                TwistorVariant::Holomorphic { r },
                TwistorVariant::AntiHolomorphic { r },
            ]);
        }
        if m % 2 == 0 {
            variants.push(TwistorVariant::MiddleType);
        }
        for v in variants {
            let space = solve(&v, &geo, degree);
            let r = v.type_index(m).unwrap() as i64;
            let bound = binomial(m, r) + binomial(m, r + 1) + binomial(m, r - 1);
            checked += 1;
            if space.dimension > bound {
                bad.push(format!("m={m} deg={degree} {v}: {} > {bound}", space.dimension));
            }
        }
    }
    let detail = format!("{checked} Kählerian solves (m=1..3 up to degree 2, m=1,2 at degree 3); violations: {bad:?}");
    vec![Verdict::new("7", "dimension bound", bad.is_empty(), detail)]
}

fn criterion_8() -> Vec<Verdict> {
    let fam = |f: fn(usize) -> TwistorVariant, from: usize| -> Family {
        (2..=3).flat_map(|m| (from..=m).map(move |r| (m, f(r)))).collect()
    };
    let families: [(&'static str, &'static str, Family); 4] = [
        ("8a", "holomorphic solutions", fam(|r| TwistorVariant::Holomorphic { r }, 0)),
        ("8b", "anti-holomorphic solutions", fam(|r| TwistorVariant::AntiHolomorphic { r }, 0)),
        ("8c", "Kirchberg solutions, 1/(4r) coefficient", fam(|r| TwistorVariant::KirchbergDisplay { r }, 1)),
        ("8d", "Kirchberg solutions, 1/(4(r+1)) coefficient", fam(|r| TwistorVariant::KirchbergText { r }, 1)),
    ];
    families
        .into_iter()
        .map(|(id, title, list)| {
            let st = theorem1_family(&list, 2, false);
            assert!(st.constants_exact, "parallel spinors must always pass exactly: {}", describe(&st));
            Verdict::new(id, title, st.failed_rows == 0, describe(&st))
        })
        .collect()
}

fn criterion_9() -> Vec<Verdict> {
    let sampling = Sampling::default();
    let mut variants = kahlerian_list();
    for m in 2..=3 {
        for r in 0..=m {
            variants.extend([
                (m, TwistorVariant::Holomorphic { r }),
                (m, TwistorVariant::AntiHolomorphic { r }),
            ]);
            if r > 0 {
                variants.extend([(m, TwistorVariant::KirchbergDisplay { r }), (m, TwistorVariant::KirchbergText { r })]);
            }
        }
    }
    let (mut slots, mut held, mut nonconstant_held) = (0, 0, 0);
    let mut counterexamples = Vec::new();
    for (m, v) in &variants {
        let m = *m;
        let geo = exact_geometry(m);
        let k = geo.kahler();
        let space = solve(v, &geo, 2);
        let spec = GapSpec::for_variant(v, m).unwrap();
        for inv in Involution::PAIRING_CHOICES {
            let pm = PairingMatrix::build(geo.rep(), inv).unwrap();
            let ctx = context(&geo, &pm);
            for psi in &space.basis {
                let src = ctx.gap_sources(psi);
                for bg in Bigrade::all(m) {
                    slots += 1;
                    let gaps = gap_forms(k, &src, &spec, bg.p, bg.q);
                    if !prop2_condition_check(k, &gaps, &sampling).holds {
                        continue;
                    }
                    held += 1;
                    if psi.degree().unwrap_or(0) > 0 {
                        nonconstant_held += 1;
                    }
                    let omega = src.bilinear.bigrade_project(k, bg.p, bg.q);
                    let rep = kahlerian_cky_residual(k, &omega, bg.p, bg.q, BracketMode::Labelled, &sampling).unwrap();
                    if !rep.pass {
                        counterexamples.push(format!("m={m} {v} {inv} ({},{})", bg.p, bg.q));
                    }
                }
            }
        }
    }
    let detail = format!(
        "{slots} (basis, involution, bigrade) slots; conditions held on {held} ({nonconstant_held} from nonconstant solutions); counterexamples: {counterexamples:?}"
    );
    vec![Verdict::new("9", "conditional Kählerian CKY property", counterexamples.is_empty() && held > 0, detail)]
}

fn criterion_10() -> Vec<Verdict> {
    let mut rng = sample::rng(0xacc10);
    let mut bad = Vec::new();
    let mut constants = Vec::new();
    for m in 1..=3 {
        let geo = exact_geometry(m);
        let mut calibrated: Option<Exact> = None;
        for inv in Involution::PAIRING_CHOICES {
            let pm = PairingMatrix::build(geo.rep(), inv).unwrap();
            let ctx = context(&geo, &pm);
            for _ in 0..20 {
                let psi = sample::spinor::<Exact>(&mut rng, m);
                let phi = sample::spinor::<Exact>(&mut rng, m);
                let kappa = sample::spinor::<Exact>(&mut rng, m);
                let op = ctx.square_fiber(&psi, &phi);
                let comp = ctx.square_fiber_components(&psi, &phi);
                // Defining property of ψφ̄ as an endomorphism.
                if geo.rep().act_raw(&op, &kappa) != psi.scale(&pm.pair(&phi, &kappa)) {
                    bad.push(format!("m={m} {inv}: reconstruction"));
                }
                let Some((mask, c)) = comp.terms().find(|(_, c)| !c.is_zero()) else { continue };
                let ratio = op.coeff(mask).clone() / c.clone();
                let c_m = calibrated.get_or_insert(ratio).clone();
                if op != comp.scale(&c_m) {
                    bad.push(format!("m={m} {inv}: component formula"));
                }
            }
        }
        let c_m = calibrated.expect("random spinors give nonzero bilinears");
        if c_m != Exact::new(num_rational::BigRational::new(1.into(), (1i64 << m).into()), Zero::zero()) {
            bad.push(format!("m={m}: c_m = {c_m}"));
        }
        constants.push(format!("c_{m} = {}", c_m.re));
    }
    bad.dedup();
    let detail = format!("m=1..3, 4 involutions, 20 random pairs each; {}; failing: {bad:?}", constants.join(", "));
    vec![Verdict::new("10", "squaring map oracle equivalence", bad.is_empty(), detail)]
}

fn kts(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_kts")).args(args).output().expect("binary runs");
    assert!(out.status.code().is_some());
    out.stdout
}

fn criterion_11() -> Vec<Verdict> {
    let configs: [&[&str]; 3] = [
        &["verify-identities", "--m", "2", "--cases", "50", "--field-cases", "5", "--degree", "2"],
        &["solve-twistor", "--variant", "kahlerian", "--m", "2", "--r", "1", "--degree", "2"],
        &["verify-theorem1", "--m", "2", "--r", "1", "--degree", "1", "--involution", "all", "--backend", "float"],
    ];
    let mut bad = Vec::new();
    for cfg in configs {
        let (a, b) = (kts(cfg), kts(cfg));
        if a.is_empty() || a != b {
            bad.push(cfg[0]);
        }
    }
    let detail = format!("3 subcommands run twice each; differing: {bad:?}");
    vec![Verdict::new("11", "deterministic reports", bad.is_empty(), detail)]
}

#[test]
fn acceptance() {
    let runs: [fn() -> Vec<Verdict>; 11] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
    ];
    let verdicts: Vec<Verdict> = std::thread::scope(|s| {
        let handles: Vec<_> = runs.iter().map(|f| s.spawn(f)).collect();
        handles.into_iter().flat_map(|h| h.join().expect("criterion panicked")).collect()
    });
    let mut out = std::io::stderr().lock();
    let mut unexpected = Vec::new();
    for v in &verdicts {
        let known_red = KNOWN_RED.contains(&v.id);
        let tag = match (v.pass, known_red) {
            (true, false) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
            (true, true) => "PASS (listed as known red)",
        };
        // Written to the raw handle so the lines survive output capture.
        writeln!(out, "criterion {}: {tag}: {}: {}", v.id, v.title, v.detail).unwrap();
        if v.pass == known_red {
            unexpected.push(v.id);
        }
    }
    assert!(unexpected.is_empty(), "criteria with unexpected outcome: {unexpected:?}");
}
