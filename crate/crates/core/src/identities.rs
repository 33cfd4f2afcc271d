//! Randomized identity suites for the fiber algebra, the Kähler operators
//! and the first-order operators on sections. Every check is exact.

use serde::Serialize;

use crate::error::Result;
use crate::fiber::{FormFiber, Involution, VectorFiber};
use crate::fields::{FormSection, SpinorSection};
use crate::kahler::Kahler;
use crate::sample::{self, SampleRng};
use crate::scalar::Exact;
use crate::spinor::{SpinGeometry, TypeConvention};

/// Outcome of one identity over a batch of random cases.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub suite: String,
    pub identity: String,
    pub m: usize,
    pub cases: usize,
    pub failures: usize,
    pub pass: bool,
}

impl IdentityReport {
    fn new(suite: &str, identity: &str, m: usize, cases: usize, failures: usize) -> Self {
        Self { suite: suite.into(), identity: identity.into(), m, cases, failures, pass: failures == 0 }
    }
}

type Form = FormFiber<Exact>;
type Check<'a> = (&'static str, Box<dyn Fn(&mut SampleRng) -> bool + 'a>);

/// Blade density of random forms in the fiber suite.
const DENSITY: f64 = 0.25;

fn run(suite: &str, m: usize, cases: usize, seed: u64, checks: Vec<Check<'_>>) -> Vec<IdentityReport> {
    checks
        .into_iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut r = sample::rng(seed ^ ((m as u64) << 32) ^ i as u64);
            let failures = (0..cases).filter(|_| !check(&mut r)).count();
            IdentityReport::new(suite, name, m, cases, failures)
        })
        .collect()
}

/// Kähler-operator commutation relations, the derivation rule for `J`,
/// the Clifford/exterior relation for one-forms and the reversal rule.
pub fn fiber_suite(m: usize, cases: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    let k = Kahler::<Exact>::flat(m)?;
    let k = &k;
    let form = move |r: &mut SampleRng| sample::form::<Exact>(r, m, DENSITY);
    let vector = move |r: &mut SampleRng| sample::vector::<Exact>(r, m);
    let i = |a: &Form, x: &VectorFiber<Exact>| a.contract_raw(x);
    let checks: Vec<Check<'_>> = vec![
        (
            "i_JX = [J, i_X]",
            Box::new(move |r| {
                let (a, x) = (form(r), vector(r));
                i(&a, &k.apply_j(&x)) == k.j_derivation(&i(&a, &x)).sub(&i(&k.j_derivation(&a), &x))
            }),
        ),
        (
            "[J, i_JX] = -i_X",
            Box::new(move |r| {
                let (a, x) = (form(r), vector(r));
                let jx = k.apply_j(&x);
                k.j_derivation(&i(&a, &jx)).sub(&i(&k.j_derivation(&a), &jx)) == i(&a, &x).neg()
            }),
        ),
        (
            "J(a^b) = Ja^b + a^Jb",
            Box::new(move |r| {
                let (a, b) = (form(r), form(r));
                k.j_derivation(&a.wedge_raw(&b)) == k.j_derivation(&a).wedge_raw(&b).add(&a.wedge_raw(&k.j_derivation(&b)))
            }),
        ),
        (
            "[J, L] = 0",
            Box::new(move |r| {
                let a = form(r);
                k.j_derivation(&k.lefschetz(&a)) == k.lefschetz(&k.j_derivation(&a))
            }),
        ),
        (
            "[J, Lambda] = 0",
            Box::new(move |r| {
                let a = form(r);
                k.j_derivation(&k.dual_lefschetz(&a)) == k.dual_lefschetz(&k.j_derivation(&a))
            }),
        ),
        (
            "[i_X, Lambda] = 0",
            Box::new(move |r| {
                let (a, x) = (form(r), vector(r));
                i(&k.dual_lefschetz(&a), &x) == k.dual_lefschetz(&i(&a, &x))
            }),
        ),
        (
            "[i_JX, Lambda] = 0",
            Box::new(move |r| {
                let (a, x) = (form(r), vector(r));
                let jx = k.apply_j(&x);
                i(&k.dual_lefschetz(&a), &jx) == k.dual_lefschetz(&i(&a, &jx))
            }),
        ),
        (
            "[i_X, L] = JX^",
            Box::new(move |r| {
                let (a, x) = (form(r), vector(r));
                let lhs = i(&k.lefschetz(&a), &x).sub(&k.lefschetz(&i(&a, &x)));
                lhs == k.apply_j(&x).dual().wedge_raw(&a)
            }),
        ),
        (
            "[i_JX, L] = -X^",
            Box::new(move |r| {
                let (a, x) = (form(r), vector(r));
                let jx = k.apply_j(&x);
                let lhs = i(&k.lefschetz(&a), &jx).sub(&k.lefschetz(&i(&a, &jx)));
                lhs == x.dual().wedge_raw(&a).neg()
            }),
        ),
        (
            "e.w = e^w + i_X w",
            Box::new(move |r| {
                let (w, x) = (form(r), vector(r));
                let e = x.dual();
                e.clifford_raw(&w) == e.wedge_raw(&w).add(&i(&w, &x))
            }),
        ),
        (
            "w.e = e^w^eta - i_X w^eta",
            Box::new(move |r| {
                let (w, x) = (form(r), vector(r));
                let (e, we) = (x.dual(), w.involution(Involution::ETA));
                w.clifford_raw(&e) == e.wedge_raw(&we).sub(&i(&we, &x))
            }),
        ),
        (
            "(a.b)^xi = b^xi.a^xi",
            Box::new(move |r| {
                let (a, b) = (form(r), form(r));
                a.clifford_raw(&b).reverse() == b.reverse().clifford_raw(&a.reverse())
            }),
        ),
    ];
    Ok(run("fiber", m, cases, seed, checks))
}

/// Commutators of `L`, `Λ` with `d`, `δ`, `d^c`, `δ^c`, `d² = 0`,
/// `dΩ = 0`, `D² = (D^c)²` and `D = D⁺ + D⁻` on random polynomial sections.
pub fn field_suite(m: usize, cases: usize, degree: usize, seed: u64) -> Result<Vec<IdentityReport>> {
    let geo = SpinGeometry::<Exact>::flat(m, TypeConvention::default())?;
    let geo = &geo;
    let k = geo.kahler();
    let section = move |r: &mut SampleRng| sample::form_section(r, m, degree, 3, 0.15);
    let spinor = move |r: &mut SampleRng| sample::spinor_section(r, m, degree, 3);
    let commutes = |f: &dyn Fn(&FormSection<Exact>) -> FormSection<Exact>,
                    g: &dyn Fn(&FormSection<Exact>) -> FormSection<Exact>,
                    a: &FormSection<Exact>| f(&g(a)).sub(&g(&f(a)));
    let l = move |a: &FormSection<Exact>| a.lefschetz(k);
    let lam = move |a: &FormSection<Exact>| a.dual_lefschetz(k);
    let d = |a: &FormSection<Exact>| a.ext_d();
    let delta = |a: &FormSection<Exact>| a.coderiv();
    let dc = move |a: &FormSection<Exact>| a.d_c(k);
    let deltac = move |a: &FormSection<Exact>| a.delta_c(k);
    let checks: Vec<Check<'_>> = vec![
        ("[L, d] = 0", Box::new(move |r| commutes(&l, &d, &section(r)).is_zero())),
        ("[L, d^c] = 0", Box::new(move |r| commutes(&l, &dc, &section(r)).is_zero())),
        ("[Lambda, delta] = 0", Box::new(move |r| commutes(&lam, &delta, &section(r)).is_zero())),
        ("[Lambda, delta^c] = 0", Box::new(move |r| commutes(&lam, &deltac, &section(r)).is_zero())),
        (
            "[L, delta] = d^c",
            Box::new(move |r| {
                let a = section(r);
                commutes(&l, &delta, &a) == a.d_c(k)
            }),
        ),
        (
            "[L, delta^c] = -d",
            Box::new(move |r| {
                let a = section(r);
                commutes(&l, &deltac, &a) == a.ext_d().neg()
            }),
        ),
        (
            "[Lambda, d] = -delta^c",
            Box::new(move |r| {
                let a = section(r);
                commutes(&lam, &d, &a) == a.delta_c(k).neg()
            }),
        ),
        (
            "[Lambda, d^c] = delta",
            Box::new(move |r| {
                let a = section(r);
                commutes(&lam, &dc, &a) == a.coderiv()
            }),
        ),
        ("d^2 = 0", Box::new(move |r| section(r).ext_d().ext_d().is_zero())),
        (
            "d Omega = 0",
            Box::new(move |r| {
                // Ω times a constant is closed; so is Ω ∧ dα.
                let a = section(r);
                let omega = FormSection::constant(k.kahler_form().clone(), degree);
                omega.ext_d().is_zero() && a.ext_d().lefschetz(k).ext_d().is_zero()
            }),
        ),
        (
            "D^2 = (D^c)^2",
            Box::new(move |r| {
                let psi: SpinorSection<Exact> = spinor(r);
                psi.dirac(geo).dirac(geo) == psi.dirac_c(geo).dirac_c(geo)
            }),
        ),
        (
            "D = D+ + D-",
            Box::new(move |r| {
                let psi: SpinorSection<Exact> = spinor(r);
                let (plus, minus) = psi.dirac_pm(geo);
                psi.dirac(geo) == plus.add(&minus)
            }),
        ),
    ];
    Ok(run("field", m, cases, seed, checks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fiber_suite_passes_at_small_scale() {
        for m in 1..=2 {
            for rep in fiber_suite(m, 30, 1).unwrap() {
                assert!(rep.pass, "{rep:?}");
            }
        }
    }

    #[test]
    fn field_suite_passes_at_small_scale() {
        for rep in field_suite(1, 10, 2, 1).unwrap() {
            assert!(rep.pass, "{rep:?}");
        }
    }

    #[test]
    fn j_derivation_does_not_compose_to_a_contraction() {
        // i_{JX} differs from the plain composite J∘i_X already on one-forms.
        let k = Kahler::<Exact>::flat(1).unwrap();
        let x = VectorFiber::basis(1, 0);
        let a = k.j_form(0).clone();
        let lhs = a.contract_raw(&k.apply_j(&x));
        let rhs = k.j_derivation(&a.contract_raw(&x));
        assert_ne!(lhs, rhs);
    }
}
