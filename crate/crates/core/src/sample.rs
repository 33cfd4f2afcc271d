//! Seeded pseudorandom inputs: evaluation points and random fibers/sections
//! with small Gaussian-rational coefficients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::{FormSection, Monomial, PolySection, SpinorSection};
use crate::fiber::{FormFiber, VectorFiber};
use crate::scalar::{Exact, Scalar};
use crate::spinor::SpinorFiber;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` points uniform in `[-1, 1]^{2m}`.
pub fn sample_points(m: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..count).map(|_| (0..2 * m).map(|_| r.gen_range(-1.0..=1.0)).collect()).collect()
}

/// `(a + b i)/d` with `|a|, |b| ≤ 3` and `d ∈ {1, 2, 3}`.
pub fn scalar<S: Scalar>(r: &mut SampleRng) -> S {
    let d = r.gen_range(1..=3);
    let re = S::from_ratio(r.gen_range(-3..=3), d);
    let im = S::from_ratio(r.gen_range(-3..=3), d);
    S::from_parts(re, im)
}

/// Random form with each blade present with probability `density`.
pub fn form<S: Scalar>(r: &mut SampleRng, m: usize, density: f64) -> FormFiber<S> {
    let mut f = FormFiber::zero(m);
    for mask in 0..1u32 << (2 * m) {
        if r.gen_bool(density) {
            f.set_coeff(mask, scalar(r));
        }
    }
    f
}

/// Random homogeneous form of grade `p`.
pub fn homogeneous_form<S: Scalar>(r: &mut SampleRng, m: usize, p: usize, density: f64) -> FormFiber<S> {
    form(r, m, density).grade_part(p)
}

pub fn vector<S: Scalar>(r: &mut SampleRng, m: usize) -> VectorFiber<S> {
    VectorFiber::new(m, (0..2 * m).map(|_| scalar(r)).collect()).expect("length 2m")
}

pub fn spinor<S: Scalar>(r: &mut SampleRng, m: usize) -> SpinorFiber<S> {
    SpinorFiber::new(m, (0..1 << m).map(|_| scalar(r)).collect()).expect("length 2^m")
}

/// Random form section with `terms` random monomials of degree ≤ `degree`.
pub fn form_section(r: &mut SampleRng, m: usize, degree: usize, terms: usize, density: f64) -> FormSection<Exact> {
    section(r, m, degree, terms, |r| form(r, m, density))
}

pub fn spinor_section(r: &mut SampleRng, m: usize, degree: usize, terms: usize) -> SpinorSection<Exact> {
    section(r, m, degree, terms, |r| spinor(r, m))
}

fn section<F: crate::fields::Fiber>(
    r: &mut SampleRng,
    m: usize,
    degree: usize,
    terms: usize,
    mut fiber: impl FnMut(&mut SampleRng) -> F,
) -> PolySection<F> {
    let monos = Monomial::all_up_to(2 * m, degree);
    let mut s = PolySection::zero(m, degree);
    for _ in 0..terms {
        let mono = monos[r.gen_range(0..monos.len())];
        s.add_term(mono, fiber(r)).expect("monomial within bound");
    }
    s
}
