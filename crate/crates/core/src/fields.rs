//! Polynomial sections over flat `ℝ^{2m}` and the first-order operators on
//! them. With the identity metric and constant `J`, `∇_{X_a}` is the
//! coordinate derivative `∂_a` and all operators below are exact.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::fiber::{FormFiber, VectorFiber};
use crate::kahler::Kahler;
use crate::scalar::{Float, Scalar};
use crate::spinor::{SpinGeometry, SpinorFiber};

pub const DEFAULT_DEGREE_BOUND: usize = 3;

/// `x^{e_0} ⋯ x^{e_{2m-1}}`; unused slots stay zero.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    exps: [u8; 8],
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(k: usize) -> Self {
        let mut exps = [0; 8];
        exps[k] = 1;
        Self { exps }
    }

    pub fn from_exponents(exponents: &[u8]) -> Result<Self> {
        if exponents.len() > 8 {
            return Err(Error::DimensionMismatch { left: 8, right: exponents.len() });
        }
        let mut exps = [0; 8];
        exps[..exponents.len()].copy_from_slice(exponents);
        Ok(Self { exps })
    }

    pub fn exponents(&self, vars: usize) -> &[u8] {
        &self.exps[..vars]
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps) {
            *e += o;
        }
        Self { exps }
    }

    /// `∂_k` of the monomial as `(multiplier, monomial)`.
    pub fn derivative(&self, k: usize) -> Option<(u8, Self)> {
        let e = self.exps[k];
        (e > 0).then(|| {
            let mut exps = self.exps;
            exps[k] -= 1;
            (e, Self { exps })
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        x.iter().zip(self.exps).map(|(v, e)| v.powi(e as i32)).product()
    }

    /// All monomials in `vars` variables of degree at most `degree`, graded
    /// by degree and then in lexicographic order.
    pub fn all_up_to(vars: usize, degree: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for d in 0..=degree {
            let mut cur = [0u8; 8];
            fill(vars, 0, d, &mut cur, &mut out);
        }
        out
    }
}

fn fill(vars: usize, slot: usize, left: usize, cur: &mut [u8; 8], out: &mut Vec<Monomial>) {
    if slot + 1 == vars {
        cur[slot] = left as u8;
        out.push(Monomial { exps: *cur });
        cur[slot] = 0;
        return;
    }
    for e in (0..=left).rev() {
        cur[slot] = e as u8;
        fill(vars, slot + 1, left - e, cur, out);
    }
    cur[slot] = 0;
}

/// Fiber types a section can take values in.
pub trait Fiber: Clone + PartialEq + Debug + Send + Sync {
    type Scalar: Scalar;

    fn zero_fiber(m: usize) -> Self;
    fn half_dim(&self) -> usize;
    fn coefficients(&self) -> &[Self::Scalar];
    fn from_coefficients(m: usize, coeffs: Vec<Self::Scalar>) -> Result<Self>;
    fn fiber_is_zero(&self) -> bool;
    fn fiber_add_assign(&mut self, other: &Self);
    fn fiber_scale(&self, s: &Self::Scalar) -> Self;
}

impl<S: Scalar> Fiber for FormFiber<S> {
    type Scalar = S;

    fn zero_fiber(m: usize) -> Self {
        FormFiber::zero(m)
    }
    fn half_dim(&self) -> usize {
        self.m()
    }
    fn coefficients(&self) -> &[S] {
        self.coeffs()
    }
    fn from_coefficients(m: usize, coeffs: Vec<S>) -> Result<Self> {
        FormFiber::from_coeffs(m, coeffs)
    }
    fn fiber_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn fiber_add_assign(&mut self, other: &Self) {
        self.add_assign(other)
    }
    fn fiber_scale(&self, s: &S) -> Self {
        self.scale(s)
    }
}

impl<S: Scalar> Fiber for SpinorFiber<S> {
    type Scalar = S;

    fn zero_fiber(m: usize) -> Self {
        SpinorFiber::zero(m)
    }
    fn half_dim(&self) -> usize {
        self.m()
    }
    fn coefficients(&self) -> &[S] {
        self.components()
    }
    fn from_coefficients(m: usize, coeffs: Vec<S>) -> Result<Self> {
        SpinorFiber::new(m, coeffs)
    }
    fn fiber_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn fiber_add_assign(&mut self, other: &Self) {
        self.add_assign(other)
    }
    fn fiber_scale(&self, s: &S) -> Self {
        self.scale(s)
    }
}

/// A polynomial section `Σ x^M ⊗ f_M` with `deg M ≤ degree_bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySection<F> {
    m: usize,
    degree_bound: usize,
    terms: BTreeMap<Monomial, F>,
}

pub type FormSection<S> = PolySection<FormFiber<S>>;
pub type SpinorSection<S> = PolySection<SpinorFiber<S>>;

impl<F: Fiber> PolySection<F> {
    pub fn zero(m: usize, degree_bound: usize) -> Self {
        Self { m, degree_bound, terms: BTreeMap::new() }
    }

    pub fn constant(fiber: F, degree_bound: usize) -> Self {
        let mut s = Self::zero(fiber.half_dim(), degree_bound);
        s.add_term_raw(Monomial::one(), fiber);
        s
    }

    pub fn monomial(mono: Monomial, fiber: F, degree_bound: usize) -> Result<Self> {
        let mut s = Self::zero(fiber.half_dim(), degree_bound.max(mono.degree()));
        s.add_term(mono, fiber)?;
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn with_degree_bound(mut self, bound: usize) -> Result<Self> {
        if let Some(d) = self.degree() {
            if d > bound {
                return Err(Error::Precondition(format!("section has degree {d} > {bound}")));
            }
        }
        self.degree_bound = bound;
        Ok(self)
    }

    /// Highest monomial degree present, `None` for the zero section.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &F)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Option<&F> {
        self.terms.get(mono)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Accumulate `x^mono ⊗ fiber`.
    pub fn add_term(&mut self, mono: Monomial, fiber: F) -> Result<()> {
        if fiber.half_dim() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: fiber.half_dim() });
        }
        if mono.degree() > self.degree_bound {
            return Err(Error::Precondition(format!(
                "monomial degree {} exceeds bound {}",
                mono.degree(),
                self.degree_bound
            )));
        }
        if mono.exps[2 * self.m..].iter().any(|&e| e != 0) {
            return Err(Error::Precondition("monomial uses a coordinate beyond 2m".into()));
        }
        self.add_term_raw(mono, fiber);
        Ok(())
    }

    fn add_term_raw(&mut self, mono: Monomial, fiber: F) {
        if fiber.fiber_is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(f) => {
                f.fiber_add_assign(&fiber);
                if f.fiber_is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, fiber);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.degree_bound = self.degree_bound.max(other.degree_bound);
        for (mono, f) in &other.terms {
            out.add_term_raw(*mono, f.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.degree_bound = self.degree_bound.max(other.degree_bound);
        for (mono, f) in &other.terms {
            self.add_term_raw(*mono, f.clone());
        }
    }

    pub fn scale(&self, s: &F::Scalar) -> Self {
        self.map_fibers(|f| f.fiber_scale(s))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Apply a pointwise linear map to every coefficient.
    pub fn map_fibers<G: Fiber>(&self, f: impl Fn(&F) -> G) -> PolySection<G> {
        let mut out = PolySection::zero(self.m, self.degree_bound);
        for (mono, fib) in &self.terms {
            out.add_term_raw(*mono, f(fib));
        }
        out
    }

    /// Pointwise bilinear product; the degree bound is the sum of bounds.
    pub fn product<G: Fiber, H: Fiber>(&self, other: &PolySection<G>, f: impl Fn(&F, &G) -> H) -> PolySection<H> {
        let mut out = PolySection::zero(self.m, self.degree_bound + other.degree_bound);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term_raw(ma.mul(mb), f(a, b));
            }
        }
        out
    }

    /// `∂_k`, the flat covariant derivative along `X_k`.
    pub fn partial(&self, k: usize) -> Self {
        let mut out = Self::zero(self.m, self.degree_bound);
        for (mono, f) in &self.terms {
            if let Some((c, d)) = mono.derivative(k) {
                out.add_term_raw(d, f.fiber_scale(&F::Scalar::from_i64(c as i64)));
            }
        }
        out
    }

    /// `∇_V = Σ V_b ∂_b` for a complex direction `V`.
    pub fn directional(&self, v: &VectorFiber<F::Scalar>) -> Self {
        let mut out = Self::zero(self.m, self.degree_bound);
        for (b, c) in v.components().iter().enumerate() {
            if !c.is_zero() {
                out.add_assign(&self.partial(b).scale(c));
            }
        }
        out
    }

    /// Fiber coefficients at a point.
    pub fn eval(&self, x: &[f64]) -> Vec<Complex64> {
        let dim = F::zero_fiber(self.m).coefficients().len();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (mono, f) in &self.terms {
            let w = mono.eval(x);
            for (o, c) in out.iter_mut().zip(f.coefficients()) {
                if !c.is_zero() {
                    *o += c.to_c64() * w;
                }
            }
        }
        out
    }

    /// Largest fiber coefficient magnitude at a point.
    pub fn max_abs_at(&self, x: &[f64]) -> f64 {
        self.eval(x).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude over all monomials.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .flat_map(|f| f.coefficients().iter().map(Scalar::abs))
            .fold(0.0, f64::max)
    }

    /// Re-express in another backend.
    pub fn convert<G: Fiber>(&self, f: impl Fn(&F::Scalar) -> G::Scalar) -> PolySection<G> {
        self.map_fibers(|fib| {
            let coeffs = fib.coefficients().iter().map(&f).collect();
            G::from_coefficients(self.m, coeffs).expect("same fiber shape")
        })
    }

    /// Drop coefficients below `eps` (float backend cleanup).
    pub fn chop(&self, eps: f64) -> Self {
        self.map_fibers(|fib| {
            let coeffs =
                fib.coefficients().iter().map(|c| if c.abs() < eps { F::Scalar::zero() } else { c.clone() }).collect();
            F::from_coefficients(self.m, coeffs).expect("same fiber shape")
        })
    }

    pub fn to_json(&self) -> Value {
        let vars = 2 * self.m;
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(mono, f)| {
                let mut fiber = Map::new();
                for (k, c) in f.coefficients().iter().enumerate() {
                    if !c.is_zero() {
                        fiber.insert(k.to_string(), Value::Array(c.to_json_pair().to_vec()));
                    }
                }
                json!({ "exponents": mono.exponents(vars), "fiber": fiber })
            })
            .collect();
        json!({ "m": self.m, "degree_bound": self.degree_bound, "terms": terms })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Format(format!("section JSON: {what}"));
        let m = v["m"].as_u64().ok_or_else(|| bad("missing m"))? as usize;
        let degree_bound = v["degree_bound"].as_u64().ok_or_else(|| bad("missing degree_bound"))? as usize;
        let dim = F::zero_fiber(m).coefficients().len();
        let mut out = Self::zero(m, degree_bound);
        for term in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let exps: Vec<u8> = term["exponents"]
                .as_array()
                .ok_or_else(|| bad("missing exponents"))?
                .iter()
                .map(|e| e.as_u64().and_then(|e| u8::try_from(e).ok()).ok_or_else(|| bad("bad exponent")))
                .collect::<Result<_>>()?;
            if exps.len() != 2 * m {
                return Err(bad("exponent count must be 2m"));
            }
            let mut coeffs = vec![F::Scalar::zero(); dim];
            for (key, pair) in term["fiber"].as_object().ok_or_else(|| bad("missing fiber"))? {
                let k: usize = key.parse().map_err(|_| bad("bad basis index"))?;
                let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("coefficient must be [re, im]"))?;
                if k >= dim {
                    return Err(bad("basis index out of range"));
                }
                coeffs[k] = F::Scalar::from_json_pair(&pair[0], &pair[1]).ok_or_else(|| bad("bad coefficient"))?;
            }
            out.add_term(Monomial::from_exponents(&exps)?, F::from_coefficients(m, coeffs)?)?;
        }
        Ok(out)
    }
}


impl<S: Scalar> FormSection<S> {
    pub fn to_float(&self) -> FormSection<Float> {
        self.convert(Scalar::to_c64)
    }

    /// `d = e^a ∧ ∇_{X_a}`.
    pub fn ext_d(&self) -> Self {
        self.frame_sum(|a, f| f.wedge_generator(a))
    }

    /// `δ = -i_{X^a} ∇_{X_a}`.
    pub fn coderiv(&self) -> Self {
        self.frame_sum(|a, f| f.contract_basis(a)).neg()
    }

    /// `d^c = Je^a ∧ ∇_{X_a}`.
    pub fn d_c(&self, k: &Kahler<S>) -> Self {
        self.frame_sum(|a, f| k.j_form(a).wedge_raw(f))
    }

    /// `δ^c = -i_{JX^a} ∇_{X_a}`.
    pub fn delta_c(&self, k: &Kahler<S>) -> Self {
        self.frame_sum(|a, f| f.contract_raw(k.j_vector(a))).neg()
    }

    /// `∂̸ = e^a . ∇_{X_a}` (left Clifford multiplication).
    pub fn dslash(&self) -> Self {
        self.frame_sum(|a, f| FormFiber::generator(self.m, a).clifford_raw(f))
    }

    /// `∂̸^c = Je^a . ∇_{X_a}`.
    pub fn dslash_c(&self, k: &Kahler<S>) -> Self {
        self.frame_sum(|a, f| k.j_form(a).clifford_raw(f))
    }

    fn frame_sum(&self, op: impl Fn(usize, &FormFiber<S>) -> FormFiber<S>) -> Self {
        let mut out = Self::zero(self.m, self.degree_bound);
        for a in 0..2 * self.m {
            out.add_assign(&self.partial(a).map_fibers(|f| op(a, f)));
        }
        out
    }

    /// Pointwise `Ω ∧ ·`.
    pub fn lefschetz(&self, k: &Kahler<S>) -> Self {
        self.map_fibers(|f| k.lefschetz(f))
    }

    pub fn dual_lefschetz(&self, k: &Kahler<S>) -> Self {
        self.map_fibers(|f| k.dual_lefschetz(f))
    }

    pub fn j_derivation(&self, k: &Kahler<S>) -> Self {
        self.map_fibers(|f| k.j_derivation(f))
    }

    pub fn bigrade_project(&self, k: &Kahler<S>, p: usize, q: usize) -> Self {
        self.map_fibers(|f| k.bigrade_project(f, p, q))
    }

    pub fn grade_part(&self, p: usize) -> Self {
        self.map_fibers(|f| f.grade_part(p))
    }

    /// Pointwise `ω ↦ X̃ ∧ ω` for a constant 1-form.
    pub fn wedge_left(&self, a: &FormFiber<S>) -> Self {
        self.map_fibers(|f| a.wedge_raw(f))
    }

    /// Pointwise `i_X`.
    pub fn contract(&self, x: &VectorFiber<S>) -> Self {
        self.map_fibers(|f| f.contract_raw(x))
    }

    /// Pointwise left Clifford multiplication by a constant form.
    pub fn clifford_left(&self, a: &FormFiber<S>) -> Self {
        self.map_fibers(|f| a.clifford_raw(f))
    }

    /// The grade if every coefficient is homogeneous of one common grade.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms.values().map(FormFiber::homogeneous_grade);
        let first = grades.next()??;
        grades.all(|g| g == Some(first)).then_some(first)
    }
}

impl<S: Scalar> SpinorSection<S> {
    pub fn to_float(&self) -> SpinorSection<Float> {
        self.convert(Scalar::to_c64)
    }

    /// Pointwise Clifford action of a constant form.
    pub fn act(&self, geo: &SpinGeometry<S>, a: &FormFiber<S>) -> Self {
        self.map_fibers(|f| geo.rep().act_raw(a, f))
    }

    /// `D = e^a . ∇_{X_a}`.
    pub fn dirac(&self, geo: &SpinGeometry<S>) -> Self {
        let mut out = Self::zero(self.m, self.degree_bound);
        for a in 0..2 * self.m {
            out.add_assign(&self.partial(a).map_fibers(|f| geo.rep().apply_blade(1 << a, f)));
        }
        out
    }

    /// `D^c = Je^a . ∇_{X_a}`.
    pub fn dirac_c(&self, geo: &SpinGeometry<S>) -> Self {
        let mut out = Self::zero(self.m, self.degree_bound);
        for a in 0..2 * self.m {
            out.add_assign(&self.partial(a).act(geo, geo.kahler().j_form(a)));
        }
        out
    }

    /// `(D^+, D^-) = (½(D - iD^c), ½(D + iD^c))`.
    pub fn dirac_pm(&self, geo: &SpinGeometry<S>) -> (Self, Self) {
        let d = self.dirac(geo);
        let idc = self.dirac_c(geo).scale(&S::imag_unit());
        let half = S::from_ratio(1, 2);
        (d.sub(&idc).scale(&half), d.add(&idc).scale(&half))
    }

    /// Pointwise type projection.
    pub fn project_type(&self, geo: &SpinGeometry<S>, r: usize) -> Result<Self> {
        let p = geo.projector(r)?;
        Ok(self.map_fibers(|f| f.apply_matrix(p)))
    }

    /// Rescale so the largest coefficient has magnitude one.
    pub fn normalized(&self) -> Self {
        let max = self.max_abs_coeff();
        if max == 0.0 {
            return self.clone();
        }
        self.scale(&S::from_f64(1.0 / max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use crate::scalar::Exact;
    use crate::spinor::TypeConvention;

    fn x(k: usize) -> Monomial {
        Monomial::var(k)
    }

    fn e(m: usize, k: usize) -> FormFiber<Exact> {
        FormFiber::generator(m, k)
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(Monomial::all_up_to(2, 2).len(), 6);
        assert_eq!(Monomial::all_up_to(4, 3).len(), 35);
        assert_eq!(Monomial::all_up_to(6, 0), vec![Monomial::one()]);
    }

    #[test]
    fn derivative_and_d_examples() {
        let s = FormSection::monomial(x(0), e(1, 1), 3).unwrap();
        assert_eq!(s.partial(0), FormSection::constant(e(1, 1), 3));
        assert_eq!(s.ext_d(), FormSection::constant(e(1, 0).wedge_raw(&e(1, 1)), 3));
        let c = FormSection::constant(e(1, 1), 3);
        assert!(c.partial(0).is_zero());
    }

    #[test]
    fn dc_and_dslash_examples() {
        let k = Kahler::<Exact>::flat(1).unwrap();
        let s = FormSection::monomial(x(0), FormFiber::one(1), 3).unwrap();
        assert_eq!(s.d_c(&k), FormSection::constant(k.j_form(0).clone(), 3));
        assert_eq!(s.dslash(), FormSection::constant(e(1, 0), 3));
        assert!(FormSection::constant(e(1, 0), 3).dslash_c(&k).is_zero());
    }

    #[test]
    fn dirac_of_linear_spinor() {
        let geo = SpinGeometry::<Exact>::flat(2, TypeConvention::Spectral).unwrap();
        let psi0 = SpinorFiber::basis(2, 1);
        let s = SpinorSection::monomial(x(0), psi0.clone(), 3).unwrap();
        let expected = SpinorSection::constant(geo.rep().apply_blade(1, &psi0), 3);
        assert_eq!(s.dirac(&geo), expected);
    }

    #[test]
    fn d_squared_vanishes() {
        let mut r = sample::rng(3);
        let s = sample::form_section(&mut r, 2, 3, 6, 0.2);
        assert!(s.ext_d().ext_d().is_zero());
        assert!(s.coderiv().coderiv().is_zero());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut r = sample::rng(11);
        let s = sample::form_section(&mut r, 2, 2, 4, 0.3);
        let back = FormSection::<Exact>::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        let t = sample::spinor_section(&mut r, 2, 2, 4);
        let back = SpinorSection::<Exact>::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_rejects_garbage() {
        assert!(FormSection::<Exact>::from_json(&json!({"m": 1})).is_err());
        let bad = json!({"m": 1, "degree_bound": 1, "terms": [{"exponents": [0, 0], "fiber": {"9": ["1", "0"]}}]});
        assert!(FormSection::<Exact>::from_json(&bad).is_err());
    }

    #[test]
    fn degree_bound_is_enforced() {
        let mut s = FormSection::<Exact>::zero(1, 1);
        assert!(s.add_term(Monomial::var(0).mul(&Monomial::var(1)), e(1, 0)).is_err());
    }
}
