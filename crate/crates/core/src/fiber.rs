//! Graded exterior/Clifford algebra over the real cotangent fiber of ℝ^{2m}.
//!
//! Generators are indexed `0..2m`; a basis element is a bit mask of
//! generators, so `e^{i1} ∧ … ∧ e^{ik}` with `i1 < … < ik` is the mask with
//! those bits set. The Clifford product uses `v.v = +g(v, v)`, which is what
//! `e^a.ω = e^a∧ω + i_{X^a}ω` forces.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_HALF_DIM: usize = 4;

pub fn check_half_dim(m: usize) -> Result<()> {
    if (1..=MAX_HALF_DIM).contains(&m) {
        Ok(())
    } else {
        Err(Error::HalfDimension(m))
    }
}

/// Reordering sign tables, one per half-dimension.
struct SignTable {
    n: usize,
    bits: Vec<u64>,
}

impl SignTable {
    fn build(n: usize) -> Self {
        let size = 1usize << n;
        let mut bits = vec![0u64; (size * size).div_ceil(64)];
        for a in 0..size {
            for b in 0..size {
                if raw_reorder_odd(a as u32, b as u32) {
                    let idx = a * size + b;
                    bits[idx / 64] |= 1 << (idx % 64);
                }
            }
        }
        Self { n, bits }
    }

    #[inline]
    fn odd(&self, a: u32, b: u32) -> bool {
        let idx = ((a as usize) << self.n) | b as usize;
        self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }
}

fn raw_reorder_odd(a: u32, b: u32) -> bool {
    // For each generator of `a`, count the generators of `b` that precede it.
    let mut swaps = 0;
    let mut rest = a;
    while rest != 0 {
        let i = rest.trailing_zeros();
        swaps += (b & ((1u32 << i) - 1)).count_ones();
        rest &= rest - 1;
    }
    swaps % 2 == 1
}

fn sign_table(m: usize) -> &'static SignTable {
    #[allow(clippy::declare_interior_mutable_const)]
    const EMPTY: OnceLock<SignTable> = OnceLock::new();
    static TABLES: [OnceLock<SignTable>; MAX_HALF_DIM + 1] = [EMPTY; MAX_HALF_DIM + 1];
    TABLES[m].get_or_init(|| SignTable::build(2 * m))
}

/// Sign of `e_A e_B = ± e_{A xor B}` in the Euclidean Clifford algebra
/// (and of `e_A ∧ e_B` when the masks are disjoint).
#[inline]
pub fn product_sign_odd(m: usize, a: u32, b: u32) -> bool {
    sign_table(m).odd(a, b)
}

#[inline]
pub fn grade_of(mask: u32) -> usize {
    mask.count_ones() as usize
}

/// A tangent vector in the orthonormal frame `{X_0, …, X_{2m-1}}`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorFiber<S> {
    m: usize,
    comps: Vec<S>,
}

impl<S: Scalar> VectorFiber<S> {
    pub fn new(m: usize, comps: Vec<S>) -> Result<Self> {
        check_half_dim(m)?;
        if comps.len() != 2 * m {
            return Err(Error::DimensionMismatch { left: 2 * m, right: comps.len() });
        }
        Ok(Self { m, comps })
    }

    pub fn zero(m: usize) -> Self {
        Self { m, comps: vec![S::zero(); 2 * m] }
    }

    /// The frame vector `X_k`.
    pub fn basis(m: usize, k: usize) -> Self {
        let mut v = Self::zero(m);
        v.comps[k] = S::one();
        v
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    pub fn add(&self, other: &Self) -> Self {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { m: self.m, comps }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { m: self.m, comps }
    }

    pub fn scale(&self, s: &S) -> Self {
        let comps = self.comps.iter().map(|a| a.clone() * s.clone()).collect();
        Self { m: self.m, comps }
    }

    /// Metric dual 1-form (complex-bilinear extension of `g`).
    pub fn dual(&self) -> FormFiber<S> {
        let mut f = FormFiber::zero(self.m);
        for (k, c) in self.comps.iter().enumerate() {
            f.coeffs[1 << k] = c.clone();
        }
        f
    }

    /// Complex-bilinear metric `g(X, Y)`.
    pub fn dot(&self, other: &Self) -> S {
        self.comps
            .iter()
            .zip(&other.comps)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvolutionKind {
    Xi,
    Eta,
    XiEta,
}

/// Grade involutions `ξ`, `η`, `ξη`, optionally composed with complex conjugation.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Involution {
    pub kind: InvolutionKind,
    pub conjugate: bool,
}

impl Involution {
    pub const XI: Self = Self { kind: InvolutionKind::Xi, conjugate: false };
    pub const XI_STAR: Self = Self { kind: InvolutionKind::Xi, conjugate: true };
    pub const ETA: Self = Self { kind: InvolutionKind::Eta, conjugate: false };
    pub const XI_ETA: Self = Self { kind: InvolutionKind::XiEta, conjugate: false };
    pub const XI_ETA_STAR: Self = Self { kind: InvolutionKind::XiEta, conjugate: true };

    /// The four choices a spin-invariant pairing may realize.
    pub const PAIRING_CHOICES: [Self; 4] = [Self::XI, Self::XI_STAR, Self::XI_ETA, Self::XI_ETA_STAR];

    /// Whether the sign on grade `p` is `-1`.
    pub fn flips(self, p: usize) -> bool {
        match self.kind {
            InvolutionKind::Xi => (p / 2) % 2 == 1,
            InvolutionKind::Eta => p % 2 == 1,
            InvolutionKind::XiEta => ((p / 2) + p) % 2 == 1,
        }
    }
}

impl fmt::Display for Involution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match self.kind {
            InvolutionKind::Xi => "xi",
            InvolutionKind::Eta => "eta",
            InvolutionKind::XiEta => "xi-eta",
        };
        write!(f, "{base}{}", if self.conjugate { "*" } else { "" })
    }
}

impl FromStr for Involution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, conjugate) = match s.strip_suffix('*') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let kind = match base {
            "xi" => InvolutionKind::Xi,
            "eta" => InvolutionKind::Eta,
            "xi-eta" | "xieta" => InvolutionKind::XiEta,
            _ => return Err(Error::Precondition(format!("unknown involution '{s}'"))),
        };
        Ok(Self { kind, conjugate })
    }
}

/// Complex multivector in the `2^{2m}`-dimensional fiber, stored densely by mask.
#[derive(Clone, PartialEq)]
pub struct FormFiber<S> {
    m: usize,
    coeffs: Vec<S>,
}

impl<S: Scalar> fmt::Debug for FormFiber<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = f.debug_map();
        for (mask, c) in self.terms() {
            terms.entry(&format!("{mask:0w$b}", w = 2 * self.m), &c.to_c64());
        }
        terms.finish()
    }
}

impl<S: Scalar> FormFiber<S> {
    pub fn zero(m: usize) -> Self {
        debug_assert!(m <= MAX_HALF_DIM);
        Self { m, coeffs: vec![S::zero(); 1 << (2 * m)] }
    }

    pub fn scalar(m: usize, s: S) -> Self {
        Self::blade(m, 0, s)
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, S::one())
    }

    pub fn blade(m: usize, mask: u32, s: S) -> Self {
        let mut f = Self::zero(m);
        f.coeffs[mask as usize] = s;
        f
    }

    /// The coframe generator `e^k`.
    pub fn generator(m: usize, k: usize) -> Self {
        Self::blade(m, 1 << k, S::one())
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<S>) -> Result<Self> {
        check_half_dim(m)?;
        if coeffs.len() != 1 << (2 * m) {
            return Err(Error::DimensionMismatch { left: 1 << (2 * m), right: coeffs.len() });
        }
        Ok(Self { m, coeffs })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, mask: u32) -> &S {
        &self.coeffs[mask as usize]
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, mask: u32, s: S) {
        self.coeffs[mask as usize] = s;
    }

    /// Nonzero `(mask, coefficient)` pairs in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k as u32, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_negligible)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m == other.m {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { left: self.m, right: other.m })
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { m: self.m, coeffs }
    }

    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.m, other.m);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a = a.clone() + b.clone();
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { m: self.m, coeffs }
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Self::zero(self.m);
        }
        self.map(|c| c.clone() * s.clone())
    }

    pub fn conj(&self) -> Self {
        self.map(Scalar::conj)
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        let coeffs = self.coeffs.iter().map(|c| if c.is_zero() { c.clone() } else { f(c) }).collect();
        Self { m: self.m, coeffs }
    }

    /// Exterior product.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.wedge_raw(other))
    }

    pub(crate) fn wedge_raw(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if a & b != 0 {
                    continue;
                }
                let t = ca.clone() * cb.clone();
                let slot = &mut out.coeffs[(a | b) as usize];
                *slot = if product_sign_odd(self.m, a, b) { slot.clone() - t } else { slot.clone() + t };
            }
        }
        out
    }

    /// Clifford product with `v.v = +g(v, v)`.
    pub fn clifford_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.clifford_raw(other))
    }

    pub(crate) fn clifford_raw(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let t = ca.clone() * cb.clone();
                let slot = &mut out.coeffs[(a ^ b) as usize];
                *slot = if product_sign_odd(self.m, a, b) { slot.clone() - t } else { slot.clone() + t };
            }
        }
        out
    }

    /// Interior product `i_{X_k}` with a frame vector.
    pub fn contract_basis(&self, k: usize) -> Self {
        let bit = 1u32 << k;
        let mut out = Self::zero(self.m);
        for (a, c) in self.terms() {
            if a & bit == 0 {
                continue;
            }
            let below = (a & (bit - 1)).count_ones();
            out.coeffs[(a ^ bit) as usize] = if below % 2 == 1 { -c.clone() } else { c.clone() };
        }
        out
    }

    /// `e^k ∧ self`.
    pub fn wedge_generator(&self, k: usize) -> Self {
        let bit = 1u32 << k;
        let mut out = Self::zero(self.m);
        for (a, c) in self.terms() {
            if a & bit != 0 {
                continue;
            }
            let below = (a & (bit - 1)).count_ones();
            out.coeffs[(a | bit) as usize] = if below % 2 == 1 { -c.clone() } else { c.clone() };
        }
        out
    }

    /// Interior product `i_X`.
    pub fn contract(&self, x: &VectorFiber<S>) -> Result<Self> {
        if x.m != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: x.m });
        }
        Ok(self.contract_raw(x))
    }

    pub(crate) fn contract_raw(&self, x: &VectorFiber<S>) -> Self {
        let mut out = Self::zero(self.m);
        for (k, c) in x.comps.iter().enumerate() {
            if !c.is_zero() {
                out.add_assign(&self.contract_basis(k).scale(c));
            }
        }
        out
    }

    pub fn involution(&self, j: Involution) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| {
                let c = if j.conjugate { c.conj() } else { c.clone() };
                if j.flips(grade_of(mask as u32)) {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Self { m: self.m, coeffs }
    }

    /// Grade-`p` homogeneous part.
    pub fn grade_project(&self, p: usize) -> Result<Self> {
        if p > 2 * self.m {
            return Err(Error::GradeOutOfRange { grade: p, max: 2 * self.m });
        }
        Ok(self.grade_part(p))
    }

    /// Like [`grade_project`](Self::grade_project) but out-of-range grades give zero.
    pub fn grade_part(&self, p: usize) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| if grade_of(mask as u32) == p { c.clone() } else { S::zero() })
            .collect();
        Self { m: self.m, coeffs }
    }

    /// The grade if the element is nonzero and homogeneous.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        let mut grades = self.terms().map(|(mask, _)| grade_of(mask));
        let first = grades.next()?;
        grades.all(|g| g == first).then_some(first)
    }

    /// Clifford reversion `e_{a1}…e_{ap} ↦ e_{ap}…e_{a1}` (the `ξ` sign law).
    pub fn reverse(&self) -> Self {
        self.involution(Involution::XI)
    }
}
