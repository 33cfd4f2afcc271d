//! The spinor module `Σ ≅ ℂ^{2^m}`: a Jordan–Wigner representation of the
//! Clifford fiber, the complex volume element, the type decomposition under
//! Clifford multiplication by `Ω`, and spin-invariant pairings.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fiber::{check_half_dim, FormFiber, Involution, VectorFiber};
use crate::kahler::Kahler;
use crate::linalg::{spectral_projector, Matrix};
use crate::scalar::Scalar;

/// A spinor at a point.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorFiber<S> {
    m: usize,
    comps: Vec<S>,
}

impl<S: Scalar> SpinorFiber<S> {
    pub fn new(m: usize, comps: Vec<S>) -> Result<Self> {
        check_half_dim(m)?;
        if comps.len() != 1 << m {
            return Err(Error::DimensionMismatch { left: 1 << m, right: comps.len() });
        }
        Ok(Self { m, comps })
    }

    pub fn zero(m: usize) -> Self {
        Self { m, comps: vec![S::zero(); 1 << m] }
    }

    pub fn basis(m: usize, k: usize) -> Self {
        let mut s = Self::zero(m);
        s.comps[k] = S::one();
        s
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[S] {
        &self.comps
    }

    pub fn set(&mut self, k: usize, v: S) {
        self.comps[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Zero::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.comps.iter().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.clone() + b.clone()).collect();
        Self { m: self.m, comps }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (a, b) in self.comps.iter_mut().zip(&other.comps) {
            if !b.is_zero() {
                *a = a.clone() + b.clone();
            }
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.clone() - b.clone()).collect();
        Self { m: self.m, comps }
    }

    pub fn neg(&self) -> Self {
        Self { m: self.m, comps: self.comps.iter().map(|a| -a.clone()).collect() }
    }

    pub fn scale(&self, s: &S) -> Self {
        Self { m: self.m, comps: self.comps.iter().map(|a| a.clone() * s.clone()).collect() }
    }

    pub fn conj(&self) -> Self {
        Self { m: self.m, comps: self.comps.iter().map(Scalar::conj).collect() }
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self { m: self.m, comps: self.comps.iter().map(f).collect() }
    }

    pub fn apply_matrix(&self, a: &Matrix<S>) -> Self {
        Self { m: self.m, comps: a.apply(&self.comps) }
    }
}


/// A signed permutation with phases `i^k`: `out[perm[j]] += i^phase[j] in[j]`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct MonomialOp {
    perm: Vec<u32>,
    phase: Vec<u8>,
}

impl MonomialOp {
    fn identity(n: usize) -> Self {
        Self { perm: (0..n as u32).collect(), phase: vec![0; n] }
    }

    /// `self ∘ inner`.
    fn after(&self, inner: &Self) -> Self {
        let perm = inner.perm.iter().map(|&p| self.perm[p as usize]).collect();
        let phase =
            inner.perm.iter().zip(&inner.phase).map(|(&p, &ph)| (ph + self.phase[p as usize]) & 3).collect();
        Self { perm, phase }
    }
}

/// Irreducible representation of `Cl(2m)` on `ℂ^{2^m}` with
/// `γ(e^a)γ(e^b) + γ(e^b)γ(e^a) = 2δ^{ab}`.
///
/// Generator `2a` acts as `Z⊗…⊗Z⊗σ_x` on qubit `a`, generator `2a+1` as
/// `Z⊗…⊗Z⊗σ_y`. Every basis blade is then a monomial matrix, stored by mask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaRep {
    m: usize,
    blades: Vec<MonomialOp>,
}

impl GammaRep {
    pub fn new(m: usize) -> Result<Self> {
        check_half_dim(m)?;
        let n = 1usize << m;
        let generators: Vec<MonomialOp> = (0..2 * m)
            .map(|k| {
                let (qubit, y) = (k / 2, k % 2 == 1);
                let below = (1u32 << qubit) - 1;
                let mut op = MonomialOp { perm: vec![0; n], phase: vec![0; n] };
                for j in 0..n as u32 {
                    let z = ((j & below).count_ones() & 1) as u8 * 2;
                    let bit = (j >> qubit) & 1;
                    op.perm[j as usize] = j ^ (1 << qubit);
                    op.phase[j as usize] = (z + if y { if bit == 0 { 1 } else { 3 } } else { 0 }) & 3;
                }
                op
            })
            .collect();
        let mut blades = Vec::with_capacity(1 << (2 * m));
        blades.push(MonomialOp::identity(n));
        for mask in 1u32..1 << (2 * m) {
            let low = mask.trailing_zeros() as usize;
            let rest = &blades[(mask & (mask - 1)) as usize];
            blades.push(generators[low].after(rest));
        }
        Ok(Self { m, blades })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.m
    }

    /// Action of the basis blade `e^{mask}` (ascending generators).
    pub fn apply_blade<S: Scalar>(&self, mask: u32, psi: &SpinorFiber<S>) -> SpinorFiber<S> {
        let op = &self.blades[mask as usize];
        let mut out = SpinorFiber::zero(self.m);
        for (j, c) in psi.comps.iter().enumerate() {
            if !c.is_zero() {
                out.comps[op.perm[j] as usize] = c.mul_i_pow(op.phase[j]);
            }
        }
        out
    }

    /// Clifford action of an inhomogeneous form.
    pub fn act<S: Scalar>(&self, a: &FormFiber<S>, psi: &SpinorFiber<S>) -> Result<SpinorFiber<S>> {
        if a.m() != self.m || psi.m() != self.m {
            return Err(Error::DimensionMismatch { left: self.m, right: a.m().max(psi.m()) });
        }
        Ok(self.act_raw(a, psi))
    }

    pub fn act_raw<S: Scalar>(&self, a: &FormFiber<S>, psi: &SpinorFiber<S>) -> SpinorFiber<S> {
        let mut out = SpinorFiber::<S>::zero(self.m);
        for (mask, c) in a.terms() {
            let op = &self.blades[mask as usize];
            for (j, v) in psi.comps.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let k = op.perm[j] as usize;
                out.comps[k] = out.comps[k].clone() + (c.clone() * v.clone()).mul_i_pow(op.phase[j]);
            }
        }
        out
    }

    /// Nonzero entries `(row, col, k)` of the blade matrix, each equal to `i^k`.
    pub fn blade_entries(&self, mask: u32) -> impl Iterator<Item = (usize, usize, u8)> + '_ {
        let op = &self.blades[mask as usize];
        op.perm.iter().zip(&op.phase).enumerate().map(|(j, (&p, &ph))| (p as usize, j, ph))
    }

    pub fn blade_matrix<S: Scalar>(&self, mask: u32) -> Matrix<S> {
        let op = &self.blades[mask as usize];
        let n = self.spinor_dim();
        let mut out = Matrix::zeros(n, n);
        for j in 0..n {
            out[(op.perm[j] as usize, j)] = S::one().mul_i_pow(op.phase[j]);
        }
        out
    }

    pub fn form_matrix<S: Scalar>(&self, a: &FormFiber<S>) -> Matrix<S> {
        let n = self.spinor_dim();
        let mut out = Matrix::<S>::zeros(n, n);
        for (mask, c) in a.terms() {
            let op = &self.blades[mask as usize];
            for j in 0..n {
                let k = op.perm[j] as usize;
                out[(k, j)] = out[(k, j)].clone() + c.mul_i_pow(op.phase[j]);
            }
        }
        out
    }
}

/// How type indices are attached to eigenspaces of `Ω`.
///
/// `Spectral` labels the eigenvalue `i(2r - m)` as type `r`. `Ladder` labels
/// `i(m - 2r)` as type `r`, which is the labelling under which `X̃⁺` raises
/// the type when `e.e = +1`.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeConvention {
    #[default]
    Spectral,
    Ladder,
}

impl TypeConvention {
    pub const ALL: [Self; 2] = [Self::Spectral, Self::Ladder];

    /// `Ω`-eigenvalue of type `r`, divided by `i`.
    pub fn eigenvalue_over_i(self, m: usize, r: usize) -> i64 {
        let v = 2 * r as i64 - m as i64;
        match self {
            Self::Spectral => v,
            Self::Ladder => -v,
        }
    }
}

impl fmt::Display for TypeConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Spectral => "spectral",
            Self::Ladder => "ladder",
        })
    }
}

impl FromStr for TypeConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spectral" => Ok(Self::Spectral),
            "ladder" => Ok(Self::Ladder),
            other => Err(Error::Format(format!("unknown type convention `{other}`"))),
        }
    }
}

/// Binomial coefficient, zero outside `0 ≤ k ≤ n`.
pub fn binomial(n: usize, k: i64) -> usize {
    if k < 0 || k as usize > n {
        return 0;
    }
    let k = k as usize;
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Representation, Kähler data and type projectors bundled together.
#[derive(Clone, Debug)]
pub struct SpinGeometry<S: Scalar> {
    rep: GammaRep,
    kahler: Kahler<S>,
    convention: TypeConvention,
    omega: Matrix<S>,
    volume: Matrix<S>,
    projectors: Vec<Matrix<S>>,
}

impl<S: Scalar> SpinGeometry<S> {
    /// Builds the type projectors and checks them against the expected
    /// spectrum; a mismatch is reported as [`Error::Calibration`].
    pub fn new(kahler: Kahler<S>, convention: TypeConvention) -> Result<Self> {
        let m = kahler.m();
        let rep = GammaRep::new(m)?;
        let n = rep.spinor_dim();
        let omega = rep.form_matrix(kahler.kahler_form());
        let volume = rep.form_matrix(&complex_volume_form(&kahler)?);
        let spectrum: Vec<S> = (0..=m)
            .map(|r| S::imag_unit() * S::from_i64(convention.eigenvalue_over_i(m, r)))
            .collect();
        let projectors: Vec<_> = (0..=m).map(|r| spectral_projector(&omega, &spectrum, r)).collect();

        let mut total = Matrix::zeros(n, n);
        for (r, p) in projectors.iter().enumerate() {
            let defect = omega.mul(p).sub(&p.scale(&spectrum[r]));
            if !negligible(&defect) {
                return Err(Error::Calibration(format!("Ω does not act by i({}) on type {r}", spectrum[r].to_c64().im)));
            }
            if !negligible(&p.mul(p).sub(p)) {
                return Err(Error::Calibration(format!("type-{r} projector is not idempotent")));
            }
            let rank = p.trace();
            if !(rank.clone() - S::from_i64(binomial(m, r as i64) as i64)).is_negligible() {
                return Err(Error::Calibration(format!(
                    "type-{r} rank {} differs from C({m},{r})",
                    rank.to_c64().re
                )));
            }
            total = total.add(p);
        }
        if !negligible(&total.sub(&Matrix::identity(n))) {
            return Err(Error::Calibration("type projectors do not sum to the identity".into()));
        }
        Ok(Self { rep, kahler, convention, omega, volume, projectors })
    }

    pub fn flat(m: usize, convention: TypeConvention) -> Result<Self> {
        Self::new(Kahler::flat(m)?, convention)
    }

    pub fn m(&self) -> usize {
        self.kahler.m()
    }

    pub fn rep(&self) -> &GammaRep {
        &self.rep
    }

    pub fn kahler(&self) -> &Kahler<S> {
        &self.kahler
    }

    pub fn convention(&self) -> TypeConvention {
        self.convention
    }

    /// Matrix of Clifford multiplication by `Ω`.
    pub fn omega_matrix(&self) -> &Matrix<S> {
        &self.omega
    }

    /// Matrix of the complex volume element `z^ℂ`.
    pub fn volume_matrix(&self) -> &Matrix<S> {
        &self.volume
    }

    pub fn projector(&self, r: usize) -> Result<&Matrix<S>> {
        self.projectors.get(r).ok_or(Error::TypeIndex { r, m: self.m() })
    }

    pub fn projectors(&self) -> &[Matrix<S>] {
        &self.projectors
    }

    pub fn project(&self, r: usize, psi: &SpinorFiber<S>) -> Result<SpinorFiber<S>> {
        Ok(psi.apply_matrix(self.projector(r)?))
    }

    /// Basis of `Σ_r`.
    pub fn type_basis(&self, r: usize) -> Result<Vec<SpinorFiber<S>>> {
        let p = self.projector(r)?;
        let complement = Matrix::identity(p.rows()).sub(p);
        Ok(complement.nullspace().into_iter().map(|v| SpinorFiber { m: self.m(), comps: v }).collect())
    }

    /// The type of a nonzero spinor lying in a single `Σ_r`.
    pub fn type_of(&self, psi: &SpinorFiber<S>) -> Option<usize> {
        if psi.is_zero() {
            return None;
        }
        (0..=self.m()).find(|&r| psi.sub(&psi.apply_matrix(&self.projectors[r])).max_abs() < purity_tol::<S>())
    }

    /// Matrix of Clifford multiplication by a 1-form dual to `x`.
    pub fn vector_matrix(&self, x: &VectorFiber<S>) -> Matrix<S> {
        self.rep.form_matrix(&x.dual())
    }
}

fn purity_tol<S: Scalar>() -> f64 {
    if S::EXACT {
        0.0
    } else {
        1e-10
    }
}

fn negligible<S: Scalar>(a: &Matrix<S>) -> bool {
    if S::EXACT {
        a.is_zero()
    } else {
        a.max_abs() < 1e-9
    }
}

/// `z^ℂ = i^m ∏ e_u . Je_u` over an adapted frame.
pub fn complex_volume_form<S: Scalar>(kahler: &Kahler<S>) -> Result<FormFiber<S>> {
    let m = kahler.m();
    let mut z = FormFiber::scalar(m, S::one().mul_i_pow((m % 4) as u8));
    for u in kahler.structure().adapted_frame() {
        let pair = FormFiber::generator(m, u).clifford_mul(kahler.j_form(u))?;
        z = z.clifford_mul(&pair)?;
    }
    Ok(z)
}

/// One off-ladder block `Π_to γ(X̃^±_a) Π_from ≠ 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderViolation {
    pub direction: usize,
    pub raising: bool,
    pub from: usize,
    pub to: usize,
    pub norm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LadderReport {
    pub m: usize,
    pub convention: TypeConvention,
    pub blocks_checked: usize,
    pub violations: Vec<LadderViolation>,
}

impl LadderReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `X̃⁺.Σ_r ⊆ Σ_{r+1}` and `X̃⁻.Σ_r ⊆ Σ_{r-1}` for every frame vector.
pub fn raising_lowering_check<S: Scalar>(geo: &SpinGeometry<S>) -> Result<LadderReport> {
    let m = geo.m();
    let mut violations = Vec::new();
    let mut blocks_checked = 0;
    for a in 0..2 * m {
        let (plus, minus) = geo.kahler().split_pm(&VectorFiber::basis(m, a))?;
        for (raising, x) in [(true, plus), (false, minus)] {
            let g = geo.vector_matrix(&x);
            for from in 0..=m {
                let moved = g.mul(&geo.projectors[from]);
                for to in 0..=m {
                    let expected = if raising { from + 1 == to } else { to + 1 == from };
                    if expected {
                        continue;
                    }
                    blocks_checked += 1;
                    let block = geo.projectors[to].mul(&moved);
                    if !negligible(&block) {
                        violations.push(LadderViolation { direction: a, raising, from, to, norm: block.max_abs() });
                    }
                }
            }
        }
    }
    Ok(LadderReport { m, convention: geo.convention(), blocks_checked, violations })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiralityReport {
    pub m: usize,
    pub convention: TypeConvention,
    pub volume_squares_to_one: bool,
    /// Per type: does `z^ℂ` act on `Σ_r` by `(-1)^r`?
    pub parity_matches: Vec<bool>,
    /// Per type: `[z^ℂ, Π_r] = 0`.
    pub commutes: Vec<bool>,
}

impl ChiralityReport {
    pub fn pass(&self) -> bool {
        self.volume_squares_to_one
            && self.parity_matches.iter().all(|&b| b)
            && self.commutes.iter().all(|&b| b)
    }
}

/// Check that `Σ_r` sits in the `(-1)^r` eigenspace of `z^ℂ`.
pub fn chirality_consistency<S: Scalar>(geo: &SpinGeometry<S>) -> ChiralityReport {
    let z = geo.volume_matrix();
    let n = z.rows();
    let volume_squares_to_one = negligible(&z.mul(z).sub(&Matrix::identity(n)));
    let mut parity_matches = Vec::new();
    let mut commutes = Vec::new();
    for (r, p) in geo.projectors.iter().enumerate() {
        let sign = S::from_i64(if r % 2 == 0 { 1 } else { -1 });
        parity_matches.push(negligible(&z.mul(p).sub(&p.scale(&sign))));
        commutes.push(negligible(&z.mul(p).sub(&p.mul(z))));
    }
    ChiralityReport { m: geo.m(), convention: geo.convention(), volume_squares_to_one, parity_matches, commutes }
}

/// Spin-invariant pairing `(φ, ψ) = φ'ᵀ A ψ`, with `φ' = φ̄` when the
/// involution conjugates, realizing `(φ, ω.ψ) = (ω^𝒥.φ, ψ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingMatrix<S> {
    m: usize,
    involution: Involution,
    matrix: Matrix<S>,
    solution_dim: usize,
}

impl<S: Scalar> PairingMatrix<S> {
    /// Solve the intertwiner constraints `A γ_k = s γ_k' A` for every
    /// generator, where `γ' = γᵀ` or `γ†` and `s` is the involution's sign on
    /// 1-forms. The solution is normalized so its first nonzero entry is 1.
    pub fn build(rep: &GammaRep, involution: Involution) -> Result<Self> {
        if !Involution::PAIRING_CHOICES.contains(&involution) {
            return Err(Error::NoPairing(format!("{involution} is not an admissible pairing involution")));
        }
        let n = rep.spinor_dim();
        let sign = S::from_i64(if involution.flips(1) { -1 } else { 1 });
        let mut rows = Vec::new();
        for k in 0..2 * rep.m() {
            let g: Matrix<S> = rep.blade_matrix(1 << k);
            for i in 0..n {
                for j in 0..n {
                    // Σ_l A_il γ_lj - s Σ_l γ'_il A_lj, with γ'_il = γ_li (or its conjugate).
                    let mut row = vec![S::zero(); n * n];
                    for l in 0..n {
                        let glj = g[(l, j)].clone();
                        if !glj.is_zero() {
                            row[i * n + l] = row[i * n + l].clone() + glj;
                        }
                        let gli = if involution.conjugate { g[(l, i)].conj() } else { g[(l, i)].clone() };
                        if !gli.is_zero() {
                            row[l * n + j] = row[l * n + j].clone() - sign.clone() * gli;
                        }
                    }
                    if row.iter().any(|c| !c.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = Matrix::from_rows(rows).nullspace();
        let Some(first) = kernel.first() else {
            return Err(Error::NoPairing(format!("no {involution} pairing exists at m = {}", rep.m())));
        };
        let lead = first.iter().find(|c| !c.is_negligible()).cloned().expect("kernel vector is nonzero");
        let data: Vec<S> = first.iter().map(|c| c.clone() / lead.clone()).collect();
        let matrix = Matrix::from_rows(data.chunks(n).map(<[S]>::to_vec).collect());
        Ok(Self { m: rep.m(), involution, matrix, solution_dim: kernel.len() })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn involution(&self) -> Involution {
        self.involution
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    /// Dimension of the space of solutions of the intertwiner constraints.
    pub fn solution_dim(&self) -> usize {
        self.solution_dim
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.matrix.rank() == self.matrix.rows()
    }

    /// The dual spinor `φ̄` as a row vector: `φ̄(κ) = (φ, κ)`.
    pub fn dual_row(&self, phi: &SpinorFiber<S>) -> Vec<S> {
        let n = phi.dim();
        (0..n)
            .map(|j| {
                (0..n).fold(S::zero(), |acc, i| {
                    let a = &self.matrix[(i, j)];
                    if a.is_zero() {
                        return acc;
                    }
                    let p = if self.involution.conjugate { phi.comps[i].conj() } else { phi.comps[i].clone() };
                    acc + p * a.clone()
                })
            })
            .collect()
    }

    /// Same pairing in another backend.
    pub fn convert<T: Scalar>(&self, f: impl Fn(&S) -> T) -> PairingMatrix<T> {
        let rows = (0..self.matrix.rows()).map(|i| self.matrix.row(i).iter().map(&f).collect()).collect();
        PairingMatrix { m: self.m, involution: self.involution, matrix: Matrix::from_rows(rows), solution_dim: self.solution_dim }
    }

    pub fn pair(&self, phi: &SpinorFiber<S>, psi: &SpinorFiber<S>) -> S {
        self.dual_row(phi).into_iter().zip(&psi.comps).fold(S::zero(), |acc, (a, b)| acc + a * b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, Exact};

    fn spinor(m: usize, seed: i64) -> SpinorFiber<Exact> {
        let comps = (0..1i64 << m)
            .map(|k| gauss((k * 7 + seed) % 5 - 2, (k * 3 + seed) % 4 - 1))
            .collect();
        SpinorFiber::new(m, comps).unwrap()
    }

    #[test]
    fn generators_anticommute() {
        for m in 1..=4 {
            let rep = GammaRep::new(m).unwrap();
            let n = rep.spinor_dim();
            for a in 0..2 * m {
                for b in 0..2 * m {
                    let ga: Matrix<Exact> = rep.blade_matrix(1 << a);
                    let gb = rep.blade_matrix(1 << b);
                    let anti = ga.mul(&gb).add(&gb.mul(&ga));
                    let expected = if a == b { Matrix::identity(n).scale(&Exact::from_i64(2)) } else { Matrix::zeros(n, n) };
                    assert_eq!(anti, expected, "m={m} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn action_is_a_homomorphism() {
        let m = 2;
        let rep = GammaRep::new(m).unwrap();
        let a = FormFiber::generator(m, 0).add(&FormFiber::generator(m, 1).wedge_raw(&FormFiber::generator(m, 3)));
        let b = FormFiber::generator(m, 2).add(&FormFiber::scalar(m, Exact::from_ratio(1, 3)));
        let psi = spinor(m, 1);
        let lhs = rep.act(&a.clifford_mul(&b).unwrap(), &psi).unwrap();
        let rhs = rep.act(&a, &rep.act(&b, &psi).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(rep.act(&FormFiber::one(m), &psi).unwrap(), psi);
    }

    #[test]
    fn spectrum_multiplicities() {
        for m in 1..=3 {
            for conv in TypeConvention::ALL {
                let geo = SpinGeometry::<Exact>::flat(m, conv).unwrap();
                for r in 0..=m {
                    assert_eq!(geo.type_basis(r).unwrap().len(), binomial(m, r as i64));
                }
            }
        }
    }

    #[test]
    fn ladder_and_parity_depend_on_labelling() {
        let spectral = SpinGeometry::<Exact>::flat(1, TypeConvention::Spectral).unwrap();
        let ladder = SpinGeometry::<Exact>::flat(1, TypeConvention::Ladder).unwrap();
        assert!(chirality_consistency(&spectral).pass());
        assert!(!raising_lowering_check(&spectral).unwrap().pass());
        assert!(raising_lowering_check(&ladder).unwrap().pass());
        assert!(!chirality_consistency(&ladder).pass());
    }

    #[test]
    fn pairings_exist_and_are_invariant() {
        for m in 1..=3 {
            let rep = GammaRep::new(m).unwrap();
            for inv in Involution::PAIRING_CHOICES {
                let p = PairingMatrix::<Exact>::build(&rep, inv).unwrap();
                assert!(p.is_nondegenerate());
                assert_eq!(p.solution_dim(), 1);
                let (phi, psi) = (spinor(m, 2), spinor(m, 5));
                let w = FormFiber::generator(m, 0)
                    .add(&FormFiber::generator(m, 1).wedge_raw(&FormFiber::generator(m, 0)).scale(&gauss(1, 2)));
                let lhs = p.pair(&phi, &rep.act_raw(&w, &psi));
                let rhs = p.pair(&rep.act_raw(&w.involution(inv), &phi), &psi);
                assert_eq!(lhs, rhs, "m={m} {inv}");
            }
        }
    }

    #[test]
    fn eta_alone_is_rejected() {
        let rep = GammaRep::new(1).unwrap();
        assert!(PairingMatrix::<Exact>::build(&rep, Involution::ETA).is_err());
    }
}
