//! Spinor bilinears: the squaring map `ψ ⊗ φ̄ ↦` Clifford form, its grade
//! and bigrade parts, the gap forms, and residual checks for the bilinear
//! form equation and the (Kählerian) conformal Killing–Yano equations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fiber::{FormFiber, Involution, VectorFiber};
use crate::fields::{FormSection, SpinorSection};
use crate::kahler::{Bigrade, Kahler};
use crate::report::{measure, MaxResidual, ResidualReport, Sampling};
use crate::scalar::{Exact, Scalar};
use crate::spinor::{PairingMatrix, SpinGeometry, SpinorFiber};
use crate::twistor::{
    check_type, constants_antiholomorphic, constants_holomorphic, constants_kl, solves, ConstantsKl, TwistorVariant,
};

fn lift<S: Scalar>(q: &BigRational) -> S {
    S::from_exact(&Exact::new(q.clone(), BigRational::zero()))
}

/// Representation, Kähler data and a pairing: everything the squaring map needs.
#[derive(Clone, Copy, Debug)]
pub struct BilinearContext<'a, S: Scalar> {
    pub geo: &'a SpinGeometry<S>,
    pub pairing: &'a PairingMatrix<S>,
}

impl<'a, S: Scalar> BilinearContext<'a, S> {
    pub fn new(geo: &'a SpinGeometry<S>, pairing: &'a PairingMatrix<S>) -> Result<Self> {
        if geo.m() != pairing.m() {
            return Err(Error::DimensionMismatch { left: geo.m(), right: pairing.m() });
        }
        Ok(Self { geo, pairing })
    }

    pub fn m(&self) -> usize {
        self.geo.m()
    }

    pub fn kahler(&self) -> &'a Kahler<S> {
        self.geo.kahler()
    }

    /// `c_m = 2^{-m}`, the constant making `(ψφ̄).κ = (φ, κ)ψ` hold.
    pub fn normalization(&self) -> S {
        S::from_ratio(1, 1 << self.m())
    }

    /// `ψφ̄` by expanding the rank-one operator `κ ↦ (φ, κ)ψ` in the
    /// Clifford basis: the coefficient of `e^I` is `c_m tr(γ(e_I)^{-1} ψφ̄)`.
    pub fn square_fiber(&self, psi: &SpinorFiber<S>, phi: &SpinorFiber<S>) -> FormFiber<S> {
        let m = self.m();
        let phibar = self.pairing.dual_row(phi);
        let c = self.normalization();
        let mut out = FormFiber::zero(m);
        for mask in 0..1u32 << (2 * m) {
            // γ(e_I)^{-1} = γ(e_I^ξ) = ±γ(e_I); tr(G ψφ̄) = Σ G_{jk} ψ_k φ̄_j.
            let mut tr = S::zero();
            for (row, col, ph) in self.geo.rep().blade_entries(mask) {
                let (x, y) = (&psi.components()[col], &phibar[row]);
                if !x.is_zero() && !y.is_zero() {
                    tr = tr + (x.clone() * y.clone()).mul_i_pow(ph);
                }
            }
            if tr.is_zero() {
                continue;
            }
            if Involution::XI.flips(mask.count_ones() as usize) {
                tr = -tr;
            }
            out.set_coeff(mask, tr * c.clone());
        }
        out
    }

    /// The component formula: coefficient of `e^{a_1…a_p}` is
    /// `(φ, e_{a_p…a_1}.ψ)`, without the normalization constant.
    pub fn square_fiber_components(&self, psi: &SpinorFiber<S>, phi: &SpinorFiber<S>) -> FormFiber<S> {
        let m = self.m();
        let mut out = FormFiber::zero(m);
        for mask in 0..1u32 << (2 * m) {
            let reversed = FormFiber::blade(m, mask, S::one()).reverse();
            let v = self.pairing.pair(phi, &self.geo.rep().act_raw(&reversed, psi));
            if !v.is_zero() {
                out.set_coeff(mask, v);
            }
        }
        out
    }

    /// `ψφ̄` pointwise for sections.
    pub fn square_map(&self, psi: &SpinorSection<S>, phi: &SpinorSection<S>) -> FormSection<S> {
        psi.product(phi, |a, b| self.square_fiber(a, b))
    }

    pub fn decompose(&self, psi: &SpinorSection<S>) -> BilinearDecomposition<S> {
        BilinearDecomposition { full: self.square_map(psi, psi) }
    }

    /// `ψψ̄`, the mixed bilinears `ψ(∇_{X_b}ψ)‾` and the combinations
    /// `𝒜, ℬ, 𝒞, 𝒟` built from them.
    pub fn gap_sources(&self, psi: &SpinorSection<S>) -> GapSources<S> {
        let m = self.m();
        let k = self.kahler();
        let b = self.square_map(psi, psi);
        let mixed: Vec<FormSection<S>> = (0..2 * m).map(|i| self.square_map(psi, &psi.partial(i))).collect();
        let two = S::from_i64(2);
        let zero = FormSection::zero(m, b.degree_bound());
        let (mut wj, mut we, mut ij, mut ie) = (zero.clone(), zero.clone(), zero.clone(), zero);
        for (i, w) in mixed.iter().enumerate() {
            wj.add_assign(&w.wedge_left(k.j_form(i)));
            we.add_assign(&w.map_fibers(|f| f.wedge_generator(i)));
            ij.add_assign(&w.contract(k.j_vector(i)));
            ie.add_assign(&w.map_fibers(|f| f.contract_basis(i)));
        }
        let ds = b.dslash();
        let dsc = b.dslash_c(k);
        GapSources {
            a: dsc.sub(&wj.scale(&two)),
            b_: ds.sub(&we.scale(&two)),
            c: dsc.sub(&ij.scale(&two)),
            d: ds.sub(&ie.scale(&two)),
            bilinear: b,
            mixed,
        }
    }
}

/// `ψψ̄` together with its grade and bigrade parts.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearDecomposition<S: Scalar> {
    pub full: FormSection<S>,
}

impl<S: Scalar> BilinearDecomposition<S> {
    /// `(ψψ̄)_p`.
    pub fn grade(&self, p: usize) -> Result<FormSection<S>> {
        let max = 2 * self.full.m();
        if p > max {
            return Err(Error::GradeOutOfRange { grade: p, max });
        }
        Ok(self.full.grade_part(p))
    }

    /// `(ψψ̄)_{(p,q)}`.
    pub fn pq_part(&self, k: &Kahler<S>, p: usize, q: usize) -> Result<FormSection<S>> {
        Bigrade::new(p, q, k.m())?;
        Ok(self.full.bigrade_project(k, p, q))
    }
}

/// `ψψ̄`, `ψ(∇_{X_b}ψ)‾` and `𝒜`, `ℬ`, `𝒞`, `𝒟`.
#[derive(Clone, Debug)]
pub struct GapSources<S: Scalar> {
    pub bilinear: FormSection<S>,
    pub mixed: Vec<FormSection<S>>,
    /// `𝒜 = ∂̸^c(ψψ̄) - 2Je^b ∧ ψ(∇_bψ)‾`.
    pub a: FormSection<S>,
    /// `ℬ = ∂̸(ψψ̄) - 2e^b ∧ ψ(∇_bψ)‾`.
    pub b_: FormSection<S>,
    /// `𝒞 = ∂̸^c(ψψ̄) - 2i_{JX^b} ψ(∇_bψ)‾`.
    pub c: FormSection<S>,
    /// `𝒟 = ∂̸(ψψ̄) - 2i_{X^b} ψ(∇_bψ)‾`.
    pub d: FormSection<S>,
}

/// How the gap forms are assembled from `𝒜, ℬ, 𝒞, 𝒟`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GapSpec {
    /// `α = k𝒜 + lℬ`, `β = k𝒞 + l𝒟`, `γ = kℬ - l𝒜`, `μ = k𝒟 - l𝒞`.
    Standard {
        #[serde(serialize_with = "ser_ratio")]
        k: BigRational,
        #[serde(serialize_with = "ser_ratio")]
        l: BigRational,
    },
    /// `α = b𝒜`, `β = b𝒞`, `γ = aℬ`, `μ = a𝒟`. With `mu_alt`, `μ` is
    /// projected to `(p, q-1)` instead of `(p+1, q)`.
    Hijazi {
        #[serde(serialize_with = "ser_ratio")]
        a: BigRational,
        #[serde(serialize_with = "ser_ratio")]
        b: BigRational,
        mu_alt: bool,
    },
}

fn ser_ratio<Z: serde::Serializer>(q: &BigRational, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&q.to_string())
}

impl GapSpec {
    pub fn standard(c: ConstantsKl) -> Self {
        Self::Standard { k: c.k, l: c.l }
    }

    /// The gap-form recipe paired with each variant.
    pub fn for_variant(variant: &TwistorVariant, m: usize) -> Result<Self> {
        variant.validate(m)?;
        Ok(match variant {
            TwistorVariant::Kahlerian { r } => Self::standard(constants_kl(m, *r)?),
            TwistorVariant::MiddleType => Self::standard(constants_kl(m, m / 2)?),
            TwistorVariant::Holomorphic { r } => Self::standard(constants_holomorphic(m, *r)?),
            TwistorVariant::AntiHolomorphic { r } => Self::standard(constants_antiholomorphic(m, *r)?),
            TwistorVariant::KirchbergDisplay { r } | TwistorVariant::KirchbergText { r } => {
                if *r == 0 {
                    return Err(Error::Variant("k = 1/(4r) is undefined at r = 0".into()));
                }
                Self::Standard { k: BigRational::new(1.into(), BigInt::from(4 * *r)), l: BigRational::zero() }
            }
            TwistorVariant::Hijazi { a, b } => Self::Hijazi { a: a.clone(), b: b.clone(), mu_alt: false },
            TwistorVariant::Riemannian => Self::Hijazi {
                a: BigRational::new(1.into(), BigInt::from(2 * m)),
                b: BigRational::zero(),
                mu_alt: false,
            },
        })
    }
}

/// `α_{(p,q-1)}`, `β_{(p,q+1)}`, `γ_{(p-1,q)}`, `μ_{(p+1,q)}`.
#[derive(Clone, Debug)]
pub struct GapForms<S: Scalar> {
    pub p: usize,
    pub q: usize,
    pub spec: GapSpec,
    pub alpha: FormSection<S>,
    pub beta: FormSection<S>,
    pub gamma: FormSection<S>,
    pub mu: FormSection<S>,
}

/// Which bigrading the `(p, q)` labels refer to.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bigrading {
    /// Holomorphic degree: the `(p, q)` type with respect to `J`.
    #[default]
    Holomorphic,
    /// Count of frame covectors `e^u` versus `Je^u` in an adapted frame.
    Split,
}

impl Bigrading {
    /// Projection where negative or too-large indices give zero.
    pub fn project<S: Scalar>(
        self,
        k: &Kahler<S>,
        s: &FormSection<S>,
        p: Option<usize>,
        q: Option<usize>,
    ) -> FormSection<S> {
        let (p, q) = match (p, q) {
            (Some(p), Some(q)) if p <= k.m() && q <= k.m() => (p, q),
            _ => return FormSection::zero(s.m(), s.degree_bound()),
        };
        match self {
            Self::Holomorphic => s.bigrade_project(k, p, q),
            Self::Split => {
                let e_mask: u32 = k.structure().adapted_frame().iter().map(|u| 1u32 << u).sum();
                s.map_fibers(|f| {
                    let mut out = FormFiber::zero(f.m());
                    for (mask, c) in f.terms() {
                        let ep = (mask & e_mask).count_ones() as usize;
                        if ep == p && mask.count_ones() as usize - ep == q {
                            out.set_coeff(mask, c.clone());
                        }
                    }
                    out
                })
            }
        }
    }
}

pub fn gap_forms<S: Scalar>(k: &Kahler<S>, src: &GapSources<S>, spec: &GapSpec, p: usize, q: usize) -> GapForms<S> {
    gap_forms_graded(k, src, spec, p, q, Bigrading::Holomorphic)
}

pub fn gap_forms_graded<S: Scalar>(
    k: &Kahler<S>,
    src: &GapSources<S>,
    spec: &GapSpec,
    p: usize,
    q: usize,
    grading: Bigrading,
) -> GapForms<S> {
    let project = |k: &Kahler<S>, s: &FormSection<S>, p, q| grading.project(k, s, p, q);
    let lin = |x: &FormSection<S>, cx: &BigRational, y: &FormSection<S>, cy: &BigRational| {
        x.scale(&lift(cx)).add(&y.scale(&lift(cy)))
    };
    let zero = BigRational::zero();
    let (alpha, beta, gamma, mu, mu_at) = match spec {
        GapSpec::Standard { k: ck, l: cl } => (
            lin(&src.a, ck, &src.b_, cl),
            lin(&src.c, ck, &src.d, cl),
            lin(&src.b_, ck, &src.a, &-cl),
            lin(&src.d, ck, &src.c, &-cl),
            (Some(p + 1), Some(q)),
        ),
        GapSpec::Hijazi { a, b, mu_alt } => (
            lin(&src.a, b, &src.a, &zero),
            lin(&src.c, b, &src.c, &zero),
            lin(&src.b_, a, &src.b_, &zero),
            lin(&src.d, a, &src.d, &zero),
            if *mu_alt { (Some(p), q.checked_sub(1)) } else { (Some(p + 1), Some(q)) },
        ),
    };
    GapForms {
        p,
        q,
        spec: spec.clone(),
        alpha: project(k, &alpha, Some(p), q.checked_sub(1)),
        beta: project(k, &beta, Some(p), Some(q + 1)),
        gamma: project(k, &gamma, p.checked_sub(1), Some(q)),
        mu: project(k, &mu, mu_at.0, mu_at.1),
    }
}

/// How the four brackets of the bilinear form equation are graded.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BracketMode {
    /// Project the `d`, `δ`, `d^c`, `δ^c` brackets to `(p+1,q)`, `(p-1,q)`,
    /// `(p,q+1)`, `(p,q-1)` respectively.
    #[default]
    Labelled,
    /// Use the brackets as written, unprojected.
    Literal,
}

/// Per-direction residuals `∇_{X_a}ω - RHS` of the four-bracket equation
/// with optional gap-form corrections.
pub fn four_bracket_residuals<S: Scalar>(
    k: &Kahler<S>,
    omega: &FormSection<S>,
    p: usize,
    q: usize,
    gaps: Option<&GapForms<S>>,
    mode: BracketMode,
    grading: Bigrading,
) -> Vec<FormSection<S>> {
    let project = |k: &Kahler<S>, s: &FormSection<S>, p, q| grading.project(k, s, p, q);
    let m = k.m();
    let two = S::from_i64(2);
    let mut br1 = omega.ext_d();
    let mut br2 = omega.coderiv();
    let mut br3 = omega.d_c(k);
    let mut br4 = omega.delta_c(k);
    if let Some(g) = gaps {
        br1 = br1.sub(&g.alpha.lefschetz(k).scale(&two)).sub(&g.beta.j_derivation(k).scale(&two));
        br2 = br2.sub(&g.alpha.j_derivation(k)).sub(&g.beta.dual_lefschetz(k).scale(&two));
        br3 = br3.add(&g.gamma.lefschetz(k).scale(&two)).sub(&g.mu.j_derivation(k).scale(&two));
        br4 = br4.sub(&g.gamma.j_derivation(k)).sub(&g.mu.dual_lefschetz(k).scale(&two));
    }
    if mode == BracketMode::Labelled {
        br1 = project(k, &br1, Some(p + 1), Some(q));
        br2 = project(k, &br2, p.checked_sub(1), Some(q));
        br3 = project(k, &br3, Some(p), Some(q + 1));
        br4 = project(k, &br4, Some(p), q.checked_sub(1));
    }
    let c1 = S::from_ratio(1, p as i64 + 1);
    let c2 = S::from_ratio(1, (m - p) as i64 + 1);
    let c3 = S::from_ratio(1, q as i64 + 1);
    let c4 = S::from_ratio(1, (m - q) as i64 + 1);
    (0..2 * m)
        .map(|a| {
            let rhs = br1
                .map_fibers(|f| f.contract_basis(a))
                .scale(&c1)
                .sub(&br2.map_fibers(|f| f.wedge_generator(a)).scale(&c2))
                .add(&br3.contract(k.j_vector(a)).scale(&c3))
                .sub(&br4.wedge_left(k.j_form(a)).scale(&c4));
            omega.partial(a).sub(&rhs)
        })
        .collect()
}

/// Residual sections of the bilinear form equation at bigrade `(p, q)`.
pub fn theorem1_sections<S: Scalar>(
    k: &Kahler<S>,
    src: &GapSources<S>,
    spec: &GapSpec,
    p: usize,
    q: usize,
    mode: BracketMode,
    grading: Bigrading,
) -> Vec<FormSection<S>> {
    let gaps = gap_forms_graded(k, src, spec, p, q, grading);
    let omega = grading.project(k, &src.bilinear, Some(p), Some(q));
    four_bracket_residuals(k, &omega, p, q, Some(&gaps), mode, grading)
}

/// Options for [`theorem1_residual`].
#[derive(Clone, Debug, PartialEq)]
pub struct Theorem1Options {
    pub sampling: Sampling,
    pub mode: BracketMode,
    pub grading: Bigrading,
    /// Overrides the gap-form recipe normally implied by the variant.
    pub spec: Option<GapSpec>,
}

impl Default for Theorem1Options {
    fn default() -> Self {
        Self { sampling: Sampling::default(), mode: BracketMode::Labelled, grading: Bigrading::Holomorphic, spec: None }
    }
}

/// Check the precondition: `ψ` has the variant's type and solves it.
pub fn check_solution<S: Scalar>(
    geo: &SpinGeometry<S>,
    variant: &TwistorVariant,
    psi: &SpinorSection<S>,
    sampling: &Sampling,
) -> Result<()> {
    if let Some(r) = variant.type_index(geo.m()) {
        check_type(geo, psi, r).map_err(|e| Error::Precondition(e.to_string()))?;
    }
    if !solves(variant, geo, psi, sampling)? {
        return Err(Error::Precondition(format!("input does not solve the {variant} twistor equation")));
    }
    Ok(())
}

/// Residual of the bilinear form equation for every `(p, q)`, after
/// checking that `ψ` solves `variant`. Reports are ordered by `(p, q)`.
pub fn theorem1_residual<S: Scalar>(
    ctx: &BilinearContext<'_, S>,
    variant: &TwistorVariant,
    psi: &SpinorSection<S>,
    opts: &Theorem1Options,
) -> Result<Vec<ResidualReport>> {
    let m = ctx.m();
    check_solution(ctx.geo, variant, psi, &opts.sampling)?;
    let spec = match &opts.spec {
        Some(s) => s.clone(),
        None => GapSpec::for_variant(variant, m)?,
    };
    let src = ctx.gap_sources(psi);
    let r = variant.type_index(m);
    Ok(Bigrade::all(m)
        .map(|bg| {
            let res = theorem1_sections(ctx.kahler(), &src, &spec, bg.p, bg.q, opts.mode, opts.grading);
            let measured = measure(&res, m, &opts.sampling);
            ResidualReport::new("theorem1", variant.to_string(), m, r, Some((bg.p, bg.q)), measured, &opts.sampling)
        })
        .collect())
}

/// Residual of a single `(p, q)` component.
pub fn theorem1_residual_pq<S: Scalar>(
    ctx: &BilinearContext<'_, S>,
    variant: &TwistorVariant,
    psi: &SpinorSection<S>,
    p: usize,
    q: usize,
    opts: &Theorem1Options,
) -> Result<ResidualReport> {
    let m = ctx.m();
    Bigrade::new(p, q, m)?;
    check_solution(ctx.geo, variant, psi, &opts.sampling)?;
    let spec = match &opts.spec {
        Some(s) => s.clone(),
        None => GapSpec::for_variant(variant, m)?,
    };
    let src = ctx.gap_sources(psi);
    let res = theorem1_sections(ctx.kahler(), &src, &spec, p, q, opts.mode, opts.grading);
    let measured = measure(&res, m, &opts.sampling);
    Ok(ResidualReport::new("theorem1", variant.to_string(), m, variant.type_index(m), Some((p, q)), measured, &opts.sampling))
}

/// `∇_X ω - (1/(p+1)) i_X dω + (1/(n-p+1)) X̃ ∧ δω` per frame direction.
pub fn cky_sections<S: Scalar>(omega: &FormSection<S>, p: usize) -> Result<Vec<FormSection<S>>> {
    match omega.homogeneous_grade() {
        Some(g) if g != p => return Err(Error::Inhomogeneous(p)),
        None if !omega.is_zero() => return Err(Error::Inhomogeneous(p)),
        _ => {}
    }
    let n = 2 * omega.m();
    if p > n {
        return Err(Error::GradeOutOfRange { grade: p, max: n });
    }
    let d = omega.ext_d();
    let delta = omega.coderiv();
    let c1 = S::from_ratio(1, p as i64 + 1);
    let c2 = S::from_ratio(1, (n - p) as i64 + 1);
    Ok((0..n)
        .map(|a| {
            omega
                .partial(a)
                .sub(&d.map_fibers(|f| f.contract_basis(a)).scale(&c1))
                .add(&delta.map_fibers(|f| f.wedge_generator(a)).scale(&c2))
        })
        .collect())
}

pub fn cky_residual<S: Scalar>(omega: &FormSection<S>, p: usize, sampling: &Sampling) -> Result<ResidualReport> {
    let res = cky_sections(omega, p)?;
    let measured = measure(&res, omega.m(), sampling);
    Ok(ResidualReport::new("cky", "-", omega.m(), None, None, measured, sampling).with_grade(p))
}

impl ResidualReport {
    fn with_grade(mut self, p: usize) -> Self {
        self.p = Some(p);
        self
    }
}

/// Residual sections of the Kählerian CKY equation for a `(p, q)`-form.
pub fn kahlerian_cky_sections<S: Scalar>(
    k: &Kahler<S>,
    omega: &FormSection<S>,
    p: usize,
    q: usize,
    mode: BracketMode,
) -> Result<Vec<FormSection<S>>> {
    Bigrade::new(p, q, k.m())?;
    if !omega.bigrade_project(k, p, q).sub(omega).is_zero_within(1e-12) {
        return Err(Error::ImpureBigrade { p, q });
    }
    Ok(four_bracket_residuals(k, omega, p, q, None, mode, Bigrading::Holomorphic))
}

pub fn kahlerian_cky_residual<S: Scalar>(
    k: &Kahler<S>,
    omega: &FormSection<S>,
    p: usize,
    q: usize,
    mode: BracketMode,
    sampling: &Sampling,
) -> Result<ResidualReport> {
    let res = kahlerian_cky_sections(k, omega, p, q, mode)?;
    let measured = measure(&res, k.m(), sampling);
    Ok(ResidualReport::new("kahlerian-cky", "-", k.m(), None, Some((p, q)), measured, sampling))
}

impl<S: Scalar> FormSection<S> {
    fn is_zero_within(&self, eps: f64) -> bool {
        if S::EXACT {
            self.is_zero()
        } else {
            self.max_abs_coeff() <= eps
        }
    }
}

/// The four conditions `Lα = -Jβ`, `Jα = -2Λβ`, `Lγ = Jμ`, `Jγ = -2Λμ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop2Report {
    pub p: usize,
    pub q: usize,
    pub residuals: [MaxResidual; 4],
    pub holds: bool,
}

pub fn prop2_condition_check<S: Scalar>(k: &Kahler<S>, g: &GapForms<S>, sampling: &Sampling) -> Prop2Report {
    let two = S::from_i64(2);
    let conds = [
        g.alpha.lefschetz(k).add(&g.beta.j_derivation(k)),
        g.alpha.j_derivation(k).add(&g.beta.dual_lefschetz(k).scale(&two)),
        g.gamma.lefschetz(k).sub(&g.mu.j_derivation(k)),
        g.gamma.j_derivation(k).add(&g.mu.dual_lefschetz(k).scale(&two)),
    ];
    let m = k.m();
    let measured: Vec<_> = conds.iter().map(|c| measure(std::slice::from_ref(c), m, sampling)).collect();
    Prop2Report {
        p: g.p,
        q: g.q,
        residuals: [measured[0].max, measured[1].max, measured[2].max, measured[3].max],
        holds: measured.iter().all(|x| x.pass),
    }
}

/// Sign convention for the fourth reordering identity.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FourthIdentity {
    /// `-(W.Je^b.e_a) - (e_a.Je^b.W) = 2e_a∧Je^b∧W + 2i_{X_a}i_{JX^b}W`.
    Anticommutator,
    /// `-(W.Je^b.e_a) + (e_a.Je^b.W) = 2e_a∧Je^b∧W + 2i_{X_a}i_{JX^b}W`.
    Commutator,
}

/// Residual sections of the four Clifford-reordering identities relating
/// `W.u.v - v.u.W` to `-2v∧u∧W - 2i_V i_U W`, summed over `b` with
/// `W_b = ψ(∇_{X_b}ψ)‾`, at bigrade `(p, q)` and frame direction `a`.
/// Under [`Bigrading::Split`] the sum runs over the `e^u` half of an
/// adapted frame, and `a` should be taken from that half too.
pub fn reordering_identities<S: Scalar>(
    k: &Kahler<S>,
    mixed: &[FormSection<S>],
    p: usize,
    q: usize,
    a: usize,
    grading: Bigrading,
    fourth: FourthIdentity,
) -> [FormSection<S>; 4] {
    let m = k.m();
    let two = S::from_i64(2);
    let e = |i: usize| FormFiber::<S>::generator(m, i);
    let x = |i: usize| VectorFiber::<S>::basis(m, i);
    let bound = mixed.first().map_or(0, FormSection::degree_bound);
    let mut out: [FormSection<S>; 4] = std::array::from_fn(|_| FormSection::zero(m, bound));
    let lower = |dp: usize, dq: usize| (p.checked_sub(dp), q.checked_sub(dq));
    let upper = |dp: usize, dq: usize| (Some(p + dp), Some(q + dq));
    let half = k.structure().adapted_frame();
    for (b, w) in mixed.iter().enumerate() {
        if grading == Bigrading::Split && !half.contains(&b) {
            continue;
        }
        let (jeb, jea) = (k.j_form(b).clone(), k.j_form(a).clone());
        let (jxb, jxa) = (k.j_vector(b).clone(), k.j_vector(a).clone());
        let cases = [
            (e(b), e(a), x(b), x(a), lower(2, 0), upper(2, 0)),
            (jeb.clone(), jea.clone(), jxb.clone(), jxa.clone(), lower(0, 2), upper(0, 2)),
            (e(b), jea, x(b), jxa, lower(1, 1), upper(1, 1)),
            (jeb, e(a), jxb, x(a), lower(1, 1), upper(1, 1)),
        ];
        for (slot, (u, v, uu, vv, lo, hi)) in cases.into_iter().enumerate() {
            let right = w.map_fibers(|f| f.clifford_raw(&u).clifford_raw(&v));
            let left = w.map_fibers(|f| v.clifford_raw(&u.clifford_raw(f)));
            let wedge = grading.project(k, w, lo.0, lo.1).map_fibers(|f| v.wedge_raw(&u.wedge_raw(f)));
            let inner = grading.project(k, w, hi.0, hi.1).map_fibers(|f| f.contract_raw(&uu).contract_raw(&vv));
            let rhs = wedge.add(&inner).scale(&-two.clone());
            let lhs = match (slot, fourth) {
                (3, FourthIdentity::Anticommutator) => right.neg().sub(&left),
                (3, FourthIdentity::Commutator) => right.neg().add(&left),
                _ => right.sub(&left),
            };
            // The fourth identity carries the opposite overall sign on the right.
            let rhs = if slot == 3 { rhs.neg() } else { rhs };
            let lhs = grading.project(k, &lhs, Some(p), Some(q));
            out[slot].add_assign(&lhs.sub(&rhs));
        }
    }
    out
}

/// Residual sections of the closed-form expressions for `d`, `d^c`, `δ`
/// and `δ^c` of `(ψψ̄)_{(p,q)}` in terms of `𝒜, ℬ, 𝒞, 𝒟`, with frame sums
/// over the full frame. Order: `d`, `d^c`, `δ`, `δ^c`.
pub fn operator_action_residuals<S: Scalar>(
    k: &Kahler<S>,
    src: &GapSources<S>,
    kl: &ConstantsKl,
    p: usize,
    q: usize,
    grading: Bigrading,
) -> [FormSection<S>; 4] {
    let m = k.m();
    let (ck, cl): (S, S) = (lift(&kl.k), lift(&kl.l));
    let proj = |s: &FormSection<S>, p: Option<usize>, q: Option<usize>| grading.project(k, s, p, q);
    let lin = |x: &FormSection<S>, y: &FormSection<S>, sign: i64| x.scale(&ck).add(&y.scale(&(cl.clone() * S::from_i64(sign))));
    // k𝒟 - l𝒞, k𝒜 + lℬ, k𝒞 + l𝒟, kℬ - l𝒜 at their bigrades.
    let mu = proj(&lin(&src.d, &src.c, -1), Some(p + 1), Some(q));
    let alpha = proj(&lin(&src.a, &src.b_, 1), Some(p), q.checked_sub(1));
    let beta = proj(&lin(&src.c, &src.d, 1), Some(p), Some(q + 1));
    let gamma = proj(&lin(&src.b_, &src.a, -1), p.checked_sub(1), Some(q));
    let omega = proj(&src.bilinear, Some(p), Some(q));
    let bound = omega.degree_bound();
    let frame_sum = |f: &dyn Fn(usize) -> FormSection<S>| {
        (0..2 * m).fold(FormSection::zero(m, bound), |acc, a| acc.add(&f(a)))
    };
    let e = |a: usize, s: &FormSection<S>| s.map_fibers(|f| f.wedge_generator(a));
    let ix = |a: usize, s: &FormSection<S>| s.map_fibers(|f| f.contract_basis(a));
    let je = |a: usize, s: &FormSection<S>| s.wedge_left(k.j_form(a));
    let ij = |a: usize, s: &FormSection<S>| s.contract(k.j_vector(a));
    let n = |x: usize| S::from_i64(x as i64);

    let d = mu
        .scale(&n(p + 1))
        .add(&frame_sum(&|a| e(a, &je(a, &alpha))))
        .add(&frame_sum(&|a| e(a, &ij(a, &beta))));
    let dc = beta
        .scale(&n(q + 1))
        .add(&frame_sum(&|a| je(a, &e(a, &gamma))))
        .add(&frame_sum(&|a| je(a, &ix(a, &mu))));
    let delta = gamma
        .scale(&-n(m - p + 1))
        .add(&frame_sum(&|a| je(a, &ix(a, &alpha))))
        .add(&frame_sum(&|a| ix(a, &ij(a, &beta))));
    let delta_c = alpha
        .scale(&-n(m - q + 1))
        .add(&frame_sum(&|a| e(a, &ij(a, &gamma))))
        .sub(&frame_sum(&|a| ij(a, &ix(a, &mu))));
    [
        omega.ext_d().sub(&d),
        omega.d_c(k).sub(&dc),
        omega.coderiv().sub(&delta),
        omega.delta_c(k).sub(&delta_c),
    ]
}

/// Residuals of the unprojected expansion
/// `∇_{X_a}(ψψ̄) = κ(e_a∧ℬ + i_{X_a}𝒟 + Je_a∧𝒜 + i_{JX_a}𝒞)
///              + λ(Je_a∧ℬ + i_{JX_a}𝒟 - e_a∧𝒜 - i_{X_a}𝒞)`
/// for every frame direction `a`.
pub fn expansion_residuals<S: Scalar>(k: &Kahler<S>, src: &GapSources<S>, kappa: &S, lambda: &S) -> Vec<FormSection<S>> {
    (0..2 * k.m())
        .map(|a| {
            let e = |s: &FormSection<S>| s.map_fibers(|f| f.wedge_generator(a));
            let ix = |s: &FormSection<S>| s.map_fibers(|f| f.contract_basis(a));
            let je = |s: &FormSection<S>| s.wedge_left(k.j_form(a));
            let ij = |s: &FormSection<S>| s.contract(k.j_vector(a));
            let first = e(&src.b_).add(&ix(&src.d)).add(&je(&src.a)).add(&ij(&src.c));
            let second = je(&src.b_).add(&ij(&src.d)).sub(&e(&src.a)).sub(&ix(&src.c));
            src.bilinear.partial(a).sub(&first.scale(kappa)).sub(&second.scale(lambda))
        })
        .collect()
}
