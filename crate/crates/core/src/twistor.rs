//! Twistor-spinor equations, residuals, and the polynomial nullspace solver.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fiber::VectorFiber;
use crate::fields::{Monomial, SpinorSection};
use crate::linalg::Matrix;
use crate::report::{measure, ResidualReport, Sampling};
use crate::scalar::{Exact, Scalar};
use crate::spinor::{binomial, SpinGeometry, SpinorFiber};

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn lift<S: Scalar>(q: &BigRational) -> S {
    S::from_exact(&Exact::new(q.clone(), BigRational::zero()))
}

/// The twistor equations on a Kähler manifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TwistorVariant {
    /// `∇_X ψ = (1/n) X̃.Dψ`.
    Riemannian,
    /// The type-`r` pair `∇_{X^±}ψ = c_± X̃^±.D^∓ψ`.
    Kahlerian { r: usize },
    /// `∇_X ψ = a X̃.Dψ + b JX̃.D^cψ`.
    Hijazi { a: BigRational, b: BigRational },
    /// `∇_X ψ = (1/(4r))(X̃.Dψ + JX̃.D^cψ)` on type `r`.
    KirchbergDisplay { r: usize },
    /// As above with coefficient `1/(4(r+1))`.
    KirchbergText { r: usize },
    /// `∇_X ψ = (1/(m+2))(X̃^+.D^-ψ + X̃^-.D^+ψ)` on type `m/2`.
    MiddleType,
    /// Kählerian of type `r` with `D^+ψ = 0`.
    Holomorphic { r: usize },
    /// Kählerian of type `r` with `D^-ψ = 0`.
    AntiHolomorphic { r: usize },
}

impl TwistorVariant {
    pub const CLI_NAMES: [&'static str; 8] = [
        "riemannian",
        "kahlerian",
        "hijazi",
        "kirchberg-display",
        "kirchberg-text",
        "middle",
        "holomorphic",
        "anti-holomorphic",
    ];

    /// Build from a CLI name; `r` is ignored where meaningless, `(a, b)`
    /// only matter for Hijazi.
    pub fn from_cli(name: &str, r: usize, hijazi: (BigRational, BigRational)) -> Result<Self> {
        Ok(match name {
            "riemannian" => Self::Riemannian,
            "kahlerian" => Self::Kahlerian { r },
            "hijazi" => Self::Hijazi { a: hijazi.0, b: hijazi.1 },
            "kirchberg-display" => Self::KirchbergDisplay { r },
            "kirchberg-text" => Self::KirchbergText { r },
            "middle" => Self::MiddleType,
            "holomorphic" => Self::Holomorphic { r },
            "anti-holomorphic" => Self::AntiHolomorphic { r },
            other => return Err(Error::Variant(format!("unknown variant `{other}`"))),
        })
    }

    pub fn cli_name(&self) -> &'static str {
        match self {
            Self::Riemannian => "riemannian",
            Self::Kahlerian { .. } => "kahlerian",
            Self::Hijazi { .. } => "hijazi",
            Self::KirchbergDisplay { .. } => "kirchberg-display",
            Self::KirchbergText { .. } => "kirchberg-text",
            Self::MiddleType => "middle",
            Self::Holomorphic { .. } => "holomorphic",
            Self::AntiHolomorphic { .. } => "anti-holomorphic",
        }
    }

    /// The spinor type the variant is restricted to, if any.
    pub fn type_index(&self, m: usize) -> Option<usize> {
        match *self {
            Self::Riemannian | Self::Hijazi { .. } => None,
            Self::MiddleType => Some(m / 2),
            Self::Kahlerian { r }
            | Self::KirchbergDisplay { r }
            | Self::KirchbergText { r }
            | Self::Holomorphic { r }
            | Self::AntiHolomorphic { r } => Some(r),
        }
    }

    /// Whether the dimension bound for Kählerian twistor spinors applies.
    pub fn is_kahlerian(&self) -> bool {
        matches!(self, Self::Kahlerian { .. } | Self::MiddleType | Self::Holomorphic { .. } | Self::AntiHolomorphic { .. })
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if let Some(r) = self.type_index(m) {
            if r > m {
                return Err(Error::TypeIndex { r, m });
            }
        }
        match self {
            Self::MiddleType if m % 2 == 1 => {
                Err(Error::Variant(format!("middle type needs even m, got m = {m}")))
            }
            Self::KirchbergDisplay { r: 0 } => Err(Error::Variant("coefficient 1/(4r) is undefined at r = 0".into())),
            _ => Ok(()),
        }
    }

    /// `dim KT(r) ≤ C(m,r) + C(m,r+1) + C(m,r-1)` for Kählerian variants.
    pub fn dimension_bound(&self, m: usize) -> Option<usize> {
        if !self.is_kahlerian() {
            return None;
        }
        let r = self.type_index(m)? as i64;
        Some(binomial(m, r) + binomial(m, r + 1) + binomial(m, r - 1))
    }
}

impl fmt::Display for TwistorVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Riemannian | Self::MiddleType => f.write_str(self.cli_name()),
            Self::Hijazi { a, b } => write!(f, "hijazi(a={a},b={b})"),
            Self::Kahlerian { r }
            | Self::KirchbergDisplay { r }
            | Self::KirchbergText { r }
            | Self::Holomorphic { r }
            | Self::AntiHolomorphic { r } => write!(f, "{}(r={r})", self.cli_name()),
        }
    }
}

/// The constants `k`, `l` multiplying the two brackets of the combined
/// Kählerian twistor equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantsKl {
    pub k: BigRational,
    pub l: BigRational,
}

impl ConstantsKl {
    pub fn new(k: BigRational, l: BigRational) -> Self {
        Self { k, l }
    }
}

impl Serialize for ConstantsKl {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ConstantsKl", 2)?;
        st.serialize_field("k", &self.k.to_string())?;
        st.serialize_field("l", &self.l.to_string())?;
        st.end()
    }
}

fn check_r(m: usize, r: usize) -> Result<()> {
    if r > m {
        Err(Error::TypeIndex { r, m })
    } else {
        Ok(())
    }
}

/// `k = (m+2)/(8(r+1)(m-r+1))`, `l = (m-2r)/(8(r+1)(m-r+1))`.
pub fn constants_kl(m: usize, r: usize) -> Result<ConstantsKl> {
    check_r(m, r)?;
    let (m, r) = (m as i64, r as i64);
    let den = 8 * (r + 1) * (m - r + 1);
    Ok(ConstantsKl::new(ratio(m + 2, den), ratio(m - 2 * r, den)))
}

/// Holomorphic case: `k = -l = 1/(16(m-r+1))`.
pub fn constants_holomorphic(m: usize, r: usize) -> Result<ConstantsKl> {
    check_r(m, r)?;
    let k = ratio(1, 16 * (m as i64 - r as i64 + 1));
    Ok(ConstantsKl::new(k.clone(), -k))
}

/// Anti-holomorphic case: `k = l = 1/(16(r+1))`.
pub fn constants_antiholomorphic(m: usize, r: usize) -> Result<ConstantsKl> {
    check_r(m, r)?;
    let k = ratio(1, 16 * (r as i64 + 1));
    Ok(ConstantsKl::new(k.clone(), k))
}

/// Individual written forms of the twistor equations, used both by the
/// variants and by the cross-checks between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formulation {
    Riemannian,
    /// The pair; its right-hand side along `X` is the sum of both halves.
    Pair { r: usize },
    /// `k(X̃.D + JX̃.D^c) + l i(JX̃.D - X̃.D^c)` with arbitrary `k`, `l`.
    Combined { k: BigRational, l: BigRational },
    Hijazi { a: BigRational, b: BigRational },
    MiddleType,
    /// `(1/(4(m-r+1))) X̃^+.D^+ - (1/(4(r+1))) X̃^-.D^+`, with `D^+` in both terms.
    ReducedPlus { r: usize },
    /// The same with `D^-` in the first term.
    ReducedMinus { r: usize },
}

/// Operators applied to one section, computed once.
struct Derived<S: Scalar> {
    d: SpinorSection<S>,
    dc: SpinorSection<S>,
    d_plus: SpinorSection<S>,
    d_minus: SpinorSection<S>,
}

impl<S: Scalar> Derived<S> {
    fn new(geo: &SpinGeometry<S>, psi: &SpinorSection<S>) -> Self {
        let d = psi.dirac(geo);
        let dc = psi.dirac_c(geo);
        let i = S::imag_unit();
        let half = S::from_ratio(1, 2);
        let d_plus = d.sub(&dc.scale(&i)).scale(&half);
        let d_minus = d.add(&dc.scale(&i)).scale(&half);
        Self { d, dc, d_plus, d_minus }
    }
}

fn act_vec<S: Scalar>(geo: &SpinGeometry<S>, x: &VectorFiber<S>, s: &SpinorSection<S>) -> SpinorSection<S> {
    s.act(geo, &x.dual())
}

/// Right-hand side of a formulation along the frame vector `X_a`.
pub fn rhs<S: Scalar>(f: &Formulation, geo: &SpinGeometry<S>, psi: &SpinorSection<S>, a: usize) -> Result<SpinorSection<S>> {
    let der = Derived::new(geo, psi);
    rhs_with(f, geo, &der, a)
}

fn rhs_with<S: Scalar>(f: &Formulation, geo: &SpinGeometry<S>, der: &Derived<S>, a: usize) -> Result<SpinorSection<S>> {
    let m = geo.m();
    let x = VectorFiber::basis(m, a);
    let jx = geo.kahler().j_vector(a).clone();
    let (xp, xm) = geo.kahler().split_pm(&x)?;
    let inv = |v: i64| S::from_ratio(1, v);
    let rhs = match f {
        Formulation::Riemannian => act_vec(geo, &x, &der.d).scale(&inv(2 * m as i64)),
        Formulation::Pair { r } => {
            check_r(m, *r)?;
            let (cp, cm) = pair_coefficients::<S>(m, *r);
            act_vec(geo, &xp, &der.d_minus).scale(&cp).add(&act_vec(geo, &xm, &der.d_plus).scale(&cm))
        }
        Formulation::Combined { k, l } => {
            let first = act_vec(geo, &x, &der.d).add(&act_vec(geo, &jx, &der.dc));
            let second = act_vec(geo, &jx, &der.d).sub(&act_vec(geo, &x, &der.dc));
            first.scale(&lift(k)).add(&second.scale(&(lift::<S>(l) * S::imag_unit())))
        }
        Formulation::Hijazi { a: ca, b: cb } => {
            act_vec(geo, &x, &der.d).scale(&lift(ca)).add(&act_vec(geo, &jx, &der.dc).scale(&lift(cb)))
        }
        Formulation::MiddleType => act_vec(geo, &xp, &der.d_minus)
            .add(&act_vec(geo, &xm, &der.d_plus))
            .scale(&inv(m as i64 + 2)),
        Formulation::ReducedPlus { r } | Formulation::ReducedMinus { r } => {
            check_r(m, *r)?;
            let first = if matches!(f, Formulation::ReducedPlus { .. }) { &der.d_plus } else { &der.d_minus };
            let (m, r) = (m as i64, *r as i64);
            act_vec(geo, &xp, first)
                .scale(&inv(4 * (m - r + 1)))
                .sub(&act_vec(geo, &xm, &der.d_plus).scale(&inv(4 * (r + 1))))
        }
    };
    Ok(rhs)
}

/// `(1/(2(m-r+1)), 1/(2(r+1)))`.
fn pair_coefficients<S: Scalar>(m: usize, r: usize) -> (S, S) {
    (S::from_ratio(1, 2 * (m as i64 - r as i64 + 1)), S::from_ratio(1, 2 * (r as i64 + 1)))
}

/// Residual sections `∇_{X_a}ψ - RHS` for every frame direction.
pub fn formulation_residuals<S: Scalar>(
    f: &Formulation,
    geo: &SpinGeometry<S>,
    psi: &SpinorSection<S>,
) -> Result<Vec<SpinorSection<S>>> {
    let der = Derived::new(geo, psi);
    (0..2 * geo.m()).map(|a| Ok(psi.partial(a).sub(&rhs_with(f, geo, &der, a)?))).collect()
}

/// The defining residual sections of a variant, without any type check.
/// This is the linear operator whose kernel the solver computes.
pub fn equation_sections<S: Scalar>(
    variant: &TwistorVariant,
    geo: &SpinGeometry<S>,
    psi: &SpinorSection<S>,
) -> Result<Vec<SpinorSection<S>>> {
    let m = geo.m();
    variant.validate(m)?;
    let der = Derived::new(geo, psi);
    let direct = |f: Formulation| -> Result<Vec<SpinorSection<S>>> {
        (0..2 * m).map(|a| Ok(psi.partial(a).sub(&rhs_with(&f, geo, &der, a)?))).collect()
    };
    let pair = |r: usize| -> Result<Vec<SpinorSection<S>>> {
        let (cp, cm) = pair_coefficients::<S>(m, r);
        let mut out = Vec::with_capacity(4 * m);
        for a in 0..2 * m {
            let (xp, xm) = geo.kahler().split_pm(&VectorFiber::basis(m, a))?;
            out.push(psi.directional(&xp).sub(&act_vec(geo, &xp, &der.d_minus).scale(&cp)));
            out.push(psi.directional(&xm).sub(&act_vec(geo, &xm, &der.d_plus).scale(&cm)));
        }
        Ok(out)
    };
    match variant {
        TwistorVariant::Riemannian => direct(Formulation::Riemannian),
        TwistorVariant::Kahlerian { r } => pair(*r),
        TwistorVariant::Hijazi { a, b } => direct(Formulation::Hijazi { a: a.clone(), b: b.clone() }),
        TwistorVariant::KirchbergDisplay { r } => {
            let c = ratio(1, 4 * *r as i64);
            direct(Formulation::Hijazi { a: c.clone(), b: c })
        }
        TwistorVariant::KirchbergText { r } => {
            let c = ratio(1, 4 * (*r as i64 + 1));
            direct(Formulation::Hijazi { a: c.clone(), b: c })
        }
        TwistorVariant::MiddleType => direct(Formulation::MiddleType),
        TwistorVariant::Holomorphic { r } => {
            let mut eqs = pair(*r)?;
            eqs.push(der.d_plus.clone());
            Ok(eqs)
        }
        TwistorVariant::AntiHolomorphic { r } => {
            let mut eqs = pair(*r)?;
            eqs.push(der.d_minus.clone());
            Ok(eqs)
        }
    }
}

/// Confirm `ψ` lies in `Σ_r`; the error names the offending projector.
pub fn check_type<S: Scalar>(geo: &SpinGeometry<S>, psi: &SpinorSection<S>, r: usize) -> Result<()> {
    let off = psi.sub(&psi.project_type(geo, r)?);
    let residual = off.max_abs_coeff();
    let clean = if S::EXACT { off.is_zero() } else { residual <= 1e-10 * psi.max_abs_coeff().max(1.0) };
    if clean {
        Ok(())
    } else {
        Err(Error::TypeImpurity { r, residual })
    }
}

/// Residual of a variant's defining equation; type-restricted variants
/// first require `Π_r ψ = ψ`.
pub fn residual<S: Scalar>(
    variant: &TwistorVariant,
    geo: &SpinGeometry<S>,
    psi: &SpinorSection<S>,
    sampling: &Sampling,
) -> Result<ResidualReport> {
    let m = geo.m();
    variant.validate(m)?;
    let r = variant.type_index(m);
    if let Some(r) = r {
        check_type(geo, psi, r)?;
    }
    let eqs = equation_sections(variant, geo, psi)?;
    let measured = measure(&eqs, m, sampling);
    Ok(ResidualReport::new("twistor", variant.to_string(), m, r, None, measured, sampling))
}

/// Whether `ψ` satisfies the variant's equations (zero residual in the
/// exact backend, within tolerance otherwise), ignoring type.
pub fn solves<S: Scalar>(variant: &TwistorVariant, geo: &SpinGeometry<S>, psi: &SpinorSection<S>, sampling: &Sampling) -> Result<bool> {
    let eqs = equation_sections(variant, geo, psi)?;
    Ok(measure(&eqs, geo.m(), sampling).pass)
}

/// A discretized twistor operator: column `j` is the residual of the
/// `j`-th unknown `x^M ⊗ v`.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub matrix: Matrix<Exact>,
    pub unknowns: Vec<(Monomial, SpinorFiber<Exact>)>,
    pub degree: usize,
}

impl LinearSystem {
    pub fn nullity(&self) -> usize {
        self.unknowns.len() - self.matrix.rank()
    }
}

/// Assemble the linear system whose kernel is the space of polynomial
/// solutions of degree at most `degree`. Unknowns run over all monomials
/// and over a basis of `Σ_r` (or all of `Σ` for unrestricted variants).
pub fn assemble_system(variant: &TwistorVariant, geo: &SpinGeometry<Exact>, degree: usize) -> Result<LinearSystem> {
    let m = geo.m();
    variant.validate(m)?;
    let spinors = match variant.type_index(m) {
        Some(r) => geo.type_basis(r)?,
        None => (0..1 << m).map(|k| SpinorFiber::basis(m, k)).collect(),
    };
    let monos = Monomial::all_up_to(2 * m, degree);
    let mut unknowns = Vec::with_capacity(monos.len() * spinors.len());
    for mono in &monos {
        for v in &spinors {
            unknowns.push((*mono, v.clone()));
        }
    }
    let mut rows: HashMap<(usize, Monomial, usize), usize> = HashMap::new();
    let mut order: Vec<(usize, Monomial, usize)> = Vec::new();
    let mut columns: Vec<Vec<(usize, Exact)>> = Vec::with_capacity(unknowns.len());
    for (mono, v) in &unknowns {
        let section = SpinorSection::monomial(*mono, v.clone(), degree)?;
        let mut col = Vec::new();
        for (e, eq) in equation_sections(variant, geo, &section)?.iter().enumerate() {
            for (rm, fib) in eq.terms() {
                for (k, c) in fib.components().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let key = (e, *rm, k);
                    let row = *rows.entry(key).or_insert_with(|| {
                        order.push(key);
                        order.len() - 1
                    });
                    col.push((row, c.clone()));
                }
            }
        }
        columns.push(col);
    }
    let mut matrix = Matrix::zeros(order.len(), unknowns.len());
    for (j, col) in columns.into_iter().enumerate() {
        for (i, c) in col {
            matrix[(i, j)] = c;
        }
    }
    Ok(LinearSystem { matrix, unknowns, degree })
}

/// Basis of the polynomial solutions of one variant up to a degree.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub variant: TwistorVariant,
    pub m: usize,
    pub degree: usize,
    pub basis: Vec<SpinorSection<Exact>>,
    pub dimension: usize,
    pub bound: Option<usize>,
}

impl SolutionSpace {
    /// Solutions with nonconstant polynomial part.
    pub fn nonconstant(&self) -> impl Iterator<Item = &SpinorSection<Exact>> {
        self.basis.iter().filter(|s| s.degree().unwrap_or(0) > 0)
    }

    pub fn within_bound(&self) -> bool {
        !matches!(self.bound, Some(b) if self.dimension > b)
    }
}

/// Solve for every polynomial solution up to `degree`. For Kählerian
/// variants the dimension bound is enforced: a larger kernel is returned as
/// [`Error::DimensionBound`].
pub fn solve_space(variant: &TwistorVariant, geo: &SpinGeometry<Exact>, degree: usize) -> Result<SolutionSpace> {
    let space = solve_space_unbounded(variant, geo, degree)?;
    match space.bound {
        Some(b) if space.dimension > b => Err(Error::DimensionBound { dim: space.dimension, bound: b }),
        _ => Ok(space),
    }
}

/// [`solve_space`] without the dimension-bound check.
pub fn solve_space_unbounded(variant: &TwistorVariant, geo: &SpinGeometry<Exact>, degree: usize) -> Result<SolutionSpace> {
    let system = assemble_system(variant, geo, degree)?;
    let m = geo.m();
    let basis: Vec<SpinorSection<Exact>> = system
        .matrix
        .nullspace()
        .into_iter()
        .map(|v| {
            let mut s = SpinorSection::zero(m, degree);
            for (c, (mono, fib)) in v.iter().zip(&system.unknowns) {
                if !c.is_zero() {
                    s.add_term(*mono, fib.scale(c)).expect("within degree bound");
                }
            }
            s
        })
        .collect();
    let dimension = basis.len();
    let bound = variant.dimension_bound(m);
    Ok(SolutionSpace { variant: variant.clone(), m, degree, basis, dimension, bound })
}

/// Holomorphy class of a Kählerian twistor spinor.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Holomorphy {
    Both,
    Holomorphic,
    AntiHolomorphic,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolomorphyReport {
    pub class: Holomorphy,
    /// For (anti-)holomorphic spinors: whether `∇_{X^∓}ψ = 0` for every frame vector.
    pub parallel_claim_holds: Option<bool>,
}

fn negligible<S: Scalar>(s: &SpinorSection<S>, scale: f64) -> bool {
    if S::EXACT {
        s.is_zero()
    } else {
        s.max_abs_coeff() <= 1e-10 * scale.max(1.0)
    }
}

/// Classify by which of `D^±ψ` vanish and test the matching parallelism.
pub fn holomorphy_check<S: Scalar>(geo: &SpinGeometry<S>, psi: &SpinorSection<S>) -> Result<HolomorphyReport> {
    let m = geo.m();
    let scale = psi.max_abs_coeff();
    let (dp, dm) = psi.dirac_pm(geo);
    let (hol, anti) = (negligible(&dp, scale), negligible(&dm, scale));
    let class = match (hol, anti) {
        (true, true) => Holomorphy::Both,
        (true, false) => Holomorphy::Holomorphic,
        (false, true) => Holomorphy::AntiHolomorphic,
        (false, false) => Holomorphy::Neither,
    };
    let parallel = |plus: bool| -> Result<bool> {
        for a in 0..2 * m {
            let (xp, xm) = geo.kahler().split_pm(&VectorFiber::basis(m, a))?;
            let dir = if plus { xp } else { xm };
            if !negligible(&psi.directional(&dir), scale) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let parallel_claim_holds = match class {
        Holomorphy::Holomorphic => Some(parallel(false)?),
        Holomorphy::AntiHolomorphic => Some(parallel(true)?),
        Holomorphy::Both => Some(parallel(false)? && parallel(true)?),
        Holomorphy::Neither => None,
    };
    Ok(HolomorphyReport { class, parallel_claim_holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::TypeConvention;

    fn geo(m: usize) -> SpinGeometry<Exact> {
        SpinGeometry::flat(m, TypeConvention::Spectral).unwrap()
    }

    #[test]
    fn constants_examples() {
        let c = constants_kl(2, 0).unwrap();
        assert_eq!((c.k, c.l), (ratio(1, 6), ratio(1, 12)));
        assert!(constants_kl(4, 2).unwrap().l.is_zero());
        let h = constants_holomorphic(2, 1).unwrap();
        assert_eq!((h.k, h.l), (ratio(1, 32), ratio(-1, 32)));
        assert!(constants_kl(2, 3).is_err());
    }

    #[test]
    fn riemannian_degree_zero_and_one() {
        let g = geo(1);
        assert_eq!(assemble_system(&TwistorVariant::Riemannian, &g, 0).unwrap().nullity(), 2);
        assert_eq!(solve_space(&TwistorVariant::Riemannian, &g, 1).unwrap().dimension, 4);
    }

    #[test]
    fn variant_validation() {
        assert!(TwistorVariant::MiddleType.validate(3).is_err());
        assert!(TwistorVariant::KirchbergDisplay { r: 0 }.validate(2).is_err());
        assert!(TwistorVariant::Kahlerian { r: 3 }.validate(2).is_err());
        for name in TwistorVariant::CLI_NAMES {
            let v = TwistorVariant::from_cli(name, 1, (ratio(1, 4), ratio(0, 1))).unwrap();
            assert_eq!(v.cli_name(), name);
        }
    }

    #[test]
    fn combined_form_matches_the_pair_on_each_type() {
        let mut rng = crate::sample::rng(5);
        for m in 1..=3 {
            let g = geo(m);
            for r in 0..=m {
                let c = constants_kl(m, r).unwrap();
                let combined = Formulation::Combined { k: c.k, l: c.l };
                let psi = crate::sample::spinor_section(&mut rng, m, 2, 4).project_type(&g, r).unwrap();
                assert_eq!(
                    formulation_residuals(&combined, &g, &psi).unwrap(),
                    formulation_residuals(&Formulation::Pair { r }, &g, &psi).unwrap(),
                    "m={m} r={r}"
                );
            }
        }
    }

    #[test]
    fn neither_reduced_reading_matches_the_pair() {
        let g = geo(2);
        let space = solve_space(&TwistorVariant::Kahlerian { r: 1 }, &g, 1).unwrap();
        let psi = space.nonconstant().next().unwrap();
        let zero = |f: Formulation| formulation_residuals(&f, &g, psi).unwrap().iter().all(|s| s.is_zero());
        assert!(zero(Formulation::Pair { r: 1 }));
        assert!(!zero(Formulation::ReducedPlus { r: 1 }));
        assert!(!zero(Formulation::ReducedMinus { r: 1 }));
    }

    #[test]
    fn holomorphic_constants_are_off_by_two() {
        let g = geo(2);
        let space = solve_space(&TwistorVariant::Holomorphic { r: 1 }, &g, 1).unwrap();
        let psi = space.nonconstant().next().unwrap();
        let zero = |k: BigRational, l: BigRational| {
            formulation_residuals(&Formulation::Combined { k, l }, &g, psi).unwrap().iter().all(|s| s.is_zero())
        };
        let c = constants_holomorphic(2, 1).unwrap();
        let two = ratio(2, 1);
        assert!(!zero(c.k.clone(), c.l.clone()));
        assert!(zero(&c.k * &two, &c.l * &two));
    }

    #[test]
    fn impure_input_is_rejected() {
        let g = geo(2);
        let psi = SpinorSection::constant(SpinorFiber::basis(2, 0).add(&SpinorFiber::basis(2, 3)), 1);
        let err = residual(&TwistorVariant::Kahlerian { r: 0 }, &g, &psi, &Sampling::default()).unwrap_err();
        assert!(matches!(err, Error::TypeImpurity { r: 0, .. }));
    }
}
