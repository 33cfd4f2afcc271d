//! Spin geometry on flat Kähler model spaces `ℝ^{2m}`: Clifford and
//! exterior algebra with Kähler operators, the complex spinor
//! representation and its type decomposition, polynomial sections,
//! polynomial solutions of twistor-type equations, and spinor bilinears
//! with residual checks for the equations they satisfy.
//!
//! Every algebraic routine is generic over [`Scalar`], with an exact
//! Gaussian-rational backend ([`Exact`]) and a `Complex64` one ([`Float`]).

pub mod bilinear;
pub mod error;
pub mod fiber;
pub mod fields;
pub mod identities;
pub mod kahler;
pub mod linalg;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod spinor;
pub mod twistor;

pub use bilinear::{BilinearContext, BracketMode, Bigrading, GapForms, GapSpec, Theorem1Options};
pub use error::{Error, Result};
pub use fiber::{FormFiber, Involution, VectorFiber};
pub use fields::{FormSection, Monomial, PolySection, SpinorSection};
pub use kahler::{Bigrade, ComplexStructure, Kahler};
pub use report::{MaxResidual, ResidualReport, Sampling};
pub use scalar::{Exact, Float, Scalar};
pub use spinor::{GammaRep, PairingMatrix, SpinGeometry, SpinorFiber, TypeConvention};
pub use twistor::{SolutionSpace, TwistorVariant};
