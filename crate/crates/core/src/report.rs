//! Residual reports and the shared measurement of residual sections.

use serde::ser::{Serialize, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::fields::{Fiber, PolySection};
use crate::sample::sample_points;

/// How residuals are measured.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampling {
    pub points: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { points: 20, seed: 0x5eed, tolerance: 1e-9 }
    }
}

impl Sampling {
    pub fn points(&self, m: usize) -> Vec<Vec<f64>> {
        sample_points(m, self.points, self.seed)
    }
}

/// Largest residual: symbolically zero, or a sampled magnitude.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum MaxResidual {
    ExactZero,
    Value(f64),
}

impl MaxResidual {
    pub fn value(self) -> f64 {
        match self {
            Self::ExactZero => 0.0,
            Self::Value(v) => v,
        }
    }

    pub fn max(self, other: Self) -> Self {
        match (self, other) {
            (Self::ExactZero, o) | (o, Self::ExactZero) => o,
            (Self::Value(a), Self::Value(b)) => Self::Value(a.max(b)),
        }
    }
}

impl Serialize for MaxResidual {
    fn serialize<Z: Serializer>(&self, s: Z) -> Result<Z::Ok, Z::Error> {
        match self {
            Self::ExactZero => s.serialize_str("0 (exact)"),
            Self::Value(v) => s.serialize_f64(*v),
        }
    }
}

/// One residual check.
#[derive(Clone, Debug, PartialEq, DeriveSerialize)]
pub struct ResidualReport {
    pub equation: String,
    pub variant: String,
    pub m: usize,
    pub r: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub max_residual: MaxResidual,
    pub points: usize,
    pub pass: bool,
    pub tolerance: f64,
}

/// Outcome of measuring a family of residual sections.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Measured {
    pub max: MaxResidual,
    pub pass: bool,
}

/// Exact backend: pass iff every section is identically zero; a nonzero
/// section reports its sampled (or, failing that, coefficient) magnitude.
/// Float backend: pass iff the sampled maximum is within tolerance.
pub fn measure<F: Fiber>(sections: &[PolySection<F>], m: usize, sampling: &Sampling) -> Measured {
    use crate::scalar::Scalar;
    let pts = sampling.points(m);
    let sampled = sections
        .iter()
        .flat_map(|s| pts.iter().map(move |x| s.max_abs_at(x)))
        .fold(0.0, f64::max);
    if <F::Scalar as Scalar>::EXACT {
        if sections.iter().all(PolySection::is_zero) {
            return Measured { max: MaxResidual::ExactZero, pass: true };
        }
        let coeff = sections.iter().map(PolySection::max_abs_coeff).fold(0.0, f64::max);
        let v = if sampled > 0.0 { sampled } else { coeff };
        Measured { max: MaxResidual::Value(v), pass: false }
    } else {
        Measured { max: MaxResidual::Value(sampled), pass: sampled <= sampling.tolerance }
    }
}

impl ResidualReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        equation: impl Into<String>,
        variant: impl Into<String>,
        m: usize,
        r: Option<usize>,
        bigrade: Option<(usize, usize)>,
        measured: Measured,
        sampling: &Sampling,
    ) -> Self {
        Self {
            equation: equation.into(),
            variant: variant.into(),
            m,
            r,
            p: bigrade.map(|b| b.0),
            q: bigrade.map(|b| b.1),
            max_residual: measured.max,
            points: sampling.points,
            pass: measured.pass,
            tolerance: sampling.tolerance,
        }
    }
}
