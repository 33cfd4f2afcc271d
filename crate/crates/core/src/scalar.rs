//! Coefficient backends.
//!
//! Everything in the crate is generic over [`Scalar`]. Two implementations
//! ship: [`Exact`] (Gaussian rationals, used for identity suites and the
//! nullspace solver) and [`Float`] (double-precision complex, used for
//! sampled residuals).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Gaussian rationals `a + b i` with `a, b ∈ ℚ`.
pub type Exact = Complex<BigRational>;
/// Double-precision complex numbers.
pub type Float = Complex64;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact and `is_zero` is a decision procedure.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_parts(re: Self, im: Self) -> Self;
    fn imag_unit() -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> Complex64;
    fn from_exact(x: &Exact) -> Self;
    fn from_f64(v: f64) -> Self;

    /// Zero test used for pivoting; exact for [`Exact`], thresholded for [`Float`].
    fn is_negligible(&self) -> bool;

    /// `[re, im]` for JSON: rational strings or plain numbers.
    fn to_json_pair(&self) -> [serde_json::Value; 2];
    fn from_json_pair(re: &serde_json::Value, im: &serde_json::Value) -> Option<Self>;

    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Multiply by `i^k`.
    fn mul_i_pow(&self, k: u8) -> Self {
        match k & 3 {
            0 => self.clone(),
            1 => self.clone() * Self::imag_unit(),
            2 => -self.clone(),
            _ => -(self.clone() * Self::imag_unit()),
        }
    }
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn from_parts(re: Self, im: Self) -> Self {
        re + im * Self::imag_unit()
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn from_exact(x: &Exact) -> Self {
        x.clone()
    }

    fn from_f64(v: f64) -> Self {
        Complex::new(
            BigRational::from_float(v).unwrap_or_else(BigRational::zero),
            BigRational::zero(),
        )
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn to_json_pair(&self) -> [serde_json::Value; 2] {
        [ratio_string(&self.re).into(), ratio_string(&self.im).into()]
    }

    fn from_json_pair(re: &serde_json::Value, im: &serde_json::Value) -> Option<Self> {
        Some(Complex::new(parse_ratio(re.as_str()?)?, parse_ratio(im.as_str()?)?))
    }

    fn mul_i_pow(&self, k: u8) -> Self {
        match k & 3 {
            0 => self.clone(),
            1 => Complex::new(-self.im.clone(), self.re.clone()),
            2 => Complex::new(-self.re.clone(), -self.im.clone()),
            _ => Complex::new(self.im.clone(), -self.re.clone()),
        }
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_parts(re: Self, im: Self) -> Self {
        re + im * Complex64::i()
    }

    fn imag_unit() -> Self {
        Complex64::i()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn from_exact(x: &Exact) -> Self {
        Scalar::to_c64(x)
    }

    fn from_f64(v: f64) -> Self {
        Complex64::new(v, 0.0)
    }

    fn is_negligible(&self) -> bool {
        self.norm() < 1e-12
    }

    fn to_json_pair(&self) -> [serde_json::Value; 2] {
        [self.re.into(), self.im.into()]
    }

    fn from_json_pair(re: &serde_json::Value, im: &serde_json::Value) -> Option<Self> {
        Some(Complex64::new(re.as_f64()?, im.as_f64()?))
    }

    fn mul_i_pow(&self, k: u8) -> Self {
        match k & 3 {
            0 => *self,
            1 => Complex64::new(-self.im, self.re),
            2 => -*self,
            _ => Complex64::new(self.im, -self.re),
        }
    }
}

/// Render a rational as `"num/den"` (or `"num"` for integers).
pub fn ratio_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse the output of [`ratio_string`].
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Absolute value of a rational as f64 (used for reporting only).
pub fn ratio_abs_f64(r: &BigRational) -> f64 {
    r.abs().to_f64().unwrap_or(f64::INFINITY)
}

/// The Gaussian integer `re + im i`.
pub fn gauss(re: i64, im: i64) -> Exact {
    Complex::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
}
