//! The numeric policy shared by every module.
//!
//! Two scalar types implement [`Amplitude`]: `Complex64` (floating mode,
//! pruning below [`PRUNE_THRESHOLD`]) and [`ExactComplex`] (exact mode).

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Neg, Sub};

use num_complex::Complex64;
use serde_json::{json, Value};

use super::exact::{ExactComplex, Rational, Surd};

/// Amplitudes below this modulus are dropped from sparse states in floating mode.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Default comparison tolerance in floating mode.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// Which scalar type a computation runs in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericMode {
    Exact,
    Float,
}

impl std::str::FromStr for NumericMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Self::Exact),
            "float" => Ok(Self::Float),
            other => Err(format!("unknown numeric mode `{other}` (expected exact|float)")),
        }
    }
}

pub trait Amplitude:
    Clone
    + Debug
    + Display
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    const MODE: NumericMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn i() -> Self;
    fn from_int(k: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    fn mul(&self, rhs: &Self) -> Self;
    fn conj(&self) -> Self;

    /// `|z|²` as a real-valued amplitude.
    fn abs_sqr(&self) -> Self;

    /// Exactly zero in exact mode; below [`PRUNE_THRESHOLD`] in floating mode.
    fn is_negligible(&self) -> bool;

    /// `√n`, if representable.
    fn sqrt_int(n: u64) -> Option<Self>;
    /// `1/√n`, if representable.
    fn inv_sqrt_int(n: u64) -> Option<Self>;
    /// `1/√x` for a positive real value.
    fn inv_sqrt_real(&self) -> Option<Self>;

    fn to_c64(&self) -> Complex64;
    fn from_c64(z: Complex64) -> Option<Self>;

    /// Structured rendering for machine-readable output.
    fn to_json(&self) -> Value;

    fn re_f64(&self) -> f64 {
        self.to_c64().re
    }

    fn scale_int(&self, k: i64) -> Self {
        self.mul(&Self::from_int(k))
    }
}

impl Amplitude for Complex64 {
    const MODE: NumericMode = NumericMode::Float;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn i() -> Self {
        Complex64::new(0.0, 1.0)
    }
    fn from_int(k: i64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn abs_sqr(&self) -> Self {
        Complex64::new(self.norm_sqr(), 0.0)
    }
    fn is_negligible(&self) -> bool {
        self.norm() < PRUNE_THRESHOLD
    }
    fn sqrt_int(n: u64) -> Option<Self> {
        Some(Complex64::new((n as f64).sqrt(), 0.0))
    }
    fn inv_sqrt_int(n: u64) -> Option<Self> {
        (n > 0).then(|| Complex64::new(1.0 / (n as f64).sqrt(), 0.0))
    }
    fn inv_sqrt_real(&self) -> Option<Self> {
        (self.re > 0.0).then(|| Complex64::new(1.0 / self.re.sqrt(), 0.0))
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        (z.re.is_finite() && z.im.is_finite()).then_some(z)
    }
    fn to_json(&self) -> Value {
        json!({ "re": self.re, "im": self.im })
    }
}

impl Amplitude for ExactComplex {
    const MODE: NumericMode = NumericMode::Exact;

    fn zero() -> Self {
        ExactComplex::default()
    }
    fn one() -> Self {
        ExactComplex::real(Surd::from_int(1))
    }
    fn i() -> Self {
        ExactComplex::imag(Surd::from_int(1))
    }
    fn from_int(k: i64) -> Self {
        ExactComplex::real(Surd::from_int(k as i128))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        ExactComplex::real(Surd::ratio(num as i128, den as i128))
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conj(&self) -> Self {
        ExactComplex::conj(self)
    }
    fn abs_sqr(&self) -> Self {
        ExactComplex::real(ExactComplex::abs_sqr(self))
    }
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn sqrt_int(n: u64) -> Option<Self> {
        Surd::sqrt_int(n).map(ExactComplex::real)
    }
    fn inv_sqrt_int(n: u64) -> Option<Self> {
        Surd::inv_sqrt_int(n).map(ExactComplex::real)
    }
    fn inv_sqrt_real(&self) -> Option<Self> {
        if !self.im.is_zero() {
            return None;
        }
        self.re.inv_sqrt().map(ExactComplex::real)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
    fn from_c64(z: Complex64) -> Option<Self> {
        Some(ExactComplex::new(Surd::snap(z.re)?, Surd::snap(z.im)?))
    }
    fn to_json(&self) -> Value {
        let z = self.to_c64();
        json!({
            "re": surd_json(&self.re),
            "im": surd_json(&self.im),
            "decimal": format_c64(z),
        })
    }
}

fn rational_json(q: &Rational) -> Value {
    let den = *q.denom();
    if den > 0 && den & (den - 1) == 0 {
        json!({ "num": q.numer().to_string(), "den_pow2": den.trailing_zeros() })
    } else {
        json!({ "num": q.numer().to_string(), "den": den.to_string() })
    }
}

/// Dyadic rationals render as a bare `{num, den_pow2}` pair; anything with
/// radicals or other denominators as a list of `{coeff, radical}` terms.
fn surd_json(s: &Surd) -> Value {
    if let Some(q) = s.as_rational() {
        return rational_json(&q);
    }
    let terms: Vec<Value> = s
        .coeffs()
        .iter()
        .zip([1u32, 2, 3, 6])
        .filter(|(c, _)| **c != Rational::from_integer(0))
        .map(|(c, r)| json!({ "coeff": rational_json(c), "radical": r }))
        .collect();
    json!({ "terms": terms })
}

/// Fixed-precision decimal rendering, stable across runs.
pub fn format_c64(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-16 { 0.0 } else { x };
    let (re, im) = (clean(z.re), clean(z.im));
    if im >= 0.0 {
        format!("{re:.12}+{im:.12}i")
    } else {
        format!("{re:.12}-{:.12}i", -im)
    }
}
