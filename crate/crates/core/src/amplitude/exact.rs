//! Exact arithmetic over the field Q(√2, √3)(i).
//!
//! Every amplitude the default device produces is a dyadic rational times a
//! power of `i` and `1/√2`; the four-photon Bell computations add thirds and
//! the bosonic factors √2, √3 and √6. A real element is stored as four
//! rational coordinates over the basis `{1, √2, √3, √6}`, which is closed
//! under multiplication.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = Ratio<i128>;

const RADICALS: [u32; 4] = [1, 2, 3, 6];

/// Real element `c0 + c1·√2 + c2·√3 + c3·√6` with rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    coeffs: [Rational; 4],
}

// Product table on basis indices: (target index, integer factor).
const fn basis_product(a: usize, b: usize) -> (usize, i128) {
    match (a, b) {
        (0, x) | (x, 0) => (x, 1),
        (1, 1) => (0, 2),
        (2, 2) => (0, 3),
        (3, 3) => (0, 6),
        (1, 2) | (2, 1) => (3, 1),
        (1, 3) | (3, 1) => (2, 2),
        (2, 3) | (3, 2) => (1, 3),
        _ => unreachable!(),
    }
}

fn squarefree_split(n: u64) -> (u64, u64) {
    // n = outer² · inner with inner squarefree
    let mut inner = 1u64;
    let mut outer = 1u64;
    let mut rest = n;
    let mut p = 2u64;
    while p * p <= rest {
        let mut e = 0;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        outer *= p.pow(e / 2);
        if e % 2 == 1 {
            inner *= p;
        }
        p += 1;
    }
    (outer, inner * rest)
}

impl Surd {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut s = Self::zero();
        s.coeffs[0] = q;
        s
    }

    pub fn from_int(k: i128) -> Self {
        Self::from_rational(Rational::from_integer(k))
    }

    pub fn ratio(num: i128, den: i128) -> Self {
        Self::from_rational(Rational::new(num, den))
    }

    /// `q · √radical`, where `radical` is one of 1, 2, 3, 6.
    pub fn radical(q: Rational, radical: u32) -> Option<Self> {
        let idx = RADICALS.iter().position(|&r| r == radical)?;
        let mut s = Self::zero();
        s.coeffs[idx] = q;
        Some(s)
    }

    /// `√n` when the squarefree part of `n` is one of 1, 2, 3, 6.
    pub fn sqrt_int(n: u64) -> Option<Self> {
        let (outer, inner) = squarefree_split(n);
        Self::radical(Rational::from_integer(outer as i128), inner as u32)
    }

    /// `1/√n` under the same restriction as [`Surd::sqrt_int`].
    pub fn inv_sqrt_int(n: u64) -> Option<Self> {
        if n == 0 {
            return None;
        }
        // 1/(outer·√inner) = √inner / (outer·inner)
        let (outer, inner) = squarefree_split(n);
        Self::radical(Rational::new(1, (outer * inner) as i128), inner as u32)
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The value as a plain rational, when all radical coordinates vanish.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0])
    }

    pub fn to_f64(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(RADICALS)
            .map(|(c, r)| c.to_f64().unwrap_or(f64::NAN) * f64::from(r).sqrt())
            .sum()
    }

    /// `1/√x` for a positive rational `x`.
    pub fn inv_sqrt(&self) -> Option<Self> {
        let q = self.as_rational()?;
        if !q.is_positive() {
            return None;
        }
        // 1/√(p/q) = √(p·q) / p
        let (p, d) = (*q.numer(), *q.denom());
        let (outer, inner) = squarefree_split(u64::try_from(p.checked_mul(d)?).ok()?);
        Self::radical(
            Rational::new(outer as i128, p),
            u32::try_from(inner).ok()?,
        )
    }

    /// Snap a float onto `m / (2^k 3^j)` or `m √2 / (2^k 3^j)`.
    pub fn snap(x: f64) -> Option<Self> {
        if !x.is_finite() {
            return None;
        }
        if x == 0.0 {
            return Some(Self::zero());
        }
        for j in 0..=4u32 {
            for k in 0..=24u32 {
                let den = (1i128 << k) * 3i128.pow(j);
                let scaled = x * den as f64;
                let m = scaled.round();
                if (scaled - m).abs() < 1e-9 {
                    return Some(Self::ratio(m as i128, den));
                }
                let scaled2 = x * std::f64::consts::SQRT_2 * den as f64;
                let m2 = scaled2.round();
                if (scaled2 - m2).abs() < 1e-9 {
                    // m2 / (√2 den) = m2 √2 / (2 den)
                    return Self::radical(Rational::new(m2 as i128, 2 * den), 2);
                }
            }
        }
        None
    }
}

impl Add for Surd {
    type Output = Surd;
    fn add(mut self, rhs: Surd) -> Surd {
        self += rhs;
        self
    }
}

impl AddAssign for Surd {
    fn add_assign(&mut self, rhs: Surd) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
    }
}

impl Sub for Surd {
    type Output = Surd;
    fn sub(self, rhs: Surd) -> Surd {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Surd;
    fn neg(mut self) -> Surd {
        for c in self.coeffs.iter_mut() {
            *c = -*c;
        }
        self
    }
}

impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let (k, f) = basis_product(i, j);
                out.coeffs[k] += a * b * Rational::from_integer(f);
            }
        }
        out
    }
}

impl Mul for Surd {
    type Output = Surd;
    fn mul(self, rhs: Surd) -> Surd {
        &self * &rhs
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, r) in self.coeffs.iter().zip(RADICALS) {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match (r, a.is_one()) {
                (1, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "√{r}")?,
                _ => write!(f, "{a}·√{r}")?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact complex number with [`Surd`] real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactComplex {
    pub re: Surd,
    pub im: Surd,
}

impl ExactComplex {
    pub fn new(re: Surd, im: Surd) -> Self {
        Self { re, im }
    }

    pub fn real(re: Surd) -> Self {
        Self { re, im: Surd::zero() }
    }

    pub fn imag(im: Surd) -> Self {
        Self { re: Surd::zero(), im }
    }

    /// Rational complex number `(a + b i) / den`.
    pub fn ratio(a: i128, b: i128, den: i128) -> Self {
        Self::new(Surd::ratio(a, den), Surd::ratio(b, den))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn abs_sqr(&self) -> Surd {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for ExactComplex {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "({})i", self.im),
            (false, false) => write!(f, "{} + ({})i", self.re, self.im),
        }
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_products_close() {
        let s2 = Surd::sqrt_int(2).unwrap();
        let s3 = Surd::sqrt_int(3).unwrap();
        let s6 = Surd::sqrt_int(6).unwrap();
        assert_eq!(&s2 * &s2, Surd::from_int(2));
        assert_eq!(&s2 * &s3, s6);
        assert_eq!(&s6 * &s2, Surd::from_int(2) * s3.clone());
        assert_eq!(&s6 * &s3, Surd::from_int(3) * s2);
        assert_eq!(&s6 * &s6, Surd::from_int(6));
    }

    #[test]
    fn sqrt_of_factorials() {
        assert_eq!(Surd::sqrt_int(24).unwrap(), Surd::from_int(2) * Surd::sqrt_int(6).unwrap());
        assert!((Surd::sqrt_int(24).unwrap().to_f64() - 24f64.sqrt()).abs() < 1e-12);
        assert!(Surd::sqrt_int(5).is_none());
        let inv = Surd::inv_sqrt_int(24).unwrap();
        assert_eq!(&inv * &Surd::sqrt_int(24).unwrap(), Surd::from_int(1));
    }

    #[test]
    fn inverse_sqrt_of_rational() {
        let x = Surd::ratio(3, 2);
        let y = x.inv_sqrt().unwrap();
        assert_eq!(&(&y * &y) * &x, Surd::from_int(1));
        assert!(Surd::ratio(-1, 2).inv_sqrt().is_none());
    }

    #[test]
    fn snapping_recovers_common_values() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(Surd::snap(h).unwrap(), Surd::radical(Rational::new(1, 2), 2).unwrap());
        assert_eq!(Surd::snap(-0.375).unwrap(), Surd::ratio(-3, 8));
        assert_eq!(Surd::snap(2.0 / 3.0).unwrap(), Surd::ratio(2, 3));
        assert!(Surd::snap(std::f64::consts::PI).is_none());
    }

    #[test]
    fn display_is_readable() {
        let x = Surd::ratio(1, 2) - Surd::radical(Rational::new(3, 4), 2).unwrap();
        assert_eq!(x.to_string(), "1/2 - 3/4·√2");
        assert_eq!(ExactComplex::ratio(0, 1, 2).to_string(), "(1/2)i");
    }
}
