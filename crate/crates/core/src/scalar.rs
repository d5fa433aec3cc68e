//! Scalar backends.
//!
//! Two fields are supported: exact Gaussian rationals (`Q(i)`, complex
//! numbers with rational real and imaginary parts) and complex doubles.
//! Everything that is a field identity is checked on the exact backend;
//! the float backend feeds the spectral code.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Default relative tolerance for float comparisons.
pub const FLOAT_REL_TOL: f64 = 1e-9;

/// Exact complex numbers with rational parts.
pub type GaussianRational = Complex<BigRational>;

pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Arithmetic is exact (no rounding).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    /// Approximate modulus, used for pivoting and scale estimates.
    fn magnitude(&self) -> f64;
    fn to_complex64(&self) -> Complex64;
    /// Image of an exact value in this backend.
    fn from_gaussian(z: &GaussianRational) -> Self;

    /// Equality: exact on exact backends, relative `rel_tol` otherwise.
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool;

    fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn from_u128(v: u128) -> Self {
        let base = Self::from_i64(1 << 32);
        [96u32, 64, 32, 0].iter().fold(Self::zero(), |acc, &shift| {
            acc * base.clone() + Self::from_i64(((v >> shift) & 0xffff_ffff) as i64)
        })
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn magnitude(&self) -> f64 {
        let re = self.re.abs().to_f64().unwrap_or(f64::INFINITY);
        let im = self.im.abs().to_f64().unwrap_or(f64::INFINITY);
        re.hypot(im)
    }
    fn to_complex64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn from_gaussian(z: &GaussianRational) -> Self {
        z.clone()
    }
    fn approx_eq(&self, other: &Self, _rel_tol: f64) -> bool {
        self == other
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_complex64(&self) -> Complex64 {
        *self
    }
    fn from_gaussian(z: &GaussianRational) -> Self {
        z.to_complex64()
    }
    fn approx_eq(&self, other: &Self, rel_tol: f64) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (self - other).norm() <= rel_tol * scale
    }
    fn pow(&self, exp: u32) -> Self {
        self.powu(exp)
    }
}

/// `num / den` as an exact real Gaussian rational.
pub fn rational(num: i64, den: i64) -> GaussianRational {
    Complex::new(BigRational::new(num.into(), den.into()), BigRational::zero())
}

/// `(re_num/re_den) + (im_num/im_den) i`.
pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    Complex::new(
        BigRational::new(re.0.into(), re.1.into()),
        BigRational::new(im.0.into(), im.1.into()),
    )
}

/// Random real rational with numerator in [-9, 9] and denominator in [1, 9].
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    rational(rng.random_range(-9..=9), rng.random_range(1..=9))
}

/// Random nonzero real rational, same ranges as [`random_rational`].
pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    loop {
        let r = random_rational(rng);
        if !Scalar::is_zero(&r) {
            return r;
        }
    }
}

/// Random Gaussian rational: both parts drawn as in [`random_rational`].
pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    gaussian(
        (rng.random_range(-9..=9), rng.random_range(1..=9)),
        (rng.random_range(-9..=9), rng.random_range(1..=9)),
    )
}

/// Human-readable rendering of an exact value, e.g. `-3/4+2i`.
pub fn format_gaussian(z: &GaussianRational) -> String {
    if z.im.is_zero() {
        return z.re.to_string();
    }
    if z.re.is_zero() {
        return format!("{}i", z.im);
    }
    let sign = if z.im.is_negative() { '-' } else { '+' };
    format!("{}{}{}i", z.re, sign, z.im.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_matches_repeated_multiplication() {
        let z = gaussian((1, 2), (-2, 3));
        let mut acc = <GaussianRational as Scalar>::one();
        for k in 0..9 {
            assert_eq!(z.pow(k), acc);
            acc = acc * z.clone();
        }
    }

    #[test]
    fn from_u128_roundtrips_large_values() {
        let v: u128 = 123_456_789_012_345_678_901_234_567;
        let z = GaussianRational::from_u128(v);
        assert_eq!(z.re, BigRational::from_integer(BigInt::from(v)));
        assert_eq!(Complex64::from_u128(10).re, 10.0);
    }

    #[test]
    fn float_approx_eq_is_relative() {
        let a = Complex64::new(1e6, 0.0);
        let b = Complex64::new(1e6 + 1e-4, 0.0);
        assert!(a.approx_eq(&b, 1e-9));
        assert!(!a.approx_eq(&Complex64::new(1e6 + 1.0, 0.0), 1e-9));
    }

    #[test]
    fn formats_gaussian_rationals() {
        assert_eq!(format_gaussian(&rational(-3, 4)), "-3/4");
        assert_eq!(format_gaussian(&gaussian((1, 1), (-2, 1))), "1-2i");
        assert_eq!(format_gaussian(&gaussian((0, 1), (1, 2))), "1/2i");
    }
}
