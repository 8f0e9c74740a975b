//! Coefficient fields shared by the cumulant, kernel and Fock-space code.
//!
//! Three instances are provided: `f64` and [`Complex64`] for floating work,
//! and [`BigRational`] for exact identity checks on real rational inputs.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Complex conjugate; the identity on real fields.
    fn conj(&self) -> Self;

    fn from_i64(value: i64) -> Self;

    fn from_biguint(value: &BigUint) -> Self;

    /// Nearest complex double, used for reporting and tolerance checks.
    fn to_complex(&self) -> Complex64;

    /// Absolute value as a double.
    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }

    fn re(&self) -> f64 {
        self.to_complex().re
    }

    /// `|self|^2` inside the field.
    fn modulus_sq(&self) -> Self {
        self.conj() * self.clone()
    }

    fn powu(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn conj(&self) -> Self {
        *self
    }

    fn from_i64(value: i64) -> Self {
        value as f64
    }

    fn from_biguint(value: &BigUint) -> Self {
        value.to_f64().unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn modulus(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_i64(value: i64) -> Self {
        Complex64::new(value as f64, 0.0)
    }

    fn from_biguint(value: &BigUint) -> Self {
        Complex64::new(value.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

impl Scalar for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_i64(value: i64) -> Self {
        BigRational::from_integer(BigInt::from(value))
    }

    fn from_biguint(value: &BigUint) -> Self {
        BigRational::from_integer(BigInt::from(value.clone()))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// Shorthand for the exact rational `num / den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
