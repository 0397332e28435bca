//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Everything that only needs field arithmetic (Schur polynomials, Fock
//! polynomials, dense matrices, the Gaussian pairing) is written against
//! [`Scalar`]. Implementations exist for `f32`, `f64`, their complex
//! counterparts, [`BigRational`] and Gaussian rationals
//! (`Complex<BigRational>`).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type C64 = Complex<f64>;

/// A field element usable by the generic algorithms.
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
    /// True when arithmetic is exact (no rounding).
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn from_rational(r: &BigRational) -> Self;

    /// Complex conjugate; identity on real fields.
    fn conj(&self) -> Self;

    fn to_c64(&self) -> C64;

    /// Size used for pivot selection and tolerance checks.
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    fn powi(&self, exp: i64) -> Self {
        let base = if exp < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b.clone();
            }
            e >>= 1;
            if e > 0 {
                b = b.clone() * b;
            }
        }
        acc
    }

    /// Equality up to `tol` relative to the larger magnitude; exact types
    /// compare exactly.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            return self == other;
        }
        let diff = (self.clone() - other.clone()).modulus();
        let scale = self.modulus().max(other.modulus()).max(1.0);
        diff <= tol * scale
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                v as $t
            }

            fn from_rational(r: &BigRational) -> Self {
                r.to_f64().unwrap_or(f64::NAN) as $t
            }

            fn conj(&self) -> Self {
                *self
            }

            fn to_c64(&self) -> C64 {
                C64::new(*self as f64, 0.0)
            }

            fn modulus(&self) -> f64 {
                (*self as f64).abs()
            }
        }

        impl Scalar for Complex<$t> {
            const EXACT: bool = false;

            fn from_i64(v: i64) -> Self {
                Complex::new(v as $t, 0.0)
            }

            fn from_rational(r: &BigRational) -> Self {
                Complex::new(r.to_f64().unwrap_or(f64::NAN) as $t, 0.0)
            }

            fn conj(&self) -> Self {
                Complex::conj(self)
            }

            fn to_c64(&self) -> C64 {
                C64::new(self.re as f64, self.im as f64)
            }

            fn modulus(&self) -> f64 {
                self.to_c64().norm()
            }
        }
    };
}

float_scalar!(f32);
float_scalar!(f64);

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn to_c64(&self) -> C64 {
        C64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for Complex<BigRational> {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_i64(v), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(BigRational::from_ratio(num, den), BigRational::zero())
    }

    fn from_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }

    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// Builds the exact Gaussian rational `(a/b) + i (c/d)`.
pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> Complex<BigRational> {
    Complex::new(
        BigRational::from_ratio(re.0, re.1),
        BigRational::from_ratio(im.0, im.1),
    )
}

/// `k!` in the scalar type.
pub fn factorial<T: Scalar>(k: u32) -> T {
    (1..=k as i64).fold(T::one(), |acc, v| acc * T::from_i64(v))
}

/// `i! / (i - j)!` for `j <= i`.
pub fn falling_factorial<T: Scalar>(i: u32, j: u32) -> T {
    debug_assert!(j <= i);
    ((i - j + 1) as i64..=i as i64).fold(T::one(), |acc, v| acc * T::from_i64(v))
}

pub fn binomial<T: Scalar>(m: u32, b: u32) -> T {
    falling_factorial::<T>(m, b) / factorial::<T>(b)
}
