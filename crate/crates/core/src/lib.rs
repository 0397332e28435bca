//! Archimedean zeta integrals for holomorphic discrete series of `U(n,1)`:
//! closed forms, Fock-model computations and numerical cross-checks.
//!
//! The algebraic layers ([`linalg`], [`characters`], [`fock`]) are generic
//! over [`scalar::Scalar`], so the same code runs in `f64`/`Complex<f64>`
//! and in exact rational or Gaussian-rational arithmetic.

pub mod characters;
pub mod cli;
pub mod fock;
pub mod group;
pub mod linalg;
pub mod scalar;
pub mod verify;
pub mod weights;

use num_complex::Complex;
use num_rational::BigRational;

pub use scalar::C64;

pub type Rational = BigRational;
pub type GaussianRational = Complex<BigRational>;

pub type FockPolyC64 = fock::FockPoly<C64>;
pub type FockPolyExact = fock::FockPoly<GaussianRational>;
