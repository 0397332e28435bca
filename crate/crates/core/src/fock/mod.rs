//! Bargmann-Fock model on polynomials in the `(n+1)^2` variables `z_{ij}`.
//!
//! Variables are 0-based internally: `z_{ij}` with `i, j in 0..=n`, stored in
//! row-major order. The block split `[[A, B], [C, D]]` puts `A` on rows
//! `0..n` and columns `0..p`.

mod action;
mod at;
mod poly;

pub use action::{
    harmonic_hwv, highest_weight_check, minors, omega_bt, omega_k, omega_k_p, omega_k_tangent,
    omega_kprime, omega_kprime_tangent, CheckLine, HighestWeightReport, PrimeElement,
};
pub use at::{
    omega_at, omega_at_kernel, omega_matcoef, omega_matcoef_graded, prop61_lhs, AtParams, OmegaAt,
};
pub use poly::{
    bargmann_inner, bargmann_inner_c64, gaussian_pair, var_index, Exps, ExactScaled, FockPoly,
    PiPoly, PiSeries, Scaled,
};

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::group::CoverElement;
use crate::linalg::Mat;
use crate::scalar::gaussian;
use crate::GaussianRational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("index {index} out of range for n = {n}")]
    OutOfRange { index: usize, n: usize },
    #[error("block size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("singular block")]
    SingularBlock,
    #[error("inadmissible input: {0}")]
    Inadmissible(String),
}

/// A random Gaussian-rational point on the unit circle, `(a + b i)/c` from a
/// Pythagorean triple.
pub fn exact_unit<R: Rng + ?Sized>(rng: &mut R) -> GaussianRational {
    let m: i64 = rng.random_range(1..=3);
    let k: i64 = rng.random_range(0..m);
    let (mut a, mut b, c) = (m * m - k * k, 2 * m * k, m * m + k * k);
    if rng.random() {
        std::mem::swap(&mut a, &mut b);
    }
    if rng.random() {
        a = -a;
    }
    if rng.random() {
        b = -b;
    }
    gaussian((a, c), (b, c))
}

/// A random element of `U(n) x U(1)` with Gaussian-rational entries and
/// exact carried roots: a product of complex Givens rotations (determinant
/// one) times `diag(u_1^2, ..., u_n^2)`, so that `zeta_n = prod u_i`.
pub fn exact_unitary_cover<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CoverElement<GaussianRational> {
    let zero = GaussianRational::zero();
    let one = GaussianRational::one();
    let mut x: Mat<GaussianRational> = Mat::identity(n);
    for _ in 0..n.saturating_sub(1) * 2 {
        let i = rng.random_range(0..n);
        let j = (i + 1 + rng.random_range(0..n - 1)) % n;
        let rot = exact_unit(rng);
        let cos = Complex::new(rot.re.clone(), BigRational::zero());
        let sin = Complex::new(rot.im.clone(), BigRational::zero());
        let v = exact_unit(rng);
        let mut g = Mat::identity(n);
        g[(i, i)] = cos.clone();
        g[(j, j)] = cos;
        g[(i, j)] = -(sin.clone() * v.conj());
        g[(j, i)] = sin * v;
        x = &x * &g;
    }
    let mut zeta_n = one.clone();
    let mut phases = vec![zero; n];
    for ph in phases.iter_mut() {
        let u = exact_unit(rng);
        *ph = u.clone() * u.clone();
        zeta_n = zeta_n * u;
    }
    x = &x * &Mat::diag(&phases);
    let w = exact_unit(rng);
    CoverElement {
        block_n: x,
        block_1: w.clone() * w.clone(),
        zeta_n,
        zeta_1: w,
    }
}
