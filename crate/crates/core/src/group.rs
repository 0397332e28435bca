//! Matrix structure of `G = U(n,1)`: the Cartan decomposition `g = h_z k`,
//! the domain `D_{n,1}`, the distinguished diagonal elements and samplers.
//!
//! Indices are 0-based throughout; the distinguished "first" and "last"
//! coordinates of `a_t` are `0` and `n`.

use num_complex::Complex;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use thiserror::Error;

use crate::linalg::Mat;
use crate::scalar::{Scalar, C64};

/// Deterministic evaluation paths refuse points with `|z| > 1 - BOUNDARY_CUTOFF`.
pub const BOUNDARY_CUTOFF: f64 = 1e-8;

const GROUP_TOL: f64 = 1e-10;
const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("matrix is not in U(n,1): residual {residual:e}")]
    NotInGroup { residual: f64 },
    #[error("point with |z| = {norm} lies outside the domain")]
    OutsideDomain { norm: f64 },
    #[error("point with |z| = {norm} is too close to the boundary")]
    NearBoundary { norm: f64 },
    #[error("carried root does not square to the determinant: residual {residual:e}")]
    InconsistentRoot { residual: f64 },
    #[error("singular block")]
    SingularBlock,
    #[error("block is not diagonal: off-diagonal residual {residual:e}")]
    NotBlockDiagonal { residual: f64 },
    #[error("exponent {exponent} makes the radial density non-integrable")]
    NonIntegrable { exponent: f64 },
}

pub type Result<T, E = GroupError> = std::result::Result<T, E>;

/// `J = diag(1, ..., 1, -1)`.
pub fn signature_form(n: usize) -> Mat<C64> {
    let mut d = vec![C64::one(); n + 1];
    d[n] = -C64::one();
    Mat::diag(&d)
}

/// An element of `U(n,1)`, stored as an `(n+1) x (n+1)` complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement {
    matrix: Mat<C64>,
}

impl GroupElement {
    pub fn new(matrix: Mat<C64>) -> Result<Self> {
        assert!(matrix.is_square() && matrix.rows() >= 2);
        let n = matrix.rows() - 1;
        let j = signature_form(n);
        let lhs = &(&matrix.adjoint() * &j) * &matrix;
        let residual = lhs.sub(&j).max_abs();
        let scale = matrix.max_abs().powi(2).max(1.0);
        if residual > GROUP_TOL * scale {
            return Err(GroupError::NotInGroup { residual });
        }
        Ok(GroupElement { matrix })
    }

    pub fn identity(n: usize) -> Self {
        GroupElement {
            matrix: Mat::identity(n + 1),
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.rows() - 1
    }

    pub fn matrix(&self) -> &Mat<C64> {
        &self.matrix
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            matrix: &self.matrix * &other.matrix,
        }
    }

    /// `g^{-1} = J g^* J`.
    pub fn inverse(&self) -> GroupElement {
        let j = signature_form(self.n());
        GroupElement {
            matrix: &(&j * &self.matrix.adjoint()) * &j,
        }
    }
}

/// A point of `D_{n,1}`: a column vector `z` with `|z| < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainPoint {
    z: Vec<C64>,
}

impl DomainPoint {
    pub fn new(z: Vec<C64>) -> Result<Self> {
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm < 1.0) {
            return Err(GroupError::OutsideDomain { norm });
        }
        Ok(DomainPoint { z })
    }

    pub fn origin(n: usize) -> Self {
        DomainPoint {
            z: vec![C64::zero(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.z
    }

    /// `|z|^2 = z^* z`.
    pub fn norm_sqr(&self) -> f64 {
        self.z.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `t = artanh |z|`.
    pub fn t(&self) -> f64 {
        self.norm().atanh()
    }

    fn check_interior(&self) -> Result<()> {
        let norm = self.norm();
        if norm > 1.0 - BOUNDARY_CUTOFF {
            return Err(GroupError::NearBoundary { norm });
        }
        Ok(())
    }

    /// `(1_n - z z^*)^alpha = 1 + ((1-|z|^2)^alpha - 1) z z^* / |z|^2`.
    pub fn one_minus_zzstar_pow(&self, alpha: f64) -> Mat<C64> {
        let n = self.n();
        let r2 = self.norm_sqr();
        if r2 == 0.0 {
            return Mat::identity(n);
        }
        let f = ((1.0 - r2).powf(alpha) - 1.0) / r2;
        Mat::from_fn(n, n, |i, j| {
            let id = if i == j { C64::one() } else { C64::zero() };
            id + self.z[i] * self.z[j].conj() * f
        })
    }

    /// Unitary `x` with first column `z/|z|` (identity at the origin).
    pub fn frame(&self) -> Mat<C64> {
        let n = self.n();
        let norm = self.norm();
        if norm == 0.0 {
            return Mat::identity(n);
        }
        let first: Vec<C64> = self.z.iter().map(|c| c / norm).collect();
        complete_frame(&first)
    }
}

/// Completes a unit vector to a unitary matrix whose first column it is.
fn complete_frame(first: &[C64]) -> Mat<C64> {
    let n = first.len();
    let mut cols: Vec<Vec<C64>> = vec![first.to_vec()];
    for e in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v: Vec<C64> = (0..n)
            .map(|i| if i == e { C64::one() } else { C64::zero() })
            .collect();
        for _ in 0..2 {
            for c in &cols {
                let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            cols.push(v.iter().map(|c| c / norm).collect());
        }
    }
    Mat::from_fn(n, n, |i, j| cols[j][i])
}

/// An element of `K_C = GL_n x GL_1` (or of `K` when unitary) together with
/// chosen square roots of the block determinants.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverElement<T: Scalar = C64> {
    pub block_n: Mat<T>,
    pub block_1: T,
    pub zeta_n: T,
    pub zeta_1: T,
}

impl<T: Scalar> CoverElement<T> {
    /// Checks `zeta_n^2 = det(block_n)` and `zeta_1^2 = block_1`.
    pub fn new(block_n: Mat<T>, block_1: T, zeta_n: T, zeta_1: T) -> Result<Self> {
        let det = block_n.det();
        if det.is_zero() || block_1.is_zero() {
            return Err(GroupError::SingularBlock);
        }
        for (root, target) in [(&zeta_n, &det), (&zeta_1, &block_1)] {
            let sq = root.clone() * root.clone();
            if !sq.approx_eq(target, ROOT_TOL) {
                return Err(GroupError::InconsistentRoot {
                    residual: (sq - target.clone()).modulus(),
                });
            }
        }
        Ok(CoverElement {
            block_n,
            block_1,
            zeta_n,
            zeta_1,
        })
    }

    pub fn identity(n: usize) -> Self {
        CoverElement {
            block_n: Mat::identity(n),
            block_1: T::one(),
            zeta_n: T::one(),
            zeta_1: T::one(),
        }
    }

    pub fn n(&self) -> usize {
        self.block_n.rows()
    }

    /// `diag(block_n, block_1)` as an `(n+1) x (n+1)` matrix.
    pub fn full_matrix(&self) -> Mat<T> {
        Mat::block_diag(&self.block_n, &Mat::diag(&[self.block_1.clone()]))
    }

    pub fn flip_n(&self) -> Self {
        CoverElement {
            zeta_n: -self.zeta_n.clone(),
            ..self.clone()
        }
    }

    pub fn flip_1(&self) -> Self {
        CoverElement {
            zeta_1: -self.zeta_1.clone(),
            ..self.clone()
        }
    }

    /// Flips both carried roots.
    pub fn flipped(&self) -> Self {
        self.flip_n().flip_1()
    }

    /// Product with roots multiplied factorwise.
    pub fn mul(&self, other: &CoverElement<T>) -> CoverElement<T> {
        CoverElement {
            block_n: &self.block_n * &other.block_n,
            block_1: self.block_1.clone() * other.block_1.clone(),
            zeta_n: self.zeta_n.clone() * other.zeta_n.clone(),
            zeta_1: self.zeta_1.clone() * other.zeta_1.clone(),
        }
    }

    pub fn inverse(&self) -> Result<CoverElement<T>> {
        Ok(CoverElement {
            block_n: self.block_n.inverse().ok_or(GroupError::SingularBlock)?,
            block_1: T::one() / self.block_1.clone(),
            zeta_n: T::one() / self.zeta_n.clone(),
            zeta_1: T::one() / self.zeta_1.clone(),
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CoverElement<U> {
        CoverElement {
            block_n: Mat::from_fn(self.n(), self.n(), |i, j| f(&self.block_n[(i, j)])),
            block_1: f(&self.block_1),
            zeta_n: f(&self.zeta_n),
            zeta_1: f(&self.zeta_1),
        }
    }
}

impl CoverElement<C64> {
    /// Uses principal square roots of the determinants.
    pub fn principal(block_n: Mat<C64>, block_1: C64) -> Result<Self> {
        let zeta_n = block_n.det().sqrt();
        let zeta_1 = block_1.sqrt();
        Self::new(block_n, block_1, zeta_n, zeta_1)
    }

    /// Splits a block-diagonal `(n+1) x (n+1)` matrix.
    pub fn from_matrix(m: &Mat<C64>) -> Result<Self> {
        let n = m.rows() - 1;
        let residual = (0..n)
            .map(|i| m[(i, n)].norm().max(m[(n, i)].norm()))
            .fold(0.0, f64::max);
        if residual > GROUP_TOL * m.max_abs().max(1.0) {
            return Err(GroupError::NotBlockDiagonal { residual });
        }
        Self::principal(m.block(0, 0, n, n), m[(n, n)])
    }

    /// Haar-random element of `K = U(n) x U(1)` with principal roots.
    pub fn random_k<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let x = haar_unitary(n, rng);
        let y = haar_unitary(1, rng)[(0, 0)];
        Self::principal(x, y).expect("unitary blocks are invertible")
    }

    pub fn to_group(&self) -> GroupElement {
        GroupElement {
            matrix: self.full_matrix(),
        }
    }
}

/// Output of [`cartan_decompose`].
#[derive(Debug, Clone)]
pub struct CartanParts {
    pub z: DomainPoint,
    pub t: f64,
    /// `k_z = diag(x, 1)` with `x` a frame whose first column is `z/|z|`.
    pub k_z: CoverElement,
    pub k: CoverElement,
}

/// `h_z`: the positive-definite member of `G` attached to `z`.
pub fn h_from_z(z: &DomainPoint) -> GroupElement {
    let n = z.n();
    let a = z.one_minus_zzstar_pow(-0.5);
    let c = (1.0 - z.norm_sqr()).powf(-0.5);
    let zc = z.coords();
    let matrix = Mat::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
        (true, true) => a[(i, j)],
        (true, false) => zc[i] * c,
        (false, true) => zc[j].conj() * c,
        (false, false) => C64::new(c, 0.0),
    });
    GroupElement { matrix }
}

/// `g = h_z k` with `h_z = (g g^*)^{1/2}`.
pub fn cartan_decompose(g: &GroupElement) -> Result<CartanParts> {
    let n = g.n();
    let m = g.matrix();
    let gnn = m[(n, n)];
    let z = DomainPoint::new((0..n).map(|i| m[(i, n)] / gnn).collect())?;
    z.check_interior()?;
    let h_inv = h_from_z(&z).inverse();
    let k_mat = h_inv.matrix() * m;
    let k = CoverElement::from_matrix(&k_mat)?;
    let k_z = CoverElement::principal(z.frame(), C64::one())?;
    Ok(CartanParts {
        t: z.t(),
        z,
        k_z,
        k,
    })
}

/// `theta_z = diag((1_n - z z^*)^{1/2}, (1 - z^* z)^{-1/2})`.
pub fn theta_z(z: &DomainPoint) -> CoverElement {
    let s = 1.0 - z.norm_sqr();
    CoverElement {
        block_n: z.one_minus_zzstar_pow(0.5),
        block_1: C64::new(s.powf(-0.5), 0.0),
        zeta_n: C64::new(s.powf(0.25), 0.0),
        zeta_1: C64::new(s.powf(-0.25), 0.0),
    }
}

/// `b_z = diag((1_n - z z^*)^{-1/2}, (1 - z^* z)^{-1/2})`.
pub fn b_z(z: &DomainPoint) -> CoverElement {
    let s = 1.0 - z.norm_sqr();
    CoverElement {
        block_n: z.one_minus_zzstar_pow(-0.5),
        block_1: C64::new(s.powf(-0.5), 0.0),
        zeta_n: C64::new(s.powf(-0.25), 0.0),
        zeta_1: C64::new(s.powf(-0.25), 0.0),
    }
}

fn first_entry_diag(n: usize, first: f64, last: f64) -> CoverElement {
    let mut d = vec![C64::one(); n];
    d[0] = C64::new(first, 0.0);
    CoverElement {
        block_n: Mat::diag(&d),
        block_1: C64::new(last, 0.0),
        zeta_n: C64::new(first.sqrt(), 0.0),
        zeta_1: C64::new(last.sqrt(), 0.0),
    }
}

/// `theta_t = diag(1/cosh t, 1_{n-1}, cosh t)`.
pub fn theta_t(n: usize, t: f64) -> CoverElement {
    first_entry_diag(n, 1.0 / t.cosh(), t.cosh())
}

/// `b_t = diag(cosh t, 1_{n-1}, cosh t)`.
pub fn b_t(n: usize, t: f64) -> CoverElement {
    first_entry_diag(n, t.cosh(), t.cosh())
}

/// `a_t = exp(t (E_{1,n+1} + E_{n+1,1}))`.
pub fn a_t(n: usize, t: f64) -> GroupElement {
    let mut m = Mat::identity(n + 1);
    m[(0, 0)] = C64::new(t.cosh(), 0.0);
    m[(n, n)] = C64::new(t.cosh(), 0.0);
    m[(0, n)] = C64::new(t.sinh(), 0.0);
    m[(n, 0)] = C64::new(t.sinh(), 0.0);
    GroupElement { matrix: m }
}

fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Haar-distributed `m x m` unitary: Gram-Schmidt on a complex Ginibre
/// matrix. Gram-Schmidt yields the QR factor with positive diagonal in `R`,
/// which is exactly the phase correction making the law Haar.
pub fn haar_unitary<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Mat<C64> {
    assert!(m >= 1);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(m);
    while cols.len() < m {
        let mut v: Vec<C64> = (0..m).map(|_| standard_complex(rng)).collect();
        for _ in 0..2 {
            for c in &cols {
                let proj: C64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        // a degenerate draw has probability zero; redraw if it happens
        if norm > 1e-12 {
            cols.push(v.iter().map(|c| c / norm).collect());
        }
    }
    Mat::from_fn(m, m, |i, j| cols[j][i])
}

/// A point of `D_{p,q}` with its importance weight `1/pdf(z)` relative to
/// Lebesgue measure `dz`. A rejected draw carries weight 0 and `z = 0`.
#[derive(Debug, Clone)]
pub struct DomainSample {
    pub z: Mat<C64>,
    pub weight: f64,
}

/// Radial density `prod_{j=1}^m (e+j) / pi^m * (1 - |z|^2)^e` on the unit
/// ball of `C^m`.
#[derive(Debug, Clone)]
pub struct RadialSampler {
    m: usize,
    exponent: f64,
    beta: Beta<f64>,
    norm_const: f64,
}

impl RadialSampler {
    pub fn new(m: usize, exponent: f64) -> Result<Self> {
        if !(exponent > -1.0) || !exponent.is_finite() {
            return Err(GroupError::NonIntegrable { exponent });
        }
        let beta = Beta::new(m as f64, exponent + 1.0)
            .map_err(|_| GroupError::NonIntegrable { exponent })?;
        let norm_const = std::f64::consts::PI.powi(m as i32)
            / (1..=m).map(|j| exponent + j as f64).product::<f64>();
        Ok(RadialSampler {
            m,
            exponent,
            beta,
            norm_const,
        })
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Draws `(z, 1/pdf(z))`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (Vec<C64>, f64) {
        let rho = self.beta.sample(rng);
        let dir: Vec<C64> = (0..self.m).map(|_| standard_complex(rng)).collect();
        let dn = dir.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let r = rho.sqrt();
        let z = dir.iter().map(|c| c * (r / dn)).collect();
        (z, self.weight(rho))
    }

    /// `1/pdf` at squared radius `rho`.
    pub fn weight(&self, rho: f64) -> f64 {
        self.norm_const / (1.0 - rho).powf(self.exponent)
    }
}

/// Samples `D_{p,q} = { z in M_{p,q}(C) : 1_p - z z^* > 0 }`.
///
/// When `min(p, q) = 1` the domain is a ball and `z` is drawn from the
/// radial density proportional to `(1-|z|^2)^e`. Otherwise `z` is drawn
/// uniformly from the Frobenius ball of radius `sqrt(min(p,q))`, which
/// contains the domain, and draws outside the domain are rejected.
pub fn sample_domain<R: Rng + ?Sized>(
    p: usize,
    q: usize,
    weight_exponent: f64,
    rng: &mut R,
) -> Result<DomainSample> {
    assert!(p >= 1 && q >= 1);
    if !(weight_exponent > -1.0) {
        return Err(GroupError::NonIntegrable {
            exponent: weight_exponent,
        });
    }
    if p.min(q) == 1 {
        let sampler = RadialSampler::new(p.max(q), weight_exponent)?;
        let (v, weight) = sampler.sample(rng);
        let z = if q == 1 {
            Mat::from_rows(p, 1, v)
        } else {
            Mat::from_rows(1, q, v)
        };
        return Ok(DomainSample { z, weight });
    }
    let dim = 2 * p * q;
    let radius = (p.min(q) as f64).sqrt();
    let entries: Vec<C64> = (0..p * q).map(|_| standard_complex(rng)).collect();
    let dn = entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let u: f64 = rng.random();
    let r = radius * u.powf(1.0 / dim as f64);
    let z = Mat::from_rows(p, q, entries.iter().map(|c| c * (r / dn)).collect());
    let zz = &z * &z.adjoint();
    let m = Mat::identity(p).sub(&zz);
    if is_positive_definite(&m) {
        Ok(DomainSample {
            z,
            weight: real_ball_volume(dim, radius),
        })
    } else {
        Ok(DomainSample {
            z: Mat::zeros(p, q),
            weight: 0.0,
        })
    }
}

/// Volume of the Euclidean ball of radius `r` in `R^dim` (`dim` even).
fn real_ball_volume(dim: usize, r: f64) -> f64 {
    let half = dim / 2;
    let fact: f64 = (1..=half).map(|k| k as f64).product();
    std::f64::consts::PI.powi(half as i32) / fact * r.powi(dim as i32)
}

/// Sylvester's criterion on a hermitian matrix.
pub fn is_positive_definite(m: &Mat<C64>) -> bool {
    (1..=m.rows()).all(|k| m.block(0, 0, k, k).det().re > 0.0)
}

/// `det(1_p - z z^*)` for a sampled `p x q` point.
pub fn det_one_minus_zzstar(z: &Mat<C64>) -> f64 {
    let zz = z * &z.adjoint();
    Mat::identity(z.rows()).sub(&zz).det().re
}

/// Convenience: random `g = h_z k` with `|z|` uniform on `[0, max_norm]`.
pub fn random_group_element<R: Rng + ?Sized>(
    n: usize,
    max_norm: f64,
    rng: &mut R,
) -> (GroupElement, DomainPoint, CoverElement) {
    let dir: Vec<C64> = (0..n).map(|_| standard_complex(rng)).collect();
    let dn = dir.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let r = max_norm * rng.random::<f64>();
    let z = DomainPoint::new(dir.iter().map(|c| c * (r / dn)).collect())
        .expect("radius below one");
    let k = CoverElement::random_k(n, rng);
    let g = h_from_z(&z).mul(&k.to_group());
    (g, z, k)
}

pub fn unit_phase(theta: f64) -> C64 {
    Complex::from_polar(1.0, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn identity_decomposes_trivially() {
        let parts = cartan_decompose(&GroupElement::identity(3)).unwrap();
        assert_eq!(parts.t, 0.0);
        assert!(parts.k.full_matrix().approx_eq(&Mat::identity(4), 1e-15));
        assert!(parts.k_z.full_matrix().approx_eq(&Mat::identity(4), 1e-15));
    }

    #[test]
    fn a_t_decomposes_to_real_point() {
        let t = 0.7;
        let parts = cartan_decompose(&a_t(2, t)).unwrap();
        assert!((parts.z.coords()[0] - C64::new(t.tanh(), 0.0)).norm() < 1e-14);
        assert!(parts.z.coords()[1].norm() < 1e-14);
        assert!((parts.t - t).abs() < 1e-12);
        assert!(parts.k.full_matrix().approx_eq(&Mat::identity(3), 1e-12));
        assert!(parts.k_z.full_matrix().approx_eq(&Mat::identity(3), 1e-12));
    }

    #[test]
    fn h_from_z_n1_real() {
        let r: f64 = 0.6;
        let h = h_from_z(&DomainPoint::new(vec![C64::new(r, 0.0)]).unwrap());
        let c = 1.0 / (1.0 - r * r).sqrt();
        let expect = Mat::from_rows(
            2,
            2,
            vec![C64::new(c, 0.0), C64::new(r * c, 0.0), C64::new(r * c, 0.0), C64::new(c, 0.0)],
        );
        assert!(h.matrix().approx_eq(&expect, 1e-14));
        assert!(GroupElement::new(h.matrix().clone()).is_ok());
    }

    #[test]
    fn cartan_roundtrip_on_random_elements() {
        let mut rng = rng();
        for _ in 0..1000 {
            let (g, z, k) = random_group_element(3, 0.95, &mut rng);
            GroupElement::new(g.matrix().clone()).unwrap();
            let parts = cartan_decompose(&g).unwrap();
            let back = h_from_z(&parts.z).mul(&parts.k.to_group());
            assert!(back.matrix().approx_eq(g.matrix(), 1e-10));
            assert!(parts
                .k
                .full_matrix()
                .approx_eq(&k.full_matrix(), 1e-10));
            for (a, b) in parts.z.coords().iter().zip(z.coords()) {
                assert!((a - b).norm() < 1e-10);
            }
            // h_z^2 = g g^*
            let h = h_from_z(&parts.z);
            let gg = g.matrix() * &g.matrix().adjoint();
            assert!((h.matrix() * h.matrix()).approx_eq(&gg, 1e-9));
        }
    }

    #[test]
    fn h_z_is_conjugate_of_a_t() {
        let mut rng = rng();
        for _ in 0..50 {
            let (g, _, _) = random_group_element(3, 0.9, &mut rng);
            let parts = cartan_decompose(&g).unwrap();
            let kz = parts.k_z.to_group();
            let conj = kz.mul(&a_t(3, parts.t)).mul(&kz.inverse());
            assert!(conj.matrix().approx_eq(h_from_z(&parts.z).matrix(), 1e-10));
            let tz = parts
                .k_z
                .mul(&theta_t(3, parts.t))
                .mul(&parts.k_z.inverse().unwrap());
            assert!(tz.full_matrix().approx_eq(&theta_z(&parts.z).full_matrix(), 1e-10));
            let bz = parts
                .k_z
                .mul(&b_t(3, parts.t))
                .mul(&parts.k_z.inverse().unwrap());
            assert!(bz.full_matrix().approx_eq(&b_z(&parts.z).full_matrix(), 1e-10));
            // det(1 - z z^*) = cosh^{-2}
            let d = parts.z.one_minus_zzstar_pow(1.0).det().re;
            assert!((d - parts.t.cosh().powi(-2)).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_z_n1_real() {
        let r: f64 = 0.8;
        let z = DomainPoint::new(vec![C64::new(r, 0.0)]).unwrap();
        let th = theta_z(&z);
        let s = (1.0 - r * r).sqrt();
        assert!((th.block_n[(0, 0)] - C64::new(s, 0.0)).norm() < 1e-15);
        assert!((th.block_1 - C64::new(1.0 / s, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn distinguished_elements_at_zero() {
        let id = Mat::<C64>::identity(3);
        assert!(theta_t(2, 0.0).full_matrix().approx_eq(&id, 0.0));
        assert!(b_t(2, 0.0).full_matrix().approx_eq(&id, 0.0));
        assert!(a_t(2, 0.0).matrix().approx_eq(&id, 0.0));
        assert!(theta_z(&DomainPoint::origin(2)).full_matrix().approx_eq(&id, 0.0));
    }

    #[test]
    fn theta_b_products() {
        let t = 1.3;
        let prod = theta_t(3, t).mul(&b_t(3, t));
        let c2 = t.cosh().powi(2);
        let expect = Mat::diag(&[C64::one(), C64::one(), C64::one(), C64::new(c2, 0.0)]);
        assert!(prod.full_matrix().approx_eq(&expect, 1e-14));
        assert!((prod.zeta_n - C64::one()).norm() < 1e-14);

        let z = DomainPoint::new(vec![C64::new(0.3, 0.1), C64::new(-0.2, 0.5)]).unwrap();
        let ti = theta_z(&z).inverse().unwrap();
        let plus = ti.mul(&b_z(&z));
        let minus = ti.mul(&b_z(&z).inverse().unwrap());
        let inv = z.one_minus_zzstar_pow(-1.0);
        assert!(plus.block_n.approx_eq(&inv, 1e-13));
        assert!((plus.block_1 - C64::one()).norm() < 1e-13);
        assert!(minus.block_n.approx_eq(&Mat::identity(2), 1e-13));
        assert!((minus.block_1 - C64::new(1.0 - z.norm_sqr(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn near_boundary_is_reported() {
        let z = DomainPoint::new(vec![C64::new(1.0 - 1e-10, 0.0)]).unwrap();
        let g = h_from_z(&z);
        assert!(matches!(
            cartan_decompose(&g),
            Err(GroupError::NearBoundary { .. })
        ));
        assert!(matches!(
            DomainPoint::new(vec![C64::new(1.0, 0.0)]),
            Err(GroupError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn non_group_matrix_rejected() {
        let m = Mat::diag(&[C64::new(2.0, 0.0), C64::one()]);
        assert!(matches!(
            GroupElement::new(m),
            Err(GroupError::NotInGroup { .. })
        ));
    }

    #[test]
    fn cover_roots_are_checked_and_flip() {
        let x = Mat::diag(&[C64::new(0.0, 1.0)]);
        assert!(CoverElement::new(x.clone(), C64::one(), C64::one(), C64::one()).is_err());
        let k = CoverElement::principal(x, C64::new(-1.0, 0.0)).unwrap();
        let f = k.flipped();
        assert_eq!(f.zeta_n, -k.zeta_n);
        assert_eq!(f.zeta_1, -k.zeta_1);
        let prod = k.mul(&k.inverse().unwrap());
        assert!((prod.zeta_n - C64::one()).norm() < 1e-15);
    }

    #[test]
    fn haar_columns_orthonormal() {
        let mut rng = rng();
        for m in 1..=4 {
            let u = haar_unitary(m, &mut rng);
            let uu = &u.adjoint() * &u;
            assert!(uu.approx_eq(&Mat::identity(m), 1e-12));
        }
    }

    #[test]
    fn haar_trace_moments() {
        // E tr U = 0 and E |tr U|^2 = 1 for m >= 1
        let mut rng = rng();
        let samples = 40_000;
        for m in [1, 2, 3] {
            let mut sum = C64::zero();
            let mut sum_abs2 = 0.0;
            for _ in 0..samples {
                let tr = haar_unitary(m, &mut rng).trace();
                sum += tr;
                sum_abs2 += tr.norm_sqr();
            }
            let mean = sum / samples as f64;
            let se = (sum_abs2 / samples as f64 / samples as f64).sqrt();
            assert!(mean.norm() < 4.0 * se, "m={m} mean={mean}");
            let second = sum_abs2 / samples as f64;
            assert!((second - 1.0).abs() < 0.05, "m={m} second={second}");
        }
    }

    #[test]
    fn radial_sampler_moments() {
        // p = q = 1: weighted means of 1 and of (1-|z|^2) give pi and pi/2,
        // so their ratio is the uniform average 1/2
        let mut rng = rng();
        let n = 200_000;
        let mut sums = [(0.0, 0.0); 2];
        for _ in 0..n {
            let s = sample_domain(1, 1, 0.4, &mut rng).unwrap();
            let f = 1.0 - s.z[(0, 0)].norm_sqr();
            for (slot, v) in sums.iter_mut().zip([s.weight, s.weight * f]) {
                slot.0 += v;
                slot.1 += v * v;
            }
        }
        let pi = std::f64::consts::PI;
        for ((sum, sum2), exact) in sums.iter().zip([pi, pi / 2.0]) {
            let mean = sum / n as f64;
            let se = ((sum2 / n as f64 - mean * mean) / n as f64).sqrt();
            assert!((mean - exact).abs() < 3.0 * se, "{mean} vs {exact} (se {se})");
        }
        assert!((sums[1].0 / sums[0].0 - 0.5).abs() < 0.01);
    }

    #[test]
    fn radial_sampler_reproduces_volume_integral() {
        // int_{|z|<1} (1-|z|^2)^{s-2} dz = pi/(s-1)
        let mut rng = rng();
        let s = 3.5;
        let n = 200_000;
        let (mut acc, mut acc2) = (0.0, 0.0);
        for _ in 0..n {
            let d = sample_domain(1, 1, 0.3, &mut rng).unwrap();
            let v = d.weight * (1.0 - d.z[(0, 0)].norm_sqr()).powf(s - 2.0);
            acc += v;
            acc2 += v * v;
        }
        let mean = acc / n as f64;
        let se = ((acc2 / n as f64 - mean * mean) / n as f64).sqrt();
        let exact = std::f64::consts::PI / (s - 1.0);
        assert!((mean - exact).abs() < 3.0 * se + 1e-12, "{mean} vs {exact} (se {se})");
    }

    #[test]
    fn rejection_sampler_volume() {
        // volume of D_{2,2} is pi^4 / 12 (Hua)
        let mut rng = rng();
        let n = 200_000;
        let (mut acc, mut acc2) = (0.0, 0.0);
        for _ in 0..n {
            let d = sample_domain(2, 2, 0.0, &mut rng).unwrap();
            if d.weight > 0.0 {
                assert!(is_positive_definite(
                    &Mat::identity(2).sub(&(&d.z * &d.z.adjoint()))
                ));
            }
            acc += d.weight;
            acc2 += d.weight * d.weight;
        }
        let mean = acc / n as f64;
        let se = ((acc2 / n as f64 - mean * mean) / n as f64).sqrt();
        let exact = std::f64::consts::PI.powi(4) / 12.0;
        assert!((mean - exact).abs() < 3.0 * se, "{mean} vs {exact} (se {se})");
    }

    #[test]
    fn sampled_points_are_in_domain() {
        let mut rng = rng();
        for (p, q) in [(1, 1), (3, 1), (1, 2), (2, 3)] {
            for _ in 0..500 {
                let d = sample_domain(p, q, 0.5, &mut rng).unwrap();
                assert!(det_one_minus_zzstar(&d.z) > 0.0);
            }
        }
    }

    #[test]
    fn non_integrable_exponent_rejected() {
        let mut rng = rng();
        assert!(matches!(
            sample_domain(1, 1, -1.0, &mut rng),
            Err(GroupError::NonIntegrable { .. })
        ));
    }
}
