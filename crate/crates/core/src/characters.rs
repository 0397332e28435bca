//! Characters of `GL_m` via Schur polynomials, half-integral determinant
//! twists on the double cover, and the canonical matrix coefficient
//! `psi_pi(g) = tr sigma(theta_z k)`.

use thiserror::Error;

use crate::group::{self, CartanParts, CoverElement, DomainPoint, GroupElement, GroupError};
use crate::linalg::Mat;
use crate::scalar::{Scalar, C64};
use crate::weights::{BlockWeight, HalfInt};

const ROOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CharacterError {
    #[error("weight of length {weight} does not match {eigs} eigenvalues")]
    LengthMismatch { weight: usize, eigs: usize },
    #[error("weight is not weakly decreasing")]
    NotDominant,
    #[error("zero determinant with negative shift {shift}")]
    ZeroDeterminant { shift: i64 },
    #[error("carried root does not square to the determinant: residual {residual:e}")]
    InconsistentRoot { residual: f64 },
    #[error("weight entries are not congruent mod 1")]
    MixedClass,
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub type Result<T, E = CharacterError> = std::result::Result<T, E>;

/// Elementary symmetric functions `e_0..=e_m` of a list.
pub fn elementary_from_eigs<T: Scalar>(eigs: &[T]) -> Vec<T> {
    let mut e = vec![T::zero(); eigs.len() + 1];
    e[0] = T::one();
    for (k, x) in eigs.iter().enumerate() {
        for j in (1..=k + 1).rev() {
            e[j] = e[j].clone() + e[j - 1].clone() * x.clone();
        }
    }
    e
}

/// `h_0..=h_max` from `e_0..=e_m` by `h_k = sum_i (-1)^{i-1} e_i h_{k-i}`.
fn complete_from_elementary<T: Scalar>(e: &[T], max: usize) -> Vec<T> {
    let m = e.len() - 1;
    let mut h = vec![T::one()];
    for k in 1..=max {
        let mut acc = T::zero();
        for i in 1..=k.min(m) {
            let term = e[i].clone() * h[k - i].clone();
            acc = if i % 2 == 1 { acc + term } else { acc - term };
        }
        h.push(acc);
    }
    h
}

/// Schur polynomial `s_mu` from the elementary symmetric functions of the
/// variables (`e.len() == mu.len() + 1`), by Jacobi-Trudi.
pub fn schur_from_elementary<T: Scalar>(mu: &[i64], e: &[T]) -> Result<T> {
    let m = mu.len();
    if e.len() != m + 1 {
        return Err(CharacterError::LengthMismatch {
            weight: m,
            eigs: e.len() - 1,
        });
    }
    if mu.windows(2).any(|w| w[0] < w[1]) {
        return Err(CharacterError::NotDominant);
    }
    if m == 0 {
        return Ok(T::one());
    }
    let shift = mu[m - 1];
    let det = e[m].clone();
    if shift < 0 && det.is_zero() {
        return Err(CharacterError::ZeroDeterminant { shift });
    }
    let reduced: Vec<usize> = mu.iter().map(|&x| (x - shift) as usize).collect();
    let len = reduced.iter().take_while(|&&x| x > 0).count();
    let h = complete_from_elementary(e, reduced.first().copied().unwrap_or(0) + len);
    let jt = Mat::from_fn(len, len, |i, j| {
        let k = reduced[i] as i64 - i as i64 + j as i64;
        if k < 0 {
            T::zero()
        } else {
            h[k as usize].clone()
        }
    });
    let s = if len == 0 { T::one() } else { jt.det() };
    Ok(s * det.powi(shift))
}

/// `s_mu(x_1, ..., x_m)`.
pub fn schur_eval<T: Scalar>(mu: &[i64], eigs: &[T]) -> Result<T> {
    if mu.len() != eigs.len() {
        return Err(CharacterError::LengthMismatch {
            weight: mu.len(),
            eigs: eigs.len(),
        });
    }
    schur_from_elementary(mu, &elementary_from_eigs(eigs))
}

/// `s_mu` at the eigenvalues of `m`, read off its characteristic polynomial.
pub fn schur_of_matrix<T: Scalar>(mu: &[i64], m: &Mat<T>) -> Result<T> {
    if mu.len() != m.rows() {
        return Err(CharacterError::LengthMismatch {
            weight: mu.len(),
            eigs: m.rows(),
        });
    }
    schur_from_elementary(mu, &m.eigen_elementary())
}

/// Highest weight `parts + (twist2/2, ..., twist2/2)` of a `GL_m` (or double
/// cover) representation; `twist2` is 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GLWeight {
    pub parts: Vec<i64>,
    pub twist2: i64,
}

impl GLWeight {
    pub fn new(parts: Vec<i64>, twist2: i64) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(CharacterError::NotDominant);
        }
        let shift = twist2.div_euclid(2);
        Ok(GLWeight {
            parts: parts.into_iter().map(|p| p + shift).collect(),
            twist2: twist2.rem_euclid(2),
        })
    }

    pub fn from_halfints(w: &[HalfInt]) -> Result<Self> {
        let twist2 = w.first().map_or(0, |h| h.twice().rem_euclid(2));
        if w.iter().any(|h| h.twice().rem_euclid(2) != twist2) {
            return Err(CharacterError::MixedClass);
        }
        Self::new(w.iter().map(|h| (h.twice() - twist2) / 2).collect(), twist2)
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn is_genuine(&self) -> bool {
        self.twist2 == 1
    }

    /// Dimension of the representation.
    pub fn dim(&self) -> u64 {
        let hw: Vec<HalfInt> = self.parts.iter().map(|&p| HalfInt::from_int(p)).collect();
        crate::weights::weyl_dim_highest(&hw)
    }
}

/// `s_parts(g) * zeta^{twist2}` where `zeta^2 = det g`.
pub fn genuine_char<T: Scalar>(w: &GLWeight, g: &Mat<T>, zeta: &T) -> Result<T> {
    let e = g.eigen_elementary();
    let det = e[e.len() - 1].clone();
    let sq = zeta.clone() * zeta.clone();
    // the elementary functions carry an error of order |g|^m, not |det g|
    let scale = g.frobenius().powi(g.rows() as i32).max(1.0);
    let residual = (sq.clone() - det.clone()).modulus();
    if !(sq == det || (!T::EXACT && residual <= ROOT_TOL * scale)) {
        return Err(CharacterError::InconsistentRoot { residual });
    }
    let s = schur_from_elementary(&w.parts, &e)?;
    Ok(if w.twist2 == 1 { s * zeta.clone() } else { s })
}

/// `tr sigma(x)` for `sigma = sigma_1 (x) sigma_2` on `K_C = GL_n x GL_1`.
pub fn block_char(
    first: &GLWeight,
    second: &GLWeight,
    x: &CoverElement,
) -> Result<C64> {
    let a = genuine_char(first, &x.block_n, &x.zeta_n)?;
    let b = genuine_char(second, &Mat::diag(&[x.block_1]), &x.zeta_1)?;
    Ok(a * b)
}

/// Which carried square roots to use for `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZetaChoice {
    #[default]
    Principal,
    Flipped,
}

impl ZetaChoice {
    pub fn apply(self, k: &CoverElement) -> CoverElement {
        match self {
            ZetaChoice::Principal => k.clone(),
            ZetaChoice::Flipped => k.flipped(),
        }
    }
}

fn lambda_weights(lambda: &BlockWeight) -> Result<(GLWeight, GLWeight)> {
    Ok((
        GLWeight::from_halfints(&lambda.first)?,
        GLWeight::from_halfints(&lambda.second)?,
    ))
}

/// `tr sigma_Lambda(theta_z k)` from Cartan coordinates.
pub fn psi_at(z: &DomainPoint, k: &CoverElement, lambda: &BlockWeight) -> Result<C64> {
    let (w1, w2) = lambda_weights(lambda)?;
    block_char(&w1, &w2, &group::theta_z(z).mul(k))
}

/// `psi_pi(g) = tr sigma_Lambda(theta_z k)` where `g = h_z k`.
pub fn psi_pi(g: &GroupElement, lambda: &BlockWeight, choice: ZetaChoice) -> Result<C64> {
    let parts = group::cartan_decompose(g)?;
    psi_at(&parts.z, &choice.apply(&parts.k), lambda)
}

/// The same coefficient through `tr sigma_Lambda(theta_t k_z^{-1} k k_z)`.
pub fn psi_pi_conjugated(
    g: &GroupElement,
    lambda: &BlockWeight,
    choice: ZetaChoice,
) -> Result<C64> {
    let parts = group::cartan_decompose(g)?;
    psi_from_parts_conjugated(&parts, lambda, choice)
}

pub fn psi_from_parts_conjugated(
    parts: &CartanParts,
    lambda: &BlockWeight,
    choice: ZetaChoice,
) -> Result<C64> {
    let (w1, w2) = lambda_weights(lambda)?;
    let kz = &parts.k_z;
    let x = group::theta_t(parts.z.n(), parts.t)
        .mul(&kz.inverse()?)
        .mul(&choice.apply(&parts.k))
        .mul(kz);
    block_char(&w1, &w2, &x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::{classify_theta, weyl_dim_highest, HCParameter};
    use num_rational::BigRational;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// `det(x_i^{mu_j + m - j}) / det(x_i^{m - j})`, valid for distinct x.
    fn bialternant(mu: &[i64], x: &[C64]) -> C64 {
        let m = x.len();
        let num = Mat::from_fn(m, m, |i, j| x[i].powi((mu[j] + (m - 1 - j) as i64) as i32));
        let den = Mat::from_fn(m, m, |i, j| x[i].powi((m - 1 - j) as i32));
        num.det() / den.det()
    }

    #[test]
    fn standard_and_small_shapes() {
        let (x, y) = (c(0.3, 1.2), c(-2.0, 0.5));
        assert!(schur_eval(&[1, 0], &[x, y]).unwrap().approx_eq(&(x + y), 1e-14));
        let ones = [C64::one(), C64::one()];
        assert!(schur_eval(&[2, 1], &ones).unwrap().approx_eq(&c(2.0, 0.0), 1e-14));
        // s_{(0,-1)}(x,y) = 1/x + 1/y
        assert!(schur_eval(&[0, -1], &[x, y])
            .unwrap()
            .approx_eq(&(x.inv() + y.inv()), 1e-14));
    }

    #[test]
    fn exact_schur_at_ones_is_dimension() {
        let shapes: [&[i64]; 5] = [&[3, 1, 0], &[2, 2, -1], &[4, 0, 0, -2], &[1, 1], &[5, 3, 3, 0]];
        for mu in shapes {
            let ones = vec![BigRational::one(); mu.len()];
            let s = schur_eval(mu, &ones).unwrap();
            let hw: Vec<HalfInt> = mu.iter().map(|&p| HalfInt::from_int(p)).collect();
            assert_eq!(s, BigRational::from_integer(weyl_dim_highest(&hw).into()), "{mu:?}");
        }
    }

    #[test]
    fn matches_bialternant_at_distinct_points() {
        let x = [c(0.7, 0.1), c(-0.4, 0.9), c(1.3, -0.6)];
        for mu in [[2, 1, 0], [3, 3, -1], [0, -1, -4], [5, 2, 2]] {
            let jt = schur_eval(&mu, &x).unwrap();
            assert!(jt.approx_eq(&bialternant(&mu, &x), 1e-11), "{mu:?}");
        }
    }

    #[test]
    fn symmetric_under_permutation() {
        let x = [c(0.7, 0.1), c(-0.4, 0.9), c(1.3, -0.6)];
        let perm = [x[2], x[0], x[1]];
        for mu in [[2, 1, 0], [4, -1, -2]] {
            let a = schur_eval(&mu, &x).unwrap();
            let b = schur_eval(&mu, &perm).unwrap();
            assert!(a.approx_eq(&b, 1e-12));
        }
    }

    #[test]
    fn repeated_eigenvalues_match_perturbation_limit() {
        // bialternant at x + eps*d, Richardson-extrapolated to eps = 0
        let base = [c(0.8, 0.3), c(0.8, 0.3), c(-0.5, 0.2)];
        let dir = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)];
        for mu in [[2, 1, 0], [3, 0, -1]] {
            let at = |eps: f64| {
                let x: Vec<C64> = base.iter().zip(&dir).map(|(b, d)| b + d * eps).collect();
                bialternant(&mu, &x)
            };
            let h = 1e-4;
            let limit = (at(h / 2.0) * 2.0) - at(h);
            let jt = schur_eval(&mu, &base).unwrap();
            assert!((jt - limit).norm() <= 1e-6 * jt.norm(), "{mu:?}: {jt} vs {limit}");
        }
    }

    #[test]
    fn zero_determinant_with_negative_shift() {
        let e = elementary_from_eigs(&[C64::zero(), C64::one()]);
        assert_eq!(
            schur_from_elementary(&[0, -1], &e),
            Err(CharacterError::ZeroDeterminant { shift: -1 })
        );
    }

    #[test]
    fn matrix_route_matches_eigenvalue_route() {
        let m = Mat::from_rows(2, 2, vec![c(1.0, 0.5), c(0.2, 0.0), c(-0.3, 1.0), c(0.4, -0.2)]);
        let tr = m.trace();
        let det = m.det();
        // s_{(1,1)} = det, s_{(2,0)} = tr^2 - det
        assert!(schur_of_matrix(&[1, 1], &m).unwrap().approx_eq(&det, 1e-14));
        assert!(schur_of_matrix(&[2, 0], &m)
            .unwrap()
            .approx_eq(&(tr * tr - det), 1e-14));
    }

    #[test]
    fn half_det_on_u1() {
        let th = 2.1_f64;
        let w = GLWeight::new(vec![0], 1).unwrap();
        let g = Mat::diag(&[C64::from_polar(1.0, th)]);
        let zeta = C64::from_polar(1.0, th / 2.0);
        let v = genuine_char(&w, &g, &zeta).unwrap();
        assert!(v.approx_eq(&zeta, 1e-15));
        let flipped = genuine_char(&w, &g, &-zeta).unwrap();
        assert_eq!(flipped, -v);
        assert!(genuine_char(&w, &g, &c(1.0, 0.0)).is_err());
    }

    #[test]
    fn integral_twist_ignores_root_sign() {
        let w = GLWeight::from_halfints(&[HalfInt::from_int(2), HalfInt::from_int(-1)]).unwrap();
        assert_eq!(w.twist2, 0);
        let g = Mat::from_rows(2, 2, vec![c(1.0, 0.5), c(0.2, 0.0), c(-0.3, 1.0), c(0.4, -0.2)]);
        let zeta = g.det().sqrt();
        assert_eq!(
            genuine_char(&w, &g, &zeta).unwrap(),
            genuine_char(&w, &g, &-zeta).unwrap()
        );
    }

    #[test]
    fn glweight_canonical_form() {
        let w = GLWeight::from_halfints(&[HalfInt::from_twice(5), HalfInt::from_twice(-3)]).unwrap();
        assert_eq!(w, GLWeight { parts: vec![2, -2], twist2: 1 });
        assert_eq!(GLWeight::new(vec![1, 0], 3).unwrap(), GLWeight { parts: vec![2, 1], twist2: 1 });
        assert!(GLWeight::from_halfints(&[HalfInt::from_twice(5), HalfInt::from_twice(2)]).is_err());
    }

    #[test]
    fn positive_diagonal_gives_positive_value() {
        let w = GLWeight::from_halfints(&[HalfInt::from_twice(7), HalfInt::from_twice(-1)]).unwrap();
        let g = Mat::diag(&[c(2.0, 0.0), c(0.3, 0.0)]);
        let zeta = c(0.6_f64.sqrt(), 0.0);
        let v = genuine_char(&w, &g, &zeta).unwrap();
        assert!(v.re > 0.0 && v.im.abs() < 1e-15);
    }

    fn lambda_block(s: &str) -> BlockWeight {
        classify_theta(&HCParameter::parse(s).unwrap()).unwrap().blattner
    }

    #[test]
    fn psi_at_identity_is_dimension() {
        let lam = lambda_block("7/2,3/2,1/2");
        let v = psi_pi(&GroupElement::identity(2), &lam, ZetaChoice::Principal).unwrap();
        assert!(v.approx_eq(&c(2.0, 0.0), 1e-14));
    }

    #[test]
    fn psi_on_a_t_for_n1() {
        let lam = lambda_block("3/2,1/2");
        let t = 0.9_f64;
        let v = psi_pi(&group::a_t(1, t), &lam, ZetaChoice::Principal).unwrap();
        assert!(v.approx_eq(&c(t.cosh().powi(-2), 0.0), 1e-14));
    }

    #[test]
    fn psi_routes_and_conjugation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for s in ["5/2,3/2,1/2", "7/2,1/2,-3/2", "1/2,-3/2,-5/2,-9/2"] {
            let lam = lambda_block(s);
            let n = lam.first.len();
            for _ in 0..100 {
                let (g, _, _) = group::random_group_element(n, 0.9, &mut rng);
                let a = psi_pi(&g, &lam, ZetaChoice::Principal).unwrap();
                let b = psi_pi_conjugated(&g, &lam, ZetaChoice::Principal).unwrap();
                assert!((a - b).norm() <= 1e-9 * a.norm().max(1e-300), "{s}");
                let k = CoverElement::random_k(n, &mut rng).to_group();
                let conj = k.mul(&g).mul(&k.inverse());
                let d = psi_pi(&conj, &lam, ZetaChoice::Principal).unwrap();
                assert!((a - d).norm() <= 1e-9 * a.norm(), "{s}: {a} vs {d}");
            }
        }
    }
}
