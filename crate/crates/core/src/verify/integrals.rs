//! The scalar integrals `S_{sigma,s}`, `T_s` and the zeta integral.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::characters::{block_char, genuine_char, psi_from_parts_conjugated, GLWeight, ZetaChoice};
use crate::fock::{bargmann_inner, bargmann_inner_c64, harmonic_hwv, omega_k, FockPoly};
use crate::group::{b_z, sample_domain, theta_z, CartanParts, CoverElement, DomainPoint, RadialSampler};
use crate::linalg::Mat;
use crate::scalar::C64;
use crate::weights::{
    classify_theta, closed_s, closed_t, s_factor_offsets, t_factor_offsets, zeta_closed, ClosedValue,
    HCParameter, SigmaParams, ThetaCase, ThetaDatum,
};
use crate::GaussianRational;

use super::quadrature::radial_quadrature;
use super::{
    check_poles, judge_mc, judge_quadrature, monte_carlo, Estimate, McConfig, Outcome, Result,
    VerifyError,
};

/// Gauss-Legendre order of the coarse radial rule (the fine rule doubles it).
const QUAD_ORDER: usize = 64;
const QUAD_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    MonteCarlo,
    Quadrature,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::MonteCarlo => "monte-carlo",
            Method::Quadrature => "quadrature",
        })
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `chi_1((1_p - z z^*)^{-1}) chi_2(1_q - z^* z) det(1_p - z z^*)^{s-p-q} / dim`,
/// the `S_{sigma,s}` integrand against Lebesgue measure.
pub fn s_integrand(z: &Mat<C64>, w1: &GLWeight, w2: &GLWeight, s: f64) -> Result<C64> {
    let (p, q) = (z.rows(), z.cols());
    let zs = z.adjoint();
    let m1 = Mat::identity(p).sub(&(z * &zs));
    let m2 = Mat::identity(q).sub(&(&zs * z));
    let det = m1.det().re;
    let inv = m1.inverse().ok_or(crate::group::GroupError::SingularBlock)?;
    // both blocks are positive definite, so the positive roots are the
    // continuous branch from z = 0
    let c1 = genuine_char(w1, &inv, &real(inv.det().re.sqrt()))?;
    let c2 = genuine_char(w2, &m2, &real(m2.det().re.sqrt()))?;
    let dim = (w1.dim() * w2.dim()) as f64;
    Ok(c1 * c2 * det.powf(s - (p + q) as f64) / dim)
}

fn boundary_point(p: usize, q: usize, rho: f64) -> Mat<C64> {
    let mut z = Mat::zeros(p, q);
    z[(0, 0)] = real(rho.sqrt());
    z
}

fn finish(
    estimate: Estimate,
    closed: ClosedValue,
    method: Method,
    rel_tol: Option<f64>,
) -> Outcome {
    let (rel_err, verdict) = match method {
        Method::MonteCarlo => judge_mc(&estimate, closed.to_f64(), rel_tol),
        Method::Quadrature => {
            judge_quadrature(&estimate, closed.to_f64(), rel_tol.unwrap_or(QUAD_TOL))
        }
    };
    Outcome {
        estimate,
        closed,
        method,
        rel_err,
        verdict,
    }
}

fn quadrature_estimate<F>(m: usize, seed: u64, f: F) -> Result<Estimate>
where
    F: Fn(f64) -> Result<C64>,
{
    let start = std::time::Instant::now();
    let (value, err) = radial_quadrature(m, QUAD_ORDER, f)?;
    Ok(Estimate {
        value: value.into(),
        stderr: err,
        samples: 3 * QUAD_ORDER as u64,
        seed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Checks `S_{sigma,s}` on `D_{p,q}` against [`closed_s`].
pub fn verify_s(
    p: usize,
    q: usize,
    sigma: &SigmaParams,
    s: &BigRational,
    method: Method,
    cfg: &McConfig,
    rel_tol: Option<f64>,
) -> Result<Outcome> {
    let closed = closed_s(p, q, sigma, s)?;
    let min_factor = check_poles(&s_factor_offsets(p, q, sigma)?, s)?;
    let (k, i) = sigma.weights(p, q);
    let w1 = GLWeight::from_halfints(&k)?;
    let w2 = GLWeight::from_halfints(&i)?;
    let sf = to_f64(s);
    let estimate = match method {
        Method::Quadrature => {
            if p.min(q) != 1 {
                return Err(VerifyError::InvalidConfig(
                    "radial quadrature needs min(p, q) = 1".into(),
                ));
            }
            quadrature_estimate(p.max(q), cfg.seed, |rho| {
                s_integrand(&boundary_point(p, q, rho), &w1, &w2, sf)
            })?
        }
        Method::MonteCarlo => {
            let e = min_factor - 1.0;
            monte_carlo(cfg, |rng| {
                let d = sample_domain(p, q, e, rng)?;
                if d.weight == 0.0 {
                    return Ok(real(0.0));
                }
                Ok(s_integrand(&d.z, &w1, &w2, sf)? * d.weight)
            })?
        }
    };
    Ok(finish(estimate, closed, method, rel_tol))
}

fn bz_signed(z: &DomainPoint, sign: i32) -> Result<CoverElement> {
    let b = b_z(z);
    Ok(if sign > 0 { b } else { b.inverse()? })
}

/// `tr sigma_{Lambda^vee}(theta_z^{-1} b_z^{+-1}) / dim * det(1 - z z^*)^{s-n-1}`.
pub fn t_integrand(z: &DomainPoint, theta: &ThetaDatum, s: f64) -> Result<C64> {
    let w1 = GLWeight::from_halfints(&theta.dual.first)?;
    let w2 = GLWeight::from_halfints(&theta.dual.second)?;
    let elem = theta_z(z).inverse()?.mul(&bz_signed(z, theta.bt_sign())?);
    let dim = (w1.dim() * w2.dim()) as f64;
    let n = theta.n as f64;
    Ok(block_char(&w1, &w2, &elem)? * (1.0 - z.norm_sqr()).powf(s - n - 1.0) / dim)
}

/// Checks `T_s^{+-}` against [`closed_t`].
pub fn verify_t(
    theta: &ThetaDatum,
    s: &BigRational,
    method: Method,
    cfg: &McConfig,
    rel_tol: Option<f64>,
) -> Result<Outcome> {
    let closed = closed_t(theta, s)?;
    let min_factor = check_poles(&t_factor_offsets(theta), s)?;
    let n = theta.n;
    let sf = to_f64(s);
    let estimate = match method {
        Method::Quadrature => quadrature_estimate(n, cfg.seed, |rho| {
            let mut v = vec![real(0.0); n];
            v[0] = real(rho.sqrt());
            t_integrand(&DomainPoint::new(v)?, theta, sf)
        })?,
        Method::MonteCarlo => {
            let sampler = RadialSampler::new(n, min_factor - 1.0)?;
            monte_carlo(cfg, |rng| {
                let (v, w) = sampler.sample(rng);
                Ok(t_integrand(&DomainPoint::new(v)?, theta, sf)? * w)
            })?
        }
    };
    Ok(finish(estimate, closed, method, rel_tol))
}

/// Boundary exponent of the zeta integrand in `1 - |z|^2`, used as the
/// radial importance exponent.
pub fn zeta_importance_exponent(theta: &ThetaDatum) -> f64 {
    let n = theta.n;
    let lam = &theta.blattner;
    let half = (n as f64 + 1.0) / 2.0;
    let e = match theta.case {
        ThetaCase::CaseI => lam.first[n - 1].to_f64() - half,
        ThetaCase::CaseII => {
            (lam.first[n - 1].to_f64() - lam.first[0].to_f64()) / 2.0 - lam.second[0].to_f64() - half
        }
    };
    e.max(-0.5)
}

fn flip(k: &CoverElement, choice: ZetaChoice) -> CoverElement {
    choice.apply(k)
}

/// `(cosh t)^{-n-1} <sigma_{Lambda^vee}(b_z^{+-1} k) phi, phi> psi_pi(h_z k)`
/// against Lebesgue `dz`. `choice` flips every carried root at once
/// (`b_z`, `k` and the frame `k_z`).
pub fn zeta_integrand(
    z: &DomainPoint,
    k: &CoverElement,
    theta: &ThetaDatum,
    phi: &FockPoly<C64>,
    choice: ZetaChoice,
) -> Result<C64> {
    let n = theta.n;
    let k = flip(k, choice);
    let b = flip(&bz_signed(z, theta.bt_sign())?, choice);
    let img = omega_k(&b.mul(&k), phi, theta)?;
    let coeff = bargmann_inner_c64(&img, phi);
    let parts = CartanParts {
        z: z.clone(),
        t: z.t(),
        k_z: flip(&CoverElement::principal(z.frame(), real(1.0))?, choice),
        k,
    };
    let psi = psi_from_parts_conjugated(&parts, &theta.blattner, ZetaChoice::Principal)?;
    let half = (n as f64 + 1.0) / 2.0;
    Ok(coeff * psi * (1.0 - z.norm_sqr()).powf(half - 2.0 * half))
}

/// After the `K` integral:
/// `<sigma_{Lambda^vee}(theta_z^{-1} b_z^{+-1}) phi, phi> / dim` times the
/// same radial factors as [`zeta_integrand`].
pub fn zeta_reduced_integrand(z: &DomainPoint, theta: &ThetaDatum, phi: &FockPoly<C64>) -> Result<C64> {
    let n = theta.n;
    let elem = theta_z(z).inverse()?.mul(&bz_signed(z, theta.bt_sign())?);
    let img = omega_k(&elem, phi, theta)?;
    let dim = GLWeight::from_halfints(&theta.dual.first)?.dim() as f64;
    let half = (n as f64 + 1.0) / 2.0;
    Ok(bargmann_inner_c64(&img, phi) * (1.0 - z.norm_sqr()).powf(-half) / dim)
}

/// `zeta_closed(lambda) * ||phi||^2` in exact form.
fn zeta_expected(lambda: &HCParameter, theta: &ThetaDatum) -> Result<ClosedValue> {
    let phi = harmonic_hwv::<GaussianRational>(theta)?;
    let norm = bargmann_inner(&phi, &phi)
        .as_single()
        .expect("monomial norms share one pi grade per degree");
    let norm = ClosedValue::new(norm.coef.re, norm.pi_exp);
    Ok(&zeta_closed(lambda)? * &norm)
}

fn zeta_setup(lambda: &HCParameter) -> Result<(ThetaDatum, FockPoly<C64>, ClosedValue, RadialSampler)> {
    let theta = classify_theta(lambda)?;
    let phi = harmonic_hwv::<C64>(&theta)?;
    let closed = zeta_expected(lambda, &theta)?;
    let sampler = RadialSampler::new(theta.n, zeta_importance_exponent(&theta))?;
    Ok((theta, phi, closed, sampler))
}

/// End-to-end Monte Carlo of the zeta integral over `D_{n,1} x K`.
pub fn verify_zeta(lambda: &HCParameter, cfg: &McConfig, rel_tol: Option<f64>) -> Result<Outcome> {
    verify_zeta_with(lambda, cfg, rel_tol, ZetaChoice::Principal)
}

/// [`verify_zeta`] with every carried root flipped.
pub fn verify_zeta_with(
    lambda: &HCParameter,
    cfg: &McConfig,
    rel_tol: Option<f64>,
    choice: ZetaChoice,
) -> Result<Outcome> {
    let (theta, phi, closed, sampler) = zeta_setup(lambda)?;
    let n = theta.n;
    let estimate = monte_carlo(cfg, |rng| {
        let (v, w) = sampler.sample(rng);
        let k = CoverElement::random_k(n, rng);
        Ok(zeta_integrand(&DomainPoint::new(v)?, &k, &theta, &phi, choice)? * w)
    })?;
    Ok(finish(estimate, closed, Method::MonteCarlo, rel_tol))
}

/// The zeta integral with the `K` integral done by Schur orthogonality.
pub fn verify_zeta_reduced(lambda: &HCParameter, cfg: &McConfig, rel_tol: Option<f64>) -> Result<Outcome> {
    let (theta, phi, closed, sampler) = zeta_setup(lambda)?;
    let estimate = monte_carlo(cfg, |rng| {
        let (v, w) = sampler.sample(rng);
        Ok(zeta_reduced_integrand(&DomainPoint::new(v)?, &theta, &phi)? * w)
    })?;
    Ok(finish(estimate, closed, Method::MonteCarlo, rel_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::HalfInt;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn lam(s: &str) -> HCParameter {
        HCParameter::parse(s).unwrap()
    }

    fn scalar_sigma(p: usize, kappa: i64, iota: i64) -> SigmaParams {
        SigmaParams::SecondOneDim {
            kappa: vec![HalfInt::from_int(kappa); p],
            iota: HalfInt::from_int(iota),
        }
    }

    #[test]
    fn s_quadrature_trivial_sigma() {
        // p = q = 1, kappa = iota = 0, s = 3: pi/2
        let cfg = McConfig::new(1, 0);
        let out = verify_s(1, 1, &scalar_sigma(1, 0, 0), &r(3, 1), Method::Quadrature, &cfg, None).unwrap();
        assert!((out.estimate.c64().re - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!(out.verdict.is_pass());
    }

    #[test]
    fn s_refuses_near_pole() {
        let cfg = McConfig::new(1, 0);
        let err = verify_s(1, 1, &scalar_sigma(1, 0, 0), &r(6, 5), Method::Quadrature, &cfg, None);
        assert!(matches!(err, Err(VerifyError::PoleAdjacent { .. })));
    }

    #[test]
    fn s_monte_carlo_two_by_one() {
        let sigma = SigmaParams::SecondOneDim {
            kappa: vec![HalfInt::from_int(0), HalfInt::from_int(-1)],
            iota: HalfInt::from_int(0),
        };
        let cfg = McConfig::new(40_000, 3).with_workers(2);
        let out = verify_s(2, 1, &sigma, &r(3, 1), Method::MonteCarlo, &cfg, None).unwrap();
        assert!(out.verdict.is_pass(), "{out:?}");
        let quad = verify_s(2, 1, &sigma, &r(3, 1), Method::Quadrature, &cfg, None).unwrap();
        assert!(quad.rel_err < 1e-10, "{quad:?}");
    }

    #[test]
    fn t_examples() {
        let cfg = McConfig::new(1, 0);
        let th = classify_theta(&lam("3/2,1/2")).unwrap();
        let out = verify_t(&th, &r(1, 1), Method::Quadrature, &cfg, None).unwrap();
        assert!((out.estimate.c64().re - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        let th = classify_theta(&lam("5/2,3/2,1/2")).unwrap();
        let out = verify_t(&th, &r(3, 2), Method::Quadrature, &cfg, None).unwrap();
        let pi = std::f64::consts::PI;
        assert!((out.estimate.c64().re - pi * pi / 6.0).abs() < 1e-10);
    }

    #[test]
    fn t_large_s_decays() {
        let th = classify_theta(&lam("3/2,1/2")).unwrap();
        let cfg = McConfig::new(20_000, 8).with_workers(1);
        let out = verify_t(&th, &r(60, 1), Method::MonteCarlo, &cfg, None).unwrap();
        assert!(out.verdict.is_pass());
        assert!(out.estimate.c64().norm() < 0.06);
    }

    #[test]
    fn zeta_integrand_is_constant_for_smallest_case() {
        let th = classify_theta(&lam("3/2,1/2")).unwrap();
        let phi = harmonic_hwv::<C64>(&th).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let rho: f64 = rng.random_range(0.0..0.9);
            let z = DomainPoint::new(vec![C64::from_polar(rho.sqrt(), rng.random_range(0.0..6.0))]).unwrap();
            let k = CoverElement::random_k(1, &mut rng);
            let v = zeta_integrand(&z, &k, &th, &phi, ZetaChoice::Principal).unwrap();
            let expect = (1.0 - rho) * 2.0 / std::f64::consts::PI.powi(2);
            assert!((v - real(expect)).norm() < 1e-12);
        }
    }

    #[test]
    fn zeta_flip_is_bit_identical() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for s in ["3/2,1/2", "5/2,3/2,1/2", "1/2,-3/2", "3/2,-5/2"] {
            let th = classify_theta(&lam(s)).unwrap();
            let phi = harmonic_hwv::<C64>(&th).unwrap();
            let z = DomainPoint::new((0..th.n).map(|i| C64::new(0.2 + 0.1 * i as f64, -0.15)).collect()).unwrap();
            let k = CoverElement::random_k(th.n, &mut rng);
            let a = zeta_integrand(&z, &k, &th, &phi, ZetaChoice::Principal).unwrap();
            let b = zeta_integrand(&z, &k, &th, &phi, ZetaChoice::Flipped).unwrap();
            assert_eq!(a.re.to_bits(), b.re.to_bits(), "{s}");
            assert_eq!(a.im.to_bits(), b.im.to_bits(), "{s}");
        }
    }

    #[test]
    fn zeta_small_runs_pass() {
        let cfg = McConfig::new(20_000, 7).with_workers(2);
        for s in ["3/2,1/2", "1/2,-3/2", "5/2,1/2"] {
            let out = verify_zeta(&lam(s), &cfg, None).unwrap();
            assert!(out.verdict.is_pass(), "{s}: {out:?}");
            let red = verify_zeta_reduced(&lam(s), &cfg, None).unwrap();
            assert!(red.verdict.is_pass(), "{s}: {red:?}");
        }
    }
}
