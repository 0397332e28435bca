//! Identity suites: the `b_t` route, the `a_t` closed form, highest-weight
//! vectors, Schur orthogonality on `U(m)` and the formal-degree ratio.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::{genuine_char, GLWeight};
use crate::fock::{
    exact_unitary_cover, harmonic_hwv, highest_weight_check, omega_at, omega_at_kernel,
    omega_matcoef, omega_matcoef_graded, prop61_lhs, AtParams, FockPoly,
};
use crate::group::{haar_unitary, CoverElement};
use crate::scalar::{gaussian, C64};
use crate::weights::{
    classify_theta, closed_s, dual_sigma, formal_degree_product, weyl_dim, ClosedValue,
    HCParameter, HalfInt, ThetaCase,
};
use crate::GaussianRational;

use super::{judge_mc, monte_carlo, Estimate, McConfig, Result, Verdict};

#[derive(Debug, Clone, PartialEq)]
pub struct Prop61Row {
    pub lambda: HCParameter,
    pub case: ThetaCase,
    pub trials: usize,
    /// Largest relative gap between the two routes over the float trials.
    pub max_rel_err: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prop61Report {
    pub rows: Vec<Prop61Row>,
}

impl Prop61Report {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.rows.iter().all(|r| r.verdict.is_pass()))
    }
}

/// Compares the `b_t` route with the `a_t` route at `trials` random
/// `(t, k, k')` per `lambda` in floating point.
pub fn verify_prop61(lambdas: &[HCParameter], trials: usize, seed: u64, rel_tol: f64) -> Result<Prop61Report> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for (idx, lambda) in lambdas.iter().enumerate() {
        let theta = classify_theta(lambda)?;
        let phi = harmonic_hwv::<C64>(&theta)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(idx as u64);
        let mut worst: f64 = 0.0;
        for _ in 0..trials {
            let t: f64 = rng.random_range(0.0..2.0);
            let k = CoverElement::random_k(theta.n, &mut rng);
            let kp = CoverElement::random_k(theta.n, &mut rng);
            let rhs = omega_matcoef(&kp, t, &k, &theta, &phi)?;
            let lhs = prop61_lhs(&kp, &AtParams::from_t(t), &k, &theta, &phi)?.to_c64();
            let scale = rhs.norm().max(lhs.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max((lhs - rhs).norm() / scale);
        }
        rows.push(Prop61Row {
            lambda: lambda.clone(),
            case: theta.case,
            trials,
            max_rel_err: worst,
            verdict: Verdict::from_bool(worst <= rel_tol),
        });
    }
    Ok(Prop61Report { rows })
}

/// Rational points `(cosh t, tanh t)` from Pythagorean triples.
const TRIPLES: [(i64, i64, i64); 5] = [(3, 4, 5), (5, 12, 13), (8, 15, 17), (7, 24, 25), (20, 21, 29)];

/// The two routes in Gaussian-rational arithmetic with exact unitaries;
/// true when they agree identically in every trial.
pub fn verify_prop61_exact(lambda: &HCParameter, trials: usize, seed: u64) -> Result<bool> {
    let theta = classify_theta(lambda)?;
    let phi = harmonic_hwv::<GaussianRational>(&theta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..trials {
        let (a, b, c) = TRIPLES[i % TRIPLES.len()];
        let at = AtParams::new(gaussian((c, a), (0, 1)), gaussian((b, c), (0, 1)))?;
        let k = exact_unitary_cover(theta.n, &mut rng);
        let kp = exact_unitary_cover(theta.n, &mut rng);
        let rhs = omega_matcoef_graded(&kp, &at, &k, &theta, &phi)?;
        let lhs = prop61_lhs(&kp, &at, &k, &theta, &phi)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct AtReport {
    pub n: usize,
    pub max_degree: u32,
    pub monomials: usize,
    /// Monomials where the closed form and the kernel integration differ.
    pub mismatches: Vec<String>,
}

impl AtReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.mismatches.is_empty())
    }
}

fn monomials_up_to(n: usize, max_degree: u32) -> Vec<Vec<u8>> {
    let nv = (n + 1) * (n + 1);
    let mut out = Vec::new();
    let mut e = vec![0u8; nv];
    fn rec(i: usize, left: u32, e: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if i == e.len() {
            out.push(e.clone());
            return;
        }
        for d in 0..=left {
            e[i] = d as u8;
            rec(i + 1, left - d, e, out);
        }
        e[i] = 0;
    }
    rec(0, max_degree, &mut e, &mut out);
    out
}

/// Closed-form `omega(a_t)` against kernel integration for every monomial
/// of degree at most `max_degree`, at `cosh t = 5/3` exactly.
pub fn verify_at(n: usize, max_degree: u32) -> Result<AtReport> {
    let at = AtParams::new(gaussian((5, 3), (0, 1)), gaussian((4, 5), (0, 1)))?;
    let monos = monomials_up_to(n, max_degree);
    let mut mismatches = Vec::new();
    for e in &monos {
        let f = FockPoly::<GaussianRational>::monomial(n, e.clone(), gaussian((1, 1), (0, 1)));
        if omega_at(&at, &f) != omega_at_kernel(&at, &f) {
            mismatches.push(format!("{e:?}"));
        }
    }
    Ok(AtReport {
        n,
        max_degree,
        monomials: monos.len(),
        mismatches,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighestWeightRow {
    pub lambda: HCParameter,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// [`highest_weight_check`] in exact arithmetic for each `lambda`.
pub fn verify_highest_weights(lambdas: &[HCParameter]) -> Result<Vec<HighestWeightRow>> {
    lambdas
        .iter()
        .map(|lambda| {
            let theta = classify_theta(lambda)?;
            let phi = harmonic_hwv::<GaussianRational>(&theta)?;
            let report = highest_weight_check(&phi, &theta)?;
            Ok(HighestWeightRow {
                lambda: lambda.clone(),
                passed: report.passed(),
                failures: report.failures().iter().map(|l| l.direction.clone()).collect(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurRow {
    pub weight: Vec<HalfInt>,
    pub estimate: Estimate,
    pub verdict: Verdict,
}

/// Monte Carlo `int_{U(m)} |chi|^2 dk` against 1 for each weight.
pub fn verify_schur(weights: &[Vec<HalfInt>], cfg: &McConfig) -> Result<Vec<SchurRow>> {
    weights
        .iter()
        .map(|w| {
            let gl = GLWeight::from_halfints(w)?;
            let m = w.len();
            let estimate = monte_carlo(cfg, |rng| {
                let u = haar_unitary(m, rng);
                let zeta = u.det().sqrt();
                let c = genuine_char(&gl, &u, &zeta)?;
                Ok(C64::new(c.norm_sqr(), 0.0))
            })?;
            let (_, verdict) = judge_mc(&estimate, 1.0, None);
            Ok(SchurRow {
                weight: w.clone(),
                estimate,
                verdict,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalDegreeRow {
    pub lambda: HCParameter,
    pub dim: u64,
    pub closed_s: ClosedValue,
    pub product: BigRational,
    /// `dim / closed_S(Lambda^vee, 0) / prod |lambda_i - lambda_j|`.
    pub ratio: ClosedValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FormalDegreeReport {
    pub rows: Vec<FormalDegreeRow>,
    /// First pair of indices whose ratios differ.
    pub mismatch: Option<(usize, usize)>,
}

impl FormalDegreeReport {
    pub fn verdict(&self) -> Verdict {
        Verdict::from_bool(self.mismatch.is_none())
    }
}

/// Checks that `dim sigma / S_{Lambda^vee, 0}` is proportional to
/// `prod_{i<j} |lambda_i - lambda_j|` with a `lambda`-independent constant.
pub fn verify_formal_degree(lambdas: &[HCParameter]) -> Result<FormalDegreeReport> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for lambda in lambdas {
        let theta = classify_theta(lambda)?;
        if let Some(first) = rows.first() {
            let first: &FormalDegreeRow = first;
            if first.lambda.n() != theta.n {
                return Err(super::VerifyError::InvalidConfig(
                    "all lambdas must have the same n".into(),
                ));
            }
        }
        let dim = weyl_dim(lambda);
        let s0 = closed_s(theta.n, 1, &dual_sigma(&theta), &BigRational::from_integer(BigInt::from(0)))?;
        let product = formal_degree_product(lambda);
        let ratio = (&ClosedValue::rational(BigRational::from_integer(BigInt::from(dim))) / &s0)
            .scale(&product.recip());
        rows.push(FormalDegreeRow {
            lambda: lambda.clone(),
            dim,
            closed_s: s0,
            product,
            ratio,
        });
    }
    let mismatch = (1..rows.len())
        .find(|&i| rows[i].ratio != rows[0].ratio)
        .map(|i| (0, i));
    Ok(FormalDegreeReport { rows, mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::admissible_sweep;

    fn lam(s: &str) -> HCParameter {
        HCParameter::parse(s).unwrap()
    }

    #[test]
    fn formal_degree_examples() {
        let rep = verify_formal_degree(&[lam("3/2,1/2"), lam("5/2,1/2")]).unwrap();
        assert!(rep.verdict().is_pass());
        assert_eq!(rep.rows[0].ratio, ClosedValue::new(BigRational::new(1.into(), 1.into()), -1));
        let single = verify_formal_degree(&[lam("7/2,1/2")]).unwrap();
        assert!(single.verdict().is_pass());
    }

    #[test]
    fn formal_degree_over_sweeps() {
        for n in 1..=3 {
            let sweep: Vec<HCParameter> = admissible_sweep(n, 9).into_iter().take(8).collect();
            assert!(sweep.len() >= 5);
            assert!(verify_formal_degree(&sweep).unwrap().verdict().is_pass(), "n = {n}");
        }
    }

    #[test]
    fn at_suite_small() {
        let rep = verify_at(1, 3).unwrap();
        assert_eq!(rep.monomials, 35);
        assert!(rep.verdict().is_pass());
    }

    #[test]
    fn intertwining_suite_passes_on_case_one() {
        let rep = verify_prop61(&[lam("3/2,1/2"), lam("5/2,3/2,1/2")], 4, 1, 1e-9).unwrap();
        assert!(rep.verdict().is_pass(), "{rep:?}");
        assert!(verify_prop61_exact(&lam("3/2,1/2"), 2, 1).unwrap());
    }

    #[test]
    fn schur_small() {
        let cfg = McConfig::new(20_000, 2).with_workers(2);
        let w = vec![HalfInt::from_twice(3), HalfInt::from_twice(-1)];
        let rows = verify_schur(&[w], &cfg).unwrap();
        assert!(rows[0].verdict.is_pass(), "{rows:?}");
    }
}
