//! Numerical and exact cross-checks of the closed forms.
//!
//! Monte Carlo runs are split over a fixed number of workers. Worker `w`
//! draws from `ChaCha8Rng::seed_from_u64(seed)` on stream `w` and the partial
//! sums are reduced in worker order, so an estimate depends only on
//! `(seed, workers, samples)`.

mod integrals;
mod quadrature;
mod suites;

pub use integrals::{
    s_integrand, t_integrand, verify_s, verify_t, verify_zeta, verify_zeta_reduced, verify_zeta_with,
    zeta_importance_exponent, zeta_integrand, zeta_reduced_integrand, Method,
};
pub use quadrature::{gauss_legendre, radial_quadrature, GaussLegendre};
pub use suites::{
    verify_at, verify_formal_degree, verify_highest_weights, verify_prop61, verify_prop61_exact,
    verify_schur, AtReport, FormalDegreeReport, FormalDegreeRow, HighestWeightRow,
    Prop61Report, Prop61Row, SchurRow,
};

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::characters::CharacterError;
use crate::fock::FockError;
use crate::group::GroupError;
use crate::scalar::C64;
use crate::weights::{ClosedValue, WeightError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Character(#[from] CharacterError),
    #[error(transparent)]
    Fock(#[from] FockError),
    #[error("s is within 1/2 of a pole: factor {factor} = {value}")]
    PoleAdjacent { factor: usize, value: String },
    #[error("integral diverges: factor {factor} = {value} is negative")]
    Divergent { factor: usize, value: String },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, VerifyError>;

/// Sample count, seed and worker count of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        McConfig {
            samples,
            seed,
            workers: default_workers(),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers.max(1);
        self
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: Complex,
    /// Standard error of the mean; for quadrature, the difference between
    /// two rule orders.
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
    pub wall_time: f64,
}

/// Serializable complex number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(c: C64) -> Self {
        Complex { re: c.re, im: c.im }
    }
}

impl From<Complex> for C64 {
    fn from(c: Complex) -> Self {
        C64::new(c.re, c.im)
    }
}

impl Estimate {
    pub fn c64(&self) -> C64 {
        self.value.into()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// An estimate judged against a closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub estimate: Estimate,
    pub closed: ClosedValue,
    pub method: Method,
    pub rel_err: f64,
    pub verdict: Verdict,
}

/// Monte Carlo verdict: within three standard errors. A zero-variance
/// integrand gets an absolute floor of `1e-9 |closed|`. `rel_tol`, when
/// given, is an additional cap on the relative error.
pub fn judge_mc(estimate: &Estimate, closed: f64, rel_tol: Option<f64>) -> (f64, Verdict) {
    let diff = (estimate.c64() - C64::new(closed, 0.0)).norm();
    let rel = diff / closed.abs().max(f64::MIN_POSITIVE);
    let band = (3.0 * estimate.stderr).max(1e-9 * closed.abs());
    let ok = diff <= band && rel_tol.is_none_or(|t| rel <= t);
    (rel, Verdict::from_bool(ok))
}

/// Quadrature verdict: relative error at most `rel_tol`.
pub fn judge_quadrature(estimate: &Estimate, closed: f64, rel_tol: f64) -> (f64, Verdict) {
    let diff = (estimate.c64() - C64::new(closed, 0.0)).norm();
    let rel = diff / closed.abs().max(f64::MIN_POSITIVE);
    (rel, Verdict::from_bool(rel <= rel_tol))
}

#[derive(Debug, Clone, Copy, Default)]
struct Partial {
    sum: C64,
    sum_sq: f64,
    count: u64,
}

/// Mean of `f` over `cfg.samples` draws with its standard error.
pub fn monte_carlo<F>(cfg: &McConfig, f: F) -> Result<Estimate>
where
    F: Fn(&mut ChaCha8Rng) -> Result<C64> + Sync,
{
    if cfg.samples == 0 {
        return Err(VerifyError::InvalidConfig("samples must be positive".into()));
    }
    let start = Instant::now();
    let workers = cfg.workers.max(1);
    let base = cfg.samples / workers as u64;
    let extra = cfg.samples % workers as u64;
    let run = |w: usize| -> Result<Partial> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(w as u64);
        let count = base + u64::from((w as u64) < extra);
        let mut p = Partial::default();
        for _ in 0..count {
            let v = f(&mut rng)?;
            p.sum += v;
            p.sum_sq += v.norm_sqr();
        }
        p.count = count;
        Ok(p)
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| VerifyError::InvalidConfig(format!("thread pool: {e}")))?;
    let partials: Vec<Result<Partial>> =
        pool.install(|| (0..workers).into_par_iter().map(run).collect());
    let mut total = Partial::default();
    for p in partials {
        let p = p?;
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
        total.count += p.count;
    }
    let n = total.count as f64;
    let mean = total.sum / n;
    let var = if total.count > 1 {
        ((total.sum_sq - n * mean.norm_sqr()) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(Estimate {
        value: mean.into(),
        stderr: (var / n).sqrt(),
        samples: cfg.samples,
        seed: cfg.seed,
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// Refuses `s` unless every factor `c + s` of a closed-form denominator is
/// at least `1/2`: a factor in `(-1/2, 1/2)` is too close to a pole, and a
/// negative factor means the integral itself diverges. Returns the smallest
/// factor.
pub fn check_poles(offsets: &[BigRational], s: &BigRational) -> Result<f64> {
    let half = BigRational::new(1.into(), 2.into());
    let mut min = f64::INFINITY;
    for (i, c) in offsets.iter().enumerate() {
        let f = c + s;
        if f.abs() < half {
            return Err(VerifyError::PoleAdjacent {
                factor: i,
                value: f.to_string(),
            });
        }
        if f < half {
            return Err(VerifyError::Divergent {
                factor: i,
                value: f.to_string(),
            });
        }
        min = min.min(f.to_f64().unwrap_or(f64::INFINITY));
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn monte_carlo_is_reproducible_per_worker_count() {
        let f = |r: &mut ChaCha8Rng| Ok(C64::new(r.random::<f64>(), 0.0));
        let cfg = McConfig::new(10_001, 5).with_workers(3);
        let a = monte_carlo(&cfg, f).unwrap();
        let b = monte_carlo(&cfg, f).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.stderr, b.stderr);
        let c = monte_carlo(&cfg.with_workers(2), f).unwrap();
        assert_ne!(a.value, c.value);
        assert!((a.c64().re - 0.5).abs() < 4.0 * a.stderr);
    }

    #[test]
    fn constant_integrand_has_zero_error() {
        let cfg = McConfig::new(100, 1).with_workers(2);
        let e = monte_carlo(&cfg, |_| Ok(C64::new(2.5, 0.0))).unwrap();
        assert_eq!(e.c64(), C64::new(2.5, 0.0));
        assert_eq!(e.stderr, 0.0);
        assert!(judge_mc(&e, 2.5, None).1.is_pass());
    }

    #[test]
    fn pole_rule() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        // factor s - 1
        assert!(matches!(
            check_poles(&[r(-1, 1)], &r(5, 4)),
            Err(VerifyError::PoleAdjacent { .. })
        ));
        assert!(matches!(
            check_poles(&[r(-1, 1)], &r(-1, 1)),
            Err(VerifyError::Divergent { .. })
        ));
        assert_eq!(check_poles(&[r(-1, 1), r(0, 1)], &r(3, 1)).unwrap(), 2.0);
        assert_eq!(check_poles(&[r(-1, 1)], &r(3, 2)).unwrap(), 0.5);
    }

    #[test]
    fn verdict_bands() {
        let e = Estimate {
            value: C64::new(1.02, 0.0).into(),
            stderr: 0.01,
            samples: 1,
            seed: 0,
            wall_time: 0.0,
        };
        assert!(judge_mc(&e, 1.0, None).1.is_pass());
        assert!(!judge_mc(&e, 1.0, Some(0.01)).1.is_pass());
        assert!(!judge_mc(&e, 0.9, None).1.is_pass());
    }
}
