//! Half-integer weight combinatorics for holomorphic discrete series of
//! `U(n,1)` and the closed-form zeta values attached to them.
//!
//! All arithmetic here is exact: half-integers are stored doubled and every
//! derived quantity is a [`BigRational`], possibly times a power of `pi`
//! ([`ClosedValue`]).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeightError {
    #[error("cannot parse entry {position} ({token:?}): {reason}")]
    Parse {
        position: usize,
        token: String,
        reason: String,
    },
    #[error("a Harish-Chandra parameter needs at least 2 entries, got {0}")]
    TooShort(usize),
    #[error("entries must be strictly decreasing; entry {position} is not below entry {}", position - 1)]
    NotStrictlyDecreasing { position: usize },
    #[error("entry {position} is not congruent mod 1 to entry 0")]
    MixedClass { position: usize },
    #[error("inadmissible parameter: {constraint}")]
    Inadmissible { constraint: String },
    #[error("pole: factor {index} ({factor}) vanishes")]
    Pole { index: usize, factor: String },
    #[error("invalid representation data: {0}")]
    InvalidSigma(String),
}

pub type Result<T, E = WeightError> = std::result::Result<T, E>;

/// A half-integer stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(v: i64) -> Self {
        HalfInt { twice: 2 * v }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.twice / 2)
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.twice), BigInt::from(2))
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    fn same_class(self, other: HalfInt) -> bool {
        (self.twice - other.twice).rem_euclid(2) == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for HalfInt {
    type Err = String;

    /// Accepts integers and fractions with denominator 1 or 2.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty entry".into());
        }
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), b.trim()),
            None => (s, "1"),
        };
        let num: i64 = num
            .parse()
            .map_err(|_| format!("numerator {num:?} is not an integer"))?;
        let den: i64 = den
            .parse()
            .map_err(|_| format!("denominator {den:?} is not an integer"))?;
        match den {
            1 => Ok(HalfInt::from_int(num)),
            2 => Ok(HalfInt::from_twice(num)),
            _ => Err(format!("denominator must be 1 or 2, got {den}")),
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn format_weights(w: &[HalfInt]) -> String {
    let parts: Vec<String> = w.iter().map(|h| h.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Harish-Chandra parameter of a holomorphic discrete series: a strictly
/// decreasing tuple of mutually congruent half-integers of length `n+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HCParameter {
    entries: Vec<HalfInt>,
}

impl HCParameter {
    pub fn new(entries: Vec<HalfInt>) -> Result<Self> {
        if entries.len() < 2 {
            return Err(WeightError::TooShort(entries.len()));
        }
        for i in 1..entries.len() {
            if entries[i] >= entries[i - 1] {
                return Err(WeightError::NotStrictlyDecreasing { position: i });
            }
            if !entries[i].same_class(entries[0]) {
                return Err(WeightError::MixedClass { position: i });
            }
        }
        Ok(HCParameter { entries })
    }

    /// Parses a comma separated list such as `5/2,3/2,1/2`.
    pub fn parse(s: &str) -> Result<Self> {
        let entries = s
            .split(',')
            .enumerate()
            .map(|(i, tok)| {
                tok.parse::<HalfInt>().map_err(|reason| WeightError::Parse {
                    position: i,
                    token: tok.to_string(),
                    reason,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(entries)
    }

    pub fn from_twice(twice: &[i64]) -> Result<Self> {
        Self::new(twice.iter().map(|&t| HalfInt::from_twice(t)).collect())
    }

    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[HalfInt] {
        &self.entries
    }

    /// True when the entries are proper half-integers.
    pub fn is_half_integral_class(&self) -> bool {
        !self.entries[0].is_integer()
    }
}

impl fmt::Display for HCParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_weights(&self.entries))
    }
}

/// Weight of `K x K'`-type blocks: the first component lives on the first
/// factor (`U(n)` or `U(p)`), the second on `U(1)` or `U(q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockWeight {
    pub first: Vec<HalfInt>,
    pub second: Vec<HalfInt>,
}

impl BlockWeight {
    /// Contragredient: negate and reverse each component.
    pub fn contragredient(&self) -> BlockWeight {
        BlockWeight {
            first: self.first.iter().rev().map(|&h| -h).collect(),
            second: self.second.iter().rev().map(|&h| -h).collect(),
        }
    }

    pub fn flat(&self) -> Vec<HalfInt> {
        self.first.iter().chain(&self.second).copied().collect()
    }
}

impl fmt::Display for BlockWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} x {}",
            format_weights(&self.first),
            format_weights(&self.second)
        )
    }
}

/// Blattner parameter `Lambda = lambda + (-n/2+1, ..., n/2, -n/2)`.
pub fn hc_to_blattner(lambda: &HCParameter) -> Vec<HalfInt> {
    let n = lambda.n() as i64;
    lambda
        .entries()
        .iter()
        .enumerate()
        .map(|(idx, &l)| {
            let shift = if (idx as i64) < n {
                // -n/2 + (idx+1)
                HalfInt::from_twice(-n + 2 * (idx as i64 + 1))
            } else {
                HalfInt::from_twice(-n)
            };
            l + shift
        })
        .collect()
}

/// Inverse of [`hc_to_blattner`].
pub fn blattner_to_hc(blattner: &[HalfInt]) -> Result<HCParameter> {
    let n = blattner.len() as i64 - 1;
    let entries = blattner
        .iter()
        .enumerate()
        .map(|(idx, &w)| {
            let shift = if (idx as i64) < n {
                HalfInt::from_twice(-n + 2 * (idx as i64 + 1))
            } else {
                HalfInt::from_twice(-n)
            };
            w - shift
        })
        .collect();
    HCParameter::new(entries)
}

/// Lowest `K`-type of the contragredient: `lambda_dual + (-n/2, ..., n/2)`
/// with `lambda_dual = (-lambda_n, ..., -lambda_1, -lambda_{n+1})`.
fn dual_blattner(lambda: &HCParameter) -> Vec<HalfInt> {
    let n = lambda.n();
    let l = lambda.entries();
    let mut dual: Vec<HalfInt> = (0..n).map(|j| -l[n - 1 - j]).collect();
    dual.push(-l[n]);
    dual.iter()
        .enumerate()
        .map(|(j, &v)| v + HalfInt::from_twice(-(n as i64) + 2 * j as i64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThetaCase {
    /// `b = 0`: `p = 1`, `q = n`.
    CaseI,
    /// `b = 1`: `lambda_{n+1} <= 0`, `p = a`.
    CaseII,
}

impl fmt::Display for ThetaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThetaCase::CaseI => f.write_str("CaseI"),
            ThetaCase::CaseII => f.write_str("CaseII"),
        }
    }
}

/// Full classification of the theta pair attached to a holomorphic `lambda`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaDatum {
    pub lambda: HCParameter,
    pub n: usize,
    pub case: ThetaCase,
    pub p: usize,
    pub q: usize,
    pub a: usize,
    pub b: usize,
    pub gamma: i64,
    /// Case I: `alpha_1..alpha_n`; Case II: `alpha_1..alpha_{q-1}` (zero padded).
    pub alphas: Vec<i64>,
    /// Case II only: `beta_1..beta_p` (zero padded).
    pub betas: Vec<i64>,
    pub m: i64,
    /// `Lambda`, the lowest `K`-type of `pi_lambda`.
    pub blattner: BlockWeight,
    /// `Lambda^vee`.
    pub dual: BlockWeight,
    /// `Lambda'`, the matching `K'`-type.
    pub prime: BlockWeight,
}

impl ThetaDatum {
    /// `(p-q)/2`, the determinant twist exponent on the `U(n)` block of
    /// `Lambda^vee`.
    pub fn twist(&self) -> HalfInt {
        HalfInt::from_twice(self.p as i64 - self.q as i64)
    }

    /// Exponent sign of `b_t` in the oscillator matrix coefficient.
    pub fn bt_sign(&self) -> i32 {
        match self.case {
            ThetaCase::CaseI => 1,
            ThetaCase::CaseII => -1,
        }
    }

    /// True when the determinant twists are proper half-integers, i.e. the
    /// `K`-types are genuine for the double cover.
    pub fn has_half_integral_twist(&self) -> bool {
        (self.p as i64 - self.q as i64).rem_euclid(2) == 1
    }

    /// `(delta_1..delta_n) = (beta_1..beta_p, -alpha_{q-1}..-alpha_1)`.
    pub fn deltas(&self) -> Vec<i64> {
        let mut d = self.betas.clone();
        d.extend(self.alphas.iter().rev().map(|a| -a));
        d
    }
}

fn inadmissible(constraint: impl Into<String>) -> WeightError {
    WeightError::Inadmissible {
        constraint: constraint.into(),
    }
}

fn integral(v: HalfInt, what: &str) -> Result<i64> {
    v.as_integer().ok_or_else(|| {
        inadmissible(format!(
            "{what} = {v} is not an integer (entries of lambda must be proper half-integers)"
        ))
    })
}

/// Classifies `lambda` into Case (i) / Case (ii) and computes the full
/// weight data of the corresponding theta pair.
pub fn classify_theta(lambda: &HCParameter) -> Result<ThetaDatum> {
    let n = lambda.n();
    let l = lambda.entries();
    if l[n - 1] <= l[n] {
        return Err(inadmissible("lambda_n > lambda_{n+1}"));
    }
    let lam = hc_to_blattner(lambda);
    let dual = dual_blattner(lambda);
    let blattner = BlockWeight {
        first: lam[..n].to_vec(),
        second: vec![lam[n]],
    };
    let dual_block = BlockWeight {
        first: dual[..n].to_vec(),
        second: vec![dual[n]],
    };
    debug_assert_eq!(blattner.contragredient(), dual_block);

    let a = l[..n].iter().filter(|x| x.twice() <= 0).count();
    let b = usize::from(l[n].twice() <= 0);
    let p = a + 1 - b;
    let q = n + 1 - p;
    let twist = HalfInt::from_twice(p as i64 - q as i64);
    let prime_twist = HalfInt::from_twice(n as i64 - 1);
    let reduced: Vec<HalfInt> = dual[..n].iter().map(|&d| d - twist).collect();

    let datum = if b == 0 {
        // lambda_{n+1} > 0 forces every entry positive, so a = 0, p = 1
        let alphas = (1..=n)
            .map(|i| integral(-reduced[n - i], &format!("alpha_{i}")))
            .collect::<Result<Vec<_>>>()?;
        let gamma = integral(-dual[n] - twist, "gamma")?;
        if gamma < 0 {
            return Err(inadmissible(format!("gamma = {gamma} >= 0")));
        }
        if alphas.windows(2).any(|w| w[0] < w[1]) {
            return Err(inadmissible("alpha_1 >= ... >= alpha_n"));
        }
        if alphas[n - 1] < gamma + 2 {
            return Err(inadmissible(format!(
                "alpha_n >= gamma + 2 (alpha_n = {}, gamma = {gamma})",
                alphas[n - 1]
            )));
        }
        let prime = BlockWeight {
            first: vec![HalfInt::from_int(-gamma) + prime_twist],
            second: alphas
                .iter()
                .rev()
                .map(|&al| HalfInt::from_int(-al) - prime_twist)
                .collect(),
        };
        ThetaDatum {
            lambda: lambda.clone(),
            n,
            case: ThetaCase::CaseI,
            p,
            q,
            a,
            b,
            gamma,
            alphas,
            betas: Vec::new(),
            m: -gamma,
            blattner,
            dual: dual_block,
            prime,
        }
    } else {
        let betas = (0..p)
            .map(|j| integral(reduced[j], &format!("beta_{}", j + 1)))
            .collect::<Result<Vec<_>>>()?;
        // position p+k (1-based) carries -alpha_{q-k}
        let alphas = (1..q)
            .map(|i| integral(-reduced[p + (q - i) - 1], &format!("alpha_{i}")))
            .collect::<Result<Vec<_>>>()?;
        let gamma = integral(dual[n] + twist, "gamma")?;
        if gamma < 0 {
            return Err(inadmissible(format!("gamma = {gamma} >= 0")));
        }
        if betas.iter().any(|&x| x < 0) || betas.windows(2).any(|w| w[0] < w[1]) {
            return Err(inadmissible("beta_1 >= ... >= beta_p >= 0"));
        }
        if alphas.iter().any(|&x| x < 0) || alphas.windows(2).any(|w| w[0] < w[1]) {
            return Err(inadmissible("alpha_1 >= ... >= alpha_{q-1} >= 0"));
        }
        if p >= 1 && betas[0] > gamma - 2 * p as i64 {
            return Err(inadmissible(format!(
                "beta_1 <= gamma - 2p (beta_1 = {}, gamma = {gamma}, p = {p})",
                betas[0]
            )));
        }
        let prime = BlockWeight {
            first: betas
                .iter()
                .map(|&be| HalfInt::from_int(be) + prime_twist)
                .collect(),
            second: std::iter::once(gamma)
                .chain(alphas.iter().rev().map(|&al| -al))
                .map(|v| HalfInt::from_int(v) - prime_twist)
                .collect(),
        };
        ThetaDatum {
            lambda: lambda.clone(),
            n,
            case: ThetaCase::CaseII,
            p,
            q,
            a,
            b,
            gamma,
            alphas,
            betas,
            m: gamma,
            blattner,
            dual: dual_block,
            prime,
        }
    };
    debug_assert_eq!(rebuild_dual(&datum), datum.dual);
    Ok(datum)
}

/// `Lambda^vee` reassembled from `(alpha, beta, gamma)`.
pub fn rebuild_dual(t: &ThetaDatum) -> BlockWeight {
    let twist = t.twist();
    match t.case {
        ThetaCase::CaseI => BlockWeight {
            first: t
                .alphas
                .iter()
                .rev()
                .map(|&al| HalfInt::from_int(-al) + twist)
                .collect(),
            second: vec![HalfInt::from_int(-t.gamma) - twist],
        },
        ThetaCase::CaseII => BlockWeight {
            first: t
                .betas
                .iter()
                .copied()
                .chain(t.alphas.iter().rev().map(|&al| -al))
                .map(|v| HalfInt::from_int(v) + twist)
                .collect(),
            second: vec![HalfInt::from_int(t.gamma) - twist],
        },
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn to_u64(r: &BigRational) -> u64 {
    assert!(r.is_integer() && r.is_positive(), "dimension {r} is not a positive integer");
    r.to_integer().to_u64().expect("dimension overflows u64")
}

/// Weyl dimension of the lowest `K`-type, read off the Harish-Chandra
/// parameter: `prod_{1<=i<j<=n} (lambda_i - lambda_j)/(j - i)`.
pub fn weyl_dim(lambda: &HCParameter) -> u64 {
    let l = lambda.entries();
    let n = lambda.n();
    let mut acc = BigRational::one();
    for i in 0..n {
        for j in i + 1..n {
            acc *= (l[i] - l[j]).to_rational() / rat((j - i) as i64, 1);
        }
    }
    to_u64(&acc)
}

/// Weyl dimension of the `U(m)` representation with highest weight `w`
/// (weakly decreasing): `prod_{i<j} (w_i - w_j + j - i)/(j - i)`.
pub fn weyl_dim_highest(w: &[HalfInt]) -> u64 {
    let mut acc = BigRational::one();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let num = (w[i] - w[j]).to_rational() + rat((j - i) as i64, 1);
            acc *= num / rat((j - i) as i64, 1);
        }
    }
    to_u64(&acc)
}

/// `prod_{1<=i<j<=n+1} |lambda_i - lambda_j|`, the formal degree up to the
/// Haar-measure constant.
pub fn formal_degree_product(lambda: &HCParameter) -> BigRational {
    let l = lambda.entries();
    let mut acc = BigRational::one();
    for i in 0..l.len() {
        for j in i + 1..l.len() {
            acc *= (l[i] - l[j]).to_rational().abs();
        }
    }
    acc
}

/// Exact `rational * pi^pi_exp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosedValue {
    pub rational: BigRational,
    pub pi_exp: i32,
}

impl ClosedValue {
    pub fn new(rational: BigRational, pi_exp: i32) -> Self {
        if rational.is_zero() {
            ClosedValue {
                rational,
                pi_exp: 0,
            }
        } else {
            ClosedValue { rational, pi_exp }
        }
    }

    pub fn rational(r: BigRational) -> Self {
        Self::new(r, 0)
    }

    pub fn to_f64(&self) -> f64 {
        self.rational.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi(self.pi_exp)
    }

    pub fn scale(&self, r: &BigRational) -> ClosedValue {
        ClosedValue::new(&self.rational * r, self.pi_exp)
    }
}

impl Mul for &ClosedValue {
    type Output = ClosedValue;
    fn mul(self, rhs: &ClosedValue) -> ClosedValue {
        ClosedValue::new(&self.rational * &rhs.rational, self.pi_exp + rhs.pi_exp)
    }
}

impl Div for &ClosedValue {
    type Output = ClosedValue;
    fn div(self, rhs: &ClosedValue) -> ClosedValue {
        assert!(!rhs.rational.is_zero(), "division by zero ClosedValue");
        ClosedValue::new(&self.rational / &rhs.rational, self.pi_exp - rhs.pi_exp)
    }
}

impl fmt::Display for ClosedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_exp {
            0 => write!(f, "{}", self.rational),
            1 => write!(f, "{}*pi", self.rational),
            e => write!(f, "{}*pi^{}", self.rational, e),
        }
    }
}

/// Data of `sigma = sigma_1 (x) sigma_2` on `U(p) x U(q)` with one factor
/// one-dimensional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SigmaParams {
    /// `sigma_2 = det^iota`; `kappa` is the highest weight of `sigma_1`.
    SecondOneDim { kappa: Vec<HalfInt>, iota: HalfInt },
    /// `sigma_1 = det^kappa`; `iota` is the highest weight of `sigma_2`.
    FirstOneDim { kappa: HalfInt, iota: Vec<HalfInt> },
}

impl SigmaParams {
    /// Highest weights of both factors as full tuples.
    pub fn weights(&self, p: usize, q: usize) -> (Vec<HalfInt>, Vec<HalfInt>) {
        match self {
            SigmaParams::SecondOneDim { kappa, iota } => (kappa.clone(), vec![*iota; q]),
            SigmaParams::FirstOneDim { kappa, iota } => (vec![*kappa; p], iota.clone()),
        }
    }

    fn validate(&self, p: usize, q: usize) -> Result<()> {
        let (k, i) = self.weights(p, q);
        if k.len() != p || i.len() != q {
            return Err(WeightError::InvalidSigma(format!(
                "weight lengths ({}, {}) do not match (p, q) = ({p}, {q})",
                k.len(),
                i.len()
            )));
        }
        for (name, w) in [("sigma_1", &k), ("sigma_2", &i)] {
            if w.windows(2).any(|x| x[0] < x[1]) {
                return Err(WeightError::InvalidSigma(format!(
                    "{name} weight is not weakly decreasing"
                )));
            }
            if w.iter().any(|x| !x.same_class(w[0])) {
                return Err(WeightError::InvalidSigma(format!(
                    "{name} weight entries are not congruent mod 1"
                )));
            }
        }
        Ok(())
    }
}

/// Offsets `c` such that `S_{sigma,s} = pi^{pq} / prod (c + s)`.
pub fn s_factor_offsets(p: usize, q: usize, sigma: &SigmaParams) -> Result<Vec<BigRational>> {
    sigma.validate(p, q)?;
    let mut out = Vec::with_capacity(p * q);
    match sigma {
        SigmaParams::SecondOneDim { kappa, iota } => {
            for i in 1..=p {
                let base = (*iota - kappa[i - 1]).to_rational();
                for j in (p + 1 - i)..=(p + q - i) {
                    out.push(&base - rat(j as i64, 1));
                }
            }
        }
        SigmaParams::FirstOneDim { kappa, iota } => {
            for i in 1..=q {
                let base = (iota[i - 1] - *kappa).to_rational();
                for j in i..=(p + i - 1) {
                    out.push(&base - rat(j as i64, 1));
                }
            }
        }
    }
    Ok(out)
}

fn product_of_reciprocals(
    offsets: &[BigRational],
    s: &BigRational,
    pi_exp: i32,
) -> Result<ClosedValue> {
    let mut denom = BigRational::one();
    for (index, c) in offsets.iter().enumerate() {
        let f = c + s;
        if f.is_zero() {
            return Err(WeightError::Pole {
                index,
                factor: format!("{c} + s at s = {s}"),
            });
        }
        denom *= f;
    }
    Ok(ClosedValue::new(denom.recip(), pi_exp))
}

/// Closed form of the scalar `S_{sigma,s}` on `D_{p,q}` when one factor of
/// `sigma` is one-dimensional.
pub fn closed_s(p: usize, q: usize, sigma: &SigmaParams, s: &BigRational) -> Result<ClosedValue> {
    let offsets = s_factor_offsets(p, q, sigma)?;
    product_of_reciprocals(&offsets, s, (p * q) as i32)
}

/// Offsets `c_i` with `T_s = pi^n / prod (c_i + s)`.
pub fn t_factor_offsets(theta: &ThetaDatum) -> Vec<BigRational> {
    let n = theta.n as i64;
    match theta.case {
        // alpha_i - i - (1-n)/2
        ThetaCase::CaseI => theta
            .alphas
            .iter()
            .enumerate()
            .map(|(idx, &al)| rat(2 * (al - idx as i64 - 1) - (1 - n), 2))
            .collect(),
        // gamma - i - (p-q)/2
        ThetaCase::CaseII => (1..=n)
            .map(|i| rat(2 * (theta.gamma - i) - (theta.p as i64 - theta.q as i64), 2))
            .collect(),
    }
}

/// `T_s^{+}` (Case I) or `T_s^{-}` (Case II).
pub fn closed_t(theta: &ThetaDatum, s: &BigRational) -> Result<ClosedValue> {
    product_of_reciprocals(&t_factor_offsets(theta), s, theta.n as i32)
}

/// `sigma_{Lambda^vee}` as data for [`closed_s`] on `D_{n,1}`.
pub fn dual_sigma(theta: &ThetaDatum) -> SigmaParams {
    SigmaParams::SecondOneDim {
        kappa: theta.dual.first.clone(),
        iota: theta.dual.second[0],
    }
}

/// The value of the zeta integral per unit `||phi||^2`.
pub fn zeta_closed(lambda: &HCParameter) -> Result<ClosedValue> {
    let theta = classify_theta(lambda)?;
    let n = theta.n as i64;
    let mut denom = BigRational::from_integer(BigInt::from(weyl_dim(lambda)));
    match theta.case {
        ThetaCase::CaseI => {
            for (idx, &al) in theta.alphas.iter().enumerate() {
                denom *= rat(al - (idx as i64 + 1) + n, 1);
            }
        }
        ThetaCase::CaseII => {
            for i in 1..=n {
                denom *= rat(theta.gamma + i - theta.p as i64, 1);
            }
        }
    }
    if denom.is_zero() {
        return Err(WeightError::Pole {
            index: 0,
            factor: "zeta denominator".into(),
        });
    }
    Ok(ClosedValue::new(denom.recip(), theta.n as i32))
}

/// Squared projection constant `c^2`.
pub fn c_squared(lambda: &HCParameter) -> Result<BigRational> {
    let theta = classify_theta(lambda)?;
    Ok(c_squared_of(&theta))
}

pub fn c_squared_of(theta: &ThetaDatum) -> BigRational {
    let n = theta.n as i64;
    let mut acc = BigRational::one();
    match theta.case {
        ThetaCase::CaseI => {
            for (idx, &al) in theta.alphas.iter().enumerate() {
                let i = idx as i64 + 1;
                acc *= rat(al - i + n - 1 - theta.gamma, al - i + n);
            }
        }
        ThetaCase::CaseII => {
            let p = theta.p as i64;
            for (idx, d) in theta.deltas().into_iter().enumerate() {
                let i = idx as i64 + 1;
                acc *= rat(theta.gamma + i - d - 2 * p, theta.gamma + i - p);
            }
        }
    }
    acc
}

/// All `lambda` with `n+1` entries in `[-bound, bound]` (bound given doubled)
/// that [`classify_theta`] accepts, in lexicographically decreasing order.
pub fn admissible_sweep(n: usize, bound_twice: i64) -> Vec<HCParameter> {
    let values: Vec<i64> = (-bound_twice..=bound_twice)
        .rev()
        .filter(|t| t.rem_euclid(2) == 1)
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n + 1);
    fn rec(
        values: &[i64],
        start: usize,
        len: usize,
        current: &mut Vec<i64>,
        out: &mut Vec<HCParameter>,
    ) {
        if current.len() == len {
            if let Ok(lambda) = HCParameter::from_twice(current) {
                if classify_theta(&lambda).is_ok() {
                    out.push(lambda);
                }
            }
            return;
        }
        for i in start..values.len() {
            current.push(values[i]);
            rec(values, i + 1, len, current, out);
            current.pop();
        }
    }
    rec(&values, 0, n + 1, &mut current, &mut out);
    out
}
