//! Oscillator actions of `K`, `K_C` and `K'` on Fock polynomials, the
//! joint highest-weight vectors and their weight checks.

use crate::group::CoverElement;
use crate::linalg::Mat;
use crate::scalar::Scalar;
use crate::weights::{HalfInt, ThetaCase, ThetaDatum};

use super::poly::{var_index, FockPoly};
use super::FockError;

type Result<T> = std::result::Result<T, FockError>;

/// Determinant of the `i x i` minor with top-left corner `(r0, c0)`.
fn minor_det<T: Scalar>(n: usize, r0: usize, c0: usize, i: usize) -> FockPoly<T> {
    // Laplace expansion along the first row; i <= n is small
    fn rec<T: Scalar>(n: usize, rows: &[usize], cols: &[usize]) -> FockPoly<T> {
        if rows.is_empty() {
            return FockPoly::one(n);
        }
        let mut acc = FockPoly::zero(n);
        for (k, &c) in cols.iter().enumerate() {
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = &FockPoly::var(n, rows[0], c) * &rec(n, &rows[1..], &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }
    let rows: Vec<usize> = (r0..r0 + i).collect();
    let cols: Vec<usize> = (c0..c0 + i).collect();
    rec(n, &rows, &cols)
}

/// `(Delta_i, Delta'_i)`: the leading principal `i x i` minor and the minor
/// on rows `n-i+1..n`, columns `n-i+2..n+1` (1-based).
pub fn minors<T: Scalar>(n: usize, i: usize) -> Result<(FockPoly<T>, FockPoly<T>)> {
    if i == 0 || i > n {
        return Err(FockError::OutOfRange { index: i, n });
    }
    Ok((minor_det(n, 0, 0, i), minor_det(n, n - i, n - i + 1, i)))
}

/// Joint highest-weight vector with leading coefficient 1.
pub fn harmonic_hwv<T: Scalar>(theta: &ThetaDatum) -> Result<FockPoly<T>> {
    let n = theta.n;
    let mut phi = FockPoly::one(n);
    let mut times_minors = |exps: &[i64], primed: bool| -> Result<()> {
        for i in 1..=exps.len() {
            let next = exps.get(i).copied().unwrap_or(0);
            let e = exps[i - 1] - next;
            if e < 0 {
                return Err(FockError::Inadmissible(format!(
                    "minor exponent {e} at index {i} is negative"
                )));
            }
            if e == 0 {
                continue;
            }
            let (d, dp) = minors::<T>(n, i)?;
            let base = if primed { dp } else { d };
            phi = &phi * &base.pow(e as u32);
        }
        Ok(())
    };
    let last_col = match theta.case {
        ThetaCase::CaseI => {
            times_minors(&theta.alphas, true)?;
            0
        }
        ThetaCase::CaseII => {
            times_minors(&theta.betas, false)?;
            times_minors(&theta.alphas, true)?;
            theta.p
        }
    };
    if theta.gamma < 0 {
        return Err(FockError::Inadmissible(format!("gamma = {}", theta.gamma)));
    }
    let z = FockPoly::var(n, n, last_col);
    Ok(&phi * &z.pow(theta.gamma as u32))
}

/// Block of variable `(i, j)` in the `[[A, B], [C, D]]` decomposition with
/// `A` of size `n x p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Block {
    A,
    B,
    C,
    D,
}

fn block_of(n: usize, p: usize, i: usize, j: usize) -> Block {
    match (i < n, j < p) {
        (true, true) => Block::A,
        (true, false) => Block::B,
        (false, true) => Block::C,
        (false, false) => Block::D,
    }
}

fn check_p<T: Scalar>(f: &FockPoly<T>, p: usize) -> Result<usize> {
    let n = f.n();
    if p > n + 1 {
        return Err(FockError::OutOfRange { index: p, n });
    }
    Ok(n)
}

/// `omega(k) f` for `k = (x, y)` in `K` or `K_C`, with the determinant twist
/// `zeta_x^{p-q} zeta_y^{-(p-q)}` taken from the carried roots.
pub fn omega_k<T: Scalar>(
    k: &CoverElement<T>,
    f: &FockPoly<T>,
    theta: &ThetaDatum,
) -> Result<FockPoly<T>> {
    omega_k_p(k, f, theta.p)
}

/// [`omega_k`] for an explicit column split `p`.
pub fn omega_k_p<T: Scalar>(k: &CoverElement<T>, f: &FockPoly<T>, p: usize) -> Result<FockPoly<T>> {
    let n = check_p(f, p)?;
    if k.n() != n {
        return Err(FockError::SizeMismatch {
            expected: n,
            got: k.n(),
        });
    }
    let x = &k.block_n;
    let xinv = x.inverse().ok_or(FockError::SingularBlock)?;
    let y = k.block_1.clone();
    if y.is_zero() {
        return Err(FockError::SingularBlock);
    }
    let yinv = T::one() / y.clone();
    let forms = substitution_forms(n, p, |i, j, blk| match blk {
        Block::A => (0..n).map(|l| (var_index(n, l, j), x[(l, i)].clone())).collect(),
        Block::B => (0..n).map(|l| (var_index(n, l, j), xinv[(i, l)].clone())).collect(),
        Block::C => vec![(var_index(n, i, j), yinv.clone())],
        Block::D => vec![(var_index(n, i, j), y.clone())],
    });
    let d = p as i64 - (n + 1 - p) as i64;
    let twist = k.zeta_n.powi(d) * k.zeta_1.powi(-d);
    Ok(f.substitute_linear(&forms).scale(&twist))
}

/// `omega(b_t^{sign})` written without a determinant twist: `b_t` has equal
/// determinants on both blocks, so the twist is 1 for every consistent
/// branch of the square root. Needs only `cosh t`, which keeps exact
/// arithmetic available.
pub fn omega_bt<T: Scalar>(cosh: &T, sign: i32, f: &FockPoly<T>, p: usize) -> Result<FockPoly<T>> {
    let n = check_p(f, p)?;
    let c = if sign >= 0 { cosh.clone() } else { T::one() / cosh.clone() };
    let cinv = T::one() / c.clone();
    // x = diag(c, 1, ..., 1) (c in the first slot only when n >= 1), y = c
    let forms = substitution_forms(n, p, |i, j, blk| {
        let s = match blk {
            Block::A if i == 0 => c.clone(),
            Block::B if i == 0 => cinv.clone(),
            Block::A | Block::B => T::one(),
            Block::C => cinv.clone(),
            Block::D => c.clone(),
        };
        vec![(var_index(n, i, j), s)]
    });
    Ok(f.substitute_linear(&forms))
}

fn substitution_forms<T: Scalar>(
    n: usize,
    p: usize,
    mut image: impl FnMut(usize, usize, Block) -> Vec<(usize, T)>,
) -> Vec<Vec<(usize, T)>> {
    let mut forms = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            let f: Vec<(usize, T)> = image(i, j, block_of(n, p, i, j))
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            forms.push(f);
        }
    }
    forms
}

/// An element `(x', y')` of `K'_C = GL_p x GL_q` with carried roots.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeElement<T: Scalar> {
    pub x: Mat<T>,
    pub zeta_x: T,
    pub y: Mat<T>,
    pub zeta_y: T,
}

/// Column-block action of `K'`: `A -> A x'`, `C -> C tx'^{-1}`,
/// `D -> D y'`, `B -> B ty'^{-1}`, twisted by `zeta_x'^{n-1} zeta_y'^{-(n-1)}`.
pub fn omega_kprime<T: Scalar>(kp: &PrimeElement<T>, f: &FockPoly<T>) -> Result<FockPoly<T>> {
    let p = kp.x.rows();
    let n = check_p(f, p)?;
    let q = n + 1 - p;
    if kp.y.rows() != q {
        return Err(FockError::SizeMismatch {
            expected: q,
            got: kp.y.rows(),
        });
    }
    let xinv = kp.x.inverse().ok_or(FockError::SingularBlock)?;
    let yinv = kp.y.inverse().ok_or(FockError::SingularBlock)?;
    let forms = substitution_forms(n, p, |i, j, blk| match blk {
        Block::A => (0..p).map(|l| (var_index(n, i, l), kp.x[(l, j)].clone())).collect(),
        Block::C => (0..p).map(|l| (var_index(n, i, l), xinv[(j, l)].clone())).collect(),
        Block::D => (0..q)
            .map(|l| (var_index(n, i, p + l), kp.y[(l, j - p)].clone()))
            .collect(),
        Block::B => (0..q)
            .map(|l| (var_index(n, i, p + l), yinv[(j - p, l)].clone()))
            .collect(),
    });
    let e = n as i64 - 1;
    let twist = kp.zeta_x.powi(e) * kp.zeta_y.powi(-e);
    Ok(f.substitute_linear(&forms).scale(&twist))
}

/// Derivative at `s = 0` of `omega_k(exp(s X), exp(s Y)) f`, computed from the
/// linearised substitution.
pub fn omega_k_tangent<T: Scalar>(x: &Mat<T>, y: &T, f: &FockPoly<T>, p: usize) -> Result<FockPoly<T>> {
    let n = check_p(f, p)?;
    let forms = substitution_forms(n, p, |i, j, blk| match blk {
        Block::A => (0..n).map(|l| (var_index(n, l, j), x[(l, i)].clone())).collect(),
        Block::B => (0..n).map(|l| (var_index(n, l, j), -x[(i, l)].clone())).collect(),
        Block::C => vec![(var_index(n, i, j), -y.clone())],
        Block::D => vec![(var_index(n, i, j), y.clone())],
    });
    let half = T::from_ratio(p as i64 - (n + 1 - p) as i64, 2);
    let scalar = half * (x.trace() - y.clone());
    Ok(&apply_vector_field(f, &forms) + &f.scale(&scalar))
}

/// Derivative of [`omega_kprime`] along `(exp(s X'), exp(s Y'))`.
pub fn omega_kprime_tangent<T: Scalar>(xp: &Mat<T>, yp: &Mat<T>, f: &FockPoly<T>) -> Result<FockPoly<T>> {
    let p = xp.rows();
    let n = check_p(f, p)?;
    let q = n + 1 - p;
    let forms = substitution_forms(n, p, |i, j, blk| match blk {
        Block::A => (0..p).map(|l| (var_index(n, i, l), xp[(l, j)].clone())).collect(),
        Block::C => (0..p).map(|l| (var_index(n, i, l), -xp[(j, l)].clone())).collect(),
        Block::D => (0..q)
            .map(|l| (var_index(n, i, p + l), yp[(l, j - p)].clone()))
            .collect(),
        Block::B => (0..q)
            .map(|l| (var_index(n, i, p + l), -yp[(j - p, l)].clone()))
            .collect(),
    });
    let half = T::from_ratio(n as i64 - 1, 2);
    let scalar = half * (xp.trace() - yp.trace());
    Ok(&apply_vector_field(f, &forms) + &f.scale(&scalar))
}

/// `sum_v (d f / d z_v) * L_v(z)`.
fn apply_vector_field<T: Scalar>(f: &FockPoly<T>, forms: &[Vec<(usize, T)>]) -> FockPoly<T> {
    let n = f.n();
    let mut out = FockPoly::zero(n);
    for (v, form) in forms.iter().enumerate() {
        if form.is_empty() {
            continue;
        }
        let d = f.derivative(v);
        if d.is_zero() {
            continue;
        }
        out = &out + &(&d * &FockPoly::linear(n, form));
    }
    out
}

fn unit<T: Scalar>(m: usize, r: usize, c: usize) -> Mat<T> {
    Mat::from_fn(m, m, |i, j| if i == r && j == c { T::one() } else { T::zero() })
}

/// One line of a [`HighestWeightReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct CheckLine {
    pub direction: String,
    /// Expected eigenvalue for weight checks, 0 for raising checks.
    pub expected: HalfInt,
    /// Largest coefficient of `(action - expected) phi`.
    pub residual: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HighestWeightReport {
    pub lines: Vec<CheckLine>,
}

impl HighestWeightReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> Vec<&CheckLine> {
        self.lines.iter().filter(|l| !l.passed).collect()
    }
}

/// Torus weights against `Lambda^vee` and `Lambda'`, and annihilation by the
/// simple raising operators of `K` and `K'`.
pub fn highest_weight_check<T: Scalar>(phi: &FockPoly<T>, theta: &ThetaDatum) -> Result<HighestWeightReport> {
    let n = theta.n;
    let (p, q) = (theta.p, theta.q);
    let scale = phi.max_coeff().max(1.0);
    let mut lines = Vec::new();
    let mut record = |direction: String, expected: HalfInt, image: FockPoly<T>| {
        let e = T::from_ratio(expected.twice(), 2);
        let residual = (&image - &phi.scale(&e)).max_coeff();
        let passed = if T::EXACT {
            residual == 0.0
        } else {
            residual <= 1e-9 * scale
        };
        lines.push(CheckLine {
            direction,
            expected,
            residual,
            passed,
        });
    };
    let zero = HalfInt::from_int(0);

    for i in 0..n {
        let img = omega_k_tangent(&unit(n, i, i), &T::zero(), phi, p)?;
        record(format!("K weight U(n)[{}]", i + 1), theta.dual.first[i], img);
    }
    let img = omega_k_tangent(&Mat::zeros(n, n), &T::one(), phi, p)?;
    record("K weight U(1)".into(), theta.dual.second[0], img);
    for i in 0..n.saturating_sub(1) {
        let img = omega_k_tangent(&unit(n, i, i + 1), &T::zero(), phi, p)?;
        record(format!("K raising E{}{}", i + 1, i + 2), zero, img);
    }

    for i in 0..p {
        let img = omega_kprime_tangent(&unit(p, i, i), &Mat::zeros(q, q), phi)?;
        record(format!("K' weight U(p)[{}]", i + 1), theta.prime.first[i], img);
    }
    for i in 0..q {
        let img = omega_kprime_tangent(&Mat::zeros(p, p), &unit(q, i, i), phi)?;
        record(format!("K' weight U(q)[{}]", i + 1), theta.prime.second[i], img);
    }
    for i in 0..p.saturating_sub(1) {
        let img = omega_kprime_tangent(&unit(p, i, i + 1), &Mat::zeros(q, q), phi)?;
        record(format!("K' raising U(p) E{}{}", i + 1, i + 2), zero, img);
    }
    for i in 0..q.saturating_sub(1) {
        let img = omega_kprime_tangent(&Mat::zeros(p, p), &unit(q, i, i + 1), phi)?;
        record(format!("K' raising U(q) E{}{}", i + 1, i + 2), zero, img);
    }
    Ok(HighestWeightReport { lines })
}
