//! The action of `a_t` on Fock polynomials and the two routes to the
//! matrix coefficient `<omega(k' a_t k) phi, phi>`.

use crate::group::{b_t, CoverElement};
use crate::scalar::{binomial, factorial, falling_factorial, Scalar, C64};
use crate::weights::ThetaDatum;

use super::action::{omega_bt, omega_k, omega_k_p};
use super::poly::{bargmann_inner, var_index, Exps, FockPoly, PiPoly, PiSeries};
use super::FockError;

type Result<T> = std::result::Result<T, FockError>;

/// `cosh t`, `1/cosh t` and `tanh t`, kept as field elements so that
/// rational points like `cosh t = 5/3` stay exact.
#[derive(Debug, Clone, PartialEq)]
pub struct AtParams<T: Scalar> {
    pub cosh: T,
    pub tanh: T,
}

impl<T: Scalar> AtParams<T> {
    /// Checks `1 - tanh^2 = 1/cosh^2` when exact.
    pub fn new(cosh: T, tanh: T) -> Result<Self> {
        let lhs = T::one() - tanh.clone() * tanh.clone();
        let rhs = T::one() / (cosh.clone() * cosh.clone());
        if !lhs.approx_eq(&rhs, 1e-12) {
            return Err(FockError::Inadmissible(
                "cosh and tanh do not come from one real t".into(),
            ));
        }
        Ok(AtParams { cosh, tanh })
    }

    pub fn cosh_inv(&self) -> T {
        T::one() / self.cosh.clone()
    }
}

impl AtParams<C64> {
    pub fn from_t(t: f64) -> Self {
        AtParams {
            cosh: C64::new(t.cosh(), 0.0),
            tanh: C64::new(t.tanh(), 0.0),
        }
    }
}

/// `omega(a_t) f = prefactor * exp(pi tanh t z_1 . z_{n+1}) * transformed`.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaAt<T: Scalar> {
    /// `(cosh t)^{-n-1}`.
    pub prefactor: T,
    /// Coefficient `tanh t` of the exponential tag `exp(pi tanh t z_1 . z_{n+1})`.
    pub exp_coeff: T,
    pub transformed: PiPoly<T>,
}

impl<T: Scalar> OmegaAt<T> {
    /// The full image with the exponential expanded to total degree `max`.
    pub fn expand(&self, max_degree: u32) -> PiPoly<T> {
        let n = self.transformed.n();
        let mut s = FockPoly::zero(n);
        for j in 0..=n {
            s = &s + &(&FockPoly::var(n, 0, j) * &FockPoly::var(n, n, j));
        }
        // exp(pi tau s) = sum_k (pi tau)^k s^k / k!, and s^k has degree 2k
        let mut exp_series = PiPoly::zero(n);
        let mut power = FockPoly::one(n);
        let mut k = 0u32;
        while 2 * k <= max_degree {
            let c = self.exp_coeff.powi(k as i64) / factorial::<T>(k);
            exp_series.add_grade(k as i32, &power.scale(&c));
            power = &power * &s;
            k += 1;
        }
        exp_series
            .times(&self.transformed)
            .truncate(max_degree)
            .scale(&self.prefactor)
    }
}

/// Closed-form `omega(a_t)`: the `w_1` integral is done monomial by monomial
/// with the Gaussian pairing after binomially expanding the last row.
pub fn omega_at<T: Scalar>(at: &AtParams<T>, f: &FockPoly<T>) -> OmegaAt<T> {
    let n = f.n();
    let c = at.cosh_inv();
    let tau = at.tanh.clone();
    let mut out = PiPoly::zero(n);
    for (e, coef) in f.terms() {
        // per column j: a = exponent of z_{1j} (integrated), m = exponent of
        // z_{n+1,j} (replaced by c z_{n+1,j} - tau conj(w_{1j}))
        let mut partial: Vec<(Exps, T, i32)> = vec![(e.clone(), coef.clone(), 0)];
        for j in 0..=n {
            let va = var_index(n, 0, j);
            let vm = var_index(n, n, j);
            let a = e[va] as u32;
            let m = e[vm] as u32;
            let mut next = Vec::new();
            for (pe, pc, pg) in &partial {
                for b in 0..=m.min(a) {
                    // (-tau)^b c^{m-b} C(m,b) z_{n+1,j}^{m-b} * a!/(a-b)! (c z_{1j})^{a-b} / pi^b
                    let k = binomial::<T>(m, b)
                        * (-tau.clone()).powi(b as i64)
                        * c.powi((m - b) as i64)
                        * falling_factorial::<T>(a, b)
                        * c.powi((a - b) as i64);
                    let mut ne = pe.clone();
                    ne[vm] = (m - b) as u8;
                    ne[va] = (a - b) as u8;
                    next.push((ne, pc.clone() * k, pg - b as i32));
                }
            }
            partial = next;
        }
        for (pe, pc, pg) in partial {
            out.add_grade(pg, &FockPoly::monomial(n, pe, pc));
        }
    }
    OmegaAt {
        prefactor: at.cosh_inv().powi(n as i64 + 1),
        exp_coeff: tau,
        transformed: out,
    }
}

/// `omega(a_t) f` straight from the Fock kernel: integrate all `N`
/// variables against `exp(pi sum c_v z_v conj(w_v) - pi tau conj(w_1).conj(w_{n+1}))`
/// with `c_v = 1/cosh t` on rows 1 and n+1 and 1 elsewhere.
pub fn omega_at_kernel<T: Scalar>(at: &AtParams<T>, f: &FockPoly<T>) -> OmegaAt<T> {
    let n = f.n();
    let cinv = at.cosh_inv();
    let tau = at.tanh.clone();
    let cv = |v: usize| {
        let row = v / (n + 1);
        if row == 0 || row == n {
            cinv.clone()
        } else {
            T::one()
        }
    };
    let mut out = PiPoly::zero(n);
    for (e, coef) in f.terms() {
        // choose b_j = power of (conj(w_{1j}) conj(w_{n+1,j})) from the exponential
        let bounds: Vec<u32> = (0..=n)
            .map(|j| (e[var_index(n, 0, j)]).min(e[var_index(n, n, j)]) as u32)
            .collect();
        let mut bs = vec![0u32; n + 1];
        loop {
            let mut conj_pow = vec![0u32; e.len()];
            let mut k = coef.clone();
            let mut grade = 0i32;
            for (j, &b) in bs.iter().enumerate() {
                conj_pow[var_index(n, 0, j)] = b;
                conj_pow[var_index(n, n, j)] = b;
                k = k * (-tau.clone()).powi(b as i64) / factorial::<T>(b);
                grade += b as i32;
            }
            let mut ne = e.clone();
            for (v, &d) in e.iter().enumerate() {
                let bb = conj_pow[v];
                k = k * falling_factorial::<T>(d as u32, bb) * cv(v).powi((d as u32 - bb) as i64);
                ne[v] = d - bb as u8;
                grade -= bb as i32;
            }
            out.add_grade(grade, &FockPoly::monomial(n, ne, k));

            // odometer over 0..=bounds[j]
            let Some(idx) = (0..=n).find(|&j| bs[j] < bounds[j]) else {
                break;
            };
            bs[idx] += 1;
            bs[..idx].iter_mut().for_each(|b| *b = 0);
        }
    }
    OmegaAt {
        prefactor: at.cosh_inv().powi(n as i64 + 1),
        exp_coeff: tau,
        transformed: out,
    }
}

/// Matrix coefficient by the `b_t` route:
/// `(cosh t)^{-n-1} <omega(k' b_t^{+-1} k) phi, phi>`.
pub fn omega_matcoef(
    kp: &CoverElement,
    t: f64,
    k: &CoverElement,
    theta: &ThetaDatum,
    phi: &FockPoly<C64>,
) -> Result<C64> {
    let n = theta.n;
    let bt = b_t(n, t);
    let bt = if theta.bt_sign() > 0 {
        bt
    } else {
        bt.inverse().map_err(|_| FockError::SingularBlock)?
    };
    let g = kp.mul(&bt).mul(k);
    let img = omega_k(&g, phi, theta)?;
    let pre = t.cosh().powi(-(n as i32) - 1);
    Ok(bargmann_inner(&img, phi).to_c64() * pre)
}

/// Exact-capable form of [`omega_matcoef`], applying the three factors in
/// turn and returning a `pi`-graded value.
pub fn omega_matcoef_graded<T: Scalar>(
    kp: &CoverElement<T>,
    at: &AtParams<T>,
    k: &CoverElement<T>,
    theta: &ThetaDatum,
    phi: &FockPoly<T>,
) -> Result<PiSeries<T>> {
    let p = theta.p;
    let step = omega_k_p(k, phi, p)?;
    let step = omega_bt(&at.cosh, theta.bt_sign(), &step, p)?;
    let step = omega_k_p(kp, &step, p)?;
    let pre = at.cosh_inv().powi(theta.n as i64 + 1);
    Ok(bargmann_inner(&step, phi).scale(&pre, 0))
}

/// Matrix coefficient by the `a_t` route:
/// `<omega(a_t) omega(k) phi, omega(k'^{-1}) phi>`, with the exponential
/// tag expanded up to `deg phi`.
pub fn prop61_lhs<T: Scalar>(
    kp: &CoverElement<T>,
    at: &AtParams<T>,
    k: &CoverElement<T>,
    theta: &ThetaDatum,
    phi: &FockPoly<T>,
) -> Result<PiSeries<T>> {
    let deg = phi.degree().unwrap_or(0);
    let left = omega_at(at, &omega_k(k, phi, theta)?).expand(deg);
    let kp_inv = kp.inverse().map_err(|_| FockError::SingularBlock)?;
    let right = omega_k(&kp_inv, phi, theta)?;
    Ok(left.inner(&right))
}
