//! Sparse polynomials in the `(n+1)^2` Fock variables `z_{ij}` and the
//! Bargmann inner product.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_rational::BigRational;

use crate::scalar::{factorial, falling_factorial, Scalar, C64};

/// Exponent vector, one entry per variable in row-major `z_{ij}` order.
pub type Exps = Vec<u8>;

/// Index of `z_{ij}` (0-based) among the `(n+1)^2` variables.
pub fn var_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= n && j <= n);
    i * (n + 1) + j
}

#[derive(Clone, PartialEq)]
pub struct FockPoly<T: Scalar = C64> {
    n: usize,
    terms: BTreeMap<Exps, T>,
}

impl<T: Scalar> fmt::Debug for FockPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let m = self.n + 1;
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &d)| d > 0)
                    .map(|(v, &d)| {
                        let name = format!("z{}{}", v / m + 1, v % m + 1);
                        if d == 1 {
                            name
                        } else {
                            format!("{name}^{d}")
                        }
                    })
                    .collect();
                format!("({c:?}){}", if mono.is_empty() { String::new() } else { format!("*{}", mono.join("*")) })
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<T: Scalar> FockPoly<T> {
    pub fn zero(n: usize) -> Self {
        FockPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: T) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; (n + 1) * (n + 1)], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, T::one())
    }

    /// The variable `z_{ij}` (0-based).
    pub fn var(n: usize, i: usize, j: usize) -> Self {
        let mut e = vec![0; (n + 1) * (n + 1)];
        e[var_index(n, i, j)] = 1;
        Self::monomial(n, e, T::one())
    }

    pub fn monomial(n: usize, exps: Exps, coef: T) -> Self {
        assert_eq!(exps.len(), (n + 1) * (n + 1), "exponent vector length");
        let mut p = Self::zero(n);
        p.add_term(exps, coef);
        p
    }

    /// Linear form `sum coef * z_v`.
    pub fn linear(n: usize, coeffs: &[(usize, T)]) -> Self {
        let nv = (n + 1) * (n + 1);
        let mut p = Self::zero(n);
        for (v, c) in coeffs {
            let mut e = vec![0; nv];
            e[*v] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nvars(&self) -> usize {
        (self.n + 1) * (self.n + 1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &T)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u8]) -> T {
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    /// Adds `c * z^exps`, dropping the entry if it cancels.
    pub fn add_term(&mut self, exps: Exps, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total(e)).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| total(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Keeps the terms of total degree `<= max`.
    pub fn truncate(&self, max: u32) -> Self {
        FockPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) <= max)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        FockPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total(e) == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn derivative(&self, v: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[v] == 0 {
                continue;
            }
            let mut d = e.clone();
            d[v] -= 1;
            out.add_term(d, c.clone() * T::from_i64(e[v] as i64));
        }
        out
    }

    pub fn eval(&self, point: &[T]) -> T {
        assert_eq!(point.len(), self.nvars());
        let mut acc = T::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &d) in point.iter().zip(e) {
                if d > 0 {
                    term = term * x.powi(d as i64);
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// `f(L z)` where variable `v` is replaced by the linear form `forms[v]`
    /// (a list of `(variable, coefficient)` pairs).
    pub fn substitute_linear(&self, forms: &[Vec<(usize, T)>]) -> Self {
        assert_eq!(forms.len(), self.nvars());
        let nv = self.nvars();
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            // expand the product of linear forms one factor at a time
            let mut partial: BTreeMap<Exps, T> = BTreeMap::new();
            partial.insert(vec![0; nv], c.clone());
            for (v, &d) in e.iter().enumerate() {
                for _ in 0..d {
                    let mut next: BTreeMap<Exps, T> = BTreeMap::new();
                    for (pe, pc) in &partial {
                        for (u, lc) in &forms[v] {
                            let mut ne = pe.clone();
                            ne[*u] += 1;
                            let val = pc.clone() * lc.clone();
                            match next.get_mut(&ne) {
                                Some(x) => *x = x.clone() + val,
                                None => {
                                    next.insert(ne, val);
                                }
                            }
                        }
                    }
                    partial = next;
                }
            }
            for (pe, pc) in partial {
                out.add_term(pe, pc);
            }
        }
        out
    }

    /// General composition `f(g_1, ..., g_N)`.
    pub fn compose(&self, images: &[FockPoly<T>]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let target_n = images.first().map_or(self.n, |g| g.n);
        let mut out = FockPoly::zero(target_n);
        for (e, c) in &self.terms {
            let mut term = FockPoly::constant(target_n, c.clone());
            for (g, &d) in images.iter().zip(e) {
                if d > 0 {
                    term = &term * &g.pow(d as u32);
                }
            }
            out = &out + &term;
        }
        out
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> FockPoly<U> {
        let mut out = FockPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    pub fn to_c64(&self) -> FockPoly<C64> {
        self.map_coeffs(|c| c.to_c64())
    }

    /// Largest coefficient modulus.
    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.modulus()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &FockPoly<T>, tol: f64) -> bool {
        let diff = self - other;
        if T::EXACT {
            return diff.is_zero();
        }
        diff.max_coeff() <= tol * self.max_coeff().max(other.max_coeff()).max(1.0)
    }
}

pub(crate) fn total(e: &[u8]) -> u32 {
    e.iter().map(|&d| d as u32).sum()
}

impl<T: Scalar> Add for &FockPoly<T> {
    type Output = FockPoly<T>;
    fn add(self, rhs: &FockPoly<T>) -> FockPoly<T> {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &FockPoly<T> {
    type Output = FockPoly<T>;
    fn sub(self, rhs: &FockPoly<T>) -> FockPoly<T> {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<T: Scalar> Neg for &FockPoly<T> {
    type Output = FockPoly<T>;
    fn neg(self) -> FockPoly<T> {
        self.scale(&-T::one())
    }
}

impl<T: Scalar> Mul for &FockPoly<T> {
    type Output = FockPoly<T>;
    fn mul(self, rhs: &FockPoly<T>) -> FockPoly<T> {
        assert_eq!(self.n, rhs.n);
        let mut out = FockPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}

/// `coef * pi^pi_exp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scaled<T> {
    pub coef: T,
    pub pi_exp: i32,
}

/// Exact Gaussian-rational multiple of a power of `pi`.
pub type ExactScaled = Scaled<Complex<BigRational>>;

impl<T: Scalar> Scaled<T> {
    pub fn to_c64(&self) -> C64 {
        self.coef.to_c64() * std::f64::consts::PI.powi(self.pi_exp)
    }
}

/// Finite sum `sum_k c_k pi^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiSeries<T: Scalar> {
    grades: BTreeMap<i32, T>,
}

impl<T: Scalar> Default for PiSeries<T> {
    fn default() -> Self {
        PiSeries {
            grades: BTreeMap::new(),
        }
    }
}

impl<T: Scalar> PiSeries<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(coef: T, pi_exp: i32) -> Self {
        let mut s = Self::zero();
        s.add(pi_exp, coef);
        s
    }

    pub fn add(&mut self, pi_exp: i32, coef: T) {
        if coef.is_zero() {
            return;
        }
        let v = self.grades.remove(&pi_exp).unwrap_or_else(T::zero) + coef;
        if !v.is_zero() {
            self.grades.insert(pi_exp, v);
        }
    }

    pub fn plus(&self, other: &PiSeries<T>) -> PiSeries<T> {
        let mut out = self.clone();
        for (k, v) in &other.grades {
            out.add(*k, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &T, pi_shift: i32) -> PiSeries<T> {
        let mut out = Self::zero();
        for (k, v) in &self.grades {
            out.add(k + pi_shift, v.clone() * c.clone());
        }
        out
    }

    pub fn grades(&self) -> impl Iterator<Item = (i32, &T)> {
        self.grades.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.grades.is_empty()
    }

    /// The value as a single scaled term, if only one grade is present.
    pub fn as_single(&self) -> Option<Scaled<T>> {
        match self.grades.len() {
            0 => Some(Scaled {
                coef: T::zero(),
                pi_exp: 0,
            }),
            1 => self.grades.iter().next().map(|(k, v)| Scaled {
                coef: v.clone(),
                pi_exp: *k,
            }),
            _ => None,
        }
    }

    pub fn to_c64(&self) -> C64 {
        self.grades
            .iter()
            .map(|(k, v)| v.to_c64() * std::f64::consts::PI.powi(*k))
            .sum()
    }
}

/// Polynomial with coefficients in `T[pi, 1/pi]`, stored by `pi` grade.
#[derive(Debug, Clone, PartialEq)]
pub struct PiPoly<T: Scalar> {
    n: usize,
    grades: BTreeMap<i32, FockPoly<T>>,
}

impl<T: Scalar> PiPoly<T> {
    pub fn zero(n: usize) -> Self {
        PiPoly {
            n,
            grades: BTreeMap::new(),
        }
    }

    pub fn from_poly(f: FockPoly<T>, pi_exp: i32) -> Self {
        let mut p = Self::zero(f.n());
        p.add_grade(pi_exp, &f);
        p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_grade(&mut self, pi_exp: i32, f: &FockPoly<T>) {
        if f.is_zero() {
            return;
        }
        let cur = self
            .grades
            .remove(&pi_exp)
            .unwrap_or_else(|| FockPoly::zero(self.n));
        let sum = &cur + f;
        if !sum.is_zero() {
            self.grades.insert(pi_exp, sum);
        }
    }

    pub fn grades(&self) -> impl Iterator<Item = (i32, &FockPoly<T>)> {
        self.grades.iter().map(|(k, v)| (*k, v))
    }

    pub fn grade(&self, pi_exp: i32) -> FockPoly<T> {
        self.grades
            .get(&pi_exp)
            .cloned()
            .unwrap_or_else(|| FockPoly::zero(self.n))
    }

    pub fn plus(&self, other: &PiPoly<T>) -> PiPoly<T> {
        let mut out = self.clone();
        for (k, f) in &other.grades {
            out.add_grade(*k, f);
        }
        out
    }

    pub fn times(&self, other: &PiPoly<T>) -> PiPoly<T> {
        let mut out = PiPoly::zero(self.n);
        for (k1, f1) in &self.grades {
            for (k2, f2) in &other.grades {
                out.add_grade(k1 + k2, &(f1 * f2));
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> PiPoly<T> {
        let mut out = PiPoly::zero(self.n);
        for (k, f) in &self.grades {
            out.add_grade(*k, &f.scale(c));
        }
        out
    }

    pub fn truncate(&self, max_degree: u32) -> PiPoly<T> {
        let mut out = PiPoly::zero(self.n);
        for (k, f) in &self.grades {
            out.add_grade(*k, &f.truncate(max_degree));
        }
        out
    }

    /// Collapses the grades numerically.
    pub fn to_c64(&self) -> FockPoly<C64> {
        let mut out = FockPoly::zero(self.n);
        for (k, f) in &self.grades {
            out = &out + &f.to_c64().scale(&C64::new(std::f64::consts::PI.powi(*k), 0.0));
        }
        out
    }

    /// `<self, g>` in the Bargmann inner product.
    pub fn inner(&self, g: &FockPoly<T>) -> PiSeries<T> {
        let mut out = PiSeries::zero();
        for (k, f) in &self.grades {
            out = out.plus(&bargmann_inner(f, g).scale(&T::one(), *k));
        }
        out
    }
}

/// `<f, g> = sum_alpha f_alpha conj(g_alpha) alpha! / pi^{|alpha|}`.
pub fn bargmann_inner<T: Scalar>(f: &FockPoly<T>, g: &FockPoly<T>) -> PiSeries<T> {
    let mut out = PiSeries::zero();
    for (e, c) in f.terms() {
        let Some(d) = g.terms.get(e) else { continue };
        let weight = e
            .iter()
            .fold(T::one(), |acc, &k| acc * factorial::<T>(k as u32));
        out.add(-(total(e) as i32), c.clone() * d.conj() * weight);
    }
    out
}

/// Floating-point Bargmann inner product.
pub fn bargmann_inner_c64<T: Scalar>(f: &FockPoly<T>, g: &FockPoly<T>) -> C64 {
    bargmann_inner(f, g).to_c64()
}

/// `int_C z^i conj(z)^j exp(pi c conj(z) - pi |z|^2) dz
///  = i!/(i-j)! c^{i-j} / pi^j` for `i >= j`, else 0.
pub fn gaussian_pair<T: Scalar>(i: u32, j: u32, c: &T) -> Scaled<T> {
    if i < j {
        return Scaled {
            coef: T::zero(),
            pi_exp: 0,
        };
    }
    Scaled {
        coef: falling_factorial::<T>(i, j) * c.powi((i - j) as i64),
        pi_exp: -(j as i32),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gaussian;
    use crate::GaussianRational;

    type Q = GaussianRational;

    fn q(a: i64, b: i64) -> Q {
        gaussian((a, b), (0, 1))
    }

    #[test]
    fn bargmann_norms_of_monomials() {
        let z11 = FockPoly::<Q>::var(1, 0, 0);
        let z12 = FockPoly::<Q>::var(1, 0, 1);
        let sq = z11.pow(2);
        let ip = bargmann_inner(&sq, &sq).as_single().unwrap();
        assert_eq!(ip, Scaled { coef: q(2, 1), pi_exp: -2 });
        assert!(bargmann_inner(&z11, &z12).is_zero());
    }

    #[test]
    fn delta_prime_two_squared_norm() {
        // (z12 z23 - z13 z22)^2 has norm 12/pi^4
        let v = |i, j| FockPoly::<Q>::var(2, i, j);
        let d = &(&v(0, 1) * &v(1, 2)) - &(&v(0, 2) * &v(1, 1));
        let sq = d.pow(2);
        let ip = bargmann_inner(&sq, &sq).as_single().unwrap();
        assert_eq!(ip, Scaled { coef: q(12, 1), pi_exp: -4 });
    }

    #[test]
    fn gaussian_pair_values() {
        let c = gaussian((2, 3), (1, 5));
        let g = gaussian_pair(3, 1, &c);
        assert_eq!(g.coef, q(3, 1) * c.clone() * c.clone());
        assert_eq!(g.pi_exp, -1);
        assert_eq!(gaussian_pair(1, 2, &c).coef, q(0, 1));
        assert_eq!(gaussian_pair(0, 0, &c), Scaled { coef: q(1, 1), pi_exp: 0 });
    }

    #[test]
    fn gaussian_pair_against_quadrature() {
        // i = 2, j = 1, c = 0.3: 2 c / pi
        let (i, j, c) = (2u32, 1u32, 0.3f64);
        let pi = std::f64::consts::PI;
        let steps = 400;
        let rmax = 6.0;
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..steps {
            let r = (a as f64 + 0.5) * rmax / steps as f64;
            for b in 0..steps {
                let th = (b as f64 + 0.5) * 2.0 * pi / steps as f64;
                let z = C64::from_polar(r, th);
                let f = z.powu(i) * z.conj().powu(j) * (pi * c * z.conj() - pi * r * r).exp();
                acc += f * r * (rmax / steps as f64) * (2.0 * pi / steps as f64);
            }
        }
        let exact = gaussian_pair(i, j, &C64::new(c, 0.0)).to_c64();
        assert!((acc - exact).norm() < 1e-6, "{acc} vs {exact}");
    }

    #[test]
    fn substitution_matches_composition() {
        let n = 1;
        let f = &FockPoly::<Q>::var(n, 0, 1).pow(2) + &FockPoly::var(n, 1, 0);
        let forms: Vec<Vec<(usize, Q)>> = (0..4)
            .map(|v| vec![(v, q(2, 1)), ((v + 1) % 4, gaussian((0, 1), (1, 1)))])
            .collect();
        let images: Vec<FockPoly<Q>> = forms.iter().map(|l| FockPoly::linear(n, l)).collect();
        assert_eq!(f.substitute_linear(&forms), f.compose(&images));
    }

    #[test]
    fn derivative_and_eval() {
        let f = &FockPoly::<Q>::var(1, 0, 0).pow(3) + &FockPoly::var(1, 1, 1);
        let df = f.derivative(0);
        assert_eq!(df, FockPoly::var(1, 0, 0).pow(2).scale(&q(3, 1)));
        let pt = vec![q(2, 1), q(0, 1), q(0, 1), q(5, 1)];
        assert_eq!(f.eval(&pt), q(13, 1));
    }

    #[test]
    fn no_zero_coefficients_stored() {
        let x = FockPoly::<Q>::var(1, 0, 0);
        let d = &x - &x;
        assert!(d.is_zero());
        assert_eq!(d.len(), 0);
    }
}
