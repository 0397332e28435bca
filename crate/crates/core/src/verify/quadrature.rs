//! Gauss-Legendre rules and the radial reduction on the unit ball.

use std::f64::consts::PI;

use crate::scalar::C64;

use super::Result;

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// `order`-point Gauss-Legendre rule on `[0, 1]`, by Newton iteration on
/// `P_order` from the Chebyshev initial guesses.
pub fn gauss_legendre(order: usize) -> GaussLegendre {
    assert!(order >= 1);
    let mut nodes = Vec::with_capacity(order);
    let mut weights = Vec::with_capacity(order);
    for i in 0..order {
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes.push(0.5 * (1.0 - x));
        weights.push(0.5 * w);
    }
    GaussLegendre { nodes, weights }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

impl GaussLegendre {
    pub fn integrate<F>(&self, mut f: F) -> Result<C64>
    where
        F: FnMut(f64) -> Result<C64>,
    {
        let mut acc = C64::new(0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(*x)? * *w;
        }
        Ok(acc)
    }
}

/// `int_{|z|<1, z in C^m} F(|z|^2) dz` for a radial `F`, returned with the
/// difference between the `order` and `2 order` rules.
///
/// With `1 - rho = v^2` the integral becomes
/// `pi^m/(m-1)! int_0^1 (1-v^2)^{m-1} F(1-v^2) 2v dv`, which is polynomial in
/// `v` whenever `F` is a combination of half-integral powers of `1 - rho`.
pub fn radial_quadrature<F>(m: usize, order: usize, f: F) -> Result<(C64, f64)>
where
    F: Fn(f64) -> Result<C64>,
{
    let scale = PI.powi(m as i32) / (1..m).map(|k| k as f64).product::<f64>();
    let g = |v: f64| -> Result<C64> {
        let rho = 1.0 - v * v;
        Ok(f(rho)? * (rho.powi(m as i32 - 1) * 2.0 * v * scale))
    };
    let coarse = gauss_legendre(order).integrate(g)?;
    let fine = gauss_legendre(2 * order).integrate(g)?;
    Ok((fine, (fine - coarse).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let r = gauss_legendre(5);
        // degree 9 is exact for 5 points
        let v = r.integrate(|x| Ok(C64::new(x.powi(9), 0.0))).unwrap();
        assert!((v.re - 0.1).abs() < 1e-15);
        let total: f64 = r.weights.iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn ball_volume_and_moment() {
        // vol of unit ball in C^2 = pi^2/2; int (1-rho)^{1/2} over C^1 = 2 pi/3
        let (v, _) = radial_quadrature(2, 16, |_| Ok(C64::new(1.0, 0.0))).unwrap();
        assert!((v.re - PI * PI / 2.0).abs() < 1e-13);
        let (w, err) = radial_quadrature(1, 16, |rho| Ok(C64::new((1.0 - rho).sqrt(), 0.0))).unwrap();
        assert!((w.re - 2.0 * PI / 3.0).abs() < 1e-13);
        assert!(err < 1e-12);
    }
}
