//! Jacobi and generalized Laguerre polynomials for real, possibly
//! non-classical parameters.

use serde::Serialize;

use crate::nu::{LaguerreFactors, WavefunctionFactors};

/// P_n^{(a,b)} evaluated at x = 1 − 2s.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiSpec {
    pub degree: u32,
    pub a: f64,
    pub b: f64,
}

impl JacobiSpec {
    pub fn new(degree: u32, a: f64, b: f64) -> Self {
        Self { degree, a, b }
    }

    pub fn eval_s(&self, s: f64) -> f64 {
        jacobi(self.degree, self.a, self.b, 1.0 - 2.0 * s)
    }

    pub fn eval_x(&self, x: f64) -> f64 {
        jacobi(self.degree, self.a, self.b, x)
    }
}

/// Below this the recurrence denominators are treated as singular.
const SINGULAR: f64 = 1e-12;

/// P_n^{(a,b)}(x) by the ascending three-term recurrence, switching to the
/// explicit sum when a recurrence coefficient vanishes (integer a + b ≤ −2).
pub fn jacobi(n: u32, a: f64, b: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    if n == 1 {
        return p1;
    }
    let ab = a + b;
    let (mut pm2, mut pm1) = (1.0, p1);
    for k in 2..=n {
        let k = k as f64;
        let t = 2.0 * k + ab;
        let denom = 2.0 * k * (k + ab) * (t - 2.0);
        if denom.abs() < SINGULAR {
            return jacobi_sum(n, a, b, x);
        }
        let c1 = (t - 1.0) * (t * (t - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * t;
        let p = (c1 * pm1 - c2 * pm2) / denom;
        pm2 = pm1;
        pm1 = p;
    }
    pm1
}

/// Generalized binomial C(z, k) for real z.
fn binom(z: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (z - i as f64) / (i + 1) as f64)
}

/// Σ_m C(n+a, n−m) C(n+b, m) ((x−1)/2)^m ((x+1)/2)^{n−m}
pub fn jacobi_sum(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let nf = n as f64;
    let u = 0.5 * (x - 1.0);
    let v = 0.5 * (x + 1.0);
    (0..=n)
        .map(|m| binom(nf + a, n - m) * binom(nf + b, m) * u.powi(m as i32) * v.powi((n - m) as i32))
        .sum()
}

/// k-th derivative in x, via d/dx P_n^{(a,b)} = (n+a+b+1)/2 · P_{n−1}^{(a+1,b+1)}.
pub fn jacobi_derivative(n: u32, a: f64, b: f64, x: f64, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let nf = n as f64;
    let factor: f64 = (0..k).map(|j| 0.5 * (nf + a + b + 1.0 + j as f64)).product();
    let kf = k as f64;
    factor * jacobi(n - k, a + kf, b + kf, x)
}

/// L_n^{(a)}(x) by the three-term recurrence.
pub fn laguerre(n: u32, a: f64, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (mut lm2, mut lm1) = (1.0, 1.0 + a - x);
    for k in 2..=n {
        let k = k as f64;
        let l = ((2.0 * k - 1.0 + a - x) * lm1 - (k - 1.0 + a) * lm2) / k;
        lm2 = lm1;
        lm1 = l;
    }
    lm1
}

/// ψ(s) = s^{c12} (1 − c3 s)^{−c12 − c13/c3} P_n^{(c10−1, c11/c3−c10−1)}(1 − 2 c3 s)
pub fn eval_jacobi_form(f: &WavefunctionFactors, s: f64) -> f64 {
    let (a, b) = f.jacobi;
    s.powf(f.phi.s_power)
        * (1.0 - f.c3 * s).powf(f.phi.one_minus_power)
        * jacobi(f.degree, a, b, 1.0 - 2.0 * f.c3 * s)
}

/// ψ(s) = s^{c12} e^{c13 s} L_n^{(c10−1)}(c11 s)
pub fn eval_laguerre_form(f: &LaguerreFactors, s: f64) -> f64 {
    s.powf(f.power) * (f.exponential_rate * s).exp() * laguerre(f.degree, f.order, f.scale * s)
}
