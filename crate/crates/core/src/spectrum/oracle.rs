//! Radical-free cross-check of the energy condition.
//!
//! Squaring (P + a − b)² = Q twice, with a² = R1 and b² = R2, removes both
//! square roots:
//!
//! ```text
//! K = Q − P² − R1 − R2
//! X = 4 R1 (P² + R2) − K² − 4 P² R2
//! Y = 4 P K + 8 P R1
//! X² − R2 Y² = 0
//! ```
//!
//! R1 and K are linear in E and R2 is quadratic, so the eliminant has degree
//! at most six. Its roots include those of the three sign-conjugate
//! equations; only real roots inside the window that satisfy the unsquared
//! condition survive.

use num_complex::Complex64;
use serde::Serialize;

use super::equation::EnergyEquation;
use crate::error::{Error, Result};
use crate::poly::Poly;

/// Relative threshold for dropping vanishing leading coefficients.
const TRIM_TOL: f64 = 1e-14;
/// |Im z| below this (relative) counts as a real root.
const REAL_TOL: f64 = 1e-6;
/// Back-substitution acceptance, relative to max(1, |Q|).
const BACKSUB_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    /// Ascending coefficients of the eliminant in E.
    pub polynomial: Vec<f64>,
    pub roots: Vec<(f64, f64)>,
    /// Real roots in the window that satisfy the unsquared condition, ascending.
    pub surviving: Vec<f64>,
    /// Everything else: complex, out of window, or failing back-substitution.
    pub spurious: Vec<(f64, f64)>,
}

pub fn eliminant(eq: &EnergyEquation) -> Poly {
    let p = eq.params();
    let a2 = p.alpha * p.alpha;
    let k = eq.effective_kappa();
    let lc = 4.0 * k * (k - 1.0) * p.c0;
    let big_p = 2.0 * eq.state().n as f64 + 1.0;
    let v = eq.internal_coeffs();
    let (gamma, beta2) = eq.coupling_polys();

    let r1 = &Poly::constant((2.0 * k - 1.0).powi(2)) + &gamma.scale(v.sum() / a2);
    let r2 = &Poly::constant(lc) + &(&gamma.scale(v.v3) + &beta2).scale(1.0 / a2);
    let q = &(&gamma.scale(v.v1 / a2) + &beta2.scale(1.0 / a2)) + &Poly::constant(lc);

    let p2 = Poly::constant(big_p * big_p);
    let kk = &(&(&q - &p2) - &r1) - &r2;
    let x = &(&(&r1.scale(4.0) * &(&p2 + &r2)) - &(&kk * &kk)) - &r2.scale(4.0 * big_p * big_p);
    let y = &kk.scale(4.0 * big_p) + &r1.scale(8.0 * big_p);
    &(&x * &x) - &(&r2 * &(&y * &y))
}

/// Value and derivative of the eliminant at `e`, evaluated through the
/// intermediate quantities rather than the expanded coefficients, which
/// lose precision near clustered roots.
fn eliminant_at(eq: &EnergyEquation, e: f64) -> (f64, f64) {
    let p = eq.params();
    let a2 = p.alpha * p.alpha;
    let k = eq.effective_kappa();
    let lc = 4.0 * k * (k - 1.0) * p.c0;
    let bp = 2.0 * eq.state().n as f64 + 1.0;
    let p2 = bp * bp;
    let v = eq.internal_coeffs();
    let (gp, bp2) = eq.coupling_polys();
    let (g, dg) = (gp.eval(e), gp.derivative().eval(e));
    let (b2, db2) = (bp2.eval(e), bp2.derivative().eval(e));

    let (r1, dr1) = ((2.0 * k - 1.0).powi(2) + g * v.sum() / a2, dg * v.sum() / a2);
    let (r2, dr2) = (lc + (g * v.v3 + b2) / a2, (dg * v.v3 + db2) / a2);
    let (q, dq) = ((g * v.v1 + b2) / a2 + lc, (dg * v.v1 + db2) / a2);
    let (kk, dkk) = (q - p2 - r1 - r2, dq - dr1 - dr2);
    let x = 4.0 * r1 * (p2 + r2) - kk * kk - 4.0 * p2 * r2;
    let dx = 4.0 * dr1 * (p2 + r2) + 4.0 * r1 * dr2 - 2.0 * kk * dkk - 4.0 * p2 * dr2;
    let y = 4.0 * bp * kk + 8.0 * bp * r1;
    let dy = 4.0 * bp * dkk + 8.0 * bp * dr1;
    (x * x - r2 * y * y, 2.0 * x * dx - dr2 * y * y - 2.0 * r2 * y * dy)
}

fn polish(eq: &EnergyEquation, x0: f64) -> f64 {
    let mut x = x0;
    let mut best = (eliminant_at(eq, x).0.abs(), x);
    for _ in 0..60 {
        let (v, d) = eliminant_at(eq, x);
        if d == 0.0 || v == 0.0 {
            break;
        }
        let next = x - v / d;
        let nv = eliminant_at(eq, next).0.abs();
        if nv.is_nan() || nv >= best.0 {
            break;
        }
        best = (nv, next);
        x = next;
    }
    best.1
}

pub fn polynomial_oracle(eq: &EnergyEquation, margin_rel: f64) -> Result<OracleReport> {
    let raw = eliminant(eq);
    if raw.is_zero() {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let poly = raw.trimmed(TRIM_TOL);
    let window = eq.search_window(margin_rel)?;
    let roots = poly.roots();

    let mut surviving = Vec::new();
    let mut spurious = Vec::new();
    for z in &roots {
        let accepted = if z.im.abs() <= REAL_TOL * z.re.abs().max(1.0) {
            let e = polish(eq, z.re);
            let inside = e > window.0 && e < window.1;
            let ok = inside
                && eq
                    .residual_unchecked(e)
                    .map(|f| f.abs() <= BACKSUB_TOL * eq.rhs(e).abs().max(1.0))
                    .unwrap_or(false);
            ok.then_some(e)
        } else {
            None
        };
        match accepted {
            Some(e) => surviving.push(e),
            None => spurious.push((z.re, z.im)),
        }
    }
    surviving.sort_by(f64::total_cmp);
    surviving.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(OracleReport {
        polynomial: poly.0,
        roots: roots.iter().map(|z: &Complex64| (z.re, z.im)).collect(),
        surviving,
        spurious,
    })
}
