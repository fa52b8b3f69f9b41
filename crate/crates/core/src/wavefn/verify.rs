//! Residual of the transformed radial equation
//!
//! ψ'' + (1 − s)/(s(1 − s)) ψ' + (−A s² + B s − C)/(s²(1 − s)²) ψ = 0
//!
//! evaluated on the closed-form dominant component with analytic
//! derivatives.

use super::components::WavefunctionTable;
use crate::error::{Error, Result};
use crate::spectrum::EnergyEquation;

pub const MIN_INTERIOR_POINTS: usize = 50;
/// Points with s or 1 − s below this are excluded.
pub const S_MARGIN: f64 = 1e-8;

/// max over interior points of |residual| / max(|ψ''|, |ψ'/s|, |potential term|),
/// with A, B, C taken at `energy`.
pub fn verify_ode(eq: &EnergyEquation, energy: f64, table: &WavefunctionTable) -> Result<f64> {
    let nu = eq.nu_problem(energy)?;
    let form = &table.dominant;
    let mut interior = 0;
    let mut worst = 0.0f64;
    for &r in &table.grid {
        let (s, oms) = form.s_pair(r);
        if !(s > S_MARGIN && oms > S_MARGIN) {
            continue;
        }
        let (v, d1, d2) = form.derivatives_s(s, oms);
        let first = (nu.c1 - nu.c2 * s) / (s * (1.0 - nu.c3 * s)) * d1;
        let c3_oms = if nu.c3 == 1.0 { oms } else { 1.0 - nu.c3 * s };
        let potential = (-nu.a * s * s + nu.b * s - nu.c) / (s * s * c3_oms * c3_oms) * v;
        let scale = d2.abs().max(first.abs()).max(potential.abs());
        interior += 1;
        if scale == 0.0 || !scale.is_finite() {
            continue;
        }
        let ratio = (d2 + first + potential).abs() / scale;
        if ratio.is_nan() {
            continue;
        }
        worst = worst.max(ratio);
    }
    if interior < MIN_INTERIOR_POINTS {
        return Err(Error::GridTooCoarse {
            interior,
            required: MIN_INTERIOR_POINTS,
        });
    }
    Ok(worst)
}
