use serde::Serialize;

use super::jacobi::jacobi_derivative;
use super::quad::integrate_panels;
use super::verify::verify_ode;
use crate::error::{Error, Radicand, Result};
use crate::model::{StateIndex, Symmetry};
use crate::nu::{clamped_sqrt, Branch};
use crate::spectrum::EnergyEquation;

/// Tail cut: e^{−2ανr_max} equals this.
pub const TAIL_CUTOFF: f64 = 1e-12;
pub const DEFAULT_GRID_POINTS: usize = 2000;
pub const DEFAULT_R_MIN: f64 = 1e-4;
const NORM_ABS_TOL: f64 = 1e-13;
const NORM_REL_TOL: f64 = 1e-12;

/// s^p (1 − s)^q P_n^{(a,b)}(1 − 2s) with s = e^{−2αr}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub degree: u32,
    pub s_power: f64,
    pub one_minus_power: f64,
    pub jacobi: (f64, f64),
    pub alpha: f64,
}

impl ClosedForm {
    /// (s, 1 − s) at radius r, the second without cancellation.
    pub fn s_pair(&self, r: f64) -> (f64, f64) {
        let t = -2.0 * self.alpha * r;
        (t.exp(), -t.exp_m1())
    }

    pub fn eval_s(&self, s: f64, one_minus_s: f64) -> f64 {
        self.derivatives_s(s, one_minus_s).0
    }

    /// (ψ, dψ/ds, d²ψ/ds²)
    pub fn derivatives_s(&self, s: f64, one_minus_s: f64) -> (f64, f64, f64) {
        let (p, q) = (self.s_power, self.one_minus_power);
        let (a, b) = self.jacobi;
        let n = self.degree;
        let x = one_minus_s - s;
        let u = s.powf(p) * one_minus_s.powf(q);
        let w = p / s - q / one_minus_s;
        let dw = -p / (s * s) - q / (one_minus_s * one_minus_s);
        let pn = jacobi_derivative(n, a, b, x, 0);
        let px = jacobi_derivative(n, a, b, x, 1);
        let pxx = jacobi_derivative(n, a, b, x, 2);
        (
            u * pn,
            u * (w * pn - 2.0 * px),
            u * ((w * w + dw) * pn - 4.0 * w * px + 4.0 * pxx),
        )
    }

    /// (ψ, dψ/dr), with s^p taken as exp(p·ln s) so that small p survives
    /// radii where s itself underflows.
    pub fn eval_r(&self, r: f64) -> (f64, f64) {
        let t = -2.0 * self.alpha * r;
        let (s, oms) = (t.exp(), -t.exp_m1());
        let (p, q) = (self.s_power, self.one_minus_power);
        let (a, b) = self.jacobi;
        let x = oms - s;
        let u = (p * t).exp() * oms.powf(q);
        let pn = jacobi_derivative(self.degree, a, b, x, 0);
        let px = jacobi_derivative(self.degree, a, b, x, 1);
        // s·dψ/ds = u·[(p − q·s/(1 − s))·P − 2s·P']
        let s_ds = u * ((p - q * s / oms) * pn - 2.0 * s * px);
        (u * pn, -2.0 * self.alpha * s_ds)
    }
}

/// The first-order operator producing the small component:
/// (d/dr + k/r) ψ / denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CouplingOperator {
    pub k: f64,
    pub denominator: f64,
}

impl CouplingOperator {
    pub fn apply(&self, form: &ClosedForm, r: f64) -> f64 {
        let (v, dv) = form.eval_r(r);
        (dv + self.k / r * v) / self.denominator
    }
}

/// ν multiplies the s-exponent, μ sets the (1 − s)-exponent (1 + μ)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Exponents {
    pub nu: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WavefunctionTable {
    pub symmetry: Symmetry,
    pub state: StateIndex,
    pub energy: f64,
    pub branch: Branch,
    pub grid: Vec<f64>,
    /// Lower component samples.
    pub g: Vec<f64>,
    /// Upper component samples, empty until the small component is built.
    pub f: Vec<f64>,
    /// B_n (pseudospin) or N_nκ (spin); 1 before normalization.
    pub norm_constant: f64,
    pub node_count: u32,
    pub residual_norm: Option<f64>,
    pub exponents: Exponents,
    /// Unnormalized closed form of G (pseudospin) or F (spin).
    pub dominant: ClosedForm,
    pub coupling: Option<CouplingOperator>,
}

impl WavefunctionTable {
    /// Samples of the closed-form component.
    pub fn dominant_values(&self) -> &[f64] {
        match self.symmetry {
            Symmetry::Pseudospin => &self.g,
            Symmetry::Spin => &self.f,
        }
    }

    pub fn is_normalized(&self) -> bool {
        !self.f.is_empty() && !self.g.is_empty()
    }
}

pub fn exponents(eq: &EnergyEquation, energy: f64) -> Result<Exponents> {
    let (r1, r2) = eq.radicands(energy);
    Ok(Exponents {
        nu: clamped_sqrt(Radicand::C8, r2 / 4.0)?,
        mu: clamped_sqrt(Radicand::C9, r1)?,
    })
}

/// Closed form of the dominant component on the chosen branch.
pub fn dominant_closed_form(eq: &EnergyEquation, energy: f64, branch: Branch) -> Result<(ClosedForm, Exponents)> {
    if eq.is_mapped() {
        return Err(Error::WrongSymmetry {
            expected: "directly assembled equation",
        });
    }
    let ex = exponents(eq, energy)?;
    if branch == Branch::Decaying && ex.nu <= 0.0 {
        return Err(Error::NonNormalizable(format!(
            "ν = {} admits no decaying solution",
            ex.nu
        )));
    }
    let p = branch.sign() * ex.nu;
    Ok((
        ClosedForm {
            degree: eq.state().n,
            s_power: p,
            one_minus_power: 0.5 * (1.0 + ex.mu),
            jacobi: (2.0 * p, ex.mu),
            alpha: eq.params().alpha,
        },
        ex,
    ))
}

fn coupling_operator(eq: &EnergyEquation, energy: f64) -> Result<CouplingOperator> {
    let p = eq.params();
    let kh = eq.state().kappa as f64 + p.tensor_h;
    let (k, denominator) = match eq.symmetry() {
        Symmetry::Pseudospin => (-kh, p.mass - energy + p.c_sym),
        Symmetry::Spin => (kh, p.mass + energy - p.c_sym),
    };
    if denominator.abs() < 1e-8 * p.mass {
        return Err(Error::DenominatorNearZero { value: denominator });
    }
    Ok(CouplingOperator { k, denominator })
}

/// Radius beyond which the decaying factor e^{−2ανr} is below [`TAIL_CUTOFF`].
pub fn r_max(alpha: f64, nu: f64) -> f64 {
    -TAIL_CUTOFF.ln() / (2.0 * alpha * nu)
}

/// `points` log-spaced radii over [r_min, r_max].
pub fn log_grid(r_min: f64, r_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(r_min > 0.0 && r_max > r_min && points >= 2) {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: format!("need 0 < r_min < r_max and ≥ 2 points, got ({r_min}, {r_max}, {points})"),
        });
    }
    let (l0, l1) = (r_min.ln(), r_max.ln());
    let step = (l1 - l0) / (points - 1) as f64;
    Ok((0..points)
        .map(|i| match i {
            0 => r_min,
            i if i == points - 1 => r_max,
            i => (l0 + step * i as f64).exp(),
        })
        .collect())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    let ok = !grid.is_empty()
        && grid[0] > 0.0
        && grid.windows(2).all(|w| w[1] > w[0])
        && grid.iter().all(|r| r.is_finite());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "grid",
            reason: "radii must be positive, finite and strictly increasing".into(),
        })
    }
}

/// Interior sign changes, ignoring exact zeros.
pub fn node_count(values: &[f64]) -> u32 {
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v == 0.0 || !v.is_finite() {
            continue;
        }
        if last != 0.0 && last.signum() != v.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// ∫₀^{r_max} (ψ² + χ²) dr with χ the coupled component.
pub fn norm_integral(form: &ClosedForm, op: &CouplingOperator, r_end: f64) -> f64 {
    let integrand = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let (v, dv) = form.eval_r(r);
        let c = (dv + op.k / r * v) / op.denominator;
        v * v + c * c
    };
    let mut breaks = vec![0.0];
    let mut b = 1e-6;
    while b < r_end {
        breaks.push(b);
        b *= 10.0;
    }
    breaks.push(r_end);
    integrate_panels(integrand, &breaks, NORM_ABS_TOL, NORM_REL_TOL).value
}

fn build_dominant(
    eq: &EnergyEquation,
    energy: f64,
    branch: Branch,
    grid: Option<&[f64]>,
) -> Result<WavefunctionTable> {
    let (form, ex) = dominant_closed_form(eq, energy, branch)?;
    let grid = match grid {
        Some(g) => {
            check_grid(g)?;
            g.to_vec()
        }
        None => {
            let nu = if ex.nu > 0.0 { ex.nu } else { 1.0 };
            log_grid(DEFAULT_R_MIN, r_max(form.alpha, nu), DEFAULT_GRID_POINTS)?
        }
    };
    let values: Vec<f64> = grid.iter().map(|&r| form.eval_r(r).0).collect();
    let nodes = node_count(&values);
    let (g, f) = match eq.symmetry() {
        Symmetry::Pseudospin => (values, Vec::new()),
        Symmetry::Spin => (Vec::new(), values),
    };
    let mut table = WavefunctionTable {
        symmetry: eq.symmetry(),
        state: eq.state(),
        energy,
        branch,
        grid,
        g,
        f,
        norm_constant: 1.0,
        node_count: nodes,
        residual_norm: None,
        exponents: ex,
        dominant: form,
        coupling: None,
    };
    table.residual_norm = residual_if_resolved(eq, &table);
    Ok(table)
}

fn residual_if_resolved(eq: &EnergyEquation, table: &WavefunctionTable) -> Option<f64> {
    match verify_ode(eq, table.energy, table) {
        Ok(v) => Some(v),
        Err(Error::GridTooCoarse { .. }) => None,
        Err(_) => None,
    }
}

/// Builds the small component, then normalizes both jointly.
fn attach_coupled(eq: &EnergyEquation, mut table: WavefunctionTable) -> Result<WavefunctionTable> {
    if table.branch != Branch::Decaying {
        return Err(Error::NonNormalizable(
            "the growing s-branch has a divergent norm integral".into(),
        ));
    }
    let op = coupling_operator(eq, table.energy)?;
    let form = table.dominant;
    let integral = norm_integral(&form, &op, r_max(form.alpha, table.exponents.nu));
    if !(integral.is_finite() && integral > 0.0) {
        return Err(Error::NonNormalizable(format!("norm integral {integral}")));
    }
    let n = integral.sqrt().recip();
    let dominant: Vec<f64> = table.grid.iter().map(|&r| n * form.eval_r(r).0).collect();
    let coupled: Vec<f64> = table.grid.iter().map(|&r| n * op.apply(&form, r)).collect();
    match table.symmetry {
        Symmetry::Pseudospin => {
            table.g = dominant;
            table.f = coupled;
        }
        Symmetry::Spin => {
            table.f = dominant;
            table.g = coupled;
        }
    }
    table.norm_constant = n;
    table.coupling = Some(op);
    Ok(table)
}

fn require(eq: &EnergyEquation, symmetry: Symmetry) -> Result<()> {
    if eq.symmetry() == symmetry {
        Ok(())
    } else {
        Err(Error::WrongSymmetry {
            expected: symmetry.as_str(),
        })
    }
}

/// Unnormalized G on the decaying branch (pseudospin limit); F is empty.
pub fn lower_component(eq: &EnergyEquation, energy: f64, grid: Option<&[f64]>) -> Result<WavefunctionTable> {
    lower_component_with_branch(eq, energy, Branch::Decaying, grid)
}

pub fn lower_component_with_branch(
    eq: &EnergyEquation,
    energy: f64,
    branch: Branch,
    grid: Option<&[f64]>,
) -> Result<WavefunctionTable> {
    require(eq, Symmetry::Pseudospin)?;
    build_dominant(eq, energy, branch, grid)
}

/// Unnormalized dominant component (G or F) on either branch.
pub fn dominant_component(
    eq: &EnergyEquation,
    energy: f64,
    branch: Branch,
    grid: Option<&[f64]>,
) -> Result<WavefunctionTable> {
    build_dominant(eq, energy, branch, grid)
}

/// F = (d/dr − (κ + H)/r) G / (M − E + C_ps), then joint normalization.
pub fn upper_component_from_lower(eq: &EnergyEquation, table: WavefunctionTable) -> Result<WavefunctionTable> {
    require(eq, Symmetry::Pseudospin)?;
    attach_coupled(eq, table)
}

/// F in closed form and G = (d/dr + (κ + H)/r) F / (M + E − C_s), jointly
/// normalized.
pub fn spin_limit_components(eq: &EnergyEquation, energy: f64, grid: Option<&[f64]>) -> Result<WavefunctionTable> {
    require(eq, Symmetry::Spin)?;
    let table = build_dominant(eq, energy, Branch::Decaying, grid)?;
    attach_coupled(eq, table)
}

/// Both normalized components in whichever limit `eq` describes.
pub fn components(eq: &EnergyEquation, energy: f64, grid: Option<&[f64]>) -> Result<WavefunctionTable> {
    match eq.symmetry() {
        Symmetry::Pseudospin => upper_component_from_lower(eq, lower_component(eq, energy, grid)?),
        Symmetry::Spin => spin_limit_components(eq, energy, grid),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use approx::assert_relative_eq;

    fn eq(sym: Symmetry, h: f64, n: u32, kappa: i32) -> EnergyEquation {
        let p = ModelParams::reference(sym).with_tensor(h);
        EnergyEquation::new(p, StateIndex::new(n, kappa).unwrap()).unwrap()
    }

    #[test]
    fn derivatives_match_differences() {
        let f = ClosedForm {
            degree: 2,
            s_power: 0.8,
            one_minus_power: 1.4,
            jacobi: (1.6, 1.8),
            alpha: 0.6,
        };
        let (s, h) = (0.37, 1e-5);
        let (_, d1, d2) = f.derivatives_s(s, 1.0 - s);
        let v = |s: f64| f.eval_s(s, 1.0 - s);
        assert_relative_eq!(d1, (v(s + h) - v(s - h)) / (2.0 * h), max_relative = 1e-8);
        assert_relative_eq!(d2, (v(s + h) - 2.0 * v(s) + v(s - h)) / (h * h), max_relative = 1e-5);
        let r = 1.3;
        let fd = (f.eval_r(r + h).0 - f.eval_r(r - h).0) / (2.0 * h);
        assert_relative_eq!(f.eval_r(r).1, fd, max_relative = 1e-8);
    }

    #[test]
    fn coupling_operator_definition() {
        // H = 0, κ = −1: F = (G′ + G/r)/(M − E + C_ps)
        let e = eq(Symmetry::Pseudospin, 0.0, 1, -1);
        let op = coupling_operator(&e, -4.5).unwrap();
        assert_eq!(op.k, 1.0);
        assert_eq!(op.denominator, 9.5);
        let flat = ClosedForm {
            degree: 0,
            s_power: 0.0,
            one_minus_power: 0.0,
            jacobi: (0.0, 0.0),
            alpha: 0.6,
        };
        assert_relative_eq!(op.apply(&flat, 2.0), 0.5 / 9.5, epsilon = 1e-15);
    }

    #[test]
    fn denominator_guard() {
        let e = eq(Symmetry::Pseudospin, 1.0, 0, -1);
        assert!(matches!(
            coupling_operator(&e, 5.0),
            Err(Error::DenominatorNearZero { .. })
        ));
        let e = eq(Symmetry::Spin, 1.0, 0, -1);
        assert!(matches!(
            coupling_operator(&e, -5.0),
            Err(Error::DenominatorNearZero { .. })
        ));
    }

    #[test]
    fn grid_and_nodes() {
        let g = log_grid(1e-4, 10.0, 5).unwrap();
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[4], 10.0);
        assert_relative_eq!(g[2], 10f64.powf(-1.5), max_relative = 1e-12);
        assert!(log_grid(1.0, 0.5, 10).is_err());
        assert_eq!(node_count(&[1.0, 0.5, 0.0, -0.2, -0.1, 0.3]), 2);
        assert_relative_eq!(TAIL_CUTOFF, (-2.0 * 0.6 * 0.5 * r_max(0.6, 0.5)).exp(), max_relative = 1e-12);
    }

    #[test]
    fn wrong_limit_rejected() {
        let s = eq(Symmetry::Spin, 1.0, 0, -2);
        assert!(matches!(lower_component(&s, -4.9, None), Err(Error::WrongSymmetry { .. })));
        let p = eq(Symmetry::Pseudospin, 1.0, 0, -2);
        assert!(matches!(spin_limit_components(&p, -4.9, None), Err(Error::WrongSymmetry { .. })));
    }

    #[test]
    fn printed_branch_cannot_be_normalized() {
        let e = eq(Symmetry::Pseudospin, 1.0, 1, -1);
        let t = lower_component_with_branch(&e, -4.672750523, Branch::Printed, None).unwrap();
        assert!(matches!(upper_component_from_lower(&e, t), Err(Error::NonNormalizable(_))));
    }
}
