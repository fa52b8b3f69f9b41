use serde::Serialize;

use crate::error::{Error, Radicand, Result};
use crate::model::{potential_coeffs, ModelParams, PotentialCoeffs, StateIndex, Symmetry};
use crate::nu::{clamped_sqrt, NuProblem};
use crate::poly::Poly;

/// How the energy enters the potential coupling and the mass term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
enum Coupling {
    /// γ = E − M − c, β² = (M + E)(M − E + c)
    Pseudospin { c: f64 },
    /// γ = M + E − c, β² = (M − E)(M + E − c)
    Spin { c: f64 },
}

/// The energy quantization condition of one state in one symmetry limit.
///
/// With k = Λ_κ (pseudospin) or η_κ (spin), L = k(k − 1), P = 2n + 1 and
///
/// ```text
/// R1(E) = (2k − 1)² + γ (V1 + V2 + V3)/α²
/// R2(E) = 4 L C0 + (γ V3 + β²)/α²
/// Q(E)  = γ V1/α² + β²/α² + 4 L C0
/// ```
///
/// the condition reads f(E) = (P + √R1 − √R2)² − Q = 0, which is exactly
/// four times the NU polynomial condition for the coefficients returned by
/// [`EnergyEquation::nu_problem`].
///
/// An equation may also be obtained by mapping the opposite symmetry limit
/// (κ → κ ± 1, V → −V, E → −E, C → −C); such equations evaluate the other
/// limit's formulas internally but describe the same physical problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyEquation {
    params: ModelParams,
    state: StateIndex,
    physical_coeffs: PotentialCoeffs,
    internal: PotentialCoeffs,
    coupling: Coupling,
    energy_flip: bool,
    effective_kappa: f64,
    mapped: bool,
}

impl EnergyEquation {
    pub fn new(params: ModelParams, state: StateIndex) -> Result<Self> {
        let coeffs = potential_coeffs(&params)?;
        Self::with_coeffs(params, state, coeffs)
    }

    /// Uses explicit potential strengths instead of the (α, A) parametrization.
    pub fn with_coeffs(
        params: ModelParams,
        state: StateIndex,
        coeffs: PotentialCoeffs,
    ) -> Result<Self> {
        params.validate()?;
        StateIndex::new(state.n, state.kappa)?;
        let coupling = match params.symmetry {
            Symmetry::Pseudospin => Coupling::Pseudospin { c: params.c_sym },
            Symmetry::Spin => Coupling::Spin { c: params.c_sym },
        };
        Ok(Self {
            params,
            state,
            physical_coeffs: coeffs,
            internal: coeffs,
            coupling,
            energy_flip: false,
            effective_kappa: state.effective_kappa(params.symmetry, params.tensor_h),
            mapped: false,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn state(&self) -> StateIndex {
        self.state
    }

    pub fn symmetry(&self) -> Symmetry {
        self.params.symmetry
    }

    /// Potential strengths of the physical problem.
    pub fn coeffs(&self) -> PotentialCoeffs {
        self.physical_coeffs
    }

    /// Λ_κ or η_κ as it enters the formulas.
    pub fn effective_kappa(&self) -> f64 {
        self.effective_kappa
    }

    pub fn is_mapped(&self) -> bool {
        self.mapped
    }

    /// The spin-limit equation for the same (n, κ), with C_s = −C_ps,
    /// evaluated through the pseudospin formulas with κ → κ + 1, V → −V,
    /// E → −E.
    pub fn spin_from_pseudospin_mapping(&self) -> Result<Self> {
        if self.params.symmetry != Symmetry::Pseudospin || self.mapped {
            return Err(Error::WrongSymmetry {
                expected: "directly assembled pseudospin equation",
            });
        }
        let mut params = self.params.with_symmetry(Symmetry::Spin);
        params.c_sym = -self.params.c_sym;
        let internal = self.state.kappa as f64 + 1.0 + self.params.tensor_h;
        Ok(Self {
            params,
            state: self.state,
            physical_coeffs: self.physical_coeffs,
            internal: self.physical_coeffs.scaled(-1.0),
            coupling: Coupling::Pseudospin { c: -params.c_sym },
            energy_flip: true,
            effective_kappa: internal,
            mapped: true,
        })
    }

    /// Inverse of [`Self::spin_from_pseudospin_mapping`]: κ → κ − 1 on the
    /// spin formulas, V → −V, E → −E, C_ps = −C_s.
    pub fn pseudospin_from_spin_mapping(&self) -> Result<Self> {
        if self.params.symmetry != Symmetry::Spin || self.mapped {
            return Err(Error::WrongSymmetry {
                expected: "directly assembled spin equation",
            });
        }
        let mut params = self.params.with_symmetry(Symmetry::Pseudospin);
        params.c_sym = -self.params.c_sym;
        let internal = self.state.kappa as f64 + self.params.tensor_h;
        Ok(Self {
            params,
            state: self.state,
            physical_coeffs: self.physical_coeffs,
            internal: self.physical_coeffs.scaled(-1.0),
            coupling: Coupling::Spin { c: -params.c_sym },
            energy_flip: true,
            effective_kappa: internal,
            mapped: true,
        })
    }

    fn internal_energy(&self, e: f64) -> f64 {
        if self.energy_flip {
            -e
        } else {
            e
        }
    }

    /// (γ, β²) at the physical energy `e`, in the convention of the
    /// formulas being evaluated.
    pub fn couplings(&self, e: f64) -> (f64, f64) {
        let m = self.params.mass;
        let x = self.internal_energy(e);
        match self.coupling {
            Coupling::Pseudospin { c } => (x - m - c, (m + x) * (m - x + c)),
            Coupling::Spin { c } => (m + x - c, (m - x) * (m + x - c)),
        }
    }

    /// γ(E) and β²(E) as polynomials in the physical energy.
    pub fn coupling_polys(&self) -> (Poly, Poly) {
        let m = self.params.mass;
        let (gamma, beta2) = match self.coupling {
            Coupling::Pseudospin { c } => (
                Poly::linear(-m - c, 1.0),
                &Poly::linear(m, 1.0) * &Poly::linear(m + c, -1.0),
            ),
            Coupling::Spin { c } => (
                Poly::linear(m - c, 1.0),
                &Poly::linear(m, -1.0) * &Poly::linear(m - c, 1.0),
            ),
        };
        if self.energy_flip {
            (gamma.reflect(), beta2.reflect())
        } else {
            (gamma, beta2)
        }
    }

    fn lk(&self) -> f64 {
        self.effective_kappa * (self.effective_kappa - 1.0)
    }

    pub(crate) fn internal_coeffs(&self) -> PotentialCoeffs {
        self.internal
    }

    /// (R1, R2) at `e`, before any clamping.
    pub fn radicands(&self, e: f64) -> (f64, f64) {
        let (gamma, beta2) = self.couplings(e);
        let a2 = self.params.alpha * self.params.alpha;
        let k = self.effective_kappa;
        let r1 = (2.0 * k - 1.0).powi(2) + gamma * self.internal.sum() / a2;
        let r2 = 4.0 * self.lk() * self.params.c0 + (gamma * self.internal.v3 + beta2) / a2;
        (r1, r2)
    }

    /// Right-hand side Q(E).
    pub fn rhs(&self, e: f64) -> f64 {
        let (gamma, beta2) = self.couplings(e);
        let a2 = self.params.alpha * self.params.alpha;
        gamma * self.internal.v1 / a2 + beta2 / a2 + 4.0 * self.lk() * self.params.c0
    }

    /// (√R1, √R2) with the radicand clamping policy of the NU engine.
    pub fn roots_of_radicands(&self, e: f64) -> Result<(f64, f64)> {
        let (r1, r2) = self.radicands(e);
        let a = 2.0 * clamped_sqrt(Radicand::C9, r1 / 4.0)?;
        let b = 2.0 * clamped_sqrt(Radicand::C8, r2 / 4.0)?;
        Ok((a, b))
    }

    /// f(E) without the window check.
    pub fn residual_unchecked(&self, e: f64) -> Result<f64> {
        let (a, b) = self.roots_of_radicands(e)?;
        let p = 2.0 * self.state.n as f64 + 1.0;
        let lhs = p + a - b;
        Ok(lhs * lhs - self.rhs(e))
    }

    /// f(E) = (2n + 1 + √R1 − √R2)² − Q(E), for E inside the physical window.
    pub fn quantization_function(&self, e: f64) -> Result<f64> {
        let (lo, hi) = self.search_window(super::DEFAULT_WINDOW_MARGIN)?;
        if !(e >= lo && e <= hi) {
            return Err(Error::WindowViolation { energy: e, lo, hi });
        }
        self.residual_unchecked(e)
    }

    /// Energies where β² ≥ 0, shrunk by `margin_rel · M` at both ends.
    pub fn search_window(&self, margin_rel: f64) -> Result<(f64, f64)> {
        let m = self.params.mass;
        let eps = margin_rel * m;
        // Both direct and mapped forms describe the same physical limit.
        let c = self.params.c_sym;
        let (lo, hi) = match self.params.symmetry {
            Symmetry::Pseudospin => (-m + eps, m + c - eps),
            Symmetry::Spin => (-m + c + eps, m - eps),
        };
        if lo < hi {
            Ok((lo, hi))
        } else {
            Err(Error::NoPhysicalWindow { lo, hi })
        }
    }

    /// Normal-form coefficients (c1 = c2 = c3 = 1) of the transformed radial
    /// equation in s = e^{−2αr} at energy `e`.
    pub fn nu_problem(&self, e: f64) -> Result<NuProblem> {
        let (gamma, beta2) = self.couplings(e);
        let four_a2 = 4.0 * self.params.alpha * self.params.alpha;
        let l = self.lk();
        let c0 = self.params.c0;
        let v = self.internal;
        NuProblem::new(
            1.0,
            1.0,
            1.0,
            l * c0 + gamma * v.v1 / four_a2 + beta2 / four_a2,
            l * (2.0 * c0 - 1.0) - gamma * v.v2 / four_a2 + 2.0 * beta2 / four_a2,
            l * c0 + gamma * v.v3 / four_a2 + beta2 / four_a2,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(sym: Symmetry, h: f64, n: u32, kappa: i32) -> EnergyEquation {
        let p = ModelParams::reference(sym).with_tensor(h);
        EnergyEquation::new(p, StateIndex::new(n, kappa).unwrap()).unwrap()
    }

    #[test]
    fn window_edges() {
        let e = eq(Symmetry::Pseudospin, 1.0, 1, -1);
        let (lo, hi) = e.search_window(1e-9).unwrap();
        assert_eq!(lo, -5.0 + 5e-9);
        assert_eq!(hi, 5.0 - 5e-9);
        let e = eq(Symmetry::Spin, 1.0, 1, -1);
        assert_eq!(e.search_window(1e-9).unwrap(), (-5.0 + 5e-9, 5.0 - 5e-9));

        let mut p = ModelParams::reference(Symmetry::Pseudospin);
        p.c_sym = -10.0;
        let e = EnergyEquation::new(p, StateIndex::new(0, -1).unwrap()).unwrap();
        assert!(matches!(
            e.search_window(1e-9),
            Err(Error::NoPhysicalWindow { .. })
        ));
    }

    #[test]
    fn outside_window_is_rejected() {
        let e = eq(Symmetry::Pseudospin, 1.0, 1, -1);
        assert!(matches!(
            e.quantization_function(5.5),
            Err(Error::WindowViolation { .. })
        ));
    }

    #[test]
    fn couplings_follow_definitions() {
        let mut p = ModelParams::reference(Symmetry::Pseudospin);
        p.c_sym = 0.3;
        let s = StateIndex::new(0, -1).unwrap();
        let ps = EnergyEquation::new(p, s).unwrap();
        let e = -2.0;
        assert_eq!(ps.couplings(e), (e - 5.0 - 0.3, (5.0 + e) * (5.0 - e + 0.3)));
        let sp = EnergyEquation::new(p.with_symmetry(Symmetry::Spin), s).unwrap();
        assert_eq!(sp.couplings(e), (5.0 + e - 0.3, (5.0 - e) * (5.0 + e - 0.3)));
        let (g, b) = sp.coupling_polys();
        assert!((g.eval(e) - sp.couplings(e).0).abs() < 1e-14);
        assert!((b.eval(e) - sp.couplings(e).1).abs() < 1e-13);
    }

    #[test]
    fn mapping_flips_energy_and_coupling() {
        let ps = eq(Symmetry::Pseudospin, 1.0, 0, -2);
        let sp = ps.spin_from_pseudospin_mapping().unwrap();
        assert_eq!(sp.symmetry(), Symmetry::Spin);
        assert_eq!(sp.effective_kappa(), -2.0 + 1.0 + 1.0);
        assert_eq!(sp.effective_kappa(), sp.state().eta(1.0));
        let direct = eq(Symmetry::Spin, 1.0, 0, -2);
        for &e in &[-4.9, -1.0, 0.0, 2.5, 4.9] {
            let (g1, b1) = sp.couplings(e);
            let (g2, b2) = direct.couplings(e);
            // γ flips sign together with V, β² is unchanged
            assert!((g1 + g2).abs() < 1e-14 && (b1 - b2).abs() < 1e-12);
        }
        assert!(sp.spin_from_pseudospin_mapping().is_err());
        assert!(ps.pseudospin_from_spin_mapping().is_err());
    }
}
