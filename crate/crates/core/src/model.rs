//! Physical inputs, quantum-number bookkeeping and the radial functions of
//! the problem: the attractive radial potential, the Coulomb-like tensor
//! term and the exponential approximation of the centrifugal barrier.
//!
//! Units are fm⁻¹ throughout (ħ = c = 1).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default value of the dimensionless offset in the centrifugal approximation.
pub const DEFAULT_C0: f64 = 1.0 / 12.0;

/// Which constant-potential limit of the Dirac equation is being solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    /// Σ = V + S constant; the lower component G carries the dynamics.
    Pseudospin,
    /// Δ = V − S constant; the upper component F carries the dynamics.
    Spin,
}

impl Symmetry {
    pub fn as_str(self) -> &'static str {
        match self {
            Symmetry::Pseudospin => "pseudospin",
            Symmetry::Spin => "spin",
        }
    }
}

impl std::fmt::Display for Symmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Symmetry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pseudospin" => Ok(Symmetry::Pseudospin),
            "spin" => Ok(Symmetry::Spin),
            other => Err(Error::InvalidParameter {
                name: "symmetry",
                reason: format!("expected `pseudospin` or `spin`, got `{other}`"),
            }),
        }
    }
}

/// Inputs for one problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Fermion mass M (fm⁻¹).
    pub mass: f64,
    pub symmetry: Symmetry,
    /// C_ps in the pseudospin limit, C_s in the spin limit (fm⁻¹).
    pub c_sym: f64,
    /// Tensor strength H.
    pub tensor_h: f64,
    /// Range parameter α (fm⁻¹).
    pub alpha: f64,
    /// Shape parameter A.
    pub a_shape: f64,
    /// Offset C₀ of the centrifugal approximation.
    pub c0: f64,
    /// Enforce α > 1/2 and 4 < A < 8.
    pub strict_domain: bool,
}

impl ModelParams {
    /// M = 5 fm⁻¹, C = 0, H = 1, α = 0.6, A = 5, C₀ = 1/12.
    pub fn reference(symmetry: Symmetry) -> Self {
        Self {
            mass: 5.0,
            symmetry,
            c_sym: 0.0,
            tensor_h: 1.0,
            alpha: 0.6,
            a_shape: 5.0,
            c0: DEFAULT_C0,
            strict_domain: true,
        }
    }

    pub fn with_tensor(mut self, h: f64) -> Self {
        self.tensor_h = h;
        self
    }

    pub fn with_symmetry(mut self, symmetry: Symmetry) -> Self {
        self.symmetry = symmetry;
        self
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        }
        fn finite(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {v}"),
                })
            }
        }
        positive("mass", self.mass)?;
        positive("alpha", self.alpha)?;
        if !(self.c0.is_finite() && self.c0 >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "c0",
                reason: format!("must be finite and >= 0, got {}", self.c0),
            });
        }
        finite("c_sym", self.c_sym)?;
        finite("tensor_h", self.tensor_h)?;
        finite("a_shape", self.a_shape)?;
        if self.strict_domain {
            if self.alpha <= 0.5 {
                return Err(Error::Domain(format!(
                    "alpha must exceed 1/2, got {}",
                    self.alpha
                )));
            }
            if !(self.a_shape > 4.0 && self.a_shape < 8.0) {
                return Err(Error::Domain(format!(
                    "A must lie in (4, 8), got {}",
                    self.a_shape
                )));
            }
        }
        Ok(())
    }
}

/// Strength coefficients of the radial potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialCoeffs {
    pub v1: f64,
    pub v2: f64,
    pub v3: f64,
}

impl PotentialCoeffs {
    pub fn from_shape(alpha: f64, a_shape: f64) -> Self {
        let a2 = alpha * alpha;
        Self {
            v1: a2 / 4.0,
            v2: (a_shape - 8.0) * a2 / 4.0,
            v3: (4.0 - a_shape) * a2 / 4.0,
        }
    }

    pub fn sum(&self) -> f64 {
        self.v1 + self.v2 + self.v3
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            v1: factor * self.v1,
            v2: factor * self.v2,
            v3: factor * self.v3,
        }
    }
}

pub fn potential_coeffs(p: &ModelParams) -> Result<PotentialCoeffs> {
    p.validate()?;
    Ok(PotentialCoeffs::from_shape(p.alpha, p.a_shape))
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be finite and > 0, got {r}")))
    }
}

/// V(r) = (V₁e^{−4αr} + V₂e^{−2αr} + V₃)/(1 − e^{−2αr})².
pub fn eval_potential(p: &ModelParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    let v = potential_coeffs(p)?;
    let s = (-2.0 * p.alpha * r).exp();
    let one_minus_s = -(-2.0 * p.alpha * r).exp_m1();
    Ok((v.v1 * s * s + v.v2 * s + v.v3) / (one_minus_s * one_minus_s))
}

/// U(r) = −H/r.
pub fn eval_tensor(h: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(-h / r)
}

/// 4α²[C₀ + e^{−2αr}/(1 − e^{−2αr})²], the stand-in for 1/r².
pub fn centrifugal_approx(p: &ModelParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    p.validate()?;
    let x = 2.0 * p.alpha * r;
    let denom = -(-x).exp_m1();
    Ok(4.0 * p.alpha * p.alpha * (p.c0 + (-x).exp() / (denom * denom)))
}

/// Radial quantum number and spin-orbit number of a state.
///
/// `n` is the radial number that enters the energy condition. Λ_κ and η_κ
/// are computed on demand from the tensor strength so they never go stale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateIndex {
    pub n: u32,
    pub kappa: i32,
}

const ORBITAL_LETTERS: &[u8] = b"spdfghiklmnoqrtuv";

impl StateIndex {
    pub fn new(n: u32, kappa: i32) -> Result<Self> {
        if kappa == 0 {
            return Err(Error::InvalidParameter {
                name: "kappa",
                reason: "spin-orbit number must be nonzero".into(),
            });
        }
        Ok(Self { n, kappa })
    }

    /// Λ_κ = κ + H.
    pub fn lambda(&self, h: f64) -> f64 {
        self.kappa as f64 + h
    }

    /// η_κ = κ + H + 1.
    pub fn eta(&self, h: f64) -> f64 {
        self.kappa as f64 + h + 1.0
    }

    /// Λ_κ in the pseudospin limit, η_κ in the spin limit.
    pub fn effective_kappa(&self, symmetry: Symmetry, h: f64) -> f64 {
        match symmetry {
            Symmetry::Pseudospin => self.lambda(h),
            Symmetry::Spin => self.eta(h),
        }
    }

    pub fn is_aligned(&self) -> bool {
        self.kappa < 0
    }

    /// Orbital angular momentum l: κ = −(l+1) or κ = l.
    pub fn orbital_l(&self) -> u32 {
        if self.kappa < 0 {
            (-self.kappa - 1) as u32
        } else {
            self.kappa as u32
        }
    }

    /// Pseudo-orbital angular momentum l̃: κ = −l̃ or κ = l̃ + 1.
    pub fn pseudo_orbital_l(&self) -> u32 {
        if self.kappa < 0 {
            (-self.kappa) as u32
        } else {
            (self.kappa - 1) as u32
        }
    }

    /// 2j = 2|κ| − 1.
    pub fn twice_j(&self) -> u32 {
        2 * self.kappa.unsigned_abs() - 1
    }

    /// Conventional radial number used in the spectroscopic name. In the
    /// pseudospin limit the κ > 0 partner is named one radial level lower.
    pub fn spectroscopic_n(&self, symmetry: Symmetry) -> Option<u32> {
        match symmetry {
            Symmetry::Pseudospin if self.kappa > 0 => self.n.checked_sub(1),
            _ => Some(self.n),
        }
    }

    /// e.g. `1s1/2`, `0d3/2`. An unnamed radial level is rendered as `?`.
    pub fn label(&self, symmetry: Symmetry) -> String {
        let l = self.orbital_l() as usize;
        let letter = ORBITAL_LETTERS.get(l).map(|&b| b as char).unwrap_or('?');
        let n = self
            .spectroscopic_n(symmetry)
            .map(|n| n.to_string())
            .unwrap_or_else(|| "?".into());
        format!("{n}{letter}{}/2", self.twice_j())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(alpha: f64, a: f64) -> ModelParams {
        ModelParams {
            alpha,
            a_shape: a,
            ..ModelParams::reference(Symmetry::Pseudospin)
        }
    }

    #[test]
    fn reference_coefficients() {
        let v = potential_coeffs(&params(0.6, 5.0)).unwrap();
        assert_relative_eq!(v.v1, 0.09, epsilon = 1e-15);
        assert_relative_eq!(v.v2, -0.27, epsilon = 1e-15);
        assert_relative_eq!(v.v3, -0.09, epsilon = 1e-15);
    }

    #[test]
    fn v3_vanishes_at_a_four() {
        let p = ModelParams {
            strict_domain: false,
            ..params(0.6, 4.0)
        };
        assert_eq!(potential_coeffs(&p).unwrap().v3, 0.0);
    }

    #[test]
    fn strict_domain_rejects_edges() {
        assert!(matches!(
            potential_coeffs(&params(0.5, 5.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            potential_coeffs(&params(0.6, 8.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            potential_coeffs(&params(0.6, 4.0)),
            Err(Error::Domain(_))
        ));
        let relaxed = ModelParams {
            strict_domain: false,
            ..params(0.4, 9.0)
        };
        assert!(potential_coeffs(&relaxed).is_ok());
    }

    #[test]
    fn invalid_basics_rejected() {
        let mut p = params(0.6, 5.0);
        p.mass = 0.0;
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParameter { name: "mass", .. })
        ));
        let mut p = params(0.6, 5.0);
        p.c0 = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn potential_at_unit_radius() {
        // 40-digit evaluation: -0.33411418227973178643
        let v = eval_potential(&params(0.6, 5.0), 1.0).unwrap();
        assert_relative_eq!(v, -0.334_114_182_279_731_8, max_relative = 1e-14);
    }

    #[test]
    fn potential_tends_to_v3() {
        let p = params(0.6, 5.0);
        let v = eval_potential(&p, 60.0).unwrap();
        assert_relative_eq!(v, -0.09, epsilon = 1e-14);
    }

    #[test]
    fn potential_small_r_coulomb_like() {
        let p = params(0.6, 5.0);
        for &r in &[1e-3, 1e-4, 1e-5] {
            let v = eval_potential(&p, r).unwrap();
            let lead = -3.0 / (16.0 * r * r);
            // next order is O(1/r)
            assert!((v - lead).abs() * r < 1.0, "r = {r}");
        }
    }

    #[test]
    fn nonpositive_radius_is_domain_error() {
        let p = params(0.6, 5.0);
        assert!(eval_potential(&p, 0.0).is_err());
        assert!(eval_tensor(1.0, -1.0).is_err());
        assert!(centrifugal_approx(&p, 0.0).is_err());
    }

    #[test]
    fn tensor_values() {
        assert_eq!(eval_tensor(0.0, 2.0).unwrap(), 0.0);
        assert_eq!(eval_tensor(1.0, 2.0).unwrap(), -0.5);
        assert_eq!(eval_tensor(1.0, 0.25).unwrap(), -4.0);
    }

    #[test]
    fn centrifugal_at_unit_argument() {
        let p = params(0.6, 5.0);
        let r = 1.0 / 1.2;
        let approx = centrifugal_approx(&p, r).unwrap();
        // 1.44 * (1/12 + e^-1 / (1 - e^-1)^2)
        let e = (-1.0f64).exp();
        let expected = 1.44 * (1.0 / 12.0 + e / ((1.0 - e) * (1.0 - e)));
        assert_relative_eq!(approx, expected, max_relative = 1e-14);
        assert!((approx * r * r - 1.0).abs() < 5e-3);
        let bare = ModelParams { c0: 0.0, ..p };
        let ratio = centrifugal_approx(&bare, r).unwrap() / 1.44;
        assert_relative_eq!(ratio, 0.920_673_594_207_792, max_relative = 1e-12);
    }

    #[test]
    fn state_labels() {
        let s = |n, k| StateIndex::new(n, k).unwrap();
        assert_eq!(s(1, -1).label(Symmetry::Pseudospin), "1s1/2");
        assert_eq!(s(1, 2).label(Symmetry::Pseudospin), "0d3/2");
        assert_eq!(s(2, 5).label(Symmetry::Pseudospin), "1h9/2");
        assert_eq!(s(0, 1).label(Symmetry::Spin), "0p1/2");
        assert_eq!(s(1, -5).label(Symmetry::Spin), "1g9/2");
        assert_eq!(s(0, 2).label(Symmetry::Pseudospin), "?d3/2");
        assert_eq!(s(1, -1).pseudo_orbital_l(), 1);
        assert_eq!(s(1, 2).pseudo_orbital_l(), 1);
        assert!(StateIndex::new(0, 0).is_err());
    }

    #[test]
    fn eta_is_lambda_plus_one() {
        let s = StateIndex::new(0, -3).unwrap();
        for &h in &[0.0, 0.5, 1.0, -2.25] {
            assert_eq!(s.eta(h), s.lambda(h) + 1.0);
        }
    }
}
