//! Parametric Nikiforov–Uvarov engine.
//!
//! Works on the normal form
//!
//! ```text
//! ψ'' + (c1 − c2 s)/(s(1 − c3 s)) ψ' + (−A s² + B s − C)/(s²(1 − c3 s)²) ψ = 0
//! ```
//!
//! and maps its six coefficients to the derived constants c4…c13, the
//! polynomial quantization condition, and the exponents/parameters of the
//! weight function ρ(s), the prefactor φ(s) and the Jacobi (or, for
//! c3 = 0, Laguerre) polynomial factor. Evaluation of those functions
//! lives in [`crate::wavefn`].

use serde::Serialize;

use crate::error::{Error, Radicand, Result};

/// Radicands in `[-RADICAND_CLAMP, 0)` are treated as exact zeros.
pub const RADICAND_CLAMP: f64 = 1e-12;

pub(crate) fn clamped_sqrt(which: Radicand, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value.sqrt())
    } else if value >= -RADICAND_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeRadicand { which, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuProblem {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl NuProblem {
    pub fn new(c1: f64, c2: f64, c3: f64, a: f64, b: f64, c: f64) -> Result<Self> {
        let p = Self { c1, c2, c3, a, b, c };
        let all = [c1, c2, c3, a, b, c];
        if all.iter().all(|v| v.is_finite()) {
            Ok(p)
        } else {
            Err(Error::InvalidParameter {
                name: "nu_problem",
                reason: format!("coefficients must be finite: {all:?}"),
            })
        }
    }
}

/// Sign of √c8 in the exponents at s = 0.
///
/// `Printed` is the literal c12 = c4 − √c8 choice; `Decaying` picks the
/// other Frobenius exponent c4 + √c8, which vanishes at s = 0.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    #[default]
    Printed,
    Decaying,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Printed => -1.0,
            Branch::Decaying => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NuDerived {
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub c11: f64,
    pub c12: f64,
    pub c13: f64,
    /// ∓√c8, carrying the branch sign (negative for `Printed`).
    pub signed_root_c8: f64,
    pub root_c9: f64,
    pub branch: Branch,
}

/// The c4…c13 constants with the literal branch.
pub fn derive_constants(p: &NuProblem) -> Result<NuDerived> {
    derive_constants_with(p, Branch::Printed)
}

pub fn derive_constants_with(p: &NuProblem, branch: Branch) -> Result<NuDerived> {
    let c4 = 0.5 * (1.0 - p.c1);
    let c5 = 0.5 * (p.c2 - 2.0 * p.c3);
    let c6 = c5 * c5 + p.a;
    let c7 = 2.0 * c4 * c5 - p.b;
    let c8 = c4 * c4 + p.c;
    let c9 = p.c3 * c7 + p.c3 * p.c3 * c8 + c6;
    let root_c8 = clamped_sqrt(Radicand::C8, c8)?;
    let root_c9 = clamped_sqrt(Radicand::C9, c9)?;
    let r8 = branch.sign() * root_c8;
    // Printed branch: c10 = c1 + 2c4 − 2√c8, c11 = c2 − 2c5 + 2(√c9 − c3√c8), ...
    let c10 = p.c1 + 2.0 * c4 + 2.0 * r8;
    let c11 = p.c2 - 2.0 * c5 + 2.0 * (root_c9 + p.c3 * r8);
    let c12 = c4 + r8;
    let c13 = c5 - (root_c9 + p.c3 * r8);
    Ok(NuDerived {
        c4,
        c5,
        c6,
        c7,
        c8,
        c9,
        c10,
        c11,
        c12,
        c13,
        signed_root_c8: r8,
        root_c9,
        branch,
    })
}

/// Left-hand side of the polynomial-solution condition
///
/// c2 n − (2n+1)c5 + (2n+1)(√c9 − c3√c8) + n(n−1)c3 + c7 + 2c3c8 − 2√(c8 c9)
///
/// with √c8 replaced by the branch-signed root.
pub fn quantization_residual(p: &NuProblem, d: &NuDerived, n: u32) -> f64 {
    let n = n as f64;
    let r8 = -d.signed_root_c8;
    p.c2 * n - (2.0 * n + 1.0) * d.c5
        + (2.0 * n + 1.0) * (d.root_c9 - p.c3 * r8)
        + n * (n - 1.0) * p.c3
        + d.c7
        + 2.0 * p.c3 * d.c8
        - 2.0 * r8 * d.root_c9
}

/// Exponents of s^x (1 − c3 s)^y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerPair {
    pub s_power: f64,
    pub one_minus_power: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionFactors {
    pub degree: u32,
    pub c3: f64,
    pub rho: PowerPair,
    pub phi: PowerPair,
    /// Jacobi parameters (a, b) of P_n^{(a,b)}(1 − 2 c3 s).
    pub jacobi: (f64, f64),
}

pub fn wavefunction_factors(p: &NuProblem, d: &NuDerived, n: u32) -> Result<WavefunctionFactors> {
    if p.c3 == 0.0 {
        return Err(Error::InvalidParameter {
            name: "c3",
            reason: "c3 = 0 has no Jacobi form; use laguerre_limit_factors".into(),
        });
    }
    let b_param = d.c11 / p.c3 - d.c10 - 1.0;
    Ok(WavefunctionFactors {
        degree: n,
        c3: p.c3,
        rho: PowerPair {
            s_power: d.c10 - 1.0,
            one_minus_power: b_param,
        },
        phi: PowerPair {
            s_power: d.c12,
            one_minus_power: -d.c12 - d.c13 / p.c3,
        },
        jacobi: (d.c10 - 1.0, b_param),
    })
}

/// ψ(s) = s^{power} e^{rate·s} L_n^{(order)}(scale·s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LaguerreFactors {
    pub degree: u32,
    pub power: f64,
    pub exponential_rate: f64,
    pub order: f64,
    pub scale: f64,
}

pub fn laguerre_limit_factors(p: &NuProblem, d: &NuDerived, n: u32) -> Result<LaguerreFactors> {
    if p.c3 != 0.0 {
        return Err(Error::InvalidParameter {
            name: "c3",
            reason: format!("Laguerre limit requires c3 = 0, got {}", p.c3),
        });
    }
    Ok(LaguerreFactors {
        degree: n,
        power: d.c12,
        exponential_rate: d.c13,
        order: d.c10 - 1.0,
        scale: d.c11,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_worked_constants() {
        let p = NuProblem::new(1.0, 1.0, 1.0, 6.0, 5.0, 1.0).unwrap();
        let d = derive_constants(&p).unwrap();
        assert_eq!(d.c4, 0.0);
        assert_eq!(d.c5, -0.5);
        assert_eq!(d.c6, 6.25);
        assert_eq!(d.c7, -5.0);
        assert_eq!(d.c8, 1.0);
        assert_eq!(d.c9, 2.25);
        assert_eq!(d.c10, -1.0);
        assert_eq!(d.c12, -1.0);
        // c11 = 1 + 1 + 2(1.5 − 1), c13 = −½ − (1.5 − 1)
        assert_eq!(d.c11, 3.0);
        assert_eq!(d.c13, -1.0);
    }

    #[test]
    fn zero_numerator() {
        let p = NuProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let d = derive_constants(&p).unwrap();
        assert_eq!(
            (d.c4, d.c5, d.c6, d.c7, d.c8, d.c9),
            (0.0, -0.5, 0.25, 0.0, 0.0, 0.25)
        );
    }

    #[test]
    fn negative_radicands_rejected() {
        let p = NuProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, -1.0).unwrap();
        assert!(matches!(
            derive_constants(&p),
            Err(Error::NegativeRadicand {
                which: Radicand::C8,
                ..
            })
        ));
        let p = NuProblem::new(1.0, 1.0, 1.0, -5.0, 0.0, 0.0).unwrap();
        assert!(matches!(
            derive_constants(&p),
            Err(Error::NegativeRadicand {
                which: Radicand::C9,
                ..
            })
        ));
        // roundoff-sized negatives clamp to zero
        let p = NuProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, -1e-13).unwrap();
        assert_eq!(derive_constants(&p).unwrap().signed_root_c8, 0.0);
    }

    #[test]
    fn non_finite_rejected() {
        assert!(NuProblem::new(1.0, f64::NAN, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn jacobi_parameters_direct() {
        // c10 = 3, c11 = 7, c3 = 1 → (2, 3)
        let p = NuProblem::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        let mut d = derive_constants(&p).unwrap();
        d.c10 = 3.0;
        d.c11 = 7.0;
        let f = wavefunction_factors(&p, &d, 2).unwrap();
        assert_eq!(f.jacobi, (2.0, 3.0));
    }

    #[test]
    fn c3_routing() {
        let p = NuProblem::new(1.0, 1.0, 0.0, 1.0, 0.5, 0.25).unwrap();
        let d = derive_constants(&p).unwrap();
        assert!(wavefunction_factors(&p, &d, 0).is_err());
        let l = laguerre_limit_factors(&p, &d, 0).unwrap();
        assert_eq!(
            (l.power, l.exponential_rate, l.order, l.scale),
            (d.c12, d.c13, d.c10 - 1.0, d.c11)
        );
        let q = NuProblem::new(1.0, 1.0, 1.0, 1.0, 0.5, 0.25).unwrap();
        let dq = derive_constants(&q).unwrap();
        assert!(laguerre_limit_factors(&q, &dq, 0).is_err());
    }

    #[test]
    fn branches_differ_only_in_root_sign() {
        let p = NuProblem::new(1.0, 1.0, 1.0, 6.0, 5.0, 1.0).unwrap();
        let a = derive_constants_with(&p, Branch::Printed).unwrap();
        let b = derive_constants_with(&p, Branch::Decaying).unwrap();
        assert_eq!(a.c9, b.c9);
        assert_eq!(a.signed_root_c8, -b.signed_root_c8);
        assert_eq!(a.c12, -1.0);
        assert_eq!(b.c12, 1.0);
        let fb = wavefunction_factors(&p, &b, 0).unwrap();
        let fa = wavefunction_factors(&p, &a, 0).unwrap();
        // (1 − s) exponent of φ and the Jacobi b parameter do not depend on the branch
        assert_eq!(fa.phi.one_minus_power, fb.phi.one_minus_power);
        assert_eq!(fa.jacobi.1, fb.jacobi.1);
        assert_eq!(fa.jacobi.0, -fb.jacobi.0);
    }

    #[test]
    fn identities_when_c1_is_one() {
        let p = NuProblem::new(1.0, 1.0, 1.0, 2.7, -1.3, 0.8).unwrap();
        let d = derive_constants(&p).unwrap();
        assert_eq!(d.c7, -p.b);
        assert_eq!(d.c8, p.c);
        assert!((d.c9 - (d.c6 + d.c7 + d.c8)).abs() < 1e-15);
    }
}
