use serde::{Deserialize, Serialize};

use super::equation::EnergyEquation;
use super::solve::{solve_batch, SignClass, SolveOptions, SpectrumResult};
use crate::error::{Error, Result};
use crate::model::{ModelParams, StateIndex, Symmetry};

/// Which root of a state stands for "its energy" in doublet comparisons.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootChoice {
    #[default]
    Selected,
    Sign(SignClass),
}

impl RootChoice {
    pub fn pick(self, r: &SpectrumResult) -> Option<f64> {
        match self {
            RootChoice::Selected => r.selected_energy(),
            RootChoice::Sign(s) => r.root_with_sign(s).map(|x| x.energy),
        }
    }
}

/// Two states that are degenerate without the tensor term: a κ < 0
/// (aligned) and a κ > 0 (unaligned) member sharing l̃ (pseudospin limit)
/// or l (spin limit).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Doublet {
    pub aligned: StateIndex,
    pub unaligned: StateIndex,
}

impl Doublet {
    pub fn new(a: StateIndex, b: StateIndex, symmetry: Symmetry) -> Result<Self> {
        let (aligned, unaligned) = match (a.kappa < 0, b.kappa < 0) {
            (true, false) => (a, b),
            (false, true) => (b, a),
            _ => {
                return Err(Error::InvalidDoublet(format!(
                    "members need opposite κ signs, got {} and {}",
                    a.kappa, b.kappa
                )))
            }
        };
        let shared = match symmetry {
            Symmetry::Pseudospin => aligned.pseudo_orbital_l() == unaligned.pseudo_orbital_l(),
            Symmetry::Spin => aligned.orbital_l() == unaligned.orbital_l(),
        };
        if !shared {
            return Err(Error::InvalidDoublet(format!(
                "{} and {} are not {symmetry} partners",
                aligned.label(symmetry),
                unaligned.label(symmetry)
            )));
        }
        Ok(Self { aligned, unaligned })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Motion {
    Up,
    Down,
    Unchanged,
}

impl Motion {
    fn between(from: f64, to: f64) -> Self {
        if to > from {
            Motion::Up
        } else if to < from {
            Motion::Down
        } else {
            Motion::Unchanged
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SplitRow {
    pub doublet: Doublet,
    pub tensor_h: f64,
    pub e_aligned: f64,
    pub e_unaligned: f64,
    /// E(unaligned) − E(aligned).
    pub delta: f64,
    /// Member energies at H = 0.
    pub reference: (f64, f64),
    pub motion_aligned: Motion,
    pub motion_unaligned: Motion,
}

fn pick(r: &Result<SpectrumResult>, choice: RootChoice, what: &str) -> Result<f64> {
    match r {
        Ok(s) => choice.pick(s).ok_or_else(|| {
            Error::InvalidDoublet(format!("{what}: no root for choice {choice:?}"))
        }),
        Err(e) => Err(e.clone()),
    }
}

/// Doublet splitting at `params.tensor_h`, with each member's motion
/// relative to its H = 0 energy.
pub fn splitting_report(
    params: &ModelParams,
    doublets: &[Doublet],
    choice: RootChoice,
    opts: &SolveOptions,
) -> Result<Vec<SplitRow>> {
    let h = params.tensor_h;
    let at_zero = params.with_tensor(0.0);
    let mut eqs = Vec::with_capacity(doublets.len() * 4);
    for d in doublets {
        for p in [params, &at_zero] {
            eqs.push(EnergyEquation::new(*p, d.aligned)?);
            eqs.push(EnergyEquation::new(*p, d.unaligned)?);
        }
    }
    let solved = solve_batch(&eqs, opts);
    doublets
        .iter()
        .zip(solved.chunks(4))
        .map(|(d, c)| {
            let e_al = pick(&c[0], choice, "aligned")?;
            let e_un = pick(&c[1], choice, "unaligned")?;
            let r_al = pick(&c[2], choice, "aligned at H = 0")?;
            let r_un = pick(&c[3], choice, "unaligned at H = 0")?;
            Ok(SplitRow {
                doublet: *d,
                tensor_h: h,
                e_aligned: e_al,
                e_unaligned: e_un,
                delta: e_un - e_al,
                reference: (r_al, r_un),
                motion_aligned: Motion::between(r_al, e_al),
                motion_unaligned: Motion::between(r_un, e_un),
            })
        })
        .collect()
}
