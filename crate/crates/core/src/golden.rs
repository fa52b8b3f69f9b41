//! Published reference spectra, shipped as versioned JSON.
//!
//! Each cell holds the printed energies of one state at one tensor strength,
//! negative root first. Spin cells with a single entry list only the
//! negative root.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::model::{ModelParams, PotentialCoeffs, StateIndex, Symmetry};

const GOLDEN_JSON: &str = include_str!("../data/golden_tables.v1.json");

/// Potential strength α at which the printed spin energies are reproduced
/// when the exponential map keeps the stated α (see [`spin_table_coeffs`]).
pub const SPIN_TABLE_COEFF_ALPHA: f64 = 0.72;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoldenParams {
    pub mass: f64,
    pub c_sym: f64,
    pub alpha: f64,
    pub a_shape: f64,
    pub c0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCell {
    pub symmetry: Symmetry,
    pub row: u32,
    pub n: u32,
    pub kappa: i32,
    pub label: String,
    pub h: f64,
    pub energies: Vec<f64>,
}

impl GoldenCell {
    pub fn state(&self) -> StateIndex {
        StateIndex {
            n: self.n,
            kappa: self.kappa,
        }
    }

    pub fn negative(&self) -> Option<f64> {
        self.energies.iter().copied().find(|e| *e < 0.0)
    }

    pub fn positive(&self) -> Option<f64> {
        self.energies.iter().copied().find(|e| *e >= 0.0)
    }
}

/// A value quoted in running text that does not agree with the tables.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TextValue {
    pub n: u32,
    pub kappa: i32,
    pub h: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoldenTables {
    pub version: u32,
    pub params: GoldenParams,
    pub cells: Vec<GoldenCell>,
    pub text_values: Vec<TextValue>,
}

impl GoldenTables {
    pub fn cells_for(&self, symmetry: Symmetry) -> impl Iterator<Item = &GoldenCell> {
        self.cells.iter().filter(move |c| c.symmetry == symmetry)
    }

    pub fn cell(&self, symmetry: Symmetry, n: u32, kappa: i32, h: f64) -> Option<&GoldenCell> {
        self.cells
            .iter()
            .find(|c| c.symmetry == symmetry && c.n == n && c.kappa == kappa && c.h == h)
    }

    /// Model parameters of the tables at tensor strength `h`.
    pub fn model_params(&self, symmetry: Symmetry, h: f64) -> ModelParams {
        let g = self.params;
        ModelParams {
            mass: g.mass,
            symmetry,
            c_sym: g.c_sym,
            tensor_h: h,
            alpha: g.alpha,
            a_shape: g.a_shape,
            c0: g.c0,
            strict_domain: true,
        }
    }
}

pub fn tables() -> &'static GoldenTables {
    static TABLES: OnceLock<GoldenTables> = OnceLock::new();
    TABLES.get_or_init(|| serde_json::from_str(GOLDEN_JSON).expect("embedded golden data is valid"))
}

/// Potential strengths that reproduce the printed spin energies:
/// V1, V2, V3 built with α = [`SPIN_TABLE_COEFF_ALPHA`] at the stated A.
pub fn spin_table_coeffs() -> PotentialCoeffs {
    PotentialCoeffs::from_shape(SPIN_TABLE_COEFF_ALPHA, tables().params.a_shape)
}
