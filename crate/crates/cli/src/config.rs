use std::path::{Path, PathBuf};

use pseudospin::{ModelParams, StateIndex, Symmetry};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub n: u32,
    pub kappa: i32,
}

/// One JSON document; every field is optional and command-line flags win.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mass: Option<f64>,
    pub c_sym: Option<f64>,
    pub tensor_h: Option<f64>,
    pub alpha: Option<f64>,
    pub a_shape: Option<f64>,
    pub c0: Option<f64>,
    pub symmetry: Option<Symmetry>,
    pub strict_domain: Option<bool>,
    pub states: Option<Vec<StateSpec>>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    /// Energy grid points for root isolation.
    pub grid_points: Option<usize>,
    pub bisect_tol: Option<f64>,
    /// Radial grid for wavefunctions and analysis tables.
    pub points: Option<usize>,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub h_values: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            mass, c_sym, tensor_h, alpha, a_shape, c0, symmetry, strict_domain, states, format, out,
            grid_points, bisect_tol, points, r_min, r_max, h_values
        )
    }

    pub fn model_params(&self) -> Result<ModelParams, CliError> {
        let sym = self.symmetry.unwrap_or(Symmetry::Pseudospin);
        let d = ModelParams::reference(sym);
        let p = ModelParams {
            mass: self.mass.unwrap_or(d.mass),
            symmetry: sym,
            c_sym: self.c_sym.unwrap_or(d.c_sym),
            tensor_h: self.tensor_h.unwrap_or(d.tensor_h),
            alpha: self.alpha.unwrap_or(d.alpha),
            a_shape: self.a_shape.unwrap_or(d.a_shape),
            c0: self.c0.unwrap_or(d.c0),
            strict_domain: self.strict_domain.unwrap_or(d.strict_domain),
        };
        p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn states(&self) -> Result<Vec<StateIndex>, CliError> {
        self.states
            .as_deref()
            .unwrap_or_default()
            .iter()
            .map(|s| StateIndex::new(s.n, s.kappa).map_err(|e| CliError::Config(e.to_string())))
            .collect()
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}
