//! Approximation error of the centrifugal stand-in, potential profiles and
//! tensor-strength sweeps.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::map_slice;
use crate::model::{centrifugal_approx, eval_potential, eval_tensor, potential_coeffs, ModelParams, StateIndex};
use crate::spectrum::{solve_batch, Doublet, EnergyEquation, RootChoice, SolveOptions};
use crate::wavefn::log_grid;

pub const DEFAULT_H_VALUES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub radii: Vec<f64>,
    pub exact: Vec<f64>,
    pub approx: Vec<f64>,
    pub rel_err: Vec<f64>,
    pub max_rel_err: f64,
    pub window: (f64, f64),
}

/// 1/r² against its exponential approximation on a log grid over [r_min, r_max].
pub fn approx_report(p: &ModelParams, r_min: f64, r_max: f64, n_points: usize) -> Result<ApproxReport> {
    p.validate()?;
    if !(r_min > 0.0 && r_max > r_min && n_points >= 2) {
        return Err(Error::Domain(format!(
            "need 0 < r_min < r_max and n_points ≥ 2, got ({r_min}, {r_max}, {n_points})"
        )));
    }
    let radii = log_grid(r_min, r_max, n_points)?;
    let exact: Vec<f64> = radii.iter().map(|r| 1.0 / (r * r)).collect();
    let approx = radii
        .iter()
        .map(|&r| centrifugal_approx(p, r))
        .collect::<Result<Vec<_>>>()?;
    let rel_err: Vec<f64> = exact
        .iter()
        .zip(&approx)
        .map(|(e, a)| ((a - e) / e).abs())
        .collect();
    let max_rel_err = rel_err.iter().fold(0.0f64, |m, &x| m.max(x));
    Ok(ApproxReport {
        radii,
        exact,
        approx,
        rel_err,
        max_rel_err,
        window: (r_min, r_max),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialSample {
    pub r: f64,
    pub v: f64,
    pub u: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialProfile {
    pub samples: Vec<PotentialSample>,
    /// lim V(r) as r → ∞, equal to V3.
    pub asymptote: f64,
}

pub fn potential_profile(p: &ModelParams, r_grid: &[f64]) -> Result<PotentialProfile> {
    let samples = r_grid
        .iter()
        .map(|&r| {
            Ok(PotentialSample {
                r,
                v: eval_potential(p, r)?,
                u: eval_tensor(p.tensor_h, r)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PotentialProfile {
        samples,
        asymptote: potential_coeffs(p)?.v3,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Increasing,
    Decreasing,
    Constant,
    Mixed,
    /// Some cell failed.
    Incomplete,
}

impl Trend {
    fn of(values: &[Option<f64>]) -> Self {
        let Some(v) = values.iter().copied().collect::<Option<Vec<f64>>>() else {
            return Trend::Incomplete;
        };
        let (mut up, mut down) = (false, false);
        for w in v.windows(2) {
            up |= w[1] > w[0];
            down |= w[1] < w[0];
        }
        match (up, down) {
            (false, false) => Trend::Constant,
            (true, false) => Trend::Increasing,
            (false, true) => Trend::Decreasing,
            (true, true) => Trend::Mixed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub h: f64,
    pub state: StateIndex,
    pub label: String,
    pub energy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSplitting {
    pub h: f64,
    pub doublet: Doublet,
    /// E(unaligned) − E(aligned).
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberTrend {
    pub state: StateIndex,
    pub label: String,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub parameter: &'static str,
    pub values: Vec<f64>,
    /// One per (H, state), H-major in input order.
    pub records: Vec<SweepRecord>,
    pub splittings: Vec<SweepSplitting>,
    pub trends: Vec<MemberTrend>,
}

impl SweepResult {
    pub fn energy(&self, h: f64, state: StateIndex) -> Option<f64> {
        self.records
            .iter()
            .find(|r| r.h == h && r.state == state)
            .and_then(|r| r.energy)
    }
}

/// Energies of every doublet member at every H, with splittings and the
/// direction each member moves as H grows.
pub fn h_sweep(
    p: &ModelParams,
    doublets: &[Doublet],
    h_values: &[f64],
    choice: RootChoice,
    opts: &SolveOptions,
) -> Result<SweepResult> {
    if let Some(h) = h_values.iter().find(|h| !h.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tensor_h",
            reason: format!("sweep values must be finite, got {h}"),
        });
    }
    let states: Vec<StateIndex> = doublets.iter().flat_map(|d| [d.aligned, d.unaligned]).collect();
    let cells: Vec<(f64, StateIndex)> = h_values
        .iter()
        .flat_map(|&h| states.iter().map(move |&s| (h, s)))
        .collect();
    let eqs = map_slice(opts.execution, &cells, |&(h, s)| EnergyEquation::new(p.with_tensor(h), s))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let solved = solve_batch(&eqs, opts);

    let records: Vec<SweepRecord> = cells
        .iter()
        .zip(solved)
        .map(|(&(h, state), res)| {
            let (energy, error) = match res {
                Ok(r) => match choice.pick(&r) {
                    Some(e) => (Some(e), None),
                    None => (None, Some(format!("no root for {choice:?}"))),
                },
                Err(e) => (None, Some(e.to_string())),
            };
            SweepRecord {
                h,
                state,
                label: state.label(p.symmetry),
                energy,
                error,
            }
        })
        .collect();

    let per_h = states.len();
    let mut splittings = Vec::new();
    for (hi, &h) in h_values.iter().enumerate() {
        for (di, d) in doublets.iter().enumerate() {
            let al = records[hi * per_h + 2 * di].energy;
            let un = records[hi * per_h + 2 * di + 1].energy;
            splittings.push(SweepSplitting {
                h,
                doublet: *d,
                delta: al.zip(un).map(|(a, u)| u - a),
            });
        }
    }

    // trends follow increasing H regardless of input order
    let mut order: Vec<usize> = (0..h_values.len()).collect();
    order.sort_by(|&a, &b| h_values[a].total_cmp(&h_values[b]));
    let trends = states
        .iter()
        .enumerate()
        .map(|(si, &state)| {
            let series: Vec<Option<f64>> = order.iter().map(|&hi| records[hi * per_h + si].energy).collect();
            MemberTrend {
                state,
                label: state.label(p.symmetry),
                trend: Trend::of(&series),
            }
        })
        .collect();

    Ok(SweepResult {
        parameter: "H",
        values: h_values.to_vec(),
        records,
        splittings,
        trends,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Symmetry;
    use approx::assert_relative_eq;

    #[test]
    fn approximation_is_tight_at_small_r() {
        let p = ModelParams::reference(Symmetry::Pseudospin);
        let rep = approx_report(&p, 1e-3, 0.5 / 1.2, 200).unwrap();
        assert!(rep.max_rel_err < 1e-3, "{}", rep.max_rel_err);
        assert!(rep.rel_err[0] < 1e-6);
        assert!(approx_report(&p, 1.0, 0.5, 10).is_err());
    }

    #[test]
    fn offset_improves_unit_point() {
        let r = 1.0 / 1.2;
        let mut p = ModelParams::reference(Symmetry::Pseudospin);
        let with = approx_report(&p, r, 2.0 * r, 2).unwrap();
        p.c0 = 0.0;
        let without = approx_report(&p, r, 2.0 * r, 2).unwrap();
        assert!(with.rel_err[0] < without.rel_err[0]);
        assert_relative_eq!(with.approx[0], 1.44 * (1.0 / 12.0 + (-1.0f64).exp() / (1.0 - (-1.0f64).exp()).powi(2)), max_relative = 1e-14);
    }

    #[test]
    fn profile_approaches_v3() {
        let p = ModelParams::reference(Symmetry::Pseudospin);
        let grid = log_grid(0.05, 40.0, 300).unwrap();
        let prof = potential_profile(&p, &grid).unwrap();
        assert_relative_eq!(prof.asymptote, -0.09, epsilon = 1e-15);
        assert!(prof.samples.windows(2).all(|w| w[1].v >= w[0].v));
        assert!(prof.samples.windows(2).filter(|w| w[1].r < 10.0).all(|w| w[1].v > w[0].v));
        assert!((prof.samples.last().unwrap().v - prof.asymptote).abs() < 1e-12);
        assert_eq!(prof.samples[0].u, -1.0 / 0.05);
        assert!(potential_profile(&p, &[0.0]).is_err());
    }

    #[test]
    fn trend_classification() {
        assert_eq!(Trend::of(&[Some(1.0), Some(2.0)]), Trend::Increasing);
        assert_eq!(Trend::of(&[Some(1.0), Some(1.0)]), Trend::Constant);
        assert_eq!(Trend::of(&[Some(1.0), Some(0.0), Some(2.0)]), Trend::Mixed);
        assert_eq!(Trend::of(&[Some(1.0), None]), Trend::Incomplete);
    }
}
