use serde::{Deserialize, Serialize};

use super::equation::EnergyEquation;
use super::oracle::{polynomial_oracle, OracleReport};
use crate::error::{Error, Result};
use crate::exec::{map_indexed, map_slice, Execution};
use crate::model::{StateIndex, Symmetry};

/// Radicand size below which a root is reported as sitting on an edge.
const EDGE_RADICAND: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub grid_points: usize,
    pub bisect_tol: f64,
    pub max_iter: u32,
    /// Window margin relative to M.
    pub window_margin: f64,
    pub execution: Execution,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            grid_points: 20_001,
            bisect_tol: 1e-12,
            max_iter: 200,
            window_margin: super::DEFAULT_WINDOW_MARGIN,
            execution: Execution::default(),
        }
    }
}

impl SolveOptions {
    /// Bisection and oracle roots must agree within this distance.
    pub fn oracle_tolerance(&self) -> f64 {
        1e3 * self.bisect_tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignClass {
    /// Hole state, E < 0.
    Negative,
    /// Valence state, E ≥ 0.
    Positive,
}

impl SignClass {
    pub fn of(e: f64) -> Self {
        if e < 0.0 {
            SignClass::Negative
        } else {
            SignClass::Positive
        }
    }

    /// Sign of the physical root in each symmetry limit.
    pub fn preferred(symmetry: Symmetry) -> Self {
        match symmetry {
            Symmetry::Pseudospin => SignClass::Negative,
            Symmetry::Spin => SignClass::Positive,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            SignClass::Negative => SignClass::Positive,
            SignClass::Positive => SignClass::Negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    Bisection,
    OracleConfirmed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyRoot {
    pub energy: f64,
    pub sign: SignClass,
    /// |f(E)|
    pub residual: f64,
    /// |Q(E)|, the scale of the condition at the root.
    pub rhs_scale: f64,
    pub radicands: (f64, f64),
    pub method: RootMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionKind {
    /// Root of the sign required by the symmetry limit.
    Physical,
    /// No root of the required sign; the opposite-sign root is reported.
    Fallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Selection {
    pub root: EnergyRoot,
    pub kind: SelectionKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub state: StateIndex,
    pub symmetry: Symmetry,
    /// All real roots in the window, ascending.
    pub roots: Vec<EnergyRoot>,
    pub selected: Option<Selection>,
    pub oracle: OracleReport,
    /// Surviving oracle roots with no bisection partner.
    pub missed_by_bisection: Vec<f64>,
    pub diagnostics: Vec<String>,
}

impl SpectrumResult {
    pub fn energies(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.energy).collect()
    }

    pub fn selected_energy(&self) -> Option<f64> {
        self.selected.map(|s| s.root.energy)
    }

    /// The root of a given sign class (most negative / most positive if several).
    pub fn root_with_sign(&self, sign: SignClass) -> Option<&EnergyRoot> {
        let mut it = self.roots.iter().filter(|r| r.sign == sign);
        match sign {
            SignClass::Negative => it.next(),
            SignClass::Positive => it.next_back(),
        }
    }
}

pub fn search_window(eq: &EnergyEquation, margin_rel: f64) -> Result<(f64, f64)> {
    eq.search_window(margin_rel)
}

fn grid_values(eq: &EnergyEquation, lo: f64, hi: f64, opts: &SolveOptions) -> Vec<(f64, Option<f64>)> {
    let n = opts.grid_points.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    map_indexed(opts.execution, n, |i| {
        let e = if i == n - 1 { hi } else { lo + step * i as f64 };
        (e, eq.residual_unchecked(e).ok())
    })
}

fn bisect(eq: &EnergyEquation, mut a: f64, mut fa: f64, mut b: f64, mut fb: f64, opts: &SolveOptions) -> f64 {
    for _ in 0..opts.max_iter {
        if (b - a).abs() < opts.bisect_tol {
            break;
        }
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = match eq.residual_unchecked(m) {
            Ok(v) => v,
            Err(_) => break,
        };
        if fm == 0.0 {
            return m;
        }
        if fa.signum() == fm.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }
    // final secant step inside the bracket
    let t = fa / (fa - fb);
    let x = a + t * (b - a);
    if x.is_finite() && x >= a.min(b) && x <= a.max(b) {
        x
    } else {
        0.5 * (a + b)
    }
}

/// Last point from `valid` towards `invalid` where f is defined, and f there.
fn validity_edge(eq: &EnergyEquation, valid: f64, invalid: f64, opts: &SolveOptions) -> Option<(f64, f64)> {
    let (mut good, mut bad) = (valid, invalid);
    let mut f_good = eq.residual_unchecked(good).ok()?;
    for _ in 0..opts.max_iter {
        if (bad - good).abs() < opts.bisect_tol * 1e-3 {
            break;
        }
        let m = 0.5 * (good + bad);
        if m == good || m == bad {
            break;
        }
        match eq.residual_unchecked(m) {
            Ok(f) => {
                good = m;
                f_good = f;
            }
            Err(_) => bad = m,
        }
    }
    (good != valid).then_some((good, f_good))
}

fn make_root(eq: &EnergyEquation, e: f64) -> Result<EnergyRoot> {
    let f = eq.residual_unchecked(e)?;
    Ok(EnergyRoot {
        energy: e,
        sign: SignClass::of(e),
        residual: f.abs(),
        rhs_scale: eq.rhs(e).abs(),
        radicands: eq.radicands(e),
        method: RootMethod::Bisection,
    })
}

/// All sign changes of f on the uniform grid, refined by bisection.
pub fn bisection_roots(eq: &EnergyEquation, opts: &SolveOptions) -> Result<Vec<EnergyRoot>> {
    let (lo, hi) = eq.search_window(opts.window_margin)?;
    let values = grid_values(eq, lo, hi, opts);
    let mut exact = Vec::new();
    let mut brackets = Vec::new();
    for w in values.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        let pair = match (fa, fb) {
            (Some(fa), Some(fb)) => Some((a, fa, b, fb)),
            // a root can sit between the last valid grid point and a
            // radicand boundary
            (Some(fa), None) => validity_edge(eq, a, b, opts).map(|(c, fc)| (a, fa, c, fc)),
            (None, Some(fb)) => validity_edge(eq, b, a, opts).map(|(c, fc)| (c, fc, b, fb)),
            (None, None) => None,
        };
        if let Some((a, fa, b, fb)) = pair {
            if fa == 0.0 {
                exact.push(a);
            } else if fb != 0.0 && fa.signum() != fb.signum() {
                brackets.push((a, fa, b, fb));
            }
        }
    }
    if let Some((e, Some(f))) = values.last() {
        if *f == 0.0 {
            exact.push(*e);
        }
    }
    let mut energies: Vec<f64> = map_slice(opts.execution, &brackets, |&(a, fa, b, fb)| {
        bisect(eq, a, fa, b, fb, opts)
    });
    energies.extend(exact);
    energies.sort_by(f64::total_cmp);
    energies.into_iter().map(|e| make_root(eq, e)).collect()
}

fn select(symmetry: Symmetry, roots: &[EnergyRoot], diagnostics: &mut Vec<String>) -> Option<Selection> {
    let want = SignClass::preferred(symmetry);
    let pick = |sign: SignClass| {
        let mut it = roots.iter().filter(|r| r.sign == sign);
        match sign {
            SignClass::Negative => it.next().copied(),
            SignClass::Positive => it.next_back().copied(),
        }
    };
    let count = roots.iter().filter(|r| r.sign == want).count();
    if count > 1 {
        diagnostics.push(format!("{count} roots of the preferred sign; extreme one selected"));
    }
    if let Some(root) = pick(want) {
        return Some(Selection {
            root,
            kind: SelectionKind::Physical,
        });
    }
    let fallback = pick(want.opposite())?;
    diagnostics.push(format!(
        "no {want:?} root in the {symmetry} limit; reporting the opposite-sign root {}",
        fallback.energy
    ));
    Some(Selection {
        root: fallback,
        kind: SelectionKind::Fallback,
    })
}

/// Roots of the energy condition, cross-checked against the eliminant.
pub fn solve_spectrum(eq: &EnergyEquation, opts: &SolveOptions) -> Result<SpectrumResult> {
    let (lo, hi) = eq.search_window(opts.window_margin)?;
    let mut roots = bisection_roots(eq, opts)?;
    if roots.is_empty() {
        return Err(Error::NoRootFound {
            lo,
            hi,
            f_lo: eq.residual_unchecked(lo).ok(),
            f_hi: eq.residual_unchecked(hi).ok(),
        });
    }
    let oracle = polynomial_oracle(eq, opts.window_margin)?;
    let tol = opts.oracle_tolerance();
    for root in roots.iter_mut() {
        let partnered = oracle
            .surviving
            .iter()
            .any(|&o| (o - root.energy).abs() <= tol);
        if !partnered {
            return Err(Error::OracleMismatch {
                energy: root.energy,
                tolerance: tol,
            });
        }
        root.method = RootMethod::OracleConfirmed;
    }
    let missed_by_bisection: Vec<f64> = oracle
        .surviving
        .iter()
        .copied()
        .filter(|&o| roots.iter().all(|r| (r.energy - o).abs() > tol))
        .collect();
    let mut diagnostics = Vec::new();
    if !missed_by_bisection.is_empty() {
        diagnostics.push(format!(
            "oracle roots without a grid sign change: {missed_by_bisection:?}"
        ));
    }
    for r in &roots {
        let (r1, r2) = r.radicands;
        if r1.min(r2) < EDGE_RADICAND {
            diagnostics.push(format!(
                "root {} lies next to a radicand boundary (R1 = {r1:e}, R2 = {r2:e})",
                r.energy
            ));
        }
    }
    let selected = select(eq.symmetry(), &roots, &mut diagnostics);
    Ok(SpectrumResult {
        state: eq.state(),
        symmetry: eq.symmetry(),
        roots,
        selected,
        oracle,
        missed_by_bisection,
        diagnostics,
    })
}

/// Solves many equations, results in input order.
pub fn solve_batch(eqs: &[EnergyEquation], opts: &SolveOptions) -> Vec<Result<SpectrumResult>> {
    // cells run in parallel; each cell scans sequentially
    let inner = SolveOptions {
        execution: Execution::Sequential,
        ..*opts
    };
    map_slice(opts.execution, eqs, |eq| solve_spectrum(eq, &inner))
}
