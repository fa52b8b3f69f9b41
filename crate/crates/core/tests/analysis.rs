use approx::assert_abs_diff_eq;
use pseudospin::analysis::{approx_report, h_sweep, potential_profile, Trend, DEFAULT_H_VALUES};
use pseudospin::golden;
use pseudospin::spectrum::{Doublet, RootChoice, SolveOptions};
use pseudospin::wavefn::log_grid;
use pseudospin::{ModelParams, StateIndex, Symmetry};

fn doublet(sym: Symmetry, a: (u32, i32), b: (u32, i32)) -> Doublet {
    Doublet::new(StateIndex::new(a.0, a.1).unwrap(), StateIndex::new(b.0, b.1).unwrap(), sym).unwrap()
}

fn table_doublets(sym: Symmetry) -> Vec<Doublet> {
    let cells: Vec<_> = golden::tables().cells_for(sym).filter(|c| c.h == 0.0).collect();
    cells.chunks(2).map(|p| Doublet::new(p[0].state(), p[1].state(), sym).unwrap()).collect()
}

#[test]
fn approximation_error_grows_from_the_origin() {
    let p = ModelParams::reference(Symmetry::Pseudospin);
    let rep = approx_report(&p, 1e-3, 1.0, 400).unwrap();
    assert!(rep.rel_err.windows(2).all(|w| w[1] >= w[0]));
    assert!(rep.radii.windows(2).all(|w| w[1] > w[0]));
    assert!(rep.exact.iter().chain(&rep.approx).all(|v| v.is_finite()));
}

#[test]
fn profiles_for_two_ranges_never_cross() {
    let grid = log_grid(1e-2, 30.0, 500).unwrap();
    let mut p = ModelParams::reference(Symmetry::Pseudospin);
    let a = potential_profile(&p, &grid).unwrap();
    p.alpha = 0.9;
    let b = potential_profile(&p, &grid).unwrap();
    let diff: Vec<f64> = a.samples.iter().zip(&b.samples).map(|(x, y)| x.v - y.v).collect();
    assert!(diff.iter().all(|d| *d > 0.0));
    // 40-digit evaluation of the closed form
    assert_abs_diff_eq!(diff[0], 7.47230315526667, epsilon = 1e-10);
    assert_abs_diff_eq!(diff[diff.len() - 1], 0.1125, epsilon = 1e-12);
    assert_abs_diff_eq!(a.asymptote - b.asymptote, 0.1125, epsilon = 1e-15);
}

#[test]
fn shape_four_has_zero_asymptote() {
    let mut p = ModelParams::reference(Symmetry::Pseudospin);
    p.a_shape = 4.0;
    p.strict_domain = false;
    let prof = potential_profile(&p, &[1.0, 100.0]).unwrap();
    assert_eq!(prof.asymptote, 0.0);
    assert!(prof.samples[1].v.abs() < 1e-30);
}

#[test]
fn sweep_reproduces_degeneracy_and_table_values() {
    let g = golden::tables();
    let p = g.model_params(Symmetry::Pseudospin, 0.0);
    let doublets = table_doublets(Symmetry::Pseudospin);
    let sweep = h_sweep(&p, &doublets, &DEFAULT_H_VALUES, RootChoice::Selected, &SolveOptions::default()).unwrap();
    assert_eq!(sweep.records.len(), DEFAULT_H_VALUES.len() * 2 * doublets.len());
    for s in sweep.splittings.iter().filter(|s| s.h == 0.0) {
        assert_eq!(s.delta, Some(0.0));
    }
    for c in g.cells_for(Symmetry::Pseudospin) {
        let e = sweep.energy(c.h, c.state()).unwrap();
        assert_abs_diff_eq!(e, c.negative().unwrap(), epsilon = 1e-6);
    }
    // aligned members fall and unaligned members rise with H
    for t in &sweep.trends {
        let expected = if t.state.is_aligned() { Trend::Decreasing } else { Trend::Increasing };
        assert_eq!(t.trend, expected, "{}", t.label);
    }
    let first = sweep.splittings.iter().find(|s| s.h == 1.0 && s.doublet == doublets[0]).unwrap();
    assert_abs_diff_eq!(first.delta.unwrap(), 0.319931821, epsilon = 2e-6);
}

#[test]
fn spin_doublets_are_degenerate_without_tensor() {
    let p = golden::tables().model_params(Symmetry::Spin, 0.0);
    let doublets = table_doublets(Symmetry::Spin);
    let sweep = h_sweep(&p, &doublets, &[0.0], RootChoice::Selected, &SolveOptions::default()).unwrap();
    for s in &sweep.splittings {
        assert_eq!(s.delta, Some(0.0), "{:?}", s.doublet);
    }
}

#[test]
fn sweep_records_failures() {
    let p = ModelParams::reference(Symmetry::Spin);
    let d = doublet(Symmetry::Spin, (0, -2), (0, 1));
    // at H = 1.5 the aligned member has η = 1/2 and no root
    let sweep = h_sweep(&p, &[d], &[0.0, 1.5], RootChoice::Selected, &SolveOptions::default()).unwrap();
    assert_eq!(sweep.records.len(), 4);
    let failed: Vec<_> = sweep.records.iter().filter(|r| r.error.is_some()).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!((failed[0].h, failed[0].state.kappa), (1.5, -2));
    assert!(sweep.splittings.iter().any(|s| s.h == 1.5 && s.delta.is_none()));
    assert_eq!(sweep.trends[0].trend, Trend::Incomplete);
    assert!(h_sweep(&p, &[d], &[f64::NAN], RootChoice::Selected, &SolveOptions::default()).is_err());
}
