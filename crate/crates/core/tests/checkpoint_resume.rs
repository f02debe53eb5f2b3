use std::f64::consts::PI;

use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::solver::{checkpoint, run, run_from, RunOptions, Scheme, SolverConfig};
use mhdwave::GridSpec;

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let grid = GridSpec::new(32, 2.0 * PI).unwrap();
    let params = InitialParams { amplitude: 0.5, seed: 11, a_scale: 0.2, ..InitialParams::default() };
    let data = make_initial_data(InitialFamily::RandomBand, &params, &grid).unwrap();
    let opts = RunOptions::default();
    for scheme in [Scheme::ExpIntegrator, Scheme::ImexReference, Scheme::MhdBaseline] {
        let full_cfg = SolverConfig::new(grid, 0.3, 0.01, 0.5, scheme);
        let full = run(&full_cfg, &data, &opts).unwrap();

        let half = run(&SolverConfig { t_end: 0.2, ..full_cfg.clone() }, &data, &opts).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("mid.chk");
        checkpoint::save(&path, &half.final_state, 0.3).unwrap();
        let (state, gamma) = checkpoint::load(&path).unwrap();
        assert_eq!(gamma, 0.3);
        let resumed = run_from(&full_cfg, state, &opts).unwrap();

        let a = full.series.snapshots().last().unwrap().values();
        let b = resumed.series.snapshots().last().unwrap().values();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300), "{scheme:?}: {x} vs {y}");
        }
        let times: Vec<f64> = resumed.series.snapshots().iter().map(|s| s.t).collect();
        let tail: Vec<f64> = full.series.snapshots().iter().map(|s| s.t).filter(|t| *t >= 0.2 - 1e-12).collect();
        assert_eq!(times.len(), tail.len());
    }
}
