use std::f64::consts::PI;

use mhdwave::initial::{make_initial_data, InitialData, InitialFamily, InitialParams};
use mhdwave::solver::{compute_nonlinear, run, RunOptions, Scheme, SolverConfig, State};
use mhdwave::GridSpec;
use proptest::prelude::*;

fn band(grid: &GridSpec, seed: u64, amplitude: f64, b_scale: f64) -> InitialData {
    let p = InitialParams { amplitude, seed, b_scale, band: (1.0, 6.0), ..InitialParams::default() };
    make_initial_data(InitialFamily::RandomBand, &p, grid).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quadratic_terms_exchange_energy_without_creating_it(seed in any::<u64>(), amp in 0.01f64..3.0, bs in 0.0f64..2.0) {
        let g = GridSpec::new(32, 2.0 * PI).unwrap();
        let d = band(&g, seed, amp, bs);
        let s = State::from_initial(&d);
        let (nu, nb) = compute_nonlinear(&s).unwrap();
        let total = nu.inner(&s.u_hat) + nb.inner(&s.b_hat);
        let scale = (s.u_hat.l2_norm() + s.b_hat.l2_norm()).powi(3);
        prop_assert!(total.abs() <= 1e-10 * scale, "{total} vs {scale}");
    }
}

#[test]
fn small_gamma_tracks_the_heat_limit() {
    let g = GridSpec::new(32, 4.0 * PI).unwrap();
    let d = band(&g, 2, 0.3, 1.0);
    let opts = RunOptions::default();
    let wave = run(&SolverConfig::new(g, 1e-4, 0.005, 1.0, Scheme::ExpIntegrator), &d, &opts).unwrap();
    let mhd = run(&SolverConfig::new(g, 0.0, 0.005, 1.0, Scheme::MhdBaseline), &d, &opts).unwrap();
    let (bw, bm) = (&wave.final_state.b_hat, &mhd.final_state.b_hat);
    assert!(bw.sub(bm).l2_norm() <= 1e-2 * bm.l2_norm());
}

#[test]
fn velocity_energy_is_non_increasing() {
    let g = GridSpec::new(64, 8.0 * PI).unwrap();
    let p = InitialParams { amplitude: 0.3, width: 1.0, ..InitialParams::default() };
    let d = make_initial_data(InitialFamily::GaussianVortexPair, &p, &g).unwrap();
    let mut cfg = SolverConfig::new(g, 1.0, 0.02, 4.0, Scheme::ExpIntegrator);
    cfg.nonlinear = false;
    let t = run(&cfg, &d, &RunOptions::default()).unwrap();
    let u = t.series.column("u_L2").unwrap();
    assert!(u.windows(2).all(|w| w[1].1 <= w[0].1));
}
