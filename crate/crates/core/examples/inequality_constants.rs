//! Empirical constants for the time-convolution inequalities and spot checks of
//! the interpolation and heat-smoothing inequalities.
//!
//! Run with `cargo run --release --example inequality_constants`.

use std::f64::consts::PI;

use mhdwave::decay::verify_expintegral;
use mhdwave::diagnostics::{inequality_spot_checks, GnTuple, HeatTuple};
use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::quadrature::QuadratureOptions;
use mhdwave::GridSpec;

fn main() -> mhdwave::Result<()> {
    let report = verify_expintegral(&[0.1, 1.0, 10.0], &[0.5, 1.0, 2.0], &[1.0, 10.0, 100.0], &QuadratureOptions::default())?;
    for s in &report.summaries {
        println!(
            "{} {:<6} C_emp = {:.6} (refined {:.6}, {} cases)",
            s.inequality.id(),
            s.regime.id(),
            s.c_emp,
            s.c_emp_refined,
            s.n_cases
        );
    }

    let grid = GridSpec::new(64, 2.0 * PI)?;
    let fields: Vec<_> = (0..8)
        .map(|seed| {
            let p = InitialParams { seed, band: (1.0, 8.0), ..InitialParams::default() };
            make_initial_data(InitialFamily::RandomBand, &p, &grid).map(|d| d.u0)
        })
        .collect::<Result<_, _>>()?;
    let gn = [GnTuple { r: 0.0, s1: 0.0, s2: 2.0, q: f64::INFINITY, p1: 2.0, p2: 2.0, theta: 0.5 }];
    let heat = [HeatTuple { s: 1.0, p: 2.0, q: 4.0, times: vec![0.1, 1.0, 10.0] }];
    for r in &inequality_spot_checks(&fields, &gn, &heat)?.rows {
        println!("{} {}: max ratio {:.4} over {} samples", r.check, r.params, r.max_ratio, r.n_samples);
    }
    Ok(())
}
