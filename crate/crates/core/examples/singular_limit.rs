//! Convergence of the damped-wave system to the γ = 0 MHD baseline.
//!
//! Run with `cargo run --release --example singular_limit`.

use std::f64::consts::PI;

use mhdwave::decay::singular_limit_experiment;
use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::solver::{Scheme, SolverConfig};
use mhdwave::GridSpec;

fn main() -> mhdwave::Result<()> {
    let grid = GridSpec::new(64, 8.0 * PI)?;
    let params = InitialParams { amplitude: 0.5, width: 1.0, ..InitialParams::default() };
    let data = make_initial_data(InitialFamily::GaussianVortexPair, &params, &grid)?;
    let base = SolverConfig::new(grid, 1.0, 0.005, 5.0, Scheme::ExpIntegrator);
    let report = singular_limit_experiment(&[0.1, 0.05, 0.025], 5.0, &base, &data)?;
    println!("{:>8} {:>12} {:>8}", "gamma", "e(gamma)", "ratio");
    for r in &report.rows {
        let ratio = r.ratio.map(|v| format!("{v:.4}")).unwrap_or_default();
        println!("{:>8} {:>12.4e} {:>8}", r.gamma, r.error, ratio);
    }
    println!("strictly decreasing: {}", report.strictly_decreasing());
    Ok(())
}
