//! Energy functionals and the linear energy-balance residual.
//!
//! Run with `cargo run --release --example energy_balance`.

use std::f64::consts::PI;

use mhdwave::diagnostics::{energy_functionals, linear_energy_residual, DiagnosticsConfig};
use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::solver::{run, RunOptions, Scheme, SolverConfig, State};
use mhdwave::GridSpec;

fn main() -> mhdwave::Result<()> {
    let (gamma, m) = (0.5, 1.0);
    let grid = GridSpec::new(32, 2.0 * PI)?;
    let params = InitialParams { seed: 3, band: (1.0, 4.0), ..InitialParams::default() };
    let data = make_initial_data(InitialFamily::RandomBand, &params, &grid)?;

    let e0 = energy_functionals(&State::from_initial(&data), m, gamma);
    println!("t = 0: X = {:.6e}, Y = {:.6e}, Z = {:.6e}", e0.x, e0.y, e0.z);

    let config = SolverConfig::new(grid, gamma, 1e-3, 0.2, Scheme::ExpIntegrator).linear();
    let options = RunOptions { diagnostics: DiagnosticsConfig { m, ..DiagnosticsConfig::default() }, ..RunOptions::default() };
    let traj = run(&config, &data, &options)?;
    let residual = linear_energy_residual(&traj, gamma, m)?;
    let worst = residual.iter().map(|p| p.relative).fold(0.0, f64::max);
    println!("{} interior points, max |d/dt E + Z| / Z = {worst:.3e}", residual.len());
    Ok(())
}
