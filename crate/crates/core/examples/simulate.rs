//! Nonlinear run with the exponential integrator; the norm series goes to stdout as CSV.
//!
//! Run with `cargo run --release --example simulate > series.csv`.

use std::f64::consts::PI;

use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::solver::{run, RunOptions, Scheme, SolverConfig};
use mhdwave::GridSpec;

fn main() -> mhdwave::Result<()> {
    let grid = GridSpec::new(64, 8.0 * PI)?;
    let params = InitialParams { amplitude: 0.5, ..InitialParams::default() };
    let data = make_initial_data(InitialFamily::GaussianVortexPair, &params, &grid)?;
    let config = SolverConfig::new(grid, 0.5, 0.01, 10.0, Scheme::ExpIntegrator);
    let options = RunOptions { snapshot_every: 50, ..RunOptions::default() };
    let traj = run(&config, &data, &options)?;
    traj.series.write_csv(std::io::stdout().lock())?;
    eprintln!("{} snapshots, final t = {}", traj.series.len(), traj.final_state.t);
    Ok(())
}
