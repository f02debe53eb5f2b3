//! Checkpoint a run halfway, restart from the file and compare with an uninterrupted run.
//!
//! Run with `cargo run --release --example checkpoint_resume`.

use std::f64::consts::PI;

use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::solver::{checkpoint, run, run_from, RunOptions, Scheme, SolverConfig};
use mhdwave::GridSpec;

fn main() -> mhdwave::Result<()> {
    let grid = GridSpec::new(32, 4.0 * PI)?;
    let data = make_initial_data(InitialFamily::GaussianVortexPair, &InitialParams::default(), &grid)?;
    let gamma = 0.5;
    let options = RunOptions::default();

    let full = run(&SolverConfig::new(grid.clone(), gamma, 0.01, 1.0, Scheme::ExpIntegrator), &data, &options)?;
    let half = run(&SolverConfig::new(grid.clone(), gamma, 0.01, 0.5, Scheme::ExpIntegrator), &data, &options)?;

    let path = std::env::temp_dir().join("mhdwave_example.chk");
    checkpoint::save(&path, &half.final_state, gamma)?;
    let (state, g) = checkpoint::load(&path)?;
    let resumed = run_from(&SolverConfig::new(grid, g, 0.01, 1.0, Scheme::ExpIntegrator), state, &options)?;
    std::fs::remove_file(&path)?;

    let gap = full.final_state.b_hat.sub(&resumed.final_state.b_hat).l2_norm();
    println!("||b_full - b_resumed|| at t = 1: {gap:.3e}");
    Ok(())
}
