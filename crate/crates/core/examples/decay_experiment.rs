//! Algebraic decay of a small Gaussian vortex pair in a large box.
//!
//! Run with `cargo run --release --example decay_experiment`.

use std::f64::consts::PI;

use mhdwave::decay::{run_decay_experiment, DecayExperiment};
use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::solver::{Scheme, SolverConfig};
use mhdwave::GridSpec;

fn main() -> mhdwave::Result<()> {
    let grid = GridSpec::new(256, 32.0 * PI)?;
    let params = InitialParams { amplitude: 0.1, width: 1.0, ..InitialParams::default() };
    let data = make_initial_data(InitialFamily::GaussianVortexPair, &params, &grid)?;
    let mut exp = DecayExperiment::new(SolverConfig::new(grid, 1.0, 0.05, 100.0, Scheme::ExpIntegrator), data);
    exp.options.snapshot_every = 10;
    exp.window = Some((5.0, 26.0));
    let report = run_decay_experiment(&exp)?;
    println!("box L1 norms: u {:.4e}, b {:.4e}", report.box_l1.0, report.box_l1.1);
    println!("{:<8} {:<16} {:>9} {:>9} {:>8} {:>6}", "norm", "theory", "fit", "theory", "delta", "r2");
    for f in &report.fits {
        println!(
            "{:<8} {:<16} {:>9.4} {:>9.4} {:>8.4} {:>6.4}",
            f.norm_id, f.theory_id, f.exponent, f.theory, f.delta, f.r2
        );
    }
    Ok(())
}
