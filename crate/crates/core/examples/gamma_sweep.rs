//! Decay exponents and prefactors across several values of γ.
//!
//! Run with `cargo run --release --example gamma_sweep`.

use std::f64::consts::PI;

use mhdwave::decay::{gamma_prefactor_scan, DecayExperiment};
use mhdwave::initial::{make_initial_data, InitialFamily, InitialParams};
use mhdwave::solver::{RunOptions, Scheme, SolverConfig};
use mhdwave::GridSpec;

fn main() -> mhdwave::Result<()> {
    let grid = GridSpec::new(64, 16.0 * PI)?;
    let params = InitialParams { amplitude: 0.1, ..InitialParams::default() };
    let data = make_initial_data(InitialFamily::GaussianVortexPair, &params, &grid)?;
    let solver = SolverConfig::new(grid, 1.0, 0.05, 40.0, Scheme::ExpIntegrator);
    let mut exp = DecayExperiment::new(solver, data);
    exp.options = RunOptions { snapshot_every: 5, ..RunOptions::default() };
    exp.window = Some((5.0, 40.0));

    let sweep = gamma_prefactor_scan(&[0.25, 0.5, 1.0], &exp)?;
    println!("{:>6} {:>8} {:>10} {:>10}", "gamma", "norm", "exponent", "prefactor");
    for e in &sweep.entries {
        for norm in ["u_L2", "b_L2"] {
            let Some(f) = e.fits.iter().find(|f| f.norm_id == norm) else { continue };
            println!("{:>6} {:>8} {:>10.4} {:>10.4e}", e.gamma, f.norm_id, f.exponent, f.log_prefactor.exp());
        }
    }
    println!("u_L2 exponent spread: {:?}", sweep.exponent_spread("u_L2"));
    Ok(())
}
