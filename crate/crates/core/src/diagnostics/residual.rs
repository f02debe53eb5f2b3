use crate::error::{Error, Result};
use crate::solver::Trajectory;

/// Balance residual at one interior snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub t: f64,
    /// `d/dt[½(X_m + Y_m)] + Z_m`, derivative by fourth-order central differences.
    pub residual: f64,
    /// `|residual| / Z_m` (zero when both vanish).
    pub relative: f64,
}

/// Residual of the linear energy balance `d/dt[½(X_m + Y_m)] + Z_m = 0` along a
/// linear trajectory with a snapshot after every step.
///
/// The first and last two snapshots have no centred stencil and are skipped.
pub fn linear_energy_residual(traj: &Trajectory, gamma: f64, m: f64) -> Result<Vec<ResidualPoint>> {
    if traj.nonlinear {
        return Err(Error::Usage("energy balance residual needs a linear trajectory".into()));
    }
    if traj.gamma != gamma || traj.series.config.m != m {
        return Err(Error::Usage(format!(
            "trajectory was measured with gamma = {}, m = {}; asked for gamma = {gamma}, m = {m}",
            traj.gamma, traj.series.config.m
        )));
    }
    let snaps = traj.series.snapshots();
    let dt = traj.dt;
    for w in snaps.windows(2) {
        if ((w[1].t - w[0].t) - dt).abs() > 1e-9 * dt {
            return Err(Error::Usage("energy balance residual needs a snapshot after every full step".into()));
        }
    }
    let e: Vec<f64> = snaps.iter().map(|s| s.energy.balance_energy()).collect();
    let mut out = Vec::new();
    for i in 2..snaps.len().saturating_sub(2) {
        let de = (e[i - 2] - 8.0 * e[i - 1] + 8.0 * e[i + 1] - e[i + 2]) / (12.0 * dt);
        let z = snaps[i].energy.z;
        let residual = de + z;
        let relative = if residual == 0.0 { 0.0 } else { residual.abs() / z };
        out.push(ResidualPoint { t: snaps[i].t, residual, relative });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::DiagnosticsConfig;
    use crate::grid::GridSpec;
    use crate::initial::{make_initial_data, InitialData, InitialFamily, InitialParams};
    use crate::solver::{run, RunOptions, Scheme, SolverConfig};
    use std::f64::consts::PI;

    fn options(m: f64) -> RunOptions {
        RunOptions {
            diagnostics: DiagnosticsConfig { m, ..DiagnosticsConfig::default() },
            ..RunOptions::default()
        }
    }

    #[test]
    fn zero_data_and_usage_errors() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let cfg = SolverConfig::new(g, 1.0, 0.01, 0.1, Scheme::ExpIntegrator).linear();
        let traj = run(&cfg, &InitialData::zeros(g), &options(1.0)).unwrap();
        let r = linear_energy_residual(&traj, 1.0, 1.0).unwrap();
        assert_eq!(r.len(), 7);
        assert!(r.iter().all(|p| p.residual == 0.0 && p.relative == 0.0));
        assert!(matches!(linear_energy_residual(&traj, 2.0, 1.0), Err(Error::Usage(_))));
        let nl = run(&SolverConfig { nonlinear: true, ..cfg }, &InitialData::zeros(g), &options(1.0)).unwrap();
        assert!(matches!(linear_energy_residual(&nl, 1.0, 1.0), Err(Error::Usage(_))));
    }

    #[test]
    fn multi_mode_exp_run_balances() {
        let g = GridSpec::new(32, 2.0 * PI).unwrap();
        let params = InitialParams { seed: 2, a_scale: 0.5, band: (1.0, 3.0), ..InitialParams::default() };
        let data = make_initial_data(InitialFamily::RandomBand, &params, &g).unwrap();
        let cfg = SolverConfig::new(g, 0.5, 1e-3, 0.2, Scheme::ExpIntegrator).linear();
        let traj = run(&cfg, &data, &options(1.0)).unwrap();
        let worst = linear_energy_residual(&traj, 0.5, 1.0).unwrap().iter().map(|p| p.relative).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn imex_residual_is_second_order() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let params = InitialParams { seed: 5, a_scale: 1.0, band: (1.0, 2.0), ..InitialParams::default() };
        let data = make_initial_data(InitialFamily::RandomBand, &params, &g).unwrap();
        let worst = |dt: f64| {
            let cfg = SolverConfig::new(g, 1.0, dt, 0.4, Scheme::ImexReference).linear();
            let traj = run(&cfg, &data, &options(0.0)).unwrap();
            linear_energy_residual(&traj, 1.0, 0.0).unwrap().iter().map(|p| p.relative).fold(0.0, f64::max)
        };
        let ratio = worst(0.02) / worst(0.01);
        assert!((3.0..5.0).contains(&ratio), "{ratio}");
    }
}
