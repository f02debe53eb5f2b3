use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::initial::InitialData;
use crate::solver::{Scheme, Solver, SolverConfig, State};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularLimitRow {
    pub gamma: f64,
    /// `‖b_γ(T) − b_MHD(T)‖_{L²} + ‖u_γ(T) − u_MHD(T)‖_{L²}`.
    pub error: f64,
    /// `error / previous error`; `None` on the first row.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularLimitReport {
    pub t_end: f64,
    /// In the order of the (decreasing) γ list.
    pub rows: Vec<SingularLimitRow>,
}

impl SingularLimitReport {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }

    pub fn max_ratio(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.ratio).reduce(f64::max)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["gamma", "error", "ratio"])?;
        for r in &self.rows {
            w.write_record([r.gamma.to_string(), r.error.to_string(), r.ratio.map(|v| v.to_string()).unwrap_or_default()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn final_state(config: SolverConfig, data: &InitialData) -> Result<State> {
    Solver::new(config)?.run_with(State::from_initial(data), usize::MAX, |_| Ok(()))
}

/// Runs the exponential integrator at each γ and the γ = 0 baseline to
/// `t_end` from the same data. `base` supplies grid, `dt`, CFL safety and the
/// nonlinear switch; its scheme and γ are ignored.
pub fn singular_limit_experiment(
    gammas: &[f64],
    t_end: f64,
    base: &SolverConfig,
    data: &InitialData,
) -> Result<SingularLimitReport> {
    if gammas.is_empty() {
        return Err(Error::domain("singular limit needs at least one gamma"));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::domain(format!("gamma {g} rejected: need gamma > 0, the MHD baseline is the comparator")));
    }
    if gammas.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("singular limit needs strictly decreasing gammas"));
    }
    let cfg = |gamma, scheme| SolverConfig { gamma, scheme, t_end, ..base.clone() };
    let mut configs = vec![cfg(0.0, Scheme::MhdBaseline)];
    configs.extend(gammas.iter().map(|&g| cfg(g, Scheme::ExpIntegrator)));
    let mut finals = configs.into_par_iter().map(|c| final_state(c, data)).collect::<Result<Vec<_>>>()?;
    let mhd = finals.remove(0);
    let mut rows: Vec<SingularLimitRow> = Vec::with_capacity(gammas.len());
    for (&gamma, s) in gammas.iter().zip(&finals) {
        let error = s.b_hat.sub(&mhd.b_hat).l2_norm() + s.u_hat.sub(&mhd.u_hat).l2_norm();
        let ratio = rows.last().map(|p| error / p.error);
        rows.push(SingularLimitRow { gamma, error, ratio });
    }
    Ok(SingularLimitReport { t_end, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::initial::{make_initial_data, InitialFamily, InitialParams};
    use crate::kernels::{k0_hat, k1_hat};

    fn data(grid: &GridSpec, a_scale: f64) -> InitialData {
        let p = InitialParams { seed: 9, amplitude: 0.3, a_scale, band: (1.0, 4.0), ..InitialParams::default() };
        make_initial_data(InitialFamily::RandomBand, &p, grid).unwrap()
    }

    #[test]
    fn preconditions() {
        let g = GridSpec::new(16, 6.0).unwrap();
        let base = SolverConfig::new(g, 1.0, 0.01, 0.1, Scheme::ExpIntegrator);
        let d = data(&g, 0.0);
        assert!(matches!(singular_limit_experiment(&[0.1, 0.0], 0.1, &base, &d), Err(Error::Domain(_))));
        assert!(matches!(singular_limit_experiment(&[0.05, 0.1], 0.1, &base, &d), Err(Error::Domain(_))));
        assert!(matches!(singular_limit_experiment(&[], 0.1, &base, &d), Err(Error::Domain(_))));
    }

    #[test]
    fn linear_runs_match_mode_sum() {
        let g = GridSpec::new(16, 6.0).unwrap();
        let t_end = 0.5;
        let base = SolverConfig::new(g, 1.0, 0.05, t_end, Scheme::ExpIntegrator).linear();
        let d = data(&g, -0.4);
        let gammas = [0.2, 0.1, 0.05];
        let report = singular_limit_experiment(&gammas, t_end, &base, &d).unwrap();
        for (row, &gamma) in report.rows.iter().zip(&gammas) {
            // u follows the heat flow in both runs, so only b differs
            let mut acc = 0.0;
            for (idx, _, _, k) in g.modes() {
                let (k0, k1) = (k0_hat(gamma, k.k2, t_end).unwrap(), k1_hat(gamma, k.k2, t_end).unwrap());
                let heat = (-k.k2 * t_end).exp();
                let (b, a) = (d.b0.at(idx), d.a0.at(idx));
                for (bc, ac) in [(b.0, a.0), (b.1, a.1)] {
                    acc += ((k0 + 0.5 * k1 - heat) * bc + gamma * k1 * ac).norm_sqr();
                }
            }
            let oracle = g.box_length() * acc.sqrt();
            assert!((row.error - oracle).abs() <= 1e-8 * oracle, "{} vs {oracle}", row.error);
        }
        assert!(report.strictly_decreasing());
        let mut buf = Vec::new();
        report.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }
}
