//! The six subcommands. Each writes under `output.directory` and records every
//! file in the manifest.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::config::{Format, RunConfig};
use super::manifest::Manifest;
use super::series::read_series_csv;
use crate::decay::{
    default_window, gamma_prefactor_scan, singular_limit_experiment, split_window_fit,
    verify_expintegral, FitRow, Inequality, TrackedNorm,
};
use crate::error::{Error, Result};
use crate::kernels::bounds::{verify_kernel_bounds, SampleSpec};
use crate::kernels::checks::verify_kernels;
use crate::solver::{checkpoint, run_from, State};

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    /// Integrate and write the diagnostics series; optionally resume from a checkpoint.
    Simulate { resume: Option<PathBuf> },
    /// Decay fits at each `sweep.gammas` value.
    Sweep,
    /// Fit an existing series CSV.
    FitDecay { series: PathBuf },
    VerifyKernels,
    VerifyLemmas,
    /// Singular-limit comparison against the γ = 0 baseline.
    CompareMhd,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Sweep => "sweep",
            Command::FitDecay { .. } => "fit-decay",
            Command::VerifyKernels => "verify-kernels",
            Command::VerifyLemmas => "verify-lemmas",
            Command::CompareMhd => "compare-mhd",
        }
    }
}

struct Out<'a> {
    manifest: &'a mut Manifest,
    written: Vec<PathBuf>,
}

impl Out<'_> {
    fn file(&mut self, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let path = self.manifest.dir().join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut w = BufWriter::new(File::create(&path)?);
        body(&mut w)?;
        w.flush()?;
        drop(w);
        self.manifest.record_output(name)?;
        self.written.push(path);
        Ok(())
    }

    fn checkpoint(&mut self, name: &str, state: &State, gamma: f64) -> Result<()> {
        self.file(name, |w| checkpoint::write_checkpoint(w, state, gamma))
    }

    fn json<T: serde::Serialize>(&mut self, config: &RunConfig, name: &str, value: &T) -> Result<()> {
        if !config.output.formats.contains(&Format::Json) {
            return Ok(());
        }
        self.file(name, |w| serde_json::to_writer_pretty(w, value).map_err(|e| Error::Format(e.to_string())))
    }
}

/// Runs `command`, returning the files written (manifest excluded).
pub fn execute(command: &Command, config: &RunConfig) -> Result<Vec<PathBuf>> {
    let dir = Path::new(&config.output.directory);
    let mut manifest = Manifest::create(dir, command.name(), config)?;
    let mut out = Out { manifest: &mut manifest, written: Vec::new() };
    let result = dispatch(command, config, &mut out);
    let written = std::mem::take(&mut out.written);
    manifest.finish(&result)?;
    result.map(|()| written)
}

fn dispatch(command: &Command, config: &RunConfig, out: &mut Out) -> Result<()> {
    match command {
        Command::Simulate { resume } => simulate(config, resume.as_deref(), out),
        Command::Sweep => sweep(config, out),
        Command::FitDecay { series } => fit_decay(config, series, out),
        Command::VerifyKernels => verify_kernels_cmd(config, out),
        Command::VerifyLemmas => verify_lemmas(config, out),
        Command::CompareMhd => compare_mhd(config, out),
    }
}

fn simulate(config: &RunConfig, resume: Option<&Path>, out: &mut Out) -> Result<()> {
    let solver = config.solver_config()?;
    let initial = match resume {
        None => State::from_initial(&config.initial_data()?),
        Some(path) => {
            let (state, gamma) = checkpoint::load(path)?;
            if gamma != solver.gamma {
                return Err(Error::Usage(format!("checkpoint was written with gamma = {gamma}, config has {}", solver.gamma)));
            }
            if *state.grid() != solver.grid {
                return Err(Error::Usage("checkpoint grid differs from the configured grid".into()));
            }
            state
        }
    };
    let traj = run_from(&solver, initial, &config.run_options())?;
    out.file("series.csv", |w| traj.series.write_csv(w))?;
    for (i, state) in traj.checkpoints.iter().enumerate() {
        out.checkpoint(&format!("checkpoints/checkpoint_{i:05}.chk"), state, solver.gamma)?;
    }
    out.checkpoint("final.chk", &traj.final_state, solver.gamma)?;
    println!("simulate: {} snapshots to t = {}", traj.series.len(), traj.final_state.t);
    Ok(())
}

fn print_fits(rows: &[FitRow]) {
    for f in rows {
        println!(
            "  {:<8} {:<16} exponent {:>8.4}  theory {:>8.4}  delta {:>8.4}  r2 {:.4}",
            f.norm_id, f.theory_id, f.exponent, f.theory, f.delta, f.r2
        );
    }
}

fn sweep(config: &RunConfig, out: &mut Out) -> Result<()> {
    let exp = config.decay_experiment()?;
    let result = gamma_prefactor_scan(&config.sweep.gammas, &exp)?;
    out.file("sweep_prefactor.csv", |w| result.write_prefactor_csv(w))?;
    out.file("sweep_fits.csv", |w| {
        let mut c = csv::Writer::from_writer(w);
        c.write_record(["gamma", "norm_id", "theory_id", "exponent", "theory", "delta", "r2", "log_prefactor", "window_lo", "window_hi"])?;
        for e in &result.entries {
            for f in &e.fits {
                c.write_record([
                    e.gamma.to_string(),
                    f.norm_id.clone(),
                    f.theory_id.clone(),
                    f.exponent.to_string(),
                    f.theory.to_string(),
                    f.delta.to_string(),
                    f.r2.to_string(),
                    f.log_prefactor.to_string(),
                    f.window.0.to_string(),
                    f.window.1.to_string(),
                ])?;
            }
        }
        c.flush()?;
        Ok(())
    })?;
    for e in &result.entries {
        println!("gamma = {}", e.gamma);
        print_fits(&e.fits);
    }
    match result.exponent_spread("u_L2") {
        Some(s) if !result.is_degenerate() => println!("u_L2 exponent spread across gamma: {s:.4}"),
        _ => println!("degenerate scan (fewer than 3 gammas): exponents only"),
    }
    Ok(())
}

fn fit_decay(config: &RunConfig, series_path: &Path, out: &mut Out) -> Result<()> {
    let series = read_series_csv(series_path)?;
    let t_last = series.times().last().copied().ok_or_else(|| Error::Data("series has no rows".into()))?;
    let window = config.fit.window.unwrap_or_else(|| default_window(&config.grid_spec().expect("validated"), t_last));
    let tracked: Vec<TrackedNorm> = TrackedNorm::defaults(&config.diagnostics)?
        .into_iter()
        .filter(|t| series.column(&t.column).is_some())
        .collect();
    if tracked.is_empty() {
        return Err(Error::Data(format!("{} has no tracked norm columns", series_path.display())));
    }
    let mut rows = Vec::new();
    for t in &tracked {
        let data = series.column(&t.column).expect("filtered");
        let split = split_window_fit(&data, window)?;
        for theory in &t.theories {
            rows.push(FitRow {
                norm_id: t.column.clone(),
                theory_id: theory.id(),
                exponent: split.full.exponent,
                theory: theory.exponent_f64(),
                delta: split.full.exponent - theory.exponent_f64(),
                r2: split.full.r2,
                log_prefactor: split.full.log_prefactor,
                window,
                split_disagreement: split.disagreement(),
            });
        }
    }
    out.file("fit_summary.csv", |w| crate::decay::write_fit_rows(w, &rows))?;
    out.json(config, "fit_summary.json", &rows)?;
    print_fits(&rows);
    Ok(())
}

fn verify_kernels_cmd(config: &RunConfig, out: &mut Out) -> Result<()> {
    let report = verify_kernels(config.initial_data.seed)?;
    out.file("kernel_checks.csv", |w| report.write_csv(w))?;
    let gamma = config.physics.gamma;
    let k2_star = 1.0 / (4.0 * gamma);
    let mut bounds = verify_kernel_bounds(gamma, &SampleSpec::s1((0.75 * k2_star, 400.0 * k2_star)))?;
    bounds.extend(verify_kernel_bounds(gamma, &SampleSpec::s2((0.0, 0.74 * k2_star)))?);
    out.file("kernel_bounds.csv", |w| bounds.write_csv(w))?;
    out.json(config, "kernel_checks.json", &report.rows)?;
    for r in &report.rows {
        println!("  {:<6} {:<13} {:<40} max_error {:.3e}", if r.passed { "PASS" } else { "FAIL" }, r.check, r.params, r.max_error);
    }
    let failed = report.rows.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Error::Data(format!("{failed} kernel checks failed")));
    }
    Ok(())
}

fn verify_lemmas(config: &RunConfig, out: &mut Out) -> Result<()> {
    let l = &config.lemmas;
    let report = verify_expintegral(&l.r_grid, &l.kappa_grid, &l.t_grid, &l.quadrature())?;
    for ineq in Inequality::ALL {
        out.file(&format!("lemma_{}.csv", ineq.id()), |w| report.write_cases_csv(ineq, w))?;
    }
    out.file("lemma_summary.csv", |w| report.write_summary_csv(w))?;
    out.json(config, "lemma_report.json", &report)?;
    for s in &report.summaries {
        println!(
            "  {} {:<8} C_emp {:.6e}  refined {:.6e}  change {:.2e}",
            s.inequality.id(),
            s.regime.id(),
            s.c_emp,
            s.c_emp_refined,
            s.relative_change()
        );
    }
    Ok(())
}

fn compare_mhd(config: &RunConfig, out: &mut Out) -> Result<()> {
    let report = singular_limit_experiment(
        &config.compare.gammas,
        config.time.t_end,
        &config.solver_config()?,
        &config.initial_data()?,
    )?;
    out.file("singular_limit.csv", |w| report.write_csv(w))?;
    for r in &report.rows {
        match r.ratio {
            Some(q) => println!("  gamma {:<8} e {:.6e}  ratio {q:.4}", r.gamma, r.error),
            None => println!("  gamma {:<8} e {:.6e}", r.gamma, r.error),
        }
    }
    Ok(())
}
