use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{predicted_exponent, rational, split_window_fit, QExponent, RateKind, Rational, TheoryRate};
use crate::diagnostics::{label, lq_norm, DiagnosticsConfig, EnergySeries};
use crate::error::{Error, Result};
use crate::field::transform_inverse;
use crate::grid::GridSpec;
use crate::initial::InitialData;
use crate::solver::{run, RunOptions, SolverConfig, State};

/// A diagnostics column and the rates it is compared against. The first rate
/// is the primary one.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedNorm {
    pub column: String,
    pub theories: Vec<TheoryRate>,
}

impl TrackedNorm {
    /// Every column of `diag` with its c = 1 rates.
    ///
    /// Lᵠ columns get the Ḣ^β rate with `β = 1 − 2/q` (when `β ≤ m`) followed
    /// by the Lᵠ rate; `u` is not tracked above order `m`, `b` up to `m + 1`.
    pub fn defaults(diag: &DiagnosticsConfig) -> Result<Vec<TrackedNorm>> {
        let m = rational(diag.m)?;
        let c = Rational::from_integer(1);
        let mut out = Vec::new();
        for &q in &diag.q_list {
            let mut theories = Vec::new();
            if q >= 2.0 {
                let beta = if q.is_infinite() { Rational::from_integer(1) } else { Rational::from_integer(1) - Rational::from_integer(2) / rational(q)? };
                if beta <= m {
                    theories.push(predicted_exponent(RateKind::Hbeta { beta, c }, m)?);
                }
                let qe = if q.is_infinite() { QExponent::Infinity } else { QExponent::Finite(rational(q)?) };
                theories.push(predicted_exponent(RateKind::Lq(qe), m)?);
            }
            if theories.is_empty() {
                continue;
            }
            for field in ["u", "b"] {
                out.push(TrackedNorm { column: format!("{field}_L{}", label(q)), theories: theories.clone() });
            }
        }
        for &s in &diag.s_list {
            let order = rational(s)?;
            if order <= m {
                let t = predicted_exponent(RateKind::Hbeta { beta: order, c }, m)?;
                out.push(TrackedNorm { column: format!("u_H{}", label(s)), theories: vec![t] });
                out.push(TrackedNorm { column: format!("b_H{}", label(s)), theories: vec![t] });
            } else if order < m + Rational::from_integer(1) {
                let t = predicted_exponent(RateKind::HrhoB { rho: order, c }, m)?;
                out.push(TrackedNorm { column: format!("b_H{}", label(s)), theories: vec![t] });
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayExperiment {
    pub solver: SolverConfig,
    pub initial: InitialData,
    pub options: RunOptions,
    /// Overrides [`default_window`].
    pub window: Option<(f64, f64)>,
    /// `None` tracks [`TrackedNorm::defaults`].
    pub tracked: Option<Vec<TrackedNorm>>,
}

impl DecayExperiment {
    pub fn new(solver: SolverConfig, initial: InitialData) -> Self {
        Self { solver, initial, options: RunOptions::default(), window: None, tracked: None }
    }

    pub fn window(&self) -> (f64, f64) {
        self.window.unwrap_or_else(|| default_window(&self.solver.grid, self.solver.t_end))
    }

    fn tracked(&self) -> Result<Vec<TrackedNorm>> {
        match &self.tracked {
            Some(t) => Ok(t.clone()),
            None => TrackedNorm::defaults(&self.options.diagnostics),
        }
    }
}

/// `[max(5, t_end/20), min(t_end, 0.1 (L/2π)²)]`: after the initial transient,
/// before the spectral gap of the box takes over.
pub fn default_window(grid: &GridSpec, t_end: f64) -> (f64, f64) {
    let l = grid.box_length() / (2.0 * std::f64::consts::PI);
    (f64::max(5.0, t_end / 20.0), f64::min(t_end, 0.1 * l * l))
}

/// One (norm, rate) comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub norm_id: String,
    pub theory_id: String,
    pub exponent: f64,
    pub theory: f64,
    pub delta: f64,
    pub r2: f64,
    pub log_prefactor: f64,
    pub window: (f64, f64),
    /// Exponent gap between the two halves of the window.
    pub split_disagreement: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub series: EnergySeries,
    pub fits: Vec<FitRow>,
    /// Zero data: every norm vanishes and nothing is fitted.
    pub trivial: bool,
    pub window: (f64, f64),
    /// Box L¹ norms of `u₀` and `b₀`.
    pub box_l1: (f64, f64),
    pub final_state: State,
}

impl DecayReport {
    /// Primary fit of a column.
    pub fn fit(&self, norm_id: &str) -> Option<&FitRow> {
        self.fits.iter().find(|f| f.norm_id == norm_id)
    }

    pub fn write_fits_csv<W: Write>(&self, out: W) -> Result<()> {
        write_fit_rows(out, &self.fits)
    }
}

pub fn write_fit_rows<W: Write>(out: W, rows: &[FitRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["norm_id", "theory_id", "exponent", "theory", "delta", "r2", "log_prefactor", "window_lo", "window_hi", "split_disagreement"])?;
    for r in rows {
        w.write_record([
            r.norm_id.clone(),
            r.theory_id.clone(),
            r.exponent.to_string(),
            r.theory.to_string(),
            r.delta.to_string(),
            r.r2.to_string(),
            r.log_prefactor.to_string(),
            r.window.0.to_string(),
            r.window.1.to_string(),
            r.split_disagreement.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn run_decay_experiment(exp: &DecayExperiment) -> Result<DecayReport> {
    let tracked = exp.tracked()?;
    let window = exp.window();
    let traj = run(&exp.solver, &exp.initial, &exp.options)?;
    let box_l1 = (
        lq_norm(&transform_inverse(&exp.initial.u0), 1.0)?,
        lq_norm(&transform_inverse(&exp.initial.b0), 1.0)?,
    );
    let trivial = exp.initial.is_zero();
    let mut fits = Vec::new();
    if !trivial {
        for t in &tracked {
            let series = traj.series.column(&t.column).ok_or_else(|| {
                Error::config("diagnostics", format!("tracked norm `{}` is not a diagnostics column", t.column))
            })?;
            let split = split_window_fit(&series, window)?;
            for theory in &t.theories {
                fits.push(FitRow {
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
    }
    Ok(DecayReport { series: traj.series, fits, trivial, window, box_l1, final_state: traj.final_state })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub gamma: f64,
    pub fits: Vec<FitRow>,
    /// `(‖u(T)‖_{L²}, ‖b(T)‖_{L²})`.
    pub final_l2: (f64, f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Sorted by increasing γ.
    pub entries: Vec<SweepEntry>,
}

impl SweepResult {
    /// Fewer than three γ values: exponents only, no cross-γ contract.
    pub fn is_degenerate(&self) -> bool {
        self.entries.len() < 3
    }

    fn primary(&self, norm_id: &str) -> Vec<(f64, &FitRow)> {
        self.entries
            .iter()
            .filter_map(|e| e.fits.iter().find(|f| f.norm_id == norm_id).map(|f| (e.gamma, f)))
            .collect()
    }

    /// `max − min` of the fitted exponents of a column across γ.
    pub fn exponent_spread(&self, norm_id: &str) -> Option<f64> {
        let ex: Vec<f64> = self.primary(norm_id).iter().map(|(_, f)| f.exponent).collect();
        if ex.is_empty() {
            return None;
        }
        let max = ex.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ex.iter().copied().fold(f64::INFINITY, f64::min);
        Some(max - min)
    }

    /// Fitted prefactors nondecreasing in γ up to a relative slack `tol`.
    pub fn prefactor_nondecreasing(&self, norm_id: &str, tol: f64) -> bool {
        let p = self.primary(norm_id);
        p.windows(2).all(|w| w[1].1.log_prefactor >= w[0].1.log_prefactor - tol)
    }

    pub fn write_prefactor_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["gamma", "norm_id", "exponent", "log_prefactor", "prefactor", "r2"])?;
        for e in &self.entries {
            let mut seen = Vec::new();
            for f in &e.fits {
                if seen.contains(&&f.norm_id) {
                    continue;
                }
                seen.push(&f.norm_id);
                w.write_record([
                    e.gamma.to_string(),
                    f.norm_id.clone(),
                    f.exponent.to_string(),
                    f.log_prefactor.to_string(),
                    f.log_prefactor.exp().to_string(),
                    f.r2.to_string(),
                ])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs `exp` at each γ concurrently; γ must be positive and strictly increasing.
pub fn gamma_prefactor_scan(gammas: &[f64], exp: &DecayExperiment) -> Result<SweepResult> {
    if gammas.is_empty() {
        return Err(Error::domain("gamma scan needs at least one gamma"));
    }
    if let Some(g) = gammas.iter().find(|g| !(**g > 0.0 && g.is_finite())) {
        return Err(Error::domain(format!("gamma scan needs positive gammas, got {g}")));
    }
    if gammas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("gamma scan needs strictly increasing gammas"));
    }
    let entries = gammas
        .par_iter()
        .map(|&gamma| {
            let member = DecayExperiment { solver: SolverConfig { gamma, ..exp.solver.clone() }, ..exp.clone() };
            let report = run_decay_experiment(&member)?;
            let s = &report.final_state;
            Ok(SweepEntry { gamma, fits: report.fits, final_l2: (s.u_hat.l2_norm(), s.b_hat.l2_norm()) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { entries })
}
