//! Time integration.
//!
//! Three schemes share one state layout `(û, b̂, ∂ₜb̂)`:
//!
//! - [`Scheme::ExpIntegrator`]: exponential Euler. Each mode of `u` is advanced
//!   with `e^{−|k|²dt}` and each `(b̂, ∂ₜb̂)` pair with the exact damped-wave
//!   propagator; the quadratic terms are frozen over the step and enter through
//!   the exact integrals of the corresponding kernels.
//! - [`Scheme::ImexReference`]: Crank–Nicolson on the linear terms with a Heun
//!   (explicit trapezoid) treatment of the quadratic terms. Second order.
//! - [`Scheme::MhdBaseline`]: the `γ = 0` limit, where the magnetic equation is
//!   parabolic; `∂ₜb̂` is not tracked and stays zero.
//!
//! The means of the quadratic terms are re-zeroed each step, so the box
//! averages of `u` and `b` are carried unchanged.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::diagnostics::{DiagnosticsConfig, EnergySeries, NormSnapshot};
use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::GridSpec;
use crate::initial::InitialData;
use crate::kernels::{duhamel_k1_weight, kernel_pair, mode_propagator, ModePropagator};

pub mod checkpoint;
mod nonlinear;

pub use nonlinear::compute_nonlinear;

/// Relative divergence tolerance for accepted states.
const DIVERGENCE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub u_hat: SpectralVectorField,
    pub b_hat: SpectralVectorField,
    /// `∂ₜb̂`.
    pub bt_hat: SpectralVectorField,
    pub t: f64,
}

impl State {
    pub fn zeros(grid: GridSpec) -> Self {
        let z = SpectralVectorField::zeros(grid);
        Self {
            u_hat: z.clone(),
            b_hat: z.clone(),
            bt_hat: z,
            t: 0.0,
        }
    }

    /// `(u₀, b₀, a₀)` at `t = 0`.
    pub fn from_initial(data: &InitialData) -> Self {
        Self {
            u_hat: data.u0.clone(),
            b_hat: data.b0.clone(),
            bt_hat: data.a0.clone(),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.u_hat.grid()
    }

    /// Check grids, finiteness, incompressibility and Hermitian symmetry.
    pub fn validate(&self) -> Result<()> {
        let grid = *self.grid();
        for (name, f) in self.fields() {
            if *f.grid() != grid {
                return Err(Error::Data(format!("{name} lives on a different grid")));
            }
            if !f.all_finite() {
                return Err(Error::Data(format!("{name} holds non-finite coefficients")));
            }
            if !f.is_divergence_free(DIVERGENCE_TOL) {
                return Err(Error::Data(format!(
                    "{name} is not divergence-free (max |k·f| = {:e})",
                    f.divergence_max()
                )));
            }
            let scale = f.max_coefficient();
            if f.hermitian_defect() > 1e-12 * scale {
                return Err(Error::Data(format!("{name} is not the spectrum of a real field")));
            }
        }
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::Data(format!("bad state time {}", self.t)));
        }
        Ok(())
    }

    fn fields(&self) -> [(&'static str, &SpectralVectorField); 3] {
        [("u", &self.u_hat), ("b", &self.b_hat), ("bt", &self.bt_hat)]
    }

    fn all_finite(&self) -> bool {
        self.u_hat.all_finite() && self.b_hat.all_finite() && self.bt_hat.all_finite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    ExpIntegrator,
    ImexReference,
    MhdBaseline,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub grid: GridSpec,
    /// Ignored by [`Scheme::MhdBaseline`].
    pub gamma: f64,
    pub dt: f64,
    /// Absolute end time.
    pub t_end: f64,
    pub scheme: Scheme,
    /// Each step requires `dt ≤ cfl_safety·(L/n)/max(1, max|u| + max|b|)`.
    pub cfl_safety: f64,
    /// Switches the quadratic terms off for linear runs.
    pub nonlinear: bool,
}

impl SolverConfig {
    pub fn new(grid: GridSpec, gamma: f64, dt: f64, t_end: f64, scheme: Scheme) -> Self {
        Self {
            grid,
            gamma,
            dt,
            t_end,
            scheme,
            cfl_safety: 0.5,
            nonlinear: true,
        }
    }

    pub fn linear(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let gamma_ok = match self.scheme {
            Scheme::MhdBaseline => self.gamma.is_finite() && self.gamma >= 0.0,
            _ => self.gamma.is_finite() && self.gamma > 0.0,
        };
        if !gamma_ok {
            return Err(Error::config("physics.gamma", format!("need gamma > 0, got {}", self.gamma)));
        }
        if !(self.dt.is_finite() && self.dt >= 0.0) {
            return Err(Error::config("time.dt", format!("need dt >= 0, got {}", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::config("time.t_end", format!("need t_end >= 0, got {}", self.t_end)));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::config(
                "time.cfl_safety",
                format!("need 0 < cfl_safety <= 1, got {}", self.cfl_safety),
            ));
        }
        Ok(())
    }

    /// Largest admissible step for the given `max|u| + max|b|`.
    pub fn cfl_limit(&self, speed: f64) -> f64 {
        self.cfl_safety * self.grid.dx() / speed.max(1.0)
    }
}

/// Per-mode multipliers for one step size.
enum Tables {
    Exp {
        heat: Vec<f64>,
        heat_weight: Vec<f64>,
        prop: Vec<ModePropagator>,
        w_b: Vec<f64>,
        w_bt: Vec<f64>,
    },
    Imex {
        heat: Vec<f64>,
        heat_weight: Vec<f64>,
        prop: Vec<ModePropagator>,
        w_b: Vec<f64>,
        w_bt: Vec<f64>,
    },
    Baseline {
        heat: Vec<f64>,
        heat_weight: Vec<f64>,
    },
}

/// `e^{−k²dt}` and `(1 − e^{−k²dt})/k²`.
fn heat_tables(k2: &[f64], dt: f64) -> (Vec<f64>, Vec<f64>) {
    let heat = k2.iter().map(|&k| (-k * dt).exp()).collect();
    let weight = k2
        .iter()
        .map(|&k| if k == 0.0 { dt } else { -(-k * dt).exp_m1() / k })
        .collect();
    (heat, weight)
}

impl Tables {
    fn build(config: &SolverConfig, dt: f64) -> Self {
        let k2 = config.grid.k2_table();
        let g = config.gamma;
        match config.scheme {
            Scheme::ExpIntegrator => {
                let (heat, heat_weight) = heat_tables(&k2, dt);
                Tables::Exp {
                    heat,
                    heat_weight,
                    prop: k2.iter().map(|&k| mode_propagator(g, k, dt)).collect(),
                    w_b: k2.iter().map(|&k| duhamel_k1_weight(g, k, dt)).collect(),
                    w_bt: k2.iter().map(|&k| kernel_pair(g, k, dt).1).collect(),
                }
            }
            Scheme::ImexReference => {
                let h = 0.5 * dt;
                let heat = k2.iter().map(|&k| (1.0 - h * k) / (1.0 + h * k)).collect();
                let heat_weight = k2.iter().map(|&k| dt / (1.0 + h * k)).collect();
                let mut prop = Vec::with_capacity(k2.len());
                let mut w_b = Vec::with_capacity(k2.len());
                let mut w_bt = Vec::with_capacity(k2.len());
                for &k in &k2 {
                    // (I − hA)⁻¹(I + hA) with A = [[0, 1], [−k²/γ, −1/γ]]
                    let det = 1.0 + h / g + h * h * k / g;
                    let inv = ModePropagator {
                        m00: (1.0 + h / g) / det,
                        m01: h / det,
                        m10: -h * k / g / det,
                        m11: 1.0 / det,
                    };
                    let plus = ModePropagator {
                        m00: 1.0,
                        m01: h,
                        m10: -h * k / g,
                        m11: 1.0 - h / g,
                    };
                    prop.push(inv.compose(&plus));
                    // forcing (0, N/γ) enters through dt·(I − hA)⁻¹
                    w_b.push(dt * inv.m01 / g);
                    w_bt.push(dt * inv.m11 / g);
                }
                Tables::Imex {
                    heat,
                    heat_weight,
                    prop,
                    w_b,
                    w_bt,
                }
            }
            Scheme::MhdBaseline => {
                let (heat, heat_weight) = heat_tables(&k2, dt);
                Tables::Baseline { heat, heat_weight }
            }
        }
    }
}

/// `out = a·x + w·f` per mode and component.
fn affine(x: &SpectralVectorField, a: &[f64], f: Option<(&SpectralVectorField, &[f64])>) -> SpectralVectorField {
    let mut out = x.clone();
    for c in 0..2 {
        let dst = out.component_mut(c);
        for (idx, z) in dst.iter_mut().enumerate() {
            *z *= a[idx];
        }
        if let Some((f, w)) = f {
            for (idx, (z, fz)) in dst.iter_mut().zip(f.component(c)).enumerate() {
                *z += w[idx] * fz;
            }
        }
    }
    out
}

/// `(b, ∂ₜb) ↦ M(b, ∂ₜb) + (w_b, w_bt)·f`.
fn wave_update(
    b: &SpectralVectorField,
    bt: &SpectralVectorField,
    prop: &[ModePropagator],
    forcing: Option<(&SpectralVectorField, &[f64], &[f64])>,
) -> (SpectralVectorField, SpectralVectorField) {
    let mut nb = b.clone();
    let mut nbt = bt.clone();
    for c in 0..2 {
        let (bc, btc) = (b.component(c), bt.component(c));
        let (ob, obt) = (nb.component_mut(c), nbt.component_mut(c));
        for idx in 0..bc.len() {
            let (x, y): (Complex64, Complex64) = prop[idx].apply(bc[idx], btc[idx]);
            ob[idx] = x;
            obt[idx] = y;
        }
        if let Some((f, wb, wbt)) = forcing {
            let fc = f.component(c);
            for idx in 0..bc.len() {
                ob[idx] += wb[idx] * fc[idx];
            }
            let obt = nbt.component_mut(c);
            for idx in 0..bc.len() {
                obt[idx] += wbt[idx] * fc[idx];
            }
        }
    }
    (nb, nbt)
}

/// A configured integrator with cached per-mode tables.
pub struct Solver {
    config: SolverConfig,
    tables: Tables,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let tables = Tables::build(&config, config.dt);
        Ok(Self { config, tables })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    /// One step of size `config.dt`.
    pub fn step(&self, state: &State) -> Result<State> {
        self.step_with(&self.tables, self.config.dt, state)
    }

    fn step_with(&self, tables: &Tables, dt: f64, state: &State) -> Result<State> {
        if *state.grid() != self.config.grid {
            return Err(Error::config("grid", "state and solver grids differ"));
        }
        let t = state.t;
        let nl = if self.config.nonlinear {
            Some(nonlinear::evaluate(&state.u_hat, &state.b_hat, t)?)
        } else {
            None
        };
        let speed = match &nl {
            Some(nl) => nl.speed,
            None => nonlinear::speed(&state.u_hat, &state.b_hat),
        };
        let limit = self.config.cfl_limit(speed);
        if !speed.is_finite() {
            return Err(Error::BlowUp { t, message: "non-finite velocity".into() });
        }
        if dt > limit * (1.0 + 1e-12) {
            return Err(Error::StepSize { t, dt, limit });
        }
        let next = match tables {
            Tables::Exp { heat, heat_weight, prop, w_b, w_bt } => {
                let u = affine(&state.u_hat, heat, nl.as_ref().map(|n| (&n.n_u, heat_weight.as_slice())));
                let (b, bt) = wave_update(
                    &state.b_hat,
                    &state.bt_hat,
                    prop,
                    nl.as_ref().map(|n| (&n.n_b, w_b.as_slice(), w_bt.as_slice())),
                );
                State { u_hat: u, b_hat: b, bt_hat: bt, t: t + dt }
            }
            Tables::Imex { heat, heat_weight, prop, w_b, w_bt } => {
                let advance = |fu: Option<&SpectralVectorField>, fb: Option<&SpectralVectorField>| {
                    let u = affine(&state.u_hat, heat, fu.map(|f| (f, heat_weight.as_slice())));
                    let (b, bt) = wave_update(&state.b_hat, &state.bt_hat, prop, fb.map(|f| (f, w_b.as_slice(), w_bt.as_slice())));
                    State { u_hat: u, b_hat: b, bt_hat: bt, t: t + dt }
                };
                match &nl {
                    None => advance(None, None),
                    Some(n0) => {
                        let predicted = advance(Some(&n0.n_u), Some(&n0.n_b));
                        let n1 = nonlinear::evaluate(&predicted.u_hat, &predicted.b_hat, t + dt)?;
                        let fu = n0.n_u.add(&n1.n_u).scaled(0.5);
                        let fb = n0.n_b.add(&n1.n_b).scaled(0.5);
                        advance(Some(&fu), Some(&fb))
                    }
                }
            }
            Tables::Baseline { heat, heat_weight } => {
                let u = affine(&state.u_hat, heat, nl.as_ref().map(|n| (&n.n_u, heat_weight.as_slice())));
                let b = affine(&state.b_hat, heat, nl.as_ref().map(|n| (&n.n_b, heat_weight.as_slice())));
                State {
                    u_hat: u,
                    b_hat: b,
                    bt_hat: SpectralVectorField::zeros(self.config.grid),
                    t: t + dt,
                }
            }
        };
        if !next.all_finite() {
            return Err(Error::BlowUp { t, message: "non-finite coefficients after the step".into() });
        }
        Ok(next)
    }

    /// Advance from `state.t` to `config.t_end`, calling `observe` on the
    /// initial state, after every `every`-th step and on the final state.
    ///
    /// Steps have size `dt` except a shorter last one when `t_end − t` is not a
    /// multiple of `dt`.
    pub fn run_with(
        &self,
        initial: State,
        every: usize,
        mut observe: impl FnMut(&State) -> Result<()>,
    ) -> Result<State> {
        initial.validate()?;
        if *initial.grid() != self.config.grid {
            return Err(Error::config("grid", "initial data and solver grids differ"));
        }
        let every = every.max(1);
        let (t0, dt) = (initial.t, self.config.dt);
        let remaining = self.config.t_end - t0;
        if remaining < 0.0 {
            return Err(Error::config("time.t_end", format!("t_end {} precedes the state time {t0}", self.config.t_end)));
        }
        observe(&initial)?;
        if remaining == 0.0 {
            return Ok(initial);
        }
        if dt <= 0.0 {
            return Err(Error::config("time.dt", "need dt > 0 to advance"));
        }
        let steps = ((remaining / dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        let last_dt = self.config.t_end - (t0 + (steps - 1) as f64 * dt);
        let last_tables = if (last_dt - dt).abs() > 1e-12 * dt {
            Some(Tables::build(&self.config, last_dt))
        } else {
            None
        };
        let mut state = initial;
        for i in 1..=steps {
            let is_last = i == steps;
            let mut next = match (&last_tables, is_last) {
                (Some(tables), true) => self.step_with(tables, last_dt, &state),
                _ => self.step(&state),
            }
            .map_err(|e| e.at_time(state.t))?;
            next.t = if is_last { self.config.t_end } else { t0 + i as f64 * dt };
            state = next;
            if i % every == 0 || is_last {
                observe(&state)?;
            }
        }
        Ok(state)
    }
}

/// One exponential-integrator step.
pub fn step_exp(state: &State, config: &SolverConfig) -> Result<State> {
    Solver::new(SolverConfig { scheme: Scheme::ExpIntegrator, ..config.clone() })?.step(state)
}

/// One IMEX reference step.
pub fn step_imex(state: &State, config: &SolverConfig) -> Result<State> {
    Solver::new(SolverConfig { scheme: Scheme::ImexReference, ..config.clone() })?.step(state)
}

/// One step of the `γ = 0` MHD system.
pub fn step_mhd_baseline(state: &State, config: &SolverConfig) -> Result<State> {
    Solver::new(SolverConfig { scheme: Scheme::MhdBaseline, ..config.clone() })?.step(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub snapshot_every: usize,
    pub diagnostics: DiagnosticsConfig,
    /// Keep a copy of the state every this many steps (and at the end).
    pub checkpoint_every: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            snapshot_every: 1,
            diagnostics: DiagnosticsConfig::default(),
            checkpoint_every: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub scheme: Scheme,
    pub gamma: f64,
    pub dt: f64,
    pub nonlinear: bool,
    pub series: EnergySeries,
    pub checkpoints: Vec<State>,
    pub final_state: State,
}

/// Integrate `(u₀, b₀, a₀)` from `t = 0`.
pub fn run(config: &SolverConfig, initial: &InitialData, options: &RunOptions) -> Result<Trajectory> {
    run_from(config, State::from_initial(initial), options)
}

/// Integrate an arbitrary state (e.g. a loaded checkpoint) to `config.t_end`.
pub fn run_from(config: &SolverConfig, initial: State, options: &RunOptions) -> Result<Trajectory> {
    options.diagnostics.validate()?;
    let solver = Solver::new(config.clone())?;
    let mut series = EnergySeries::new(options.diagnostics.clone(), config.gamma);
    let mut checkpoints = Vec::new();
    let every = options.snapshot_every.max(1);
    let cp_every = options.checkpoint_every.map(|c| c.max(1));
    let mut observed = 0usize;
    let final_state = solver.run_with(initial, 1, |s| {
        let index = observed;
        observed += 1;
        let at_end = s.t == config.t_end;
        if index % every == 0 || at_end {
            series.push(NormSnapshot::measure(s, &options.diagnostics, config.gamma)?)?;
        }
        if let Some(c) = cp_every {
            if index % c == 0 || at_end {
                checkpoints.push(s.clone());
            }
        }
        Ok(())
    })?;
    Ok(Trajectory {
        scheme: config.scheme,
        gamma: config.gamma,
        dt: config.dt,
        nonlinear: config.nonlinear,
        series,
        checkpoints,
        final_state,
    })
}
