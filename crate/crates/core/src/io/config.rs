//! TOML run configuration.

use std::f64::consts::PI;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::decay::DecayExperiment;
use crate::diagnostics::DiagnosticsConfig;
use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::initial::{make_initial_data, InitialData, InitialFamily, InitialParams};
use crate::quadrature::QuadratureOptions;
use crate::solver::{RunOptions, Scheme, SolverConfig};

/// A length given as a number or as a multiple of π: `"32pi"`, `"2*pi"`, `"π"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Length(pub f64);

impl Length {
    pub fn parse(text: &str) -> Option<f64> {
        let s = text.trim();
        let coef = s.strip_suffix("pi").or_else(|| s.strip_suffix('π'));
        match coef {
            Some(c) => {
                let c = c.trim().trim_end_matches('*').trim();
                if c.is_empty() {
                    Some(PI)
                } else {
                    c.parse::<f64>().ok().map(|v| v * PI)
                }
            }
            None => s.parse().ok(),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Length;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a multiple of pi such as \"32pi\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Length, E> {
                Ok(Length(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Length, E> {
                Ok(Length(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Length, E> {
                Ok(Length(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Length, E> {
                Length::parse(v).map(Length).ok_or_else(|| E::custom(format!("cannot read `{v}` as a length")))
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub box_length: Length,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicsConfig {
    pub gamma: f64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeConfig {
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "one")]
    pub snapshot_every: usize,
    #[serde(default = "half")]
    pub cfl_safety: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoint_every: Option<usize>,
}

fn one() -> usize {
    1
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialDataConfig {
    pub family: InitialFamily,
    pub amplitude: f64,
    pub width: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
    pub seed: u64,
    pub b_scale: f64,
    pub a_scale: f64,
    pub band: (f64, f64),
}

impl Default for InitialDataConfig {
    fn default() -> Self {
        let p = InitialParams::default();
        Self {
            family: InitialFamily::GaussianVortexPair,
            amplitude: p.amplitude,
            width: p.width,
            separation: p.separation,
            seed: p.seed,
            b_scale: p.b_scale,
            a_scale: p.a_scale,
            band: p.band,
        }
    }
}

impl InitialDataConfig {
    pub fn params(&self) -> InitialParams {
        InitialParams {
            amplitude: self.amplitude,
            width: self.width,
            separation: self.separation,
            seed: self.seed,
            b_scale: self.b_scale,
            a_scale: self.a_scale,
            band: self.band,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitConfig {
    /// Overrides the default `[max(5, t_end/20), min(t_end, 0.1 (L/2π)²)]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub gammas: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self { gammas: vec![0.25, 0.5, 1.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CompareConfig {
    /// Decreasing; compared with the γ = 0 baseline at `time.t_end`.
    pub gammas: Vec<f64>,
}

impl Default for CompareConfig {
    fn default() -> Self {
        Self { gammas: vec![0.1, 0.05, 0.025] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LemmaConfig {
    pub r_grid: Vec<f64>,
    pub kappa_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
}

impl Default for LemmaConfig {
    fn default() -> Self {
        let q = QuadratureOptions::default();
        Self {
            r_grid: vec![0.1, 1.0, 10.0],
            kappa_grid: vec![0.5, 1.0, 2.0],
            t_grid: vec![1.0, 10.0, 100.0],
            abs_tol: q.abs_tol,
            rel_tol: q.rel_tol,
        }
    }
}

impl LemmaConfig {
    pub fn quadrature(&self) -> QuadratureOptions {
        QuadratureOptions { abs_tol: self.abs_tol, rel_tol: self.rel_tol, ..QuadratureOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: String,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { directory: "output".into(), formats: vec![Format::Csv] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_scheme")]
    pub scheme: Scheme,
    pub grid: GridConfig,
    pub physics: PhysicsConfig,
    pub time: TimeConfig,
    #[serde(default)]
    pub initial_data: InitialDataConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub compare: CompareConfig,
    #[serde(default)]
    pub lemmas: LemmaConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_scheme() -> Scheme {
    Scheme::ExpIntegrator
}

impl Default for RunConfig {
    /// `n = 128`, `L = 32π`, `γ = 1`, `dt = 0.005`, `t_end = 50`.
    fn default() -> Self {
        Self {
            scheme: default_scheme(),
            grid: GridConfig { n: 128, box_length: Length(32.0 * PI) },
            physics: PhysicsConfig { gamma: 1.0, nonlinear: true },
            time: TimeConfig { dt: 0.005, t_end: 50.0, snapshot_every: 1, cfl_safety: 0.5, checkpoint_every: None },
            initial_data: InitialDataConfig::default(),
            diagnostics: DiagnosticsConfig::default(),
            fit: FitConfig::default(),
            sweep: SweepConfig::default(),
            compare: CompareConfig::default(),
            lemmas: LemmaConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

/// Parse and validate; every error names the offending key.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = toml::Deserializer::parse(text).map_err(|e| Error::config("<document>", e.message().to_string()))?;
    let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "<document>".to_string() } else { path };
        Error::config(path, e.into_inner().message().to_string())
    })?;
    config.validate()?;
    Ok(config)
}

fn positive_list(path: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::config(path, "empty list"));
    }
    match values.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        Some((i, v)) => Err(Error::config(format!("{path}[{i}]"), format!("need a positive value, got {v}"))),
        None => Ok(()),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let grid = self.grid_spec()?;
        self.solver_config()?.validate()?;
        if self.time.snapshot_every == 0 {
            return Err(Error::config("time.snapshot_every", "need at least 1"));
        }
        if self.time.checkpoint_every == Some(0) {
            return Err(Error::config("time.checkpoint_every", "need at least 1"));
        }
        self.diagnostics.validate()?;
        if let Some((lo, hi)) = self.fit.window {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::config("fit.window", format!("need 0 < lo < hi, got ({lo}, {hi})")));
            }
        }
        positive_list("sweep.gammas", &self.sweep.gammas)?;
        if self.sweep.gammas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("sweep.gammas", "need strictly increasing values"));
        }
        positive_list("compare.gammas", &self.compare.gammas)?;
        if self.compare.gammas.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::config("compare.gammas", "need strictly decreasing values"));
        }
        positive_list("lemmas.r_grid", &self.lemmas.r_grid)?;
        positive_list("lemmas.kappa_grid", &self.lemmas.kappa_grid)?;
        positive_list("lemmas.t_grid", &self.lemmas.t_grid)?;
        for (path, v) in [("lemmas.abs_tol", self.lemmas.abs_tol), ("lemmas.rel_tol", self.lemmas.rel_tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(path, format!("need a positive tolerance, got {v}")));
            }
        }
        if self.output.directory.is_empty() {
            return Err(Error::config("output.directory", "empty path"));
        }
        make_initial_data(self.initial_data.family, &self.initial_data.params(), &grid)?;
        Ok(())
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.n, self.grid.box_length.0)
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        Ok(SolverConfig {
            cfl_safety: self.time.cfl_safety,
            nonlinear: self.physics.nonlinear,
            ..SolverConfig::new(self.grid_spec()?, self.physics.gamma, self.time.dt, self.time.t_end, self.scheme)
        })
    }

    pub fn initial_data(&self) -> Result<InitialData> {
        make_initial_data(self.initial_data.family, &self.initial_data.params(), &self.grid_spec()?)
    }

    pub fn run_options(&self) -> RunOptions {
        RunOptions {
            snapshot_every: self.time.snapshot_every,
            diagnostics: self.diagnostics.clone(),
            checkpoint_every: self.time.checkpoint_every,
        }
    }

    pub fn decay_experiment(&self) -> Result<DecayExperiment> {
        let mut exp = DecayExperiment::new(self.solver_config()?, self.initial_data()?);
        exp.options = self.run_options();
        exp.window = self.fit.window;
        Ok(exp)
    }

    /// Canonical TOML with every default spelled out.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Format(format!("cannot serialize config: {e}")))
    }

    /// SHA-256 of [`RunConfig::to_toml`], hex encoded.
    pub fn hash(&self) -> Result<String> {
        Ok(hex::encode(Sha256::digest(self.to_toml()?.as_bytes())))
    }
}
