//! Divergence-free initial data built from stream functions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;
use crate::field::SpectralVectorField;
use crate::grid::GridSpec;
use crate::spectral::{dealias, inverse_laplacian, perp_gradient};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialFamily {
    /// `u₀ = A(sin x cos y, −cos x sin y)` in units of the fundamental wavenumber.
    TaylorGreen,
    /// Counter-rotating pair of Gaussian vortices.
    GaussianVortexPair,
    /// Random stream function confined to an annulus of mode indices.
    RandomBand,
}

/// Parameters shared by all families. Fields unused by a family are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialParams {
    /// Overall scale. Taylor–Green: velocity amplitude; vortex pair: peak
    /// vorticity of each vortex; random band: RMS velocity.
    pub amplitude: f64,
    /// Gaussian core radius of each vortex.
    pub width: f64,
    /// Vortex spacing; defaults to `2·width` when absent.
    pub separation: Option<f64>,
    pub seed: u64,
    /// `b₀` relative to `u₀`.
    pub b_scale: f64,
    /// `a₀ = a_scale · b₀`; zero by default.
    pub a_scale: f64,
    /// Inclusive annulus of integer mode radii for `random_band`.
    pub band: (f64, f64),
}

impl Default for InitialParams {
    fn default() -> Self {
        Self {
            amplitude: 0.1,
            width: 1.0,
            separation: None,
            seed: 0,
            b_scale: 1.0,
            a_scale: 0.0,
            band: (1.0, 4.0),
        }
    }
}

/// The triple `(u₀, b₀, a₀)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialData {
    pub u0: SpectralVectorField,
    pub b0: SpectralVectorField,
    pub a0: SpectralVectorField,
}

impl InitialData {
    pub fn zeros(grid: GridSpec) -> Self {
        let z = SpectralVectorField::zeros(grid);
        Self {
            u0: z.clone(),
            b0: z.clone(),
            a0: z,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.u0.is_zero() && self.b0.is_zero() && self.a0.is_zero()
    }
}

pub fn make_initial_data(
    family: InitialFamily,
    params: &InitialParams,
    grid: &GridSpec,
) -> Result<InitialData> {
    if !(params.amplitude.is_finite() && params.amplitude >= 0.0) {
        return Err(Error::config(
            "initial_data.amplitude",
            format!("need a nonnegative amplitude, got {}", params.amplitude),
        ));
    }
    for (name, v) in [("b_scale", params.b_scale), ("a_scale", params.a_scale)] {
        if !v.is_finite() {
            return Err(Error::config(format!("initial_data.{name}"), "not finite"));
        }
    }
    let (u_psi, b_psi) = match family {
        InitialFamily::TaylorGreen => taylor_green_streams(params, grid),
        InitialFamily::GaussianVortexPair => vortex_pair_streams(params, grid)?,
        InitialFamily::RandomBand => random_band_streams(params, grid)?,
    };
    let u0 = dealias(&perp_gradient(grid, &u_psi));
    let b0 = dealias(&perp_gradient(grid, &b_psi));
    let a0 = b0.scaled(params.a_scale);
    Ok(InitialData { u0, b0, a0 })
}

fn sample(grid: &GridSpec, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    let n = grid.n();
    let mut out = Vec::with_capacity(grid.len());
    for iy in 0..n {
        for ix in 0..n {
            out.push(f(grid.coord(ix), grid.coord(iy)));
        }
    }
    out
}

fn taylor_green_streams(params: &InitialParams, grid: &GridSpec) -> (Vec<Complex64>, Vec<Complex64>) {
    let k = grid.k0();
    let a = params.amplitude / k;
    let shift = grid.box_length() / 4.0;
    let psi_u = sample(grid, |x, y| a * (k * x).sin() * (k * y).sin());
    let psi_b = sample(grid, |x, y| {
        params.b_scale * a * (k * (x + shift)).sin() * (k * y).sin()
    });
    fft::forward_pair(grid, &psi_u, &psi_b)
}

/// Minimum-image displacement on the periodic box.
fn periodic_offset(d: f64, l: f64) -> f64 {
    d - l * (d / l).round()
}

fn vortex_pair_streams(params: &InitialParams, grid: &GridSpec) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let l = grid.box_length();
    let w = params.width;
    if !(w.is_finite() && w > 0.0) {
        return Err(Error::config("initial_data.width", format!("need a positive width, got {w}")));
    }
    if w >= l / 4.0 {
        return Err(Error::config(
            "initial_data.width",
            format!("width {w} is not localized in a box of length {l} (need width < L/4)"),
        ));
    }
    let sep = params.separation.unwrap_or(2.0 * w);
    if !(sep.is_finite() && sep > 0.0 && sep < l / 2.0) {
        return Err(Error::config(
            "initial_data.separation",
            format!("need 0 < separation < L/2, got {sep}"),
        ));
    }
    let c = l / 2.0;
    let gauss = |x: f64, y: f64, cx: f64, cy: f64| {
        let dx = periodic_offset(x - cx, l);
        let dy = periodic_offset(y - cy, l);
        (-(dx * dx + dy * dy) / (2.0 * w * w)).exp()
    };
    let amp = params.amplitude;
    // u: vortices stacked along y, the pair travels along x
    let omega_u = sample(grid, |x, y| {
        amp * (gauss(x, y, c, c + sep / 2.0) - gauss(x, y, c, c - sep / 2.0))
    });
    // b: same pair rotated by a quarter turn
    let bamp = amp * params.b_scale;
    let omega_b = sample(grid, |x, y| {
        bamp * (gauss(x, y, c + sep / 2.0, c) - gauss(x, y, c - sep / 2.0, c))
    });
    let (wu, wb) = fft::forward_pair(grid, &omega_u, &omega_b);
    Ok((inverse_laplacian(grid, &wu), inverse_laplacian(grid, &wb)))
}

fn random_band_streams(params: &InitialParams, grid: &GridSpec) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let (lo, hi) = params.band;
    if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo <= hi) {
        return Err(Error::config(
            "initial_data.band",
            format!("need 0 < lo <= hi, got ({lo}, {hi})"),
        ));
    }
    let n = grid.n();
    let mut streams = Vec::with_capacity(2);
    for stream in 0..2u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        rng.set_stream(stream);
        let noise: Vec<f64> = (0..grid.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let mut psi = fft::forward_real(grid, &noise);
        for (idx, z) in psi.iter_mut().enumerate() {
            let (mx, my) = (grid.mode_index(idx % n) as f64, grid.mode_index(idx / n) as f64);
            let r = mx.hypot(my);
            if r < lo || r > hi || !grid.is_retained(idx % n, idx / n) {
                *z = Complex64::default();
            }
        }
        streams.push(psi);
    }
    // normalize each field to unit RMS velocity before scaling
    let area = grid.box_length().powi(2);
    let mut scaled = Vec::with_capacity(2);
    for (psi, scale) in streams.into_iter().zip([params.amplitude, params.amplitude * params.b_scale]) {
        let u = perp_gradient(grid, &psi);
        let rms = u.l2_norm() / area.sqrt();
        if rms == 0.0 {
            return Err(Error::config(
                "initial_data.band",
                "band contains no resolved modes",
            ));
        }
        let factor = scale / rms;
        scaled.push(psi.into_iter().map(|z| z * factor).collect::<Vec<_>>());
    }
    let b = scaled.pop().expect("two streams");
    let u = scaled.pop().expect("two streams");
    Ok((u, b))
}

/// Physical vorticity `∂_x f₂ − ∂_y f₁` on the grid.
pub fn vorticity(field: &SpectralVectorField) -> Vec<f64> {
    let omega = crate::spectral::curl(field);
    fft::inverse_real(field.grid(), &omega)
}
