use num_complex::Complex64;

use super::State;
use crate::error::{Error, Result};
use crate::fft;
use crate::field::SpectralVectorField;
use crate::spectral::{dealias, derivative_symbols, leray_project, perp_gradient};

pub(crate) struct Nonlinear {
    pub n_u: SpectralVectorField,
    pub n_b: SpectralVectorField,
    /// `max|u| + max|b|` over the grid points.
    pub speed: f64,
}

fn max_magnitude(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a.hypot(*b)).fold(0.0, f64::max)
}

/// Physical-space speed bound used by the CFL check.
pub(crate) fn speed(u_hat: &SpectralVectorField, b_hat: &SpectralVectorField) -> f64 {
    let grid = u_hat.grid();
    let (u1, u2) = fft::inverse_pair(grid, u_hat.component(0), u_hat.component(1));
    let (b1, b2) = fft::inverse_pair(grid, b_hat.component(0), b_hat.component(1));
    max_magnitude(&u1, &u2) + max_magnitude(&b1, &b2)
}

/// Both quadratic terms in divergence form:
/// `N_u = ℙ∇·(b⊗b − u⊗u)` and `N_b = ∇^⊥(u₁b₂ − u₂b₁)`.
pub(crate) fn evaluate(u_hat: &SpectralVectorField, b_hat: &SpectralVectorField, t: f64) -> Result<Nonlinear> {
    let grid = *u_hat.grid();
    let n = grid.n();
    let (u1, u2) = fft::inverse_pair(&grid, u_hat.component(0), u_hat.component(1));
    let (b1, b2) = fft::inverse_pair(&grid, b_hat.component(0), b_hat.component(1));

    let len = grid.len();
    let mut t11 = Vec::with_capacity(len);
    let mut t12 = Vec::with_capacity(len);
    let mut t22 = Vec::with_capacity(len);
    let mut a = Vec::with_capacity(len);
    for i in 0..len {
        t11.push(b1[i] * b1[i] - u1[i] * u1[i]);
        t12.push(b1[i] * b2[i] - u1[i] * u2[i]);
        t22.push(b2[i] * b2[i] - u2[i] * u2[i]);
        a.push(u1[i] * b2[i] - u2[i] * b1[i]);
    }
    if t11.iter().chain(&t12).chain(&t22).chain(&a).any(|v| !v.is_finite()) {
        return Err(Error::BlowUp {
            t,
            message: "non-finite values in the quadratic products".into(),
        });
    }
    let speed = max_magnitude(&u1, &u2) + max_magnitude(&b1, &b2);

    let (f11, f12) = fft::forward_pair(&grid, &t11, &t12);
    let (f22, mut fa) = fft::forward_pair(&grid, &t22, &a);
    let mut nx = vec![Complex64::default(); len];
    let mut ny = vec![Complex64::default(); len];
    for idx in 0..len {
        let (dx, dy) = derivative_symbols(&grid, idx % n, idx / n);
        nx[idx] = dx * f11[idx] + dy * f12[idx];
        ny[idx] = dx * f12[idx] + dy * f22[idx];
    }
    let mut n_u = dealias(&leray_project(&SpectralVectorField::from_components(grid, nx, ny)?));
    fa[0] = Complex64::default();
    let mut n_b = dealias(&perp_gradient(&grid, &fa));
    n_u.clear_mean();
    n_b.clear_mean();
    Ok(Nonlinear { n_u, n_b, speed })
}

/// `(N_u, N_b) = (ℙ(b·∇b − u·∇u), b·∇u − u·∇b)`, dealiased and mean-free.
pub fn compute_nonlinear(state: &State) -> Result<(SpectralVectorField, SpectralVectorField)> {
    let nl = evaluate(&state.u_hat, &state.b_hat, state.t)?;
    Ok((nl.n_u, nl.n_b))
}
