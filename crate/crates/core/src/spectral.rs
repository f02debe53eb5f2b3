//! Fourier multipliers: fractional Laplacian, Leray projection, dealiasing.
//!
//! Nyquist modes (index `n/2` on either axis) are mapped to zero by every
//! multiplier that is not the identity, which keeps `ik` skew and the outputs
//! Hermitian.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::GridSpec;

/// Symbol `|k|^s` of `Λ^s` at one mode, with the Nyquist and `k = 0`
/// conventions applied. `s = 0` is the identity everywhere.
pub fn lambda_symbol(grid: &GridSpec, ix: usize, iy: usize, s: f64) -> f64 {
    if s == 0.0 {
        return 1.0;
    }
    if grid.is_nyquist(ix, iy) {
        return 0.0;
    }
    let k2 = grid.wave_vector(ix, iy).k2;
    if k2 == 0.0 {
        // only reached for s > 0; negative orders are rejected on nonzero means
        return 0.0;
    }
    k2.powf(0.5 * s)
}

/// `Λ^s f`, i.e. every coefficient multiplied by `|k|^s`.
///
/// For `s > 0` the mean is removed; for `s < 0` the mean must already vanish.
pub fn fractional_laplacian_apply(f: &SpectralVectorField, s: f64) -> Result<SpectralVectorField> {
    if !s.is_finite() {
        return Err(Error::domain(format!("order s = {s} is not finite")));
    }
    if s < 0.0 {
        let (m0, m1) = f.mean();
        if m0.norm() != 0.0 || m1.norm() != 0.0 {
            return Err(Error::domain(format!(
                "Λ^{s} is undefined on a field with nonzero mean"
            )));
        }
    }
    let grid = *f.grid();
    let n = grid.n();
    Ok(f.map(|idx, z| z * lambda_symbol(&grid, idx % n, idx / n, s)))
}

/// Leray projection `f̂ ↦ f̂ − k(k·f̂)/|k|²`; the `k = 0` mode is left as is.
pub fn leray_project(f: &SpectralVectorField) -> SpectralVectorField {
    let grid = *f.grid();
    let mut out = f.clone();
    for (idx, ix, iy, k) in grid.modes() {
        let (a, b) = f.at(idx);
        let projected = if k.k2 == 0.0 {
            (a, b)
        } else if grid.is_nyquist(ix, iy) {
            (Complex64::default(), Complex64::default())
        } else {
            let dot = (a * k.kx + b * k.ky) / k.k2;
            (a - dot * k.kx, b - dot * k.ky)
        };
        out.set(idx, projected);
    }
    out
}

/// Two-thirds rule truncation.
pub fn dealias(f: &SpectralVectorField) -> SpectralVectorField {
    let grid = *f.grid();
    let n = grid.n();
    f.map(|idx, z| {
        if grid.is_retained(idx % n, idx / n) {
            z
        } else {
            Complex64::default()
        }
    })
}

/// In-place two-thirds truncation of a scalar spectrum.
pub fn dealias_scalar(grid: &GridSpec, data: &mut [Complex64]) {
    let n = grid.n();
    for (idx, z) in data.iter_mut().enumerate() {
        if !grid.is_retained(idx % n, idx / n) {
            *z = Complex64::default();
        }
    }
}

/// `ik_x f̂` and `ik_y f̂` multipliers of a scalar spectrum, Nyquist zeroed.
pub fn derivative_symbols(grid: &GridSpec, ix: usize, iy: usize) -> (Complex64, Complex64) {
    if grid.is_nyquist(ix, iy) {
        return (Complex64::default(), Complex64::default());
    }
    let k = grid.wave_vector(ix, iy);
    (Complex64::new(0.0, k.kx), Complex64::new(0.0, k.ky))
}

/// Velocity `∇^⊥ψ = (∂_y ψ, −∂_x ψ)` of a stream-function spectrum.
pub fn perp_gradient(grid: &GridSpec, psi: &[Complex64]) -> SpectralVectorField {
    let n = grid.n();
    let mut x = vec![Complex64::default(); grid.len()];
    let mut y = vec![Complex64::default(); grid.len()];
    for (idx, &p) in psi.iter().enumerate() {
        let (dx, dy) = derivative_symbols(grid, idx % n, idx / n);
        x[idx] = dy * p;
        y[idx] = -(dx * p);
    }
    SpectralVectorField::from_components(*grid, x, y).expect("sizes match grid")
}

/// Scalar curl `∂_x f₂ − ∂_y f₁`.
pub fn curl(f: &SpectralVectorField) -> Vec<Complex64> {
    let grid = *f.grid();
    let n = grid.n();
    (0..grid.len())
        .map(|idx| {
            let (dx, dy) = derivative_symbols(&grid, idx % n, idx / n);
            let (a, b) = f.at(idx);
            dx * b - dy * a
        })
        .collect()
}

/// Solve `−Δψ = ω` for a mean-free stream function.
pub fn inverse_laplacian(grid: &GridSpec, omega: &[Complex64]) -> Vec<Complex64> {
    grid.modes()
        .map(|(idx, ix, iy, k)| {
            if k.k2 == 0.0 || grid.is_nyquist(ix, iy) {
                Complex64::default()
            } else {
                omega[idx] / k.k2
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{transform_forward, transform_inverse, RealField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_vector(grid: GridSpec, seed: u64) -> SpectralVectorField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = (0..grid.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let y = (0..grid.len()).map(|_| rng.random::<f64>() - 0.5).collect();
        let f = RealField::vector(grid, x, y).unwrap();
        transform_forward(&f, &grid).unwrap()
    }

    fn mean_free(mut f: SpectralVectorField) -> SpectralVectorField {
        f.clear_mean();
        f
    }

    #[test]
    fn single_mode_scaled_by_k_to_the_s() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let f = RealField::from_fn(g, |x, _| (2.0 * x).cos());
        let spec = transform_forward(&f, &g).unwrap();
        let out = fractional_laplacian_apply(&spec, 1.0).unwrap();
        for idx in 0..g.len() {
            assert!((out.component(0)[idx] - spec.component(0)[idx] * 2.0).norm() < 1e-15);
        }
    }

    #[test]
    fn order_zero_is_identity_and_negative_order_needs_zero_mean() {
        let g = GridSpec::new(16, 3.0).unwrap();
        let f = random_vector(g, 1);
        assert_eq!(fractional_laplacian_apply(&f, 0.0).unwrap(), f);
        assert!(matches!(
            fractional_laplacian_apply(&f, -1.0),
            Err(Error::Domain(_))
        ));
        let z = mean_free(f);
        let up = fractional_laplacian_apply(&z, 1.0).unwrap();
        let back = fractional_laplacian_apply(&up, -1.0).unwrap();
        // Nyquist content is discarded by non-identity multipliers
        let n = g.n();
        let reference = z.map(|idx, c| if g.is_nyquist(idx % n, idx / n) { Complex64::default() } else { c });
        assert!(back.sub(&reference).l2_norm() <= 1e-12 * reference.l2_norm());
    }

    #[test]
    fn fractional_powers_compose() {
        let g = GridSpec::new(16, 4.0).unwrap();
        let f = mean_free(random_vector(g, 2));
        let a = fractional_laplacian_apply(&fractional_laplacian_apply(&f, 0.7).unwrap(), -1.9).unwrap();
        let b = fractional_laplacian_apply(&f, -1.2).unwrap();
        assert!(a.sub(&b).l2_norm() <= 1e-12 * b.l2_norm());
    }

    #[test]
    fn leray_kills_gradients_and_fixes_solenoidal_fields() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        // ∇φ with φ = sin x cos 2y
        let gx = RealField::from_fn(g, |x, y| x.cos() * (2.0 * y).cos());
        let gy = RealField::from_fn(g, |x, y| -2.0 * x.sin() * (2.0 * y).sin());
        let grad = RealField::vector(g, gx.component(0).to_vec(), gy.component(0).to_vec()).unwrap();
        let p = leray_project(&transform_forward(&grad, &g).unwrap());
        assert!(p.max_coefficient() < 1e-15);

        let ux = RealField::from_fn(g, |x, y| x.sin() * y.cos());
        let uy = RealField::from_fn(g, |x, y| -x.cos() * y.sin());
        let u = RealField::vector(g, ux.component(0).to_vec(), uy.component(0).to_vec()).unwrap();
        let uh = transform_forward(&u, &g).unwrap();
        assert!(leray_project(&uh).sub(&uh).max_coefficient() < 1e-16);
    }

    #[test]
    fn leray_output_is_solenoidal_idempotent_and_orthogonal() {
        let g = GridSpec::new(32, 7.0).unwrap();
        let f = random_vector(g, 3);
        let p = leray_project(&f);
        let norm = f.l2_norm();
        assert!(p.divergence_max() <= 1e-12 * f.coefficient_energy().sqrt() * g.k0() * 16.0);
        assert!(leray_project(&p).sub(&p).l2_norm() <= 1e-12 * norm);
        let rest = f.sub(&p);
        assert!(p.inner(&rest).abs() <= 1e-12 * norm * norm);
    }

    #[test]
    fn dealias_keeps_band_and_drops_cutoff() {
        let g = GridSpec::new(24, 2.0 * PI).unwrap();
        let band = RealField::from_fn(g, |x, y| (7.0 * x).cos() + (3.0 * y).sin());
        let spec = transform_forward(&band, &g).unwrap();
        assert!(dealias(&spec).sub(&spec).max_coefficient() < 1e-15);
        let edge = RealField::from_fn(g, |x, _| (8.0 * x).cos());
        let edge = transform_forward(&edge, &g).unwrap();
        assert!(edge.component(0)[8].norm() > 0.5);
        assert!(dealias(&edge).max_coefficient() < 1e-15);
    }

    /// Product of two retained-band fields, dealiased, against the direct
    /// convolution sum restricted to the retained band.
    #[test]
    fn dealiased_product_matches_direct_convolution() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let n = g.n();
        let a = dealias(&random_vector(g, 11));
        let b = dealias(&random_vector(g, 12));
        let (pa, _) = crate::fft::inverse_pair(&g, a.component(0), a.component(1));
        let (pb, _) = crate::fft::inverse_pair(&g, b.component(0), b.component(1));
        let prod: Vec<f64> = pa.iter().zip(&pb).map(|(x, y)| x * y).collect();
        let mut spec = crate::fft::forward_real(&g, &prod);
        dealias_scalar(&g, &mut spec);

        let retained: Vec<(i64, i64, usize)> = g
            .modes()
            .filter(|(_, ix, iy, _)| g.is_retained(*ix, *iy))
            .map(|(idx, ix, iy, _)| (g.mode_index(ix), g.mode_index(iy), idx))
            .collect();
        let mut direct = vec![Complex64::default(); g.len()];
        for &(px, py, pi) in &retained {
            for &(qx, qy, qi) in &retained {
                let (kx, ky) = (px + qx, py + qy);
                if 3 * kx.abs() < n as i64 && 3 * ky.abs() < n as i64 {
                    let k = g.fft_index(ky) * n + g.fft_index(kx);
                    direct[k] += a.component(0)[pi] * b.component(0)[qi];
                }
            }
        }
        let scale = direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (x, y) in spec.iter().zip(&direct) {
            assert!((x - y).norm() <= 1e-12 * scale);
        }
    }

    #[test]
    fn perp_gradient_is_solenoidal_and_curl_inverts() {
        let g = GridSpec::new(16, 5.0).unwrap();
        let psi_phys = RealField::from_fn(g, |x, y| (x * 2.0 * PI / 5.0).sin() * (y * 4.0 * PI / 5.0).cos());
        let psi = crate::fft::forward_real(&g, psi_phys.component(0));
        let u = perp_gradient(&g, &psi);
        assert!(u.divergence_max() < 1e-15);
        // −Δψ = ω with ω = curl u... for u = ∇^⊥ψ, curl u = −Δψ
        let omega = curl(&u);
        let back = inverse_laplacian(&g, &omega);
        for (x, y) in back.iter().zip(&psi) {
            assert!((x - y).norm() < 1e-14);
        }
        let phys = transform_inverse(&u);
        assert!(phys.max_abs() > 0.0);
    }
}
