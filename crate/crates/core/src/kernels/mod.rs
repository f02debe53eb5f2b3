//! Damped-wave symbols for the magnetic equation.
//!
//! A Fourier mode of `γ∂ₜₜb + ∂ₜb + |k|²b = f` has characteristic roots
//! `λ± = (−1 ± √D)/(2γ)` with discriminant `D = 1 − 4γ|k|²`, and its solution
//! operator is built from
//!
//! ```text
//! K̂₀(t) = ½(e^{λ₊t} + e^{λ₋t}),   K̂₁(t) = (e^{λ₊t} − e^{λ₋t}) / (γ(λ₊ − λ₋)).
//! ```
//!
//! Writing `μ = −1/(2γ)`, `δ² = D/(4γ²)` and `z = δ²t²`, both symbols are real:
//! `K̂₀ = e^{μt} C(z)`, `K̂₁ = e^{μt} t S(z)/γ` with `C(z) = Σ zʲ/(2j)!` and
//! `S(z) = Σ zʲ/(2j+1)!` (`cosh`/`sinh` for `z > 0`, `cos`/`sin` for `z < 0`).
//! Evaluation uses those power series whenever `|z| ≤ 1`, which covers the
//! double root `D = 0` and its neighbourhood without cancellation, and the
//! closed hyperbolic or trigonometric forms otherwise.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod bounds;
pub mod checks;

/// Largest `|z|` handled by the power series.
const SERIES_RADIUS: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    gamma: f64,
}

impl KernelParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Self { gamma })
        } else {
            Err(Error::domain(format!(
                "kernel parameter gamma must be positive and finite, got {gamma}"
            )))
        }
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    pub lambda_plus: Complex64,
    pub lambda_minus: Complex64,
    pub discriminant: f64,
}

/// Roots of `γλ² + λ + k² = 0`; `Im λ₊ ≥ 0` in the oscillatory regime.
pub fn lambda_pm(gamma: f64, k2: f64) -> EigenPair {
    let d = 1.0 - 4.0 * gamma * k2;
    let mu = -0.5 / gamma;
    let (lambda_plus, lambda_minus) = if d > 0.0 {
        let sd = d.sqrt();
        // λ₊ = (−1 + √D)/(2γ) rewritten to avoid cancellation as k → 0
        (
            Complex64::new(-2.0 * k2 / (1.0 + sd), 0.0),
            Complex64::new((-1.0 - sd) / (2.0 * gamma), 0.0),
        )
    } else if d == 0.0 {
        (Complex64::new(mu, 0.0), Complex64::new(mu, 0.0))
    } else {
        let omega = (-d).sqrt() / (2.0 * gamma);
        (Complex64::new(mu, omega), Complex64::new(mu, -omega))
    };
    EigenPair {
        lambda_plus,
        lambda_minus,
        discriminant: d,
    }
}

/// `(C(z), S(z))` summed to round-off; valid for `|z| ≤ SERIES_RADIUS`.
fn even_odd_series(z: f64) -> (f64, f64) {
    let mut c = 1.0;
    let mut s = 1.0;
    let mut tc = 1.0;
    let mut ts = 1.0;
    for j in 1..30 {
        let j = j as f64;
        tc *= z / ((2.0 * j - 1.0) * (2.0 * j));
        ts *= z / ((2.0 * j) * (2.0 * j + 1.0));
        c += tc;
        s += ts;
        if tc.abs() < 1e-18 * c.abs() && ts.abs() < 1e-18 * s.abs() {
            break;
        }
    }
    (c, s)
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("kernel time must be finite and >= 0, got {t}")))
    }
}

/// `(K̂₀(t), K̂₁(t))` without argument checks.
pub(crate) fn kernel_pair(gamma: f64, k2: f64, t: f64) -> (f64, f64) {
    if t == 0.0 {
        return (1.0, 0.0);
    }
    let d = 1.0 - 4.0 * gamma * k2;
    let mu = -0.5 / gamma;
    let delta2 = d / (4.0 * gamma * gamma);
    let z = delta2 * t * t;
    if z.abs() <= SERIES_RADIUS {
        let (c, s) = even_odd_series(z);
        let decay = (mu * t).exp();
        (decay * c, decay * t * s / gamma)
    } else if d > 0.0 {
        let sd = d.sqrt();
        let lp = -2.0 * k2 / (1.0 + sd);
        let lm = (-1.0 - sd) / (2.0 * gamma);
        let ep = (lp * t).exp();
        let em = (lm * t).exp();
        // here δt > 1, so e^{λ₋t} ≤ e^{−2}e^{λ₊t} and the difference is benign
        (0.5 * (ep + em), (ep - em) / sd)
    } else {
        let omega = (-d).sqrt() / (2.0 * gamma);
        let decay = (mu * t).exp();
        let (sin, cos) = (omega * t).sin_cos();
        (decay * cos, decay * sin / (gamma * omega))
    }
}

pub fn k0_hat(gamma: f64, k2: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(kernel_pair(gamma, k2, t).0)
}

pub fn k1_hat(gamma: f64, k2: f64, t: f64) -> Result<f64> {
    check_time(t)?;
    Ok(kernel_pair(gamma, k2, t).1)
}

/// Matrix advancing `(b̂, ∂ₜb̂)` of one mode over a step `dt`:
///
/// ```text
/// [ K̂₀ + ½K̂₁    γK̂₁       ]
/// [ −k²K̂₁       K̂₀ − ½K̂₁  ]
/// ```
///
/// The second row is the time derivative of the first; its entries follow from
/// `M′ = AM` with `A = [[0, 1], [−k²/γ, −1/γ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePropagator {
    pub m00: f64,
    pub m01: f64,
    pub m10: f64,
    pub m11: f64,
}

impl ModePropagator {
    pub const IDENTITY: Self = Self {
        m00: 1.0,
        m01: 0.0,
        m10: 0.0,
        m11: 1.0,
    };

    pub fn det(&self) -> f64 {
        self.m00 * self.m11 - self.m01 * self.m10
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            m00: self.m00 * other.m00 + self.m01 * other.m10,
            m01: self.m00 * other.m01 + self.m01 * other.m11,
            m10: self.m10 * other.m00 + self.m11 * other.m10,
            m11: self.m10 * other.m01 + self.m11 * other.m11,
        }
    }

    pub fn apply<T>(&self, b: T, bt: T) -> (T, T)
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        (b * self.m00 + bt * self.m01, b * self.m10 + bt * self.m11)
    }
}

pub fn mode_propagator(gamma: f64, k2: f64, dt: f64) -> ModePropagator {
    let (k0, k1) = kernel_pair(gamma, k2, dt);
    ModePropagator {
        m00: k0 + 0.5 * k1,
        m01: gamma * k1,
        m10: -k2 * k1,
        m11: k0 - 0.5 * k1,
    }
}

/// `J_n(x) = ∫₀¹ uⁿ e^{xu} du` for `n = 0..=nmax`, `x ≤ 0`.
///
/// Forward recurrence `J_n = (eˣ − nJ_{n−1})/x` is stable while `n < |x|`;
/// otherwise the table is filled by the backward recurrence from well above
/// `nmax`, whose start-up error is damped by `∏ |x|/k`.
fn moment_table(x: f64, nmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        for (n, v) in out.iter_mut().enumerate() {
            *v = 1.0 / (n as f64 + 1.0);
        }
        return out;
    }
    let ex = x.exp();
    if -x > nmax as f64 + 1.0 {
        out[0] = x.exp_m1() / x;
        for n in 1..=nmax {
            out[n] = (ex - n as f64 * out[n - 1]) / x;
        }
    } else {
        let top = nmax + 120;
        let mut j = ex / (top as f64 + 1.0);
        for k in (1..=top).rev() {
            let prev = (ex - x * j) / k as f64;
            if k - 1 <= nmax {
                out[k - 1] = prev;
            }
            j = prev;
        }
    }
    out
}

/// Exponential-Euler weight `∫₀^{dt} K̂₁(s) ds`.
///
/// Closed form `((e^{λ₊dt} − 1)/λ₊ − (e^{λ₋dt} − 1)/λ₋)/(γ(λ₊ − λ₋))`, with
/// `dt − γ(1 − e^{−dt/γ})` at `k = 0`. Near the double root (`|z| ≤ 1`) the
/// sinh-series of `K̂₁` is integrated term by term against `e^{μs}`:
/// `W = (dt²/γ) Σⱼ zʲ J_{2j+1}(μ dt)/(2j+1)!`.
pub fn duhamel_k1_weight(gamma: f64, k2: f64, dt: f64) -> f64 {
    if dt == 0.0 {
        return 0.0;
    }
    let d = 1.0 - 4.0 * gamma * k2;
    let mu = -0.5 / gamma;
    let z = d / (4.0 * gamma * gamma) * dt * dt;
    if z.abs() <= SERIES_RADIUS {
        const TERMS: usize = 20;
        let moments = moment_table(mu * dt, 2 * TERMS + 1);
        let mut sum = 0.0;
        let mut zj = 1.0;
        let mut fact = 1.0; // (2j+1)!
        for j in 0..TERMS {
            if j > 0 {
                zj *= z;
                fact *= (2 * j) as f64 * (2 * j + 1) as f64;
            }
            let term = zj * moments[2 * j + 1] / fact;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        dt * dt * sum / gamma
    } else if d > 0.0 {
        let sd = d.sqrt();
        let lp = -2.0 * k2 / (1.0 + sd);
        let lm = (-1.0 - sd) / (2.0 * gamma);
        let phi = |l: f64| if l == 0.0 { dt } else { (l * dt).exp_m1() / l };
        (phi(lp) - phi(lm)) / sd
    } else {
        let omega = (-d).sqrt() / (2.0 * gamma);
        let decay = (mu * dt).exp();
        let (sin, cos) = (omega * dt).sin_cos();
        let a = decay * cos - 1.0;
        let b = decay * sin;
        (b * mu - a * omega) / (omega * k2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyRegion {
    /// `4γ|k|² ≥ 3/4`: damping dominated.
    S1,
    /// `4γ|k|² < 3/4`: diffusion dominated.
    S2,
}

pub fn frequency_region(gamma: f64, k2: f64) -> FrequencyRegion {
    if 4.0 * gamma * k2 >= 0.75 {
        FrequencyRegion::S1
    } else {
        FrequencyRegion::S2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn eigenvalues_at_double_root_and_zero_mode() {
        let e = lambda_pm(0.25, 1.0);
        assert_eq!(e.discriminant, 0.0);
        assert_eq!(e.lambda_plus, Complex64::new(-2.0, 0.0));
        assert_eq!(e.lambda_minus, Complex64::new(-2.0, 0.0));
        let e = lambda_pm(0.5, 0.0);
        assert_eq!(e.lambda_plus.re, 0.0);
        assert_eq!(e.lambda_minus.re, -2.0);
    }

    #[test]
    fn oscillatory_eigenvalues() {
        let e = lambda_pm(1.0, 1.0);
        let w = 3f64.sqrt() / 2.0;
        assert!((e.lambda_plus - Complex64::new(-0.5, w)).norm() < 1e-15);
        assert!((e.lambda_minus - Complex64::new(-0.5, -w)).norm() < 1e-15);
    }

    #[test]
    fn eigenvalue_sum_and_product() {
        for &(g, k2) in &[(0.1, 0.3), (0.7, 0.01), (2.0, 5.0), (1e-3, 1.0), (0.25, 1.0 + 1e-9)] {
            let e = lambda_pm(g, k2);
            let sum = e.lambda_plus + e.lambda_minus;
            let prod = e.lambda_plus * e.lambda_minus;
            assert!(rel(sum.re, -1.0 / g) < 1e-12 && sum.im.abs() < 1e-12 / g);
            assert!(rel(prod.re, k2 / g) < 1e-12);
            if e.discriminant > 0.0 {
                assert!(e.lambda_plus.re > e.lambda_minus.re);
            }
        }
    }

    #[test]
    fn kernels_at_time_zero_and_negative_time() {
        assert_eq!(k0_hat(0.3, 2.0, 0.0).unwrap(), 1.0);
        assert_eq!(k1_hat(0.3, 2.0, 0.0).unwrap(), 0.0);
        assert!(k0_hat(0.3, 2.0, -1.0).is_err());
    }

    #[test]
    fn k1_initial_slope_is_inverse_gamma() {
        for &(g, k2) in &[(0.5, 1.0), (2.0, 0.01), (0.25, 1.0), (1.0, 30.0)] {
            let h = 1e-6;
            let slope = k1_hat(g, k2, h).unwrap() / h;
            assert!(rel(slope, 1.0 / g) < 1e-4);
        }
    }

    #[test]
    fn kernels_match_trigonometric_values() {
        let w = 3f64.sqrt() / 2.0;
        let k0 = (-0.5f64).exp() * w.cos();
        let k1 = (-0.5f64).exp() * w.sin() / w;
        assert!(rel(k0_hat(1.0, 1.0, 1.0).unwrap(), k0) < 1e-14);
        assert!(rel(k1_hat(1.0, 1.0, 1.0).unwrap(), k1) < 1e-14);
    }

    #[test]
    fn zero_mode_kernels() {
        // k = 0: λ₊ = 0, λ₋ = −1/γ
        for &t in &[0.1, 1.0, 7.0, 300.0] {
            let g = 0.6;
            let (k0, k1) = kernel_pair(g, 0.0, t);
            assert!(rel(k0, 0.5 * (1.0 + (-t / g).exp())) < 1e-14);
            assert!(rel(k1, -(-t / g).exp_m1()) < 1e-14);
        }
    }

    #[test]
    fn large_times_do_not_overflow() {
        let (k0, k1) = kernel_pair(0.5, 1e-4, 2000.0);
        assert!(k0.is_finite() && k1.is_finite());
        assert!(k0 > 0.0 && k1 > 0.0);
        let (k0, k1) = kernel_pair(1e-4, 3.0, 100.0);
        assert!(k0.is_finite() && k1.is_finite());
    }

    #[test]
    fn propagator_identity_and_first_row() {
        assert_eq!(mode_propagator(0.5, 2.0, 0.0), ModePropagator::IDENTITY);
        let m = mode_propagator(0.5, 2.0, 0.3);
        let k0 = k0_hat(0.5, 2.0, 0.3).unwrap();
        let k1 = k1_hat(0.5, 2.0, 0.3).unwrap();
        assert!(rel(m.m00, k0 + 0.5 * k1) < 1e-12);
        assert!(rel(m.m01, 0.5 * k1) < 1e-12);
    }

    #[test]
    fn propagator_semigroup_example() {
        let (g, k2) = (0.7, 3.0);
        let lhs = mode_propagator(g, k2, 0.1).compose(&mode_propagator(g, k2, 0.2));
        let rhs = mode_propagator(g, k2, 0.3);
        for (a, b) in [(lhs.m00, rhs.m00), (lhs.m01, rhs.m01), (lhs.m10, rhs.m10), (lhs.m11, rhs.m11)] {
            assert!(rel(a, b) < 1e-10);
        }
    }

    #[test]
    fn duhamel_weight_small_step_and_zero_mode() {
        // K̂₁(s) = s/γ − s²/(2γ²) + O(s³): the leading term dt²/(2γ) is off by
        // dt/(3γ) in relative terms, the two-term expansion by O(dt²)
        let (g, dt) = (1.0, 1e-4);
        let w = duhamel_k1_weight(g, 0.7, dt);
        let leading = dt * dt / (2.0 * g);
        assert!(rel(w, leading) < 1e-4);
        assert!(rel(w, leading - dt.powi(3) / (6.0 * g * g)) < 1e-6);
        let w = duhamel_k1_weight(2.0, 0.0, 1.0);
        assert!(rel(w, 1.0 - 2.0 * (1.0 - (-0.5f64).exp())) < 1e-14);
        assert_eq!(duhamel_k1_weight(1.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn duhamel_weight_is_continuous_across_branches() {
        // straddle |z| = 1 and D = 0 from both sides
        let g = 0.5;
        for &dt in &[0.01, 0.5, 3.0] {
            let k2_edge = 0.25 / g;
            for eps in [1e-12, 1e-9, 1e-6, 1e-3] {
                let a = duhamel_k1_weight(g, k2_edge * (1.0 - eps), dt);
                let b = duhamel_k1_weight(g, k2_edge * (1.0 + eps), dt);
                assert!(rel(a, b) < 10.0 * eps + 1e-13, "dt {dt} eps {eps}: {a} {b}");
            }
        }
    }

    #[test]
    fn moment_table_matches_direct_formulas() {
        // J_n(x) = Σ_k x^k / (k! (n + k + 1)), fine for moderate |x|
        let series = |n: usize, x: f64| {
            let mut sum = 0.0;
            let mut term = 1.0;
            for k in 0..200 {
                if k > 0 {
                    term *= x / k as f64;
                }
                sum += term / (n + k + 1) as f64;
            }
            sum
        };
        for &x in &[-1e-3, -0.5, -3.0] {
            let t = moment_table(x, 41);
            for n in [0, 1, 5, 17, 41] {
                assert!(rel(t[n], series(n, x)) < 1e-12, "x {x} n {n}");
            }
        }
        // composite Simpson where the series cancels
        let simpson = |n: usize, x: f64| {
            let m = 20_000;
            let h = 1.0 / m as f64;
            let f = |u: f64| u.powi(n as i32) * (x * u).exp();
            let mut acc = f(0.0) + f(1.0);
            for i in 1..m {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * h);
            }
            acc * h / 3.0
        };
        for &x in &[-8.0, -30.0] {
            let t = moment_table(x, 41);
            for n in [0, 1, 5, 17, 41] {
                assert!(rel(t[n], simpson(n, x)) < 1e-10, "x {x} n {n}");
            }
        }
        // large |x|: J_1 = (e^x (x − 1) + 1)/x² has no cancellation
        for &x in &[-25.0, -80.0, -400.0] {
            let t = moment_table(x, 41);
            let j1 = (x.exp() * (x - 1.0) + 1.0) / (x * x);
            assert!(rel(t[1], j1) < 1e-13, "x {x}");
        }
    }

    #[test]
    fn duhamel_weight_matches_adaptive_quadrature() {
        use crate::quadrature::{integrate, QuadratureOptions};
        for &(g, k2, dt) in &[(1.0, 4.0, 0.5), (0.3, 0.2, 2.0), (2.0, 0.125, 1.5), (0.05, 30.0, 0.7)] {
            let w = duhamel_k1_weight(g, k2, dt);
            let q = integrate(|s| kernel_pair(g, k2, s).1, 0.0, dt, &QuadratureOptions::default()).unwrap();
            assert!((w - q.value).abs() < 1e-9, "{g} {k2} {dt}: {w} vs {}", q.value);
        }
    }

    #[test]
    fn frequency_regions() {
        assert_eq!(frequency_region(0.25, 0.75), FrequencyRegion::S1);
        assert_eq!(frequency_region(0.3, 0.0), FrequencyRegion::S2);
        assert_eq!(frequency_region(1.0, 1.0), FrequencyRegion::S1);
        assert_eq!(frequency_region(1.0, 0.18), FrequencyRegion::S2);
    }

    #[test]
    fn kernel_params_reject_nonpositive_gamma() {
        assert!(KernelParams::new(0.0).is_err());
        assert!(KernelParams::new(-1.0).is_err());
        assert_eq!(KernelParams::new(0.5).unwrap().gamma(), 0.5);
    }
}
