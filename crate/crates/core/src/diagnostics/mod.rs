//! Norms and energy functionals along a run.
//!
//! Lᵠ norms use midpoint quadrature on the grid. For band-limited fields this
//! is spectrally accurate for `q = 2`; for other `q` the integrand `|f|ᵠ` is not
//! band-limited and the grid sum carries an aliasing error that shrinks with
//! resolution.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{transform_inverse, RealField, SpectralVectorField};
use crate::spectral::lambda_symbol;

mod inequalities;
mod residual;

pub use inequalities::{
    gagliardo_nirenberg_check, heat_smoothing_check, inequality_spot_checks, GnTuple, HeatTuple,
    SpotCheckReport, SpotCheckRow,
};
pub use residual::{linear_energy_residual, ResidualPoint};

use crate::solver::State;

/// `(Σ|f|ᵠ (L/n)²)^{1/q}` of the pointwise Euclidean magnitude; `q = ∞` gives
/// `max|f|`.
pub fn lq_norm(field: &RealField, q: f64) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::domain(format!("Lq norm needs q >= 1, got {q}")));
    }
    let mag = field.magnitude();
    let peak = mag.iter().copied().fold(0.0, f64::max);
    if q.is_infinite() || peak == 0.0 {
        return Ok(peak);
    }
    // scaled by the peak so large q neither overflows nor underflows
    let sum: f64 = mag.iter().map(|v| (v / peak).powf(q)).sum();
    Ok(peak * (sum * field.grid().cell_area()).powf(1.0 / q))
}

/// `‖Λˢf‖_{L²} = L (Σₖ |k|^{2s} |f̂(k)|²)^{1/2}`.
pub fn sobolev_seminorm(f: &SpectralVectorField, s: f64) -> Result<f64> {
    if !s.is_finite() {
        return Err(Error::domain(format!("order s = {s} is not finite")));
    }
    if s < 0.0 {
        let (m0, m1) = f.mean();
        if m0.norm() != 0.0 || m1.norm() != 0.0 {
            return Err(Error::domain(format!(
                "negative order {s} needs a mean-free field"
            )));
        }
    }
    Ok(weighted_energy(f, s).sqrt() * f.grid().box_length())
}

/// `Σₖ |k|^{2s} |f̂(k)|²`.
fn weighted_energy(f: &SpectralVectorField, s: f64) -> f64 {
    let grid = *f.grid();
    let n = grid.n();
    let (x, y) = (f.component(0), f.component(1));
    (0..grid.len())
        .map(|idx| {
            let w = lambda_symbol(&grid, idx % n, idx / n, s);
            w * w * (x[idx].norm_sqr() + y[idx].norm_sqr())
        })
        .sum()
}

/// `Σₖ |k|^{2s} Re(f̂ ḡ)`.
fn weighted_inner(f: &SpectralVectorField, g: &SpectralVectorField, s: f64) -> f64 {
    let grid = *f.grid();
    let n = grid.n();
    let mut acc = 0.0;
    for c in 0..2 {
        for (idx, (a, b)) in f.component(c).iter().zip(g.component(c)).enumerate() {
            let w = lambda_symbol(&grid, idx % n, idx / n, s);
            acc += w * w * (a.re * b.re + a.im * b.im);
        }
    }
    acc
}

/// `X_m`, `Y_m`, `Z_m` of one state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyFunctionals {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl EnergyFunctionals {
    /// `½(X_m + Y_m)`, whose time derivative equals `−Z_m` for the linear system.
    pub fn balance_energy(&self) -> f64 {
        0.5 * (self.x + self.y)
    }
}

/// ```text
/// X_m = ‖Λᵐu‖² + ‖Λᵐb‖² + 2γ²‖Λᵐ∂ₜb‖² + 2γ‖Λ^{m+1}b‖²
/// Y_m = 2γ⟨Λᵐ∂ₜb, Λᵐb⟩
/// Z_m = ‖Λ^{m+1}u‖² + ‖Λ^{m+1}b‖² + γ‖Λᵐ∂ₜb‖²
/// ```
pub fn energy_functionals(state: &State, m: f64, gamma: f64) -> EnergyFunctionals {
    let area = state.u_hat.grid().box_length().powi(2);
    let u_m = weighted_energy(&state.u_hat, m);
    let b_m = weighted_energy(&state.b_hat, m);
    let bt_m = weighted_energy(&state.bt_hat, m);
    let u_m1 = weighted_energy(&state.u_hat, m + 1.0);
    let b_m1 = weighted_energy(&state.b_hat, m + 1.0);
    let cross = weighted_inner(&state.bt_hat, &state.b_hat, m);
    EnergyFunctionals {
        x: area * (u_m + b_m + 2.0 * gamma * gamma * bt_m + 2.0 * gamma * b_m1),
        y: area * 2.0 * gamma * cross,
        z: area * (u_m1 + b_m1 + gamma * bt_m),
    }
}

/// What a snapshot measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsConfig {
    /// Lᵠ exponents; `inf` is allowed.
    pub q_list: Vec<f64>,
    /// Orders of the homogeneous Sobolev seminorms, measured for both fields.
    pub s_list: Vec<f64>,
    /// Order of the energy functionals.
    pub m: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            q_list: vec![2.0, 4.0, f64::INFINITY],
            s_list: vec![0.0, 1.0, 1.5],
            m: 1.0,
        }
    }
}

impl DiagnosticsConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some((i, q)) = self.q_list.iter().enumerate().find(|(_, q)| q.is_nan() || **q < 1.0) {
            return Err(Error::config(format!("diagnostics.q_list[{i}]"), format!("need q >= 1, got {q}")));
        }
        if let Some((i, s)) = self.s_list.iter().enumerate().find(|(_, s)| !(s.is_finite() && **s >= 0.0)) {
            return Err(Error::config(format!("diagnostics.s_list[{i}]"), format!("need s >= 0, got {s}")));
        }
        if !(self.m.is_finite() && self.m >= 0.0) {
            return Err(Error::config("diagnostics.m", format!("need m >= 0, got {}", self.m)));
        }
        Ok(())
    }

    /// CSV column names, in the order of [`NormSnapshot::values`].
    pub fn header(&self) -> Vec<String> {
        let mut cols = vec!["t".to_string()];
        for field in ["u", "b"] {
            for &q in &self.q_list {
                cols.push(format!("{field}_L{}", label(q)));
            }
        }
        for field in ["u", "b"] {
            for &s in &self.s_list {
                cols.push(format!("{field}_H{}", label(s)));
            }
        }
        let m = label(self.m);
        cols.extend([format!("X_{m}"), format!("Y_{m}"), format!("Z_{m}")]);
        cols
    }

    /// Column index of `u_L2`-style names.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header().iter().position(|c| c == name)
    }
}

/// Shortest label for an order or exponent: `2`, `1.5`, `inf`.
pub fn label(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v}")
    }
}

/// Round-trip float formatting used in every CSV.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormSnapshot {
    pub t: f64,
    /// `(‖u‖_{Lᵠ}, ‖b‖_{Lᵠ})` per configured `q`.
    pub lq: Vec<(f64, f64)>,
    /// `(‖Λˢu‖, ‖Λˢb‖)` per configured `s`.
    pub hdot: Vec<(f64, f64)>,
    pub energy: EnergyFunctionals,
}

impl NormSnapshot {
    pub fn measure(state: &State, config: &DiagnosticsConfig, gamma: f64) -> Result<Self> {
        let u = transform_inverse(&state.u_hat);
        let b = transform_inverse(&state.b_hat);
        let lq = config
            .q_list
            .iter()
            .map(|&q| Ok((lq_norm(&u, q)?, lq_norm(&b, q)?)))
            .collect::<Result<_>>()?;
        let hdot = config
            .s_list
            .iter()
            .map(|&s| Ok((sobolev_seminorm(&state.u_hat, s)?, sobolev_seminorm(&state.b_hat, s)?)))
            .collect::<Result<_>>()?;
        Ok(Self {
            t: state.t,
            lq,
            hdot,
            energy: energy_functionals(state, config.m, gamma),
        })
    }

    /// Row values in header order.
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![self.t];
        v.extend(self.lq.iter().map(|p| p.0));
        v.extend(self.lq.iter().map(|p| p.1));
        v.extend(self.hdot.iter().map(|p| p.0));
        v.extend(self.hdot.iter().map(|p| p.1));
        v.extend([self.energy.x, self.energy.y, self.energy.z]);
        v
    }
}

/// Snapshots with strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySeries {
    pub config: DiagnosticsConfig,
    pub gamma: f64,
    snapshots: Vec<NormSnapshot>,
}

impl EnergySeries {
    pub fn new(config: DiagnosticsConfig, gamma: f64) -> Self {
        Self {
            config,
            gamma,
            snapshots: Vec::new(),
        }
    }

    pub fn push(&mut self, snapshot: NormSnapshot) -> Result<()> {
        if let Some(last) = self.snapshots.last() {
            if !(snapshot.t > last.t) {
                return Err(Error::Data(format!(
                    "snapshot time {} does not follow {}",
                    snapshot.t, last.t
                )));
            }
        }
        self.snapshots.push(snapshot);
        Ok(())
    }

    pub fn snapshots(&self) -> &[NormSnapshot] {
        &self.snapshots
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    /// `(t, value)` pairs of one named column.
    pub fn column(&self, name: &str) -> Option<Vec<(f64, f64)>> {
        let idx = self.config.column(name)?;
        Some(self.snapshots.iter().map(|s| (s.t, s.values()[idx])).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.config.header())?;
        for s in &self.snapshots {
            w.write_record(s.values().into_iter().map(fmt_f64))?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::transform_forward;
    use crate::grid::GridSpec;
    use crate::initial::{make_initial_data, InitialFamily, InitialParams};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn band_state(seed: u64, gamma_scale: f64) -> State {
        let g = GridSpec::new(32, 2.0 * PI).unwrap();
        let params = InitialParams {
            seed,
            a_scale: gamma_scale,
            ..InitialParams::default()
        };
        let data = make_initial_data(InitialFamily::RandomBand, &params, &g).unwrap();
        let mut s = State::from_initial(&data);
        // make ∂ₜb independent of b
        let other = make_initial_data(InitialFamily::RandomBand, &InitialParams { seed: seed + 1000, ..params }, &g).unwrap();
        s.bt_hat = other.u0.scaled(gamma_scale);
        s
    }

    #[test]
    fn lq_examples() {
        let g = GridSpec::new(64, 2.0 * PI).unwrap();
        let f = RealField::from_fn(g, |x, _| x.sin());
        assert!((lq_norm(&f, 2.0).unwrap() - PI * 2f64.sqrt()).abs() < 1e-12);
        assert!((lq_norm(&f, 4.0).unwrap() - (1.5 * PI * PI).powf(0.25)).abs() < 1e-12);
        let c = RealField::from_fn(g, |_, _| -3.0);
        for q in [1.0, 2.0, 3.5, 7.0] {
            assert!((lq_norm(&c, q).unwrap() - 3.0 * (2.0 * PI).powf(2.0 / q)).abs() < 1e-11);
        }
        assert_eq!(lq_norm(&c, f64::INFINITY).unwrap(), 3.0);
        assert!(matches!(lq_norm(&c, 0.5), Err(Error::Domain(_))));
    }

    #[test]
    fn lq_quadrature_converges_under_refinement() {
        // |sin x sin y|³ is not band-limited; the grid sum converges as n grows
        let exact = (64.0 / 9.0f64).powf(1.0 / 3.0);
        let err = |n: usize| {
            let g = GridSpec::new(n, 2.0 * PI).unwrap();
            let f = RealField::from_fn(g, |x, y| x.sin() * y.sin());
            (lq_norm(&f, 3.0).unwrap() - exact).abs()
        };
        assert!(err(16) < 1e-2);
        assert!(err(64) < err(16) / 10.0);
    }

    #[test]
    fn seminorm_examples() {
        let g = GridSpec::new(32, 2.0 * PI).unwrap();
        let f = RealField::from_fn(g, |x, _| 0.7 * (2.0 * x).cos());
        let spec = transform_forward(&f, &g).unwrap();
        let l2 = lq_norm(&f, 2.0).unwrap();
        assert!((sobolev_seminorm(&spec, 0.0).unwrap() - l2).abs() < 1e-12 * l2);
        assert!((sobolev_seminorm(&spec, 1.5).unwrap() - 2f64.powf(1.5) * l2).abs() < 1e-12 * l2);
        let c = transform_forward(&RealField::from_fn(g, |_, _| 1.0), &g).unwrap();
        assert!(matches!(sobolev_seminorm(&c, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn seminorm_matches_physical_space_oracle() {
        let s = band_state(3, 1.0);
        for order in [0.5, 1.0, 2.3] {
            let direct = sobolev_seminorm(&s.u_hat, order).unwrap();
            let lifted = crate::spectral::fractional_laplacian_apply(&s.u_hat, order).unwrap();
            let phys = lq_norm(&transform_inverse(&lifted), 2.0).unwrap();
            assert!((direct - phys).abs() < 1e-10 * direct);
        }
    }

    #[test]
    fn energy_of_zero_and_single_mode() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let zero = State::zeros(g);
        assert_eq!(energy_functionals(&zero, 1.0, 2.0), EnergyFunctionals::default());

        // b = (0, A cos x): |k| = 1 so every Λ power is the identity
        let a = 0.3;
        let b = RealField::vector(g, vec![0.0; g.len()], RealField::from_fn(g, |x, _| a * x.cos()).component(0).to_vec()).unwrap();
        let mut s = State::zeros(g);
        s.b_hat = transform_forward(&b, &g).unwrap();
        let parseval = lq_norm(&b, 2.0).unwrap().powi(2);
        let e = energy_functionals(&s, 1.0, 2.0);
        assert!((e.x - parseval * (1.0 + 2.0 * 2.0)).abs() < 1e-12 * e.x);
        assert_eq!(e.y, 0.0);
    }

    #[test]
    fn snapshot_l2_agrees_with_h0_and_csv_header() {
        let s = band_state(4, 0.5);
        let cfg = DiagnosticsConfig::default();
        let snap = NormSnapshot::measure(&s, &cfg, 1.0).unwrap();
        let (lu, lb) = snap.lq[0];
        let (hu, hb) = snap.hdot[0];
        assert!((lu - hu).abs() < 1e-10 * lu && (lb - hb).abs() < 1e-10 * lb);
        let mut series = EnergySeries::new(cfg.clone(), 1.0);
        series.push(snap.clone()).unwrap();
        assert!(series.push(snap).is_err());
        let mut buf = Vec::new();
        series.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "t,u_L2,u_L4,u_Linf,b_L2,b_L4,b_Linf,u_H0,u_H1,u_H1.5,b_H0,b_H1,b_H1.5,X_1,Y_1,Z_1"
        );
        assert_eq!(series.column("u_L2").unwrap()[0].1, lu);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn y_bound_and_interpolation(seed in 0u64..10_000, scale in 0.05f64..3.0, m in 0.0f64..2.0, gamma in 0.05f64..4.0) {
            let s = band_state(seed, scale);
            let e = energy_functionals(&s, m, gamma);
            let bm = sobolev_seminorm(&s.b_hat, m).unwrap().powi(2);
            let btm = sobolev_seminorm(&s.bt_hat, m).unwrap().powi(2);
            prop_assert!(e.x >= 0.0 && e.z >= 0.0);
            prop_assert!(e.y.abs() <= 2.0 / 3.0 * bm + 1.5 * gamma * gamma * btm + 1e-12 * (bm + btm));

            let (s1, s2) = (m, m + 1.3);
            let mid = 0.4 * s1 + 0.6 * s2;
            let theta = (s2 - mid) / (s2 - s1);
            let lhs = sobolev_seminorm(&s.u_hat, mid).unwrap();
            let rhs = sobolev_seminorm(&s.u_hat, s1).unwrap().powf(theta) * sobolev_seminorm(&s.u_hat, s2).unwrap().powf(1.0 - theta);
            prop_assert!(lhs <= rhs * (1.0 + 1e-12));
        }

        #[test]
        fn norms_are_homogeneous(seed in 0u64..10_000, alpha in -5.0f64..5.0) {
            let s = band_state(seed, 1.0);
            let u = transform_inverse(&s.u_hat);
            let ua = transform_inverse(&s.u_hat.scaled(alpha));
            for q in [1.0, 2.0, 3.0, f64::INFINITY] {
                let (a, b) = (lq_norm(&ua, q).unwrap(), alpha.abs() * lq_norm(&u, q).unwrap());
                prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
            }
            let (a, b) = (sobolev_seminorm(&s.u_hat.scaled(alpha), 1.5).unwrap(), alpha.abs() * sobolev_seminorm(&s.u_hat, 1.5).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
        }
    }
}
