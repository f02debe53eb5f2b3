//! Time-convolution inequalities
//!
//! ```text
//! (p-1)  ∫₀ᵗ e^{−R(t−τ)} (1+τ)^{−1/ϰ} dτ
//! (p-2)  same integral, t ≥ 1
//! (p-3)  ∫₀ᵗ e^{−R(t−τ)} τ^{−1/ϰ} dτ,  ϰ > 1
//! ```
//!
//! checked against their right-hand shapes by adaptive quadrature.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Inequality {
    P1,
    P2,
    P3,
}

impl Inequality {
    pub const ALL: [Inequality; 3] = [Inequality::P1, Inequality::P2, Inequality::P3];

    pub fn id(self) -> &'static str {
        match self {
            Inequality::P1 => "p-1",
            Inequality::P2 => "p-2",
            Inequality::P3 => "p-3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KappaRegime {
    Below,
    One,
    Above,
}

impl KappaRegime {
    pub fn of(kappa: f64) -> Self {
        if kappa == 1.0 {
            KappaRegime::One
        } else if kappa > 1.0 {
            KappaRegime::Above
        } else {
            KappaRegime::Below
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            KappaRegime::Below => "kappa<1",
            KappaRegime::One => "kappa=1",
            KappaRegime::Above => "kappa>1",
        }
    }
}

fn check_case(ineq: Inequality, r: f64, kappa: f64, t: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("need R > 0, got {r}")));
    }
    if !(kappa > 0.0 && kappa.is_finite()) {
        return Err(Error::domain(format!("need kappa > 0, got {kappa}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("need t > 0, got {t}")));
    }
    match ineq {
        Inequality::P2 if t < 1.0 => Err(Error::domain(format!("p-2 needs t >= 1, got {t}"))),
        Inequality::P3 if kappa <= 1.0 => Err(Error::domain(format!("p-3 needs kappa > 1, got {kappa}"))),
        _ => Ok(()),
    }
}

fn applies(ineq: Inequality, kappa: f64, t: f64) -> bool {
    match ineq {
        Inequality::P1 => true,
        Inequality::P2 => t >= 1.0,
        Inequality::P3 => kappa > 1.0,
    }
}

/// Right-hand side without its constant.
pub fn exp_integral_shape(ineq: Inequality, r: f64, kappa: f64, t: f64) -> Result<f64> {
    check_case(ineq, r, kappa, t)?;
    let a = 1.0 / kappa;
    let decay = (1.0 + t).powf(-a);
    Ok(match (ineq, KappaRegime::of(kappa)) {
        (Inequality::P3, _) => t.powf(-a) / r,
        (_, KappaRegime::One) => (1.0 / r + 1.0 / (r * r)) / (1.0 + t),
        (Inequality::P1, KappaRegime::Above) => decay * (1.0 + 1.0 / r),
        (Inequality::P1, KappaRegime::Below) => decay * (1.0 + r.powf(-a) + 1.0 / r),
        (Inequality::P2, KappaRegime::Above) => decay / r,
        (Inequality::P2, KappaRegime::Below) => decay * (r.powf(-a) + 1.0 / r),
    })
}

/// Left-hand side by adaptive quadrature.
pub fn exp_integral_lhs(ineq: Inequality, r: f64, kappa: f64, t: f64, opts: &QuadratureOptions) -> Result<f64> {
    check_case(ineq, r, kappa, t)?;
    let a = 1.0 / kappa;
    let res = match ineq {
        Inequality::P1 | Inequality::P2 => integrate(|tau| (-r * (t - tau)).exp() * (1.0 + tau).powf(-a), 0.0, t, opts)?,
        Inequality::P3 => {
            // τ = s^{1/(1−a)} removes the τ^{−a} endpoint singularity
            let p = 1.0 / (1.0 - a);
            let s_end = t.powf(1.0 - a);
            let res = integrate(|s| (-r * (t - s.powf(p))).exp(), 0.0, s_end, opts)?;
            crate::quadrature::QuadratureResult { value: p * res.value, ..res }
        }
    };
    if !res.converged {
        return Err(Error::domain(format!("quadrature did not converge for {} (R={r}, kappa={kappa}, t={t})", ineq.id())));
    }
    Ok(res.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpIntegralCase {
    pub inequality: Inequality,
    pub r: f64,
    pub kappa: f64,
    pub t: f64,
    pub lhs: f64,
    pub shape: f64,
    pub ratio: f64,
}

/// `C_emp = max LHS/shape` over one (inequality, ϰ regime) cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpIntegralSummary {
    pub inequality: Inequality,
    pub regime: KappaRegime,
    pub c_emp: f64,
    /// Same maximum with tolerances halved and the panel budget doubled.
    pub c_emp_refined: f64,
    pub n_cases: usize,
}

impl ExpIntegralSummary {
    pub fn relative_change(&self) -> f64 {
        (self.c_emp_refined - self.c_emp).abs() / self.c_emp
    }

    /// Finite and within 1% under refinement.
    pub fn is_stable(&self) -> bool {
        self.c_emp.is_finite() && self.relative_change() <= 0.01
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpIntegralReport {
    pub cases: Vec<ExpIntegralCase>,
    pub summaries: Vec<ExpIntegralSummary>,
}

impl ExpIntegralReport {
    pub fn summary(&self, ineq: Inequality, regime: KappaRegime) -> Option<&ExpIntegralSummary> {
        self.summaries.iter().find(|s| s.inequality == ineq && s.regime == regime)
    }

    /// `case,R,kappa,t,lhs,shape,ratio` rows of one inequality.
    pub fn write_cases_csv<W: Write>(&self, ineq: Inequality, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["case", "R", "kappa", "t", "lhs", "shape", "ratio"])?;
        for c in self.cases.iter().filter(|c| c.inequality == ineq) {
            w.write_record([
                format!("{}/{}", ineq.id(), KappaRegime::of(c.kappa).id()),
                c.r.to_string(),
                c.kappa.to_string(),
                c.t.to_string(),
                c.lhs.to_string(),
                c.shape.to_string(),
                c.ratio.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["case", "params", "C_emp", "C_emp_refined", "rel_change"])?;
        for s in &self.summaries {
            w.write_record([
                s.inequality.id().to_string(),
                format!("{} n={}", s.regime.id(), s.n_cases),
                s.c_emp.to_string(),
                s.c_emp_refined.to_string(),
                s.relative_change().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Every regime-respecting grid point of all three inequalities. Grid values
/// outside the domain (`R ≤ 0`, `ϰ ≤ 0`, `t ≤ 0`) are domain errors; points a
/// given inequality does not cover are skipped.
pub fn verify_expintegral(
    r_grid: &[f64],
    kappa_grid: &[f64],
    t_grid: &[f64],
    opts: &QuadratureOptions,
) -> Result<ExpIntegralReport> {
    if r_grid.is_empty() || kappa_grid.is_empty() || t_grid.is_empty() {
        return Err(Error::domain("empty grid"));
    }
    let refined = opts.refined();
    let mut cases = Vec::new();
    let mut summaries: Vec<ExpIntegralSummary> = Vec::new();
    for ineq in Inequality::ALL {
        for &kappa in kappa_grid {
            for &r in r_grid {
                for &t in t_grid {
                    check_case(Inequality::P1, r, kappa, t)?;
                    if !applies(ineq, kappa, t) {
                        continue;
                    }
                    let lhs = exp_integral_lhs(ineq, r, kappa, t, opts)?;
                    let shape = exp_integral_shape(ineq, r, kappa, t)?;
                    let fine = exp_integral_lhs(ineq, r, kappa, t, &refined)? / shape;
                    let ratio = lhs / shape;
                    cases.push(ExpIntegralCase { inequality: ineq, r, kappa, t, lhs, shape, ratio });
                    let regime = KappaRegime::of(kappa);
                    match summaries.iter_mut().find(|s| s.inequality == ineq && s.regime == regime) {
                        Some(s) => {
                            s.c_emp = s.c_emp.max(ratio);
                            s.c_emp_refined = s.c_emp_refined.max(fine);
                            s.n_cases += 1;
                        }
                        None => summaries.push(ExpIntegralSummary { inequality: ineq, regime, c_emp: ratio, c_emp_refined: fine, n_cases: 1 }),
                    }
                }
            }
        }
    }
    Ok(ExpIntegralReport { cases, summaries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> QuadratureOptions {
        QuadratureOptions::default()
    }

    #[test]
    fn closed_forms() {
        // κ → ∞ leaves ∫₀ᵗ e^{-R(t-τ)} dτ
        let v = exp_integral_lhs(Inequality::P1, 2.0, 1e6, 3.0, &opts()).unwrap();
        let exact = -(-6f64).exp_m1() / 2.0;
        assert!((v - exact).abs() < 1e-5 * exact);
        // p-3 with κ = 2: ∫₀ᵗ τ^{-1/2} dτ as R → 0 is 2√t
        let v = exp_integral_lhs(Inequality::P3, 1e-12, 2.0, 9.0, &opts()).unwrap();
        assert!((v - 6.0).abs() < 1e-9);
    }

    #[test]
    fn p3_matches_direct_series() {
        // ∫₀ᵗ e^{-R(t-τ)} τ^{-1/2} dτ = e^{-Rt} Σ_j R^j t^{j+1/2} / (j! (j+1/2))
        let (r, t) = (1.0f64, 10.0f64);
        let mut term = t.sqrt();
        let mut sum = 0.0;
        for j in 0..200 {
            sum += term / (j as f64 + 0.5);
            term *= r * t / (j as f64 + 1.0);
        }
        let exact = (-r * t).exp() * sum;
        let v = exp_integral_lhs(Inequality::P3, r, 2.0, t, &opts()).unwrap();
        assert!((v - exact).abs() < 1e-10 * exact, "{v} vs {exact}");
        assert!(v / exp_integral_shape(Inequality::P3, r, 2.0, t).unwrap() < 2.0);
    }

    #[test]
    fn regime_violations() {
        assert!(matches!(exp_integral_lhs(Inequality::P3, 1.0, 1.0, 1.0, &opts()), Err(Error::Domain(_))));
        assert!(matches!(exp_integral_lhs(Inequality::P2, 1.0, 2.0, 0.5, &opts()), Err(Error::Domain(_))));
        assert!(matches!(exp_integral_shape(Inequality::P1, 0.0, 2.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(verify_expintegral(&[1.0], &[-1.0], &[1.0], &opts()), Err(Error::Domain(_))));
    }

    #[test]
    fn kappa_one_ratio_is_stable_in_t() {
        let ratios: Vec<f64> = [1.0, 3.0, 10.0, 30.0, 100.0]
            .iter()
            .map(|&t| {
                exp_integral_lhs(Inequality::P1, 0.5, 1.0, t, &opts()).unwrap()
                    / exp_integral_shape(Inequality::P1, 0.5, 1.0, t).unwrap()
            })
            .collect();
        let max = ratios.iter().copied().fold(0.0, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(max / min < 3.0, "{ratios:?}");
    }

    #[test]
    fn large_r_decays_with_bounded_ratio() {
        let mut prev = f64::INFINITY;
        for r in [1e1, 1e2, 1e3, 1e4] {
            let lhs = exp_integral_lhs(Inequality::P1, r, 2.0, 5.0, &opts()).unwrap();
            assert!(lhs < prev);
            prev = lhs;
            assert!(lhs / exp_integral_shape(Inequality::P1, r, 2.0, 5.0).unwrap() < 1.0);
        }
        assert!(prev < 1e-3);
    }

    #[test]
    fn default_grid_is_stable() {
        let g = [0.1, 1.0, 10.0];
        let rep = verify_expintegral(&g, &[0.5, 1.0, 2.0], &[1.0, 10.0, 100.0], &opts()).unwrap();
        assert_eq!(rep.summaries.len(), 7);
        assert_eq!(rep.cases.len(), 27 + 27 + 9);
        for s in &rep.summaries {
            assert!(s.is_stable(), "{s:?}");
        }
        let mut buf = Vec::new();
        rep.write_cases_csv(Inequality::P3, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 10);
    }
}
