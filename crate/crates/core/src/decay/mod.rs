//! Decay experiments: predicted rates, power-law fits, γ sweeps, the
//! singular limit γ → 0 and quadrature checks of the time-convolution bounds.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};

mod experiment;
mod expintegral;
mod singular;

pub use experiment::{
    default_window, gamma_prefactor_scan, run_decay_experiment, write_fit_rows, DecayExperiment, DecayReport, FitRow, SweepEntry,
    SweepResult, TrackedNorm,
};
pub use expintegral::{
    exp_integral_lhs, exp_integral_shape, verify_expintegral, ExpIntegralCase, ExpIntegralReport, ExpIntegralSummary,
    Inequality, KappaRegime,
};
pub use singular::{singular_limit_experiment, SingularLimitReport, SingularLimitRow};

pub type Rational = Ratio<i64>;

/// `q` of an Lᵠ rate; `∞` is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QExponent {
    Finite(Rational),
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateKind {
    /// `t^{1/q − 1/2}`.
    Lq(QExponent),
    /// `(1+t)^{(1−β)/2 − 1/c}` for `‖Λ^β u‖ + ‖Λ^β b‖`.
    Hbeta { beta: Rational, c: Rational },
    /// Same exponent for `‖Λ^ϱ b‖` alone, `0 ≤ ϱ < m + 1`.
    HrhoB { rho: Rational, c: Rational },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TheoryRate {
    pub kind: RateKind,
    pub exponent: Rational,
    /// Power of `γ` in the prefactor.
    pub prefactor_gamma_power: Rational,
}

impl TheoryRate {
    pub fn exponent_f64(&self) -> f64 {
        to_f64(self.exponent)
    }

    pub fn prefactor_gamma_power_f64(&self) -> f64 {
        to_f64(self.prefactor_gamma_power)
    }

    /// Short identifier such as `Lq(4)` or `Hbeta(1/2,1)`.
    pub fn id(&self) -> String {
        match self.kind {
            RateKind::Lq(QExponent::Finite(q)) => format!("Lq({q})"),
            RateKind::Lq(QExponent::Infinity) => "Lq(inf)".into(),
            RateKind::Hbeta { beta, c } => format!("Hbeta({beta},{c})"),
            RateKind::HrhoB { rho, c } => format!("Hrho_b({rho},{c})"),
        }
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Nearest rational with a small denominator, for configuration values.
pub fn rational(v: f64) -> Result<Rational> {
    Ratio::approximate_float(v).ok_or_else(|| Error::domain(format!("{v} has no rational approximation")))
}

/// Predicted exponent for data of regularity order `m`; exact on rational input.
pub fn predicted_exponent(kind: RateKind, m: Rational) -> Result<TheoryRate> {
    let zero = Rational::from_integer(0);
    let one = Rational::from_integer(1);
    let two = Rational::from_integer(2);
    let half = Rational::new(1, 2);
    let check_c = |c: Rational| {
        if c < one || c >= two {
            Err(Error::domain(format!("need 1 <= c < 2, got {c}")))
        } else {
            Ok(())
        }
    };
    let h_rate = |order: Rational, c: Rational| ((one - order) / two - one / c, one + one / c - (one - order) / two);
    let (exponent, power) = match kind {
        RateKind::Lq(QExponent::Infinity) => (-half, one),
        RateKind::Lq(QExponent::Finite(q)) => {
            if q < two {
                return Err(Error::domain(format!("Lq rate needs q >= 2, got {q}")));
            }
            (one / q - half, one)
        }
        RateKind::Hbeta { beta, c } => {
            check_c(c)?;
            if beta < zero || beta > m {
                return Err(Error::domain(format!("need 0 <= beta <= m = {m}, got {beta}")));
            }
            h_rate(beta, c)
        }
        RateKind::HrhoB { rho, c } => {
            check_c(c)?;
            if rho < zero || rho >= m + one {
                return Err(Error::domain(format!("need 0 <= rho < m + 1 = {}, got {rho}", m + one)));
            }
            h_rate(rho, c)
        }
    };
    Ok(TheoryRate { kind, exponent, prefactor_gamma_power: power })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub window: (f64, f64),
    pub r2: f64,
    pub n_samples: usize,
}

/// Least squares of `log value` against `log t` over samples with
/// `t_lo ≤ t ≤ t_hi`.
pub fn fit_power_law(series: &[(f64, f64)], window: (f64, f64)) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi && hi.is_finite()) {
        return Err(Error::Window(format!("need 0 < t_lo < t_hi, got ({lo}, {hi})")));
    }
    let pts: Vec<(f64, f64)> = series.iter().copied().filter(|(t, _)| *t >= lo && *t <= hi).collect();
    if pts.len() < 5 {
        return Err(Error::Window(format!("window ({lo}, {hi}) holds {} samples, need 5", pts.len())));
    }
    if let Some((t, v)) = pts.iter().find(|(_, v)| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::Data(format!("nonpositive value {v} at t = {t}")));
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    Ok(PowerLawFit { exponent: slope, log_prefactor: intercept, window, r2, n_samples: pts.len() })
}

/// Fits on the two halves `[t_lo, √(t_lo t_hi)]` and `[√(t_lo t_hi), t_hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitFit {
    pub full: PowerLawFit,
    pub early: PowerLawFit,
    pub late: PowerLawFit,
}

impl SplitFit {
    pub fn disagreement(&self) -> f64 {
        (self.early.exponent - self.late.exponent).abs()
    }

    /// Halves disagreeing by more than 0.2 indicate the series is not a power law.
    pub fn is_power_law(&self) -> bool {
        self.disagreement() <= 0.2
    }
}

pub fn split_window_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<SplitFit> {
    let full = fit_power_law(series, window)?;
    let mid = (window.0 * window.1).sqrt();
    Ok(SplitFit {
        full,
        early: fit_power_law(series, (window.0, mid))?,
        late: fit_power_law(series, (mid, window.1))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn rate_examples() {
        let m = r(1, 1);
        let lq = |q| predicted_exponent(RateKind::Lq(QExponent::Finite(r(q, 1))), m).unwrap().exponent;
        assert_eq!(lq(2), r(0, 1));
        assert_eq!(lq(4), r(-1, 4));
        assert_eq!(predicted_exponent(RateKind::Lq(QExponent::Infinity), m).unwrap().exponent, r(-1, 2));
        let h = predicted_exponent(RateKind::Hbeta { beta: r(1, 1), c: r(1, 1) }, m).unwrap();
        assert_eq!((h.exponent, h.prefactor_gamma_power), (r(-1, 1), r(2, 1)));
        let b = predicted_exponent(RateKind::HrhoB { rho: r(3, 2), c: r(1, 1) }, m).unwrap();
        assert_eq!(b.exponent, r(-5, 4));
        assert_eq!(b.id(), "Hrho_b(3/2,1)");
    }

    #[test]
    fn rate_domain_errors() {
        let m = r(1, 1);
        let bad = [
            RateKind::Lq(QExponent::Finite(r(3, 2))),
            RateKind::Hbeta { beta: r(1, 2), c: r(2, 1) },
            RateKind::Hbeta { beta: r(1, 2), c: r(1, 2) },
            RateKind::Hbeta { beta: r(-1, 2), c: r(1, 1) },
            RateKind::Hbeta { beta: r(3, 2), c: r(1, 1) },
            RateKind::HrhoB { rho: r(2, 1), c: r(1, 1) },
        ];
        for kind in bad {
            assert!(matches!(predicted_exponent(kind, m), Err(Error::Domain(_))), "{kind:?}");
        }
    }

    #[test]
    fn exact_power_law_fit() {
        let s: Vec<_> = (1..=20).map(|i| (i as f64, 3.0 * (i as f64).powf(-0.5))).collect();
        let f = fit_power_law(&s, (1.0, 20.0)).unwrap();
        assert!((f.exponent + 0.5).abs() < 1e-10);
        assert!((f.log_prefactor - 3f64.ln()).abs() < 1e-10);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        assert_eq!(f.n_samples, 20);
    }

    #[test]
    fn perturbed_power_law_fit() {
        let s: Vec<_> = (1..=200).map(|i| {
            let t = i as f64 * 0.5;
            (t, 3.0 * t.powf(-0.5) * (1.0 + 0.01 * t.sin()))
        }).collect();
        let f = fit_power_law(&s, (1.0, 100.0)).unwrap();
        assert!((f.exponent + 0.5).abs() < 0.01);
    }

    #[test]
    fn exponential_is_flagged_by_split_window() {
        let s: Vec<_> = (0..=150).map(|i| {
            let t = 5.0 + 0.1 * i as f64;
            (t, (-t).exp())
        }).collect();
        let f = split_window_fit(&s, (5.0, 20.0)).unwrap();
        assert!(f.full.r2 > 0.9);
        assert!(!f.is_power_law());
        let p: Vec<_> = s.iter().map(|(t, _)| (*t, t.powf(-0.7))).collect();
        assert!(split_window_fit(&p, (5.0, 20.0)).unwrap().is_power_law());
    }

    #[test]
    fn fit_errors() {
        let s: Vec<_> = (1..=4).map(|i| (i as f64, 1.0)).collect();
        assert!(matches!(fit_power_law(&s, (1.0, 4.0)), Err(Error::Window(_))));
        let z: Vec<_> = (1..=6).map(|i| (i as f64, if i == 3 { 0.0 } else { 1.0 })).collect();
        assert!(matches!(fit_power_law(&z, (1.0, 6.0)), Err(Error::Data(_))));
        assert!(matches!(fit_power_law(&z, (6.0, 1.0)), Err(Error::Window(_))));
    }

    proptest! {
        #[test]
        fn hbeta_zero_is_half_minus_inverse_c(cn in 2i64..4, cd in 2i64..3) {
            let c = r(cn, cd);
            prop_assume!(c >= r(1, 1) && c < r(2, 1));
            let rate = predicted_exponent(RateKind::Hbeta { beta: r(0, 1), c }, r(1, 1)).unwrap();
            prop_assert_eq!(rate.exponent, r(1, 2) - r(1, 1) / c);
        }

        #[test]
        fn fit_is_scale_invariant(alpha in -2.0f64..0.5, scale in 1e-6f64..1e6, t0 in 0.5f64..5.0) {
            let s: Vec<_> = (0..30).map(|i| {
                let t = t0 * 1.1f64.powi(i);
                (t, t.powf(alpha) * (1.0 + 0.05 * (i as f64).cos()))
            }).collect();
            let scaled: Vec<_> = s.iter().map(|(t, v)| (*t, scale * v)).collect();
            let w = (t0, t0 * 1.1f64.powi(29));
            let (a, b) = (fit_power_law(&s, w).unwrap(), fit_power_law(&scaled, w).unwrap());
            prop_assert!((a.exponent - b.exponent).abs() < 1e-10);
            prop_assert!((b.log_prefactor - a.log_prefactor - scale.ln()).abs() < 1e-9);
        }
    }
}
