//! Empirical constants for the kernel decay bounds.
//!
//! On the damping-dominated region S₁ both symbols are compared with
//! `e^{−t/(8γ)}` (`fren-1`) and `K̂₁` additionally with
//! `γ^{−ϑ/2}|k|^{−ϑ}e^{−t/(8γ)}` (`fren-2`); on S₂ both are compared with
//! `e^{−|k|²t}` (`fren-3`). The reported constant is the largest sampled ratio
//! `|K̂| / shape`. No constant is asserted against a reference value.

use std::io::Write;

use serde::Serialize;

use super::{frequency_region, kernel_pair, FrequencyRegion};
use crate::error::{Error, Result};

/// Sampling grid for one region.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSpec {
    pub region: FrequencyRegion,
    /// Inclusive `|k|²` range; log-spaced when the lower end is positive.
    pub k2_range: (f64, f64),
    pub n_k2: usize,
    /// Upper end of the time samples; `None` means `40γ`. Samples are evenly
    /// spaced on `[0, t_max]`, the closure of `(0, t_max]`, so the `t → 0⁺`
    /// limit of each ratio is part of the supremum.
    pub t_max: Option<f64>,
    pub n_t: usize,
    /// Exponents `ϑ ∈ [0, 1]` for `fren-2` (ignored on S₂).
    pub thetas: Vec<f64>,
}

impl SampleSpec {
    pub fn s1(k2_range: (f64, f64)) -> Self {
        Self {
            region: FrequencyRegion::S1,
            k2_range,
            n_k2: 200,
            t_max: None,
            n_t: 400,
            thetas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
        }
    }

    pub fn s2(k2_range: (f64, f64)) -> Self {
        Self {
            region: FrequencyRegion::S2,
            thetas: Vec::new(),
            ..Self::s1(k2_range)
        }
    }

    /// Same ranges with both sample counts doubled.
    pub fn refined(&self) -> Self {
        Self {
            n_k2: 2 * self.n_k2,
            n_t: 2 * self.n_t,
            ..self.clone()
        }
    }

    fn k2_samples(&self) -> Vec<f64> {
        let (lo, hi) = self.k2_range;
        let n = self.n_k2;
        if n == 1 {
            return vec![lo];
        }
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                if lo > 0.0 {
                    (lo.ln() + f * (hi.ln() - lo.ln())).exp()
                } else {
                    lo + f * (hi - lo)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub bound_id: String,
    pub gamma: f64,
    /// Only `fren-2` rows carry an exponent.
    pub theta: Option<f64>,
    #[serde(rename = "C_emp")]
    pub c_emp: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn get(&self, bound_id: &str, theta: Option<f64>) -> Option<&BoundRow> {
        self.rows
            .iter()
            .find(|r| r.bound_id == bound_id && r.theta == theta)
    }

    /// Flat CSV with columns `bound_id,gamma,theta,C_emp,n_samples`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn extend(&mut self, other: BoundReport) {
        self.rows.extend(other.rows);
    }
}

pub fn verify_kernel_bounds(gamma: f64, spec: &SampleSpec) -> Result<BoundReport> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::config("kernels.gamma", format!("need gamma > 0, got {gamma}")));
    }
    let (lo, hi) = spec.k2_range;
    if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi) {
        return Err(Error::config("sample.k2_range", format!("bad range ({lo}, {hi})")));
    }
    if spec.n_k2 == 0 || spec.n_t == 0 {
        return Err(Error::config("sample", "sample counts must be positive"));
    }
    let t_max = spec.t_max.unwrap_or(40.0 * gamma);
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::config("sample.t_max", format!("need t_max > 0, got {t_max}")));
    }
    if let Some(&theta) = spec.thetas.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::config("sample.thetas", format!("theta {theta} outside [0, 1]")));
    }
    let k2s = spec.k2_samples();
    if let Some(&k2) = k2s.iter().find(|&&k2| frequency_region(gamma, k2) != spec.region) {
        return Err(Error::config(
            "sample.k2_range",
            format!(
                "|k|^2 = {k2} lies outside region {:?} for gamma = {gamma}",
                spec.region
            ),
        ));
    }
    let ts: Vec<f64> = (0..=spec.n_t)
        .map(|i| t_max * i as f64 / spec.n_t as f64)
        .collect();
    let n_samples = k2s.len() * ts.len();

    let mut rows = Vec::new();
    let row = |id: &str, theta: Option<f64>, c: f64| BoundRow {
        bound_id: id.to_string(),
        gamma,
        theta,
        c_emp: c,
        n_samples,
    };
    match spec.region {
        FrequencyRegion::S1 => {
            let mut sup0: f64 = 0.0;
            let mut sup1: f64 = 0.0;
            let mut sup2 = vec![0.0f64; spec.thetas.len()];
            for &k2 in &k2s {
                for &t in &ts {
                    let (k0, k1) = kernel_pair(gamma, k2, t);
                    let shape = (-t / (8.0 * gamma)).exp();
                    sup0 = sup0.max(k0.abs() / shape);
                    sup1 = sup1.max(k1.abs() / shape);
                    for (s, &theta) in sup2.iter_mut().zip(&spec.thetas) {
                        let weight = gamma.powf(-0.5 * theta) * k2.powf(-0.5 * theta);
                        *s = s.max(k1.abs() / (weight * shape));
                    }
                }
            }
            rows.push(row("fren-1/K0", None, sup0));
            rows.push(row("fren-1/K1", None, sup1));
            for (s, &theta) in sup2.iter().zip(&spec.thetas) {
                rows.push(row("fren-2/K1", Some(theta), *s));
            }
        }
        FrequencyRegion::S2 => {
            let mut sup0: f64 = 0.0;
            let mut sup1: f64 = 0.0;
            for &k2 in &k2s {
                for &t in &ts {
                    let (k0, k1) = kernel_pair(gamma, k2, t);
                    let shape = (-k2 * t).exp();
                    sup0 = sup0.max(k0.abs() / shape);
                    sup1 = sup1.max(k1.abs() / shape);
                }
            }
            rows.push(row("fren-3/K0", None, sup0));
            rows.push(row("fren-3/K1", None, sup1));
        }
    }
    Ok(BoundReport { rows })
}
