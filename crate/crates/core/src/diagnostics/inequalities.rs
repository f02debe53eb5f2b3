//! Empirical constants for the interpolation and heat-smoothing inequalities
//! in two dimensions:
//!
//! ```text
//! ‖Λʳf‖_{Lᵠ} ≤ C ‖Λ^{s₁}f‖^θ_{L^{p₁}} ‖Λ^{s₂}f‖^{1−θ}_{L^{p₂}}
//!     with 1/q − r/2 = θ(1/p₁ − s₁/2) + (1 − θ)(1/p₂ − s₂/2)
//! ‖Λˢe^{tΔ}f‖_{Lᵠ} ≤ C t^{−s/2 − (1/p − 1/q)} ‖f‖_{Lᵖ}
//! ```
//!
//! On the torus these constants are sampled, not bounded.

use std::io::Write;

use crate::diagnostics::{fmt_f64, label, lq_norm};
use crate::error::{Error, Result};
use crate::field::{transform_inverse, SpectralVectorField};
use crate::spectral::fractional_laplacian_apply;

const DIM: f64 = 2.0;

fn inv(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}

/// One admissible interpolation tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnTuple {
    pub r: f64,
    pub s1: f64,
    pub s2: f64,
    pub q: f64,
    pub p1: f64,
    pub p2: f64,
    pub theta: f64,
}

impl GnTuple {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::config("inequalities.gn", m));
        if !(0.0 <= self.r && self.r < self.s2 && self.s1 >= 0.0) {
            return bad(format!("need 0 <= r < s2 and s1 >= 0, got {self:?}"));
        }
        if [self.q, self.p1, self.p2].iter().any(|&p| p.is_nan() || p <= 1.0) {
            return bad(format!("need exponents in (1, inf], got {self:?}"));
        }
        if !(0.0 <= self.theta && self.theta <= 1.0 - self.r / self.s2) {
            return bad(format!("theta {} outside [0, 1 - r/s2]", self.theta));
        }
        if self.q.is_infinite() && self.theta == 0.0 {
            return bad("theta = 0 is excluded for q = inf".into());
        }
        let lhs = inv(self.q) - self.r / DIM;
        let rhs = self.theta * (inv(self.p1) - self.s1 / DIM) + (1.0 - self.theta) * (inv(self.p2) - self.s2 / DIM);
        if (lhs - rhs).abs() > 1e-12 {
            return bad(format!("scaling relation fails: {lhs} vs {rhs}"));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!(
            "r={} s1={} s2={} q={} p1={} p2={} theta={}",
            label(self.r), label(self.s1), label(self.s2), label(self.q), label(self.p1), label(self.p2), label(self.theta)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatTuple {
    pub s: f64,
    pub p: f64,
    pub q: f64,
    pub times: Vec<f64>,
}

impl HeatTuple {
    pub fn validate(&self) -> Result<()> {
        if !(self.s >= 0.0 && 1.0 <= self.p && self.p <= self.q) {
            return Err(Error::config("inequalities.heat", format!("need s >= 0, 1 <= p <= q, got {self:?}")));
        }
        if self.times.is_empty() || self.times.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::config("inequalities.heat.times", "need positive finite times"));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!("s={} p={} q={}", label(self.s), label(self.p), label(self.q))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpotCheckRow {
    pub check: &'static str,
    pub params: String,
    pub max_ratio: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpotCheckReport {
    pub rows: Vec<SpotCheckRow>,
}

impl SpotCheckReport {
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "params", "max_ratio", "n_samples"])?;
        for r in &self.rows {
            w.write_record([r.check.to_string(), r.params.clone(), fmt_f64(r.max_ratio), r.n_samples.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn lifted_norm(f: &SpectralVectorField, s: f64, q: f64) -> Result<f64> {
    lq_norm(&transform_inverse(&fractional_laplacian_apply(f, s)?), q)
}

/// Largest `LHS/RHS` of the interpolation inequality over the sample fields.
pub fn gagliardo_nirenberg_check(fields: &[SpectralVectorField], tuple: &GnTuple) -> Result<SpotCheckRow> {
    tuple.validate()?;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for f in fields {
        let lhs = lifted_norm(f, tuple.r, tuple.q)?;
        let rhs = lifted_norm(f, tuple.s1, tuple.p1)?.powf(tuple.theta) * lifted_norm(f, tuple.s2, tuple.p2)?.powf(1.0 - tuple.theta);
        if rhs > 0.0 {
            worst = worst.max(lhs / rhs);
            n += 1;
        }
    }
    Ok(SpotCheckRow { check: "gagliardo_nirenberg", params: tuple.describe(), max_ratio: worst, n_samples: n })
}

/// Largest `‖Λˢe^{tΔ}f‖_q / (t^{−s/2−(1/p−1/q)}‖f‖_p)` over fields and times.
pub fn heat_smoothing_check(fields: &[SpectralVectorField], tuple: &HeatTuple) -> Result<SpotCheckRow> {
    tuple.validate()?;
    let power = -0.5 * tuple.s - (inv(tuple.p) - inv(tuple.q)) * DIM / 2.0;
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for f in fields {
        let base = lq_norm(&transform_inverse(f), tuple.p)?;
        if base == 0.0 {
            continue;
        }
        let lifted = fractional_laplacian_apply(f, tuple.s)?;
        let grid = *f.grid();
        let k2 = grid.k2_table();
        for &t in &tuple.times {
            let smoothed = lifted.map(|idx, z| z * (-k2[idx] * t).exp());
            let lhs = lq_norm(&transform_inverse(&smoothed), tuple.q)?;
            worst = worst.max(lhs / (t.powf(power) * base));
            n += 1;
        }
    }
    Ok(SpotCheckRow { check: "heat_smoothing", params: tuple.describe(), max_ratio: worst, n_samples: n })
}

pub fn inequality_spot_checks(
    fields: &[SpectralVectorField],
    gn: &[GnTuple],
    heat: &[HeatTuple],
) -> Result<SpotCheckReport> {
    let mut rows = Vec::new();
    for t in gn {
        rows.push(gagliardo_nirenberg_check(fields, t)?);
    }
    for t in heat {
        rows.push(heat_smoothing_check(fields, t)?);
    }
    Ok(SpotCheckReport { rows })
}
