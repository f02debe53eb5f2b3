//! Periodic box geometry and the wavenumber lattice.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square periodic box `[0, L)²` sampled on an `n × n` grid.
///
/// Arrays over the grid are stored row-major with the y index outermost:
/// entry `(ix, iy)` lives at `iy * n + ix`. The same layout is used for physical
/// values and for Fourier coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    n: usize,
    box_length: f64,
}

/// A lattice wavevector `k = (2π/L)·(mx, my)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector {
    pub kx: f64,
    pub ky: f64,
    pub k2: f64,
}

impl WaveVector {
    pub fn new(kx: f64, ky: f64) -> Self {
        Self {
            kx,
            ky,
            k2: kx * kx + ky * ky,
        }
    }

    pub fn magnitude(&self) -> f64 {
        self.k2.sqrt()
    }
}

impl GridSpec {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::config(
                "grid.n",
                format!("need an even number of points >= 8, got {n}"),
            ));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::config(
                "grid.box_length",
                format!("need a positive finite length, got {box_length}"),
            ));
        }
        Ok(Self { n, box_length })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Grid spacing `L/n`.
    pub fn dx(&self) -> f64 {
        self.box_length / self.n as f64
    }

    /// Fundamental wavenumber `2π/L`.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.box_length
    }

    /// Cell area used by the midpoint quadrature.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dx()
    }

    /// Signed integer wavenumber of FFT index `i`. The Nyquist index `n/2` maps
    /// to `-n/2`.
    pub fn mode_index(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT index of signed integer wavenumber `m` (taken modulo `n`).
    pub fn fft_index(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    pub fn is_nyquist(&self, ix: usize, iy: usize) -> bool {
        ix == self.n / 2 || iy == self.n / 2
    }

    pub fn wave_vector(&self, ix: usize, iy: usize) -> WaveVector {
        let k0 = self.k0();
        WaveVector::new(
            k0 * self.mode_index(ix) as f64,
            k0 * self.mode_index(iy) as f64,
        )
    }

    /// Flat index of the mode `-k` for the mode stored at `(ix, iy)`.
    pub fn conjugate_index(&self, ix: usize, iy: usize) -> usize {
        let n = self.n;
        ((n - iy) % n) * n + (n - ix) % n
    }

    /// Two-thirds rule: a mode survives iff `3·|m| < n` on both axes.
    pub fn is_retained(&self, ix: usize, iy: usize) -> bool {
        let n = self.n as i64;
        3 * self.mode_index(ix).abs() < n && 3 * self.mode_index(iy).abs() < n
    }

    /// Physical coordinate of grid index `i`.
    pub fn coord(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    /// Iterator over `(flat index, ix, iy, wavevector)` for all modes.
    pub fn modes(&self) -> impl Iterator<Item = (usize, usize, usize, WaveVector)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |iy| {
            (0..n).map(move |ix| (iy * n + ix, ix, iy, self.wave_vector(ix, iy)))
        })
    }

    /// `|k|²` for every mode in storage order.
    pub fn k2_table(&self) -> Vec<f64> {
        self.modes().map(|(_, _, _, k)| k.k2).collect()
    }
}
