//! Physical and spectral field containers.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::GridSpec;

/// Real values on the `n × n` grid with one or two components.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: GridSpec,
    components: Vec<Vec<f64>>,
}

impl RealField {
    pub fn new(grid: GridSpec, components: Vec<Vec<f64>>) -> Result<Self> {
        if components.is_empty() || components.len() > 2 {
            return Err(Error::config(
                "field.components",
                format!("expected 1 or 2 components, got {}", components.len()),
            ));
        }
        for (c, values) in components.iter().enumerate() {
            if values.len() != grid.len() {
                return Err(Error::config(
                    format!("field.components[{c}]"),
                    format!("{} values for a {}x{} grid", values.len(), grid.n(), grid.n()),
                ));
            }
            if values.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!("component {c} holds non-finite values")));
            }
        }
        Ok(Self { grid, components })
    }

    pub fn scalar(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        Self::new(grid, vec![values])
    }

    pub fn vector(grid: GridSpec, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        Self::new(grid, vec![x, y])
    }

    /// Sample `f(x, y)` at the grid points.
    pub fn from_fn(grid: GridSpec, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for iy in 0..n {
            for ix in 0..n {
                values.push(f(grid.coord(ix), grid.coord(iy)));
            }
        }
        Self {
            grid,
            components: vec![values],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.components[c]
    }

    /// Pointwise Euclidean magnitude over the components.
    pub fn magnitude(&self) -> Vec<f64> {
        match self.components.as_slice() {
            [a] => a.iter().map(|v| v.abs()).collect(),
            [a, b] => a.iter().zip(b).map(|(x, y)| x.hypot(*y)).collect(),
            _ => unreachable!("component count checked at construction"),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.magnitude().into_iter().fold(0.0, f64::max)
    }
}

/// Fourier coefficients of a two-component real field.
///
/// Coefficients follow the [`fft`] normalization, so the `k = 0` entry is the
/// box average and Parseval reads `‖f‖²_{L²} = L² Σₖ |f̂(k)|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVectorField {
    grid: GridSpec,
    components: [Vec<Complex64>; 2],
}

impl SpectralVectorField {
    pub fn zeros(grid: GridSpec) -> Self {
        let len = grid.len();
        Self {
            grid,
            components: [vec![Complex64::default(); len], vec![Complex64::default(); len]],
        }
    }

    pub fn from_components(grid: GridSpec, x: Vec<Complex64>, y: Vec<Complex64>) -> Result<Self> {
        if x.len() != grid.len() || y.len() != grid.len() {
            return Err(Error::config(
                "field.components",
                "coefficient arrays do not match the grid",
            ));
        }
        Ok(Self {
            grid,
            components: [x, y],
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.components[c]
    }

    pub fn components_mut(&mut self) -> (&mut [Complex64], &mut [Complex64]) {
        let [x, y] = &mut self.components;
        (x, y)
    }

    pub fn into_components(self) -> [Vec<Complex64>; 2] {
        self.components
    }

    /// `(f̂₁(k), f̂₂(k))` at flat index `idx`.
    pub fn at(&self, idx: usize) -> (Complex64, Complex64) {
        (self.components[0][idx], self.components[1][idx])
    }

    pub fn set(&mut self, idx: usize, value: (Complex64, Complex64)) {
        self.components[0][idx] = value.0;
        self.components[1][idx] = value.1;
    }

    pub fn is_zero(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.iter().all(|z| z.re == 0.0 && z.im == 0.0))
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        self.map(|_, z| z * alpha)
    }

    /// Apply `f(flat index, coefficient)` to every coefficient of both components.
    pub fn map(&self, f: impl Fn(usize, Complex64) -> Complex64) -> Self {
        let [x, y] = &self.components;
        Self {
            grid: self.grid,
            components: [
                x.iter().enumerate().map(|(i, &z)| f(i, z)).collect(),
                y.iter().enumerate().map(|(i, &z)| f(i, z)).collect(),
            ],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let combine = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
            a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect()
        };
        Self {
            grid: self.grid,
            components: [
                combine(&self.components[0], &other.components[0]),
                combine(&self.components[1], &other.components[1]),
            ],
        }
    }

    /// `Σₖ |f̂(k)|²` without the `L²` factor.
    pub fn coefficient_energy(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// L² norm over the box via Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.grid.box_length() * self.coefficient_energy().sqrt()
    }

    /// `⟨f, g⟩ = ∫ f·g dx` via Parseval.
    pub fn inner(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let mut acc = 0.0;
        for c in 0..2 {
            for (a, b) in self.components[c].iter().zip(&other.components[c]) {
                acc += a.re * b.re + a.im * b.im;
            }
        }
        acc * self.grid.box_length().powi(2)
    }

    /// `maxₖ |k·f̂(k)|`.
    pub fn divergence_max(&self) -> f64 {
        let [x, y] = &self.components;
        self.grid
            .modes()
            .map(|(idx, _, _, k)| (x[idx] * k.kx + y[idx] * k.ky).norm())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient magnitude `maxₖ |f̂(k)|`.
    pub fn max_coefficient(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Divergence-free check: `maxₖ |k·f̂| ≤ rel_tol · k_max · ‖f̂‖_{ℓ²}`.
    pub fn is_divergence_free(&self, rel_tol: f64) -> bool {
        let scale = self.coefficient_energy().sqrt() * self.grid.k0() * self.grid.n() as f64;
        self.divergence_max() <= rel_tol * scale.max(f64::MIN_POSITIVE)
    }

    /// Largest violation of `f̂(−k) = conj f̂(k)`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n();
        let mut worst: f64 = 0.0;
        for c in &self.components {
            for iy in 0..n {
                for ix in 0..n {
                    let a = c[iy * n + ix];
                    let b = c[self.grid.conjugate_index(ix, iy)];
                    worst = worst.max((a - b.conj()).norm());
                }
            }
        }
        worst
    }

    /// Box average `f̂(0)`.
    pub fn mean(&self) -> (Complex64, Complex64) {
        self.at(0)
    }

    pub fn clear_mean(&mut self) {
        self.set(0, (Complex64::default(), Complex64::default()));
    }

    pub fn all_finite(&self) -> bool {
        self.components
            .iter()
            .flat_map(|c| c.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Forward transform of a physical field. A scalar field fills the first
/// component and leaves the second at zero.
pub fn transform_forward(field: &RealField, grid: &GridSpec) -> Result<SpectralVectorField> {
    if field.grid() != grid {
        return Err(Error::config(
            "field.grid",
            format!(
                "field sampled on {}x{} (L = {}) but grid is {}x{} (L = {})",
                field.grid().n(),
                field.grid().n(),
                field.grid().box_length(),
                grid.n(),
                grid.n(),
                grid.box_length()
            ),
        ));
    }
    let zeros;
    let second = if field.num_components() == 2 {
        field.component(1)
    } else {
        zeros = vec![0.0; grid.len()];
        &zeros
    };
    let (x, y) = fft::forward_pair(grid, field.component(0), second);
    SpectralVectorField::from_components(*grid, x, y)
}

/// Inverse transform to a two-component physical field.
pub fn transform_inverse(field: &SpectralVectorField) -> RealField {
    let (x, y) = fft::inverse_pair(field.grid(), field.component(0), field.component(1));
    RealField {
        grid: *field.grid(),
        components: vec![x, y],
    }
}
