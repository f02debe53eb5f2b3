//! Pseudo-spectral simulator and verification harness for the two-dimensional
//! damped wave-type MHD system
//!
//! ```text
//! ∂ₜu − Δu + u·∇u + ∇p = b·∇b
//! γ∂ₜₜb + ∂ₜb − Δb + u·∇b = b·∇u
//! ∇·u = ∇·b = 0
//! ```
//!
//! on a periodic box. The magnetic field is advanced with the exact per-mode
//! damped-wave propagator (kernels `K̂₀`, `K̂₁`), the velocity with the exact heat
//! multiplier, and the quadratic terms enter through exponential-Euler Duhamel
//! weights. Around the solver sit the diagnostics (Lᵠ norms, homogeneous Sobolev
//! seminorms, energy functionals) and the decay harness that fits algebraic decay
//! exponents and compares them with the predicted rates.
//!
//! Module map:
//!
//! - [`grid`], [`field`], [`fft`], [`spectral`], [`initial`]: periodic-box spectral
//!   infrastructure.
//! - [`kernels`]: damped-wave symbols, mode propagators, Duhamel weights and
//!   empirical kernel bounds.
//! - [`solver`]: exponential integrator, IMEX reference scheme, γ = 0 MHD baseline.
//! - [`diagnostics`]: norms, energy functionals, energy-balance residuals and
//!   inequality spot checks.
//! - [`decay`]: predicted rates, power-law fits, γ sweeps, singular-limit runs and
//!   quadrature checks of the time-convolution inequalities.
//! - [`io`]: configuration, CSV/JSONL output, checkpoints and the command layer used
//!   by the `mhdwave` binary.

pub mod decay;
pub mod diagnostics;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod initial;
pub mod io;
pub mod kernels;
pub mod quadrature;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{RealField, SpectralVectorField};
pub use grid::{GridSpec, WaveVector};
