//! Spectral adaptive quantum neural network (SAQNN).
//!
//! The model prepares a real amplitude distribution on an `m`-qubit control
//! register, applies one pattern-controlled basis function per series term
//! (Fourier `e^{i j·x}` or tensor Chebyshev `∏ T_j(x_i)`) together with a
//! pattern-controlled phase, pads the all-zeros branch, un-prepares the
//! register and reads `a·|⟨0|U|0⟩|`.
//!
//! Modules:
//! - [`simulator`]: dense statevector engine (qubit 0 is the least significant
//!   bit of the amplitude index everywhere in this crate).
//! - [`circuit`]: gate IR, exact decompositions, resource metrics and
//!   OpenQASM 2.0 export.
//! - [`spectral`]: frequency lattices, basis functions, quadrature oracles.
//! - [`model`]: circuit assembly, simulated and closed-form forward passes,
//!   analytic initialization, JSON persistence.
//! - [`training`]: datasets, MSE loss, finite differences, Adam, rescale
//!   fine-tuning.
//! - [`bounds`]: Sobolev approximation-number bounds and term-count inversion.
//! - [`cli`]: the `saqnn` command-line surface.

pub mod bounds;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod model;
pub mod simulator;
pub mod spectral;
pub mod training;

pub use error::{Error, Result};
pub use num_complex::Complex64;
