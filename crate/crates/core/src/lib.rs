//! Jacobi spectral solver for the two-sided fractional diffusion equation
//!
//! ```text
//! -D (K(x) (r D 0I^{2-alpha} + (1-r) D xI1^{2-alpha}) Du) = f,  u(0) = u(1) = 0
//! ```
//!
//! with `1 < alpha < 2`, `0 < r < 1` and a positive diffusivity `K`. The
//! flux `q = -K Du` is expanded in weighted Jacobi polynomials on which the
//! fractional operator is diagonal, and `u` is recovered by integration.

pub mod analysis;
pub mod error;
pub mod problems;
pub mod quadrature;
pub mod solver;
pub mod specfun;

pub use error::{Error, Result};
