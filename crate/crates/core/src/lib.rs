//! Spectral numerics for the three-dimensional operator
//!
//! ```text
//! H = -Δ + a/|x|² + |x|²/4,   a ≥ 0
//! ```
//!
//! The crate is `no_std` and only needs an allocator. It provides
//!
//! - [`specfun`]: the special functions everything else is built on
//!   (log-gamma, Laguerre/Legendre polynomials, real-order Bessel `J` and
//!   exponentially scaled `I`, spherical harmonics and zonal functions);
//! - [`spectral`]: eigenvalues, normalized eigenfunctions and energy-window
//!   enumeration of the discrete spectrum;
//! - [`kernels`]: closed-form series for the Schrödinger and heat propagator
//!   kernels and for the angular `K` function that controls their size;
//! - [`transforms`]: tensor-product quadrature, spectral analysis/synthesis,
//!   functional calculus, Littlewood–Paley blocks and Besov/Sobolev norms.
#![no_std]

extern crate alloc;

pub mod error;
pub mod geometry;
pub mod kernels;
pub mod specfun;
pub mod spectral;
pub mod transforms;

pub use error::{Error, Result};
pub use geometry::PolarPoint;
pub use num_complex::Complex64;
pub use spectral::{ModeIndex, OperatorParams, SpectralSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
