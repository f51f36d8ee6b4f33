//! Quadrature, spectral analysis and synthesis, functional calculus and
//! Littlewood–Paley calculus.
//!
//! Functions are represented either by samples on a tensor-product
//! [`QuadratureGrid`] or by [`SpectralCoefficients`] over a finite
//! [`SpectralSet`](crate::SpectralSet). Multipliers `F(H)` act on
//! coefficients, where they are exact.

mod blocks;
mod grid;
mod norms;
mod partition;
mod quadrature;
mod spectral_transform;
mod wave;

pub use blocks::{halfwave_block_kernel, lp_block_kernel, BlockKernelRow, BlockKernelTable};
pub use grid::{GridFunction, GridSpec, QuadratureGrid};
pub use norms::{
    active_blocks, besov_norm, lp_block, lp_norm, real, sobolev_norm, square_function_l2, square_sum,
};
pub use partition::DyadicPartition;
pub use quadrature::{composite_gauss, gauss_legendre, gauss_legendre_interval};
pub use spectral_transform::{analyze, apply_multiplier, synthesize, SpectralCoefficients, SpectralTransform};
pub use wave::{heat_evolve, schrodinger_evolve, wave_energy, wave_evolve, wave_velocity};
