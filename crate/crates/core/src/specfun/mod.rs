//! Double-precision special functions.
//!
//! Everything here is a pure function of its arguments. Orders and degrees
//! follow the usual conventions: `laguerre(m, α, t)` is `L_m^α(t)`,
//! `bessel_j(ν, x)` is `J_ν(x)`, and spherical harmonics take the azimuth
//! `theta ∈ [0, 2π]` before the polar angle `phi ∈ [0, π]`.

mod bessel;
mod gamma;
mod harmonics;
mod orthopoly;

pub use bessel::{bessel_i_scaled, bessel_i_scaled_with, bessel_j, bessel_j_with, bessel_power_bound};
pub use gamma::log_gamma;
pub use harmonics::{normalized_legendre_table, spherical_harmonic, zonal, NormalizedLegendre};
pub use orthopoly::{assoc_legendre, laguerre, laguerre_sequence, legendre_p, legendre_sequence};

use crate::error::{Error, Result};

/// Truncation control for the power series in this module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTolerance {
    rel_tol: f64,
    max_terms: usize,
}

impl SeriesTolerance {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0) || !rel_tol.is_finite() {
            return Err(Error::domain("series rel_tol", rel_tol));
        }
        if max_terms == 0 {
            return Err(Error::Invalid { what: "series max_terms", reason: "must be at least 1" });
        }
        Ok(SeriesTolerance { rel_tol, max_terms })
    }

    pub fn rel_tol(&self) -> f64 {
        self.rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        SeriesTolerance { rel_tol: 0.5 * f64::EPSILON, max_terms: 600 }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
