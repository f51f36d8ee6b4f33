use num_complex::Complex64;

use super::partition::DyadicPartition;
use super::spectral_transform::{SpectralCoefficients, SpectralTransform};
use crate::error::{Error, Result};

pub(crate) fn check_exponent(what: &'static str, p: f64) -> Result<()> {
    if p >= 1.0 && !p.is_nan() {
        Ok(())
    } else {
        Err(Error::domain(what, p))
    }
}

/// `‖H^{s/2} f‖₂ = (Σ λ^s |c|²)^{1/2}`.
pub fn sobolev_norm(c: &SpectralCoefficients, s: f64) -> f64 {
    c.iter().map(|(_, lam, v)| lam.powf(s) * v.norm_sqr()).sum::<f64>().sqrt()
}

/// `ψ_j(√H) f` in coefficient form.
pub fn lp_block(c: &SpectralCoefficients, j: i32, partition: &DyadicPartition) -> SpectralCoefficients {
    c.apply_real(|lam| partition.psi_j(j, lam.sqrt()))
}

/// Blocks `j` that can be nonzero on the modes carried by `c`.
pub fn active_blocks(c: &SpectralCoefficients, partition: &DyadicPartition) -> Option<(i32, i32)> {
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (_, lam, v) in c.iter() {
        if v.re != 0.0 || v.im != 0.0 {
            lo = lo.min(lam);
            hi = hi.max(lam);
        }
    }
    if hi == 0.0 {
        return None;
    }
    Some(partition.active_range(lo.sqrt(), hi.sqrt()))
}

/// `L^p` norm of a band-limited function given by coefficients.
///
/// `p = 2` is exact (Parseval); other exponents use the grid of `transform`.
pub fn lp_norm(c: &SpectralCoefficients, p: f64, transform: &SpectralTransform) -> Result<f64> {
    check_exponent("Lebesgue exponent", p)?;
    if p == 2.0 {
        return Ok(c.l2_norm());
    }
    if c.is_zero() {
        return Ok(0.0);
    }
    transform.synthesize(c)?.lp_norm(p)
}

/// Besov norm `(Σ_j 2^{jqs} ‖ψ_j(√H) f‖_p^q)^{1/q}`, with `q = ∞` the supremum over `j`.
pub fn besov_norm(
    c: &SpectralCoefficients,
    s: f64,
    p: f64,
    q: f64,
    partition: &DyadicPartition,
    transform: &SpectralTransform,
) -> Result<f64> {
    check_exponent("Besov integrability exponent p", p)?;
    check_exponent("Besov summability exponent q", q)?;
    if !s.is_finite() {
        return Err(Error::domain("Besov regularity", s));
    }
    let Some((j_lo, j_hi)) = active_blocks(c, partition) else {
        return Ok(0.0);
    };
    let mut acc = 0.0f64;
    for j in j_lo..=j_hi {
        let block = lp_block(c, j, partition);
        if block.is_zero() {
            continue;
        }
        let term = 2f64.powf(j as f64 * s) * lp_norm(&block, p, transform)?;
        if q == f64::INFINITY {
            acc = acc.max(term);
        } else {
            acc += term.powf(q);
        }
    }
    Ok(if q == f64::INFINITY { acc } else { acc.powf(1.0 / q) })
}

/// `‖(Σ_j |ψ_j(√H) f|²)^{1/2}‖₂`, computed exactly in coefficients.
pub fn square_function_l2(c: &SpectralCoefficients, partition: &DyadicPartition) -> f64 {
    let Some((j_lo, j_hi)) = active_blocks(c, partition) else {
        return 0.0;
    };
    c.iter()
        .map(|(_, lam, v)| {
            let w = lam.sqrt();
            let s: f64 = (j_lo..=j_hi).map(|j| partition.psi_j(j, w).powi(2)).sum();
            s * v.norm_sqr()
        })
        .sum::<f64>()
        .sqrt()
}

/// `(Σ_j ψ_j(ω)²)^{1/2}`; its extrema over `ω` are the almost-orthogonality constants.
pub fn square_sum(partition: &DyadicPartition, omega: f64) -> f64 {
    let (lo, hi) = partition.active_range(omega, omega);
    (lo..=hi).map(|j| partition.psi_j(j, omega).powi(2)).sum::<f64>().sqrt()
}

/// Convenience for real-valued multipliers given as complex closures.
pub fn real(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Complex64 {
    move |lam| Complex64::new(f(lam), 0.0)
}
