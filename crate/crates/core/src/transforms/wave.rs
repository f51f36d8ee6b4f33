use num_complex::Complex64;

use super::spectral_transform::SpectralCoefficients;
use crate::error::Result;

/// `u(t) = cos(t√H) f + sin(t√H)/√H g`.
pub fn wave_evolve(f: &SpectralCoefficients, g: &SpectralCoefficients, t: f64) -> Result<SpectralCoefficients> {
    f.same_set(g)?;
    let values = f
        .iter()
        .zip(g.values())
        .map(|((_, lam, fv), gv)| {
            let w = lam.sqrt();
            let (s, c) = (t * w).sin_cos();
            fv * c + gv * (s / w)
        })
        .collect();
    SpectralCoefficients::new(f.set().clone(), values)
}

/// `∂_t u(t) = -√H sin(t√H) f + cos(t√H) g`.
pub fn wave_velocity(f: &SpectralCoefficients, g: &SpectralCoefficients, t: f64) -> Result<SpectralCoefficients> {
    f.same_set(g)?;
    let values = f
        .iter()
        .zip(g.values())
        .map(|((_, lam, fv), gv)| {
            let w = lam.sqrt();
            let (s, c) = (t * w).sin_cos();
            -fv * (w * s) + gv * c
        })
        .collect();
    SpectralCoefficients::new(f.set().clone(), values)
}

/// `‖√H u‖₂² + ‖∂_t u‖₂²`.
pub fn wave_energy(u: &SpectralCoefficients, ut: &SpectralCoefficients) -> Result<f64> {
    u.same_set(ut)?;
    Ok(u.iter().zip(ut.values()).map(|((_, lam, a), b)| lam * a.norm_sqr() + b.norm_sqr()).sum())
}

/// `e^{-itH} f`.
pub fn schrodinger_evolve(f: &SpectralCoefficients, t: f64) -> SpectralCoefficients {
    f.apply_multiplier(|lam| Complex64::from_polar(1.0, -t * lam))
}

/// `e^{-tH} f`.
pub fn heat_evolve(f: &SpectralCoefficients, t: f64) -> SpectralCoefficients {
    f.apply_real(|lam| (-t * lam).exp())
}
