use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::legendre_p;
use crate::error::{Error, Result};

/// Orthonormal associated Legendre values `P̄_k^n(u)` for `0 ≤ n ≤ k ≤ k_max`,
/// scaled so that `Y_n^k(θ, φ) = P̄_k^{|n|}(cos φ) e^{inθ}` is L²(S²)-normalized.
#[derive(Debug, Clone)]
pub struct NormalizedLegendre {
    k_max: usize,
    values: Vec<f64>,
}

impl NormalizedLegendre {
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    #[inline]
    pub fn get(&self, k: usize, n: usize) -> f64 {
        debug_assert!(n <= k && k <= self.k_max);
        self.values[k * (k + 1) / 2 + n]
    }
}

/// Builds [`NormalizedLegendre`] by the stable sectoral-then-vertical recurrence.
pub fn normalized_legendre_table(k_max: usize, u: f64) -> Result<NormalizedLegendre> {
    if !(u.abs() <= 1.0) {
        return Err(Error::domain("legendre argument", u));
    }
    let s = (1.0 - u * u).max(0.0).sqrt();
    let mut values = alloc::vec![0.0; (k_max + 1) * (k_max + 2) / 2];
    let idx = |k: usize, n: usize| k * (k + 1) / 2 + n;
    let mut sectoral = (4.0 * PI).sqrt().recip();
    for n in 0..=k_max {
        if n > 0 {
            let nf = n as f64;
            sectoral *= ((2.0 * nf + 1.0) / (2.0 * nf)).sqrt() * s;
        }
        values[idx(n, n)] = sectoral;
        if n == k_max {
            break;
        }
        values[idx(n + 1, n)] = ((2 * n + 3) as f64).sqrt() * u * sectoral;
        let nf = n as f64;
        for k in (n + 2)..=k_max {
            let kf = k as f64;
            let a = ((4.0 * kf * kf - 1.0) / (kf * kf - nf * nf)).sqrt();
            let km1 = kf - 1.0;
            let a_prev = ((4.0 * km1 * km1 - 1.0) / (km1 * km1 - nf * nf)).sqrt();
            values[idx(k, n)] = a * (u * values[idx(k - 1, n)] - values[idx(k - 2, n)] / a_prev);
        }
    }
    Ok(NormalizedLegendre { k_max, values })
}

/// L²(S²)-normalized spherical harmonic `Y_n^k(θ, φ)`; `theta` is the azimuth,
/// `phi` the polar angle. The constant is `((2k+1)/(4π) (k-|n|)!/(k+|n|)!)^{1/2}`.
pub fn spherical_harmonic(k: usize, n: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if n.unsigned_abs() as usize > k {
        return Err(Error::Invalid { what: "spherical harmonic order", reason: "|n| must not exceed k" });
    }
    if !theta.is_finite() || !phi.is_finite() {
        return Err(Error::domain("spherical harmonic angle", if theta.is_finite() { phi } else { theta }));
    }
    let table = normalized_legendre_table(k, phi.cos().clamp(-1.0, 1.0))?;
    let p = table.get(k, n.unsigned_abs() as usize);
    Ok(Complex64::from_polar(p, n as f64 * theta))
}

/// Zonal function `Z^{(k)}(u) = (2k+1)/(4π) P_k(u)`, the reproducing kernel of
/// the degree-`k` harmonics evaluated at `u = ϑ·ϑ'`.
pub fn zonal(k: usize, u: f64) -> Result<f64> {
    Ok((2 * k + 1) as f64 / (4.0 * PI) * legendre_p(k, u)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::assoc_legendre;

    #[test]
    fn constant_mode() {
        let y = spherical_harmonic(0, 0, 1.3, 0.4).unwrap();
        assert!((y.re - (4.0 * PI).sqrt().recip()).abs() < 1e-16 && y.im == 0.0);
    }

    #[test]
    fn table_matches_unnormalized_functions() {
        let u = 0.37;
        let t = normalized_legendre_table(12, u).unwrap();
        for k in 0..=12usize {
            for n in 0..=k {
                let mut ratio = 1.0; // (k-n)!/(k+n)!
                for i in (k - n + 1)..=(k + n) {
                    ratio /= i as f64;
                }
                let norm = ((2 * k + 1) as f64 / (4.0 * PI) * ratio).sqrt();
                let want = norm * assoc_legendre(k, n as i64, u).unwrap();
                assert!((t.get(k, n) - want).abs() <= 1e-13 * want.abs().max(1e-3), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn zonal_examples() {
        for k in 0..20 {
            assert!((zonal(k, 1.0).unwrap() - (2 * k + 1) as f64 / (4.0 * PI)).abs() < 1e-15);
        }
        assert!((zonal(0, -0.3).unwrap() - 1.0 / (4.0 * PI)).abs() < 1e-17);
        assert!((zonal(3, -1.0).unwrap() + 7.0 / (4.0 * PI)).abs() < 1e-15);
        assert!(zonal(2, 1.5).is_err());
    }

    #[test]
    fn out_of_range_order() {
        assert!(spherical_harmonic(2, 3, 0.0, 0.0).is_err());
        assert!(spherical_harmonic(2, -3, 0.0, 0.0).is_err());
    }
}
