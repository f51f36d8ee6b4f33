//! Discrete spectrum of `H = -Δ + a/|x|² + |x|²/4`.
//!
//! With `β_k = ((k+1/2)² + a)^{1/2}` and `α_k = 1/2 - β_k`, the eigenvalues are
//! `λ_{m,k} = 2m + 1 + β_k`, each carrying the `2k+1` angular orders `n`, and
//! the normalized eigenfunctions separate as `R_{m,k}(r) Y_n^k(θ, φ)` with
//!
//! ```text
//! R_{m,k}(r) = (m! / (2^{β_k} Γ(m+1+β_k)))^{1/2} r^{-α_k} e^{-r²/4} L_m^{β_k}(r²/2).
//! ```

use alloc::vec::Vec;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::PolarPoint;
use crate::specfun::{laguerre_sequence, log_gamma, spherical_harmonic};

/// Coupling of the inverse-square term. The oscillator strength is fixed to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorParams {
    a: f64,
}

impl OperatorParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::domain("inverse-square coupling a", a));
        }
        Ok(OperatorParams { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `β_k = √((k+1/2)² + a)`; exactly `k + 1/2` when `a = 0`.
    pub fn beta(&self, k: usize) -> f64 {
        let h = k as f64 + 0.5;
        if self.a == 0.0 {
            h
        } else {
            (h * h + self.a).sqrt()
        }
    }

    /// `α_k = 1/2 - β_k`.
    pub fn alpha(&self, k: usize) -> f64 {
        0.5 - self.beta(k)
    }

    /// `λ_{m,k} = 2m + 1 + β_k`.
    pub fn eigenvalue(&self, m: usize, k: usize) -> f64 {
        2.0 * m as f64 + 1.0 + self.beta(k)
    }

    /// Bottom of the spectrum, `λ_{0,0} = 1 + √(1/4 + a)`.
    pub fn ground_energy(&self) -> f64 {
        self.eigenvalue(0, 0)
    }
}

pub fn beta(k: usize, params: &OperatorParams) -> f64 {
    params.beta(k)
}

pub fn eigenvalue(m: usize, k: usize, params: &OperatorParams) -> f64 {
    params.eigenvalue(m, k)
}

/// `(m, k, n)` label of one eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeIndex {
    pub m: usize,
    pub k: usize,
    pub n: i64,
}

impl ModeIndex {
    pub fn new(m: usize, k: usize, n: i64) -> Result<Self> {
        if n.unsigned_abs() as usize > k {
            return Err(Error::Invalid { what: "mode index", reason: "|n| must not exceed k" });
        }
        Ok(ModeIndex { m, k, n })
    }
}

/// All modes with eigenvalue in `[lambda_min, lambda_max]`, ordered by
/// `(λ, k, n)`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSet {
    params: OperatorParams,
    lambda_min: f64,
    lambda_max: f64,
    modes: Vec<ModeIndex>,
}

impl SpectralSet {
    /// Every mode with `λ ≤ lambda_max`.
    pub fn new(params: OperatorParams, lambda_max: f64) -> Result<Self> {
        if !(lambda_max > 0.0) || !lambda_max.is_finite() {
            return Err(Error::domain("lambda_max", lambda_max));
        }
        Ok(Self::enumerate(params, 0.0, lambda_max))
    }

    /// Builds a set from explicit modes, sorted into canonical order and deduplicated.
    pub fn from_modes(params: OperatorParams, mut modes: Vec<ModeIndex>) -> Self {
        sort_modes(&params, &mut modes);
        modes.dedup();
        let lambda_min = modes.first().map_or(0.0, |md| params.eigenvalue(md.m, md.k));
        let lambda_max = modes.last().map_or(0.0, |md| params.eigenvalue(md.m, md.k));
        SpectralSet { params, lambda_min, lambda_max, modes }
    }

    fn enumerate(params: OperatorParams, lo: f64, hi: f64) -> Self {
        let mut modes = Vec::new();
        let mut k = 0usize;
        while params.eigenvalue(0, k) <= hi {
            let mut m = 0usize;
            loop {
                let lam = params.eigenvalue(m, k);
                if lam > hi {
                    break;
                }
                if lam >= lo {
                    let kk = k as i64;
                    modes.extend((-kk..=kk).map(|n| ModeIndex { m, k, n }));
                }
                m += 1;
            }
            k += 1;
        }
        sort_modes(&params, &mut modes);
        SpectralSet { params, lambda_min: lo, lambda_max: hi, modes }
    }

    pub fn params(&self) -> &OperatorParams {
        &self.params
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn modes(&self) -> &[ModeIndex] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn lambda(&self, i: usize) -> f64 {
        let md = self.modes[i];
        self.params.eigenvalue(md.m, md.k)
    }

    pub fn k_max(&self) -> usize {
        self.modes.iter().map(|md| md.k).max().unwrap_or(0)
    }

    pub fn m_max(&self) -> usize {
        self.modes.iter().map(|md| md.m).max().unwrap_or(0)
    }

    pub fn position(&self, mode: &ModeIndex) -> Option<usize> {
        self.modes.iter().position(|md| md == mode)
    }
}

fn sort_modes(params: &OperatorParams, modes: &mut [ModeIndex]) {
    modes.sort_by(|x, y| {
        params
            .eigenvalue(x.m, x.k)
            .total_cmp(&params.eigenvalue(y.m, y.k))
            .then(x.k.cmp(&y.k))
            .then(x.n.cmp(&y.n))
            .then(x.m.cmp(&y.m))
    });
}

/// Modes with `lo ≤ λ_{m,k} ≤ hi`. An empty window is a valid result.
pub fn modes_in_window(lo: f64, hi: f64, params: &OperatorParams) -> Result<SpectralSet> {
    if !(lo >= 0.0) || !lo.is_finite() {
        return Err(Error::domain("window lower edge", lo));
    }
    if !(hi > lo) || !hi.is_finite() {
        return Err(Error::domain("window upper edge", hi));
    }
    Ok(SpectralSet::enumerate(*params, lo, hi))
}

fn log_radial_norm(m: usize, beta: f64) -> Result<f64> {
    Ok(0.5 * (log_gamma(m as f64 + 1.0)? - beta * core::f64::consts::LN_2 - log_gamma(m as f64 + 1.0 + beta)?))
}

/// `r^{β-1/2}` with the `r = 0` limit for `β ≥ 1/2`.
fn origin_power(beta: f64, r: f64) -> f64 {
    let p = beta - 0.5;
    if p == 0.0 {
        1.0
    } else if r == 0.0 {
        0.0
    } else {
        (p * r.ln()).exp()
    }
}

/// Radial profile `R_{m,k}(r)`, continuous at `r = 0`.
pub fn radial_eigenfunction(m: usize, k: usize, params: &OperatorParams, r: f64) -> Result<f64> {
    Ok(radial_profiles(m, k, params, r)?[m])
}

/// `[R_{0,k}(r), …, R_{m_max,k}(r)]` from a single Laguerre recurrence.
pub fn radial_profiles(m_max: usize, k: usize, params: &OperatorParams, r: f64) -> Result<Vec<f64>> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain("radius", r));
    }
    let beta = params.beta(k);
    let lag = laguerre_sequence(m_max, beta, 0.5 * r * r)?;
    let envelope = origin_power(beta, r) * (-0.25 * r * r).exp();
    // m!/Γ(m+1+β) updated multiplicatively: ratio_m = ratio_{m-1} · m/(m+β)
    let mut log_norm = log_radial_norm(0, beta)?;
    let mut out = Vec::with_capacity(m_max + 1);
    for (m, l) in lag.into_iter().enumerate() {
        if m > 0 {
            log_norm += 0.5 * (m as f64 / (m as f64 + beta)).ln();
        }
        out.push(log_norm.exp() * envelope * l);
    }
    Ok(out)
}

/// `e_{m,k,n}(x) = R_{m,k}(r) Y_n^k(θ, φ)`.
pub fn eigenfunction(mode: ModeIndex, params: &OperatorParams, x: &PolarPoint) -> Result<Complex64> {
    let r = radial_eigenfunction(mode.m, mode.k, params, x.r)?;
    Ok(spherical_harmonic(mode.k, mode.n, x.theta, x.phi)? * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn beta_examples() {
        let p0 = OperatorParams::new(0.0).unwrap();
        for k in 0..50 {
            assert_eq!(p0.beta(k), k as f64 + 0.5);
        }
        let p2 = OperatorParams::new(2.0).unwrap();
        assert!((p2.beta(0) - 1.5).abs() < 1e-15);
        for &a in &[0.0, 0.5, 3.0] {
            let p = OperatorParams::new(a).unwrap();
            for k in 0..=100 {
                assert!((p.alpha(k) + p.beta(k) - 0.5).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn rejects_negative_coupling() {
        assert!(OperatorParams::new(-0.1).is_err());
        assert!(OperatorParams::new(f64::NAN).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let p0 = OperatorParams::new(0.0).unwrap();
        assert_eq!(p0.eigenvalue(0, 0), 1.5);
        let p2 = OperatorParams::new(2.0).unwrap();
        assert!((p2.eigenvalue(1, 0) - 4.5).abs() < 1e-15);
        let p = OperatorParams::new(0.7).unwrap();
        for m in 0..10 {
            for k in 0..10 {
                assert!(p.eigenvalue(m + 1, k) > p.eigenvalue(m, k));
                assert!(p.eigenvalue(m, k + 1) > p.eigenvalue(m, k));
                assert!(p.eigenvalue(m, k) >= p.ground_energy());
            }
        }
    }

    #[test]
    fn window_examples() {
        let p0 = OperatorParams::new(0.0).unwrap();
        assert!(modes_in_window(0.0, 1.0, &p0).unwrap().is_empty());
        let s = modes_in_window(0.0, 1.6, &p0).unwrap();
        assert_eq!(s.modes(), &[ModeIndex { m: 0, k: 0, n: 0 }]);
        let s = modes_in_window(0.0, 3.6, &p0).unwrap();
        let want = [
            ModeIndex { m: 0, k: 0, n: 0 },
            ModeIndex { m: 0, k: 1, n: -1 },
            ModeIndex { m: 0, k: 1, n: 0 },
            ModeIndex { m: 0, k: 1, n: 1 },
            ModeIndex { m: 1, k: 0, n: 0 },
            ModeIndex { m: 0, k: 2, n: -2 },
            ModeIndex { m: 0, k: 2, n: -1 },
            ModeIndex { m: 0, k: 2, n: 0 },
            ModeIndex { m: 0, k: 2, n: 1 },
            ModeIndex { m: 0, k: 2, n: 2 },
        ];
        assert_eq!(s.modes(), &want);
        assert!(modes_in_window(2.0, 1.0, &p0).is_err());
    }

    #[test]
    fn ground_state_is_gaussian_when_a_vanishes() {
        let p0 = OperatorParams::new(0.0).unwrap();
        // ∫ c² e^{-r²/2} r² dr = 1  ⇒  c² = (2/π)^{1/2}
        let c = (2.0 / PI).sqrt().sqrt();
        for i in 0..40 {
            let r = 0.1 * i as f64;
            let got = radial_eigenfunction(0, 0, &p0, r).unwrap();
            assert!((got - c * (-r * r / 4.0).exp()).abs() < 1e-15);
        }
    }

    #[test]
    fn origin_limit() {
        let p0 = OperatorParams::new(0.0).unwrap();
        assert!(radial_eigenfunction(0, 0, &p0, 0.0).unwrap() > 0.0);
        assert_eq!(radial_eigenfunction(0, 1, &p0, 0.0).unwrap(), 0.0);
        let p1 = OperatorParams::new(1.0).unwrap();
        assert_eq!(radial_eigenfunction(2, 0, &p1, 0.0).unwrap(), 0.0);
        assert!(radial_eigenfunction(0, 0, &p0, -1.0).is_err());
    }

    #[test]
    fn constant_angular_factor_for_ground_mode() {
        let p = OperatorParams::new(1.0).unwrap();
        let x = PolarPoint::new(0.8, 2.0, 1.0).unwrap();
        let e = eigenfunction(ModeIndex::new(0, 0, 0).unwrap(), &p, &x).unwrap();
        let r = radial_eigenfunction(0, 0, &p, 0.8).unwrap();
        assert!((e.re - r / (4.0 * PI).sqrt()).abs() < 1e-16 && e.im == 0.0 && e.re > 0.0);
    }
}
