use alloc::vec::Vec;

use num_complex::Complex64;

use super::partition::DyadicPartition;
use crate::error::Result;
use crate::geometry::PolarPoint;
use crate::kernels::spectral_kernel_radial;
use crate::specfun::legendre_sequence;
use crate::spectral::{radial_profiles, OperatorParams};

/// Kernel of `ψ_j(√H)`: the finite sum `Σ ψ_j(√λ) e(x) conj(e(y))` over the
/// eigenvalues in `[4^{j-1}, 4^{j+1}]`, evaluated through zonal functions.
pub fn lp_block_kernel(
    j: i32,
    params: &OperatorParams,
    partition: &DyadicPartition,
    x: &PolarPoint,
    y: &PolarPoint,
) -> Result<Complex64> {
    let (lo, hi) = DyadicPartition::eigenvalue_window(j);
    spectral_kernel_radial(
        params,
        lo,
        hi,
        |lam| Complex64::new(partition.psi_j(j, lam.sqrt()), 0.0),
        x.r,
        y.r,
        x.cos_angle(y),
    )
}

/// Kernel of `ψ_j(√H) e^{it√H}`.
pub fn halfwave_block_kernel(
    j: i32,
    t: f64,
    params: &OperatorParams,
    partition: &DyadicPartition,
    x: &PolarPoint,
    y: &PolarPoint,
) -> Result<Complex64> {
    let (lo, hi) = DyadicPartition::eigenvalue_window(j);
    spectral_kernel_radial(
        params,
        lo,
        hi,
        |lam| {
            let w = lam.sqrt();
            Complex64::from_polar(partition.psi_j(j, w), t * w)
        },
        x.r,
        y.r,
        x.cos_angle(y),
    )
}

/// The block kernel at one fixed pair `(x, y)`, reduced to its frequencies
/// `ω = √λ` and real weights, so that `ψ_j(√H) e^{it√H}(x, y) = Σ w e^{itω}`
/// can be evaluated for many `t` cheaply.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockKernelTable {
    freqs: Vec<f64>,
    weights: Vec<f64>,
}

impl BlockKernelTable {
    pub fn new(j: i32, params: &OperatorParams, partition: &DyadicPartition, r1: f64, r2: f64, u: f64) -> Result<Self> {
        let (lo, hi) = DyadicPartition::eigenvalue_window(j);
        let mut freqs = Vec::new();
        let mut weights = Vec::new();
        let mut k_top = 0usize;
        while params.eigenvalue(0, k_top + 1) <= hi {
            k_top += 1;
        }
        if params.eigenvalue(0, 0) > hi {
            return Ok(BlockKernelTable { freqs, weights });
        }
        let leg = legendre_sequence(k_top, u.clamp(-1.0, 1.0))?;
        for (k, pk) in leg.into_iter().enumerate() {
            let lam0 = params.eigenvalue(0, k);
            let m_top = ((hi - lam0) / 2.0).floor() as usize;
            let zk = (2 * k + 1) as f64 / (4.0 * core::f64::consts::PI) * pk;
            let p1 = radial_profiles(m_top, k, params, r1)?;
            let p2 = radial_profiles(m_top, k, params, r2)?;
            for m in 0..=m_top {
                let lam = params.eigenvalue(m, k);
                if lam < lo || lam > hi {
                    continue;
                }
                let w = lam.sqrt();
                let psi = partition.psi_j(j, w);
                if psi != 0.0 {
                    freqs.push(w);
                    weights.push(psi * p1[m] * p2[m] * zk);
                }
            }
        }
        Ok(BlockKernelTable { freqs, weights })
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn at(&self, t: f64) -> Complex64 {
        self.freqs.iter().zip(&self.weights).map(|(w, c)| Complex64::from_polar(*c, t * w)).sum()
    }

    /// Values at `t0 + i·dt`, `i < count`, by rotating each phase by `e^{iω dt}`.
    /// The phases are re-seeded exactly every 64 steps to stop drift.
    pub fn on_uniform_grid(&self, t0: f64, dt: f64, count: usize) -> Vec<Complex64> {
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); count];
        let steps: Vec<Complex64> = self.freqs.iter().map(|w| Complex64::from_polar(1.0, w * dt)).collect();
        let mut cur: Vec<Complex64> = Vec::with_capacity(self.freqs.len());
        for (i, o) in out.iter_mut().enumerate() {
            if i % 64 == 0 {
                let t = t0 + i as f64 * dt;
                cur.clear();
                cur.extend(self.freqs.iter().zip(&self.weights).map(|(w, c)| Complex64::from_polar(*c, t * w)));
            } else {
                for (c, s) in cur.iter_mut().zip(&steps) {
                    *c *= s;
                }
            }
            *o = cur.iter().sum();
        }
        out
    }
}

/// The half-wave block kernel at fixed radii `(r₁, r₂)`:
///
/// ```text
/// ψ_j(√H) e^{it√H}(x, y) = Σ_k c_k(t) Z^{(k)}(u),   c_k(t) = Σ_m ψ_j(ω) R_{m,k}(r₁) R_{m,k}(r₂) e^{itω}
/// ```
///
/// with `ω = √λ_{m,k}`. Scans over many angles and times share one row.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockKernelRow {
    degree: Vec<usize>,
    freqs: Vec<f64>,
    weights: Vec<f64>,
    k_max: usize,
}

impl BlockKernelRow {
    pub fn new(j: i32, params: &OperatorParams, partition: &DyadicPartition, r1: f64, r2: f64) -> Result<Self> {
        let (lo, hi) = DyadicPartition::eigenvalue_window(j);
        let mut row = BlockKernelRow { degree: Vec::new(), freqs: Vec::new(), weights: Vec::new(), k_max: 0 };
        if params.eigenvalue(0, 0) > hi {
            return Ok(row);
        }
        while params.eigenvalue(0, row.k_max + 1) <= hi {
            row.k_max += 1;
        }
        for k in 0..=row.k_max {
            let m_top = ((hi - params.eigenvalue(0, k)) / 2.0).floor() as usize;
            let p1 = radial_profiles(m_top, k, params, r1)?;
            let p2 = radial_profiles(m_top, k, params, r2)?;
            for m in 0..=m_top {
                let lam = params.eigenvalue(m, k);
                if lam < lo {
                    continue;
                }
                let w = lam.sqrt();
                let psi = partition.psi_j(j, w);
                if psi != 0.0 {
                    row.degree.push(k);
                    row.freqs.push(w);
                    row.weights.push(psi * p1[m] * p2[m]);
                }
            }
        }
        Ok(row)
    }

    /// Highest degree `k` present; `c_k` has `k_max + 1` entries.
    pub fn k_max(&self) -> usize {
        self.k_max
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn coefficients(&self, t: f64) -> Vec<Complex64> {
        let mut c = alloc::vec![Complex64::new(0.0, 0.0); self.k_max + 1];
        for ((&k, &w), &v) in self.degree.iter().zip(&self.freqs).zip(&self.weights) {
            c[k] += Complex64::from_polar(v, t * w);
        }
        c
    }

    /// `c_k(t0 + i·dt)` for `i < count`, by phase rotation re-seeded every 64 steps.
    pub fn coefficients_on_uniform_grid(&self, t0: f64, dt: f64, count: usize) -> Vec<Vec<Complex64>> {
        let steps: Vec<Complex64> = self.freqs.iter().map(|w| Complex64::from_polar(1.0, w * dt)).collect();
        let mut cur: Vec<Complex64> = Vec::with_capacity(self.freqs.len());
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            if i % 64 == 0 {
                let t = t0 + i as f64 * dt;
                cur.clear();
                cur.extend(self.freqs.iter().zip(&self.weights).map(|(w, v)| Complex64::from_polar(*v, t * w)));
            } else {
                for (c, s) in cur.iter_mut().zip(&steps) {
                    *c *= s;
                }
            }
            let mut c = alloc::vec![Complex64::new(0.0, 0.0); self.k_max + 1];
            for (&k, v) in self.degree.iter().zip(&cur) {
                c[k] += v;
            }
            out.push(c);
        }
        out
    }
}
