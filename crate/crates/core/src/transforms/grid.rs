use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::quadrature::{gauss_legendre, gauss_legendre_interval};
use crate::error::{Error, Result};
use crate::geometry::PolarPoint;

/// Sizes of a tensor-product quadrature grid on the ball of radius `radius`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n_r: usize,
    pub radius: f64,
    pub n_mu: usize,
    pub n_theta: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n_r: 160, radius: 12.0, n_mu: 24, n_theta: 48 }
    }
}

impl GridSpec {
    /// Validates the sizes; the radius must make `e^{-R²/4}` negligible (< 1e-15).
    pub fn new(n_r: usize, radius: f64, n_mu: usize, n_theta: usize) -> Result<Self> {
        if n_r < 2 || n_mu < 2 || n_theta < 2 {
            return Err(Error::Invalid { what: "grid size", reason: "every direction needs at least 2 nodes" });
        }
        if !radius.is_finite() || !((-0.25 * radius * radius).exp() < 1e-15) {
            return Err(Error::domain("grid radius", radius));
        }
        Ok(GridSpec { n_r, radius, n_mu, n_theta })
    }

    /// Grid with `n_mu` polar nodes and twice as many azimuthal ones.
    pub fn with_angular(n_r: usize, radius: f64, n_mu: usize) -> Result<Self> {
        Self::new(n_r, radius, n_mu, 2 * n_mu)
    }

    /// Highest angular degree whose products are integrated exactly.
    pub fn k_resolved(&self) -> usize {
        let by_mu = self.n_mu.saturating_sub(2) / 2;
        let by_theta = self.n_theta.saturating_sub(1) / 2;
        by_mu.min(by_theta)
    }

    /// Every node count doubled.
    pub fn refined(&self) -> Self {
        GridSpec { n_r: 2 * self.n_r, radius: self.radius, n_mu: 2 * self.n_mu, n_theta: 2 * self.n_theta }
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_mu * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Gauss–Legendre in `r` (weight `r²` folded in) and in `μ = cos φ`, uniform
/// trapezoid in the azimuth. Node `(i_r, i_μ, i_θ)` is stored at
/// `(i_r · n_mu + i_μ) · n_theta + i_θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    spec: GridSpec,
    r: Vec<f64>,
    r_weights: Vec<f64>,
    mu: Vec<f64>,
    mu_weights: Vec<f64>,
    theta: Vec<f64>,
    theta_weight: f64,
}

impl QuadratureGrid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        let spec = GridSpec::new(spec.n_r, spec.radius, spec.n_mu, spec.n_theta)?;
        let (r, wr) = gauss_legendre_interval(spec.n_r, 0.0, spec.radius)?;
        let r_weights = r.iter().zip(&wr).map(|(x, w)| w * x * x).collect();
        let (mu, mu_weights) = gauss_legendre(spec.n_mu)?;
        let step = 2.0 * PI / spec.n_theta as f64;
        let theta = (0..spec.n_theta).map(|i| i as f64 * step).collect();
        Ok(QuadratureGrid { spec, r, r_weights, mu, mu_weights, theta, theta_weight: step })
    }

    pub fn shared(spec: GridSpec) -> Result<Arc<Self>> {
        Ok(Arc::new(Self::new(spec)?))
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.spec.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spec.is_empty()
    }

    pub fn radii(&self) -> &[f64] {
        &self.r
    }

    /// Radial weights including the `r²` Jacobian.
    pub fn radial_weights(&self) -> &[f64] {
        &self.r_weights
    }

    pub fn mu(&self) -> &[f64] {
        &self.mu
    }

    pub fn mu_weights(&self) -> &[f64] {
        &self.mu_weights
    }

    pub fn azimuths(&self) -> &[f64] {
        &self.theta
    }

    pub fn azimuth_weight(&self) -> f64 {
        self.theta_weight
    }

    #[inline]
    pub fn index(&self, ir: usize, imu: usize, itheta: usize) -> usize {
        (ir * self.spec.n_mu + imu) * self.spec.n_theta + itheta
    }

    /// Inverse of [`QuadratureGrid::index`].
    pub fn split_index(&self, idx: usize) -> (usize, usize, usize) {
        let it = idx % self.spec.n_theta;
        let rest = idx / self.spec.n_theta;
        (rest / self.spec.n_mu, rest % self.spec.n_mu, it)
    }

    pub fn point(&self, idx: usize) -> PolarPoint {
        let (ir, imu, it) = self.split_index(idx);
        PolarPoint { r: self.r[ir], theta: self.theta[it], phi: self.mu[imu].clamp(-1.0, 1.0).acos() }
    }

    pub fn weight(&self, idx: usize) -> f64 {
        let (ir, imu, _) = self.split_index(idx);
        self.r_weights[ir] * self.mu_weights[imu] * self.theta_weight
    }

    pub fn points(&self) -> impl Iterator<Item = PolarPoint> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// `Σ w_i g(x_i)` over all nodes.
    pub fn integrate(&self, g: impl Fn(&PolarPoint) -> f64) -> f64 {
        (0..self.len()).map(|i| self.weight(i) * g(&self.point(i))).sum()
    }

    /// Integral over the unit sphere of `g(θ, φ)` with the angular rule alone.
    pub fn integrate_sphere(&self, g: impl Fn(f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for (mu, wm) in self.mu.iter().zip(&self.mu_weights) {
            let phi = mu.clamp(-1.0, 1.0).acos();
            for th in &self.theta {
                total += wm * self.theta_weight * g(*th, phi);
            }
        }
        total
    }
}

/// Complex samples of a function at the nodes of a [`QuadratureGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Arc<QuadratureGrid>,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Arc<QuadratureGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Invalid { what: "grid function", reason: "value count does not match the grid" });
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Invalid { what: "grid function", reason: "non-finite value" });
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: Arc<QuadratureGrid>) -> Self {
        let n = grid.len();
        GridFunction { grid, values: alloc::vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn from_fn(grid: Arc<QuadratureGrid>, f: impl Fn(&PolarPoint) -> Complex64) -> Result<Self> {
        let values = (0..grid.len()).map(|i| f(&grid.point(i))).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `(Σ w |f|^p)^{1/p}`; `p = ∞` gives the largest node modulus.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        super::norms::check_exponent("Lebesgue exponent", p)?;
        if p == f64::INFINITY {
            return Ok(self.values.iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
        let mut total = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let m = v.norm();
            if m > 0.0 {
                total += self.grid.weight(i) * if p == 2.0 { m * m } else { m.powf(p) };
            }
        }
        Ok(total.powf(1.0 / p))
    }

    pub fn l2_norm(&self) -> f64 {
        self.lp_norm(2.0).unwrap_or(f64::NAN)
    }

    /// `⟨f, g⟩ = Σ w f conj(g)`.
    pub fn inner(&self, other: &GridFunction) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::Invalid { what: "inner product", reason: "functions live on different grids" });
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .enumerate()
            .map(|(i, (a, b))| a * b.conj() * self.grid.weight(i))
            .sum())
    }

    /// Node-wise difference.
    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        if self.grid != other.grid {
            return Err(Error::Invalid { what: "difference", reason: "functions live on different grids" });
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(GridFunction { grid: self.grid.clone(), values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_area_and_ball_volume() {
        let g = QuadratureGrid::new(GridSpec::default()).unwrap();
        assert!((g.integrate_sphere(|_, _| 1.0) - 4.0 * PI).abs() < 1e-12);
        let gauss = g.integrate(|x| (-x.r * x.r).exp());
        assert!((gauss - PI.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn index_round_trip() {
        let g = QuadratureGrid::new(GridSpec::new(5, 12.0, 4, 8).unwrap()).unwrap();
        for i in 0..g.len() {
            let (a, b, c) = g.split_index(i);
            assert_eq!(g.index(a, b, c), i);
        }
    }

    #[test]
    fn radius_must_suppress_gaussian_tail() {
        assert!(GridSpec::new(10, 8.0, 4, 8).is_err());
        assert_eq!(GridSpec::default().k_resolved(), 11);
    }
}
