
use crate::error::{Error, Result};

/// A point of R³ in the polar form used throughout: radius `r`, azimuth
/// `theta ∈ [0, 2π]`, polar angle `phi ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() {
            return Err(Error::domain("radius", r));
        }
        if !theta.is_finite() {
            return Err(Error::domain("azimuth", theta));
        }
        if !(0.0..=core::f64::consts::PI).contains(&phi) {
            return Err(Error::domain("polar angle", phi));
        }
        Ok(PolarPoint { r, theta, phi })
    }

    pub fn from_cartesian(v: [f64; 3]) -> Self {
        let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if r == 0.0 {
            return PolarPoint { r, theta: 0.0, phi: 0.0 };
        }
        let phi = (v[2] / r).clamp(-1.0, 1.0).acos();
        let mut theta = v[1].atan2(v[0]);
        if theta < 0.0 {
            theta += 2.0 * core::f64::consts::PI;
        }
        PolarPoint { r, theta, phi }
    }

    /// Unit direction `(cos θ sin φ, sin θ sin φ, cos φ)`.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [ct * sp, st * sp, cp]
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let d = self.direction();
        [self.r * d[0], self.r * d[1], self.r * d[2]]
    }

    /// Cosine of the angle between the two directions, clamped to `[-1, 1]`.
    pub fn cos_angle(&self, other: &PolarPoint) -> f64 {
        let a = self.direction();
        let b = other.direction();
        (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0)
    }

    pub fn distance(&self, other: &PolarPoint) -> f64 {
        let a = self.to_cartesian();
        let b = other.to_cartesian();
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}
