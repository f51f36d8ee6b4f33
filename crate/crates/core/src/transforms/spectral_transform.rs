use alloc::sync::Arc;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::grid::{GridFunction, QuadratureGrid};
use crate::error::{Error, Result};
use crate::geometry::PolarPoint;
use crate::specfun::{normalized_legendre_table, NormalizedLegendre};
use crate::spectral::{radial_profiles, ModeIndex, SpectralSet};

/// Expansion coefficients `c_{m,k,n}` aligned with the modes of a [`SpectralSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoefficients {
    set: Arc<SpectralSet>,
    values: Vec<Complex64>,
}

impl SpectralCoefficients {
    pub fn new(set: Arc<SpectralSet>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != set.len() {
            return Err(Error::Invalid { what: "coefficients", reason: "length does not match the mode set" });
        }
        Ok(SpectralCoefficients { set, values })
    }

    pub fn zeros(set: Arc<SpectralSet>) -> Self {
        let n = set.len();
        SpectralCoefficients { set, values: alloc::vec![Complex64::new(0.0, 0.0); n] }
    }

    /// The coefficient vector of a single eigenfunction.
    pub fn single_mode(set: Arc<SpectralSet>, mode: ModeIndex) -> Result<Self> {
        let i = set
            .position(&mode)
            .ok_or(Error::Invalid { what: "mode", reason: "not contained in the spectral set" })?;
        let mut c = Self::zeros(set);
        c.values[i] = Complex64::new(1.0, 0.0);
        Ok(c)
    }

    pub fn set(&self) -> &Arc<SpectralSet> {
        &self.set
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn get(&self, mode: &ModeIndex) -> Option<Complex64> {
        self.set.position(mode).map(|i| self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (ModeIndex, f64, Complex64)> + '_ {
        self.set.modes().iter().enumerate().map(|(i, md)| (*md, self.set.lambda(i), self.values[i]))
    }

    /// `(Σ |c|²)^{1/2}`, the L² norm of the synthesized function.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// `F(H)`: every coefficient multiplied by `F(λ_{m,k})`.
    pub fn apply_multiplier(&self, f: impl Fn(f64) -> Complex64) -> Self {
        let values = self.iter().map(|(_, lam, c)| f(lam) * c).collect();
        SpectralCoefficients { set: self.set.clone(), values }
    }

    /// Real-valued multiplier, the common case.
    pub fn apply_real(&self, f: impl Fn(f64) -> f64) -> Self {
        let values = self.iter().map(|(_, lam, c)| c * f(lam)).collect();
        SpectralCoefficients { set: self.set.clone(), values }
    }

    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.same_set(other)?;
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        Ok(SpectralCoefficients { set: self.set.clone(), values })
    }

    pub(crate) fn same_set(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.set, &other.set) || *self.set == *other.set {
            Ok(())
        } else {
            Err(Error::Invalid { what: "coefficients", reason: "expanded over different mode sets" })
        }
    }

    /// `Σ c_{m,k,n} e_{m,k,n}(x)` at an arbitrary point.
    pub fn evaluate(&self, x: &PolarPoint) -> Result<Complex64> {
        let params = *self.set.params();
        let k_max = self.set.k_max();
        let table = normalized_legendre_table(k_max, x.phi.cos().clamp(-1.0, 1.0))?;
        let m_max = self.set.m_max();
        let mut radial: Vec<Option<Vec<f64>>> = alloc::vec![None; k_max + 1];
        let mut total = Complex64::new(0.0, 0.0);
        for (md, _, c) in self.iter() {
            if c.re == 0.0 && c.im == 0.0 {
                continue;
            }
            if radial[md.k].is_none() {
                radial[md.k] = Some(radial_profiles(m_max, md.k, &params, x.r)?);
            }
            let rv = radial[md.k].as_ref().map_or(0.0, |v| v[md.m]);
            let y = Complex64::from_polar(table.get(md.k, md.n.unsigned_abs() as usize), md.n as f64 * x.theta);
            total += c * y * rv;
        }
        Ok(total)
    }
}

/// Precomputed basis tables for repeated analysis and synthesis of one mode
/// set on one grid. All sums factor through the tensor-product structure:
/// azimuthal Fourier sums, then Legendre sums in `μ`, then radial sums.
#[derive(Debug, Clone)]
pub struct SpectralTransform {
    grid: Arc<QuadratureGrid>,
    set: Arc<SpectralSet>,
    k_max: usize,
    /// `radial[k][m * n_r + i_r] = R_{m,k}(r_i)`
    radial: Vec<Vec<f64>>,
    m_count: Vec<usize>,
    legendre: Vec<NormalizedLegendre>,
    /// `phases[(n + K) * n_theta + i] = e^{inθ_i}`
    phases: Vec<Complex64>,
}

impl SpectralTransform {
    pub fn new(grid: Arc<QuadratureGrid>, set: Arc<SpectralSet>) -> Result<Self> {
        let k_max = set.k_max();
        let spec = *grid.spec();
        let params = *set.params();
        let mut m_count = alloc::vec![0usize; k_max + 1];
        for md in set.modes() {
            m_count[md.k] = m_count[md.k].max(md.m + 1);
        }
        let mut radial = Vec::with_capacity(k_max + 1);
        for (k, &mc) in m_count.iter().enumerate() {
            let mut t = alloc::vec![0.0; mc * spec.n_r];
            if mc > 0 {
                for (ir, &r) in grid.radii().iter().enumerate() {
                    let prof = radial_profiles(mc - 1, k, &params, r)?;
                    for (m, v) in prof.into_iter().enumerate() {
                        t[m * spec.n_r + ir] = v;
                    }
                }
            }
            radial.push(t);
        }
        let legendre = grid.mu().iter().map(|&u| normalized_legendre_table(k_max, u)).collect::<Result<Vec<_>>>()?;
        let width = 2 * k_max + 1;
        let mut phases = Vec::with_capacity(width * spec.n_theta);
        for n in -(k_max as i64)..=(k_max as i64) {
            for th in grid.azimuths() {
                phases.push(Complex64::from_polar(1.0, n as f64 * th));
            }
        }
        Ok(SpectralTransform { grid, set, k_max, radial, m_count, legendre, phases })
    }

    pub fn grid(&self) -> &Arc<QuadratureGrid> {
        &self.grid
    }

    pub fn set(&self) -> &Arc<SpectralSet> {
        &self.set
    }

    fn check_resolution(&self) -> Result<()> {
        let available = self.grid.spec().k_resolved();
        if self.k_max > available {
            return Err(Error::Resolution { needed: self.k_max, available });
        }
        Ok(())
    }

    /// `c_{m,k,n} = ⟨f, e_{m,k,n}⟩` by quadrature.
    pub fn analyze(&self, f: &GridFunction) -> Result<SpectralCoefficients> {
        self.check_resolution()?;
        if **f.grid() != *self.grid {
            return Err(Error::Invalid { what: "analysis", reason: "function lives on a different grid" });
        }
        let spec = *self.grid.spec();
        let (nr, nm, nt) = (spec.n_r, spec.n_mu, spec.n_theta);
        let kk = self.k_max as i64;
        let width = 2 * self.k_max + 1;
        let vals = f.values();
        let wt = self.grid.azimuth_weight();
        // azimuthal: fourier[(n+K) * nr*nm + ir*nm + imu]
        let mut fourier = alloc::vec![Complex64::new(0.0, 0.0); width * nr * nm];
        for ir in 0..nr {
            for imu in 0..nm {
                let row = &vals[self.grid.index(ir, imu, 0)..self.grid.index(ir, imu, 0) + nt];
                for ni in 0..width {
                    let ph = &self.phases[ni * nt..(ni + 1) * nt];
                    let s: Complex64 = row.iter().zip(ph).map(|(v, p)| v * p.conj()).sum();
                    fourier[ni * nr * nm + ir * nm + imu] = s * wt;
                }
            }
        }
        // polar: g[(k, n)][ir]
        let mu_w = self.grid.mu_weights();
        let mut g = alloc::vec![Complex64::new(0.0, 0.0); (self.k_max + 1) * width * nr];
        for k in 0..=self.k_max {
            if self.m_count[k] == 0 {
                continue;
            }
            for n in -(k as i64)..=(k as i64) {
                let ni = (n + kk) as usize;
                let an = n.unsigned_abs() as usize;
                let dst = &mut g[(k * width + ni) * nr..(k * width + ni + 1) * nr];
                for (ir, d) in dst.iter_mut().enumerate() {
                    let src = &fourier[ni * nr * nm + ir * nm..ni * nr * nm + ir * nm + nm];
                    *d = src
                        .iter()
                        .enumerate()
                        .map(|(imu, v)| v * (mu_w[imu] * self.legendre[imu].get(k, an)))
                        .sum();
                }
            }
        }
        // radial
        let wr = self.grid.radial_weights();
        let values = self
            .set
            .modes()
            .iter()
            .map(|md| {
                let ni = (md.n + kk) as usize;
                let gk = &g[(md.k * width + ni) * nr..(md.k * width + ni + 1) * nr];
                let rk = &self.radial[md.k][md.m * nr..(md.m + 1) * nr];
                gk.iter().zip(rk).zip(wr).map(|((gv, r), w)| gv * (r * w)).sum()
            })
            .collect();
        SpectralCoefficients::new(self.set.clone(), values)
    }

    /// `Σ c_{m,k,n} e_{m,k,n}` sampled at the grid nodes.
    pub fn synthesize(&self, c: &SpectralCoefficients) -> Result<GridFunction> {
        if *c.set != *self.set {
            return Err(Error::Invalid { what: "synthesis", reason: "coefficients use a different mode set" });
        }
        let spec = *self.grid.spec();
        let (nr, nm, nt) = (spec.n_r, spec.n_mu, spec.n_theta);
        let kk = self.k_max as i64;
        let width = 2 * self.k_max + 1;
        let mut g = alloc::vec![Complex64::new(0.0, 0.0); (self.k_max + 1) * width * nr];
        for (md, _, cv) in c.iter() {
            if cv.re == 0.0 && cv.im == 0.0 {
                continue;
            }
            let ni = (md.n + kk) as usize;
            let dst = &mut g[(md.k * width + ni) * nr..(md.k * width + ni + 1) * nr];
            let rk = &self.radial[md.k][md.m * nr..(md.m + 1) * nr];
            for (d, r) in dst.iter_mut().zip(rk) {
                *d += cv * r;
            }
        }
        let mut fourier = alloc::vec![Complex64::new(0.0, 0.0); width * nr * nm];
        for ni in 0..width {
            let n = ni as i64 - kk;
            let an = n.unsigned_abs() as usize;
            for k in an..=self.k_max {
                let gk = &g[(k * width + ni) * nr..(k * width + ni + 1) * nr];
                if gk.iter().all(|v| v.re == 0.0 && v.im == 0.0) {
                    continue;
                }
                for (ir, gv) in gk.iter().enumerate() {
                    for imu in 0..nm {
                        fourier[ni * nr * nm + ir * nm + imu] += gv * self.legendre[imu].get(k, an);
                    }
                }
            }
        }
        let mut values = alloc::vec![Complex64::new(0.0, 0.0); nr * nm * nt];
        for ir in 0..nr {
            for imu in 0..nm {
                let base = self.grid.index(ir, imu, 0);
                let out = &mut values[base..base + nt];
                for ni in 0..width {
                    let fv = fourier[ni * nr * nm + ir * nm + imu];
                    if fv.re == 0.0 && fv.im == 0.0 {
                        continue;
                    }
                    let ph = &self.phases[ni * nt..(ni + 1) * nt];
                    for (o, p) in out.iter_mut().zip(ph) {
                        *o += fv * p;
                    }
                }
            }
        }
        GridFunction::new(self.grid.clone(), values)
    }

    /// `F(H) f` for a grid function: analyze, multiply, synthesize.
    pub fn apply_multiplier(&self, f: &GridFunction, mult: impl Fn(f64) -> Complex64) -> Result<GridFunction> {
        self.synthesize(&self.analyze(f)?.apply_multiplier(mult))
    }
}

/// One-shot analysis; builds a [`SpectralTransform`] internally.
pub fn analyze(f: &GridFunction, set: Arc<SpectralSet>) -> Result<SpectralCoefficients> {
    SpectralTransform::new(f.grid().clone(), set)?.analyze(f)
}

/// One-shot synthesis on `grid`.
pub fn synthesize(c: &SpectralCoefficients, grid: Arc<QuadratureGrid>) -> Result<GridFunction> {
    SpectralTransform::new(grid, c.set().clone())?.synthesize(c)
}

/// `F(H) f`, with `f` band-limited to `set`.
pub fn apply_multiplier(
    mult: impl Fn(f64) -> Complex64,
    f: &GridFunction,
    set: Arc<SpectralSet>,
) -> Result<GridFunction> {
    SpectralTransform::new(f.grid().clone(), set)?.apply_multiplier(f, mult)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{eigenfunction, OperatorParams};
    use crate::transforms::GridSpec;

    fn setup(a: f64, lmax: f64, spec: GridSpec) -> SpectralTransform {
        let set = Arc::new(SpectralSet::new(OperatorParams::new(a).unwrap(), lmax).unwrap());
        SpectralTransform::new(QuadratureGrid::shared(spec).unwrap(), set).unwrap()
    }

    #[test]
    fn synthesize_single_mode_is_eigenfunction() {
        let tr = setup(0.7, 8.0, GridSpec::new(24, 12.0, 12, 24).unwrap());
        let md = ModeIndex::new(1, 2, -1).unwrap();
        let c = SpectralCoefficients::single_mode(tr.set().clone(), md).unwrap();
        let f = tr.synthesize(&c).unwrap();
        for i in (0..f.values().len()).step_by(97) {
            let x = tr.grid().point(i);
            let e = eigenfunction(md, tr.set().params(), &x).unwrap();
            assert!((f.values()[i] - e).norm() < 1e-13);
            assert!((c.evaluate(&x).unwrap() - e).norm() < 1e-13);
        }
    }

    #[test]
    fn round_trip_on_band_limited_data() {
        let tr = setup(1.0, 9.0, GridSpec::new(64, 12.0, 16, 32).unwrap());
        let vals = (0..tr.set().len()).map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos())).collect();
        let c = SpectralCoefficients::new(tr.set().clone(), vals).unwrap();
        let back = tr.analyze(&tr.synthesize(&c).unwrap()).unwrap();
        for (x, y) in c.values().iter().zip(back.values()) {
            assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn under_resolved_grid_is_rejected() {
        let tr = setup(0.0, 14.0, GridSpec::new(16, 12.0, 8, 16).unwrap());
        let f = GridFunction::zeros(tr.grid().clone());
        assert!(matches!(tr.analyze(&f), Err(Error::Resolution { .. })));
    }
}
