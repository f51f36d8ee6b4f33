//! Weighted-supremum scans over finite grids.
//!
//! A scan cannot certify a supremum over all of space and time. Each report
//! therefore carries the maximiser, the grid, the supremum on a refined grid
//! and the truncation diagnostics of the kernels that were summed.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use oscwave_core::transforms::GridSpec;
use oscwave_core::OperatorParams;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod blocks;
mod evolution;
mod kernel_scans;
mod samples;

pub use blocks::{
    verify_bernstein, verify_besov_equivalence, verify_block_interaction, verify_halfwave_decay,
    verify_multiplier_decay,
};
pub use evolution::{
    admissible, verify_strichartz, verify_wave_dispersive, Admissibility, WaveSample,
};
pub use kernel_scans::{
    k_function_report, scan_k_function, verify_heat_gaussian, verify_k_function,
    verify_schrodinger_dispersive, KScan,
};
pub use samples::random_band_limited;

/// Refined and unrefined suprema within this relative distance count as stable.
pub const STABILITY_TOL: f64 = 0.05;

/// Points and times of a scan.
///
/// Times are `t_count` equispaced nodes of `[t_min, t_max]`; the pairs are
/// `x = (0, 0, r₁)` and `y = r₂(√(1−u²), 0, u)` with `r₁ ≤ r₂` taken from
/// `r_count` equispaced radii of `[0, r_max]` and `u` from `u_count`
/// equispaced nodes of `[−1, 1]`. Every kernel here depends on `(x, y)`
/// only through `(r₁, r₂, x·y)` and is symmetric, so this covers all pairs
/// of points with radii on the grid. Rows whose Bessel argument
/// (`r₁r₂/(2 sin t)`, resp. `sinh t`) exceeds `arg_max` are not summed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScanGrid {
    pub eps: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub t_count: usize,
    pub r_max: f64,
    pub r_count: usize,
    pub u_count: usize,
    pub arg_max: f64,
    pub refine: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid::standard()
    }
}

impl ScanGrid {
    /// Times in `[ε, π−ε]` with `ε = 10⁻³`, radii up to 4.
    pub fn standard() -> Self {
        let eps = 1e-3;
        ScanGrid {
            eps,
            t_min: eps,
            t_max: PI - eps,
            t_count: 25,
            r_max: 4.0,
            r_count: 9,
            u_count: 9,
            arg_max: 40.0,
            refine: 2,
        }
    }

    /// Times in `[0.05, 5]`, radii up to 2.
    pub fn heat() -> Self {
        ScanGrid {
            t_min: 0.05,
            t_max: 5.0,
            r_max: 2.0,
            ..ScanGrid::standard()
        }
    }

    /// Times in `[2^{−j}, π−ε]` sampled at spacing about `2^{−j}/4`, radii
    /// up to 2 at spacing `1/4`.
    pub fn halfwave(j: i32) -> Self {
        let base = ScanGrid::standard();
        let t_min = 2f64.powi(-j).min(base.t_max);
        let t_count = (((base.t_max - t_min) * 2f64.powi(j + 2)).ceil() as usize + 1).max(2);
        ScanGrid {
            t_min,
            t_count,
            r_max: 2.0,
            r_count: 9,
            ..base
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps >= 1e-3) || !(self.eps < 0.5) {
            return Err(Error::config(format!(
                "scan eps = {} must lie in [1e-3, 0.5)",
                self.eps
            )));
        }
        if self.t_count < 2 || self.r_count < 2 || self.u_count < 2 {
            return Err(Error::config(
                "scan grids need at least 2 nodes in t, r and u",
            ));
        }
        if self.refine < 2 {
            return Err(Error::config("refinement factor must be at least 2"));
        }
        if !(self.t_min.is_finite() && self.t_max.is_finite() && self.t_min <= self.t_max) {
            return Err(Error::config(format!(
                "empty time range [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        if !(self.r_max > 0.0 && self.r_max.is_finite()) {
            return Err(Error::config(format!(
                "r_max = {} must be positive",
                self.r_max
            )));
        }
        if !(self.arg_max > 0.0) {
            return Err(Error::config(format!(
                "arg_max = {} must be positive",
                self.arg_max
            )));
        }
        Ok(())
    }

    /// Requires `[t_min, t_max] ⊂ [ε, π−ε]`.
    pub(crate) fn require_open_period(&self) -> Result<()> {
        self.validate()?;
        if self.t_min < self.eps || self.t_max > PI - self.eps {
            let bad = if self.t_min < self.eps {
                self.t_min
            } else {
                self.t_max
            };
            return Err(oscwave_core::Error::SingularTime {
                t: bad,
                eps: self.eps,
            }
            .into());
        }
        Ok(())
    }

    /// Nested refinement: every node of `self` is a node of the result.
    pub fn refined(&self) -> Self {
        let f = self.refine;
        ScanGrid {
            t_count: (self.t_count - 1) * f + 1,
            r_count: (self.r_count - 1) * f + 1,
            u_count: (self.u_count - 1) * f + 1,
            ..*self
        }
    }

    pub fn times(&self) -> Vec<f64> {
        linspace(self.t_min, self.t_max, self.t_count)
    }

    pub fn radii(&self) -> Vec<f64> {
        linspace(0.0, self.r_max, self.r_count)
    }

    pub fn cosines(&self) -> Vec<f64> {
        linspace(-1.0, 1.0, self.u_count)
    }

    /// Radius index pairs `(i, j)` with `i ≤ j`, in lexicographic order.
    pub(crate) fn radius_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.r_count)
            .flat_map(|i| (i..self.r_count).map(move |j| (i, j)))
            .collect()
    }
}

/// `n` equispaced nodes including both ends; exact at the ends.
pub(crate) fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let h = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + i as f64 * h })
        .collect()
}

/// Quadrature grid sizes as written to reports and configs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridShape {
    pub n_r: usize,
    pub radius: f64,
    pub n_mu: usize,
    pub n_theta: usize,
}

impl Default for GridShape {
    fn default() -> Self {
        GridSpec::default().into()
    }
}

impl From<GridSpec> for GridShape {
    fn from(g: GridSpec) -> Self {
        GridShape {
            n_r: g.n_r,
            radius: g.radius,
            n_mu: g.n_mu,
            n_theta: g.n_theta,
        }
    }
}

impl GridShape {
    pub fn to_spec(&self) -> Result<GridSpec> {
        Ok(GridSpec::new(
            self.n_r,
            self.radius,
            self.n_mu,
            self.n_theta,
        )?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    pub a: f64,
}

/// Whatever was sampled: a point scan, a quadrature grid, time nodes or a sample count.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportGrid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<GridShape>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_nodes: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

impl ReportGrid {
    pub fn scan(g: &ScanGrid) -> Self {
        ReportGrid {
            scan: Some(*g),
            ..Default::default()
        }
    }
}

/// `[t, x, y]` in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Argmax(pub f64, pub [f64; 3], pub [f64; 3]);

impl Argmax {
    pub fn from_radial(t: f64, r1: f64, r2: f64, u: f64) -> Self {
        let s = (1.0 - u * u).max(0.0).sqrt();
        Argmax(t, [0.0, 0.0, r1], [r2 * s, 0.0, r2 * u])
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TruncationSummary {
    pub k_max: usize,
    pub tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub id: String,
    pub params: ReportParams,
    pub grid: ReportGrid,
    pub sup: f64,
    pub argmax: Option<Argmax>,
    pub refined_sup: f64,
    pub stable: bool,
    pub truncation: TruncationSummary,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
}

impl EstimateReport {
    pub const CSV_HEADER: [&'static str; 14] = [
        "a",
        "sup",
        "refined_sup",
        "stable",
        "t",
        "x1",
        "x2",
        "x3",
        "y1",
        "y2",
        "y3",
        "k_max",
        "tail",
        "degenerate",
    ];

    pub(crate) fn new(
        id: &str,
        params: &OperatorParams,
        grid: ReportGrid,
        sup: f64,
        refined_sup: f64,
        argmax: Option<Argmax>,
        truncation: TruncationSummary,
    ) -> Self {
        EstimateReport {
            id: id.to_owned(),
            params: ReportParams { a: params.a() },
            grid,
            sup,
            argmax,
            refined_sup,
            stable: relative_change(sup, refined_sup) <= STABILITY_TOL,
            truncation,
            details: BTreeMap::new(),
            degenerate: false,
        }
    }

    pub(crate) fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_owned(), value);
        self
    }

    /// Records Lebesgue exponents by their reciprocals `inv_<name>`, so that
    /// `∞` is stored as 0 (JSON has no infinity).
    pub(crate) fn exponents(mut self, exps: &[(&str, f64)]) -> Self {
        for &(name, e) in exps {
            self = self.detail(&format!("inv_{name}"), 1.0 / e);
        }
        self
    }

    /// `|refined − sup| / max(|sup|, |refined|)`, zero when both vanish.
    pub fn relative_change(&self) -> f64 {
        relative_change(self.sup, self.refined_sup)
    }

    pub fn csv_row(&self) -> Vec<f64> {
        let Argmax(t, x, y) = self
            .argmax
            .unwrap_or(Argmax(f64::NAN, [f64::NAN; 3], [f64::NAN; 3]));
        vec![
            self.params.a,
            self.sup,
            self.refined_sup,
            f64::from(u8::from(self.stable)),
            t,
            x[0],
            x[1],
            x[2],
            y[0],
            y[1],
            y[2],
            self.truncation.k_max as f64,
            self.truncation.tail,
            f64::from(u8::from(self.degenerate)),
        ]
    }
}

pub fn relative_change(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Running maximum of a weighted ratio with its location.
///
/// Samples must be offered in increasing grid-index order; a later sample
/// replaces the current best only if strictly larger, so ties resolve to the
/// lexicographically first index.
#[derive(Debug, Clone, Default)]
pub(crate) struct ScanStats {
    pub best: Option<(f64, Argmax)>,
    pub k_max: usize,
    pub tail: f64,
    pub excluded: usize,
    pub excluded_bound: f64,
    pub nan: usize,
}

impl ScanStats {
    pub fn offer(&mut self, value: f64, at: impl FnOnce() -> Argmax) {
        if value.is_nan() {
            self.nan += 1;
            return;
        }
        match self.best {
            Some((b, _)) if !(value > b) => {}
            _ => self.best = Some((value, at())),
        }
    }

    pub fn note_truncation(&mut self, k: usize, tail: f64) {
        self.k_max = self.k_max.max(k);
        self.tail = self.tail.max(tail);
    }

    pub fn exclude(&mut self, count: usize, bound: f64) {
        self.excluded += count;
        self.excluded_bound = self.excluded_bound.max(bound);
    }

    /// Appends `later`, whose samples all come after those of `self`.
    pub fn merge(&mut self, later: ScanStats) {
        if let Some((v, at)) = later.best {
            self.offer(v, || at);
        }
        self.note_truncation(later.k_max, later.tail);
        self.exclude(later.excluded, later.excluded_bound);
        self.nan += later.nan;
    }

    pub fn sup(&self) -> f64 {
        self.best.map_or(0.0, |b| b.0)
    }

    pub fn argmax(&self) -> Option<Argmax> {
        self.best.map(|b| b.1)
    }

    pub fn truncation(&self) -> TruncationSummary {
        TruncationSummary {
            k_max: self.k_max,
            tail: self.tail,
        }
    }
}

/// Runs `job` on every item in parallel and merges the results in item order.
pub(crate) fn scan_ordered<T: Sync>(
    items: &[T],
    job: impl Fn(&T) -> Result<ScanStats> + Sync + Send,
) -> Result<ScanStats> {
    let [s] = scan_ordered_n(items, |it| job(it).map(|s| [s]))?;
    Ok(s)
}

/// [`scan_ordered`] for `N` ratios tracked side by side.
pub(crate) fn scan_ordered_n<T: Sync, const N: usize>(
    items: &[T],
    job: impl Fn(&T) -> Result<[ScanStats; N]> + Sync + Send,
) -> Result<[ScanStats; N]> {
    let parts: Vec<Result<[ScanStats; N]>> = items.par_iter().map(job).collect();
    let mut acc: [ScanStats; N] = std::array::from_fn(|_| ScanStats::default());
    for p in parts {
        for (a, s) in acc.iter_mut().zip(p?) {
            a.merge(s);
        }
    }
    Ok(acc)
}
