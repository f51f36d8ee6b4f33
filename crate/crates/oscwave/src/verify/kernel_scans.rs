use oscwave_core::kernels::{
    heat_row, k_function_row, mehler_heat, schrodinger_row, zonal_table, KernelValue,
    TruncationPolicy, MEHLER_CONSTANT,
};
use oscwave_core::OperatorParams;
use rayon::prelude::*;

use super::{
    linspace, scan_ordered, Argmax, EstimateReport, ReportGrid, ScanGrid, ScanStats,
    TruncationSummary,
};
use crate::error::{Error, Result};

/// Heat values whose error estimate exceeds this fraction of the value are
/// treated as unresolved and replaced by the free bound.
const HEAT_REL_ACCURACY: f64 = 1e-6;

fn zonal_tables(k_max: usize, us: &[f64]) -> Result<Vec<Vec<f64>>> {
    us.iter().map(|&u| Ok(zonal_table(k_max, u)?)).collect()
}

fn check_row(truncated: bool, what: &'static str, policy: &TruncationPolicy) -> Result<()> {
    if truncated {
        return Err(Error::Truncated {
            what,
            cap: policy.k_max_cap(),
        });
    }
    Ok(())
}

fn schrodinger_scan(
    grid: &ScanGrid,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<ScanStats> {
    let times = grid.times();
    let radii = grid.radii();
    let us = grid.cosines();
    let zonal = zonal_tables(policy.k_max_cap(), &us)?;
    let pairs = grid.radius_pairs();
    let rows: Vec<(usize, usize, usize)> = (0..times.len())
        .flat_map(|it| pairs.iter().map(move |&(i, j)| (it, i, j)))
        .collect();
    // at a = 0 the split kernel is the closed form and needs no Bessel sums
    let closed = params.a() == 0.0 && policy.split();
    scan_ordered(&rows, |&(it, i, j)| {
        let (t, r1, r2) = (times[it], radii[i], radii[j]);
        let mut stats = ScanStats::default();
        let sin = t.sin().abs();
        if !closed && r1 * r2 / (2.0 * sin) > grid.arg_max {
            // no bound is available for the excluded oscillatory values
            stats.exclude(us.len(), f64::INFINITY);
            return Ok(stats);
        }
        let row = schrodinger_row(t, r1, r2, params, policy)?;
        check_row(row.truncated(), "the Schrödinger kernel", policy)?;
        let weight = sin.powf(1.5);
        for (iu, &u) in us.iter().enumerate() {
            let v = row.at_tabulated(u, &zonal[iu])?;
            stats.note_truncation(v.k_used, weight * v.tail_bound * v.prefactor);
            stats.offer(weight * v.value.norm(), || {
                Argmax::from_radial(t, r1, r2, u)
            });
        }
        Ok(stats)
    })
}

fn finish(
    id: &str,
    params: &OperatorParams,
    grid: &ScanGrid,
    coarse: ScanStats,
    fine: ScanStats,
) -> EstimateReport {
    let mut r = EstimateReport::new(
        id,
        params,
        ReportGrid::scan(grid),
        coarse.sup(),
        fine.sup(),
        coarse.argmax(),
        coarse.truncation(),
    );
    for (name, s) in [("", &coarse), ("refined_", &fine)] {
        if s.excluded > 0 {
            r = r.detail(&format!("{name}excluded_points"), s.excluded as f64);
            if s.excluded_bound.is_finite() {
                r = r.detail(&format!("{name}excluded_bound"), s.excluded_bound);
            }
        }
        if s.nan > 0 {
            r = r.detail(&format!("{name}nan_points"), s.nan as f64);
            r.stable = false;
        }
    }
    r.truncation.k_max = r.truncation.k_max.max(fine.k_max);
    r.truncation.tail = r.truncation.tail.max(fine.tail);
    r
}

/// Supremum of `|sin t|^{3/2} |K_t^S(x, y)|` over the grid and its refinement.
///
/// Rows with `r₁r₂/(2 sin t) > arg_max` are skipped and counted in
/// `details.excluded_points`. Times must lie in `[ε, π−ε]`.
pub fn verify_schrodinger_dispersive(
    grid: &ScanGrid,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<EstimateReport> {
    grid.require_open_period()?;
    let policy = policy.with_singular_eps(grid.eps)?;
    let coarse = schrodinger_scan(grid, params, &policy)?;
    let fine = schrodinger_scan(&grid.refined(), params, &policy)?;
    Ok(finish("schrodinger-dispersive", params, grid, coarse, fine)
        .detail("mehler_constant", MEHLER_CONSTANT))
}

fn heat_scan(
    grid: &ScanGrid,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<ScanStats> {
    let times = grid.times();
    let radii = grid.radii();
    let us = grid.cosines();
    let zonal = zonal_tables(policy.k_max_cap(), &us)?;
    let pairs = grid.radius_pairs();
    let rows: Vec<(usize, usize, usize)> = (0..times.len())
        .flat_map(|it| pairs.iter().map(move |&(i, j)| (it, i, j)))
        .collect();
    // at a = 0 the split kernel is the closed form and needs no Bessel sums
    let closed = params.a() == 0.0 && policy.split();
    scan_ordered(&rows, |&(it, i, j)| {
        let (t, r1, r2) = (times[it], radii[i], radii[j]);
        let mut stats = ScanStats::default();
        let (sh, th) = (t.sinh(), t.tanh());
        let weight = |u: f64| {
            let d2 = (r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * u).max(0.0);
            sh.powf(1.5) * (d2 / (4.0 * th)).exp()
        };
        // K_a ≤ K_0 pointwise for a ≥ 0, so unresolved points are bounded by the free kernel
        let free_bound = |u: f64| weight(u) * mehler_heat(t, r1, r2, u);
        if !closed && r1 * r2 / (2.0 * sh) > grid.arg_max {
            let bound = us.iter().map(|&u| free_bound(u)).fold(0.0, f64::max);
            stats.exclude(us.len(), bound);
            return Ok(stats);
        }
        let row = heat_row(t, r1, r2, params, policy)?;
        check_row(row.truncated(), "the heat kernel", policy)?;
        for (iu, &u) in us.iter().enumerate() {
            let v = row.at_tabulated(u, &zonal[iu])?;
            if v.error_estimate() > HEAT_REL_ACCURACY * v.value.norm() {
                stats.exclude(1, free_bound(u));
                continue;
            }
            stats.note_truncation(v.k_used, weight(u) * v.tail_bound * v.prefactor);
            stats.offer(weight(u) * v.value.norm(), || {
                Argmax::from_radial(t, r1, r2, u)
            });
        }
        Ok(stats)
    })
}

/// Supremum of `|K_t^H(x, y)| sinh(t)^{3/2} e^{|x−y|²/(4 tanh t)}`.
///
/// Points where the difference series loses relative accuracy `10⁻⁶` to
/// cancellation are excluded; `details.excluded_bound` is the largest value
/// the free kernel takes there, an upper bound for the excluded ratios.
pub fn verify_heat_gaussian(
    grid: &ScanGrid,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<EstimateReport> {
    grid.validate()?;
    if grid.t_min < grid.eps {
        return Err(oscwave_core::Error::SingularTime {
            t: grid.t_min,
            eps: grid.eps,
        }
        .into());
    }
    let coarse = heat_scan(grid, params, policy)?;
    let fine = heat_scan(&grid.refined(), params, policy)?;
    Ok(finish("heat-gaussian", params, grid, coarse, fine)
        .detail("mehler_constant", MEHLER_CONSTANT))
}

/// `K(ρ, u)` on a tensor grid, row-major in `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KScan {
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
    pub values: Vec<KernelValue>,
}

impl KScan {
    pub fn at(&self, i_rho: usize, i_u: usize) -> &KernelValue {
        &self.values[i_rho * self.u.len() + i_u]
    }

    /// Largest `|K|` and its first location `(ρ, u)`.
    pub fn sup(&self) -> (f64, f64, f64) {
        let mut best = (f64::NEG_INFINITY, f64::NAN, f64::NAN);
        for (i, v) in self.values.iter().enumerate() {
            let m = v.value.norm();
            if m > best.0 {
                best = (m, self.rho[i / self.u.len()], self.u[i % self.u.len()]);
            }
        }
        best
    }

    pub fn k_max(&self) -> usize {
        self.values.iter().map(|v| v.k_used).max().unwrap_or(0)
    }

    pub fn max_error(&self) -> f64 {
        self.values
            .iter()
            .map(KernelValue::error_estimate)
            .fold(0.0, f64::max)
    }
}

/// Evaluates `K` with winding 0 at `rho_count × u_count` equispaced nodes of
/// `[0, rho_max] × [−1, 1]`.
pub fn scan_k_function(
    params: &OperatorParams,
    rho_max: f64,
    rho_count: usize,
    u_count: usize,
    policy: &TruncationPolicy,
) -> Result<KScan> {
    if rho_count < 1 || u_count < 2 {
        return Err(Error::config(
            "a K scan needs at least one ρ node and two u nodes",
        ));
    }
    if !(rho_max >= 0.0 && rho_max.is_finite()) {
        return Err(Error::config(format!(
            "rho_max = {rho_max} must be finite and non-negative"
        )));
    }
    let rho = linspace(0.0, rho_max, rho_count);
    let u = linspace(-1.0, 1.0, u_count);
    let zonal = zonal_tables(policy.k_max_cap(), &u)?;
    let rows: Vec<Result<Vec<KernelValue>>> = rho
        .par_iter()
        .map(|&r| {
            let row = k_function_row(r, 0, params, policy)?;
            check_row(row.truncated(), "K", policy)?;
            u.iter()
                .zip(&zonal)
                .map(|(&c, z)| Ok(row.at_tabulated(c, z)?))
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(rho.len() * u.len());
    for r in rows {
        values.extend(r?);
    }
    Ok(KScan { rho, u, values })
}

/// Supremum of `|K(ρ, u)|` and its value under refinement by `refine` in both directions.
pub fn verify_k_function(
    params: &OperatorParams,
    rho_max: f64,
    rho_count: usize,
    u_count: usize,
    refine: usize,
    policy: &TruncationPolicy,
) -> Result<EstimateReport> {
    if refine < 2 || rho_count < 2 {
        return Err(Error::config(
            "refinement needs a factor ≥ 2 and at least two ρ nodes",
        ));
    }
    let coarse = scan_k_function(params, rho_max, rho_count, u_count, policy)?;
    let fine = scan_k_function(
        params,
        rho_max,
        (rho_count - 1) * refine + 1,
        (u_count - 1) * refine + 1,
        policy,
    )?;
    Ok(k_function_report(params, &coarse, &fine))
}

/// Report comparing a `K` scan with its refinement.
///
/// The maximiser `(ρ, u)` is written as `t = 0`, `x = (0, 0, ρ)`,
/// `y = (√(1−u²), 0, u)`.
pub fn k_function_report(params: &OperatorParams, coarse: &KScan, fine: &KScan) -> EstimateReport {
    let (sup, rho_at, u_at) = coarse.sup();
    let (fine_sup, _, _) = fine.sup();
    let inf = coarse
        .values
        .iter()
        .map(|v| v.value.norm())
        .fold(f64::INFINITY, f64::min);
    let rho_max = coarse.rho.last().copied().unwrap_or(0.0);
    EstimateReport::new(
        "k-function",
        params,
        ReportGrid {
            samples: Some(coarse.values.len()),
            ..Default::default()
        },
        sup,
        fine_sup,
        Some(Argmax::from_radial(0.0, rho_at, 1.0, u_at)),
        TruncationSummary {
            k_max: coarse.k_max().max(fine.k_max()),
            tail: coarse.max_error().max(fine.max_error()),
        },
    )
    .detail("rho_max", rho_max)
    .detail("min_modulus", inf)
    .detail("refined_samples", fine.values.len() as f64)
}
