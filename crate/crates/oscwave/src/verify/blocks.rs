use std::f64::consts::PI;

use num_complex::Complex64;
use oscwave_core::kernels::{spectral_row, zonal_table};
use oscwave_core::spectral::radial_profiles;
use oscwave_core::transforms::{
    besov_norm, gauss_legendre_interval, BlockKernelRow, DyadicPartition, SpectralCoefficients,
    SpectralTransform,
};
use oscwave_core::OperatorParams;
use rayon::prelude::*;

use super::{
    relative_change, scan_ordered, scan_ordered_n, Argmax, EstimateReport, GridShape, ReportGrid,
    ScanGrid, ScanStats, TruncationSummary, STABILITY_TOL,
};
use crate::error::{Error, Result};

/// Highest `k` with `λ_{0,k} ≤ hi`, or `None` if the window lies below the spectrum.
fn top_degree(params: &OperatorParams, hi: f64) -> Option<usize> {
    if params.eigenvalue(0, 0) > hi {
        return None;
    }
    let mut k = 0;
    while params.eigenvalue(0, k + 1) <= hi {
        k += 1;
    }
    Some(k)
}

fn distance(r1: f64, r2: f64, u: f64) -> f64 {
    (r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * u).max(0.0).sqrt()
}

/// Scans `|K_F(x, y)| · weight(|x − y|)` for the kernel of `F(H)` restricted to `[lo, hi]`.
fn multiplier_scan(
    grid: &ScanGrid,
    params: &OperatorParams,
    lo: f64,
    hi: f64,
    multiplier: &(dyn Fn(f64) -> f64 + Sync),
    weight: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<ScanStats> {
    let radii = grid.radii();
    let us = grid.cosines();
    let Some(k_top) = top_degree(params, hi) else {
        let mut s = ScanStats::default();
        s.offer(0.0, || Argmax::from_radial(0.0, 0.0, 0.0, -1.0));
        return Ok(s);
    };
    let zonal: Vec<Vec<f64>> = us
        .iter()
        .map(|&u| zonal_table(k_top, u))
        .collect::<Result<_, _>>()?;
    scan_ordered(&grid.radius_pairs(), |&(i, j)| {
        let (r1, r2) = (radii[i], radii[j]);
        let row = spectral_row(
            params,
            lo,
            hi,
            |lam| Complex64::new(multiplier(lam), 0.0),
            r1,
            r2,
        )?;
        let mut s = ScanStats::default();
        for (iu, &u) in us.iter().enumerate() {
            let v = row.at_tabulated(u, &zonal[iu])?;
            s.note_truncation(v.k_used, 0.0);
            s.offer(v.value.norm() * weight(distance(r1, r2, u)), || {
                Argmax::from_radial(0.0, r1, r2, u)
            });
        }
        Ok(s)
    })
}

fn spatial_report(
    id: &str,
    params: &OperatorParams,
    grid: &ScanGrid,
    coarse: ScanStats,
    fine: ScanStats,
) -> EstimateReport {
    EstimateReport::new(
        id,
        params,
        ReportGrid::scan(grid),
        coarse.sup(),
        fine.sup(),
        coarse.argmax(),
        TruncationSummary {
            k_max: coarse.k_max.max(fine.k_max),
            tail: 0.0,
        },
    )
}

/// Supremum of `|ψ_j(√H)(x, y)| (1 + 2^j|x−y|)^N 2^{−3j}`; the time fields of `grid` are unused.
pub fn verify_multiplier_decay(
    j: i32,
    order: u32,
    grid: &ScanGrid,
    params: &OperatorParams,
    partition: &DyadicPartition,
) -> Result<EstimateReport> {
    grid.validate()?;
    let (lo, hi) = DyadicPartition::eigenvalue_window(j);
    let scale = 2f64.powi(j);
    let norm = scale.powi(-3);
    let psi = |lam: f64| partition.psi_j(j, lam.sqrt());
    let weight = |d: f64| (1.0 + scale * d).powi(order as i32) * norm;
    let coarse = multiplier_scan(grid, params, lo, hi, &psi, &weight)?;
    let fine = multiplier_scan(&grid.refined(), params, lo, hi, &psi, &weight)?;
    Ok(
        spatial_report("multiplier-decay", params, grid, coarse, fine)
            .detail("j", j as f64)
            .detail("order", order as f64),
    )
}

/// `‖ψ_j(√H) H^s‖_{p→q} / 2^{2sj + 3j(1/p − 1/q)}` for `(p, q)` one of
/// `(1, ∞)`, `(1, 2)`, `(2, ∞)` or `(2, 2)`.
///
/// These operator norms are attained by kernels: `sup |K|` for `(1, ∞)`,
/// `sup_y ‖K(·, y)‖₂` for `(1, 2)` and its adjoint `(2, ∞)`, and the
/// largest multiplier value for `(2, 2)`.
pub fn verify_bernstein(
    j: i32,
    p: f64,
    q: f64,
    s: f64,
    grid: &ScanGrid,
    params: &OperatorParams,
    partition: &DyadicPartition,
) -> Result<EstimateReport> {
    grid.validate()?;
    if !(p >= 1.0 && p <= q) || !s.is_finite() {
        return Err(Error::config(format!(
            "Bernstein exponents need 1 ≤ p ≤ q ≤ ∞ and finite s, got ({p}, {q}, {s})"
        )));
    }
    let inv = |x: f64| if x == f64::INFINITY { 0.0 } else { 1.0 / x };
    let j_f = j as f64;
    let norm = 2f64.powf(-(2.0 * s * j_f + 3.0 * j_f * (inv(p) - inv(q))));
    let (lo, hi) = DyadicPartition::eigenvalue_window(j);
    let mult = |lam: f64| partition.psi_j(j, lam.sqrt()) * lam.powf(s);
    let report = match (p, q) {
        (1.0, f64::INFINITY) => {
            let w = |_: f64| norm;
            let coarse = multiplier_scan(grid, params, lo, hi, &mult, &w)?;
            let fine = multiplier_scan(&grid.refined(), params, lo, hi, &mult, &w)?;
            spatial_report("bernstein", params, grid, coarse, fine)
        }
        (1.0, 2.0) | (2.0, f64::INFINITY) => {
            let coarse = column_norm_scan(grid, params, lo, hi, &mult)?;
            let fine = column_norm_scan(&grid.refined(), params, lo, hi, &mult)?;
            let (c, f) = (scaled(coarse, norm), scaled(fine, norm));
            spatial_report("bernstein", params, grid, c, f)
        }
        (2.0, 2.0) => {
            let set = oscwave_core::spectral::modes_in_window(lo, hi, params)?;
            let sup = (0..set.len()).map(|i| mult(set.lambda(i)).abs()).fold(0.0, f64::max) * norm;
            EstimateReport::new("bernstein", params, ReportGrid::default(), sup, sup, None, TruncationSummary::default())
        }
        _ => {
            return Err(Error::config(format!(
                "Bernstein exponents (p, q) = ({p}, {q}) are not supported; use (1, inf), (1, 2), (2, inf) or (2, 2)"
            )))
        }
    };
    Ok(report
        .detail("j", j_f)
        .detail("s", s)
        .exponents(&[("p", p), ("q", q)]))
}

fn scaled(mut s: ScanStats, c: f64) -> ScanStats {
    if let Some(b) = s.best.as_mut() {
        b.0 *= c;
    }
    s
}

/// `sup_r (Σ |F(λ)|² R_{m,k}(r)² (2k+1)/4π)^{1/2}`, the `L²` norm of `K_F(·, y)` at `|y| = r`.
fn column_norm_scan(
    grid: &ScanGrid,
    params: &OperatorParams,
    lo: f64,
    hi: f64,
    multiplier: &(dyn Fn(f64) -> f64 + Sync),
) -> Result<ScanStats> {
    let radii = grid.radii();
    let Some(k_top) = top_degree(params, hi) else {
        let mut s = ScanStats::default();
        s.offer(0.0, || Argmax::from_radial(0.0, 0.0, 0.0, 1.0));
        return Ok(s);
    };
    scan_ordered(&radii, |&r| {
        let mut acc = 0.0;
        for k in 0..=k_top {
            let m_top = ((hi - params.eigenvalue(0, k)) / 2.0).floor() as usize;
            let prof = radial_profiles(m_top, k, params, r)?;
            for (m, rv) in prof.iter().enumerate() {
                let lam = params.eigenvalue(m, k);
                if lam >= lo {
                    acc += (multiplier(lam) * rv).powi(2) * (2 * k + 1) as f64 / (4.0 * PI);
                }
            }
        }
        let mut s = ScanStats::default();
        s.note_truncation(k_top, 0.0);
        s.offer(acc.sqrt(), || Argmax::from_radial(0.0, r, r, 1.0));
        Ok(s)
    })
}

/// `‖ψ_j(√H) φ_k(√H)‖_{p→p}` for `p ∈ {1, 2, ∞}`, reported as the constant
/// `C_m = ‖ψ_j φ_k‖_{p→p} · 2^{2m|j−k|}`.
///
/// For `p = 2` the norm is the largest multiplier value. For `p ∈ {1, ∞}`
/// it is `sup_y ∫ |K(x, y)| dx` (the kernel is real and symmetric), with
/// `y` on the grid radii and `x` integrated by Gauss rules in `|x|` and
/// `cos∠(x, y)`; the refined value doubles both rules.
#[allow(clippy::too_many_arguments)]
pub fn verify_block_interaction(
    j: i32,
    k: i32,
    p: f64,
    m: u32,
    grid: &ScanGrid,
    params: &OperatorParams,
    psi: &DyadicPartition,
    phi: &DyadicPartition,
) -> Result<EstimateReport> {
    grid.validate()?;
    let (lo_j, hi_j) = DyadicPartition::eigenvalue_window(j);
    let (lo_k, hi_k) = DyadicPartition::eigenvalue_window(k);
    let (lo, hi) = (lo_j.max(lo_k), hi_j.min(hi_k));
    let mult = |lam: f64| psi.psi_j(j, lam.sqrt()) * phi.psi_j(k, lam.sqrt());
    let decay = 2f64.powi(-2 * m as i32 * (j - k).abs());
    let (observed, refined, argmax) = if lo > hi {
        (0.0, 0.0, None)
    } else if p == 2.0 {
        let set = oscwave_core::spectral::modes_in_window(lo, hi, params)?;
        let sup = (0..set.len())
            .map(|i| mult(set.lambda(i)).abs())
            .fold(0.0, f64::max);
        (sup, sup, None)
    } else if p == 1.0 || p == f64::INFINITY {
        let coarse = l1_column_scan(grid, params, lo, hi, &mult, 1)?;
        let fine = l1_column_scan(&grid.refined(), params, lo, hi, &mult, 2)?;
        (coarse.sup(), fine.sup(), coarse.argmax())
    } else {
        return Err(Error::config(format!(
            "block interaction is measured for p ∈ {{1, 2, inf}}, got {p}"
        )));
    };
    let mut r = EstimateReport::new(
        "block-interaction",
        params,
        ReportGrid::scan(grid),
        observed / decay,
        refined / decay,
        argmax,
        TruncationSummary::default(),
    );
    r = r
        .detail("operator_norm", observed)
        .detail("refined_operator_norm", refined)
        .detail("decay_factor", decay);
    Ok(r.detail("j", j as f64)
        .detail("k", k as f64)
        .detail("m", m as f64)
        .exponents(&[("p", p)]))
}

fn l1_column_scan(
    grid: &ScanGrid,
    params: &OperatorParams,
    lo: f64,
    hi: f64,
    multiplier: &(dyn Fn(f64) -> f64 + Sync),
    level: usize,
) -> Result<ScanStats> {
    let Some(k_top) = top_degree(params, hi) else {
        return Ok(ScanStats::default());
    };
    // eigenfunctions below `hi` decay like e^{−r²/4} beyond the turning point 2√hi
    let r_int = 2.0 * hi.sqrt() + 10.0;
    let n_r = level * ((r_int * hi.sqrt()).ceil() as usize + 32);
    let n_u = level * (2 * k_top + 16);
    let (xr, wr) = gauss_legendre_interval(n_r, 0.0, r_int)?;
    let (xu, wu) = gauss_legendre_interval(n_u, -1.0, 1.0)?;
    let zonal: Vec<Vec<f64>> = xu
        .iter()
        .map(|&u| zonal_table(k_top, u))
        .collect::<Result<_, _>>()?;
    let radii = grid.radii();
    scan_ordered(&radii, |&ry| {
        let cols: Vec<Result<f64>> = xr
            .par_iter()
            .zip(&wr)
            .map(|(&rx, &w)| {
                let row = spectral_row(
                    params,
                    lo,
                    hi,
                    |lam| Complex64::new(multiplier(lam), 0.0),
                    ry,
                    rx,
                )?;
                let mut inner = 0.0;
                for (iu, &u) in xu.iter().enumerate() {
                    inner += wu[iu] * row.at_tabulated(u, &zonal[iu])?.value.norm();
                }
                Ok(w * rx * rx * 2.0 * PI * inner)
            })
            .collect();
        let mut total = 0.0;
        for c in cols {
            total += c?;
        }
        let mut s = ScanStats::default();
        s.note_truncation(k_top, 0.0);
        s.offer(total, || Argmax::from_radial(0.0, ry, ry, 1.0));
        Ok(s)
    })
}

/// Ratio of Besov norms for two partitions over a sample set.
///
/// The reported supremum is `C = max(max ratio, 1 / min ratio)`, so that
/// every ratio lies in `[1/C, C]`. For `p ≠ 2` the refined value uses
/// `refined` when given; `p = 2` is exact in coefficients.
#[allow(clippy::too_many_arguments)]
pub fn verify_besov_equivalence(
    a: &DyadicPartition,
    b: &DyadicPartition,
    s: f64,
    p: f64,
    q: f64,
    samples: &[SpectralCoefficients],
    transform: &SpectralTransform,
    refined: Option<&SpectralTransform>,
) -> Result<EstimateReport> {
    let ratios = |t: &SpectralTransform| -> Result<(f64, f64)> {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for f in samples.iter().filter(|f| !f.is_zero()) {
            let r = besov_norm(f, s, p, q, a, t)? / besov_norm(f, s, p, q, b, t)?;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        Ok((lo, hi))
    };
    let params = *transform.set().params();
    let grid = ReportGrid {
        quadrature: Some(GridShape::from(*transform.grid().spec())),
        samples: Some(samples.len()),
        ..Default::default()
    };
    if samples.iter().all(SpectralCoefficients::is_zero) {
        let mut r = EstimateReport::new(
            "besov-equivalence",
            &params,
            grid,
            0.0,
            0.0,
            None,
            TruncationSummary::default(),
        );
        r.degenerate = true;
        return Ok(r);
    }
    let (lo, hi) = ratios(transform)?;
    let (rlo, rhi) = match refined {
        Some(t) if p != 2.0 => ratios(t)?,
        _ => (lo, hi),
    };
    let c = hi.max(1.0 / lo);
    let rc = rhi.max(1.0 / rlo);
    let mut r = EstimateReport::new(
        "besov-equivalence",
        &params,
        grid,
        c,
        rc,
        None,
        TruncationSummary::default(),
    );
    r = r.detail("min_ratio", lo).detail("max_ratio", hi);
    r = r.detail("s", s).exponents(&[("p", p), ("q", q)]);
    if p != 2.0 && refined.is_none() {
        r = r.detail("refined_grid", 0.0);
    }
    Ok(r)
}

/// Supremum over the grid of `|ψ_j(√H) e^{it√H}(x, y)|` under two weights:
/// `(1 + 2^j t) 2^{−3j}` (primary, `sup`) and `2^{3j} ⟨2^j t⟩`
/// (`details.printed_*`).
///
/// Times are `t_min + i·dt`, `dt = (t_max − t_min)/(t_count − 1)`.
pub fn verify_halfwave_decay(
    j: i32,
    grid: &ScanGrid,
    params: &OperatorParams,
    partition: &DyadicPartition,
) -> Result<EstimateReport> {
    grid.validate()?;
    if grid.t_min < 0.0 || grid.t_max > PI - grid.eps {
        let bad = if grid.t_min < 0.0 {
            grid.t_min
        } else {
            grid.t_max
        };
        return Err(Error::config(format!(
            "half-wave times must lie in [0, π−ε], got {bad}"
        )));
    }
    let [coarse, coarse_printed] = halfwave_scan(j, grid, params, partition)?;
    let [fine, fine_printed] = halfwave_scan(j, &grid.refined(), params, partition)?;
    let printed = (coarse_printed.sup(), fine_printed.sup());
    let r = spatial_report("halfwave-decay", params, grid, coarse, fine);
    Ok(r.detail("j", j as f64)
        .detail("printed_sup", printed.0)
        .detail("printed_refined_sup", printed.1)
        .detail(
            "printed_stable",
            f64::from(u8::from(
                relative_change(printed.0, printed.1) <= STABILITY_TOL,
            )),
        ))
}

fn halfwave_scan(
    j: i32,
    grid: &ScanGrid,
    params: &OperatorParams,
    partition: &DyadicPartition,
) -> Result<[ScanStats; 2]> {
    let radii = grid.radii();
    let us = grid.cosines();
    let scale = 2f64.powi(j);
    let dt = (grid.t_max - grid.t_min) / (grid.t_count - 1) as f64;
    let (_, hi) = DyadicPartition::eigenvalue_window(j);
    let k_top = top_degree(params, hi).unwrap_or(0);
    let zonal: Vec<Vec<f64>> = us
        .iter()
        .map(|&u| zonal_table(k_top, u))
        .collect::<Result<_, _>>()?;
    scan_ordered_n(&grid.radius_pairs(), |&(i, i2)| {
        let (r1, r2) = (radii[i], radii[i2]);
        let mut out = [ScanStats::default(), ScanStats::default()];
        let row = BlockKernelRow::new(j, params, partition, r1, r2)?;
        if row.is_empty() {
            for s in &mut out {
                s.offer(0.0, || Argmax::from_radial(grid.t_min, r1, r2, -1.0));
            }
            return Ok(out);
        }
        let coeffs = row.coefficients_on_uniform_grid(grid.t_min, dt, grid.t_count);
        for (it, c) in coeffs.iter().enumerate() {
            let t = grid.t_min + it as f64 * dt;
            let primary = (1.0 + scale * t) / (scale * scale * scale);
            let printed = scale.powi(3) * (1.0 + (scale * t).powi(2)).sqrt();
            for (iu, &u) in us.iter().enumerate() {
                let v: Complex64 = c.iter().zip(&zonal[iu]).map(|(ck, z)| ck * z).sum();
                let at = || Argmax::from_radial(t, r1, r2, u);
                out[0].offer(v.norm() * primary, at);
                out[1].offer(v.norm() * printed, at);
            }
        }
        for s in &mut out {
            s.note_truncation(row.k_max(), 0.0);
        }
        Ok(out)
    })
}
