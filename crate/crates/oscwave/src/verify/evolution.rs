use std::f64::consts::PI;

use oscwave_core::transforms::{
    besov_norm, composite_gauss, lp_norm, sobolev_norm, wave_evolve, DyadicPartition,
    SpectralCoefficients, SpectralTransform,
};
use rayon::prelude::*;

use super::{
    linspace, Argmax, EstimateReport, GridShape, ReportGrid, ScanGrid, ScanStats, TruncationSummary,
};
use crate::error::{Error, Result};

/// Gauss nodes per panel of the composite time rule.
const NODES_PER_PANEL: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `s = 3(1/2 − 1/r) − 1/q`
    pub s: f64,
}

/// Strichartz admissibility: `2 ≤ q ≤ ∞`, `2 ≤ r < ∞` and `1/q + 1/r ≤ 1/2`.
pub fn admissible(q: f64, r: f64) -> Admissibility {
    let inv_q = if q == f64::INFINITY { 0.0 } else { 1.0 / q };
    let s = 3.0 * (0.5 - 1.0 / r) - inv_q;
    let ok = q >= 2.0 && r >= 2.0 && r.is_finite() && inv_q + 1.0 / r <= 0.5 + 1e-15;
    Admissibility { admissible: ok, s }
}

fn check_same_set(c: &SpectralCoefficients, t: &SpectralTransform) -> Result<()> {
    if c.set() != t.set() {
        return Err(Error::config(
            "data and transform use different spectral sets",
        ));
    }
    Ok(())
}

/// `‖u‖_{L^q_t L^r_x([t₀, t₁])} / (‖f‖_{Ḣ^s} + ‖g‖_{Ḣ^{s−1}})` for the wave
/// solution with data `(f, g)`.
///
/// The time integral uses a composite Gauss rule with at least `time_nodes`
/// nodes (rounded up to whole panels of 8); the refined value doubles the
/// node count. Space norms are quadratures on the grid of `transform`.
pub fn verify_strichartz(
    q: f64,
    r: f64,
    f: &SpectralCoefficients,
    g: &SpectralCoefficients,
    interval: (f64, f64),
    time_nodes: usize,
    transform: &SpectralTransform,
) -> Result<EstimateReport> {
    let adm = admissible(q, r);
    if !adm.admissible {
        return Err(Error::Inadmissible { q, r });
    }
    let (t0, t1) = interval;
    if !(0.0 < t0 && t0 < t1 && t1 < PI) {
        return Err(Error::config(format!(
            "time interval [{t0}, {t1}] must lie inside (0, π)"
        )));
    }
    if time_nodes < 64 {
        return Err(Error::config(format!(
            "Strichartz quadrature needs at least 64 time nodes, got {time_nodes}"
        )));
    }
    check_same_set(f, transform)?;
    check_same_set(g, transform)?;
    let params = *f.set().params();
    let panels = time_nodes.div_ceil(NODES_PER_PANEL);
    let grid = ReportGrid {
        quadrature: Some(GridShape::from(*transform.grid().spec())),
        time_nodes: Some(panels * NODES_PER_PANEL),
        ..Default::default()
    };
    let data = sobolev_norm(f, adm.s) + sobolev_norm(g, adm.s - 1.0);
    if data == 0.0 {
        let mut rep = EstimateReport::new(
            "strichartz",
            &params,
            grid,
            0.0,
            0.0,
            None,
            TruncationSummary::default(),
        );
        rep.degenerate = true;
        return Ok(rep.detail("s", adm.s).exponents(&[("q", q), ("r", r)]));
    }
    let mixed = |panels: usize| -> Result<(f64, f64)> {
        let (ts, ws) = composite_gauss(t0, t1, panels, NODES_PER_PANEL)?;
        let norms: Vec<Result<f64>> = ts
            .par_iter()
            .map(|&t| Ok(lp_norm(&wave_evolve(f, g, t)?, r, transform)?))
            .collect();
        let mut acc = 0.0f64;
        let mut peak = (f64::NEG_INFINITY, t0);
        for ((n, &w), &t) in norms.into_iter().zip(&ws).zip(&ts) {
            let n = n?;
            if n > peak.0 {
                peak = (n, t);
            }
            acc = if q == f64::INFINITY {
                acc.max(n)
            } else {
                acc + w * n.powf(q)
            };
        }
        Ok((
            if q == f64::INFINITY {
                acc
            } else {
                acc.powf(1.0 / q)
            },
            peak.1,
        ))
    };
    let (coarse, t_peak) = mixed(panels)?;
    let (fine, _) = mixed(2 * panels)?;
    let rep = EstimateReport::new(
        "strichartz",
        &params,
        grid,
        coarse / data,
        fine / data,
        Some(Argmax(t_peak, [f64::NAN; 3], [f64::NAN; 3])),
        TruncationSummary::default(),
    );
    Ok(rep
        .detail("s", adm.s)
        .detail("data_norm", data)
        .exponents(&[("q", q), ("r", r)]))
}

/// Initial data `(f, g)` of one wave-dispersive sample; either may be zero.
#[derive(Debug, Clone)]
pub struct WaveSample {
    pub f: SpectralCoefficients,
    pub g: SpectralCoefficients,
}

/// `sin t ‖cos(t√H) f‖_∞ / ‖f‖_{Ḃ^{3/2}_{1,1}}` and
/// `sin t ‖sin(t√H)/√H g‖_∞ / ‖g‖_{Ḃ^{1}_{1,1}}`, maximised over the
/// samples and the times of `times` (its space fields are unused).
///
/// `sup` is the larger of the two; each is also in `details`. Zero data
/// contribute nothing. The refined value uses the refined time grid.
pub fn verify_wave_dispersive(
    samples: &[WaveSample],
    times: &ScanGrid,
    transform: &SpectralTransform,
    partition: &DyadicPartition,
) -> Result<EstimateReport> {
    times.require_open_period()?;
    let params = *transform.set().params();
    let mut denominators = Vec::with_capacity(samples.len());
    for smp in samples {
        check_same_set(&smp.f, transform)?;
        check_same_set(&smp.g, transform)?;
        denominators.push((
            besov_norm(&smp.f, 1.5, 1.0, 1.0, partition, transform)?,
            besov_norm(&smp.g, 1.0, 1.0, 1.0, partition, transform)?,
        ));
    }
    let scan = |ts: &[f64]| -> Result<[ScanStats; 2]> {
        let jobs: Vec<(usize, usize)> = (0..samples.len())
            .flat_map(|i| (0..ts.len()).map(move |k| (i, k)))
            .collect();
        super::scan_ordered_n(&jobs, |&(i, k)| {
            let t = ts[k];
            let smp = &samples[i];
            let zero = SpectralCoefficients::zeros(smp.f.set().clone());
            let mut out = [ScanStats::default(), ScanStats::default()];
            let at = || Argmax(t, [f64::NAN; 3], [f64::NAN; 3]);
            if !smp.f.is_zero() {
                let u = wave_evolve(&smp.f, &zero, t)?;
                out[0].offer(
                    t.sin() * lp_norm(&u, f64::INFINITY, transform)? / denominators[i].0,
                    at,
                );
            }
            if !smp.g.is_zero() {
                let u = wave_evolve(&zero, &smp.g, t)?;
                out[1].offer(
                    t.sin() * lp_norm(&u, f64::INFINITY, transform)? / denominators[i].1,
                    at,
                );
            }
            Ok(out)
        })
    };
    let [cos_c, sin_c] = scan(&times.times())?;
    let refined = times.refined();
    let [cos_f, sin_f] = scan(&linspace(refined.t_min, refined.t_max, refined.t_count))?;
    let grid = ReportGrid {
        scan: Some(*times),
        quadrature: Some(GridShape::from(*transform.grid().spec())),
        samples: Some(samples.len()),
        ..Default::default()
    };
    let (sup, argmax) = if sin_c.sup() > cos_c.sup() {
        (sin_c.sup(), sin_c.argmax())
    } else {
        (cos_c.sup(), cos_c.argmax())
    };
    let fine = cos_f.sup().max(sin_f.sup());
    let mut rep = EstimateReport::new(
        "wave-dispersive",
        &params,
        grid,
        sup,
        fine,
        argmax,
        TruncationSummary::default(),
    );
    rep.degenerate = cos_c.best.is_none() && sin_c.best.is_none();
    Ok(rep
        .detail("cos_sup", cos_c.sup())
        .detail("sin_sup", sin_c.sup()))
}
