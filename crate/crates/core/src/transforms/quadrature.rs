use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::Invalid { what: "quadrature size", reason: "need at least one node" });
    }
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n
        let theta = PI * (i as f64 + 0.75) / (nf + 0.5);
        let mut x = (1.0 - (nf - 1.0) / (8.0 * nf * nf * nf)) * theta.cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                let (_, d) = legendre_and_derivative(n, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    Ok((nodes, weights))
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Gauss–Legendre rule mapped to `[lo, hi]`.
pub fn gauss_legendre_interval(n: usize, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(hi > lo) {
        return Err(Error::domain("quadrature interval upper end", hi));
    }
    let (x, w) = gauss_legendre(n)?;
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok((x.iter().map(|&t| mid + half * t).collect(), w.iter().map(|&v| half * v).collect()))
}

/// Composite Gauss–Legendre rule: `panels` equal panels of `per_panel` nodes each.
pub fn composite_gauss(lo: f64, hi: f64, panels: usize, per_panel: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if panels == 0 {
        return Err(Error::Invalid { what: "composite rule", reason: "need at least one panel" });
    }
    let (x, w) = gauss_legendre(per_panel)?;
    let h = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for (t, v) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * h * t);
            weights.push(0.5 * h * v);
        }
    }
    Ok((nodes, weights))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for n in [1usize, 2, 5, 24, 160] {
            let (x, w) = gauss_legendre(n).unwrap();
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            assert!(w.iter().all(|&v| v > 0.0));
            for deg in 0..(2 * n).min(40) {
                let got: f64 = x.iter().zip(&w).map(|(t, v)| v * t.powi(deg as i32)).sum();
                let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((got - want).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn composite_rule_integrates_cosine() {
        let (x, w) = composite_gauss(0.1, 3.0, 8, 8).unwrap();
        let got: f64 = x.iter().zip(&w).map(|(t, v)| v * t.cos()).sum();
        assert!((got - (3.0f64.sin() - 0.1f64.sin())).abs() < 1e-14);
    }
}
