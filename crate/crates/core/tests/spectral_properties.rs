use std::collections::BTreeMap;

use num_complex::Complex64;
use oscwave_core::spectral::*;
use oscwave_core::specfun::zonal;
use oscwave_core::transforms::{gauss_legendre_interval, GridSpec, QuadratureGrid};
use oscwave_core::PolarPoint;

fn params(a: f64) -> OperatorParams {
    OperatorParams::new(a).unwrap()
}

fn radial_rule() -> (Vec<f64>, Vec<f64>) {
    let (r, w) = gauss_legendre_interval(200, 0.0, 14.0).unwrap();
    let w = r.iter().zip(&w).map(|(x, v)| v * x * x).collect();
    (r, w)
}

#[test]
fn radial_normalization_and_orthogonality() {
    let (r, w) = radial_rule();
    for &a in &[0.0, 1.0, 2.5] {
        let p = params(a);
        let r00: Vec<f64> = r.iter().map(|&x| radial_eigenfunction(0, 0, &p, x).unwrap()).collect();
        let r10: Vec<f64> = r.iter().map(|&x| radial_eigenfunction(1, 0, &p, x).unwrap()).collect();
        let n: f64 = r00.iter().zip(&w).map(|(f, v)| f * f * v).sum();
        let o: f64 = r00.iter().zip(&r10).zip(&w).map(|((f, g), v)| f * g * v).sum();
        assert!((n - 1.0).abs() < 1e-8, "a={a}: {n}");
        assert!(o.abs() < 1e-8, "a={a}: {o}");
    }
}

#[test]
fn gram_matrix_small_modes() {
    let grid = QuadratureGrid::new(GridSpec::default()).unwrap();
    for &a in &[0.0, 1.0, 2.5] {
        let p = params(a);
        let mut modes = Vec::new();
        for m in 0..=6 {
            for k in 0..=4usize {
                for n in -(k as i64)..=k as i64 {
                    modes.push(ModeIndex::new(m, k, n).unwrap());
                }
            }
        }
        let set = SpectralSet::from_modes(p, modes);
        let tr = oscwave_core::transforms::SpectralTransform::new(
            std::sync::Arc::new(grid.clone()),
            std::sync::Arc::new(set.clone()),
        )
        .unwrap();
        let mut worst = 0.0f64;
        for (i, md) in set.modes().iter().enumerate() {
            let c = oscwave_core::transforms::SpectralCoefficients::single_mode(tr.set().clone(), *md).unwrap();
            let back = tr.analyze(&tr.synthesize(&c).unwrap()).unwrap();
            for (j, v) in back.values().iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((v - Complex64::new(want, 0.0)).norm());
            }
        }
        assert!(worst < 1e-7, "a={a}: {worst}");
    }
}

#[test]
fn eigen_equation_residual() {
    // -R'' - (2/r) R' + (r²/4 + (k(k+1) + a)/r²) R = λ R, sixth-order central differences
    let h = 1e-3;
    let c1 = [-1.0 / 60.0, 3.0 / 20.0, -3.0 / 4.0, 0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0];
    let c2 = [1.0 / 90.0, -3.0 / 20.0, 3.0 / 2.0, -49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0];
    for &a in &[0.0, 0.5, 2.5] {
        let p = params(a);
        for m in 0..4 {
            for k in 0..4 {
                let lam = p.eigenvalue(m, k);
                let mu = (k * (k + 1)) as f64;
                let mut num = 0.0f64;
                let mut den = 0.0f64;
                for i in 0..=58 {
                    let r = 0.2 + 0.1 * i as f64;
                    let vals: Vec<f64> =
                        (0..7).map(|s| radial_eigenfunction(m, k, &p, r + (s as f64 - 3.0) * h).unwrap()).collect();
                    let d1: f64 = c1.iter().zip(&vals).map(|(c, v)| c * v).sum::<f64>() / h;
                    let d2: f64 = c2.iter().zip(&vals).map(|(c, v)| c * v).sum::<f64>() / (h * h);
                    let f = vals[3];
                    let res = -d2 - 2.0 / r * d1 + (r * r / 4.0 + (mu + a) / (r * r)) * f - lam * f;
                    num = num.max(res.abs());
                    den = den.max((lam * f).abs());
                }
                assert!(num <= 1e-4 * den, "a={a} m={m} k={k}: {num} vs {den}");
            }
        }
    }
}

#[test]
fn free_spectrum_matches_oscillator_level_counting() {
    // −Δ + |x|²/4 on R³: levels N + 3/2 with multiplicity (N+1)(N+2)/2
    let set = SpectralSet::new(params(0.0), 20.0).unwrap();
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for i in 0..set.len() {
        *counts.entry((set.lambda(i) - 1.5).round() as i64).or_default() += 1;
    }
    for n in 0..=18i64 {
        assert_eq!(counts[&n], ((n + 1) * (n + 2) / 2) as usize, "level {n}");
    }
}

#[test]
fn spectral_set_is_exactly_the_cutoff_set() {
    let p = params(0.8);
    let set = SpectralSet::new(p, 17.3).unwrap();
    let mut brute = Vec::new();
    for m in 0..20 {
        for k in 0..20usize {
            if p.eigenvalue(m, k) <= 17.3 {
                for n in -(k as i64)..=k as i64 {
                    brute.push(ModeIndex::new(m, k, n).unwrap());
                }
            }
        }
    }
    assert_eq!(set.len(), brute.len());
    for md in &brute {
        assert!(set.position(md).is_some());
    }
    for w in 0..set.len() - 1 {
        assert!(set.lambda(w) <= set.lambda(w + 1));
    }
}

#[test]
fn zonal_product_of_eigenfunctions() {
    let p = params(1.3);
    let x = PolarPoint::new(0.9, 0.3, 1.2).unwrap();
    let y = PolarPoint::new(1.7, 4.0, 2.5).unwrap();
    for m in 0..3 {
        for k in 0..5usize {
            let s: Complex64 = (-(k as i64)..=k as i64)
                .map(|n| {
                    let md = ModeIndex::new(m, k, n).unwrap();
                    eigenfunction(md, &p, &x).unwrap() * eigenfunction(md, &p, &y).unwrap().conj()
                })
                .sum();
            let want = radial_eigenfunction(m, k, &p, x.r).unwrap()
                * radial_eigenfunction(m, k, &p, y.r).unwrap()
                * zonal(k, x.cos_angle(&y)).unwrap();
            assert!((s - want).norm() < 1e-13, "m={m} k={k}");
        }
    }
}

#[test]
fn ground_energy_above_one() {
    for &a in &[0.0, 0.1, 3.0, 50.0] {
        let p = params(a);
        assert!((p.ground_energy() - (1.0 + (0.25 + a).sqrt())).abs() < 1e-15);
        assert!(p.ground_energy() > 1.0);
    }
}
