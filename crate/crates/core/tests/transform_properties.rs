use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use oscwave_core::spectral::{eigenfunction, ModeIndex, OperatorParams, SpectralSet};
use oscwave_core::transforms::*;
use oscwave_core::PolarPoint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(a: f64) -> OperatorParams {
    OperatorParams::new(a).unwrap()
}

fn transform(a: f64, lambda_max: f64) -> SpectralTransform {
    let grid = QuadratureGrid::shared(GridSpec::default()).unwrap();
    let set = Arc::new(SpectralSet::new(params(a), lambda_max).unwrap());
    SpectralTransform::new(grid, set).unwrap()
}

fn random_coefficients(set: &Arc<SpectralSet>, rng: &mut ChaCha8Rng) -> SpectralCoefficients {
    let values = (0..set.len()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    SpectralCoefficients::new(set.clone(), values).unwrap()
}

fn close(a: &SpectralCoefficients, b: &SpectralCoefficients) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn partition_of_unity() {
    for part in [DyadicPartition::default(), DyadicPartition::new(1.2, 1.8).unwrap()] {
        for i in 0..=2000 {
            let lam = 0.1 * 10f64.powf(4.0 * i as f64 / 2000.0);
            let (lo, hi) = part.active_range(lam, lam);
            let s: f64 = (lo - 2..=hi + 2).map(|j| part.psi_j(j, lam)).sum();
            assert!((s - 1.0).abs() <= 1e-12, "λ={lam}: {s}");
            for j in lo - 2..=hi + 2 {
                let v = part.psi_j(j, lam);
                assert!((0.0..=1.0).contains(&v));
                if v != 0.0 {
                    let x = lam * 2f64.powi(-j);
                    assert!((0.5..=2.0).contains(&x));
                }
            }
        }
    }
}

#[test]
fn analyze_single_eigenfunction() {
    let tr = transform(1.0, 12.0);
    let md = ModeIndex::new(1, 2, -1).unwrap();
    let p = *tr.set().params();
    let f = GridFunction::from_fn(tr.grid().clone(), |x| eigenfunction(md, &p, x).unwrap()).unwrap();
    let c = tr.analyze(&f).unwrap();
    for (mode, _, v) in c.iter() {
        let want = if mode == md { 1.0 } else { 0.0 };
        assert!((v - Complex64::new(want, 0.0)).norm() <= 1e-10, "{mode:?}: {v}");
    }
}

#[test]
fn gaussian_has_only_radial_real_coefficients() {
    let tr = transform(0.5, 12.0);
    let f = GridFunction::from_fn(tr.grid().clone(), |x| Complex64::new((-x.r * x.r / 2.0).exp(), 0.0)).unwrap();
    let c = tr.analyze(&f).unwrap();
    let mut radial = 0.0f64;
    for (mode, _, v) in c.iter() {
        assert!(v.im.abs() <= 1e-12, "{mode:?}: {v}");
        if mode.k > 0 {
            assert!(v.norm() <= 1e-12, "{mode:?}: {v}");
        } else {
            radial = radial.max(v.re.abs());
        }
    }
    assert!(radial > 0.1);
}

#[test]
fn round_trip_is_exact_on_band_limited_data_and_measures_the_tail() {
    let tr = transform(1.0, 12.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = random_coefficients(tr.set(), &mut rng);
    let back = tr.analyze(&tr.synthesize(&c).unwrap()).unwrap();
    assert!(close(&c, &back) <= 1e-8);

    // non-band-limited input: the round-trip error is the L² mass outside the set
    let f = GridFunction::from_fn(tr.grid().clone(), |x| {
        let [a, b, _] = x.to_cartesian();
        Complex64::new((-(a - 0.5).powi(2) - b * b - x.r * x.r / 4.0).exp(), 0.0)
    })
    .unwrap();
    let coeffs = tr.analyze(&f).unwrap();
    let resid = f.sub(&tr.synthesize(&coeffs).unwrap()).unwrap().l2_norm();
    let tail = (f.l2_norm().powi(2) - coeffs.l2_norm().powi(2)).max(0.0).sqrt();
    assert!(coeffs.l2_norm() <= f.l2_norm() * (1.0 + 1e-12));
    assert!((resid - tail).abs() <= 1e-6 * f.l2_norm(), "{resid} vs {tail}");

    let zero = tr.synthesize(&SpectralCoefficients::zeros(tr.set().clone())).unwrap();
    assert!(zero.values().iter().all(|v| *v == Complex64::new(0.0, 0.0)));
}

#[test]
fn analyze_rejects_unresolved_modes() {
    let grid = QuadratureGrid::shared(GridSpec::new(60, 12.0, 8, 16).unwrap()).unwrap();
    let set = Arc::new(SpectralSet::new(params(0.0), 30.0).unwrap());
    let tr = SpectralTransform::new(grid.clone(), set).unwrap();
    let f = GridFunction::zeros(grid);
    assert!(matches!(tr.analyze(&f), Err(oscwave_core::Error::Resolution { .. })));
}

#[test]
fn multiplier_examples() {
    let tr = transform(1.0, 12.0);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = random_coefficients(tr.set(), &mut rng);
    assert_eq!(c.apply_real(|_| 1.0).values(), c.values());
    assert!(c.apply_real(|lam| if lam <= 1.0 { 3.0 } else { 0.0 }).is_zero());

    let e0 = SpectralCoefficients::single_mode(tr.set().clone(), ModeIndex::new(0, 0, 0).unwrap()).unwrap();
    let lam0 = tr.set().params().ground_energy();
    let h = heat_evolve(&e0, 0.8);
    assert!((h.get(&ModeIndex::new(0, 0, 0).unwrap()).unwrap().re - (-0.8 * lam0).exp()).abs() < 1e-15);

    // on the grid, the identity multiplier reproduces band-limited samples
    let f = tr.synthesize(&c).unwrap();
    let g = tr.apply_multiplier(&f, real(|_| 1.0)).unwrap();
    assert!(f.sub(&g).unwrap().l2_norm() <= 1e-8 * f.l2_norm());
}

#[test]
fn multiplier_composition_is_exact() {
    let tr = transform(2.0, 14.0);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = random_coefficients(tr.set(), &mut rng);
    let f = |lam: f64| Complex64::from_polar(lam.sqrt(), 0.3 * lam);
    let g = |lam: f64| Complex64::new((-lam).exp(), lam.cos());
    let two_step = c.apply_multiplier(f).apply_multiplier(g);
    let one_step = c.apply_multiplier(|lam| f(lam) * g(lam));
    // equal up to the rounding of one complex product
    assert!(close(&two_step, &one_step) <= 1e-13);
}

#[test]
fn block_kernel_examples() {
    let part = DyadicPartition::default();
    let p = params(0.0);
    let x = PolarPoint::new(0.7, 0.4, 1.1).unwrap();
    let y = PolarPoint::new(1.3, 2.0, 2.2).unwrap();
    // 2^{j+1} < √λ_{0,0} = √1.5
    assert_eq!(lp_block_kernel(-1, &p, &part, &x, &y).unwrap(), Complex64::new(0.0, 0.0));
    for a in [0.0, 1.0] {
        for j in 0..=3 {
            let k1 = lp_block_kernel(j, &params(a), &part, &x, &y).unwrap();
            let k2 = lp_block_kernel(j, &params(a), &part, &y, &x).unwrap();
            assert!((k1 - k2.conj()).norm() <= 1e-13 * k1.norm().max(1e-300));
            let t = 0.37;
            let w1 = halfwave_block_kernel(j, t, &params(a), &part, &x, &y).unwrap();
            let w2 = halfwave_block_kernel(j, -t, &params(a), &part, &y, &x).unwrap();
            assert!((w1 - w2.conj()).norm() <= 1e-13 * w1.norm().max(1e-300));
            assert_eq!(halfwave_block_kernel(j, 0.0, &params(a), &part, &x, &y).unwrap(), k1);
        }
    }
}

#[test]
fn block_kernel_acts_as_the_multiplier() {
    let grid = QuadratureGrid::shared(GridSpec::new(160, 12.0, 16, 32).unwrap()).unwrap();
    let p = params(1.0);
    let part = DyadicPartition::default();
    let x = PolarPoint::new(0.9, 0.5, 1.0).unwrap();
    for (j, md) in [(1, ModeIndex::new(0, 1, 1).unwrap()), (1, ModeIndex::new(1, 2, 0).unwrap())] {
        let mut acc = Complex64::new(0.0, 0.0);
        for idx in 0..grid.len() {
            let y = grid.point(idx);
            acc += lp_block_kernel(j, &p, &part, &x, &y).unwrap() * eigenfunction(md, &p, &y).unwrap() * grid.weight(idx);
        }
        let want = eigenfunction(md, &p, &x).unwrap() * part.psi_j(j, p.eigenvalue(md.m, md.k).sqrt());
        assert!((acc - want).norm() <= 1e-8, "{md:?}: {acc} vs {want}");
    }
}

#[test]
fn block_kernel_table_matches_direct_evaluation() {
    let part = DyadicPartition::default();
    let p = params(1.0);
    let table = BlockKernelTable::new(2, &p, &part, 0.8, 1.4, -0.3).unwrap();
    let x = PolarPoint::new(0.8, 0.0, 0.0).unwrap();
    let y = PolarPoint::new(1.4, 0.0, (-0.3f64).acos()).unwrap();
    let ts = table.on_uniform_grid(0.1, 0.05, 200);
    for (i, v) in ts.iter().enumerate() {
        let t = 0.1 + 0.05 * i as f64;
        let direct = halfwave_block_kernel(2, t, &p, &part, &x, &y).unwrap();
        assert!((v - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
        assert!((table.at(t) - direct).norm() <= 1e-12 * (1.0 + direct.norm()));
    }
}

#[test]
fn sobolev_and_besov_examples() {
    let tr = transform(0.0, 12.0);
    let part = DyadicPartition::default();
    let md = ModeIndex::new(0, 0, 0).unwrap();
    let e0 = SpectralCoefficients::single_mode(tr.set().clone(), md).unwrap();
    assert!((sobolev_norm(&e0, 1.0) - 1.5f64.sqrt()).abs() < 1e-15);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = random_coefficients(tr.set(), &mut rng);
    assert!((sobolev_norm(&c, 0.0) - c.l2_norm()).abs() <= 1e-14 * c.l2_norm());

    let zero = SpectralCoefficients::zeros(tr.set().clone());
    assert_eq!(besov_norm(&zero, 1.0, 2.0, 2.0, &part, &tr).unwrap(), 0.0);
    assert!(besov_norm(&c, 1.0, 0.5, 2.0, &part, &tr).is_err());
    assert!(besov_norm(&c, 1.0, 2.0, 0.0, &part, &tr).is_err());

    // single mode, p = q = 2: ‖e‖_{B^s} = (Σ_j 4^{js} ψ_j(√λ)²)^{1/2}, comparable to λ^{s/2}
    let (cmin, cmax) = square_sum_extrema(&part);
    for mode in [md, tr.set().modes()[20]] {
        let lam = tr.set().params().eigenvalue(mode.m, mode.k);
        let single = SpectralCoefficients::single_mode(tr.set().clone(), mode).unwrap();
        let b = besov_norm(&single, 1.0, 2.0, 2.0, &part, &tr).unwrap();
        let ratio = b / lam.sqrt();
        assert!(ratio >= cmin / 2.0 && ratio <= cmax * 2.0, "{mode:?}: {ratio}");
    }
    let b0 = besov_norm(&c, 0.0, 2.0, 2.0, &part, &tr).unwrap() / c.l2_norm();
    assert!(b0 >= cmin - 1e-12 && b0 <= cmax + 1e-12, "{b0}");
}

fn square_sum_extrema(part: &DyadicPartition) -> (f64, f64) {
    (0..=4000).map(|i| square_sum(part, 2f64.powf(i as f64 / 4000.0))).fold((f64::INFINITY, 0.0), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    })
}

#[test]
fn almost_orthogonality_at_two() {
    let part = DyadicPartition::default();
    let (cmin, cmax) = square_sum_extrema(&part);
    assert!(cmin > 0.7 && cmax <= 1.0 + 1e-15, "{cmin} {cmax}");
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for a in [0.0, 1.0, 2.5] {
        let set = Arc::new(SpectralSet::new(params(a), 60.0).unwrap());
        for _ in 0..5 {
            let c = random_coefficients(&set, &mut rng);
            let r = square_function_l2(&c, &part) / c.l2_norm();
            assert!(r >= cmin - 1e-12 && r <= cmax + 1e-12, "{r}");
        }
    }
}

#[test]
fn unitarity_and_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for a in [0.0, 0.5, 2.0] {
        let set = Arc::new(SpectralSet::new(params(a), 40.0).unwrap());
        let f = random_coefficients(&set, &mut rng);
        let g = random_coefficients(&set, &mut rng);
        for t in [0.3, 0.7, 2.9, -5.0] {
            let u = schrodinger_evolve(&f, t);
            assert!((u.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
            let e0 = wave_energy(&f, &g).unwrap();
            let e = wave_energy(&wave_evolve(&f, &g, t).unwrap(), &wave_velocity(&f, &g, t).unwrap()).unwrap();
            assert!((e - e0).abs() <= 1e-12 * e0, "a={a} t={t}");
        }
        assert_eq!(wave_evolve(&f, &g, 0.0).unwrap().values(), f.values());
    }
}

#[test]
fn wave_on_an_eigenmode() {
    let set = Arc::new(SpectralSet::new(params(1.0), 10.0).unwrap());
    let md = ModeIndex::new(0, 0, 0).unwrap();
    let f = SpectralCoefficients::single_mode(set.clone(), md).unwrap();
    let g = SpectralCoefficients::zeros(set.clone());
    let w = set.params().ground_energy().sqrt();
    for t in [0.1, 1.0, PI] {
        let u = wave_evolve(&f, &g, t).unwrap();
        assert!((u.get(&md).unwrap().re - (t * w).cos()).abs() < 1e-15);
        assert!(u.iter().filter(|(m, _, _)| *m != md).all(|(_, _, v)| v.norm() == 0.0));
    }
}

#[test]
fn lp_norms_on_the_grid() {
    let tr = transform(0.0, 8.0);
    let e0 = SpectralCoefficients::single_mode(tr.set().clone(), ModeIndex::new(0, 0, 0).unwrap()).unwrap();
    // e_{0,0,0} = (2π)^{-3/4} e^{-r²/4} at a = 0, so ‖e‖_∞ = (2π)^{-3/4} at the origin
    let sup = lp_norm(&e0, f64::INFINITY, &tr).unwrap();
    let origin_value = (2.0 * PI).powf(-0.75);
    assert!(sup <= origin_value && sup > 0.99 * origin_value, "{sup}");
    let l1 = lp_norm(&e0, 1.0, &tr).unwrap();
    let want = (2.0 * PI).powf(-0.75) * (4.0 * PI).powf(1.5);
    assert!((l1 - want).abs() <= 1e-10 * want, "{l1} vs {want}");
    assert!((lp_norm(&e0, 2.0, &tr).unwrap() - 1.0).abs() < 1e-15);
}
