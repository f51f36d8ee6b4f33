use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use oscwave_core::kernels::{heat_kernel_radial, k_function, schrodinger_kernel_radial, TruncationPolicy};
use oscwave_core::specfun::*;
use oscwave_core::spectral::{OperatorParams, SpectralSet};
use oscwave_core::transforms::{schrodinger_evolve, DyadicPartition, SpectralCoefficients};
use proptest::prelude::*;

// L_m^α(x) to 40 digits (mpmath), frozen
const LAGUERRE: &[(usize, f64, f64, f64)] = &[
    (30, 0.0, 1.0, -0.273_612_428_049_616_702_514_6),
    (30, 1.3, 4.0, 4.049_758_229_029_152_263_294),
    (25, 0.5, 12.5, -47.192_967_605_148_553_380_31),
    (20, 2.118_033_988_749_895, 7.0, 3.853_998_396_892_902_029_009),
    (30, 7.5, 30.0, 412_361.830_413_780_508_069_3),
    (12, 0.25, 0.3, -0.672_930_659_783_107_428_795_6),
];

#[test]
fn laguerre_matches_extended_precision_sums() {
    for &(m, a, x, want) in LAGUERRE {
        let got = laguerre(m, a, x).unwrap();
        assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "m={m} a={a} x={x}: {got}");
    }
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn zonal_is_bounded_by_its_diagonal(k in 0usize..=50, u in -1.0f64..=1.0) {
        let z = zonal(k, u).unwrap();
        prop_assert!(z.abs() <= (2 * k + 1) as f64 / (4.0 * PI) * (1.0 + 1e-14));
    }

    #[test]
    fn bessel_small_argument_bound(nu in 0.5f64..20.0, r in 0.0f64..5.0) {
        let j = bessel_j(nu, r).unwrap();
        let bound = ((nu * (r / 2.0).ln() - log_gamma(1.0 + nu).unwrap()).exp()) * (r * r / 4.0).exp();
        prop_assert!(j.abs() <= bound * (1.0 + 1e-12) + 1e-300, "J={} bound={}", j, bound);
    }

    #[test]
    fn legendre_generating_function(r in -0.9f64..0.9, s in -1.0f64..=1.0) {
        let p = legendre_sequence(400, s).unwrap();
        let partial: f64 = p.iter().enumerate().map(|(k, v)| v * r.powi(k as i32)).sum();
        let closed = (1.0 - 2.0 * r * s + r * r).powf(-0.5);
        prop_assert!((partial - closed).abs() <= 1e-12 * closed);
    }

    #[test]
    fn eigenvalues_exceed_the_ground_energy(a in 0.0f64..50.0, m in 0usize..40, k in 0usize..40) {
        let p = OperatorParams::new(a).unwrap();
        prop_assert!(p.eigenvalue(m, k) >= p.ground_energy());
        prop_assert!(p.ground_energy() > 1.0);
    }

    #[test]
    fn partition_sums_to_one(lam in 0.1f64..1000.0, lo in 1.0f64..1.4, width in 0.2f64..0.6) {
        let part = DyadicPartition::new(lo, (lo + width).min(2.0)).unwrap();
        let (j0, j1) = part.active_range(lam, lam);
        let s: f64 = (j0..=j1).map(|j| part.psi_j(j, lam)).sum();
        prop_assert!((s - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn schrodinger_flow_is_unitary(
        a in 0.0f64..3.0,
        t in -10.0f64..10.0,
        raw in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 64),
    ) {
        let set = Arc::new(SpectralSet::new(OperatorParams::new(a).unwrap(), 20.0).unwrap());
        let values = (0..set.len()).map(|i| {
            let (re, im) = raw[i % raw.len()];
            Complex64::new(re, im)
        }).collect();
        let f = SpectralCoefficients::new(set, values).unwrap();
        let u = schrodinger_evolve(&f, t);
        prop_assert!((u.l2_norm() - f.l2_norm()).abs() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn kernels_are_symmetric_and_heat_is_positive(
        a in 0.0f64..3.0,
        t in 0.05f64..3.0,
        r1 in 0.0f64..3.0,
        r2 in 0.0f64..3.0,
        u in -1.0f64..=1.0,
    ) {
        let p = OperatorParams::new(a).unwrap();
        let pol = TruncationPolicy::default();
        let h12 = heat_kernel_radial(t, r1, r2, u, &p, &pol).unwrap();
        let h21 = heat_kernel_radial(t, r2, r1, u, &p, &pol).unwrap();
        prop_assert!(h12.value.re >= -1e-12);
        prop_assert!((h12.value.re - h21.value.re).abs() <= 1e-13 * h12.value.re.abs() + 2.0 * h12.error_estimate());
        let s12 = schrodinger_kernel_radial(t, r1, r2, u, &p, &pol).unwrap();
        let s21 = schrodinger_kernel_radial(t, r2, r1, u, &p, &pol).unwrap();
        prop_assert!((s12.value - s21.value).norm() <= 1e-13 * s12.value.norm() + 2.0 * s12.error_estimate());
    }

    #[test]
    fn free_k_function_has_constant_modulus(rho in 0.0f64..40.0, u in -1.0f64..=1.0) {
        let p = OperatorParams::new(0.0).unwrap();
        let v = k_function(rho, u, &p, &TruncationPolicy::default()).unwrap();
        prop_assert!((v.value.norm() - (2.0 * PI).powf(-1.5)).abs() <= 1e-12);
    }
}
