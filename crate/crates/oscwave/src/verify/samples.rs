use std::sync::Arc;

use num_complex::Complex64;
use oscwave_core::transforms::SpectralCoefficients;
use oscwave_core::SpectralSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` coefficient vectors on `set` with real and imaginary parts uniform
/// in `[−1, 1]`, drawn from ChaCha8 stream `stream` of `seed`.
pub fn random_band_limited(
    set: &Arc<SpectralSet>,
    count: usize,
    seed: u64,
    stream: u64,
) -> Vec<SpectralCoefficients> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count)
        .map(|_| {
            let values = (0..set.len())
                .map(|_| Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
                .collect();
            SpectralCoefficients::new(set.clone(), values).expect("one value per mode")
        })
        .collect()
}
