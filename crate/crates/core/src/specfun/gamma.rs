
use crate::error::{Error, Result};

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// `ln Γ(x)` for `x > 0`.
///
/// Integer arguments up to 171 are summed exactly as `ln((x-1)!)`; everything
/// else is shifted to `x ≥ 12` and evaluated with an eight-term Stirling series.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma argument", x));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x.fract() == 0.0 && x <= 171.0 {
        let n = x as u32;
        let mut fact = 1.0f64;
        for i in 2..n {
            fact *= f64::from(i);
        }
        return Ok(fact.ln());
    }

    let mut z = x;
    let mut prod = 1.0;
    while z < 12.0 {
        prod *= z;
        z += 1.0;
    }
    Ok(stirling(z) - prod.ln())
}

fn stirling(z: f64) -> f64 {
    let zinv = z.recip();
    let zinv2 = zinv * zinv;
    let mut corr = 0.0;
    let mut p = zinv;
    for c in STIRLING {
        corr += c * p;
        p *= zinv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + corr
}
