use crate::error::{Error, Result};

/// Smooth dyadic partition of unity on `(0, ∞)`.
///
/// The transition `χ` equals 1 on `[0, lo]`, 0 on `[hi, ∞)` and in between is
///
/// ```text
/// χ(λ) = h(hi - λ) / (h(hi - λ) + h(λ - lo)),   h(t) = e^{-1/t} for t > 0, else 0.
/// ```
///
/// The blocks are `ψ(λ) = χ(λ) - χ(2λ)` and `ψ_j(λ) = ψ(2^{-j} λ)`, so
/// `supp ψ ⊂ [lo/2, hi] ⊂ [1/2, 2]` and `Σ_j ψ_j ≡ 1` on `(0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicPartition {
    lo: f64,
    hi: f64,
}

impl Default for DyadicPartition {
    fn default() -> Self {
        DyadicPartition { lo: 1.0, hi: 2.0 }
    }
}

fn h(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

impl DyadicPartition {
    /// Requires `1 ≤ lo < hi ≤ 2` so that the blocks live in `[1/2, 2]`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 1.0) || !lo.is_finite() {
            return Err(Error::domain("partition transition start", lo));
        }
        if !(hi > lo && hi <= 2.0) {
            return Err(Error::domain("partition transition end", hi));
        }
        Ok(DyadicPartition { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn chi(&self, lambda: f64) -> f64 {
        if lambda <= self.lo {
            return 1.0;
        }
        if lambda >= self.hi {
            return 0.0;
        }
        let a = h(self.hi - lambda);
        let b = h(lambda - self.lo);
        a / (a + b)
    }

    pub fn psi(&self, lambda: f64) -> f64 {
        self.chi(lambda) - self.chi(2.0 * lambda)
    }

    /// `ψ_j(λ) = ψ(2^{-j} λ)`.
    pub fn psi_j(&self, j: i32, lambda: f64) -> f64 {
        self.psi(lambda * pow2(-j))
    }

    /// Blocks `j` with `ψ_j(ω) ≠ 0` can only occur for `ω ∈ (2^{j-1}, 2^{j+1})`;
    /// returns the `j` range that can be nonzero for some `ω ∈ [w_lo, w_hi]`.
    pub fn active_range(&self, w_lo: f64, w_hi: f64) -> (i32, i32) {
        let lo = (w_lo.max(f64::MIN_POSITIVE)).log2().floor() as i32 - 1;
        let hi = w_hi.max(f64::MIN_POSITIVE).log2().ceil() as i32 + 1;
        (lo, hi)
    }

    /// Eigenvalue window `[4^{j-1}, 4^{j+1}]` outside of which `ψ_j(√λ) = 0`.
    pub fn eigenvalue_window(j: i32) -> (f64, f64) {
        (pow2(2 * (j - 1)), pow2(2 * (j + 1)))
    }
}

fn pow2(n: i32) -> f64 {
    2.0f64.powi(n)
}
