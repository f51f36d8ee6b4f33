//! Propagator kernels as angular series.
//!
//! Both the Schrödinger and heat kernels reduce, after summing the radial
//! quantum number with the Hille–Hardy formula, to a series over the angular
//! degree `k` weighted by the zonal functions `Z^{(k)}(u)`, `u = cos∠(x, y)`.
//! The Schrödinger series is the `K` function
//!
//! ```text
//! K(ρ, u) = ρ^{-1/2} Σ_k e^{-iπβ_k/2} J_{β_k}(ρ) Z^{(k)}(u)
//! ```
//!
//! (with an extra winding phase past `t = π`), and the heat series uses
//! `e^{-z} I_{β_k}(z)` in place of `J`.
//!
//! By default the series is split into the `a = 0` part, which the plane-wave
//! expansion sums in closed form, plus a difference series whose terms are
//! damped by `β_k - (k+1/2) ≈ a/(2k+1)`. For `a = 0` the difference series
//! vanishes identically. [`TruncationPolicy::direct`] switches to plain
//! summation of the original series.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::PolarPoint;
use crate::specfun::{bessel_i_scaled, bessel_j, laguerre_sequence, legendre_sequence, log_gamma};
use crate::spectral::{radial_profiles, OperatorParams};

/// `(2π)^{-3/2}`: modulus of the `K` function when `a = 0`.
pub const K_FREE_MODULUS: f64 = 0.063_493_635_934_240_97;

/// `(4π)^{-3/2}`.
pub const MEHLER_CONSTANT: f64 = 0.022_448_390_265_645_82;

const FOUR_PI: f64 = 4.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    tail_tol: f64,
    k_max_cap: usize,
    split: bool,
    singular_eps: f64,
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, k_max_cap: usize) -> Result<Self> {
        if !(tail_tol > 0.0) || !tail_tol.is_finite() {
            return Err(Error::domain("tail_tol", tail_tol));
        }
        if k_max_cap == 0 {
            return Err(Error::Invalid { what: "k_max_cap", reason: "must be at least 1" });
        }
        Ok(TruncationPolicy { tail_tol, k_max_cap, split: true, singular_eps: 1e-3 })
    }

    /// Sum the original series term by term instead of splitting off the closed-form part.
    pub fn direct(mut self) -> Self {
        self.split = false;
        self
    }

    pub fn with_split(mut self, split: bool) -> Self {
        self.split = split;
        self
    }

    pub fn with_singular_eps(mut self, eps: f64) -> Result<Self> {
        if !(eps > 0.0) || eps >= 0.5 {
            return Err(Error::domain("singular-time eps", eps));
        }
        self.singular_eps = eps;
        Ok(self)
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    pub fn k_max_cap(&self) -> usize {
        self.k_max_cap
    }

    pub fn split(&self) -> bool {
        self.split
    }

    pub fn singular_eps(&self) -> f64 {
        self.singular_eps
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { tail_tol: 1e-10, k_max_cap: 200, split: true, singular_eps: 1e-3 }
    }
}

/// A kernel value with its truncation certificate.
///
/// `tail_bound` bounds the dropped part of the angular series; the absolute
/// error it induces in `value` is at most `tail_bound * prefactor`.
/// `roundoff` estimates the floating-point cancellation error in `value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    pub k_used: usize,
    pub tail_bound: f64,
    pub prefactor: f64,
    pub roundoff: f64,
    pub truncated: bool,
}

impl KernelValue {
    /// Total error estimate, truncation plus roundoff.
    pub fn error_estimate(&self) -> f64 {
        self.tail_bound * self.prefactor + self.roundoff
    }
}

/// Picks the truncation degree from a majorant of the term moduli.
///
/// `bound(k)` must be an upper bound for the modulus of term `k` and decay at
/// least geometrically (ratio ≤ 1/2) once `k ≥ knee`.
fn choose_degree(policy: &TruncationPolicy, knee: f64, bound: impl Fn(usize) -> f64) -> (usize, f64, bool) {
    let tol = policy.tail_tol;
    let hard_stop = 50 * policy.k_max_cap + knee as usize + 64;
    let mut terms = Vec::new();
    let mut residual = f64::INFINITY;
    for k in 0..hard_stop {
        let b = bound(k);
        terms.push(b);
        if k as f64 >= knee + 2.0 && b <= 1e-6 * tol {
            residual = b;
            break;
        }
    }
    // suffix[k] = Σ_{j ≥ k} bound(j), including the geometric remainder
    let mut suffix = alloc::vec![0.0; terms.len() + 1];
    suffix[terms.len()] = residual;
    for k in (0..terms.len()).rev() {
        suffix[k] = suffix[k + 1] + terms[k];
    }
    let needed = (0..terms.len()).find(|&k| suffix[k + 1] <= tol);
    match needed {
        Some(k) if k <= policy.k_max_cap => (k, suffix[k + 1], false),
        _ => {
            let k = policy.k_max_cap.min(terms.len() - 1);
            (k, suffix[k + 1], true)
        }
    }
}

/// `ρ^{-1/2} (ρ/2)^ν / Γ(ν+1)`, a majorant of `ρ^{-1/2} |J_ν(ρ)|`.
fn j_majorant(nu: f64, rho: f64) -> f64 {
    match log_gamma(nu + 1.0) {
        Ok(lg) => (nu * (0.5 * rho).ln() - lg - 0.5 * rho.ln()).exp(),
        Err(_) => f64::INFINITY,
    }
}

/// Majorant of `e^{-z} I_ν(z)`.
fn i_majorant(nu: f64, z: f64) -> f64 {
    match log_gamma(nu + 1.0) {
        Ok(lg) => (nu * (0.5 * z).ln() - lg + z * z / (4.0 * (nu + 1.0)) - z).exp(),
        Err(_) => f64::INFINITY,
    }
}

/// `[Z^{(0)}(u), …, Z^{(k_max)}(u)]`.
pub fn zonal_table(k_max: usize, u: f64) -> Result<Vec<f64>> {
    zonal_weights(k_max, u)
}

fn zonal_weights(k_max: usize, u: f64) -> Result<Vec<f64>> {
    let p = legendre_sequence(k_max, u)?;
    Ok(p.into_iter().enumerate().map(|(k, pk)| (2 * k + 1) as f64 / FOUR_PI * pk).collect())
}

/// `e^{-iπ x}` with the argument reduced modulo 2 first.
fn half_turns(x: f64) -> Complex64 {
    let r = x.rem_euclid(2.0);
    Complex64::from_polar(1.0, -PI * r)
}

/// Closed form of `ρ^{-1/2} Σ_k e^{-iπ(k+1/2)(w+1/2)} J_{k+1/2}(ρ) Z^{(k)}(u)`.
fn free_angular_sum(rho: f64, u: f64, winding: i64) -> Complex64 {
    let w = winding.rem_euclid(4) as f64;
    let sign = if winding.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    half_turns(0.5 * (w + 0.5)) * Complex64::from_polar(K_FREE_MODULUS, -rho * sign * u)
}

/// Closed-form part of a [`KernelRow`].
#[derive(Debug, Clone, Copy, PartialEq)]
enum FreePart {
    None,
    /// The `a = 0` angular sum, added inside the outer factor.
    Plane { rho: f64, winding: i64 },
    /// The Mehler heat kernel, added after the outer factor.
    Mehler { t: f64, r1: f64, r2: f64 },
}

/// A kernel with its radial data fixed, as a function of `u = cos∠(x, y)`:
///
/// ```text
/// outer · (Σ_{k ≤ k_used} c_k Z^{(k)}(u) + closed-form part)
/// ```
///
/// The truncation degree depends only on the radial data, so a row is built
/// once (all Bessel evaluations happen here) and then evaluated at many
/// angles for the cost of a Legendre recurrence each.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelRow {
    coeffs: Vec<Complex64>,
    free: FreePart,
    outer: Complex64,
    conjugate: bool,
    k_used: usize,
    tail: f64,
    truncated: bool,
}

impl KernelRow {
    fn closed(free: FreePart) -> Self {
        KernelRow {
            coeffs: Vec::new(),
            free,
            outer: Complex64::new(1.0, 0.0),
            conjugate: false,
            k_used: 0,
            tail: 0.0,
            truncated: false,
        }
    }

    pub fn k_used(&self) -> usize {
        self.k_used
    }

    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn at(&self, u: f64) -> Result<KernelValue> {
        if !(-1.0..=1.0).contains(&u) {
            return Err(Error::domain("cosine of angle", u));
        }
        if self.coeffs.is_empty() {
            return self.at_tabulated(u, &[]);
        }
        self.at_tabulated(u, &zonal_weights(self.coeffs.len() - 1, u)?)
    }

    /// [`KernelRow::at`] with `zonal[k] = Z^{(k)}(u)` supplied for `k ≤ k_used`,
    /// e.g. from [`zonal_table`] shared across many rows.
    pub fn at_tabulated(&self, u: f64, zonal: &[f64]) -> Result<KernelValue> {
        if zonal.len() < self.coeffs.len() {
            return Err(Error::Invalid { what: "zonal table", reason: "shorter than the row degree" });
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs_sum = 0.0;
        for (c, &zk) in self.coeffs.iter().zip(zonal) {
            let term = c * zk;
            abs_sum += term.norm();
            sum += term;
        }
        if let FreePart::Plane { rho, winding } = self.free {
            let f = free_angular_sum(rho, u, winding);
            abs_sum += f.norm();
            sum += f;
        }
        let scale = self.outer.norm();
        let mut value = self.outer * sum;
        let mut roundoff = 4.0 * f64::EPSILON * scale * abs_sum;
        if let FreePart::Mehler { t, r1, r2 } = self.free {
            let f = mehler_heat(t, r1, r2, u);
            value += f;
            roundoff += 4.0 * f64::EPSILON * f;
        }
        if self.conjugate {
            value = value.conj();
        }
        Ok(KernelValue {
            value,
            k_used: self.k_used,
            tail_bound: self.tail,
            prefactor: scale,
            roundoff: roundoff + f64::EPSILON * value.norm(),
            truncated: self.truncated,
        })
    }

    /// [`KernelRow::at`] for each `u`, in order.
    pub fn at_many(&self, us: &[f64]) -> Result<Vec<KernelValue>> {
        us.iter().map(|&u| self.at(u)).collect()
    }
}

/// Row of `ρ^{-1/2} Σ_k e^{-iπβ_k(w+1/2)} J_{β_k}(ρ) Z^{(k)}(u)`.
pub fn k_function_row(rho: f64, winding: i64, params: &OperatorParams, policy: &TruncationPolicy) -> Result<KernelRow> {
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::domain("rho", rho));
    }
    let a = params.a();
    let plane = FreePart::Plane { rho, winding };
    if rho == 0.0 {
        return Ok(KernelRow::closed(if a == 0.0 { plane } else { FreePart::None }));
    }
    if policy.split && a == 0.0 {
        return Ok(KernelRow::closed(plane));
    }
    let zonal_max = |k: usize| (2 * k + 1) as f64 / FOUR_PI;
    let (k_used, tail, truncated) = if policy.split {
        choose_degree(policy, rho, |k| {
            (j_majorant(params.beta(k), rho) + j_majorant(k as f64 + 0.5, rho)) * zonal_max(k)
        })
    } else {
        choose_degree(policy, rho, |k| j_majorant(params.beta(k), rho) * zonal_max(k))
    };
    let scale = 1.0 / rho.sqrt();
    let turns = winding as f64 + 0.5;
    let mut coeffs = Vec::with_capacity(k_used + 1);
    for k in 0..=k_used {
        let beta = params.beta(k);
        let mut c = half_turns(beta * turns) * (bessel_j(beta, rho)? * scale);
        if policy.split {
            let h = k as f64 + 0.5;
            c -= half_turns(h * turns) * (bessel_j(h, rho)? * scale);
        }
        coeffs.push(c);
    }
    Ok(KernelRow {
        coeffs,
        free: if policy.split { plane } else { FreePart::None },
        outer: Complex64::new(1.0, 0.0),
        conjugate: false,
        k_used,
        tail,
        truncated,
    })
}

/// `K(ρ, u) = ρ^{-1/2} Σ_k i^{-β_k} J_{β_k}(ρ) Z^{(k)}(u)`, with `i^{-β} = e^{-iπβ/2}`.
pub fn k_function(rho: f64, u: f64, params: &OperatorParams, policy: &TruncationPolicy) -> Result<KernelValue> {
    k_function_wound(rho, u, 0, params, policy)
}

/// `K` with the phase `e^{-iπβ_k/2}` replaced by `e^{-iπβ_k(w+1/2)}`; this is
/// the series that appears in the Schrödinger kernel for `t ∈ (wπ, (w+1)π)`.
pub fn k_function_wound(
    rho: f64,
    u: f64,
    winding: i64,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<KernelValue> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::domain("cosine of angle", u));
    }
    k_function_row(rho, winding, params, policy)?.at(u)
}

/// Kernel of `e^{-itH}` at `(x, y)`.
///
/// For `t = wπ + s`, `s ∈ (0, π)`:
///
/// ```text
/// (-1)^w (-i) (2 sin s)^{-3/2} e^{i(r₁²+r₂²) cot(s)/4} K_w(r₁r₂/(2 sin s), u)
/// ```
///
/// Negative times use `K_{-t} = conj(K_t)`.
pub fn schrodinger_kernel(
    t: f64,
    x: &PolarPoint,
    y: &PolarPoint,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<KernelValue> {
    schrodinger_kernel_radial(t, x.r, y.r, x.cos_angle(y), params, policy)
}

/// [`schrodinger_kernel`] in terms of the radii and the cosine of the angle.
pub fn schrodinger_kernel_radial(
    t: f64,
    r1: f64,
    r2: f64,
    u: f64,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<KernelValue> {
    schrodinger_row(t, r1, r2, params, policy)?.at(u)
}

/// The Schrödinger kernel at fixed `(t, r₁, r₂)` as a function of `u`.
pub fn schrodinger_row(
    t: f64,
    r1: f64,
    r2: f64,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<KernelRow> {
    if !t.is_finite() {
        return Err(Error::domain("time", t));
    }
    check_radius(r1)?;
    check_radius(r2)?;
    let tt = t.abs();
    let winding = (tt / PI).floor();
    let s = tt - winding * PI;
    let eps = policy.singular_eps;
    // a few ulps of slack so that the endpoints ε and π − ε themselves are admitted
    let slack = 4.0 * f64::EPSILON * PI;
    if s + slack < eps || PI - s + slack < eps {
        return Err(Error::SingularTime { t, eps });
    }
    let (sin_s, cos_s) = s.sin_cos();
    let rho = r1 * r2 / (2.0 * sin_s);
    let mut row = k_function_row(rho, winding as i64, params, policy)?;
    let modulus = (2.0 * sin_s).powf(-1.5);
    let sign = if (winding as i64) % 2 == 0 { 1.0 } else { -1.0 };
    let chirp = Complex64::from_polar(sign * modulus, 0.25 * (r1 * r1 + r2 * r2) * cos_s / sin_s);
    row.outer = Complex64::new(0.0, -1.0) * chirp;
    row.conjugate = t < 0.0;
    Ok(row)
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::domain("radius", r));
    }
    Ok(())
}

/// `(4π sinh t)^{-3/2} exp(-((r₁²+r₂²) cosh t - 2 r₁ r₂ u)/(4 sinh t))`, the `a = 0` heat kernel.
pub fn mehler_heat(t: f64, r1: f64, r2: f64, u: f64) -> f64 {
    let (sh, ch) = (t.sinh(), t.cosh());
    // (r₁²+r₂²) cosh t - 2r₁r₂u = (r₁-r₂)² cosh t + 2r₁r₂(cosh t - u), both terms ≥ 0
    let e = (r1 - r2).powi(2) * ch + 2.0 * r1 * r2 * (ch - u);
    (FOUR_PI * sh).powf(-1.5) * (-e / (4.0 * sh)).exp()
}

/// The `a = 0` Schrödinger kernel `(4πi sin t)^{-3/2} exp(i((r₁²+r₂²) cos t - 2r₁r₂u)/(4 sin t))`,
/// valid for `t ∈ (0, π)`.
pub fn mehler_schrodinger(t: f64, r1: f64, r2: f64, u: f64) -> Complex64 {
    let (st, ct) = t.sin_cos();
    let phase = ((r1 * r1 + r2 * r2) * ct - 2.0 * r1 * r2 * u) / (4.0 * st);
    Complex64::from_polar((FOUR_PI * st).powf(-1.5), phase - 0.75 * PI)
}

/// Kernel of `e^{-tH}` at `(x, y)`, a real number.
///
/// ```text
/// e^{E} / (2√(r₁r₂) sinh t) Σ_k e^{-z} I_{β_k}(z) Z^{(k)}(u),
/// z = r₁r₂/(2 sinh t),  E = -((r₁²+r₂²) cosh t - 2r₁r₂)/(4 sinh t)
/// ```
///
/// With the default split, the closed-form `a = 0` kernel is added to a
/// difference series whose terms are all of one sign. For `a > 0` and points
/// where the kernel is many orders of magnitude below `(sinh t)^{-3/2}` the
/// two parts cancel; `roundoff` then reports the resulting absolute error.
pub fn heat_kernel(
    t: f64,
    x: &PolarPoint,
    y: &PolarPoint,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<KernelValue> {
    heat_kernel_radial(t, x.r, y.r, x.cos_angle(y), params, policy)
}

pub fn heat_kernel_radial(
    t: f64,
    r1: f64,
    r2: f64,
    u: f64,
    params: &OperatorParams,
    policy: &TruncationPolicy,
) -> Result<KernelValue> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(Error::domain("cosine of angle", u));
    }
    heat_row(t, r1, r2, params, policy)?.at(u)
}

/// The heat kernel at fixed `(t, r₁, r₂)` as a function of `u`.
pub fn heat_row(t: f64, r1: f64, r2: f64, params: &OperatorParams, policy: &TruncationPolicy) -> Result<KernelRow> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("heat time", t));
    }
    check_radius(r1)?;
    check_radius(r2)?;
    let a = params.a();
    let mehler = FreePart::Mehler { t, r1, r2 };
    if r1 * r2 == 0.0 {
        return Ok(KernelRow::closed(if a == 0.0 { mehler } else { FreePart::None }));
    }
    if a == 0.0 && policy.split {
        return Ok(KernelRow::closed(mehler));
    }
    let (sh, ch) = (t.sinh(), t.cosh());
    let z = r1 * r2 / (2.0 * sh);
    let exponent = -((r1 - r2).powi(2) * ch + 2.0 * r1 * r2 * (ch - 1.0)) / (4.0 * sh);
    let prefactor = exponent.exp() / (2.0 * (r1 * r2).sqrt() * sh);
    let zonal_max = |k: usize| (2 * k + 1) as f64 / FOUR_PI;
    let (k_used, tail, truncated) = if policy.split {
        // 0 ≤ Ĩ_{k+1/2} - Ĩ_{β_k} ≤ Ĩ_{k+1/2} since I_ν decreases in ν
        choose_degree(policy, z, |k| i_majorant(k as f64 + 0.5, z) * zonal_max(k))
    } else {
        choose_degree(policy, z, |k| i_majorant(params.beta(k), z) * zonal_max(k))
    };
    let mut coeffs = Vec::with_capacity(k_used + 1);
    for k in 0..=k_used {
        let mut c = bessel_i_scaled(params.beta(k), z)?;
        if policy.split {
            c -= bessel_i_scaled(k as f64 + 0.5, z)?;
        }
        coeffs.push(Complex64::new(c, 0.0));
    }
    Ok(KernelRow {
        coeffs,
        free: if policy.split { mehler } else { FreePart::None },
        outer: Complex64::new(prefactor, 0.0),
        conjugate: false,
        k_used,
        tail,
        truncated,
    })
}

/// Relative residual of the Hille–Hardy formula
///
/// ```text
/// Σ_{m=0}^{M} m! L_m^α(x) L_m^α(y) r^m / Γ(1+α+m)
///     = e^{-r(x+y)/(1-r)} / ((1-r)(xyr)^{α/2}) · I_α(2√(xyr)/(1-r)).
/// ```
pub fn hille_hardy_check(alpha: f64, x: f64, y: f64, r: f64, terms: usize) -> Result<f64> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::domain("laguerre alpha", alpha));
    }
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("Hille-Hardy r", r));
    }
    let lx = laguerre_sequence(terms, alpha, x)?;
    let ly = laguerre_sequence(terms, alpha, y)?;
    let mut q = (-log_gamma(1.0 + alpha)?).exp();
    let mut rm = 1.0;
    let mut partial = 0.0;
    for m in 0..=terms {
        if m > 0 {
            q *= m as f64 / (m as f64 + alpha);
            rm *= r;
        }
        partial += q * lx[m] * ly[m] * rm;
    }
    let closed = hille_hardy_closed_form(alpha, x, y, r)?;
    Ok((partial - closed).abs() / closed.abs())
}

/// Right-hand side of the Hille–Hardy formula, continuous down to `xy = 0`.
pub fn hille_hardy_closed_form(alpha: f64, x: f64, y: f64, r: f64) -> Result<f64> {
    if !(x >= 0.0) || !(y >= 0.0) {
        return Err(Error::domain("Hille-Hardy argument", x.min(y)));
    }
    let one_minus = 1.0 - r;
    let w = 2.0 * (x * y * r).sqrt() / one_minus;
    let damp = -r * (x + y) / one_minus;
    if w < 1.0 {
        // (xyr)^{-α/2} I_α(w) = (1-r)^{-α} Σ_j (w²/4)^j / (j! Γ(α+j+1))
        let q = 0.25 * w * w;
        let mut term = (-log_gamma(alpha + 1.0)?).exp();
        let mut sum = term;
        let mut j = 0usize;
        while term > f64::EPSILON * sum.abs() * 1e-3 && j < 200 {
            j += 1;
            term *= q / (j as f64 * (alpha + j as f64));
            sum += term;
        }
        Ok(damp.exp() * one_minus.powf(-1.0 - alpha) * sum)
    } else if alpha < 0.0 {
        // would need I of negative order
        Err(Error::domain("Hille-Hardy alpha (negative, large argument)", alpha))
    } else {
        let iw = bessel_i_scaled(alpha, w)?;
        Ok((damp + w).exp() / (one_minus * (x * y * r).powf(0.5 * alpha)) * iw)
    }
}

/// Kernel of `F(H)` as the finite spectral sum over eigenvalues in `[lo, hi]`:
///
/// ```text
/// Σ_{lo ≤ λ_{m,k} ≤ hi} F(λ_{m,k}) R_{m,k}(r₁) R_{m,k}(r₂) Z^{(k)}(u)
/// ```
///
/// This is the mode-by-mode definition of the kernel and serves as the
/// reference for the closed forms above when `r₁r₂` is small.
pub fn spectral_kernel(
    params: &OperatorParams,
    lo: f64,
    hi: f64,
    multiplier: impl Fn(f64) -> Complex64,
    x: &PolarPoint,
    y: &PolarPoint,
) -> Result<Complex64> {
    spectral_kernel_radial(params, lo, hi, multiplier, x.r, y.r, x.cos_angle(y))
}

pub fn spectral_kernel_radial(
    params: &OperatorParams,
    lo: f64,
    hi: f64,
    multiplier: impl Fn(f64) -> Complex64,
    r1: f64,
    r2: f64,
    u: f64,
) -> Result<Complex64> {
    Ok(spectral_row(params, lo, hi, multiplier, r1, r2)?.at(u)?.value)
}

/// [`spectral_kernel`] at fixed radii as a function of `u`; the row
/// coefficients are `c_k = Σ_m F(λ_{m,k}) R_{m,k}(r₁) R_{m,k}(r₂)`.
pub fn spectral_row(
    params: &OperatorParams,
    lo: f64,
    hi: f64,
    multiplier: impl Fn(f64) -> Complex64,
    r1: f64,
    r2: f64,
) -> Result<KernelRow> {
    if !(hi >= lo) {
        return Err(Error::domain("spectral window upper edge", hi));
    }
    check_radius(r1)?;
    check_radius(r2)?;
    if params.eigenvalue(0, 0) > hi {
        return Ok(KernelRow::closed(FreePart::None));
    }
    let mut k_top = 0usize;
    while params.eigenvalue(0, k_top + 1) <= hi {
        k_top += 1;
    }
    let mut coeffs = Vec::with_capacity(k_top + 1);
    for k in 0..=k_top {
        let lam0 = params.eigenvalue(0, k);
        let m_top = ((hi - lam0) / 2.0).floor() as usize;
        let p1 = radial_profiles(m_top, k, params, r1)?;
        let p2 = radial_profiles(m_top, k, params, r2)?;
        let mut c = Complex64::new(0.0, 0.0);
        for m in 0..=m_top {
            let lam = params.eigenvalue(m, k);
            if lam >= lo && lam <= hi {
                c += multiplier(lam) * (p1[m] * p2[m]);
            }
        }
        coeffs.push(c);
    }
    Ok(KernelRow {
        coeffs,
        free: FreePart::None,
        outer: Complex64::new(1.0, 0.0),
        conjugate: false,
        k_used: k_top,
        tail: 0.0,
        truncated: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64) -> OperatorParams {
        OperatorParams::new(a).unwrap()
    }

    #[test]
    fn constants() {
        assert!((K_FREE_MODULUS - (2.0 * PI).powf(-1.5)).abs() < 1e-17);
        assert!((MEHLER_CONSTANT - (4.0 * PI).powf(-1.5)).abs() < 1e-17);
    }

    #[test]
    fn free_k_function_has_constant_modulus() {
        let pol = TruncationPolicy::default();
        for &rho in &[0.0, 0.3, 5.0, 39.0] {
            for &u in &[-1.0, -0.2, 0.7, 1.0] {
                let v = k_function(rho, u, &p(0.0), &pol).unwrap();
                assert!((v.value.norm() - K_FREE_MODULUS).abs() < 1e-15);
                let d = k_function(rho, u, &p(0.0), &pol.direct()).unwrap();
                assert!((d.value - v.value).norm() <= d.error_estimate() + 1e-15, "rho={rho} u={u}");
                assert!(!d.truncated && d.tail_bound <= 1e-10);
            }
        }
    }

    #[test]
    fn k_function_vanishes_at_origin_for_positive_coupling() {
        let v = k_function(0.0, 0.3, &p(1.0), &TruncationPolicy::default()).unwrap();
        assert_eq!(v.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn split_and_direct_agree_for_positive_coupling() {
        let pol = TruncationPolicy::default();
        for &a in &[0.5, 1.0, 2.0] {
            for &rho in &[0.01, 1.0, 7.5, 25.0] {
                for &u in &[-0.9, 0.0, 0.95] {
                    let s = k_function(rho, u, &p(a), &pol).unwrap();
                    let d = k_function(rho, u, &p(a), &pol.direct()).unwrap();
                    assert!((s.value - d.value).norm() < 1e-9, "a={a} rho={rho} u={u}");
                }
            }
        }
    }

    #[test]
    fn truncation_is_flagged() {
        let pol = TruncationPolicy::new(1e-10, 5).unwrap();
        let v = k_function(30.0, 0.2, &p(1.0), &pol).unwrap();
        assert!(v.truncated && v.k_used == 5 && v.tail_bound > 1e-10);
    }

    #[test]
    fn schrodinger_free_case_is_mehler() {
        let pol = TruncationPolicy::default().direct();
        for &t in &[0.2, 1.0, 2.5] {
            for &(r1, r2, u) in &[(0.5, 1.0, 0.3), (2.0, 1.5, -0.8), (0.1, 3.0, 1.0)] {
                let v = schrodinger_kernel_radial(t, r1, r2, u, &p(0.0), &pol).unwrap();
                let m = mehler_schrodinger(t, r1, r2, u);
                assert!((v.value - m).norm() <= 1e-9 * m.norm(), "t={t}: {} vs {m}", v.value);
            }
        }
    }

    #[test]
    fn schrodinger_winding_free_case_is_parity() {
        // a = 0: e^{-iπH} = e^{-3iπ/2} × parity, so K_{t+π}(x, y) = e^{-3iπ/2} K_t(-x, y)
        let pol = TruncationPolicy::default().direct();
        let (r1, r2, u, t) = (0.7, 1.3, 0.4, 0.9);
        let base = mehler_schrodinger(t, r1, r2, -u) * Complex64::from_polar(1.0, -1.5 * PI);
        let next = schrodinger_kernel_radial(t + PI, r1, r2, u, &p(0.0), &pol).unwrap().value;
        assert!((next - base).norm() < 1e-10 * base.norm(), "{next} vs {base}");
        let twice = schrodinger_kernel_radial(t + 2.0 * PI, r1, r2, u, &p(0.0), &pol).unwrap().value;
        let base2 = mehler_schrodinger(t, r1, r2, u) * Complex64::from_polar(1.0, -3.0 * PI);
        assert!((twice - base2).norm() < 1e-10 * base2.norm());
    }

    #[test]
    fn schrodinger_winding_split_matches_direct() {
        let pol = TruncationPolicy::default();
        for w in 0..4 {
            let t = 0.8 + w as f64 * PI;
            let s = schrodinger_kernel_radial(t, 1.1, 0.6, -0.3, &p(1.7), &pol).unwrap();
            let d = schrodinger_kernel_radial(t, 1.1, 0.6, -0.3, &p(1.7), &pol.direct()).unwrap();
            assert!((s.value - d.value).norm() <= s.error_estimate() + d.error_estimate() + 1e-14);
        }
    }

    #[test]
    fn heat_matches_spectral_sum() {
        let a = p(1.2);
        let pol = TruncationPolicy::default();
        for &t in &[0.5, 1.5] {
            let (r1, r2, u) = (0.6, 0.9, 0.25);
            let kv = heat_kernel_radial(t, r1, r2, u, &a, &pol).unwrap();
            let k = kv.value.re;
            let s = spectral_kernel_radial(&a, 0.0, 160.0, |l| Complex64::new((-t * l).exp(), 0.0), r1, r2, u).unwrap();
            assert!((k - s.re).abs() <= kv.error_estimate() + 1e-13 * k, "t={t}: {k} vs {s} {kv:?}");
        }
    }

    #[test]
    fn singular_times_rejected() {
        let pol = TruncationPolicy::default();
        for &t in &[0.0, PI, 2.0 * PI + 1e-4, -PI] {
            assert!(matches!(
                schrodinger_kernel_radial(t, 1.0, 1.0, 0.0, &p(1.0), &pol),
                Err(Error::SingularTime { .. })
            ));
        }
    }

    #[test]
    fn heat_free_direct_series_is_mehler() {
        let pol = TruncationPolicy::default().direct();
        for &t in &[0.1, 0.5, 2.0] {
            for &(r1, r2, u) in &[(0.5, 1.0, 0.3), (2.0, 1.5, -0.8), (3.0, 3.0, 1.0)] {
                let v = heat_kernel_radial(t, r1, r2, u, &p(0.0), &pol).unwrap();
                let m = mehler_heat(t, r1, r2, u);
                assert!((v.value.re - m).abs() <= v.error_estimate() + 1e-14 * m, "t={t}");
            }
        }
    }

    #[test]
    fn heat_split_matches_direct() {
        let a = p(1.5);
        let pol = TruncationPolicy::default();
        for &t in &[0.3, 1.0, 3.0] {
            for &(r1, r2, u) in &[(0.5, 1.0, 0.3), (1.2, 1.5, 0.9)] {
                let s = heat_kernel_radial(t, r1, r2, u, &a, &pol).unwrap();
                let d = heat_kernel_radial(t, r1, r2, u, &a, &pol.direct()).unwrap();
                assert!(
                    (s.value.re - d.value.re).abs() <= s.error_estimate() + d.error_estimate(),
                    "{s:?} {d:?}"
                );
                assert!(d.value.re > 0.0);
            }
        }
    }

    #[test]
    fn hille_hardy_examples() {
        assert!(hille_hardy_check(1.3, 2.0, 2.0, 0.5, 200).unwrap() <= 1e-8);
        assert!(hille_hardy_check(0.5, 1.0, 3.0, 0.9, 2000).unwrap() <= 1e-6);
        let at0 = hille_hardy_closed_form(0.7, 0.0, 2.0, 0.4).unwrap();
        let near = hille_hardy_closed_form(0.7, 1e-8, 2.0, 0.4).unwrap();
        assert!((at0 - near).abs() < 1e-7 * at0);
        assert!(hille_hardy_check(0.7, 0.0, 2.0, 0.4, 400).unwrap() < 1e-12);
        assert!(hille_hardy_check(0.5, 1.0, 1.0, 1.0, 10).is_err());
    }
}
