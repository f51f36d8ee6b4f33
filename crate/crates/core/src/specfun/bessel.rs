//! Real-order Bessel functions `J_ν(x)` and `e^{-x} I_ν(x)` for `ν, x ≥ 0`.
//!
//! Three evaluation regimes:
//!
//! - ascending power series when `x < 2` or `x²/4 ≤ ν + 1` (the terms never
//!   grow, so the alternating `J` series loses at most a few digits);
//! - Hankel asymptotic expansion when `x ≥ 30` and `ν² ≤ x`;
//! - Steed's continued-fraction method (CF1 for the logarithmic derivative,
//!   downward recurrence, CF2 plus the Wronskian for normalization) for the
//!   band in between, which the other two cannot cover when `ν` is large.


use super::{log_gamma, CompensatedSum, SeriesTolerance};
use crate::error::{Error, Result};

const HANKEL_MIN_X: f64 = 30.0;
const CF_MAX_ITER: usize = 100_000;
const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;
const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    J,
    IScaled,
}

fn check_args(nu: f64, x: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain("bessel order", nu));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain("bessel argument", x));
    }
    Ok(())
}

fn use_series(nu: f64, x: f64) -> bool {
    x < 2.0 || 0.25 * x * x <= nu + 1.0
}

fn use_hankel(nu: f64, x: f64) -> bool {
    x >= HANKEL_MIN_X && nu * nu <= x
}

/// `J_ν(x)` with the default series tolerance.
pub fn bessel_j(nu: f64, x: f64) -> Result<f64> {
    bessel_j_with(nu, x, &SeriesTolerance::default())
}

pub fn bessel_j_with(nu: f64, x: f64, tol: &SeriesTolerance) -> Result<f64> {
    check_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if use_series(nu, x) {
        series(Kind::J, nu, x, tol)
    } else if use_hankel(nu, x) {
        hankel(Kind::J, nu, x)
    } else {
        steed_j(nu, x)
    }
}

/// `e^{-x} I_ν(x)` with the default series tolerance. Strictly positive for `x > 0`.
pub fn bessel_i_scaled(nu: f64, x: f64) -> Result<f64> {
    bessel_i_scaled_with(nu, x, &SeriesTolerance::default())
}

pub fn bessel_i_scaled_with(nu: f64, x: f64, tol: &SeriesTolerance) -> Result<f64> {
    check_args(nu, x)?;
    if x == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if use_series(nu, x) {
        series(Kind::IScaled, nu, x, tol)
    } else if use_hankel(nu, x) {
        hankel(Kind::IScaled, nu, x)
    } else {
        steed_i_scaled(nu, x)
    }
}

/// The leading-term bound `(x/2)^ν / Γ(ν+1)`.
///
/// For `ν ≥ 0` it dominates `|J_ν(x)|` for every real `x ≥ 0`; multiplied by
/// `exp(x²/(4(ν+1)) - x)` it dominates `e^{-x} I_ν(x)`.
pub fn bessel_power_bound(nu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    match log_gamma(nu + 1.0) {
        Ok(lg) => (nu * (0.5 * x).ln() - lg).exp(),
        Err(_) => f64::INFINITY,
    }
}

fn series(kind: Kind, nu: f64, x: f64, tol: &SeriesTolerance) -> Result<f64> {
    let half = 0.5 * x;
    let mut log_first = nu * half.ln() - log_gamma(nu + 1.0)?;
    if kind == Kind::IScaled {
        log_first -= x;
    }
    let first = log_first.exp();
    if first == 0.0 {
        return Ok(0.0);
    }
    let q = match kind {
        Kind::J => -half * half,
        Kind::IScaled => half * half,
    };
    let mut acc = CompensatedSum::default();
    let mut term = first;
    acc.add(term);
    for m in 1..tol.max_terms() {
        let mf = m as f64;
        term *= q / (mf * (mf + nu));
        acc.add(term);
        if term.abs() <= tol.rel_tol() * acc.value().abs() {
            return Ok(acc.value());
        }
    }
    Err(Error::NonConvergence { what: "bessel power series", terms: tol.max_terms() })
}

fn hankel(kind: Kind, nu: f64, x: f64) -> Result<f64> {
    let mu = 4.0 * nu * nu;
    let eightx = 8.0 * x;
    // term_k = a_k(ν) / x^k
    let mut term = 1.0;
    let mut p = CompensatedSum::default();
    let mut q = CompensatedSum::default();
    let mut alt = CompensatedSum::default();
    p.add(1.0);
    alt.add(1.0);
    let mut last = f64::INFINITY;
    for k in 1..200usize {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        term *= (mu - odd * odd) / (kf * eightx);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        match k % 4 {
            0 => p.add(term),
            1 => q.add(term),
            2 => p.add(-term),
            _ => q.add(-term),
        }
        if k % 2 == 0 {
            alt.add(term);
        } else {
            alt.add(-term);
        }
        if mag <= 0.25 * f64::EPSILON * (p.value().abs() + q.value().abs()) {
            break;
        }
    }
    let pre = (2.0 / (core::f64::consts::PI * x)).sqrt();
    Ok(match kind {
        Kind::J => {
            let omega = x - (0.5 * nu + 0.25) * core::f64::consts::PI;
            pre * (p.value() * omega.cos() - q.value() * omega.sin())
        }
        Kind::IScaled => 0.5 * pre * alt.value(),
    })
}

fn steed_j(nu: f64, x: f64) -> Result<f64> {
    let nl = (nu - x + 1.5).floor().max(0.0) as usize;
    let xmu = nu - nl as f64;
    let xi = x.recip();
    let xi2 = 2.0 * xi;
    let w = xi2 / core::f64::consts::PI;

    // CF1: f = J'_ν / J_ν
    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..CF_MAX_ITER {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - c.recip();
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = d.recip();
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "bessel J continued fraction", terms: CF_MAX_ITER });
    }

    // Downward recurrence from ν to μ = ν - nl on unnormalized values.
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let mut rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
        if rjl.abs() > RESCALE_ABOVE {
            rjl *= RESCALE_BY;
            rjpl *= RESCALE_BY;
            rjl1 *= RESCALE_BY;
        }
    }
    if rjl == 0.0 {
        rjl = f64::EPSILON;
    }
    let f = rjpl / rjl;

    // CF2: p + iq = (J'_μ + iY'_μ) / (J_μ + iY_μ)
    let mut a = 0.25 - xmu * xmu;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let mut fct = a * xi / (p * p + q * q);
    let mut cr = br + q * fct;
    let mut ci = bi + p * fct;
    let mut den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let mut temp = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = temp;
    converged = false;
    for i in 1..CF_MAX_ITER {
        a += (2 * i) as f64;
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        fct = a / (cr * cr + ci * ci);
        cr = br + cr * fct;
        ci = bi - ci * fct;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        if (dlr - 1.0).abs() + dli.abs() <= f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "bessel J second continued fraction", terms: CF_MAX_ITER });
    }
    let gam = (p - f) / q;
    let mut rjmu = (w / ((p - f) * gam + q)).sqrt();
    if rjl < 0.0 {
        rjmu = -rjmu;
    }
    Ok(rjl1 * (rjmu / rjl))
}

fn steed_i_scaled(nu: f64, x: f64) -> Result<f64> {
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xi = x.recip();
    let xi2 = 2.0 * xi;

    // CF1: f = I'_ν / I_ν
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    let mut converged = false;
    for _ in 0..CF_MAX_ITER {
        b += xi2;
        d = (b + d).recip();
        c = b + c.recip();
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "bessel I continued fraction", terms: CF_MAX_ITER });
    }

    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let mut ril1 = ril;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
        if ril.abs() > RESCALE_ABOVE {
            ril *= RESCALE_BY;
            ripl *= RESCALE_BY;
            ril1 *= RESCALE_BY;
        }
    }
    let f = ripl / ril;

    // Steed/Temme CF2 for e^x K_μ(x) and e^x K_{μ+1}(x).
    let mut b = 2.0 * (1.0 + x);
    let mut d = b.recip();
    let mut delh = d;
    let mut hh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - xmu * xmu;
    let mut q = a1;
    let mut cc = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    converged = false;
    for i in 1..CF_MAX_ITER {
        a -= (2 * i) as f64;
        cc = -a * cc / (i as f64 + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += cc * qnew;
        b += 2.0;
        d = (b + a * d).recip();
        delh = (b * d - 1.0) * delh;
        hh += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() <= f64::EPSILON {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence { what: "bessel K continued fraction", terms: CF_MAX_ITER });
    }
    hh *= a1;
    let rkmu = (core::f64::consts::PI / (2.0 * x)).sqrt() / s;
    let rk1 = rkmu * (xmu + x + 0.5 - hh) * xi;
    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    Ok(rimu * ril1 / ril)
}
