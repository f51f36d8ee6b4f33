use alloc::vec::Vec;


use crate::error::{Error, Result};

fn check_laguerre(alpha: f64, t: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::domain("laguerre alpha", alpha));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("laguerre argument", t));
    }
    Ok(())
}

/// Generalized Laguerre polynomial `L_m^α(t)` by the three-term recurrence
/// `(j+1) L_{j+1} = (2j+1+α-t) L_j - (j+α) L_{j-1}`.
pub fn laguerre(m: usize, alpha: f64, t: f64) -> Result<f64> {
    check_laguerre(alpha, t)?;
    let mut prev = 1.0;
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - t;
    for j in 1..m {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - t) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `[L_0^α(t), …, L_{m_max}^α(t)]`.
pub fn laguerre_sequence(m_max: usize, alpha: f64, t: f64) -> Result<Vec<f64>> {
    check_laguerre(alpha, t)?;
    let mut out = Vec::with_capacity(m_max + 1);
    out.push(1.0);
    if m_max == 0 {
        return Ok(out);
    }
    out.push(1.0 + alpha - t);
    for j in 1..m_max {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - t) * out[j] - (jf + alpha) * out[j - 1]) / (jf + 1.0);
        out.push(next);
    }
    Ok(out)
}

fn check_unit(u: f64) -> Result<()> {
    if !(u.abs() <= 1.0) {
        return Err(Error::domain("legendre argument", u));
    }
    Ok(())
}

/// Legendre polynomial `P_k(u)` by Bonnet's recurrence.
pub fn legendre_p(k: usize, u: f64) -> Result<f64> {
    check_unit(u)?;
    let mut prev = 1.0;
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = u;
    for j in 1..k {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0) * u * cur - jf * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `[P_0(u), …, P_{k_max}(u)]`.
pub fn legendre_sequence(k_max: usize, u: f64) -> Result<Vec<f64>> {
    check_unit(u)?;
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(1.0);
    if k_max == 0 {
        return Ok(out);
    }
    out.push(u);
    for j in 1..k_max {
        let jf = j as f64;
        out.push(((2.0 * jf + 1.0) * u * out[j] - jf * out[j - 1]) / (jf + 1.0));
    }
    Ok(out)
}

/// Associated Legendre function `P_k^n(u) = (1-u²)^{|n|/2} dⁿ/duⁿ P_k(u)`.
///
/// No Condon–Shortley phase, and negative orders reuse `|n|`; both choices
/// drop out of every product `Y_n^k conj(Y_n^k)`.
pub fn assoc_legendre(k: usize, n: i64, u: f64) -> Result<f64> {
    check_unit(u)?;
    let order = n.unsigned_abs() as usize;
    if order > k {
        return Err(Error::Invalid { what: "associated Legendre order", reason: "|n| must not exceed k" });
    }
    let s = (1.0 - u * u).max(0.0).sqrt();
    // P_n^n = (2n-1)!! s^n
    let mut pmm = 1.0;
    for i in 0..order {
        pmm *= (2 * i + 1) as f64 * s;
    }
    if k == order {
        return Ok(pmm);
    }
    let mut prev = pmm;
    let mut cur = u * (2 * order + 1) as f64 * pmm;
    for l in (order + 2)..=k {
        let lf = l as f64;
        let of = order as f64;
        let next = ((2.0 * lf - 1.0) * u * cur - (lf + of - 1.0) * prev) / (lf - of);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
