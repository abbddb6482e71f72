//! Orthogonal polynomials: Chebyshev T, Gegenbauer C, Legendre P, and the
//! Ferrers associated Legendre functions P_l^m on [-1, 1] (Condon-Shortley
//! phase included).

use crate::{Error, Result};

/// Chebyshev polynomial of the first kind T_n(x) by the three-term
/// recurrence.
pub fn chebyshev_t(n: u32, x: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = x;
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Monomial coefficients of T_m, exact integers from the recurrence.
/// Coefficients fit i64 comfortably for the supported range (m <= 24 keeps
/// every coefficient below 2^53, so they also survive an f64 round-trip).
pub fn chebyshev_t_coeffs(m: u32) -> Vec<i64> {
    if m == 0 {
        return vec![1];
    }
    let mut prev: Vec<i64> = vec![1];
    let mut cur: Vec<i64> = vec![0, 1];
    for _ in 1..m {
        let mut next = vec![0i64; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer (ultraspherical) polynomial C_l^mu(x), mu > -1/2, by the
/// standard recurrence l C_l = 2(l+mu-1) x C_{l-1} - (l+2mu-2) C_{l-2}.
pub fn gegenbauer_c(l: u32, mu: f64, x: f64) -> Result<f64> {
    if !(mu > -0.5) {
        return Err(Error::Domain(format!("gegenbauer_c: mu = {mu} <= -1/2")));
    }
    if l == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * mu * x;
    for k in 2..=l {
        let kf = k as f64;
        let next = (2.0 * (kf + mu - 1.0) * x * cur - (kf + 2.0 * mu - 2.0) * prev) / kf;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Legendre polynomial P_l(x) = C_l^{1/2}(x).
pub fn legendre_pl(l: u32, x: f64) -> f64 {
    if l == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = x;
    for k in 1..l {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Ferrers function of the first kind P_l^m(x) on [-1, 1], Condon-Shortley
/// phase included (P_1^1(x) = -sqrt(1-x^2)). |m| > l returns 0 by
/// convention; negative m goes through
/// P_l^{-m} = (-1)^m (l-m)!/(l+m)! P_l^m.
pub fn assoc_legendre_plm(l: u32, m: i32, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("assoc_legendre_plm: x = {x} outside [-1, 1]")));
    }
    if m.unsigned_abs() > l {
        return Ok(0.0);
    }
    if m < 0 {
        let ma = (-m) as u32;
        let mut ratio = 1.0; // (l-m)!/(l+m)!
        for k in (l - ma + 1)..=(l + ma) {
            ratio /= k as f64;
        }
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        return Ok(sign * ratio * assoc_legendre_plm(l, ma as i32, x)?);
    }
    let m = m as u32;
    // seed P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}, then raise the degree
    let somx2 = ((1.0 - x) * (1.0 + x)).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * somx2;
    }
    if l == m {
        return Ok(pmm);
    }
    let mut pm1 = pmm;
    let mut cur = x * (2 * m + 1) as f64 * pmm;
    for ll in (m + 2)..=l {
        let lf = ll as f64;
        let mf = m as f64;
        let next = ((2.0 * lf - 1.0) * x * cur - (lf + mf - 1.0) * pm1) / (lf - mf);
        pm1 = cur;
        cur = next;
    }
    Ok(cur)
}
