//! Gamma-family helpers: gamma, log-gamma, double factorial, Pochhammer
//! symbol, and the Neumann factor.

use crate::{Error, Result};

/// Lanczos parameter g = 7 with the standard 9-coefficient series
/// (Godfrey / Boost / CPython).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
];

fn lanczos_sum(x: f64) -> f64 {
    let mut sum = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS[1..].iter().enumerate() {
        sum += c / (x + (i + 1) as f64);
    }
    sum
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Gamma function for real arguments. Poles at the nonpositive integers
/// are domain errors; negative non-integer arguments go through the
/// reflection formula.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma: non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Domain(format!("gamma: pole at {x}")));
    }
    if x < 0.5 {
        // Gamma(x) Gamma(1-x) = pi / sin(pi x)
        return Ok(std::f64::consts::PI / ((std::f64::consts::PI * x).sin() * gamma_fn(1.0 - x)?));
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * std::f64::consts::PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// ln Gamma(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ln_gamma: argument {x} <= 0")));
    }
    if x < 0.5 {
        // reflection in log form keeps small arguments accurate
        return Ok((std::f64::consts::PI / (std::f64::consts::PI * x).sin()).ln()
            - ln_gamma(1.0 - x)?);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Double factorial n!! with the empty-product conventions
/// (-1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> f64 {
    if n <= 0 {
        return 1.0;
    }
    let mut acc = 1.0;
    let mut k = n;
    while k > 1 {
        acc *= k as f64;
        k -= 2;
    }
    acc
}

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
pub fn pochhammer(a: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= a + i as f64;
    }
    acc
}

/// Neumann factor eps_n = 2 - delta_n^0, weighting Fourier cosine series.
pub fn neumann_eps(n: u32) -> u32 {
    if n == 0 {
        1
    } else {
        2
    }
}
