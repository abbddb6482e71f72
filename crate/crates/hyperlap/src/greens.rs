//! Closed-form fundamental solutions on the hyperboloid: the radial kernel
//! I_d(rho) = int_rho^inf dx/sinh^{d-1}(x) in all of its equivalent
//! finite-sum, Gauss-hypergeometric, and Legendre-Q forms, the normalized
//! kernel H_R^d, the unit-radius unnormalized h^d, and the Euclidean
//! comparator G^d.
//!
//! The classical finite sums are exact but cancel catastrophically in f64
//! once (d-2) rho is large (the result is e^{-(d-1)rho} against O(1)
//! terms). They are therefore evaluated through exact algebraic
//! rearrangements with i128-rational coefficients:
//!
//! * odd d: a terminating polynomial in eps = coth(rho) - 1, assembled
//!   independently from both classical variants;
//! * even d: the direct form while (d-2) rho < 8, else a power
//!   series in u = e^{-rho} whose low-order coefficients cancel exactly
//!   (the log term enters as 2 atanh(u)).

use crate::geometry::{acosh_stable, geodesic_distance, AmbientPoint};
use crate::specfun::{double_factorial, gamma_fn, gauss_2f1, legendre_qhat_ln};
use crate::{Error, Result};

/// Representation tags for the equivalent forms of I_d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Representation {
    /// Finite sum (exact; the default dispatch).
    Finite,
    /// 2F1((d-1)/2, d/2; (d+1)/2; sech^2 rho) form.
    Hyp2f1A,
    /// 2F1(1/2, 1; (d+1)/2; sech^2 rho) form.
    Hyp2f1B,
    /// Half-integer-order Legendre Qhat form.
    LegendreQ,
}

impl Representation {
    pub const ALL: [Representation; 4] = [
        Representation::Finite,
        Representation::Hyp2f1A,
        Representation::Hyp2f1B,
        Representation::LegendreQ,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Representation::Finite => "finite",
            Representation::Hyp2f1A => "hyp2f1_a",
            Representation::Hyp2f1B => "hyp2f1_b",
            Representation::LegendreQ => "legendre_q",
        }
    }
}

impl std::str::FromStr for Representation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "finite" => Ok(Representation::Finite),
            "hyp2f1_a" | "hyp2f1a" => Ok(Representation::Hyp2f1A),
            "hyp2f1_b" | "hyp2f1b" => Ok(Representation::Hyp2f1B),
            "legendre_q" | "legendreq" => Ok(Representation::LegendreQ),
            other => Err(Error::Domain(format!("unknown representation '{other}'"))),
        }
    }
}

/// A tagged kernel value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensValue {
    pub d: u32,
    pub radius: f64,
    pub rho: f64,
    pub value: f64,
    pub representation: Representation,
}

impl GreensValue {
    /// Evaluate I_d(rho) through the requested representation and check
    /// the positivity invariant of the kernel.
    pub fn compute(d: u32, radius: f64, rho: f64, representation: Representation) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("radius {radius} must be positive")));
        }
        let value = i_d(d, rho, representation)?;
        if !(value > 0.0) {
            return Err(Error::Convergence(format!(
                "kernel value {value:e} lost positivity (d={d}, rho={rho})"
            )));
        }
        Ok(Self { d, radius, rho, value, representation })
    }
}

pub const MAX_DIMENSION: u32 = 16;
/// Below this separation the kernel is treated as singular.
pub const RHO_SINGULAR: f64 = 1e-8;

fn check_d_rho(d: u32, rho: f64) -> Result<()> {
    if d < 2 || d > MAX_DIMENSION {
        return Err(Error::Domain(format!(
            "dimension d = {d} outside supported range 2..={MAX_DIMENSION}"
        )));
    }
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("rho = {rho} must be positive and finite")));
    }
    if rho < RHO_SINGULAR {
        return Err(Error::Singularity(format!(
            "singularity at coincident points: rho = {rho:e} below the {RHO_SINGULAR:e} guard"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------
// exact rational scratch arithmetic for the finite-form coefficients
// ---------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
struct Ratio {
    num: i128,
    den: i128,
}

impl Ratio {
    const ZERO: Ratio = Ratio { num: 0, den: 1 };

    fn new(num: i128, den: i128) -> Ratio {
        assert!(den != 0);
        let mut r = Ratio { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.den < 0 {
            self.num = -self.num;
            self.den = -self.den;
        }
        let g = gcd(self.num.unsigned_abs(), self.den.unsigned_abs());
        if g > 1 {
            self.num /= g as i128;
            self.den /= g as i128;
        }
    }

    fn add(self, o: Ratio) -> Ratio {
        Ratio::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    fn mul_int(self, k: i128) -> Ratio {
        Ratio::new(self.num * k, self.den)
    }

    fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

fn binomial_i128(n: i128, k: i128) -> i128 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn factorial_i128(n: i128) -> i128 {
    (1..=n).product::<i128>().max(1)
}

fn double_factorial_i128(n: i128) -> i128 {
    if n <= 0 {
        return 1;
    }
    let mut acc = 1i128;
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

/// Coefficients B_j of the odd-d finite sum rewritten as
/// sum_j B_j eps^j with eps = coth(rho) - 1, assembled from the first
/// classical variant (the coth-power sum).
fn odd_coeffs_variant1(d: u32) -> Vec<Ratio> {
    let d = d as i128;
    let p_max = (d - 1) / 2;
    let sign = if ((d - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let mut coef = vec![Ratio::ZERO; (d - 1) as usize];
    coef[0] = Ratio::new(sign * double_factorial_i128(d - 3), double_factorial_i128(d - 2));
    let f = factorial_i128((d - 3) / 2);
    for k in 1..=p_max {
        let ksign = if k % 2 == 0 { 1 } else { -1 };
        let w = Ratio::new(
            sign * ksign * f,
            (2 * k - 1) * factorial_i128(k - 1) * factorial_i128((d - 2 * k - 1) / 2),
        );
        for j in 0..=(2 * k - 1) {
            coef[j as usize] = coef[j as usize].add(w.mul_int(binomial_i128(2 * k - 1, j)));
        }
    }
    coef
}

/// Same polynomial assembled from the second classical variant (the
/// cosh/sinh-power sum); agreement of the two coefficient vectors is the
/// dual-form consistency check of the "or" branch.
fn odd_coeffs_variant2(d: u32) -> Vec<Ratio> {
    let d = d as i128;
    let p_max = (d - 1) / 2;
    let sign = if ((d - 1) / 2) % 2 == 0 { 1 } else { -1 };
    let pref = Ratio::new(sign * double_factorial_i128(d - 3), double_factorial_i128(d - 2));
    let mut coef = vec![Ratio::ZERO; (d - 1) as usize];
    coef[0] = coef[0].add(pref);
    for k in 1..=p_max {
        let ksign = if k % 2 == 0 { 1 } else { -1 };
        let v = Ratio::new(ksign * double_factorial_i128(2 * k - 3), double_factorial_i128(2 * k - 2));
        // cosh/sinh^{2k-1} = (1+eps)(eps^2+2eps)^{k-1}
        for i in 0..=(k - 1) {
            let c = pref
                .mul_int(v.num)
                .mul_int(binomial_i128(k - 1, i))
                .mul_int(1 << (k - 1 - i));
            let c = Ratio::new(c.num, c.den * v.den);
            let p = (k - 1 + i) as usize;
            coef[p] = coef[p].add(c);
            coef[p + 1] = coef[p + 1].add(c);
        }
    }
    coef
}

fn eval_poly(coef: &[Ratio], x: f64) -> f64 {
    let mut acc = 0.0;
    for c in coef.iter().rev() {
        acc = acc * x + c.to_f64();
    }
    acc
}

/// u-series coefficient of u^n (n odd) for the even-d finite form: the
/// 2 atanh(u) log term plus the binomially expanded algebraic terms. The
/// coefficients vanish identically for n < d-1.
fn even_useries_coeff(d: u32, n: i128) -> Ratio {
    let big_k = (d as i128) / 2 - 1;
    let mut c = Ratio::new(2, n);
    for k in 1..=big_k {
        let ksign = if k % 2 == 0 { 1 } else { -1 };
        let a = Ratio::new(
            ksign * double_factorial_i128(2 * k - 2) * (1 << (2 * k - 1)),
            double_factorial_i128(2 * k - 1),
        );
        for off in [2 * k - 1, 2 * k + 1] {
            let j2 = n - off;
            if j2 >= 0 && j2 % 2 == 0 {
                c = c.add(a.mul_int(binomial_i128(2 * k - 1 + j2 / 2, j2 / 2)));
            }
        }
    }
    c
}

fn i_even(d: u32, rho: f64) -> f64 {
    let half = d as i64 / 2;
    let pref = if (half - 1) % 2 == 0 { 1.0 } else { -1.0 } * double_factorial(d as i64 - 3)
        / double_factorial(d as i64 - 2);
    if (d as f64 - 2.0) * rho < 8.0 {
        // direct form: log coth(rho/2) + cosh rho * alternating sum
        let log_term = 2.0 * (-rho).exp().atanh();
        let (sh, ch) = (rho.sinh(), rho.cosh());
        let mut sum = 0.0;
        for k in 1..half {
            let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sgn * double_factorial(2 * k - 2)
                / (double_factorial(2 * k - 1) * sh.powi(2 * k as i32));
        }
        pref * (log_term + ch * sum)
    } else {
        // u-series with exact low-order cancellation
        let u = (-rho).exp();
        let u2 = u * u;
        let mut n = d as i128 - 1;
        let mut un = u.powi((d - 1) as i32);
        let mut acc = 0.0;
        loop {
            let t = even_useries_coeff(d, n) ;
            let term = t.to_f64() * un;
            acc += term;
            if term.abs() < 1e-18 * acc.abs() && n > d as i128 + 3 {
                break;
            }
            n += 2;
            un *= u2;
            if n > d as i128 + 400 {
                break; // u < e^{-8/(d-2)} guarantees convergence long before
            }
        }
        pref * acc
    }
}

/// I_d via the finite-sum forms (exact up to rounding). For odd d both
/// classical variants are assembled and the mean is returned; their
/// agreement is asserted by the validation suite, not branched on here.
///
/// ```
/// use hyperlap::greens::i_d_finite;
///
/// // d = 3: I_3(rho) = coth(rho) - 1
/// let v = i_d_finite(3, 1.0).unwrap();
/// assert!((v - (1.0 / 1.0f64.tanh() - 1.0)).abs() < 1e-15);
/// ```
pub fn i_d_finite(d: u32, rho: f64) -> Result<f64> {
    check_d_rho(d, rho)?;
    if d % 2 == 0 {
        Ok(i_even(d, rho))
    } else {
        let (v1, v2) = i_d_finite_odd_variants(d, rho)?;
        Ok(0.5 * (v1 + v2))
    }
}

/// Both odd-d finite-sum variants, separately assembled (the dual branch
/// of the finite-sum representation). Exposed for the dual-form
/// consistency checks.
pub fn i_d_finite_odd_variants(d: u32, rho: f64) -> Result<(f64, f64)> {
    check_d_rho(d, rho)?;
    if d % 2 == 0 {
        return Err(Error::Domain(format!("i_d_finite_odd_variants: d = {d} is even")));
    }
    let eps = 2.0 / (2.0 * rho).exp_m1();
    Ok((
        eval_poly(&odd_coeffs_variant1(d), eps),
        eval_poly(&odd_coeffs_variant2(d), eps),
    ))
}

/// Which hypergeometric form of I_d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypForm {
    A,
    B,
}

/// I_d via the Gauss hypergeometric representations.
pub fn i_d_hyp2f1(d: u32, rho: f64, form: HypForm) -> Result<f64> {
    check_d_rho(d, rho)?;
    let df = d as f64;
    let x = 1.0 / rho.cosh().powi(2);
    match form {
        HypForm::A => {
            let f = gauss_2f1(0.5 * (df - 1.0), 0.5 * df, 0.5 * (df + 1.0), x)?;
            Ok(f / ((df - 1.0) * rho.cosh().powi(d as i32 - 1)))
        }
        HypForm::B => {
            let f = gauss_2f1(0.5, 1.0, 0.5 * (df + 1.0), x)?;
            Ok(f / ((df - 1.0) * rho.cosh() * rho.sinh().powi(d as i32 - 2)))
        }
    }
}

/// I_d via the half-integer-order Legendre function of the second kind:
/// Qhat_{d/2-1}^{d/2-1}(cosh rho) / (2^{d/2-1} Gamma(d/2) sinh^{d/2-1} rho).
pub fn i_d_legendre_q(d: u32, rho: f64) -> Result<f64> {
    check_d_rho(d, rho)?;
    let nu = d as f64 / 2.0 - 1.0;
    let ln_q = legendre_qhat_ln(nu, nu, rho.cosh())?;
    let ln = ln_q
        - nu * std::f64::consts::LN_2
        - crate::specfun::ln_gamma(d as f64 / 2.0)?
        - nu * rho.sinh().ln();
    Ok(ln.exp())
}

/// Dispatch on a representation tag.
pub fn i_d(d: u32, rho: f64, rep: Representation) -> Result<f64> {
    match rep {
        Representation::Finite => i_d_finite(d, rho),
        Representation::Hyp2f1A => i_d_hyp2f1(d, rho, HypForm::A),
        Representation::Hyp2f1B => i_d_hyp2f1(d, rho, HypForm::B),
        Representation::LegendreQ => i_d_legendre_q(d, rho),
    }
}

/// Normalized fundamental solution
/// H_R^d(x, x') = Gamma(d/2) / (2 pi^{d/2} R^{d-2}) I_d(rho).
pub fn fundamental_h(d: u32, radius: f64, x: &AmbientPoint, y: &AmbientPoint) -> Result<f64> {
    if x.dim() != d as usize || y.dim() != d as usize {
        return Err(Error::Domain(format!(
            "fundamental_h: points of dimension {} vs requested d = {d}",
            x.dim()
        )));
    }
    let rho = geodesic_distance(x, y)? / radius;
    fundamental_h_rho(d, radius, rho)
}

/// H_R^d as a function of the unit-hyperboloid separation rho.
pub fn fundamental_h_rho(d: u32, radius: f64, rho: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("radius {radius} must be positive")));
    }
    let norm = gamma_fn(d as f64 / 2.0)?
        / (2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) * radius.powi(d as i32 - 2));
    Ok(norm * i_d_finite(d, rho)?)
}

/// Unnormalized unit-hyperboloid kernel h^d(x^, x^') = I_d(rho).
pub fn unit_h(d: u32, xhat: &AmbientPoint, yhat: &AmbientPoint) -> Result<f64> {
    if xhat.dim() != d as usize || yhat.dim() != d as usize {
        return Err(Error::Domain("unit_h: dimension mismatch".into()));
    }
    let rho = geodesic_distance(xhat, yhat)? / xhat.radius();
    i_d_finite(d, rho)
}

/// h^d as a function of cosh(rho); the form every Fourier integrand uses.
pub fn unit_h_cosh(d: u32, cosh_rho: f64) -> Result<f64> {
    i_d_finite(d, acosh_stable(cosh_rho)?)
}

/// Euclidean comparator: G^d(x, y), the fundamental solution of -Delta in
/// flat d-space (log form in d = 2).
pub fn euclid_g(d: u32, x: &[f64], y: &[f64]) -> Result<f64> {
    if d as usize != x.len() || x.len() != y.len() || x.is_empty() {
        return Err(Error::Domain("euclid_g: dimension mismatch".into()));
    }
    let dist2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    let dist = dist2.sqrt();
    if dist == 0.0 {
        return Err(Error::Singularity("euclid_g: coincident points".into()));
    }
    euclid_g_dist(d, dist)
}

/// G^d as a function of the separation distance.
pub fn euclid_g_dist(d: u32, dist: f64) -> Result<f64> {
    if !(dist > 0.0) {
        return Err(Error::Singularity("euclid_g: nonpositive separation".into()));
    }
    let df = d as f64;
    if d == 2 {
        Ok((1.0 / dist).ln() / (2.0 * std::f64::consts::PI))
    } else {
        Ok(gamma_fn(df / 2.0)?
            / (2.0 * std::f64::consts::PI.powf(df / 2.0) * (df - 2.0))
            * dist.powf(2.0 - df))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GeodesicPolarPoint;

    #[test]
    fn frozen_kernel_values() {
        // 40-digit references
        assert!((i_d_finite(2, 1.0).unwrap() - 0.77193683290530473).abs() < 1e-15);
        assert!((i_d_finite(3, 1.0).unwrap() - 0.31303528549933130).abs() < 1e-15);
        assert!((i_d_finite(4, 1.0).unwrap() - 0.17267434727198472).abs() < 1e-15);
        assert!((i_d_finite(5, 2.0).unwrap() - 0.0014097072441932378).abs() < 1e-17);
        assert!((i_d_finite(6, 0.5).unwrap() - 2.7935806352079612).abs() < 1e-13);
        let v = i_d_finite(9, 10.0).unwrap();
        assert!((v - 5.7755245172924851e-34).abs() < 1e-47 , "v={v:e}");
    }

    #[test]
    fn d2_is_log_coth_half() {
        for &rho in &[0.05, 0.7, 3.0, 10.0] {
            let v = i_d_finite(2, rho).unwrap();
            // the oracle itself loses ~1e-16 absolute in coth near 1
            let closed = ((rho / 2.0_f64).tanh().recip()).ln();
            assert!((v - closed).abs() < 5e-12 * closed.abs(), "rho={rho}");
        }
    }

    #[test]
    fn d3_is_coth_minus_one() {
        for &rho in &[0.05, 1.0, 5.0, 12.0] {
            let v = i_d_finite(3, rho).unwrap();
            let closed = 2.0 / (2.0 * rho).exp_m1();
            assert!((v - closed).abs() < 1e-14 * closed, "rho={rho}");
        }
    }

    #[test]
    fn representation_equivalence_spot() {
        // the full grid lives in the validation suite; spot-check here
        for &d in &[2u32, 3, 4, 6, 9] {
            for &rho in &[0.05, 0.5, 2.0] {
                let fin = i_d_finite(d, rho).unwrap();
                for rep in [Representation::Hyp2f1A, Representation::Hyp2f1B, Representation::LegendreQ] {
                    let v = i_d(d, rho, rep).unwrap();
                    assert!(
                        (v - fin).abs() <= 1e-11 * fin.abs(),
                        "d={d} rho={rho} rep={rep:?} fin={fin:e} v={v:e}"
                    );
                }
            }
        }
    }

    #[test]
    fn high_dimension_consistency() {
        // d beyond the acceptance grid up to the supported cap: the
        // finite form against the independent hypergeometric route
        for &d in &[10u32, 12, 14, 16] {
            for &rho in &[0.05, 0.5, 2.0, 6.0] {
                let fin = i_d_finite(d, rho).unwrap();
                let hyp = i_d_hyp2f1(d, rho, HypForm::B).unwrap();
                assert!(
                    (fin - hyp).abs() <= 1e-10 * fin.abs(),
                    "d={d} rho={rho} fin={fin:e} hyp={hyp:e}"
                );
            }
        }
        assert!(i_d_finite(17, 1.0).is_err());
    }

    #[test]
    fn d3_form_b_algebraic_identity() {
        // (1/(2 cosh sinh)) 2F1(1/2,1;2;sech^2) = coth - 1
        for &rho in &[0.3, 1.0, 2.5] {
            let v = i_d_hyp2f1(3, rho, HypForm::B).unwrap();
            let closed = 1.0 / rho.tanh() - 1.0;
            assert!((v - closed).abs() < 1e-12 * closed);
        }
    }

    #[test]
    fn monotone_decay_and_positivity() {
        for &d in &[2u32, 5, 8] {
            let mut prev = f64::INFINITY;
            for k in 1..=200 {
                let rho = 0.05 * k as f64;
                let v = i_d_finite(d, rho).unwrap();
                assert!(v > 0.0 && v < prev, "d={d} rho={rho}");
                prev = v;
            }
        }
    }

    #[test]
    fn harmonicity_radial_residual() {
        // I'' + (d-1) coth(rho) I' = 0, central differences, h = 1e-3.
        // The h^2 truncation term scales like d^3 rho^{-3} |I'|, so high d
        // needs rho away from the origin for the 1e-4 relative bound.
        let h = 1e-3;
        let samples: &[(u32, &[f64])] = &[
            (2, &[0.5, 1.0, 2.0]),
            (3, &[0.5, 1.0, 2.0]),
            (5, &[0.5, 1.0, 2.0]),
            (6, &[0.5, 1.0, 2.0]),
            (8, &[1.0, 2.0]),
        ];
        for &(d, rhos) in samples {
            for &rho in rhos {
                let f = |x: f64| i_d_finite(d, x).unwrap();
                let d1 = (f(rho + h) - f(rho - h)) / (2.0 * h);
                let d2 = (f(rho + h) - 2.0 * f(rho) + f(rho - h)) / (h * h);
                let resid = d2 + (d as f64 - 1.0) / rho.tanh() * d1;
                assert!(resid.abs() <= 1e-4 * d1.abs(), "d={d} rho={rho} resid={resid:e}");
            }
        }
    }

    #[test]
    fn fundamental_h_composition() {
        // d=3, R=1: H = (coth rho - 1)/(4 pi)
        let p = GeodesicPolarPoint::new(1.0, 0.4, vec![1.0], 0.2).unwrap().embed();
        let q = GeodesicPolarPoint::new(1.0, 1.1, vec![2.1], 5.0).unwrap().embed();
        let h = fundamental_h(3, 1.0, &p, &q).unwrap();
        let rho = geodesic_distance(&p, &q).unwrap();
        let closed = (1.0 / rho.tanh() - 1.0) / (4.0 * std::f64::consts::PI);
        assert!((h - closed).abs() < 1e-13 * closed);
        // symmetry is structural (function of rho alone)
        assert_eq!(h, fundamental_h(3, 1.0, &q, &p).unwrap());
    }

    #[test]
    fn h_d2_radius_independent() {
        let mk = |radius: f64| {
            let p = GeodesicPolarPoint::new(radius, 0.6, vec![], 0.0).unwrap().embed();
            let q = GeodesicPolarPoint::new(radius, 1.0, vec![], 2.0).unwrap().embed();
            fundamental_h(2, radius, &p, &q).unwrap()
        };
        assert!((mk(1.0) - mk(7.3)).abs() < 1e-15);
    }

    #[test]
    fn d4_r2_scaling() {
        let rho = 1.0;
        let h = fundamental_h_rho(4, 2.0, rho).unwrap();
        let expect = gamma_fn(2.0).unwrap() / (2.0 * std::f64::consts::PI.powi(2) * 4.0)
            * i_d_finite(4, 1.0).unwrap();
        assert!((h - expect).abs() < 1e-16);
    }

    #[test]
    fn unit_h_is_kernel_of_projected_distance() {
        let p = GeodesicPolarPoint::new(1.0, 0.5, vec![1.0], 0.2).unwrap().embed();
        let q = GeodesicPolarPoint::new(1.0, 1.2, vec![2.0], 4.1).unwrap().embed();
        let h = unit_h(3, &p, &q).unwrap();
        let rho = geodesic_distance(&p, &q).unwrap();
        assert!((h - (1.0 / rho.tanh() - 1.0)).abs() < 1e-13);
        // equals (2 pi^{d/2} R^{d-2} / Gamma(d/2)) H_R^d
        let back = 2.0 * std::f64::consts::PI.powf(1.5) / gamma_fn(1.5).unwrap()
            * fundamental_h(3, 1.0, &p, &q).unwrap();
        assert!((h - back).abs() < 1e-14 * h);
    }

    #[test]
    fn greens_value_constructor() {
        let g = GreensValue::compute(4, 2.0, 1.0, Representation::LegendreQ).unwrap();
        assert!(g.value > 0.0);
        assert_eq!(g.representation.tag(), "legendre_q");
        assert!(GreensValue::compute(4, -1.0, 1.0, Representation::Finite).is_err());
    }

    #[test]
    fn euclid_comparator() {
        // d=3: 1/(4 pi |x-y|); reference at |x-y| = sqrt(3)
        let v = euclid_g(3, &[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0]).unwrap();
        assert!((v - 0.045944074618482671).abs() < 1e-16);
        // d=2 at unit separation: log 1 = 0
        assert_eq!(euclid_g(2, &[0.0, 0.0], &[1.0, 0.0]).unwrap(), 0.0);
        // d=1 sign per the formula: -|x-y|/2
        let v = euclid_g(1, &[2.0], &[5.0]).unwrap();
        assert!((v + 1.5).abs() < 1e-15);
    }

    #[test]
    fn euclidean_limit_ratio() {
        // H_R^d / G^d -> 1 as r, r' -> 0; the deviation at finite r is
        // O(r^2) for d >= 4
        for &d in &[4u32, 5, 6] {
            let (r, rp, gamma): (f64, f64, f64) = (1e-2, 5e-3, 0.8);
            let cosh_rho = r.cosh() * rp.cosh() - r.sinh() * rp.sinh() * gamma.cos();
            let rho = acosh_stable(cosh_rho).unwrap();
            let h = fundamental_h_rho(d, 1.0, rho).unwrap();
            let dist = (r * r + rp * rp - 2.0 * r * rp * gamma.cos()).sqrt();
            let g = euclid_g_dist(d, dist).unwrap();
            assert!((h / g - 1.0).abs() <= 5e-4, "d={d} ratio={}", h / g);
        }
    }

    #[test]
    fn euclidean_limit_ratio_d3_is_first_order() {
        // In d=3 the decay normalization (the -1 in coth rho - 1)
        // contributes -rho to the ratio, an O(r) deviation, so the limit
        // holds but no O(r^2) bound can: check the deviation tracks -rho
        // and shrinks linearly with the scale.
        for &scale in &[1.0_f64, 0.1] {
            let (r, rp, gamma): (f64, f64, f64) = (1e-2 * scale, 5e-3 * scale, 0.8);
            let cosh_rho = r.cosh() * rp.cosh() - r.sinh() * rp.sinh() * gamma.cos();
            let rho = acosh_stable(cosh_rho).unwrap();
            let h = fundamental_h_rho(3, 1.0, rho).unwrap();
            let dist = (r * r + rp * rp - 2.0 * r * rp * gamma.cos()).sqrt();
            let g = euclid_g_dist(3, dist).unwrap();
            let dev = h / g - 1.0;
            assert!((dev + rho).abs() <= 0.05 * rho, "scale={scale} dev={dev:e} rho={rho:e}");
        }
    }

    #[test]
    fn singularity_guard() {
        assert!(matches!(i_d_finite(3, 0.0), Err(Error::Singularity(_))));
        assert!(matches!(i_d_finite(3, 1e-9), Err(Error::Singularity(_))));
        assert!(matches!(
            euclid_g(3, &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]),
            Err(Error::Singularity(_))
        ));
    }

    #[test]
    fn odd_coefficient_vectors_agree_exactly() {
        for &d in &[3u32, 5, 7, 9, 11, 13] {
            let a = odd_coeffs_variant1(d);
            let b = odd_coeffs_variant2(d);
            assert_eq!(a, b, "d={d}");
            assert_eq!(a[0], Ratio::ZERO, "constant term must cancel, d={d}");
        }
    }

    #[test]
    fn even_useries_low_orders_cancel() {
        for &d in &[4u32, 6, 8, 10] {
            let mut n = 1i128;
            while n < d as i128 - 1 {
                assert_eq!(even_useries_coeff(d, n), Ratio::ZERO, "d={d} n={n}");
                n += 2;
            }
            assert_ne!(even_useries_coeff(d, d as i128 - 1), Ratio::ZERO);
        }
    }
}
