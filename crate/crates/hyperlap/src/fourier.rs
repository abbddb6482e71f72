//! Azimuthal Fourier coefficients of the fundamental solution:
//!
//!   h^d(x^, x^') = sum_m cos(m (phi - phi')) H_m(r, r', thetas),
//!
//! with the closed form in d = 2, the complete-elliptic-integral route in
//! d = 3 (Byrd & Friedman (253.11) reduction, the (336.00-03) V_j
//! recurrence, and the (340.00-04) quartic moments), the general-d
//! adaptive-quadrature definition, and series resummation back to the
//! kernel.

use crate::geometry::ab_quantities;
#[cfg(test)]
use crate::geometry::acosh_stable;
use crate::greens::unit_h_cosh;
use crate::quadrature::adaptive_quadrature;
use crate::specfun::{chebyshev_t_coeffs, elliptic_e, elliptic_k, elliptic_pi, neumann_eps};
use crate::{Error, Result, SeriesEval};

/// Evaluation route of a Fourier coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierMethod {
    ClosedD2,
    Quadrature,
    EllipticD3,
}

/// One azimuthal coefficient H_m of the d-dimensional kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub d: u32,
    pub m: u32,
    pub value: f64,
    pub method: FourierMethod,
}

/// Azimuthal quadrature tolerance (absolute) and evaluation budget.
const QUAD_TOL: f64 = 1e-11;
const QUAD_MAX_EVAL: usize = 200_000;
/// Maximum order for the monomial-assembled elliptic route; beyond 12 the
/// exactly representable coefficients still grow like 4^m and the moment
/// cancellation costs about two digits per step, documented below.
const ELLIPTIC_MAX_M: u32 = 24;

// ---------------------------------------------------------------------
// d = 2: closed form and the log-expansion derivation check
// ---------------------------------------------------------------------

/// Fourier coefficient of the d=2 kernel. n = 0 gives
/// (1/2) log((cosh r_> + 1)/(cosh r_> - 1)); n >= 1 the product of
/// half-power brackets over n.
pub fn fourier_d2(n: u32, r: f64, r_prime: f64) -> Result<f64> {
    if !(r >= 0.0 && r_prime >= 0.0) {
        return Err(Error::Domain("fourier_d2: radii must be nonnegative".into()));
    }
    let (r_less, r_greater) = (r.min(r_prime), r.max(r_prime));
    if r_greater == 0.0 {
        return Err(Error::Singularity("fourier_d2: both points at the pole".into()));
    }
    if n == 0 {
        // log coth(r_>/2), in exp form to stay accurate at large radii
        return Ok(2.0 * (-r_greater).exp().atanh());
    }
    if r_less == 0.0 {
        return Ok(0.0);
    }
    let tl = (r_less / 2.0).tanh();
    let tg = (r_greater / 2.0).tanh();
    // [ (cosh r_< - 1)/(cosh r_< + 1) ]^{n/2} = tanh^n(r_</2), etc.
    Ok(tl.powi(n as i32) * (tg.powi(-(n as i32)) - tg.powi(n as i32)) / n as f64)
}

/// The z_+/z_- kernel of the d=2 derivation, with the two log branches
/// lambda_+- = log(1 - z_+- cos psi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D2Kernel {
    pub z_plus: f64,
    pub z_minus: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl D2Kernel {
    pub fn new(r: f64, r_prime: f64, psi: f64) -> Result<Self> {
        if !(r > 0.0 && r_prime > 0.0) {
            return Err(Error::Domain("d2 kernel: radii must be positive".into()));
        }
        let cc = r.cosh() * r_prime.cosh();
        let ss = r.sinh() * r_prime.sinh();
        let z_plus = ss / (cc + 1.0);
        let z_minus = ss / (cc - 1.0);
        Ok(Self {
            z_plus,
            z_minus,
            lambda_plus: (1.0 - z_plus * psi.cos()).ln(),
            lambda_minus: (1.0 - z_minus * psi.cos()).ln(),
        })
    }
}

/// Derivation closure check for the d=2 expansion: the direct logarithms
/// lambda_+- against their resummed cosine series (constant term plus the
/// half-power cosine sum), to 1e-9. Returns the direct pair.
pub fn d2_lambda_check(r: f64, r_prime: f64, psi: f64) -> Result<(f64, f64)> {
    let kernel = D2Kernel::new(r, r_prime, psi)?;
    let (r_less, r_greater) = (r.min(r_prime), r.max(r_prime));
    let (cl, cg) = (r_less.cosh(), r_greater.cosh());
    let cc = r.cosh() * r_prime.cosh();

    // series ratio brackets: t_+ and t_- (the n-th coefficient is t^{n/2})
    let t_plus = (cg - 1.0) * (cl - 1.0) / ((cg + 1.0) * (cl + 1.0));
    let t_minus = (cg + 1.0) * (cl - 1.0) / ((cg - 1.0) * (cl + 1.0));

    let series = |t: f64, constant: f64| -> Result<f64> {
        let q = t.sqrt();
        let mut acc = constant;
        let mut qn = 1.0;
        for n in 1..100_000u32 {
            qn *= q;
            let term = -2.0 * (n as f64 * psi).cos() / n as f64 * qn;
            acc += term;
            // tail of sum q^k/k is below q^{n+1}/((n+1)(1-q))
            if qn * q / ((n + 1) as f64 * (1.0 - q)) < 5e-13 {
                return Ok(acc);
            }
        }
        Err(Error::Convergence("d2_lambda_check: series stalled".into()))
    };

    let const_plus = -(2.0_f64.ln()) + ((cg + 1.0) * (cl + 1.0) / (cc + 1.0)).ln();
    let const_minus = -(2.0_f64.ln()) + ((cg - 1.0) * (cl + 1.0) / (cc - 1.0)).ln();
    let sp = series(t_plus, const_plus)?;
    let sm = series(t_minus, const_minus)?;
    if (sp - kernel.lambda_plus).abs() > 1e-9 || (sm - kernel.lambda_minus).abs() > 1e-9 {
        return Err(Error::Convergence(format!(
            "d2_lambda_check: series {sp}/{sm} vs direct {}/{}",
            kernel.lambda_plus, kernel.lambda_minus
        )));
    }
    Ok((kernel.lambda_plus, kernel.lambda_minus))
}

// ---------------------------------------------------------------------
// general d: quadrature of the kernel against cos(m psi)
// ---------------------------------------------------------------------

/// Azimuthal Fourier coefficient by adaptive quadrature of
/// (eps_m / pi) int_0^pi h^d(A - B cos psi) cos(m psi) dpsi.
/// B = 0 degenerates to a psi-independent integrand: the coefficient is
/// I_d(arccosh A) for m = 0 and zero otherwise.
pub fn fourier_quadrature(
    d: u32,
    m: u32,
    r: f64,
    r_prime: f64,
    thetas: &[f64],
    thetas_prime: &[f64],
) -> Result<f64> {
    if d < 2 {
        return Err(Error::Domain(format!("fourier_quadrature: d = {d} below 2")));
    }
    if thetas.len() != d as usize - 2 || thetas_prime.len() != d as usize - 2 {
        return Err(Error::Domain(format!(
            "fourier_quadrature: expected {} polar angles for d = {d}",
            d - 2
        )));
    }
    let (a, b) = ab_quantities(r, r_prime, thetas, thetas_prime)?;
    fourier_quadrature_ab(d, m, a, b)
}

/// Quadrature coefficient from the (A, B) pair directly.
pub fn fourier_quadrature_ab(d: u32, m: u32, a: f64, b: f64) -> Result<f64> {
    if b < 0.0 {
        return Err(Error::Domain("fourier_quadrature: B < 0".into()));
    }
    if b == 0.0 {
        let v = unit_h_cosh(d, a)?;
        return Ok(if m == 0 { v } else { 0.0 });
    }
    let delta = a - b - 1.0;
    if delta <= 1e-10 * (1.0 + a.abs()) {
        return Err(Error::Singularity(format!(
            "fourier_quadrature: A - B - 1 = {delta:e}, kernel singular at psi = 0"
        )));
    }
    let integrand = |psi: f64| -> f64 {
        let cosh_rho = a - b * psi.cos();
        // domain is guaranteed by delta > 0; keep the guard cheap
        unit_h_cosh(d, cosh_rho).unwrap_or(f64::NAN) * (m as f64 * psi).cos()
    };
    // the kernel spikes over a width ~ sqrt(delta/B) near psi = 0: split
    // there when narrow so the adaptive pass starts resolved
    let spike = (delta / b).sqrt();
    let total = if spike < 0.3 {
        let cut = (8.0 * spike).min(std::f64::consts::FRAC_PI_2);
        let q1 = adaptive_quadrature(&integrand, 0.0, cut, 0.5 * QUAD_TOL, QUAD_MAX_EVAL)?;
        let q2 = adaptive_quadrature(
            &integrand,
            cut,
            std::f64::consts::PI,
            0.5 * QUAD_TOL,
            QUAD_MAX_EVAL - q1.evaluations,
        )?;
        q1.value + q2.value
    } else {
        adaptive_quadrature(&integrand, 0.0, std::f64::consts::PI, QUAD_TOL, QUAD_MAX_EVAL)?.value
    };
    if !total.is_finite() {
        return Err(Error::Convergence("fourier_quadrature: integrand failure".into()));
    }
    Ok(neumann_eps(m) as f64 / std::f64::consts::PI * total)
}

// ---------------------------------------------------------------------
// d = 3: Byrd & Friedman reduction to complete elliptic integrals
// ---------------------------------------------------------------------

/// Parameter block of the (253.11) reduction of the quartic
/// (a-x)(b-x)(c-x)(x-d) with roots a = (A+1)/B, b = (A-1)/B, c = 1,
/// d = y = -1 (the quartic root d is `d_root` to keep it clear of the
/// dimension). Ordering d_root <= y < c < b < a and 0 < k^2 < alpha^2 < 1
/// hold for every valid geometry; alpha1^2 = 2(A-1)/(A+B-1) exceeds 1,
/// which is fine - it enters the moments algebraically, never as a
/// characteristic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticReduction {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d_root: f64,
    pub y: f64,
    pub alpha2: f64,
    pub alpha1_2: f64,
    pub g: f64,
    pub k2: f64,
    /// u_1 = F(pi/2, k) = K(k); the integrals here are all complete.
    pub u1: f64,
}

/// Build the (253.11) parameter block from the kinematic pair (A, B).
/// The defining forms alpha^2 = (c-d)/(b-d), g = 2/sqrt((a-c)(b-d)),
/// k^2 = (a-b)(c-d)/((a-c)(b-d)) are used; they reduce algebraically to
/// 2B/(A+B-1), 2B/sqrt((A+B-1)(A-B+1)), 4B/((A+B-1)(A-B+1)).
pub fn bf_reduce(a_kin: f64, b_kin: f64) -> Result<EllipticReduction> {
    if !(b_kin > 0.0) {
        return Err(Error::Domain("bf_reduce: B must be positive".into()));
    }
    if !(a_kin - b_kin > 1.0) {
        return Err(Error::Domain(format!(
            "bf_reduce: A - B = {} must exceed 1 (off-singularity geometry)",
            a_kin - b_kin
        )));
    }
    let a = (a_kin + 1.0) / b_kin;
    let b = (a_kin - 1.0) / b_kin;
    let (c, d_root, y) = (1.0, -1.0, -1.0);
    if !(b > c) {
        return Err(Error::Domain("bf_reduce: root ordering c < b violated".into()));
    }
    let alpha2 = (c - d_root) / (b - d_root);
    let alpha1_2 = b * (c - d_root) / (c * (b - d_root));
    let g = 2.0 / ((a - c) * (b - d_root)).sqrt();
    let k2 = (a - b) * (c - d_root) / ((a - c) * (b - d_root));
    if !(k2 > 0.0 && k2 < alpha2 && alpha2 < 1.0) {
        return Err(Error::Domain(format!(
            "bf_reduce: modulus ordering 0 < k^2 < alpha^2 < 1 violated (k2={k2}, alpha2={alpha2})"
        )));
    }
    let u1 = elliptic_k(k2.sqrt())?;
    Ok(EllipticReduction { a, b, c, d_root, y, alpha2, alpha1_2, g, k2, u1 })
}

/// V_j = int_0^{u1} du / (1 - alpha^2 sn^2 u)^j in the complete case:
/// V_0 = K, V_1 = Pi(alpha^2, k), V_2 in closed form, then the
/// (336.00-03) three-term recurrence upward.
pub fn bf_v(j: u32, red: &EllipticReduction) -> Result<f64> {
    Ok(bf_v_sequence(j, red)?[j as usize])
}

/// The whole ladder V_0..V_j (the moments consume prefixes; computing the
/// sequence once avoids re-running the recurrence).
pub fn bf_v_sequence(j: u32, red: &EllipticReduction) -> Result<Vec<f64>> {
    let k = red.k2.sqrt();
    let a2 = red.alpha2;
    let k2 = red.k2;
    let mut v = Vec::with_capacity(j as usize + 1);
    v.push(red.u1);
    if j >= 1 {
        v.push(elliptic_pi(a2, k)?);
    }
    if j >= 2 {
        let kk = red.u1;
        let ee = elliptic_e(k)?;
        let pp = v[1];
        v.push(
            ((k2 - a2) * kk + a2 * ee + (2.0 * a2 * k2 + 2.0 * a2 - a2 * a2 - 3.0 * k2) * pp)
                / (2.0 * (a2 - 1.0) * (k2 - a2)),
        );
    }
    for mm in 0..(j as usize).saturating_sub(2) {
        let m = mm as f64;
        let next = ((2.0 * m + 1.0) * k2 * v[mm]
            + 2.0 * (m + 1.0) * (a2 * k2 + a2 - 3.0 * k2) * v[mm + 1]
            + (2.0 * m + 3.0) * (a2 * a2 - 2.0 * a2 * k2 - 2.0 * a2 + 3.0 * k2) * v[mm + 2])
            / (2.0 * (m + 2.0) * (1.0 - a2) * (k2 - a2));
        if !next.is_finite() || next.abs() > 1e15 {
            return Err(Error::Convergence(format!(
                "bf_v: recurrence blow-up at j = {}",
                mm + 3
            )));
        }
        v.push(next);
    }
    Ok(v)
}

/// Quartic moment int_y^c x^p dx / sqrt((a-x)(b-x)(c-x)(x-d)) via the
/// (340.04) expansion over the V_j ladder.
pub fn quartic_moment(p: u32, red: &EllipticReduction) -> Result<f64> {
    Ok(quartic_moments_upto(p, red)?[p as usize])
}

fn quartic_moments_upto(p_max: u32, red: &EllipticReduction) -> Result<Vec<f64>> {
    let v = bf_v_sequence(p_max, red)?;
    let mut out = Vec::with_capacity(p_max as usize + 1);
    for p in 0..=p_max as usize {
        let mut fact_j = 1.0; // j!
        let mut pow = 1.0; // ((alpha^2 - alpha1^2)/alpha1^2)^j
        let mut fact_pj = (1..=p).map(|t| t as f64).product::<f64>(); // (p-j)!
        let mut sum_terms = Vec::with_capacity(p + 1);
        for j in 0..=p {
            sum_terms.push(pow / (fact_j * fact_pj) * v[j]);
            if j < p {
                fact_j *= (j + 1) as f64;
                fact_pj /= (p - j) as f64;
                pow *= (red.alpha2 - red.alpha1_2) / red.alpha1_2;
            }
        }
        // small alternating sum: accumulate in ascending magnitude
        sum_terms.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap());
        let sum: f64 = sum_terms.iter().sum();
        let p_fact: f64 = (1..=p).map(|t| t as f64).product();
        let scale = red.c.powi(p as i32) * red.g * red.alpha1_2.powi(p as i32) * p_fact
            / red.alpha2.powi(p as i32);
        out.push(scale * sum);
    }
    Ok(out)
}

/// The m = 0 closed form of the d=3 coefficient in K and Pi:
/// -1 + (2/pi) { K(k) + [A - B - 1] Pi(alpha^2, k) } / sqrt((A-B+1)(A+B-1)).
pub fn fourier_d3_m0_closed(r: f64, r_prime: f64, theta: f64, theta_prime: f64) -> Result<f64> {
    let (a, b) = ab_quantities(r, r_prime, &[theta], &[theta_prime])?;
    let red = bf_reduce(a, b)?;
    let kk = red.u1;
    let pp = elliptic_pi(red.alpha2, red.k2.sqrt())?;
    Ok(-1.0
        + 2.0 / std::f64::consts::PI * (kk + (a - b - 1.0) * pp)
            / ((a - b + 1.0) * (a + b - 1.0)).sqrt())
}

/// d = 3 coefficient assembled from quartic moments:
/// H_m = -delta_m0 + (eps_m/pi) sum_p t_{m,p} [ (A/B) M_p - M_{p+1} ],
/// with t the exact monomial coefficients of the Chebyshev polynomial
/// T_m. Exact in i64 for m <= 12 per the assembly design; the i64
/// coefficients remain exactly representable through m = 24 but the
/// alternating sum then costs roughly two digits of the 1e-8 oracle
/// agreement per order, so larger m is a convergence error (use
/// [`fourier_quadrature`] there).
pub fn fourier_d3_elliptic(
    m: u32,
    r: f64,
    r_prime: f64,
    theta: f64,
    theta_prime: f64,
) -> Result<f64> {
    if m > ELLIPTIC_MAX_M {
        return Err(Error::Convergence(format!(
            "fourier_d3_elliptic: monomial assembly validated only for m <= {ELLIPTIC_MAX_M}; use the quadrature route"
        )));
    }
    let (a_kin, b_kin) = ab_quantities(r, r_prime, &[theta], &[theta_prime])?;
    let red = bf_reduce(a_kin, b_kin)?;
    let moments = quartic_moments_upto(m + 1, &red)?;
    let coeffs = chebyshev_t_coeffs(m);
    let ratio = a_kin / b_kin;
    let mut terms: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(p, &c)| c as f64 * (ratio * moments[p] - moments[p + 1]))
        .collect();
    terms.sort_by(|x, y| x.abs().partial_cmp(&y.abs()).unwrap());
    // Kahan over the sorted alternating terms
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in terms {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    let delta = if m == 0 { 1.0 } else { 0.0 };
    Ok(-delta + neumann_eps(m) as f64 / std::f64::consts::PI * sum)
}

// ---------------------------------------------------------------------
// resummation
// ---------------------------------------------------------------------

/// Resum a coefficient batch at azimuth separation psi, with a tail
/// estimate from the observed geometric decay of the tail of the batch.
/// Coefficients must share a single (d, geometry); a rising tail signals
/// inconsistent input.
pub fn resum(coeffs: &[FourierCoefficient], psi: f64) -> Result<SeriesEval> {
    if coeffs.is_empty() {
        return Err(Error::Domain("resum: empty coefficient batch".into()));
    }
    let d = coeffs[0].d;
    if coeffs.iter().any(|c| c.d != d) {
        return Err(Error::Domain("resum: mixed dimensions in batch".into()));
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for c in coeffs {
        let y = c.value * (c.m as f64 * psi).cos() - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    // decay ratio from the trailing coefficients that sit above the
    // quadrature noise floor
    let mags: Vec<f64> = coeffs
        .iter()
        .map(|c| c.value.abs())
        .filter(|&v| v > 100.0 * QUAD_TOL)
        .collect();
    if mags.len() < 3 {
        // tail already below noise: nothing left to estimate
        return Ok(SeriesEval {
            value: sum,
            terms_used: coeffs.len(),
            tail_estimate: 1e-9,
            converged: true,
        });
    }
    let tail_mag = *mags.last().unwrap();
    let n = mags.len();
    let q_last = mags[n - 1] / mags[n - 2];
    let q_prev = mags[n - 2] / mags[n - 3];
    if q_last > 1.02 && q_prev > 1.02 {
        return Err(Error::Convergence(format!(
            "resum: coefficients rising (ratio {q_last:.3}), inconsistent batch"
        )));
    }
    // sub-geometric decay (coefficients ~ 1/m on the singular circle) has
    // ratios creeping toward 1: extrapolate the ratio limit before
    // trusting a geometric tail bound
    let q_limit = (q_last + (n as f64) * (q_last - q_prev)).max(q_last);
    let (tail_estimate, converged) = if q_limit < 0.999 && q_last < 1.0 {
        (tail_mag * q_last / (1.0 - q_last), true)
    } else {
        // on-singularity: the cosine series diverges at psi = 0
        (f64::INFINITY, false)
    };
    Ok(SeriesEval { value: sum, terms_used: coeffs.len(), tail_estimate, converged })
}

/// Coefficient batch H_0..H_{m_max} for one geometry: the closed form in
/// d = 2, quadrature otherwise.
pub fn fourier_batch(
    d: u32,
    m_max: u32,
    r: f64,
    r_prime: f64,
    thetas: &[f64],
    thetas_prime: &[f64],
) -> Result<Vec<FourierCoefficient>> {
    let mut out = Vec::with_capacity(m_max as usize + 1);
    for m in 0..=m_max {
        let (value, method) = if d == 2 {
            (fourier_d2(m, r, r_prime)?, FourierMethod::ClosedD2)
        } else {
            (
                fourier_quadrature(d, m, r, r_prime, thetas, thetas_prime)?,
                FourierMethod::Quadrature,
            )
        };
        out.push(FourierCoefficient { d, m, value, method });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::greens::i_d_finite;

    const GEO: (f64, f64, f64, f64) = (0.6, 0.9, 1.2, 0.7);

    #[test]
    fn d2_n0_closed() {
        // r_> = 1: log coth(1/2), 40-digit reference
        let v = fourier_d2(0, 0.3, 1.0).unwrap();
        assert!((v - 0.77193683290530473).abs() < 1e-15);
        // frozen n=3 value at (0.4, 0.9)
        let v = fourier_d2(3, 0.4, 0.9).unwrap();
        assert!((v - 0.033937167266233552).abs() < 1e-16);
    }

    #[test]
    fn d2_equal_radii_finite() {
        for n in 0..6 {
            let v = fourier_d2(n, 0.8, 0.8).unwrap();
            assert!(v.is_finite() && v > 0.0, "n={n}");
        }
    }

    #[test]
    fn d2_pole_conventions() {
        assert_eq!(fourier_d2(2, 0.0, 1.0).unwrap(), 0.0);
        assert!(fourier_d2(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn d2_euclidean_limit() {
        // n coef -> (r_</r_>)^n within 1% at r ~ 1e-2
        let (r, rp) = (0.01, 0.02);
        for n in 1..=5u32 {
            let coef = fourier_d2(n, r, rp).unwrap();
            let expect = 0.5_f64.powi(n as i32);
            assert!(
                (n as f64 * coef - expect).abs() <= 0.01 * expect,
                "n={n} got {} want {expect}",
                n as f64 * coef
            );
        }
    }

    #[test]
    fn lambda_check_trivial_and_series() {
        // psi = pi/2: cos psi = 0, both logs vanish
        let (lp, lm) = d2_lambda_check(0.7, 1.1, std::f64::consts::FRAC_PI_2).unwrap();
        assert!(lp.abs() < 1e-15 && lm.abs() < 1e-15);
        // small z: lambda ~ -z cos psi up to the O(z^2) log curvature
        let k = D2Kernel::new(0.05, 0.03, 0.3).unwrap();
        assert!((k.lambda_plus + k.z_plus * 0.3_f64.cos()).abs() < 1e-3 * k.z_plus);
        assert!(k.z_plus > 0.0 && k.z_plus < 1.0 && k.z_minus > 0.0 && k.z_minus < 1.0);
        // derivation closure at a generic triple
        d2_lambda_check(0.7, 1.1, 0.3).unwrap();
    }

    #[test]
    fn bf_reduce_direct_substitution() {
        // A=3, B=1: alpha^2 = 2/3, alpha1^2 = 4/3, k^2 = 4/9
        let red = bf_reduce(3.0, 1.0).unwrap();
        assert!((red.alpha2 - 2.0 / 3.0).abs() < 1e-15);
        assert!((red.alpha1_2 - 4.0 / 3.0).abs() < 1e-15);
        assert!((red.k2 - 4.0 / 9.0).abs() < 1e-15);
        assert_eq!((red.d_root, red.y, red.c), (-1.0, -1.0, 1.0));
        assert!(red.d_root <= red.y && red.y < red.c && red.c < red.b && red.b < red.a);
    }

    #[test]
    fn bf_reduce_reduced_forms_match_defining() {
        // the simplified reduced parameters are algebraically identical
        // to the (253.11) definitions; assert to machine precision
        for &(a_kin, b_kin) in &[(3.0, 1.0), (1.5177489758486136, 0.39240631390697665), (2.2, 0.7)]
        {
            let red = bf_reduce(a_kin, b_kin).unwrap();
            let reduced_alpha2 = 2.0 * b_kin / (a_kin + b_kin - 1.0);
            let reduced_a12 = 2.0 * (a_kin - 1.0) / (a_kin + b_kin - 1.0);
            let reduced_g = 2.0 * b_kin / ((a_kin + b_kin - 1.0) * (a_kin - b_kin + 1.0)).sqrt();
            let reduced_k2 = 4.0 * b_kin / ((a_kin + b_kin - 1.0) * (a_kin - b_kin + 1.0));
            assert!((red.alpha2 - reduced_alpha2).abs() < 1e-14 * reduced_alpha2);
            assert!((red.alpha1_2 - reduced_a12).abs() < 1e-14 * reduced_a12);
            assert!((red.g - reduced_g).abs() < 1e-14 * reduced_g);
            assert!((red.k2 - reduced_k2).abs() < 1e-14 * reduced_k2);
        }
    }

    #[test]
    fn bf_reduce_rejects_singular_geometry() {
        assert!(bf_reduce(1.9, 1.0).is_err()); // A - B < 1
        assert!(bf_reduce(2.0, 0.0).is_err());
    }

    #[test]
    fn v_ladder_against_quadrature_oracle() {
        // V_j = int_0^1 dt/((1 - a2 t^2)^j sqrt((1-t^2)(1-k2 t^2)))
        // after t = sn u; the (alpha2, k2) pair is all the ladder needs
        let red = EllipticReduction {
            a: 0.0,
            b: 0.0,
            c: 1.0,
            d_root: -1.0,
            y: -1.0,
            alpha2: 0.5,
            alpha1_2: 0.0,
            g: 0.0,
            k2: 0.3,
            u1: elliptic_k(0.3_f64.sqrt()).unwrap(),
        };
        let v = bf_v_sequence(8, &red).unwrap();
        for (j, &vj) in v.iter().enumerate() {
            let f = |t: f64| {
                1.0 / ((1.0 - 0.5 * t * t).powi(j as i32)
                    * ((1.0 - t * t) * (1.0 - 0.3 * t * t)).sqrt())
            };
            let q1 = adaptive_quadrature(f, 0.0, 1.0 - 1e-10, 1e-12, 200_000).unwrap();
            // the clipped endpoint sliver costs ~2 C sqrt(1e-10) ~ 1e-5
            assert!(
                (vj - q1.value).abs() < 1e-4 * vj.abs().max(1.0),
                "j={j} rec={vj} quad={}",
                q1.value
            );
        }
        // tighter: V_0 and V_1 against the elliptic implementations
        assert!((v[0] - elliptic_k(0.3_f64.sqrt()).unwrap()).abs() < 1e-15);
        assert!((v[1] - elliptic_pi(0.5, 0.3_f64.sqrt()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn moments_tabulated_specials() {
        let (a_kin, b_kin) = (2.2, 0.7);
        let red = bf_reduce(a_kin, b_kin).unwrap();
        let m = quartic_moments_upto(2, &red).unwrap();
        // (340.00): p=0 -> g K
        assert!((m[0] - red.g * red.u1).abs() < 1e-14);
        // (340.01): p=1 -> (c g / alpha^2)[alpha1^2 K + (alpha^2-alpha1^2) Pi]
        let pp = elliptic_pi(red.alpha2, red.k2.sqrt()).unwrap();
        let p1 = red.c * red.g / red.alpha2
            * (red.alpha1_2 * red.u1 + (red.alpha2 - red.alpha1_2) * pp);
        assert!((m[1] - p1).abs() < 1e-14 * p1.abs());
        // (340.02): p=2 with V_2
        let v2 = bf_v(2, &red).unwrap();
        let p2 = red.c * red.c * red.g / (red.alpha2 * red.alpha2)
            * (red.alpha1_2 * red.alpha1_2 * red.u1
                + 2.0 * red.alpha1_2 * (red.alpha2 - red.alpha1_2) * pp
                + (red.alpha2 - red.alpha1_2) * (red.alpha2 - red.alpha1_2) * v2);
        assert!((m[2] - p2).abs() < 1e-13 * p2.abs());
    }

    #[test]
    fn moment_quadrature_oracle() {
        // p = 4 against direct quadrature of the quartic integral; the
        // frozen 30-digit value is 0.500467687888546
        let red = bf_reduce(2.2, 0.7).unwrap();
        let m4 = quartic_moment(4, &red).unwrap();
        let f = |x: f64| {
            x.powi(4) / ((red.a - x) * (red.b - x) * (1.0 - x) * (x + 1.0)).sqrt()
        };
        let q = adaptive_quadrature(f, -1.0 + 1e-10, 1.0 - 1e-10, 1e-11, 200_000).unwrap();
        assert!((m4 - q.value).abs() < 1e-4);
        assert!((m4 - 0.500467687888546).abs() < 1e-12);
    }

    #[test]
    fn d3_m0_small_b_limit() {
        // B -> 0+: k^2 -> 0 and the coefficient tends to the B = 0
        // direct value I_3(arccosh A)
        let (r, rp, th) = (0.6, 0.9, 1.2);
        for &thp in &[1e-3, 1e-4] {
            let (a, b) = ab_quantities(r, rp, &[th], &[thp]).unwrap();
            assert!(b < 2e-3 * a);
            let red = bf_reduce(a, b).unwrap();
            assert!(red.k2 < 4.0 * b, "k2 = {}", red.k2);
            let closed = fourier_d3_m0_closed(r, rp, th, thp).unwrap();
            let direct = i_d_finite(3, acosh_stable(a).unwrap()).unwrap();
            assert!(
                (closed - direct).abs() < 5.0 * b,
                "thp={thp} closed={closed} direct={direct}"
            );
        }
    }

    #[test]
    fn d3_m0_closed_vs_frozen() {
        let (r, rp, th, thp) = GEO;
        let v = fourier_d3_m0_closed(r, rp, th, thp).unwrap();
        assert!((v - 0.47432021417705692).abs() < 1e-14, "v={v}");
    }

    #[test]
    fn d3_m0_closed_vs_moment_assembly() {
        // two independent assemblies of the same tabulated formulas
        let (r, rp, th, thp) = GEO;
        let closed = fourier_d3_m0_closed(r, rp, th, thp).unwrap();
        let assembled = fourier_d3_elliptic(0, r, rp, th, thp).unwrap();
        assert!((closed - assembled).abs() <= 1e-10 * (1.0 + closed.abs()));
    }

    #[test]
    fn d3_elliptic_vs_quadrature() {
        let (r, rp, th, thp) = GEO;
        // frozen quadrature references for m = 0, 1, 2
        let refs = [0.47432021417705692, 0.42110468330534418, 0.16871531864227994];
        for (m, want) in refs.iter().enumerate() {
            let e = fourier_d3_elliptic(m as u32, r, rp, th, thp).unwrap();
            let q = fourier_quadrature(3, m as u32, r, rp, &[th], &[thp]).unwrap();
            assert!((e - want).abs() < 1e-11, "m={m} elliptic={e} want={want}");
            assert!((q - want).abs() < 1e-9, "m={m} quad={q} want={want}");
        }
        assert!(fourier_d3_elliptic(25, r, rp, th, thp).is_err());
    }

    #[test]
    fn quadrature_b_zero_degenerates() {
        // theta' = 0 puts the second point on the polar axis: B = 0
        let v1 = fourier_quadrature(3, 1, 0.6, 0.9, &[1.2], &[0.0]).unwrap();
        assert_eq!(v1, 0.0);
        let v0 = fourier_quadrature(3, 0, 0.6, 0.9, &[1.2], &[0.0]).unwrap();
        let (a, _) = ab_quantities(0.6, 0.9, &[1.2], &[0.0]).unwrap();
        let expect = i_d_finite(3, acosh_stable(a).unwrap()).unwrap();
        assert!((v0 - expect).abs() < 1e-13);
    }

    #[test]
    fn quadrature_d2_matches_closed_form() {
        let (r, rp) = (0.5, 1.1);
        for n in 0..4u32 {
            let q = fourier_quadrature(2, n, r, rp, &[], &[]).unwrap();
            let c = fourier_d2(n, r, rp).unwrap();
            assert!((q - c).abs() <= 1e-9, "n={n} q={q} c={c}");
        }
    }

    #[test]
    fn quadrature_singular_touch_rejected() {
        // coincident angular parts with r = r': A - B = 1 exactly
        let res = fourier_quadrature(3, 0, 0.7, 0.7, &[1.0], &[1.0]);
        assert!(matches!(res, Err(Error::Singularity(_))));
    }

    #[test]
    fn sine_projection_vanishes() {
        // the integrand is even in psi, so the full-period sine
        // projection vanishes and the expansion is cosine-only
        let (r, rp, th, thp) = GEO;
        let (a, b) = ab_quantities(r, rp, &[th], &[thp]).unwrap();
        let q = adaptive_quadrature(
            |psi| unit_h_cosh(3, a - b * psi.cos()).unwrap() * (2.0 * psi).sin(),
            -std::f64::consts::PI,
            std::f64::consts::PI,
            1e-12,
            100_000,
        )
        .unwrap();
        assert!(q.value.abs() <= 1e-12, "sine projection = {:e}", q.value);
    }

    #[test]
    fn resum_reconstructs_kernel() {
        // d=2 resummation at (0.5, 1.0, psi=2.0) -> log coth(rho/2)
        let coeffs = fourier_batch(2, 60, 0.5, 1.0, &[], &[]).unwrap();
        let psi = 2.0;
        let s = resum(&coeffs, psi).unwrap();
        let cosh_rho =
            0.5_f64.cosh() * 1.0_f64.cosh() - 0.5_f64.sinh() * 1.0_f64.sinh() * psi.cos();
        let expect = i_d_finite(2, acosh_stable(cosh_rho).unwrap()).unwrap();
        assert!(s.converged);
        assert!((s.value - expect).abs() <= 1e-8, "value={} expect={expect}", s.value);
        // d=3 at psi = pi against the kernel
        let (r, rp, th, thp) = GEO;
        let coeffs = fourier_batch(3, 40, r, rp, &[th], &[thp]).unwrap();
        let s = resum(&coeffs, std::f64::consts::PI).unwrap();
        let (a, b) = ab_quantities(r, rp, &[th], &[thp]).unwrap();
        let expect = i_d_finite(3, acosh_stable(a + b).unwrap()).unwrap();
        assert!(s.converged && (s.value - expect).abs() <= 1e-6);
    }

    #[test]
    fn resum_detects_divergence_and_garbage() {
        // near-coincident points: ratio -> 1, diverges at psi = 0
        let coeffs = fourier_batch(2, 40, 0.8, 0.8000001, &[], &[]).unwrap();
        let s = resum(&coeffs, 0.0).unwrap();
        assert!(!s.converged);
        assert!(s.tail_estimate.is_infinite());
        // rising coefficients are rejected
        let bad: Vec<FourierCoefficient> = (0..6)
            .map(|m| FourierCoefficient {
                d: 3,
                m,
                value: (m as f64 + 1.0).exp(),
                method: FourierMethod::Quadrature,
            })
            .collect();
        assert!(matches!(resum(&bad, 1.0), Err(Error::Convergence(_))));
    }

    #[test]
    fn coefficient_decay_ratio() {
        // geometric decay with ratio below 1 for non-coincident geometry
        let (r, rp, th, thp) = GEO;
        let coeffs = fourier_batch(3, 12, r, rp, &[th], &[thp]).unwrap();
        for w in coeffs.windows(2).skip(2) {
            let ratio = w[1].value.abs() / w[0].value.abs();
            assert!(ratio < 1.0, "m={} ratio={ratio}", w[0].m);
        }
    }
}
