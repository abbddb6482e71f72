//! Cross-validation suites: every representation of the kernel checked
//! against every other, the special-function Wronskian certificate, the
//! Fourier oracle pairs, the Gegenbauer series against the closed forms,
//! the d=3 addition theorem, and the flat-space limits.
//!
//! Each suite returns per-check results; the CLI prints one PASS/FAIL
//! line per check and exits nonzero on any failure. Geometries are drawn
//! from a fixed-seed generator so identical invocations produce identical
//! output bytes.

use crate::fourier::{
    d2_lambda_check, fourier_batch, fourier_d2, fourier_d3_elliptic, fourier_d3_m0_closed,
    fourier_quadrature, resum,
};
use crate::gegenbauer::{
    addition_theorem_h3, conjecture_check, discontinuity_check, gegenbauer_series, radial_ul,
};
use crate::geometry::{ab_quantities, acosh_stable};
use crate::greens::{
    euclid_g_dist, fundamental_h_rho, i_d, i_d_finite, i_d_finite_odd_variants, Representation,
};
use crate::specfun::{legendre_p_on_cut, legendre_qhat};
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
    /// informational only: a known-defect note, never a pass/fail input
    pub note: Option<String>,
}

impl CheckResult {
    fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: deviation.abs() <= tolerance,
            deviation,
            tolerance,
            note: None,
        }
    }

    fn info(name: impl Into<String>, deviation: f64, note: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: true,
            deviation,
            tolerance: f64::INFINITY,
            note: Some(note.into()),
        }
    }
}

/// The suite names accepted by `validate --suite`.
pub const SUITES: [&str; 6] =
    ["representations", "fourier", "gegenbauer", "addition", "limits", "wronskian"];

/// Loosen a built-in threshold to a user override (never tighten: the
/// built-ins are the certified ones).
fn tol(builtin: f64, user: Option<f64>) -> f64 {
    match user {
        Some(t) => builtin.max(t),
        None => builtin,
    }
}

const RHO_GRID: [f64; 7] = [0.05, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0];

// ---------------------------------------------------------------------
// deterministic geometry sampling
// ---------------------------------------------------------------------

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// d=3 geometry with A - B - 1 >= margin (resampled until clear of the
/// azimuthal singular circle) and A/B <= max_ab. The azimuthal
/// coefficients decay like exp(-m arccosh(A/B)), so oracle comparisons at
/// order m can only resolve tolerances above ~1e-16 exp(m arccosh(A/B));
/// checks at m > 0 constrain A/B accordingly.
fn sample_geometry_d3(rng: &mut ChaCha8Rng, margin: f64, max_ab: f64) -> (f64, f64, f64, f64) {
    loop {
        let r = rng.gen_range(0.3..1.4);
        let rp = rng.gen_range(0.3..1.4);
        let th = rng.gen_range(0.25..std::f64::consts::PI - 0.25);
        let thp = rng.gen_range(0.25..std::f64::consts::PI - 0.25);
        let (a, b) = ab_quantities(r, rp, &[th], &[thp]).unwrap();
        if a - b - 1.0 >= margin && a / b <= max_ab {
            return (r, rp, th, thp);
        }
    }
}

// ---------------------------------------------------------------------
// suites
// ---------------------------------------------------------------------

/// Representation equivalence, odd-d dual finite forms, monotone decay,
/// and the radial harmonicity of the kernel.
pub fn suite_representations(user_tol: Option<f64>) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // all four representations agree pairwise on the (d, rho) grid
    let t = tol(1e-10, user_tol);
    let mut worst = 0.0_f64;
    let mut worst_at = String::new();
    for d in 2..=9u32 {
        for &rho in &RHO_GRID {
            let vals: Vec<f64> = Representation::ALL
                .iter()
                .map(|&rep| i_d(d, rho, rep).unwrap())
                .collect();
            for i in 0..vals.len() {
                for j in i + 1..vals.len() {
                    let dev = (vals[i] - vals[j]).abs() / vals[i].abs().max(vals[j].abs());
                    if dev > worst {
                        worst = dev;
                        worst_at = format!("d={d} rho={rho}");
                    }
                }
            }
        }
    }
    out.push(CheckResult::new(
        format!("representation equivalence (worst at {worst_at})"),
        worst,
        t,
    ));

    // odd-d finite-form variants agree
    let t = tol(1e-12, user_tol);
    let mut worst = 0.0_f64;
    for &d in &[3u32, 5, 7, 9] {
        for &rho in &RHO_GRID {
            let (v1, v2) = i_d_finite_odd_variants(d, rho).unwrap();
            worst = worst.max((v1 - v2).abs() / v1.abs().max(v2.abs()));
        }
    }
    out.push(CheckResult::new("odd-d dual finite forms", worst, t));

    // strict monotone decay on a 200-point grid
    let mut ok = true;
    for &d in &[2u32, 3, 5, 8] {
        let mut prev = f64::INFINITY;
        for k in 1..=200 {
            let v = i_d_finite(d, 0.05 * k as f64).unwrap();
            ok &= v > 0.0 && v < prev;
            prev = v;
        }
    }
    out.push(CheckResult::new("positivity and monotone decay", if ok { 0.0 } else { 1.0 }, 0.5));

    // radial harmonicity: I'' + (d-1) coth(rho) I' = 0 by differences
    let t = tol(1e-4, user_tol);
    let h = 1e-3;
    let mut worst = 0.0_f64;
    for &(d, rhos) in &[
        (2u32, &[0.5, 1.0, 2.0][..]),
        (3, &[0.5, 1.0, 2.0]),
        (5, &[0.5, 1.0, 2.0]),
        (6, &[1.0, 2.0]),
    ] {
        for &rho in rhos {
            let f = |x: f64| i_d_finite(d, x).unwrap();
            let d1 = (f(rho + h) - f(rho - h)) / (2.0 * h);
            let d2 = (f(rho + h) - 2.0 * f(rho) + f(rho - h)) / (h * h);
            worst = worst.max((d2 + (d as f64 - 1.0) / rho.tanh() * d1).abs() / d1.abs());
        }
    }
    out.push(CheckResult::new("radial harmonicity of the kernel", worst, t));

    out
}

/// Wronskian certificate for the Legendre pair: central differences with
/// one Richardson level against -1/(z^2-1).
pub fn suite_wronskian(user_tol: Option<f64>) -> Vec<CheckResult> {
    let t = tol(1e-9, user_tol);
    let mut worst = 0.0_f64;
    let mut worst_at = String::new();
    for &nu in &[0.5, 1.0, 1.5, 2.0] {
        for k in 0..=6u32 {
            let mu = nu + k as f64;
            for &z in &[1.01, 1.5, 5.0, 50.0] {
                // the pair varies on a scale (z-1)/mu near the branch
                // point; the step must resolve that
                let h = 5e-3 * (z - 1.0_f64).min(1.0) / (1.0 + 0.5 * mu);
                let deriv = |f: &dyn Fn(f64) -> f64| {
                    let d1 = (f(z + h) - f(z - h)) / (2.0 * h);
                    let d2 = (f(z + 0.5 * h) - f(z - 0.5 * h)) / h;
                    (4.0 * d2 - d1) / 3.0
                };
                let p = |x: f64| legendre_p_on_cut(nu, -mu, x).unwrap();
                let q = |x: f64| legendre_qhat(nu, mu, x).unwrap();
                let w = p(z) * deriv(&q) - q(z) * deriv(&p);
                let expect = -1.0 / (z * z - 1.0);
                let dev = (w - expect).abs() / expect.abs();
                if dev > worst {
                    worst = dev;
                    worst_at = format!("nu={nu} mu={mu} z={z}");
                }
            }
        }
    }
    vec![CheckResult::new(format!("wronskian certificate (worst at {worst_at})"), worst, t)]
}

/// Fourier oracle pairs: m=0 elliptic closed form vs quadrature, the
/// moment assembly vs quadrature for m <= 5, the closed-vs-assembled m=0
/// identity, resummation, and the d=2 derivation closure.
pub fn suite_fourier(user_tol: Option<f64>) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // m = 0: closed form vs quadrature, 20 geometries clear of the circle
    let t = tol(1e-9, user_tol);
    let mut g = rng(1);
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let (r, rp, th, thp) = sample_geometry_d3(&mut g, 1e-3, f64::INFINITY);
        let closed = fourier_d3_m0_closed(r, rp, th, thp).unwrap();
        let quad = fourier_quadrature(3, 0, r, rp, &[th], &[thp]).unwrap();
        worst = worst.max((closed - quad).abs());
    }
    out.push(CheckResult::new("d=3 m=0 closed form vs quadrature", worst, t));

    // general m: moment assembly vs quadrature, 15 geometries, m <= 5
    let t = tol(1e-8, user_tol);
    let mut g = rng(2);
    let mut worst = 0.0_f64;
    for _ in 0..15 {
        let (r, rp, th, thp) = sample_geometry_d3(&mut g, 1e-2, 8.0);
        for m in 0..=5u32 {
            let e = fourier_d3_elliptic(m, r, rp, th, thp).unwrap();
            let q = fourier_quadrature(3, m, r, rp, &[th], &[thp]).unwrap();
            worst = worst.max((e - q).abs() / (1.0 + q.abs()));
        }
    }
    out.push(CheckResult::new("d=3 moment assembly vs quadrature (m <= 5)", worst, t));

    // the two independent m=0 assemblies agree to 1e-10
    let t = tol(1e-10, user_tol);
    let mut g = rng(3);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let (r, rp, th, thp) = sample_geometry_d3(&mut g, 1e-2, 8.0);
        let closed = fourier_d3_m0_closed(r, rp, th, thp).unwrap();
        let asm = fourier_d3_elliptic(0, r, rp, th, thp).unwrap();
        worst = worst.max((closed - asm).abs() / (1.0 + closed.abs()));
    }
    out.push(CheckResult::new("m=0 closed vs moment assembly", worst, t));

    // resummation reproduces the kernel off the singular circle
    let t = tol(1e-6, user_tol);
    let mut g = rng(4);
    let mut worst = 0.0_f64;
    let mut m_needed = 0usize;
    for k in 0..10 {
        let d = if k % 2 == 0 { 2 } else { 3 };
        let (r, rp, th, thp) = sample_geometry_d3(&mut g, 0.05, f64::INFINITY);
        let psi: f64 = g.gen_range(1.2..std::f64::consts::PI);
        let thetas: Vec<f64> = if d == 2 { vec![] } else { vec![th] };
        let thetas_p: Vec<f64> = if d == 2 { vec![] } else { vec![thp] };
        let coeffs = fourier_batch(d, 60, r, rp, &thetas, &thetas_p).unwrap();
        let s = resum(&coeffs, psi).unwrap();
        let (a, b) = ab_quantities(r, rp, &thetas, &thetas_p).unwrap();
        let expect = i_d_finite(d, acosh_stable(a - b * psi.cos()).unwrap()).unwrap();
        worst = worst.max((s.value - expect).abs());
        m_needed = m_needed.max(s.terms_used);
    }
    out.push(CheckResult::new(
        format!("resummation reproduces kernel (M <= {m_needed})"),
        worst,
        t,
    ));

    // d=2 derivation closure on 50 random triples
    let mut g = rng(5);
    let mut ok = true;
    for _ in 0..50 {
        let r = g.gen_range(0.2..1.5);
        let rp = g.gen_range(0.2..1.5);
        let psi = g.gen_range(0.0..std::f64::consts::PI);
        ok &= d2_lambda_check(r, rp, psi).is_ok();
    }
    out.push(CheckResult::new(
        "d=2 log-expansion closure (50 triples)",
        if ok { 0.0 } else { 1.0 },
        0.5,
    ));

    out
}

/// Gegenbauer expansion vs the closed forms, the observed convergence
/// ratio, the jump condition, series harmonicity, and the general-order
/// conjecture.
pub fn suite_gegenbauer(user_tol: Option<f64>) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // series equals the closed form, 25 geometries per d
    let t = tol(1e-9, user_tol);
    let mut g = rng(6);
    let mut worst = 0.0_f64;
    let mut ratio_worst = 0.0_f64;
    for &d in &[3u32, 4, 5, 6] {
        for k in 0..25 {
            // r_> moderate: the l -> inf step ratio is
            // tanh(r_</2)/tanh(r_>/2), which tracks r_</r_> to 10% only
            // while the radii stay within the near-linear range of tanh
            let rg: f64 = g.gen_range(0.4..1.05);
            let rl: f64 = rg * g.gen_range(0.35..0.8);
            let gamma: f64 = g.gen_range(0.0..std::f64::consts::PI);
            let cosh_rho = rl.cosh() * rg.cosh() - rl.sinh() * rg.sinh() * gamma.cos();
            let expect = fundamental_h_rho(d, 1.0, acosh_stable(cosh_rho).unwrap()).unwrap();
            // request a tolerance scaled to the kernel value so the
            // comparison is meaningful across the decaying tail of H
            let s = gegenbauer_series(d, 1.0, rl, rg, gamma, 1e-10 * expect.abs()).unwrap();
            worst = worst.max((s.value - expect).abs() / expect.abs());
            // observed convergence ratio of the radial product beyond
            // l=20: geometric mean of the corrected step ratios over a
            // window, since single steps still carry O(1/l) transients
            if k < 5 {
                let mut prod = 1.0;
                for l in 28..38u32 {
                    let ua = radial_ul(d, 1.0, l, rl, rg).unwrap();
                    let ub = radial_ul(d, 1.0, l + 1, rl, rg).unwrap();
                    prod *= (ub / ua).abs() * (2.0 * l as f64 + d as f64)
                        / (2.0 * l as f64 + d as f64 - 2.0);
                }
                let observed = prod.powf(0.1);
                ratio_worst = ratio_worst.max((observed - rl / rg).abs() / (rl / rg));
            }
        }
    }
    out.push(CheckResult::new("gegenbauer series vs closed form", worst, t));
    out.push(CheckResult::new("observed term ratio vs r_</r_> (l > 20)", ratio_worst, 0.10));

    // jump condition -1/R^(d-2)
    let t = tol(1e-6, user_tol);
    let mut worst = 0.0_f64;
    for &d in &[3u32, 4, 5] {
        for &l in &[0u32, 1, 5] {
            for &rp in &[0.3, 1.0, 2.0] {
                let radius = 1.0 + 0.5 * (d - 3) as f64;
                let j = discontinuity_check(d, radius, l, rp).unwrap();
                let expect = -radius.powi(-(d as i32 - 2));
                worst = worst.max((j - expect).abs() / expect.abs());
            }
        }
    }
    out.push(CheckResult::new("radial derivative jump -1/R^(d-2)", worst, t));

    // harmonicity of the truncated series in (r, gamma)
    let t = tol(1e-4, user_tol);
    let mut worst = 0.0_f64;
    for &(d, r, rp, gamma) in &[(3u32, 0.7, 1.1, 1.0), (4, 0.6, 1.0, 0.9), (5, 0.8, 1.2, 1.3)] {
        let f = |rr: f64, gg: f64| gegenbauer_series(d, 1.0, rr, rp, gg, 1e-12).unwrap().value;
        let h = 1e-3;
        let frr = (f(r + h, gamma) - 2.0 * f(r, gamma) + f(r - h, gamma)) / (h * h);
        let fr = (f(r + h, gamma) - f(r - h, gamma)) / (2.0 * h);
        let fgg = (f(r, gamma + h) - 2.0 * f(r, gamma) + f(r, gamma - h)) / (h * h);
        let fg = (f(r, gamma + h) - f(r, gamma - h)) / (2.0 * h);
        let lap = frr
            + (d as f64 - 1.0) / r.tanh() * fr
            + (fgg + (d as f64 - 2.0) / gamma.tan() * fg) / r.sinh().powi(2);
        let scale = frr.abs().max(fr.abs()).max(fgg.abs() / r.sinh().powi(2));
        worst = worst.max(lap.abs() / scale);
    }
    out.push(CheckResult::new("laplacian residual of truncated series", worst, t));

    // general-order conjecture: support at generic mu, required agreement
    // at the integer-forced orders mu = (d-2)/2
    let t = tol(1e-6, user_tol);
    let mut worst_support = 0.0_f64;
    let mut worst_forced = 0.0_f64;
    for &mu in &[0.3, 0.75, 1.5] {
        let (lhs, rhs) = conjecture_check(mu, 0.8, 1.3, 1.0, 1e-8).unwrap();
        worst_support = worst_support.max((lhs - rhs.value).abs() / lhs.abs());
    }
    for &mu in &[0.5, 1.0, 1.5] {
        let (lhs, rhs) = conjecture_check(mu, 0.8, 1.3, 1.0, 1e-8).unwrap();
        worst_forced = worst_forced.max((lhs - rhs.value).abs() / lhs.abs());
    }
    out.push(CheckResult::new("conjecture support at generic order", worst_support, t));
    out.push(CheckResult::new("conjecture at integer-forced orders", worst_forced, t));

    out
}

/// d=3 addition theorem against the quadrature coefficients.
pub fn suite_addition(user_tol: Option<f64>) -> Vec<CheckResult> {
    let t = tol(1e-7, user_tol);
    let mut g = rng(7);
    let mut worst = 0.0_f64;
    for _ in 0..15 {
        let (r, rp, th, thp) = sample_geometry_d3(&mut g, 1e-2, 8.0);
        for m in 0..=4u32 {
            let s = addition_theorem_h3(m, r, rp, th, thp, 1e-9, 3000).unwrap();
            let q = fourier_quadrature(3, m, r, rp, &[th], &[thp]).unwrap();
            worst = worst.max((s.value - q).abs());
        }
    }
    vec![CheckResult::new("addition theorem vs quadrature (m <= 4)", worst, t)]
}

/// Euclidean limits: the kernel ratio for d >= 4 (with the d=3
/// first-order deviation reported), the d=2 coefficient limit, and the
/// d=3 m=0 limit.
pub fn suite_limits(user_tol: Option<f64>) -> Vec<CheckResult> {
    let mut out = Vec::new();

    // (a) H/G ratio at r = 1e-2, r' = 5e-3, gamma = 0.8
    let t = tol(5e-4, user_tol);
    let (r, rp, gamma): (f64, f64, f64) = (1e-2, 5e-3, 0.8);
    let cosh_rho = r.cosh() * rp.cosh() - r.sinh() * rp.sinh() * gamma.cos();
    let rho = acosh_stable(cosh_rho).unwrap();
    let dist = (r * r + rp * rp - 2.0 * r * rp * gamma.cos()).sqrt();
    let mut worst = 0.0_f64;
    for &d in &[4u32, 5, 6] {
        let ratio = fundamental_h_rho(d, 1.0, rho).unwrap() / euclid_g_dist(d, dist).unwrap();
        worst = worst.max((ratio - 1.0).abs());
    }
    out.push(CheckResult::new("euclidean kernel ratio (d = 4, 5, 6)", worst, t));
    // d=3 carries an O(r) deviation equal to -rho from the decay
    // normalization (the -1 in coth rho - 1); reported, not asserted
    // against the O(r^2) bound that only holds for d >= 4
    let ratio3 = fundamental_h_rho(3, 1.0, rho).unwrap() / euclid_g_dist(3, dist).unwrap();
    out.push(CheckResult::info(
        "euclidean kernel ratio d=3",
        ratio3 - 1.0,
        format!(
            "deviation is -rho = {:.3e} + O(r^2) from the decay normalization; a 5e-4 bound presumes the O(r^2) regime (d >= 4)",
            -rho
        ),
    ));
    // the d=3 limit itself: deviation tracks -rho and shrinks linearly
    let mut trend_ok = true;
    let mut prev_dev = f64::INFINITY;
    for &scale in &[1.0, 0.3, 0.1] {
        let (rs, rps) = (r * scale, rp * scale);
        let crho = rs.cosh() * rps.cosh() - rs.sinh() * rps.sinh() * gamma.cos();
        let rh = acosh_stable(crho).unwrap();
        let ds = (rs * rs + rps * rps - 2.0 * rs * rps * gamma.cos()).sqrt();
        let dev =
            (fundamental_h_rho(3, 1.0, rh).unwrap() / euclid_g_dist(3, ds).unwrap() - 1.0).abs();
        trend_ok &= dev < prev_dev && (dev - rh).abs() < 0.1 * rh;
        prev_dev = dev;
    }
    out.push(CheckResult::new(
        "euclidean limit d=3 (first-order trend)",
        if trend_ok { 0.0 } else { 1.0 },
        0.5,
    ));

    // (b) d=2 coefficients: n coef -> (r_</r_>)^n within 1%
    let (r2, rp2) = (1e-2, 2e-2);
    let mut worst = 0.0_f64;
    for n in 1..=5u32 {
        let coef = fourier_d2(n, r2, rp2).unwrap();
        let expect = 0.5_f64.powi(n as i32);
        worst = worst.max((n as f64 * coef - expect).abs() / expect);
    }
    out.push(CheckResult::new(
        "d=2 coefficient euclidean limit (n <= 5)",
        worst,
        tol(0.01, user_tol),
    ));

    // (c) d=3 m=0 elliptic form vs the flat closed form within 1%
    let (r3, rp3, th3, thp3) = (1e-2, 5e-3, 1.2, 0.7);
    let hyp = fourier_d3_m0_closed(r3, rp3, th3, thp3).unwrap();
    let dd = (r3 * r3 + rp3 * rp3 - 2.0 * r3 * rp3 * (th3 + thp3).cos()).sqrt();
    let k2 = 4.0 * r3 * rp3 * th3.sin() * thp3.sin() / (dd * dd);
    let flat = 2.0 / (std::f64::consts::PI * dd) * crate::specfun::elliptic_k(k2.sqrt()).unwrap();
    out.push(CheckResult::new(
        "d=3 m=0 euclidean limit",
        (hyp / flat - 1.0).abs(),
        tol(0.01, user_tol),
    ));

    out
}

/// Run one suite (or all) by name.
pub fn run_suite(name: &str, user_tol: Option<f64>) -> Result<Vec<(String, Vec<CheckResult>)>> {
    let single = |n: &str| -> Result<Vec<CheckResult>> {
        Ok(match n {
            "representations" => suite_representations(user_tol),
            "fourier" => suite_fourier(user_tol),
            "gegenbauer" => suite_gegenbauer(user_tol),
            "addition" => suite_addition(user_tol),
            "limits" => suite_limits(user_tol),
            "wronskian" => suite_wronskian(user_tol),
            other => return Err(Error::Domain(format!("unknown suite '{other}'"))),
        })
    };
    if name == "all" {
        let mut out = Vec::new();
        for n in SUITES {
            out.push((n.to_string(), single(n)?));
        }
        Ok(out)
    } else {
        Ok(vec![(name.to_string(), single(name)?)])
    }
}
