//! Complete elliptic integrals of the first, second, and third kinds via
//! Carlson symmetric forms with duplication (Carlson 1977, 1995; Press et
//! al. 2007). The symmetric route is used instead of AGM because the third
//! kind is needed and R_J covers it uniformly.
//!
//! Conventions: modulus k (not the parameter m = k^2), and the third-kind
//! characteristic alpha2 enters as Pi(alpha2, k) = int_0^{pi/2}
//! dt / ((1 - alpha2 sin^2 t) sqrt(1 - k^2 sin^2 t)).

use crate::{Error, Result};

const MAX_ITER: usize = 200;
const RF_ERRTOL: f64 = 0.0012;
const RD_ERRTOL: f64 = 0.0012;
const RJ_ERRTOL: f64 = 0.0012;
const RC_ERRTOL: f64 = 0.0008;

/// Carlson R_F(x, y, z); x, y, z nonnegative, at most one zero.
fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    let tiny = 5.0 * f64::MIN_POSITIVE;
    if x.min(y).min(z) < 0.0 || (x + y).min(x + z).min(y + z) < tiny {
        return Err(Error::Domain(
            "rf: arguments must be nonnegative with at most one zero".into(),
        ));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        let ave = (xt + yt + zt) / 3.0;
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RF_ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / ave.sqrt());
        }
    }
    Err(Error::Convergence("rf: duplication did not converge".into()))
}

/// Carlson degenerate R_C(x, y); y > 0 here (circular case only).
fn carlson_rc(x: f64, y: f64) -> Result<f64> {
    if x < 0.0 || y <= 0.0 {
        return Err(Error::Domain("rc: requires x >= 0, y > 0".into()));
    }
    let (mut xt, mut yt) = (x, y);
    for _ in 0..MAX_ITER {
        let lam = 2.0 * xt.sqrt() * yt.sqrt() + yt;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        let ave = (xt + 2.0 * yt) / 3.0;
        let s = (yt - ave) / ave;
        if s.abs() < RC_ERRTOL {
            return Ok((1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0))))
                / ave.sqrt());
        }
    }
    Err(Error::Convergence("rc: duplication did not converge".into()))
}

/// Carlson R_D(x, y, z); x, y nonnegative with at most one zero, z > 0.
fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    let tiny = 2.0 * f64::MAX.powf(-2.0 / 3.0);
    if x.min(y) < 0.0 || (x + y).min(z) < tiny {
        return Err(Error::Domain(
            "rd: requires x, y >= 0 (one may vanish) and z > 0".into(),
        ));
    }
    let (mut xt, mut yt, mut zt) = (x, y, z);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        sum += fac / (sz * (zt + lam));
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        let ave = 0.2 * (xt + yt + 3.0 * zt);
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < RD_ERRTOL {
            let ea = dx * dy;
            let eb = dz * dz;
            let ec = ea - eb;
            let ed = ea - 6.0 * eb;
            let ee = ed + ec + ec;
            return Ok(3.0 * sum
                + fac
                    * (1.0 + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * dz * ee)
                        + dz * (1.0 / 6.0 * ee + dz * (-9.0 / 22.0 * ec + 3.0 / 26.0 * dz * ea)))
                    / (ave * ave.sqrt()));
        }
    }
    Err(Error::Convergence("rd: duplication did not converge".into()))
}

/// Carlson R_J(x, y, z, p) for p > 0 (circular case).
fn carlson_rj(x: f64, y: f64, z: f64, p: f64) -> Result<f64> {
    let tiny = (5.0 * f64::MIN_POSITIVE).powf(1.0 / 3.0);
    if x.min(y).min(z) < 0.0 || (x + y).min(x + z).min(y + z).min(p) < tiny {
        return Err(Error::Domain(
            "rj: requires nonnegative x, y, z (at most one zero) and p > 0".into(),
        ));
    }
    let (mut xt, mut yt, mut zt, mut pt) = (x, y, z, p);
    let mut sum = 0.0;
    let mut fac = 1.0;
    for _ in 0..MAX_ITER {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        let alpha = (pt * (sx + sy + sz) + sx * sy * sz).powi(2);
        let beta = pt * (pt + lam).powi(2);
        sum += fac * carlson_rc(alpha, beta)?;
        fac *= 0.25;
        xt = 0.25 * (xt + lam);
        yt = 0.25 * (yt + lam);
        zt = 0.25 * (zt + lam);
        pt = 0.25 * (pt + lam);
        let ave = 0.2 * (xt + yt + zt + 2.0 * pt);
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        let dp = (ave - pt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()).max(dp.abs()) < RJ_ERRTOL {
            let ea = dx * (dy + dz) + dy * dz;
            let eb = dx * dy * dz;
            let ec = dp * dp;
            let ed = ea - 3.0 * ec;
            let ee = eb + 2.0 * dp * (ea - ec);
            return Ok(3.0 * sum
                + fac
                    * (1.0
                        + ed * (-3.0 / 14.0 + 9.0 / 88.0 * ed - 4.5 / 26.0 * ee)
                        + eb * (1.0 / 6.0 + dp * (-3.0 / 11.0 + dp * 3.0 / 26.0))
                        + dp * ea * (1.0 / 3.0 - dp * 3.0 / 22.0)
                        - 1.0 / 3.0 * dp * ec)
                    / (ave * ave.sqrt()));
        }
    }
    Err(Error::Convergence("rj: duplication did not converge".into()))
}

/// Complete elliptic integral of the first kind K(k), 0 <= k < 1.
///
/// ```
/// use hyperlap::specfun::elliptic_k;
///
/// assert!((elliptic_k(0.0).unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
/// ```
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic_k: modulus {k} not in [0, 1)")));
    }
    carlson_rf(0.0, 1.0 - k * k, 1.0)
}

/// Complete elliptic integral of the second kind E(k), 0 <= k <= 1.
pub fn elliptic_e(k: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic_e: modulus {k} not in [0, 1]")));
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let kc2 = 1.0 - k * k;
    Ok(carlson_rf(0.0, kc2, 1.0)? - k * k / 3.0 * carlson_rd(0.0, kc2, 1.0)?)
}

/// Complete elliptic integral of the third kind Pi(alpha2, k) with
/// characteristic alpha2 < 1 (circular case) and 0 <= k < 1.
pub fn elliptic_pi(alpha2: f64, k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!("elliptic_pi: modulus {k} not in [0, 1)")));
    }
    if alpha2 >= 1.0 {
        return Err(Error::Domain(format!(
            "elliptic_pi: characteristic {alpha2} must be < 1"
        )));
    }
    let kc2 = 1.0 - k * k;
    Ok(carlson_rf(0.0, kc2, 1.0)? + alpha2 / 3.0 * carlson_rj(0.0, kc2, 1.0, 1.0 - alpha2)?)
}
