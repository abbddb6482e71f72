//! Hyperboloid-model geometry: ambient Minkowski points on the upper sheet
//! of the two-sheeted hyperboloid, standard geodesic polar coordinates,
//! geodesic distance, the separation angle, and the (A, B) pair through
//! which every kernel sees a two-point configuration:
//!
//!   cosh d(x^, x^') = A - B cos(phi - phi').

use crate::{Error, Result};

/// arccosh with a log1p-stable form near 1; arguments in [1 - 1e-12, 1]
/// clamp to 1, smaller arguments are a domain error.
pub fn acosh_stable(x: f64) -> Result<f64> {
    if x < 1.0 {
        if x > 1.0 - 1e-12 {
            return Ok(0.0);
        }
        return Err(Error::Domain(format!("acosh: argument {x} < 1")));
    }
    let t = x - 1.0;
    Ok((t + (t * (t + 2.0)).sqrt()).ln_1p())
}

/// Reduce an angle difference into (-pi, pi].
fn reduce_angle(psi: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut a = psi % two_pi;
    if a <= -std::f64::consts::PI {
        a += two_pi;
    } else if a > std::f64::consts::PI {
        a -= two_pi;
    }
    a
}

/// A point on the R-radius hyperboloid in ambient Minkowski coordinates
/// (x_0, ..., x_d) with x_0 > 0 and [x, x] = R^2.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientPoint {
    coords: Vec<f64>,
    radius: f64,
}

impl AmbientPoint {
    /// Validates the sheet and the variety constraint to 1e-12 relative.
    pub fn new(coords: Vec<f64>, radius: f64) -> Result<Self> {
        if coords.len() < 3 {
            return Err(Error::Domain("ambient point needs at least 3 coordinates (d >= 2)".into()));
        }
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("radius {radius} must be positive")));
        }
        if coords[0] <= 0.0 {
            return Err(Error::Domain("point must lie on the upper sheet (x_0 > 0)".into()));
        }
        let p = Self { coords, radius };
        let q = p.self_form();
        if (q - radius * radius).abs() > 1e-12 * radius * radius {
            return Err(Error::Domain(format!(
                "[x,x] = {q} violates the variety R^2 = {}",
                radius * radius
            )));
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    fn self_form(&self) -> f64 {
        let mut q = self.coords[0] * self.coords[0];
        for x in &self.coords[1..] {
            q -= x * x;
        }
        q
    }

    /// Inverse of [`GeodesicPolarPoint::embed`]. Each polar angle comes
    /// from atan2 of the remaining-coordinate norm against its own
    /// coordinate, which stays accurate for nested small angles where an
    /// acos of a near-1 ratio would not. r = 0 maps to all-zero angles.
    pub fn to_polar(&self) -> Result<GeodesicPolarPoint> {
        let d = self.dim();
        let r = acosh_stable(self.coords[0] / self.radius)?;
        let mut thetas = vec![0.0; d - 2];
        let mut phi = 0.0;
        if r > 0.0 {
            // tail[i] = norm of (x_{i+1}, ..., x_d)
            let mut tail = vec![0.0_f64; d + 2];
            for i in (1..=d).rev() {
                tail[i] = self.coords[i].hypot(tail[i + 1]);
            }
            for (i, theta) in thetas.iter_mut().enumerate() {
                *theta = tail[i + 2].atan2(self.coords[i + 1]);
            }
            phi = self.coords[d].atan2(self.coords[d - 1]);
            if phi < 0.0 {
                phi += 2.0 * std::f64::consts::PI;
            }
        }
        GeodesicPolarPoint::new(self.radius, r, thetas, phi)
    }
}

/// Standard geodesic polar coordinates (R; r, theta_1..theta_{d-2}, phi).
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPolarPoint {
    pub radius: f64,
    pub r: f64,
    pub thetas: Vec<f64>,
    pub phi: f64,
}

impl GeodesicPolarPoint {
    pub fn new(radius: f64, r: f64, thetas: Vec<f64>, phi: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("radius {radius} must be positive")));
        }
        if !(r >= 0.0) {
            return Err(Error::Domain(format!("radial coordinate {r} must be nonnegative")));
        }
        for &t in &thetas {
            if !(0.0..=std::f64::consts::PI).contains(&t) {
                return Err(Error::Domain(format!("polar angle {t} outside [0, pi]")));
            }
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(Error::Domain(format!("azimuth {phi} outside [0, 2pi)")));
        }
        Ok(Self { radius, r, thetas, phi })
    }

    pub fn dim(&self) -> usize {
        self.thetas.len() + 2
    }

    /// Chart map into ambient Minkowski coordinates:
    /// x_0 = R cosh r, x_k = R sinh r (angle products).
    pub fn embed(&self) -> AmbientPoint {
        let d = self.dim();
        let mut coords = vec![0.0; d + 1];
        coords[0] = self.radius * self.r.cosh();
        let mut scale = self.radius * self.r.sinh();
        for (i, &theta) in self.thetas.iter().enumerate() {
            coords[i + 1] = scale * theta.cos();
            scale *= theta.sin();
        }
        coords[d - 1] = scale * self.phi.cos();
        coords[d] = scale * self.phi.sin();
        AmbientPoint { coords, radius: self.radius }
    }
}

/// Minkowski bilinear form [x, y] = x_0 y_0 - x_1 y_1 - ... - x_d y_d.
pub fn minkowski_form(x: &AmbientPoint, y: &AmbientPoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::Domain(format!(
            "dimension mismatch: {} vs {}",
            x.dim(),
            y.dim()
        )));
    }
    if (x.radius - y.radius).abs() > 1e-12 * x.radius {
        return Err(Error::Domain("points lie on different pseudo-spheres".into()));
    }
    let mut q = x.coords[0] * y.coords[0];
    for (a, b) in x.coords[1..].iter().zip(&y.coords[1..]) {
        q -= a * b;
    }
    Ok(q)
}

/// Geodesic distance d(x, y) = R arccosh([x, y]/R^2); zero iff x = y.
pub fn geodesic_distance(x: &AmbientPoint, y: &AmbientPoint) -> Result<f64> {
    let q = minkowski_form(x, y)? / (x.radius * x.radius);
    Ok(x.radius * acosh_stable(q)?)
}

/// Separation angle gamma in [0, pi] between the angular parts of two
/// charts; the azimuth difference is reduced into (-pi, pi] first. For
/// d = 3 this is cos(gamma) = cos(th)cos(th') + sin(th)sin(th')cos(dphi),
/// and for d = 2 it collapses to |phi - phi'| folded into [0, pi].
pub fn separation_angle(p: &GeodesicPolarPoint, q: &GeodesicPolarPoint) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::Domain("separation_angle: dimension mismatch".into()));
    }
    let dphi = reduce_angle(p.phi - q.phi);
    let mut cosg = dphi.cos();
    let mut sum = 0.0;
    let mut sin_prod_partial = 1.0;
    for (&t, &tp) in p.thetas.iter().zip(&q.thetas) {
        sum += t.cos() * tp.cos() * sin_prod_partial;
        sin_prod_partial *= t.sin() * tp.sin();
        // after the loop, cosg carries the full product of sines
    }
    cosg = cosg * sin_prod_partial + sum;
    Ok(cosg.clamp(-1.0, 1.0).acos())
}

/// The (A, B) kinematic pair of a two-point configuration:
/// A = cosh r cosh r' - sinh r sinh r' * (cos-theta chain),
/// B = sinh r sinh r' * prod sin(theta_i) sin(theta_i'),
/// so that cosh of the (unit-hyperboloid) distance is A - B cos(dphi).
/// For d = 2 there are no polar angles: A = cosh r cosh r',
/// B = sinh r sinh r'.
pub fn ab_quantities(r: f64, r_prime: f64, thetas: &[f64], thetas_prime: &[f64]) -> Result<(f64, f64)> {
    if thetas.len() != thetas_prime.len() {
        return Err(Error::Domain("ab_quantities: angle lists differ in length".into()));
    }
    if !(r >= 0.0 && r_prime >= 0.0) {
        return Err(Error::Domain("ab_quantities: radial coordinates must be nonnegative".into()));
    }
    let (shr, chr_) = (r.sinh(), r.cosh());
    let (shp, chp) = (r_prime.sinh(), r_prime.cosh());
    let mut sum = 0.0;
    let mut sin_prod = 1.0;
    for (&t, &tp) in thetas.iter().zip(thetas_prime) {
        sum += t.cos() * tp.cos() * sin_prod;
        sin_prod *= t.sin() * tp.sin();
    }
    let a = chr_ * chp - shr * shp * sum;
    let b = shr * shp * sin_prod;
    Ok((a, b))
}

/// Everything the kernels consume about a pair of points: radii, the
/// separation angle, the unit-hyperboloid distance, and (A, B).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationGeometry {
    pub r: f64,
    pub r_prime: f64,
    pub gamma: f64,
    pub rho: f64,
    pub cosh_rho: f64,
    pub a: f64,
    pub b: f64,
}

impl SeparationGeometry {
    /// Assembles the pair kinematics from two charts on the same
    /// hyperboloid (radius cancels from everything except labels).
    pub fn from_polar(p: &GeodesicPolarPoint, q: &GeodesicPolarPoint) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::Domain("separation geometry: dimension mismatch".into()));
        }
        let gamma = separation_angle(p, q)?;
        Self::from_radial(p.r, q.r, gamma, &p.thetas, &q.thetas, p.phi - q.phi)
    }

    /// From radial coordinates and angle lists plus the azimuth difference.
    pub fn from_radial(
        r: f64,
        r_prime: f64,
        gamma: f64,
        thetas: &[f64],
        thetas_prime: &[f64],
        dphi: f64,
    ) -> Result<Self> {
        let (a, b) = ab_quantities(r, r_prime, thetas, thetas_prime)?;
        let cosh_rho = a - b * reduce_angle(dphi).cos();
        let rho = acosh_stable(cosh_rho)?;
        Ok(Self { r, r_prime, gamma, rho, cosh_rho, a, b })
    }
}
