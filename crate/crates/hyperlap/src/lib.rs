//! Fundamental solutions of the Laplace-Beltrami operator on the
//! d-dimensional R-radius hyperboloid.
//!
//! The radial Green's function on the upper sheet of the two-sheeted
//! hyperboloid admits several equivalent closed forms (finite sums, Gauss
//! hypergeometric, associated Legendre Q of half-integer degree). This crate
//! evaluates all of them, together with the azimuthal Fourier coefficients
//! of the kernel (closed form in d=2, complete elliptic integrals in d=3,
//! adaptive quadrature for general d) and its Gegenbauer polynomial
//! expansion in geodesic polar coordinates, and cross-validates every
//! representation against every other.
//!
//! Module layout:
//!
//! * [`specfun`] - self-contained special-function kernel (Carlson elliptic
//!   integrals, Gauss 2F1, orthogonal polynomials, associated Legendre
//!   functions on (1, inf)).
//! * [`geometry`] - hyperboloid-model points, Minkowski form, geodesic
//!   distance, separation angle, and the (A, B) kinematics.
//! * [`greens`] - the closed-form fundamental solutions and the Euclidean
//!   comparator.
//! * [`fourier`] - azimuthal Fourier coefficients and series resummation.
//! * [`gegenbauer`] - the Gegenbauer expansion, radial coefficients, the
//!   d=3 addition theorem, and the general-order conjecture verifier.
//! * [`quadrature`] - adaptive Gauss-Kronrod integration used by the
//!   Fourier module and by oracle-style checks.
//! * [`validate`] - the cross-validation suites behind `hyperlap validate`.
//!
//! Everything is a pure function of its arguments; there is no global
//! state and all operations are safe to call concurrently.

pub mod fourier;
pub mod gegenbauer;
pub mod geometry;
pub mod greens;
pub mod quadrature;
pub mod specfun;
pub mod validate;

/// Errors shared by every numerical operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input outside an operation's domain (argument ranges, dimension
    /// mismatches, invalid geometry).
    #[error("domain error: {0}")]
    Domain(String),
    /// Evaluation requested at (or too close to) the kernel singularity.
    #[error("singularity: {0}")]
    Singularity(String),
    /// A series, recurrence, or quadrature failed to reach its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),
    /// A value exceeds the representable range (extreme order/argument).
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of a truncated series evaluation: the partial sum, how many
/// terms were taken, and a tail estimate from the observed decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesEval {
    pub value: f64,
    pub terms_used: usize,
    pub tail_estimate: f64,
    pub converged: bool,
}
