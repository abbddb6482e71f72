//! Special-function kernel: gamma-family helpers, complete elliptic
//! integrals, the Gauss hypergeometric function, orthogonal polynomials,
//! and associated Legendre functions of real degree/order on (1, inf).
//!
//! All routines are pure and allocation-free on the hot paths.

mod elliptic;
mod gamma;
mod hyp2f1;
mod legendre;
mod poly;

pub use elliptic::{elliptic_e, elliptic_k, elliptic_pi};
pub use gamma::{double_factorial, gamma_fn, ln_gamma, neumann_eps, pochhammer};
pub use hyp2f1::gauss_2f1;
pub use legendre::{
    legendre_p_on_cut, legendre_p_on_cut_ln, legendre_qhat, legendre_qhat_ln, QhatLadder,
};
pub use poly::{assoc_legendre_plm, chebyshev_t, chebyshev_t_coeffs, gegenbauer_c, legendre_pl};
