//! Gamma and beta functions plus the singular-integrand quadrature that the
//! potential formulas reduce to.

mod beta;
mod gamma;
mod quadrature;

pub use beta::{inc_beta, j_integral, reg_inc_beta};
pub(crate) use beta::inc_beta_parts;
pub use gamma::{gamma, ln_beta, log_gamma, Sign};
pub(crate) use gamma::sin_pi;
pub use quadrature::{integrate, integrate_singular, Integral, QuadratureSpec};
