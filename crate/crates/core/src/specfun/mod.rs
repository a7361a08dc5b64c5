//! Special functions behind the closed forms: log-gamma, incomplete gamma,
//! beta and incomplete beta, digamma, and the Gauss hypergeometric function
//! on the non-positive real axis.
//!
//! Everything here is a pure function of its arguments. Accuracy targets are
//! fixed: about 1e-12 relative for `ln_gamma` and 1e-10 relative for the
//! incomplete functions and `₂F₁`.

mod beta;
mod gamma;
mod hypergeometric;

pub use beta::{beta_fn, ln_beta, ln_reg_inc_beta, reg_inc_beta};
pub use gamma::{
    digamma, gamma_fn, gamma_p, gamma_q, ln_gamma, ln_upper_inc_gamma, rgamma, upper_inc_gamma,
};
pub use hypergeometric::{gauss_2f1, gauss_2f1_value, reg_gauss_2f1};

/// A computed value together with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub abs_error_estimate: f64,
}

impl SpecialValue {
    pub(crate) fn new(value: f64, abs_error_estimate: f64) -> Self {
        Self {
            value,
            abs_error_estimate: abs_error_estimate.abs(),
        }
    }
}

/// Tolerance used to decide that a parameter is an exact integer.
pub(crate) const INTEGER_EPS: f64 = 1e-12;

pub(crate) fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && (x - x.round()).abs() <= INTEGER_EPS * x.abs().max(1.0)
}
