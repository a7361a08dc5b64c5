//! Bayesian predictive densities for the waiting time until the r-th goal.
//!
//! Waiting times are modelled as gamma variables with known shape and unknown
//! scale. Two predictive densities are provided for a future waiting time `Y`:
//!
//! * `q̂₀`, the Bayes predictive density under the scale-invariant prior
//!   `1/λ`, which is a scaled beta prime law;
//! * `q̂₁`, the Bayes predictive density when a second team's waiting time is
//!   observed as well and the scales are known to be ordered, `λ₁ ≥ λ₂`.
//!
//! Both can be truncated to a game window, summarised (mode, mean,
//! quantiles), and scored by Kullback–Leibler loss, frequentist risk and
//! prediction error.
//!
//! ```
//! use hockey_predictive::predictive::{q_hat_0, PredictionProblem, SufficientStat};
//! use hockey_predictive::distributions::Window;
//!
//! let toronto = SufficientStat::new(35.85, 3.0).unwrap();
//! let problem = PredictionProblem::unrestricted(toronto, 3.0, Window::REGULATION).unwrap();
//! let q0 = q_hat_0(&problem).unwrap();
//! let row = hockey_predictive::predictive::predictive_summaries(&q0).unwrap();
//! assert!((row.mode - 17.925).abs() < 1e-3);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod distributions;
mod error;
pub mod evaluation;
pub mod ingest;
pub mod predictive;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
