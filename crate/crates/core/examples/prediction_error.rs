//! KL prediction error of q̂₀ and q̂₁ against a truncated Gam(3, 18.3) truth.
//!
//! cargo run --example prediction_error

use hockey_predictive::distributions::{Density, Window};
use hockey_predictive::evaluation::{kl_loss, prediction_error, truncated_truth};
use hockey_predictive::ingest::{fixtures, X2Mode};
use hockey_predictive::predictive::{q_hat_0, q_hat_1, PredictionProblem, Unrestricted};

fn main() -> hockey_predictive::Result<()> {
    let truth = truncated_truth(3.0, 18.3, Window::REGULATION)?;
    println!("truth: mass on (0, 60) = {:.6}, mean = {:.4}", truth.mass(), truth.mean()?);

    for mode in X2Mode::ALL {
        let p = PredictionProblem::restricted(
            fixtures::toronto_stat(),
            fixtures::montreal_stat(mode),
            3.0,
            Window::REGULATION,
        )?;
        let pe0 = prediction_error(&truth, &q_hat_0(&p)?)?;
        let pe1 = prediction_error(&truth, &q_hat_1(&p)?)?;
        println!("{:<22} pe(q0) = {pe0:.4}  pe(q1) = {pe1:.4}", mode.to_string());
    }

    // Scoring the untruncated q̂₀ on the window instead gives a larger loss,
    // since a quarter of its mass sits beyond 60 minutes.
    let q0 = Unrestricted::new(fixtures::toronto_stat(), 3.0)?;
    let untruncated = kl_loss(&truth, &q0, Window::REGULATION)?;
    println!("untruncated q0 on (0, 60): {untruncated:.4}  (its own mass there: {:.4})", {
        let b = q0.as_beta_prime();
        hockey_predictive::quadrature::Quadrature::default()
            .integrate(|y| b.pdf(y), 0.0, 60.0)?
            .value
    });
    Ok(())
}
