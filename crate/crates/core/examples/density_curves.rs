//! Prints q̂₀, q̂₁ and the weight q̂₁/q̂₀ over the game as a coarse text plot.
//!
//! cargo run --example density_curves

use hockey_predictive::distributions::{Density, Window};
use hockey_predictive::ingest::{fixtures, X2Mode};
use hockey_predictive::predictive::{q_hat_0, q_hat_1, Estimator, PredictionProblem};

fn main() -> hockey_predictive::Result<()> {
    let p = PredictionProblem::restricted(
        fixtures::toronto_stat(),
        fixtures::montreal_stat(X2Mode::Raw),
        3.0,
        Window::REGULATION,
    )?;
    let q0 = q_hat_0(&p)?;
    let q1 = q_hat_1(&p)?;
    let Estimator::Restricted(restricted) = q1.base() else {
        unreachable!("q_hat_1 builds the restricted estimator")
    };

    println!("{:>5} {:>9} {:>9} {:>7}", "y", "q0", "q1", "weight");
    for i in 0..30 {
        let y = 1.0 + 2.0 * i as f64;
        let (a, b) = (q0.pdf(y), q1.pdf(y));
        let bar = |v: f64| "#".repeat((v * 1500.0).round() as usize);
        println!("{y:>5.1} {a:>9.5} {b:>9.5} {:>7.3}  q0 {}", restricted.weight(y), bar(a));
        println!("{:>34}q1 {}", "", bar(b));
    }
    Ok(())
}
