//! Mode, mean and quantiles of q̂₀ and q̂₁ for Toronto against Montreal,
//! under each rescaling of Montreal's mean.
//!
//! cargo run --example table2_summaries

use hockey_predictive::distributions::Window;
use hockey_predictive::ingest::{fixtures, X2Mode};
use hockey_predictive::predictive::{predictive_summaries, q_hat_0, q_hat_1, PredictionProblem};

fn main() -> hockey_predictive::Result<()> {
    let toronto = fixtures::toronto_stat();
    let p = PredictionProblem::unrestricted(toronto, 3.0, Window::REGULATION)?;
    let q0 = q_hat_0(&p)?;
    // The truncated q̂₀ is c·y²/(x₁+y)⁶ with c = x₁³/(B(3,3)·mass).
    let coefficient = 30.0 * toronto.x.powi(3) / q0.mass();

    println!("x1 = {:.4} from {} games", toronto.x, fixtures::toronto().len());
    println!("q0(y) = {coefficient:.0} y^2 / ({:.2} + y)^6 on (0, 60)", toronto.x);
    println!();
    println!("{:<24} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}", "estimator", "x2", "mode", "mean", "P20", "P50", "P90");
    let row = predictive_summaries(&q0)?;
    println!(
        "{:<24} {:>8} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
        "q0", "", row.mode, row.mean, row.p20, row.p50, row.p90
    );
    for mode in X2Mode::ALL {
        let montreal = fixtures::montreal_stat(mode);
        let p = PredictionProblem::restricted(toronto, montreal, 3.0, Window::REGULATION)?;
        let row = predictive_summaries(&q_hat_1(&p)?)?;
        println!(
            "{:<24} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
            format!("q1, {mode}"),
            montreal.x,
            row.mode,
            row.mean,
            row.p20,
            row.p50,
            row.p90
        );
    }
    Ok(())
}
