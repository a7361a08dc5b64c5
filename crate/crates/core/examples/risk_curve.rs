//! Monte Carlo KL risk of q̂₀ and q̂₁ as the scale ratio λ₁/λ₂ grows.
//!
//! cargo run --release --example risk_curve [samples]

use hockey_predictive::evaluation::{risk_curve, RiskSetup};

fn main() -> hockey_predictive::Result<()> {
    let samples = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("samples must be an integer"))
        .unwrap_or(4_000);
    let setup = RiskSetup {
        samples,
        ..RiskSetup::default()
    };
    let curve = risk_curve(&[1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0], 1.0, &setup)?;

    println!("{samples} draws per point, seed {}", setup.seed);
    println!("{:>6} {:>10} {:>10} {:>10} {:>9}", "ratio", "risk q0", "risk q1", "gap", "se(gap)");
    for (i, gap) in curve.gaps().iter().enumerate() {
        println!(
            "{:>6} {:>10.4} {:>10.4} {:>10.4} {:>9.4}",
            curve.ratios[i], curve.risk_q0[i], curve.risk_q1[i], gap, curve.std_err_diff[i]
        );
    }
    Ok(())
}
