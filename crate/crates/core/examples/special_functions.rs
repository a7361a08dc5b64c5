//! Evaluates the special functions behind the predictive densities and the
//! constant C by its three routes.
//!
//! cargo run --example special_functions

use hockey_predictive::predictive::{constant_c, constant_c_hypergeometric, constant_c_quadrature};
use hockey_predictive::specfun::{gamma_fn, gauss_2f1_value, ln_gamma, reg_gauss_2f1, reg_inc_beta, upper_inc_gamma};

fn main() -> hockey_predictive::Result<()> {
    println!("Γ(4.5)              = {:.15}", gamma_fn(4.5));
    println!("ln Γ(200)           = {:.12}", ln_gamma(200.0)?);
    println!("Γ(3.5, 2.7)         = {:.15}", upper_inc_gamma(3.5, 2.7)?);
    println!("I_0.626(3, 3)       = {:.15}", reg_inc_beta(0.626, 3.0, 3.0)?);

    // One point per branch: series, Pfaff, and the 1/z expansion
    // (generic and integer b − a).
    for (a, b, c, z) in [(3.0, 6.0, 4.0, -0.3), (3.0, 6.0, 4.0, -1.5), (1.5, 2.7, 3.2, -4.5), (6.0, 9.0, 7.0, -20.0)] {
        let v = gauss_2f1_value(a, b, c, z)?;
        println!("2F1({a}, {b}; {c}; {z:>5}) = {:.15e}  (±{:.1e})", v.value, v.abs_error_estimate);
    }
    println!("regularized 2F1(2, 3; -1; -0.5) = {:.15}", reg_gauss_2f1(2.0, 3.0, -1.0, -0.5)?);

    println!();
    println!("{:>28} {:>22} {:>22} {:>22}", "C(k1, k2, s1, s2)", "incomplete beta", "2F1 closed form", "quadrature");
    for (k1, k2, s1, s2) in [(2.0, 1.0, 2.0, 1.0), (2.5, 40.0, 2.0, 36.0), (5.0, 35.85, 2.0, 39.0663)] {
        println!(
            "{:>28} {:>22.15e} {:>22.15e} {:>22.15e}",
            format!("({k1}, {k2}, {s1}, {s2})"),
            constant_c(k1, k2, s1, s2)?,
            constant_c_hypergeometric(k1, k2, s1, s2)?,
            constant_c_quadrature(k1, k2, s1, s2)?,
        );
    }
    Ok(())
}
