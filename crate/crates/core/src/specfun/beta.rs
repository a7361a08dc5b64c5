use super::gamma::ln_gamma;
use crate::{Error, Result};

const MAX_ITER: usize = 100_000;

fn check_positive(function: &'static str, a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(function, format!("parameters must be finite and > 0, got ({a}, {b})")));
    }
    Ok(())
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    check_positive("ln_beta", a, b)?;
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    check_positive("beta_fn", a, b)?;
    Ok(ln_beta(a, b)?.exp())
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(x: f64, a: f64, b: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < f64::EPSILON {
            return Ok(h);
        }
    }
    Err(Error::Convergence {
        function: "reg_inc_beta",
        estimate: h,
        abs_error: f64::NAN,
    })
}

/// `ln` of the leading factor `x^a (1-x)^b / B(a, b)`.
fn ln_front(x: f64, a: f64, b: f64) -> Result<f64> {
    Ok(a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b)?)
}

/// Log of the regularized incomplete beta function `ln Iₓ(a, b)`.
///
/// Stays finite where `Iₓ` itself would underflow.
pub fn ln_reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check_positive("reg_inc_beta", a, b)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("reg_inc_beta", format!("x must lie in [0, 1], got {x}")));
    }
    if x == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(ln_front(x, a, b)? + beta_cf(x, a, b)?.ln() - a.ln())
    } else {
        let y = 1.0 - x;
        let complement = (ln_front(y, b, a)? + beta_cf(y, b, a)?.ln() - b.ln()).exp();
        Ok((-complement).ln_1p())
    }
}

/// Regularized incomplete beta function `Iₓ(a, b)`.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    Ok(ln_reg_inc_beta(x, a, b)?.exp())
}
