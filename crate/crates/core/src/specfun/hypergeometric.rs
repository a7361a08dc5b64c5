//! Gauss hypergeometric function `₂F₁(a, b; c; z)` for real parameters and
//! `z ≤ 0`.
//!
//! Evaluation strategy by argument range:
//!
//! * `-1/2 ≤ z ≤ 0`: the defining power series.
//! * `-2 ≤ z < -1/2`: Pfaff's transformation
//!   `₂F₁(a,b;c;z) = (1−z)^(−a) ₂F₁(a, c−b; c; z/(z−1))`, whose argument lies
//!   in `[1/3, 2/3]`.
//! * `z < -2`: the `1/z` connection formula. For `b − a` not an integer both
//!   branches are summed directly. For `b − a = m` an integer the logarithmic
//!   form with digamma terms is used, where the ratio `ψ(x)/Γ(x)` is continued
//!   through the poles of `Γ`. When `b − a` lies within `1e-4` of an integer
//!   without being one, the value is obtained by quadratic interpolation in
//!   `b` between the integer case and two generic evaluations at `±1e-4`.
//!
//! If `a` or `b` is a non-positive integer the series terminates and is summed
//! exactly for any `z ≤ 0`.

use super::gamma::{digamma, digamma_over_gamma, gamma_fn, rgamma};
use super::{is_non_positive_integer, SpecialValue};
use crate::{Error, Result};

const MAX_TERMS: usize = 20_000;
const EPS: f64 = f64::EPSILON;
const NEAR_INTEGER: f64 = 1e-4;

fn check_args(function: &'static str, a: f64, b: f64, c: f64, z: f64) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite()) {
        return Err(Error::domain(function, format!("non-finite argument ({a}, {b}, {c}, {z})")));
    }
    if z > 0.0 {
        return Err(Error::domain(function, format!("only z <= 0 is supported, got {z}")));
    }
    Ok(())
}

/// Power series, to be called only where it converges (|z| < 1) or terminates.
fn series(a: f64, b: f64, c: f64, z: f64) -> Result<SpecialValue> {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    let mut small_in_a_row = 0;
    for k in 0..MAX_TERMS {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        abs_sum += term.abs();
        if term == 0.0 {
            return Ok(SpecialValue::new(sum, 4.0 * EPS * abs_sum));
        }
        if term.abs() <= EPS * sum.abs() {
            small_in_a_row += 1;
            if small_in_a_row == 2 {
                return Ok(SpecialValue::new(sum, 4.0 * EPS * abs_sum + term.abs()));
            }
        } else {
            small_in_a_row = 0;
        }
    }
    Err(Error::Convergence {
        function: "gauss_2f1",
        estimate: sum,
        abs_error: term.abs() / (1.0 - z.abs()).max(EPS),
    })
}

/// Finite sum when `a` is a non-positive integer `-n`.
fn polynomial(a: f64, b: f64, c: f64, z: f64) -> SpecialValue {
    let n = (-a).round() as usize;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 0..n {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        abs_sum += term.abs();
    }
    SpecialValue::new(sum, 4.0 * EPS * abs_sum)
}

fn pfaff(a: f64, b: f64, c: f64, z: f64) -> Result<SpecialValue> {
    let w = z / (z - 1.0);
    let scale = (1.0 - z).powf(-a);
    let inner = series(a, c - b, c, w)?;
    Ok(SpecialValue::new(
        scale * inner.value,
        scale * inner.abs_error_estimate,
    ))
}

/// `1/z` connection formula for non-integer `b − a`.
fn inversion_generic(a: f64, b: f64, c: f64, z: f64) -> Result<SpecialValue> {
    let w = 1.0 / z;
    let gc = gamma_fn(c);
    let coef_a = gc * gamma_fn(b - a) * rgamma(b) * rgamma(c - a);
    let coef_b = gc * gamma_fn(a - b) * rgamma(a) * rgamma(c - b);
    let mut value = 0.0;
    let mut err = 0.0;
    if coef_a != 0.0 {
        let s = series(a, 1.0 - c + a, 1.0 - b + a, w)?;
        let p = (-z).powf(-a);
        value += coef_a * p * s.value;
        err += (coef_a * p).abs() * s.abs_error_estimate;
    }
    if coef_b != 0.0 {
        let s = series(b, 1.0 - c + b, 1.0 - a + b, w)?;
        let p = (-z).powf(-b);
        value += coef_b * p * s.value;
        err += (coef_b * p).abs() * s.abs_error_estimate;
    }
    err += 8.0 * EPS * value.abs();
    Ok(SpecialValue::new(value, err))
}

/// `1/z` connection formula for `b = a + m` with integer `m ≥ 0`.
fn inversion_integer(a: f64, m: usize, c: f64, z: f64) -> Result<SpecialValue> {
    let mf = m as f64;
    let pre = (-z).powf(-a);
    let inv_z = 1.0 / z;

    // Finite part: Σ_{k<m} (a)_k (m−k−1)!/k! · z^(−k) / Γ(c−a−k)
    let mut finite = 0.0;
    let mut finite_abs = 0.0;
    if m > 0 {
        let mut fact = vec![1.0; m];
        for i in 1..m {
            fact[i] = fact[i - 1] * i as f64;
        }
        let mut poch = 1.0;
        let mut kfact = 1.0;
        let mut zpow = 1.0;
        for k in 0..m {
            let kf = k as f64;
            if k > 0 {
                poch *= a + kf - 1.0;
                kfact *= kf;
                zpow *= inv_z;
            }
            let t = poch * fact[m - k - 1] / kfact * rgamma(c - a - kf) * zpow;
            finite += t;
            finite_abs += t.abs();
        }
        finite *= rgamma(a + mf);
        finite_abs *= rgamma(a + mf).abs();
    }

    // Logarithmic part.
    let mut m_fact = 1.0;
    for i in 2..=m {
        m_fact *= i as f64;
    }
    let mut coef = inv_z.powi(m as i32) / m_fact;
    let ln_mz = (-z).ln();
    let mut psi_mk = digamma(1.0 + mf);
    let mut psi_k = digamma(1.0);
    let mut psi_amk = digamma(a + mf);
    let mut x = c - a - mf;
    let mut rg = rgamma(x);
    let mut rd = digamma_over_gamma(x);

    let mut sum = 0.0;
    let mut abs_sum = 0.0;
    let mut small_in_a_row = 0;
    let mut converged = false;
    let mut last = f64::NAN;
    for k in 0..MAX_TERMS {
        let kf = k as f64;
        let bracket = (ln_mz + psi_mk + psi_k - psi_amk) * rg - rd;
        let t = coef * bracket;
        sum += t;
        abs_sum += t.abs();
        last = t;
        if t.abs() <= EPS * sum.abs() {
            small_in_a_row += 1;
            if small_in_a_row == 3 {
                converged = true;
                break;
            }
        } else {
            small_in_a_row = 0;
        }
        coef *= (a + mf + kf) / ((kf + 1.0) * (kf + mf + 1.0)) * (-inv_z);
        psi_mk += 1.0 / (1.0 + mf + kf);
        psi_k += 1.0 / (1.0 + kf);
        psi_amk += 1.0 / (a + mf + kf);
        let next_rg = (x - 1.0) * rg;
        rd = (x - 1.0) * rd - rg;
        rg = next_rg;
        x -= 1.0;
    }
    let gc = gamma_fn(c);
    let ra = rgamma(a);
    if !converged {
        return Err(Error::Convergence {
            function: "gauss_2f1",
            estimate: gc * pre * (finite + ra * sum),
            abs_error: (gc * pre * ra * last).abs(),
        });
    }
    let value = gc * pre * (finite + ra * sum);
    let err = (gc * pre).abs() * 8.0 * EPS * (finite_abs + (ra * abs_sum).abs()) + 8.0 * EPS * value.abs();
    Ok(SpecialValue::new(value, err))
}

fn inversion(a: f64, b: f64, c: f64, z: f64) -> Result<SpecialValue> {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let m = b - a;
    let m_int = m.round();
    let dist = (m - m_int).abs();
    if dist <= super::INTEGER_EPS * m.max(1.0) {
        return inversion_integer(a, m_int as usize, c, z);
    }
    if dist < NEAR_INTEGER {
        let h = NEAR_INTEGER;
        let delta = m - m_int;
        let f0 = inversion_integer(a, m_int as usize, c, z)?;
        let fp = inversion_generic(a, a + m_int + h, c, z)?;
        let fm = inversion_generic(a, a + m_int - h, c, z)?;
        let d1 = (fp.value - fm.value) / (2.0 * h);
        let d2 = (fp.value - 2.0 * f0.value + fm.value) / (h * h);
        let value = f0.value + delta * d1 + 0.5 * delta * delta * d2;
        let err = f0.abs_error_estimate
            + fp.abs_error_estimate
            + fm.abs_error_estimate
            + (d2 * h * delta).abs();
        return Ok(SpecialValue::new(value, err));
    }
    inversion_generic(a, b, c, z)
}

fn unregularized(a: f64, b: f64, c: f64, z: f64) -> Result<SpecialValue> {
    if z == 0.0 {
        return Ok(SpecialValue::new(1.0, 0.0));
    }
    if is_non_positive_integer(a) {
        return Ok(polynomial(a.round(), b, c, z));
    }
    if is_non_positive_integer(b) {
        return Ok(polynomial(b.round(), a, c, z));
    }
    let value = if z >= -0.5 {
        series(a, b, c, z)?
    } else if z >= -2.0 {
        pfaff(a, b, c, z)?
    } else {
        inversion(a, b, c, z)?
    };
    if !value.value.is_finite() {
        return Err(Error::Convergence {
            function: "gauss_2f1",
            estimate: value.value,
            abs_error: f64::INFINITY,
        });
    }
    Ok(value)
}

/// `₂F₁(a, b; c; z)` with its absolute error estimate.
pub fn gauss_2f1_value(a: f64, b: f64, c: f64, z: f64) -> Result<SpecialValue> {
    check_args("gauss_2f1", a, b, c, z)?;
    if is_non_positive_integer(c) {
        return Err(Error::domain("gauss_2f1", format!("c must not be a non-positive integer, got {c}")));
    }
    unregularized(a, b, c, z)
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for `z ≤ 0`.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    Ok(gauss_2f1_value(a, b, c, z)?.value)
}

/// Regularized hypergeometric function `₂F̃₁(a, b; c; z) = ₂F₁(a, b; c; z)/Γ(c)`,
/// entire in `c`.
pub fn reg_gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    check_args("reg_gauss_2f1", a, b, c, z)?;
    if is_non_positive_integer(c) {
        // ₂F̃₁(a,b;−n;z) = (a)ₙ₊₁(b)ₙ₊₁ zⁿ⁺¹ ₂F̃₁(a+n+1, b+n+1; n+2; z)
        let n = (-c).round();
        let mut factor = 1.0;
        let mut k = 0.0;
        while k <= n {
            factor *= (a + k) * (b + k) * z;
            k += 1.0;
        }
        if factor == 0.0 {
            return Ok(0.0);
        }
        let shifted = unregularized(a + n + 1.0, b + n + 1.0, n + 2.0, z)?;
        return Ok(factor * shifted.value * rgamma(n + 2.0));
    }
    Ok(unregularized(a, b, c, z)?.value * rgamma(c))
}
