//! Reference integrators for the integration tests.
//!
//! Double-exponential rules, kept apart from the crate's Gauss–Kronrod code
//! so that quadrature-based expectations do not share its failure modes.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

const MAX_LEVEL: u32 = 12;

fn refine<F: FnMut(f64) -> f64>(mut term: F, t_max: f64, rel_tol: f64) -> f64 {
    let mut h = 1.0;
    let mut sum = term(0.0);
    let mut k = 1;
    while (k as f64) * h <= t_max {
        let t = k as f64 * h;
        sum += term(t) + term(-t);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..MAX_LEVEL {
        h /= 2.0;
        let mut t = h;
        while t <= t_max {
            sum += term(t) + term(-t);
            t += 2.0 * h;
        }
        let next = sum * h;
        let converged = (next - estimate).abs() <= rel_tol * next.abs();
        estimate = next;
        if converged {
            break;
        }
    }
    estimate
}

/// `∫ₐᵇ f` by the tanh-sinh rule. `f` is never evaluated at the endpoints.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    refine(
        |t| {
            let u = FRAC_PI_2 * t.sinh();
            let w = FRAC_PI_2 * t.cosh() / u.cosh().powi(2);
            // distances to each endpoint, computed without cancellation
            let from_a = 2.0 * half / (1.0 + (-2.0 * u).exp());
            let from_b = 2.0 * half / (1.0 + (2.0 * u).exp());
            let x = if t < 0.0 { a + from_a } else { b - from_b };
            if x <= a || x >= b || w == 0.0 {
                0.0
            } else {
                half * w * f(x)
            }
        },
        4.0,
        rel_tol,
    )
}

/// `∫ₐ^∞ f` by the exp-sinh rule with length scale `s`.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, s: f64, rel_tol: f64) -> f64 {
    refine(
        |t| {
            let e = (FRAC_PI_2 * t.sinh()).exp();
            let x = a + s * e;
            let w = s * FRAC_PI_2 * t.cosh() * e;
            if x <= a || !x.is_finite() || !w.is_finite() {
                return 0.0;
            }
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                w * v
            }
        },
        4.5,
        rel_tol,
    )
}

/// `∫ f` over `(lo, hi)` where `hi` may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, scale: f64) -> f64 {
    if hi.is_finite() {
        tanh_sinh(f, lo, hi, 1e-12)
    } else {
        exp_sinh(f, lo, scale, 1e-12)
    }
}

pub fn ln_gamma_ref(x: f64) -> f64 {
    // Stirling series after shifting the argument above 15.
    let mut shift = 0.0;
    let mut z = x;
    while z < 15.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// Inverse-gamma density written out directly.
pub fn inverse_gamma_pdf_ref(a: f64, b: f64, t: f64) -> f64 {
    (a * b.ln() - ln_gamma_ref(a) - (a + 1.0) * t.ln() - b / t).exp()
}

/// `m(s₁, s₂; ξ̄) = ∫₀^ξ̄ ξ⁻¹ IG_{s₁,s₂}(ξ) dξ`, or the flat marginal when `ξ̄ = ∞`.
pub fn marginal_ref(s1: f64, s2: f64, xi_bar: f64) -> f64 {
    // ξ = s₂/u turns the integrand into a gamma kernel in u.
    let kernel = |u: f64| (s1 * u.ln() - u - ln_gamma_ref(s1)).exp() / s2;
    if xi_bar.is_infinite() {
        return s1 / s2;
    }
    exp_sinh(kernel, s2 / xi_bar, (s1 + 1.0).max(1.0), 1e-13)
}

/// `C(k₁, k₂, s₁, s₂)` by two nested quadratures of its defining integral.
pub fn constant_c_ref(k1: f64, k2: f64, s1: f64, s2: f64) -> f64 {
    let mode = k2 / (k1 + 1.0);
    exp_sinh(
        |xi| inverse_gamma_pdf_ref(k1, k2, xi) * marginal_ref(s1, s2, xi) / xi,
        0.0,
        mode,
        1e-11,
    )
}
