//! Bayes predictive densities for a future gamma waiting time.
//!
//! Model: `X₁ ~ Gam(r₁, λ₁)` is observed and `Y₁ ~ Gam(r′, λ₁)` is to be
//! predicted. With the prior `1/λ₁` the predictive density is the scaled beta
//! prime `B′(r′, r₁, x₁)`; see [`Unrestricted`].
//!
//! When `X₂ ~ Gam(r₂, λ₂)` is observed too and `λ₁ ≥ λ₂` is known, the prior
//! `1/(λ₁λ₂)` on `{λ₁ ≥ λ₂ > 0}` gives the weighted beta prime density
//!
//! ```text
//! q̂₁(y) = C(r₁+r′−1, x₁+y, r₂−1, x₂) / C(r₁−1, x₁, r₂−1, x₂)
//!         · m(r₁−1, x₁) / m(r₁+r′−1, x₁+y) · q̂₀(y)
//! ```
//!
//! with `m(s₁, s₂) = s₁/s₂` and
//! `C(k₁, k₂, s₁, s₂) = ∫₀^∞ ξ⁻¹ m(s₁, s₂; ξ) IG_{k₁,k₂}(ξ) dξ`.
//!
//! `C` has the closed form
//! `k₁ k₂^k₁ s₂^(−k₁−2) Γ(k₁+s₁+2) ₂F̃₁(k₁+1, k₁+s₁+2; k₁+2; −k₂/s₂) / Γ(s₁)`.
//! Because the upper parameter `k₁+1` and the lower parameter `k₁+2` differ by
//! one, the Euler integral turns that `₂F₁` into an incomplete beta function,
//! and the closed form collapses to
//!
//! ```text
//! C(k₁, k₂, s₁, s₂) = (k₁/k₂)(s₁/s₂) · I_{k₂/(k₂+s₂)}(k₁+1, s₁+1).
//! ```
//!
//! [`constant_c`] evaluates this form, which is what [`Restricted`] uses.
//! [`constant_c_hypergeometric`] evaluates the `₂F̃₁` form and
//! [`constant_c_quadrature`] the defining integral; both serve as checks.
//!
//! Written out, `q̂₁` is
//!
//! ```text
//! q̂₁(y) = r₁ Γ(r′+r₁+r₂) y^(r′−1) x₂^(−r′) ₂F₁(r′+r₁, r′+r₁+r₂; r′+r₁+1; −(x₁+y)/x₂)
//!         / ((r′+r₁) Γ(r′) Γ(r₁+r₂) ₂F₁(r₁, r₁+r₂; r₁+1; −x₁/x₂))
//! ```
//!
//! which [`Restricted::closed_form_pdf`] evaluates independently.

use serde::{Deserialize, Serialize};

use crate::distributions::{Density, GammaModel, GeneralizedBetaPrime, TruncatedDensity, Window};
use crate::quadrature::Quadrature;
use crate::specfun::{gauss_2f1, ln_beta, ln_gamma, ln_reg_inc_beta, ln_upper_inc_gamma, reg_gauss_2f1};
use crate::{Error, Result};

/// Shapes within this distance of 1 are rejected for the second team.
const SHAPE_MARGIN: f64 = 1e-9;

/// An observed waiting-time statistic `x` and the gamma shape `r` it was formed under.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientStat {
    pub x: f64,
    pub r: f64,
}

impl SufficientStat {
    pub fn new(x: f64, r: f64) -> Result<Self> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::domain("SufficientStat", format!("x must be finite and > 0, got {x}")));
        }
        if !(r > 1.0) || !r.is_finite() {
            return Err(Error::InvalidShape(format!("observation shape must exceed 1, got {r}")));
        }
        Ok(Self { x, r })
    }
}

/// Inputs for a predictive density: team A's statistic, optionally team B's,
/// the future shape `r′` and the window the density is truncated to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PredictionProblem {
    pub team_a: SufficientStat,
    /// When present, `λ_A ≥ λ_B` is asserted.
    pub team_b: Option<SufficientStat>,
    pub r_prime: f64,
    pub window: Window,
}

impl PredictionProblem {
    pub fn unrestricted(team_a: SufficientStat, r_prime: f64, window: Window) -> Result<Self> {
        check_r_prime(r_prime)?;
        Ok(Self {
            team_a,
            team_b: None,
            r_prime,
            window,
        })
    }

    pub fn restricted(
        team_a: SufficientStat,
        team_b: SufficientStat,
        r_prime: f64,
        window: Window,
    ) -> Result<Self> {
        check_r_prime(r_prime)?;
        Ok(Self {
            team_a,
            team_b: Some(team_b),
            r_prime,
            window,
        })
    }
}

fn check_r_prime(r_prime: f64) -> Result<()> {
    if !(r_prime > 0.0) || !r_prime.is_finite() {
        return Err(Error::InvalidShape(format!("future shape r' must be > 0, got {r_prime}")));
    }
    Ok(())
}

/// `m(s₁, s₂) = s₁/s₂`, the marginal of `IG(s₁, s₂)` under the prior `1/ξ`.
pub fn marginal_flat(s1: f64, s2: f64) -> f64 {
    s1 / s2
}

/// `m(s₁, s₂; ξ̄) = Γ(s₁+1, s₂/ξ̄) / (s₂ Γ(s₁))`, the same marginal with the
/// prior truncated to `(0, ξ̄]`. Tends to [`marginal_flat`] as `ξ̄ → ∞`.
pub fn marginal_restricted(s1: f64, s2: f64, xi_bar: f64) -> Result<f64> {
    Ok(ln_marginal_restricted(s1, s2, xi_bar)?.exp())
}

fn ln_marginal_restricted(s1: f64, s2: f64, xi_bar: f64) -> Result<f64> {
    if !(s1 > 0.0 && s2 > 0.0 && xi_bar > 0.0) {
        return Err(Error::domain(
            "marginal_restricted",
            format!("arguments must be > 0, got ({s1}, {s2}, {xi_bar})"),
        ));
    }
    if xi_bar.is_infinite() {
        return Ok(s1.ln() - s2.ln());
    }
    Ok(ln_upper_inc_gamma(s1 + 1.0, s2 / xi_bar)? - s2.ln() - ln_gamma(s1)?)
}

/// Prior family on a single scale: `1/ξ` on `(0, ∞)` or on `(0, ξ̄]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MarginalPrior {
    Flat,
    BoundedAbove(f64),
}

impl MarginalPrior {
    pub fn marginal(&self, s1: f64, s2: f64) -> Result<f64> {
        match *self {
            MarginalPrior::Flat => Ok(marginal_flat(s1, s2)),
            MarginalPrior::BoundedAbove(xi_bar) => marginal_restricted(s1, s2, xi_bar),
        }
    }
}

fn check_c_args(k1: f64, k2: f64, s1: f64, s2: f64) -> Result<()> {
    if [k1, k2, s1, s2].iter().all(|v| *v > 0.0 && v.is_finite()) {
        Ok(())
    } else {
        Err(Error::domain(
            "constant_c",
            format!("arguments must be finite and > 0, got ({k1}, {k2}, {s1}, {s2})"),
        ))
    }
}

/// `ln C(k₁, k₂, s₁, s₂)` through the incomplete beta form.
pub fn ln_constant_c(k1: f64, k2: f64, s1: f64, s2: f64) -> Result<f64> {
    check_c_args(k1, k2, s1, s2)?;
    let x = k2 / (k2 + s2);
    Ok(k1.ln() + s1.ln() - k2.ln() - s2.ln() + ln_reg_inc_beta(x, k1 + 1.0, s1 + 1.0)?)
}

/// The constant `C(k₁, k₂, s₁, s₂)` for the prior `1/(ξ₁ξ₂)` on `ξ₁ ≥ ξ₂`.
pub fn constant_c(k1: f64, k2: f64, s1: f64, s2: f64) -> Result<f64> {
    Ok(ln_constant_c(k1, k2, s1, s2)?.exp())
}

/// `C` from its regularized hypergeometric closed form.
pub fn constant_c_hypergeometric(k1: f64, k2: f64, s1: f64, s2: f64) -> Result<f64> {
    check_c_args(k1, k2, s1, s2)?;
    let f = reg_gauss_2f1(k1 + 1.0, k1 + s1 + 2.0, k1 + 2.0, -k2 / s2)?;
    let ln_rest = k1.ln() + k1 * k2.ln() - (k1 + 2.0) * s2.ln() + ln_gamma(k1 + s1 + 2.0)?
        - ln_gamma(s1)?;
    Ok(f * ln_rest.exp())
}

/// `C` by adaptive quadrature of its defining integral over `ξ₁`, with the
/// inner integral supplied by [`marginal_restricted`].
pub fn constant_c_quadrature(k1: f64, k2: f64, s1: f64, s2: f64) -> Result<f64> {
    check_c_args(k1, k2, s1, s2)?;
    let ig = crate::distributions::InverseGammaModel::new(k1, k2)?;
    let q = Quadrature {
        rel_tol: 1e-11,
        abs_tol: 0.0,
        ..Quadrature::default()
    };
    let integral = q.integrate_window(
        |xi| {
            let l = ig.ln_pdf(xi);
            if l == f64::NEG_INFINITY {
                return 0.0;
            }
            match ln_marginal_restricted(s1, s2, xi) {
                Ok(lm) => (l + lm - xi.ln()).exp(),
                Err(_) => f64::NAN,
            }
        },
        0.0,
        f64::INFINITY,
        ig.scale_hint(),
    )?;
    Ok(integral.value)
}

/// `q̂₀`: the predictive density of `Y₁` from `x₁` alone under the prior `1/λ₁`.
///
/// Equal to the beta prime `B′(r′, r₁, x₁)`:
/// `y^(r′−1) x₁^r₁ / (B(r₁, r′) (x₁+y)^(r₁+r′))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unrestricted {
    pub x1: f64,
    pub r1: f64,
    pub r_prime: f64,
    ln_norm: f64,
}

impl Unrestricted {
    pub fn new(team_a: SufficientStat, r_prime: f64) -> Result<Self> {
        check_r_prime(r_prime)?;
        let SufficientStat { x: x1, r: r1 } = team_a;
        Ok(Self {
            x1,
            r1,
            r_prime,
            ln_norm: r1 * x1.ln() - ln_beta(r1, r_prime)?,
        })
    }

    pub fn as_beta_prime(&self) -> GeneralizedBetaPrime {
        GeneralizedBetaPrime::beta_prime(self.r_prime, self.r1, self.x1)
            .expect("parameters validated on construction")
    }

    /// `x₁ r′/(r₁ − 1)`; infinite when `r₁ ≤ 1`.
    pub fn untruncated_mean(&self) -> f64 {
        if self.r1 <= 1.0 {
            return f64::INFINITY;
        }
        self.x1 * self.r_prime / (self.r1 - 1.0)
    }

    /// `x₁ (r′ − 1)/(r₁ + 1)`, or 0 when `r′ ≤ 1`.
    pub fn untruncated_mode(&self) -> f64 {
        (self.x1 * (self.r_prime - 1.0) / (self.r1 + 1.0)).max(0.0)
    }

    /// The predictive density in its general form for an arbitrary prior
    /// in the `1/λ` family:
    /// `m(r₁+r′−1, x₁+y)/m(r₁−1, x₁) · x₁^(r₁−1) y^(r′−1) / (B(r₁−1, r′) (x₁+y)^(r₁+r′−1))`.
    pub fn general_form_pdf(&self, y: f64, prior: MarginalPrior) -> Result<f64> {
        if !(y > 0.0) {
            return Ok(0.0);
        }
        let (x1, r1, rp) = (self.x1, self.r1, self.r_prime);
        let num = prior.marginal(r1 + rp - 1.0, x1 + y)?;
        let den = prior.marginal(r1 - 1.0, x1)?;
        let ln_rest = (r1 - 1.0) * x1.ln() + (rp - 1.0) * y.ln()
            - (r1 + rp - 1.0) * (x1 + y).ln()
            - ln_beta(r1 - 1.0, rp)?;
        Ok(num / den * ln_rest.exp())
    }
}

impl Density for Unrestricted {
    fn ln_pdf(&self, y: f64) -> f64 {
        if !(y > 0.0) || y.is_infinite() {
            return f64::NEG_INFINITY;
        }
        self.ln_norm + (self.r_prime - 1.0) * y.ln() - (self.r1 + self.r_prime) * (self.x1 + y).ln()
    }

    fn scale_hint(&self) -> f64 {
        self.x1
    }
}

/// `q̂₁`: the predictive density of `Y₁` from `x₁` and `x₂` given `λ₁ ≥ λ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Restricted {
    pub unrestricted: Unrestricted,
    pub x2: f64,
    pub r2: f64,
    ln_c_observed: f64,
    ln_m_observed: f64,
}

impl Restricted {
    pub fn new(team_a: SufficientStat, team_b: SufficientStat, r_prime: f64) -> Result<Self> {
        if team_b.r <= 1.0 + SHAPE_MARGIN {
            return Err(Error::InvalidShape(format!(
                "second team's shape must exceed 1, got {}",
                team_b.r
            )));
        }
        let unrestricted = Unrestricted::new(team_a, r_prime)?;
        let (x1, r1) = (team_a.x, team_a.r);
        let (x2, r2) = (team_b.x, team_b.r);
        Ok(Self {
            unrestricted,
            x2,
            r2,
            ln_c_observed: ln_constant_c(r1 - 1.0, x1, r2 - 1.0, x2)?,
            ln_m_observed: marginal_flat(r1 - 1.0, x1).ln(),
        })
    }

    /// `q̂₁(y)/q̂₀(y)`.
    pub fn weight(&self, y: f64) -> f64 {
        let u = &self.unrestricted;
        let k1 = u.r1 + u.r_prime - 1.0;
        let k2 = u.x1 + y;
        match ln_constant_c(k1, k2, self.r2 - 1.0, self.x2) {
            Ok(ln_c) => (ln_c - self.ln_c_observed + self.ln_m_observed - marginal_flat(k1, k2).ln()).exp(),
            Err(_) => f64::NAN,
        }
    }

    /// The same density through the two hypergeometric functions of its
    /// written-out closed form.
    pub fn closed_form_pdf(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return Ok(0.0);
        }
        let u = &self.unrestricted;
        let (x1, r1, rp, x2, r2) = (u.x1, u.r1, u.r_prime, self.x2, self.r2);
        let num = gauss_2f1(rp + r1, rp + r1 + r2, rp + r1 + 1.0, -(x1 + y) / x2)?;
        let den = gauss_2f1(r1, r1 + r2, r1 + 1.0, -x1 / x2)?;
        let ln_rest = r1.ln() + ln_gamma(rp + r1 + r2)? + (rp - 1.0) * y.ln() - rp * x2.ln()
            - (rp + r1).ln()
            - ln_gamma(rp)?
            - ln_gamma(r1 + r2)?;
        Ok(num / den * ln_rest.exp())
    }
}

impl Density for Restricted {
    fn ln_pdf(&self, y: f64) -> f64 {
        let base = self.unrestricted.ln_pdf(y);
        if base == f64::NEG_INFINITY {
            return base;
        }
        base + self.weight(y).ln()
    }

    fn scale_hint(&self) -> f64 {
        self.unrestricted.x1
    }
}

/// The densities this crate predicts with, plus the exact gamma law for reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Estimator {
    Unrestricted(Unrestricted),
    Restricted(Restricted),
    Exact(GammaModel),
}

impl Density for Estimator {
    fn ln_pdf(&self, y: f64) -> f64 {
        match self {
            Estimator::Unrestricted(d) => d.ln_pdf(y),
            Estimator::Restricted(d) => d.ln_pdf(y),
            Estimator::Exact(d) => d.ln_pdf(y),
        }
    }

    fn scale_hint(&self) -> f64 {
        match self {
            Estimator::Unrestricted(d) => d.scale_hint(),
            Estimator::Restricted(d) => d.scale_hint(),
            Estimator::Exact(d) => d.scale_hint(),
        }
    }
}

/// A predictive density over the waiting time, normalized on its window.
pub type PredictiveDensity = TruncatedDensity<Estimator>;

fn restrict_to(estimator: Estimator, window: Window) -> Result<PredictiveDensity> {
    if window == Window::POSITIVE {
        Ok(TruncatedDensity::whole(estimator))
    } else {
        TruncatedDensity::new(estimator, window)
    }
}

/// `q̂₀` for the problem's team A, truncated to the problem's window.
/// Team B, if present, is ignored.
pub fn q_hat_0(problem: &PredictionProblem) -> Result<PredictiveDensity> {
    let d = Unrestricted::new(problem.team_a, problem.r_prime)?;
    restrict_to(Estimator::Unrestricted(d), problem.window)
}

/// `q̂₁` for the problem, truncated to its window. Requires team B.
pub fn q_hat_1(problem: &PredictionProblem) -> Result<PredictiveDensity> {
    let team_b = problem.team_b.ok_or_else(|| {
        Error::Config("the restricted estimator needs the second team's statistic".into())
    })?;
    let d = Restricted::new(problem.team_a, team_b, problem.r_prime)?;
    restrict_to(Estimator::Restricted(d), problem.window)
}

/// The exact gamma law restricted to `window`.
pub fn exact_density(model: GammaModel, window: Window) -> Result<PredictiveDensity> {
    restrict_to(Estimator::Exact(model), window)
}

/// One row of the summary table: mode, mean and the 20/50/90 % quantiles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub mode: f64,
    pub mean: f64,
    pub p20: f64,
    pub p50: f64,
    pub p90: f64,
}

impl Table2Row {
    pub fn as_array(&self) -> [f64; 5] {
        [self.mode, self.mean, self.p20, self.p50, self.p90]
    }
}

pub fn predictive_summaries(d: &PredictiveDensity) -> Result<Table2Row> {
    let s = crate::distributions::summarize(d, &[0.2, 0.5, 0.9])?;
    Ok(Table2Row {
        mode: s.mode,
        mean: s.mean,
        p20: s.quantiles[0].1,
        p50: s.quantiles[1].1,
        p90: s.quantiles[2].1,
    })
}
