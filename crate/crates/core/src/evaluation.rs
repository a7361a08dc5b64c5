//! Kullback–Leibler loss, prediction error and Monte Carlo frequentist risk.

use std::cell::Cell;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{Density, GammaModel, TruncatedDensity, Window};
use crate::predictive::{
    exact_density, q_hat_0, q_hat_1, PredictionProblem, PredictiveDensity, SufficientStat,
};
use crate::quadrature::Quadrature;
use crate::{Error, Result};

const KL_REL_TOL: f64 = 1e-7;
const KL_ABS_TOL: f64 = 1e-12;
/// Fraction of failed draws above which a risk run is abandoned.
const MAX_REJECTED_FRACTION: f64 = 1e-3;

/// `∫ p log(p/q)` over `window`, with `p` the exact density and `q` the estimate.
///
/// The integrand is taken as 0 where `p` vanishes. Fails with
/// [`Error::Divergence`] if `q` vanishes where `p` does not.
pub fn kl_loss<P: Density, Q: Density>(exact: &P, estimate: &Q, window: Window) -> Result<f64> {
    let diverged = Cell::new(None);
    let q = Quadrature {
        rel_tol: KL_REL_TOL,
        abs_tol: KL_ABS_TOL,
        ..Quadrature::default()
    };
    let integrand = |y: f64| {
        let lp = exact.ln_pdf(y);
        if lp == f64::NEG_INFINITY {
            return 0.0;
        }
        let lq = estimate.ln_pdf(y);
        if lq == f64::NEG_INFINITY {
            if diverged.get().is_none() {
                diverged.set(Some(y));
            }
            return 0.0;
        }
        lp.exp() * (lp - lq)
    };
    let result = q.integrate_window(integrand, window.lo, window.hi, exact.scale_hint());
    if let Some(at) = diverged.get() {
        return Err(Error::Divergence { at });
    }
    Ok(result?.value)
}

/// KL loss of `estimator` against `exact` over the estimator's own window.
pub fn prediction_error<P: Density>(exact: &P, estimator: &PredictiveDensity) -> Result<f64> {
    kl_loss(exact, estimator, estimator.window())
}

/// Gamma shapes of the two observations and of the future waiting time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Shapes {
    pub r1: f64,
    pub r2: f64,
    pub r_prime: f64,
}

impl Default for Shapes {
    fn default() -> Self {
        Self {
            r1: 3.0,
            r2: 3.0,
            r_prime: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorKind {
    Q0,
    Q1,
}

/// Everything about a risk run except the scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskSetup {
    pub shapes: Shapes,
    pub samples: usize,
    pub seed: u64,
    /// Window applied to both the future law and the estimator.
    /// [`Window::POSITIVE`] means no truncation.
    pub window: Window,
}

impl Default for RiskSetup {
    fn default() -> Self {
        Self {
            shapes: Shapes::default(),
            samples: 20_000,
            seed: 20_180_412,
            window: Window::POSITIVE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskEstimate {
    pub risk: f64,
    pub std_err: f64,
    pub rejected: usize,
}

/// Risk of both estimators on one `(λ₁, λ₂)` pair from the same draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedRisk {
    pub q0: RiskEstimate,
    pub q1: RiskEstimate,
    /// Standard error of the paired difference `risk_q0 − risk_q1`.
    pub std_err_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiskCurve {
    pub ratios: Vec<f64>,
    pub risk_q0: Vec<f64>,
    pub risk_q1: Vec<f64>,
    pub std_err_q0: Vec<f64>,
    pub std_err_q1: Vec<f64>,
    pub std_err_diff: Vec<f64>,
    pub lambda1: f64,
    pub samples: usize,
    pub seed: u64,
}

impl RiskCurve {
    pub fn gaps(&self) -> Vec<f64> {
        self.risk_q0.iter().zip(&self.risk_q1).map(|(a, b)| a - b).collect()
    }
}

fn validate(lambda1: f64, lambda2: f64, setup: &RiskSetup) -> Result<()> {
    if setup.samples < 100 {
        return Err(Error::Config(format!("at least 100 samples needed, got {}", setup.samples)));
    }
    if !(lambda1 > 0.0 && lambda2 > 0.0) || !lambda1.is_finite() || !lambda2.is_finite() {
        return Err(Error::Config(format!("scales must be finite and > 0, got ({lambda1}, {lambda2})")));
    }
    let s = setup.shapes;
    for (name, r) in [("r1", s.r1), ("r2", s.r2)] {
        if !(r > 1.0) {
            return Err(Error::InvalidShape(format!("{name} must exceed 1, got {r}")));
        }
    }
    if !(s.r_prime > 0.0) {
        return Err(Error::InvalidShape(format!("r' must be > 0, got {}", s.r_prime)));
    }
    Ok(())
}

/// Standard gamma variates `(G₁, G₂)` for draw `index`.
///
/// Every draw has its own ChaCha8 stream keyed by `(seed, index)`, so results
/// do not depend on how the draws are scheduled across threads.
fn standard_draws(seed: u64, index: u64, g1: &Gamma<f64>, g2: &Gamma<f64>) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (g1.sample(&mut rng), g2.sample(&mut rng))
}

/// `n` draws from `model` using the same per-draw streams as the risk estimates.
pub fn sample_gamma(model: &GammaModel, n: usize, seed: u64) -> Result<Vec<f64>> {
    let g = Gamma::new(model.shape, 1.0).map_err(|e| Error::InvalidShape(e.to_string()))?;
    Ok((0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i);
            model.scale * g.sample(&mut rng)
        })
        .collect())
}

struct DrawLoss {
    q0: Result<f64>,
    q1: Result<f64>,
}

fn losses(
    lambda1: f64,
    lambda2: f64,
    setup: &RiskSetup,
    want_q1: bool,
) -> Result<Vec<DrawLoss>> {
    let s = setup.shapes;
    let g1 = Gamma::new(s.r1, 1.0).map_err(|e| Error::InvalidShape(e.to_string()))?;
    let g2 = Gamma::new(s.r2, 1.0).map_err(|e| Error::InvalidShape(e.to_string()))?;
    let truth = exact_density(GammaModel::new(s.r_prime, lambda1)?, setup.window)?;
    Ok((0..setup.samples as u64)
        .into_par_iter()
        .map(|i| {
            let (u1, u2) = standard_draws(setup.seed, i, &g1, &g2);
            let a = SufficientStat { x: lambda1 * u1, r: s.r1 };
            let b = SufficientStat { x: lambda2 * u2, r: s.r2 };
            let problem = PredictionProblem {
                team_a: a,
                team_b: Some(b),
                r_prime: s.r_prime,
                window: setup.window,
            };
            let q0 = q_hat_0(&problem).and_then(|d| kl_loss(&truth, &d, setup.window));
            let q1 = if want_q1 {
                q_hat_1(&problem).and_then(|d| kl_loss(&truth, &d, setup.window))
            } else {
                Ok(0.0)
            };
            DrawLoss { q0, q1 }
        })
        .collect())
}

fn mean_and_std_err(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Paired losses with failed draws dropped; errors once failures exceed 0.1%.
fn accepted(draws: &[DrawLoss], samples: usize) -> Result<(Vec<f64>, Vec<f64>, usize, usize)> {
    let (mut l0, mut l1) = (Vec::with_capacity(draws.len()), Vec::with_capacity(draws.len()));
    let (mut rej0, mut rej1) = (0, 0);
    let mut last = None;
    for d in draws {
        match (&d.q0, &d.q1) {
            (Ok(a), Ok(b)) => {
                l0.push(*a);
                l1.push(*b);
            }
            (a, b) => {
                if let Err(e) = a {
                    rej0 += 1;
                    last = Some(e.to_string());
                }
                if let Err(e) = b {
                    rej1 += 1;
                    last = Some(e.to_string());
                }
            }
        }
    }
    let rejected = draws.len() - l0.len();
    if rejected as f64 > MAX_REJECTED_FRACTION * samples as f64 {
        return Err(Error::TooManyRejections {
            rejected,
            samples,
            last: last.unwrap_or_default(),
        });
    }
    Ok((l0, l1, rej0, rej1))
}

/// Monte Carlo estimate of the KL risk of one estimator at `(λ₁, λ₂)`.
///
/// Draws `X₁ = λ₁G₁`, `X₂ = λ₂G₂` with `Gᵢ ~ Gam(rᵢ, 1)` and averages the KL
/// loss against `Gam(r′, λ₁)`, truncated to `setup.window`.
pub fn frequentist_risk(
    lambda1: f64,
    lambda2: f64,
    kind: EstimatorKind,
    setup: &RiskSetup,
) -> Result<RiskEstimate> {
    validate(lambda1, lambda2, setup)?;
    if kind == EstimatorKind::Q1 && lambda1 < lambda2 {
        return Err(Error::Config(format!(
            "q1 assumes lambda1 >= lambda2, got ({lambda1}, {lambda2})"
        )));
    }
    let draws = losses(lambda1, lambda2, setup, kind == EstimatorKind::Q1)?;
    let (l0, l1, rej0, rej1) = accepted(&draws, setup.samples)?;
    let (values, rejected) = match kind {
        EstimatorKind::Q0 => (l0, rej0),
        EstimatorKind::Q1 => (l1, rej1),
    };
    let (risk, std_err) = mean_and_std_err(&values);
    Ok(RiskEstimate {
        risk,
        std_err,
        rejected,
    })
}

/// Both risks at `(λ₁, λ₂)` from common draws, with the paired standard error.
pub fn paired_risk(lambda1: f64, lambda2: f64, setup: &RiskSetup) -> Result<PairedRisk> {
    validate(lambda1, lambda2, setup)?;
    if lambda1 < lambda2 {
        return Err(Error::Config(format!(
            "q1 assumes lambda1 >= lambda2, got ({lambda1}, {lambda2})"
        )));
    }
    let draws = losses(lambda1, lambda2, setup, true)?;
    let (l0, l1, rej0, rej1) = accepted(&draws, setup.samples)?;
    let (r0, s0) = mean_and_std_err(&l0);
    let (r1, s1) = mean_and_std_err(&l1);
    let diffs: Vec<f64> = l0.iter().zip(&l1).map(|(a, b)| a - b).collect();
    let (_, sd) = mean_and_std_err(&diffs);
    Ok(PairedRisk {
        q0: RiskEstimate {
            risk: r0,
            std_err: s0,
            rejected: rej0,
        },
        q1: RiskEstimate {
            risk: r1,
            std_err: s1,
            rejected: rej1,
        },
        std_err_diff: sd,
    })
}

/// Risks of `q̂₀` and `q̂₁` over a grid of ratios `λ₁/λ₂ ≥ 1` at fixed `λ₁`.
///
/// Every grid point reuses the same standard gamma draws.
pub fn risk_curve(ratios: &[f64], lambda1: f64, setup: &RiskSetup) -> Result<RiskCurve> {
    if ratios.is_empty() {
        return Err(Error::Config("ratio grid is empty".into()));
    }
    if ratios.iter().any(|r| !(*r >= 1.0) || !r.is_finite()) {
        return Err(Error::Config("ratios must be finite and >= 1".into()));
    }
    if ratios.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Config("ratio grid must be sorted ascending".into()));
    }
    let mut curve = RiskCurve {
        ratios: ratios.to_vec(),
        risk_q0: Vec::new(),
        risk_q1: Vec::new(),
        std_err_q0: Vec::new(),
        std_err_q1: Vec::new(),
        std_err_diff: Vec::new(),
        lambda1,
        samples: setup.samples,
        seed: setup.seed,
    };
    for &ratio in ratios {
        let p = paired_risk(lambda1, lambda1 / ratio, setup)?;
        curve.risk_q0.push(p.q0.risk);
        curve.risk_q1.push(p.q1.risk);
        curve.std_err_q0.push(p.q0.std_err);
        curve.std_err_q1.push(p.q1.std_err);
        curve.std_err_diff.push(p.std_err_diff);
    }
    Ok(curve)
}

/// The truth used for prediction error: `Gam(shape, scale)` truncated to `window`.
pub fn truncated_truth(shape: f64, scale: f64, window: Window) -> Result<TruncatedDensity<GammaModel>> {
    TruncatedDensity::new(GammaModel::new(shape, scale)?, window)
}
