//! Gamma, inverse-gamma and generalized beta prime laws, plus truncation to
//! a window with summary statistics.

use serde::{Deserialize, Serialize};

use crate::quadrature::Quadrature;
use crate::specfun::{gamma_q, ln_beta, ln_gamma};
use crate::{Error, Result};

/// Something with a density on `(0, ∞)` that can be evaluated pointwise.
///
/// `ln_pdf` returns `-∞` outside the support.
pub trait Density {
    fn ln_pdf(&self, x: f64) -> f64;

    fn pdf(&self, x: f64) -> f64 {
        let l = self.ln_pdf(x);
        if l == f64::NEG_INFINITY {
            0.0
        } else {
            l.exp()
        }
    }

    /// A length on which most of the mass lives; used when mapping an
    /// infinite range onto the unit interval for quadrature.
    fn scale_hint(&self) -> f64 {
        1.0
    }
}

impl<D: Density + ?Sized> Density for &D {
    fn ln_pdf(&self, x: f64) -> f64 {
        (**self).ln_pdf(x)
    }
    fn scale_hint(&self) -> f64 {
        (**self).scale_hint()
    }
}

/// An open interval `(lo, hi)` on the waiting-time axis; `hi` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    /// Regulation game length in minutes.
    pub const REGULATION: Window = Window { lo: 0.0, hi: 60.0 };
    /// The whole positive half-line.
    pub const POSITIVE: Window = Window {
        lo: 0.0,
        hi: f64::INFINITY,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo >= 0.0) || !lo.is_finite() || !(hi > lo) {
            return Err(Error::Config(format!("window needs 0 <= lo < hi, got ({lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.hi.is_finite()
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// `Gam(shape, scale)`: density `x^(r−1) e^(−x/λ) / (Γ(r) λ^r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GammaParams")]
pub struct GammaModel {
    pub shape: f64,
    pub scale: f64,
    #[serde(skip)]
    ln_norm: f64,
}

#[derive(Deserialize)]
struct GammaParams {
    shape: f64,
    scale: f64,
}

impl TryFrom<GammaParams> for GammaModel {
    type Error = Error;
    fn try_from(p: GammaParams) -> Result<Self> {
        GammaModel::new(p.shape, p.scale)
    }
}

impl GammaModel {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        if !(shape > 0.0 && scale > 0.0) || !shape.is_finite() || !scale.is_finite() {
            return Err(Error::InvalidShape(format!(
                "gamma needs shape > 0 and scale > 0, got ({shape}, {scale})"
            )));
        }
        Ok(Self {
            shape,
            scale,
            ln_norm: -ln_gamma(shape)? - shape * scale.ln(),
        })
    }

    pub fn mean(&self) -> f64 {
        self.shape * self.scale
    }

    pub fn variance(&self) -> f64 {
        self.shape * self.scale * self.scale
    }
}

impl Density for GammaModel {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !(x > 0.0) || x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        self.ln_norm + (self.shape - 1.0) * x.ln() - x / self.scale
    }

    fn scale_hint(&self) -> f64 {
        self.mean()
    }
}

/// Gamma density at `x`; zero for `x ≤ 0`.
pub fn gamma_pdf(model: &GammaModel, x: f64) -> f64 {
    model.pdf(x)
}

/// Inverse-gamma law `IG(a, b)` with density `b^a/Γ(a) t^(−a−1) e^(−b/t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InverseGammaModel {
    pub a: f64,
    pub b: f64,
}

impl InverseGammaModel {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidShape(format!(
                "inverse gamma needs a > 0 and b > 0, got ({a}, {b})"
            )));
        }
        Ok(Self { a, b })
    }

    /// `P(T ≤ t) = Γ(a, b/t)/Γ(a)`.
    pub fn cdf(&self, t: f64) -> f64 {
        if !(t > 0.0) {
            return 0.0;
        }
        if t.is_infinite() {
            return 1.0;
        }
        gamma_q(self.a, self.b / t).unwrap_or(f64::NAN)
    }
}

impl Density for InverseGammaModel {
    fn ln_pdf(&self, t: f64) -> f64 {
        if !(t > 0.0) || t.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let lg = ln_gamma(self.a).unwrap_or(f64::NAN);
        self.a * self.b.ln() - lg - (self.a + 1.0) * t.ln() - self.b / t
    }

    fn scale_hint(&self) -> f64 {
        self.b / (self.a + 1.0)
    }
}

pub fn inverse_gamma_pdf(model: &InverseGammaModel, t: f64) -> f64 {
    model.pdf(t)
}

pub fn inverse_gamma_cdf(model: &InverseGammaModel, t: f64) -> f64 {
    model.cdf(t)
}

/// Generalized beta prime `GB′(a, b, γ, σ)` with density
/// `γ (t/σ)^(aγ−1) / (σ B(a,b) (1 + (t/σ)^γ)^(a+b))`.
///
/// `γ = 1` gives the three-parameter beta prime `B′(a, b, σ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedBetaPrime {
    pub a: f64,
    pub b: f64,
    pub gamma_shape: f64,
    pub sigma: f64,
}

impl GeneralizedBetaPrime {
    pub fn new(a: f64, b: f64, gamma_shape: f64, sigma: f64) -> Result<Self> {
        let ok = [a, b, gamma_shape, sigma]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if !ok {
            return Err(Error::InvalidShape(format!(
                "beta prime parameters must be > 0, got ({a}, {b}, {gamma_shape}, {sigma})"
            )));
        }
        Ok(Self {
            a,
            b,
            gamma_shape,
            sigma,
        })
    }

    /// Three-parameter beta prime `B′(a, b, σ)`.
    pub fn beta_prime(a: f64, b: f64, sigma: f64) -> Result<Self> {
        Self::new(a, b, 1.0, sigma)
    }
}

impl Density for GeneralizedBetaPrime {
    fn ln_pdf(&self, t: f64) -> f64 {
        if !(t > 0.0) || t.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let lb = ln_beta(self.a, self.b).unwrap_or(f64::NAN);
        let u = t / self.sigma;
        let ln_u = u.ln();
        let g = self.gamma_shape;
        // ln(1 + u^γ) without overflow for large u
        let ln_1p = if g * ln_u > 30.0 {
            g * ln_u + (-g * ln_u).exp().ln_1p()
        } else {
            (g * ln_u).exp().ln_1p()
        };
        g.ln() - self.sigma.ln() - lb + (self.a * g - 1.0) * ln_u - (self.a + self.b) * ln_1p
    }

    fn scale_hint(&self) -> f64 {
        self.sigma
    }
}

pub fn gb_prime_pdf(model: &GeneralizedBetaPrime, t: f64) -> f64 {
    model.pdf(t)
}

/// Relative tolerance for the truncation mass.
const MASS_REL_TOL: f64 = 1e-8;
/// Bisection and mode-search tolerance, in the units of the waiting-time axis.
const LOCATION_TOL: f64 = 1e-8;

/// A density restricted to a window and renormalized by its mass there.
#[derive(Debug, Clone)]
pub struct TruncatedDensity<D> {
    base: D,
    window: Window,
    mass: f64,
    ln_mass: f64,
}

/// Restrict `base` to `(lo, hi)`, computing the window mass by adaptive quadrature.
pub fn truncate<D: Density>(base: D, lo: f64, hi: f64) -> Result<TruncatedDensity<D>> {
    TruncatedDensity::new(base, Window::new(lo, hi)?)
}

impl<D: Density> TruncatedDensity<D> {
    pub fn new(base: D, window: Window) -> Result<Self> {
        let q = Quadrature {
            rel_tol: MASS_REL_TOL,
            abs_tol: 1e-15,
            ..Quadrature::default()
        };
        let mass = q
            .integrate_window(|x| base.pdf(x), window.lo, window.hi, base.scale_hint())?
            .value;
        if !(mass >= 1e-12) {
            return Err(Error::DegenerateWindow {
                lo: window.lo,
                hi: window.hi,
                mass,
            });
        }
        Ok(Self {
            base,
            window,
            mass,
            ln_mass: mass.ln(),
        })
    }

    /// Wrap a density that is already normalized on `(0, ∞)` without truncating it.
    pub fn whole(base: D) -> Self {
        Self {
            base,
            window: Window::POSITIVE,
            mass: 1.0,
            ln_mass: 0.0,
        }
    }

    pub fn base(&self) -> &D {
        &self.base
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Probability of the window under the base density.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    fn quadrature() -> Quadrature {
        Quadrature {
            rel_tol: 1e-11,
            abs_tol: 1e-14,
            ..Quadrature::default()
        }
    }

    /// `P(lo < Y ≤ t)` under the truncated law, by quadrature.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        if t <= self.window.lo {
            return Ok(0.0);
        }
        if t >= self.window.hi {
            return Ok(1.0);
        }
        let v = Self::quadrature()
            .integrate_window(|x| self.pdf(x), self.window.lo, t, self.base.scale_hint())?
            .value;
        Ok(v.clamp(0.0, 1.0))
    }

    pub fn mean(&self) -> Result<f64> {
        Ok(Self::quadrature()
            .integrate_window(
                |x| x * self.pdf(x),
                self.window.lo,
                self.window.hi,
                self.base.scale_hint(),
            )?
            .value)
    }

    /// Quantile by bisection on the quadrature CDF.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("quantile", format!("probability must lie in [0, 1], got {p}")));
        }
        let mut lo = self.window.lo;
        let mut hi = if self.window.is_bounded() {
            self.window.hi
        } else {
            let mut h = self.window.lo + self.base.scale_hint().max(1e-12);
            while self.cdf(h)? < p {
                h = self.window.lo + 2.0 * (h - self.window.lo);
                if !h.is_finite() {
                    return Err(Error::Convergence {
                        function: "quantile",
                        estimate: h,
                        abs_error: f64::INFINITY,
                    });
                }
            }
            h
        };
        if p == 0.0 {
            return Ok(lo);
        }
        if p == 1.0 {
            return Ok(hi);
        }
        while hi - lo > LOCATION_TOL * hi.abs().max(1.0) {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Location of the maximum of the density within the window.
    ///
    /// Golden-section search on the log-density, seeded by comparing the
    /// values at `lo + ε`, the midpoint and `hi − ε`.
    pub fn mode(&self) -> Result<f64> {
        let hi_eff = if self.window.is_bounded() {
            self.window.hi
        } else {
            self.quantile(1.0 - 1e-9)?
        };
        let eps = 1e-9 * (hi_eff - self.window.lo);
        let (mut a, mut b) = (self.window.lo + eps, hi_eff - eps);
        let f = |x: f64| self.base.ln_pdf(x);
        let mid = 0.5 * (a + b);
        let (fa, fm, fb) = (f(a), f(mid), f(b));
        if fa >= fm && fa >= fb && f(a + 1e-6 * (b - a)) <= fa {
            return Ok(self.window.lo);
        }
        if fb >= fm && fb > fa && f(b - 1e-6 * (b - a)) <= fb {
            return Ok(hi_eff);
        }
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        while b - a > LOCATION_TOL * b.abs().max(1.0) {
            if fc >= fd {
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = f(d);
            }
        }
        Ok(0.5 * (a + b))
    }
}

impl<D: Density> Density for TruncatedDensity<D> {
    fn ln_pdf(&self, x: f64) -> f64 {
        if !self.window.contains(x) {
            return f64::NEG_INFINITY;
        }
        self.base.ln_pdf(x) - self.ln_mass
    }

    fn scale_hint(&self) -> f64 {
        let s = self.base.scale_hint();
        if self.window.is_bounded() {
            s.min(self.window.width())
        } else {
            s
        }
    }
}

/// Mode, mean and requested quantiles of a truncated density.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: f64,
    pub mean: f64,
    /// `(p, quantile(p))` pairs in the order requested.
    pub quantiles: Vec<(f64, f64)>,
}

pub fn summarize<D: Density>(d: &TruncatedDensity<D>, probabilities: &[f64]) -> Result<Summary> {
    let quantiles = probabilities
        .iter()
        .map(|&p| Ok((p, d.quantile(p)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Summary {
        mode: d.mode()?,
        mean: d.mean()?,
        quantiles,
    })
}
