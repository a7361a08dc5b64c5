//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Finite ranges are bisected where the local error estimate is largest.
//! A range `[lo, ∞)` is mapped onto `[0, 1)` by `x = lo + s·u/(1−u)`, with
//! `s` a caller-supplied length scale that should be comparable to where the
//! integrand lives.

use std::collections::BinaryHeap;

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Result of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Tolerances and limits for [`Quadrature::integrate`].
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2_000,
        }
    }
}

struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64) -> (f64, f64) {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

impl Quadrature {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    /// Integrate `f` over the finite interval `[lo, hi]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, lo: f64, hi: f64) -> Result<Integral> {
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(Error::domain("integrate", format!("finite limits required, got ({lo}, {hi})")));
        }
        if lo == hi {
            return Ok(Integral {
                value: 0.0,
                abs_error: 0.0,
                evaluations: 0,
            });
        }
        let (value, error) = kronrod15(&mut f, lo, hi);
        let mut evaluations = 15;
        let mut heap = BinaryHeap::new();
        heap.push(Segment { lo, hi, value, error });
        let mut total = value;
        let mut total_err = error;
        loop {
            if !total.is_finite() || !total_err.is_finite() {
                return Err(Error::Convergence {
                    function: "integrate",
                    estimate: total,
                    abs_error: total_err,
                });
            }
            if total_err <= self.abs_tol.max(self.rel_tol * total.abs()) {
                break;
            }
            if heap.len() >= self.max_subdivisions {
                return Err(Error::Convergence {
                    function: "integrate",
                    estimate: total,
                    abs_error: total_err,
                });
            }
            let worst = heap.pop().expect("heap is never empty");
            let mid = 0.5 * (worst.lo + worst.hi);
            if mid <= worst.lo || mid >= worst.hi {
                // Interval can no longer be split in floating point.
                heap.push(worst);
                break;
            }
            let (v1, e1) = kronrod15(&mut f, worst.lo, mid);
            let (v2, e2) = kronrod15(&mut f, mid, worst.hi);
            evaluations += 30;
            total += v1 + v2 - worst.value;
            total_err += e1 + e2 - worst.error;
            heap.push(Segment { lo: worst.lo, hi: mid, value: v1, error: e1 });
            heap.push(Segment { lo: mid, hi: worst.hi, value: v2, error: e2 });
        }
        // Re-sum to shed drift from the running updates.
        let value = heap.iter().map(|s| s.value).sum();
        let abs_error = heap.iter().map(|s| s.error).sum();
        Ok(Integral {
            value,
            abs_error,
            evaluations,
        })
    }

    /// Integrate `f` over `[lo, hi]` where `hi` may be `+∞`; `scale` sets the
    /// length over which the infinite range is compressed.
    pub fn integrate_window<F: FnMut(f64) -> f64>(
        &self,
        mut f: F,
        lo: f64,
        hi: f64,
        scale: f64,
    ) -> Result<Integral> {
        if hi.is_finite() {
            return self.integrate(f, lo, hi);
        }
        if !(hi > 0.0) || !lo.is_finite() {
            return Err(Error::domain("integrate", format!("unsupported limits ({lo}, {hi})")));
        }
        let s = if scale > 0.0 && scale.is_finite() { scale } else { 1.0 };
        self.integrate(
            |u| {
                let v = 1.0 - u;
                let x = lo + s * u / v;
                let w = s / (v * v);
                let fx = f(x);
                if fx == 0.0 {
                    0.0
                } else {
                    fx * w
                }
            },
            0.0,
            1.0,
        )
    }
}
