#![allow(clippy::excessive_precision)]

mod common;

use approx::assert_relative_eq;
use proptest::prelude::*;

use hockey_predictive::distributions::{
    gamma_pdf, gb_prime_pdf, inverse_gamma_cdf, inverse_gamma_pdf, Density, GammaModel, InverseGammaModel,
    TruncatedDensity, Window,
};
use hockey_predictive::evaluation::{
    frequentist_risk, kl_loss, prediction_error, sample_gamma, truncated_truth, EstimatorKind, RiskSetup,
};
use hockey_predictive::predictive::{
    constant_c, constant_c_hypergeometric, constant_c_quadrature, exact_density, marginal_flat,
    marginal_restricted, q_hat_0, q_hat_1, MarginalPrior, PredictionProblem, Restricted, SufficientStat,
    Unrestricted,
};
use hockey_predictive::specfun::{
    beta_fn, gauss_2f1, ln_gamma, reg_gauss_2f1, reg_inc_beta, upper_inc_gamma,
};

// Reference values below were computed with mpmath at 30 digits.

#[test]
fn special_function_reference_values() {
    assert_relative_eq!(ln_gamma(0.5).unwrap(), 0.57236494292470008707, max_relative = 1e-14);
    assert_relative_eq!(ln_gamma(6.0).unwrap(), 4.7874917427820459942, max_relative = 1e-14);
    assert_relative_eq!(upper_inc_gamma(3.5, 2.7).unwrap(), 2.0314698754354008564, max_relative = 1e-13);
    assert_relative_eq!(beta_fn(2.5, 4.2).unwrap(), 0.024942170280737808261, max_relative = 1e-13);
    assert_relative_eq!(reg_inc_beta(0.626, 3.0, 3.0).unwrap(), 0.72643866781625600146, max_relative = 1e-13);
    assert_relative_eq!(
        reg_gauss_2f1(4.0, 8.0, 5.0, -0.5).unwrap(),
        0.0033008905436888975984,
        max_relative = 1e-12
    );
}

#[test]
fn hypergeometric_reference_values() {
    let cases = [
        (3.0, 6.0, 4.0, -0.9, 0.061831130338488078451),
        (1.5, 2.7, 3.2, -4.5, 0.1035745811059580068),
        (6.0, 9.0, 7.0, -20.0, 5.5521978916415747714e-10),
        (3.0, 6.0, 4.0, -1e4, 9.9999999999000449874e-14),
        (0.3, 0.8, 1.7, -50.0, 0.44043572075725012554),
        (2.0, 5.00003, 3.0, -8.0, 0.0025910238596886341687),
        (2.0, 5.0, 3.0, -8.0, 0.0025910684346898338668),
        (2.2, 1.1, 0.5, -2.5, -0.15509713795239936422),
        (4.0, 4.0, 5.0, -3.5, 0.007116891561906652883),
        (6.0, 9.0, 7.0, -1.7, 0.00056259291829962843636),
        (1.0, 1.0, 2.0, -1e8, 1.8420680753952365422e-7),
        (-3.0, 2.5, 1.5, -7.0, 1408.0),
        (2.5, 3.0, -1.5, -6.0, 0.060675641709054657741),
    ];
    for (a, b, c, z, expected) in cases {
        let got = gauss_2f1(a, b, c, z).unwrap();
        assert!(
            (got - expected).abs() <= 1e-10 * expected.abs(),
            "2F1({a}, {b}; {c}; {z}) = {got:e}, expected {expected:e}"
        );
    }
}

#[test]
fn distribution_reference_values() {
    let ig = InverseGammaModel::new(2.0, 3.0).unwrap();
    assert_relative_eq!(inverse_gamma_pdf(&ig, 1.5), 0.36089408863096717838, max_relative = 1e-13);
    let ig = InverseGammaModel::new(2.0, 5.0).unwrap();
    assert_relative_eq!(inverse_gamma_cdf(&ig, 3.0), 0.50366827423349823589, max_relative = 1e-13);
    let g = GammaModel::new(3.0, 18.3).unwrap();
    assert_relative_eq!(gamma_pdf(&g, 35.8), 0.014783571828866822796, max_relative = 1e-13);
    for t in [0.2, 1.0, 7.5] {
        assert_relative_eq!(
            inverse_gamma_pdf(&ig, t),
            common::inverse_gamma_pdf_ref(2.0, 5.0, t),
            max_relative = 1e-12
        );
    }
}

#[test]
fn restricted_marginal_against_quadrature() {
    let frozen = 0.31561408837351081399;
    assert_relative_eq!(common::marginal_ref(2.5, 3.0, 0.8), frozen, max_relative = 1e-10);
    assert_relative_eq!(marginal_restricted(2.5, 3.0, 0.8).unwrap(), frozen, max_relative = 1e-12);
    for (s1, s2, xi) in [(0.5, 0.2, 3.0), (4.0, 39.07, 10.0), (7.0, 2.0, 0.1)] {
        assert_relative_eq!(
            marginal_restricted(s1, s2, xi).unwrap(),
            common::marginal_ref(s1, s2, xi),
            max_relative = 1e-9
        );
    }
}

#[test]
fn constant_c_reference_values() {
    let cases = [
        (2.0, 1.0, 2.0, 1.0, 2.0),
        (2.5, 40.0, 2.0, 36.0, 0.001625060709601799116),
        (5.0, 35.85, 2.0, 39.0663, 0.00084362204176362698607),
    ];
    for (k1, k2, s1, s2, frozen) in cases {
        let reference = common::constant_c_ref(k1, k2, s1, s2);
        assert_relative_eq!(reference, frozen, max_relative = 1e-8);
        assert_relative_eq!(constant_c(k1, k2, s1, s2).unwrap(), frozen, max_relative = 1e-12);
        assert_relative_eq!(constant_c_hypergeometric(k1, k2, s1, s2).unwrap(), frozen, max_relative = 1e-12);
        assert_relative_eq!(constant_c_quadrature(k1, k2, s1, s2).unwrap(), frozen, max_relative = 1e-9);
    }
}

#[test]
fn flat_prior_density_is_the_beta_prime() {
    for (x1, r1, rp) in [(35.85, 3.0, 3.0), (2.0, 1.5, 0.7), (100.0, 6.0, 1.0)] {
        let u = Unrestricted::new(SufficientStat::new(x1, r1).unwrap(), rp).unwrap();
        let bp = u.as_beta_prime();
        for i in 1..=200 {
            let y = 0.3 * i as f64;
            let direct = (r1 * x1.ln() + (rp - 1.0) * y.ln() - (r1 + rp) * (x1 + y).ln()).exp()
                / beta_fn(r1, rp).unwrap();
            assert_relative_eq!(u.pdf(y), direct, max_relative = 1e-12);
            assert_relative_eq!(gb_prime_pdf(&bp, y), direct, max_relative = 1e-12);
        }
    }
}

#[test]
fn kl_of_a_density_with_itself_vanishes() {
    let p = PredictionProblem::restricted(
        SufficientStat::new(35.85, 3.0).unwrap(),
        SufficientStat::new(39.07, 3.0).unwrap(),
        3.0,
        Window::REGULATION,
    )
    .unwrap();
    let q1 = q_hat_1(&p).unwrap();
    assert!(kl_loss(&q1, &q1, Window::REGULATION).unwrap().abs() < 1e-9);
    let truth = truncated_truth(3.0, 18.3, Window::REGULATION).unwrap();
    let exact = exact_density(GammaModel::new(3.0, 18.3).unwrap(), Window::REGULATION).unwrap();
    assert!(prediction_error(&truth, &exact).unwrap().abs() < 1e-9);
}

#[test]
fn truncated_truth_mean() {
    let truth = truncated_truth(3.0, 18.3, Window::REGULATION).unwrap();
    assert!((truth.mean().unwrap() - 35.8).abs() < 0.05);
    let reference = common::tanh_sinh(|y| y * gamma_pdf(truth.base(), y), 0.0, 60.0, 1e-13)
        / common::tanh_sinh(|y| gamma_pdf(truth.base(), y), 0.0, 60.0, 1e-13);
    assert_relative_eq!(truth.mean().unwrap(), reference, max_relative = 1e-9);
}

#[test]
fn gamma_sampler_moments() {
    let (r, l) = (3.0, 18.3);
    let n = 100_000;
    let xs = sample_gamma(&GammaModel::new(r, l).unwrap(), n, 7).unwrap();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
    let se_mean = (r * l * l / n as f64).sqrt();
    // Var of the sample variance for a gamma law: (μ₄ − σ⁴)/n with μ₄ = 3(r+2)rλ⁴.
    let se_var = ((3.0 * (r + 2.0) * r - r * r) * l.powi(4) / n as f64).sqrt();
    assert!((mean - r * l).abs() < 3.0 * se_mean, "mean {mean}");
    assert!((var - r * l * l).abs() < 3.0 * se_var, "variance {var}");
}

#[test]
fn risk_std_err_scales_with_root_samples() {
    let base = RiskSetup {
        samples: 2_000,
        ..RiskSetup::default()
    };
    let doubled = RiskSetup {
        samples: 4_000,
        ..base
    };
    let a = frequentist_risk(1.0, 0.5, EstimatorKind::Q1, &base).unwrap();
    let b = frequentist_risk(1.0, 0.5, EstimatorKind::Q1, &doubled).unwrap();
    let ratio = b.std_err / a.std_err;
    assert!((ratio * 2f64.sqrt() - 1.0).abs() < 0.2, "ratio {ratio}");
    assert!(a.risk >= -2.0 * a.std_err);
}

#[test]
fn risk_does_not_depend_on_thread_count() {
    let setup = RiskSetup {
        samples: 300,
        ..RiskSetup::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| frequentist_risk(2.0, 1.0, EstimatorKind::Q1, &setup).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.risk.to_bits(), four.risk.to_bits());
    assert_eq!(one.std_err.to_bits(), four.std_err.to_bits());
}

#[test]
fn normalization_against_reference_quadrature() {
    let a = SufficientStat::new(35.85, 3.0).unwrap();
    let b = SufficientStat::new(39.07, 3.0).unwrap();
    for window in [Window::REGULATION, Window::new(10.0, 45.0).unwrap(), Window::POSITIVE] {
        let p = PredictionProblem::restricted(a, b, 3.0, window).unwrap();
        for d in [q_hat_0(&p).unwrap(), q_hat_1(&p).unwrap()] {
            let total = common::integrate(|y| d.pdf(y), window.lo, window.hi, 35.85);
            assert!((total - 1.0).abs() < 1e-8, "{window:?}: {total}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constant_c_scales_as_inverse_square(
        k1 in 0.3f64..8.0, k2 in 0.1f64..100.0, s1 in 0.3f64..8.0, s2 in 0.1f64..100.0, c in 0.05f64..20.0
    ) {
        let base = constant_c(k1, k2, s1, s2).unwrap();
        let scaled = constant_c(k1, c * k2, s1, c * s2).unwrap();
        prop_assert!((scaled * c * c / base - 1.0).abs() < 1e-11);
    }

    #[test]
    fn constant_c_routes_agree(
        k1 in 0.3f64..8.0, k2 in 0.1f64..100.0, s1 in 0.3f64..8.0, s2 in 0.1f64..100.0
    ) {
        let a = constant_c(k1, k2, s1, s2).unwrap();
        let b = constant_c_hypergeometric(k1, k2, s1, s2).unwrap();
        prop_assert!((a / b - 1.0).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn general_form_with_flat_marginal_reduces_to_beta_prime(
        x1 in 0.5f64..200.0, r1 in 1.05f64..10.0, rp in 0.2f64..8.0, y in 0.01f64..300.0
    ) {
        let u = Unrestricted::new(SufficientStat::new(x1, r1).unwrap(), rp).unwrap();
        let general = u.general_form_pdf(y, MarginalPrior::Flat).unwrap();
        prop_assert!((general / u.pdf(y) - 1.0).abs() < 1e-10);
        // An upper bound far beyond the data leaves the density unchanged.
        let bounded = u.general_form_pdf(y, MarginalPrior::BoundedAbove(1e12)).unwrap();
        prop_assert!((bounded / u.pdf(y) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn densities_are_scale_equivariant(
        x1 in 1.0f64..80.0, x2 in 1.0f64..80.0, y in 0.5f64..59.0, pick in 0usize..2
    ) {
        let c = [0.1, 10.0][pick];
        let make = |s: f64| {
            let p = PredictionProblem::restricted(
                SufficientStat::new(s * x1, 3.0).unwrap(),
                SufficientStat::new(s * x2, 3.0).unwrap(),
                3.0,
                Window::new(0.0, 60.0 * s).unwrap(),
            ).unwrap();
            (q_hat_0(&p).unwrap(), q_hat_1(&p).unwrap())
        };
        let (a0, a1) = make(1.0);
        let (b0, b1) = make(c);
        prop_assert!((b0.pdf(c * y) * c / a0.pdf(y) - 1.0).abs() < 1e-7);
        prop_assert!((b1.pdf(c * y) * c / a1.pdf(y) - 1.0).abs() < 1e-7);
    }

    #[test]
    fn kl_between_gammas_is_the_closed_form(r in 0.5f64..10.0, l in 0.1f64..50.0, t in 0.2f64..5.0) {
        let p = GammaModel::new(r, l).unwrap();
        let q = GammaModel::new(r, l / t).unwrap();
        let expected = r * (t - 1.0 - t.ln());
        let got = kl_loss(&p, &q, Window::POSITIVE).unwrap();
        prop_assert!(got >= -1e-12);
        prop_assert!((got - expected).abs() <= 1e-6 * expected.max(1e-6), "{} vs {}", got, expected);
    }

    #[test]
    fn restricted_weight_matches_closed_form(
        x1 in 1.0f64..80.0, x2 in 1.0f64..80.0, r1 in 1.5f64..6.0, r2 in 1.5f64..6.0, rp in 0.5f64..5.0, y in 0.1f64..100.0
    ) {
        let r = Restricted::new(SufficientStat::new(x1, r1).unwrap(), SufficientStat::new(x2, r2).unwrap(), rp).unwrap();
        let closed = r.closed_form_pdf(y).unwrap();
        prop_assert!((r.pdf(y) / closed - 1.0).abs() < 1e-8, "{} vs {}", r.pdf(y), closed);
    }
}

#[test]
fn flat_marginal_examples() {
    assert_eq!(marginal_flat(5.0, 2.0), 2.5);
    assert_relative_eq!(marginal_restricted(1.0, 1.0, 1.0).unwrap(), 0.7357588823428847, max_relative = 1e-13);
}

#[test]
fn truncation_mass_of_gamma_against_reference() {
    let g = GammaModel::new(3.0, 18.3).unwrap();
    let t = TruncatedDensity::new(g, Window::REGULATION).unwrap();
    assert_relative_eq!(t.mass(), 0.63627561828972016, max_relative = 1e-9);
    let reference = common::tanh_sinh(|y| gamma_pdf(&g, y), 0.0, 60.0, 1e-13);
    assert_relative_eq!(t.mass(), reference, max_relative = 1e-9);
}
