mod oracles;

use gpdbayes::distributions::{GamconParams, GpdParams};
use gpdbayes::estimators::{
    exp_bayes_quantiles, extract_excesses, hill_estimate, ml_gpd_fit, mti_dedh_estimate, mti_from_moments,
    pwm_gpd_fit, zipf_estimate, zipf_g_estimate, ExcessSample,
};
use gpdbayes::prior::{
    expert_beta_bounds, expert_hyperparameters_one_quantile, expert_hyperparameters_two_quantiles,
    hill_anchors, ExpertOpinionOneQuantile, ExpertOpinionTwoQuantiles,
};
use gpdbayes::special::{digamma, ln_gamma, normal_quantile, trigamma};
use gpdbayes::{RngStream, TestDistribution};
use oracles::*;
use statrs::distribution::{ContinuousCDF, Gamma, Normal};

#[test]
fn special_functions_against_statrs() {
    for &x in &[1e-6, 0.013, 0.5, 1.0, 2.5, 7.75, 33.0, 410.0, 1e5] {
        let lg = statrs::function::gamma::ln_gamma(x);
        assert!(
            (ln_gamma(x).unwrap() - lg).abs() < 1e-12 * lg.abs().max(1.0),
            "ln_gamma({x})"
        );
        let dg = statrs::function::gamma::digamma(x);
        assert!(
            (digamma(x).unwrap() - dg).abs() < 1e-10 * dg.abs().max(1.0),
            "digamma({x})"
        );
    }
    // trigamma against a difference of statrs digamma
    for &x in &[0.7, 1.0, 3.0, 25.0] {
        let h = 1e-5 * x;
        let fd =
            (statrs::function::gamma::digamma(x + h) - statrs::function::gamma::digamma(x - h)) / (2.0 * h);
        assert!((trigamma(x).unwrap() - fd).abs() < 1e-7 * fd, "trigamma({x})");
    }
    let x = 1000.0;
    assert!((trigamma(x).unwrap() - (1.0 / x + 0.5 / (x * x))).abs() < 1e-9);
}

#[test]
fn normal_quantile_against_statrs() {
    let n = Normal::new(0.0, 1.0).unwrap();
    for &p in &[1e-10, 0.001, 0.025, 0.3, 0.5, 0.95, 0.999_99] {
        assert!((normal_quantile(p).unwrap() - n.inverse_cdf(p)).abs() < 1e-8);
    }
}

#[test]
fn mixture_identity_by_quadrature() {
    for &(alpha, beta) in &[(1.0, 1.0), (2.0, 3.0), (0.5, 2.0)] {
        let gpd = GpdParams::from_alpha_beta(alpha, beta).unwrap();
        for &y in &[0.0, 0.5, 1.0, 5.0] {
            let mixed = integrate_to_inf(
                |z| z * (-y * z).exp() * gamma_pdf(z, alpha, beta),
                0.0,
                1.0,
                1e-12,
            );
            let pdf = gpd.pdf(y).unwrap();
            assert!(
                (mixed - pdf).abs() < 1e-6,
                "alpha={alpha} beta={beta} y={y}: {mixed} vs {pdf}"
            );
        }
    }
}

#[test]
fn gamcon_grid_against_oracles() {
    for &c in &[1.5, 2.0, 5.0, 10.0] {
        for &d in &[1.0, 5.0, 50.0, 500.0] {
            let g = GamconParams::new(c, d).unwrap();
            let m = g.mode().unwrap();
            assert!(
                gamcon_mode_residual(c, d, m).abs() <= 1e-10,
                "residual at c={c} d={d}"
            );
            let lower = ((1.0 - 1.0 / d) / (c.ln() + (d / 2.0).ln())).max(0.0);
            assert!(lower <= m && m <= 2.0 / c.ln(), "bounds at c={c} d={d}");
            let approx = g.normal_approx().unwrap();
            let sd = gamcon_curvature_sd(c, d, m);
            assert!(approx.sd > 0.0);
            assert!(
                ((approx.sd - sd) / sd).abs() < 1e-4,
                "sd at c={c} d={d}: {} vs {sd}",
                approx.sd
            );
            // the kernel peaks at the mode
            let k = |x: f64| gamcon_log_kernel(c, d, x);
            assert!(k(m) >= k(m * 1.001) && k(m) >= k(m * 0.999));
        }
    }
}

#[test]
fn gamcon_log_density_against_statrs() {
    let g = GamconParams::new(3.0, 7.0).unwrap();
    for &x in &[0.05, 0.4, 1.0, 6.0] {
        let ours = g.log_density_unnorm(x).unwrap();
        let oracle = gamcon_log_kernel(3.0, 7.0, x);
        assert!((ours - oracle).abs() < 1e-10 * oracle.abs().max(1.0));
    }
}

#[test]
fn exp_bayes_taylor_remainder() {
    for &shape in &[10.0, 50.0, 500.0] {
        for &l in &[0.1f64, 1.0, 3.0, 6.0] {
            // a + k = shape with k = 5
            let (k, n) = (5usize, 1000usize);
            let p = k as f64 / (n as f64 * l.exp());
            let sample = ExcessSample::new(0.0, vec![0.4; k], n).unwrap();
            let q = exp_bayes_quantiles(&sample, shape - k as f64, 0.0, p).unwrap();
            // R[e^x − 1] − Rx(1 + x/2) ≤ R x³ e^x / 6 with R = b + S, x = L/(a + k)
            let (r, x) = (sample.sum(), l / shape);
            let approx = q.q_bayes * (1.0 + l / (2.0 * shape));
            let gap = q.q_pred - approx;
            let bound = r * x.powi(3) * x.exp() / 6.0;
            assert!(
                gap >= -1e-12 && gap <= bound + 1e-12,
                "shape={shape} L={l}: gap {gap} bound {bound}"
            );
            assert!(q.q_pred > q.q_bayes && q.q_bayes > 0.0);
        }
    }
}

fn synthetic_sample(u: f64, k: usize, n: usize) -> ExcessSample {
    let y: Vec<f64> = (1..=k)
        .map(|i| (i as f64 / (k as f64 + 1.0)).ln().abs() * 3.0 + 0.1)
        .collect();
    ExcessSample::new(u, y, n).unwrap()
}

#[test]
fn two_quantile_round_trip() {
    let (alpha0, beta0, u, n, k) = (2.0, 5.0, 10.0, 1000usize, 50usize);
    let q = |p: f64| u + beta0 * ((n as f64 * p / k as f64).powf(-1.0 / alpha0) - 1.0);
    let op = ExpertOpinionTwoQuantiles {
        q_max1: q(0.01),
        q_max2: q(0.001),
        p1: 0.01,
        p2: 0.001,
        delta: 2.0,
    };
    let sample = synthetic_sample(u, k, n);
    let (a, b) = gpdbayes::prior::solve_two_quantiles(&op, &sample).unwrap();
    assert!(
        (a - alpha0).abs() < 1e-8 && (b - beta0).abs() < 1e-8,
        "recovered ({a}, {b})"
    );
    let h = expert_hyperparameters_two_quantiles(&op, &sample).unwrap();
    let mode = GamconParams::new(h.eta() / h.mu(), h.delta())
        .unwrap()
        .mode()
        .unwrap();
    assert!((mode - alpha0).abs() < 1e-6);
    // mode of Gamma(δα₀ + 1, δη) is β₀
    assert!((h.delta() * alpha0 / (h.delta() * h.eta()) - beta0).abs() < 1e-12);
}

#[test]
fn one_quantile_tail_masses() {
    let mut rng = RngStream::new(2024, 0);
    let x = TestDistribution::Frechet1.sample_n(1000, &mut rng);
    let sample = extract_excesses(&x, 100).unwrap();
    let (alpha_hat, _) = hill_anchors(&sample).unwrap();
    for &eps in &[0.05, 0.1, 0.2] {
        let op = ExpertOpinionOneQuantile {
            q_max: 400.0,
            p1: 0.001,
            p2: 0.0015,
            epsilon: eps,
        };
        let (b1, b2) = expert_beta_bounds(&op, &sample, alpha_hat).unwrap();
        let h = expert_hyperparameters_one_quantile(&op, &sample).unwrap();
        let g = Gamma::new(h.delta() * alpha_hat + 1.0, h.delta() * h.eta()).unwrap();
        let below = g.cdf(b1);
        let above = 1.0 - g.cdf(b2);
        assert!(
            (below - eps / 2.0).abs() <= 0.25 * eps,
            "eps={eps}: below {below}"
        );
        assert!(
            (above - eps / 2.0).abs() <= 0.25 * eps,
            "eps={eps}: above {above}"
        );
        let mode = GamconParams::new(h.eta() / h.mu(), h.delta())
            .unwrap()
            .mode()
            .unwrap();
        assert!((mode - alpha_hat).abs() < 1e-6);
    }
    // tighter uncertainty means a more confident prior
    let delta = |eps| {
        let op = ExpertOpinionOneQuantile {
            q_max: 400.0,
            p1: 0.001,
            p2: 0.0015,
            epsilon: eps,
        };
        expert_hyperparameters_one_quantile(&op, &sample).unwrap().delta()
    };
    assert!(delta(0.01) > delta(0.05) && delta(0.05) > delta(0.2));
}

#[test]
fn infeasible_opinions_are_rejected() {
    let sample = synthetic_sample(10.0, 50, 1000);
    let bad = ExpertOpinionOneQuantile {
        q_max: 5.0,
        p1: 0.001,
        p2: 0.002,
        epsilon: 0.1,
    };
    assert!(expert_hyperparameters_one_quantile(&bad, &sample).is_err());
    let bad = ExpertOpinionOneQuantile {
        q_max: 50.0,
        p1: 0.002,
        p2: 0.001,
        epsilon: 0.1,
    };
    assert!(expert_hyperparameters_one_quantile(&bad, &sample).is_err());
    // quantiles ordered against their probabilities have no positive solution
    let good = ExpertOpinionTwoQuantiles {
        q_max1: 20.0,
        q_max2: 40.0,
        p1: 0.01,
        p2: 0.001,
        delta: 1.0,
    };
    let swapped = ExpertOpinionTwoQuantiles {
        q_max1: 40.0,
        q_max2: 20.0,
        ..good
    };
    assert!(expert_hyperparameters_two_quantiles(&good, &sample).is_ok());
    assert!(expert_hyperparameters_two_quantiles(&swapped, &sample).is_err());
}

fn scaled(x: &[f64], c: f64) -> Vec<f64> {
    x.iter().map(|v| v * c).collect()
}

#[test]
fn scale_invariance_of_log_spacing_estimators() {
    let mut rng = RngStream::new(5, 0);
    let mut x = TestDistribution::Burr1052.sample_n(2000, &mut rng);
    x.sort_by(f64::total_cmp);
    let k = 300;
    for c in [8.0, 0.25] {
        let y = scaled(&x, c);
        assert_eq!(hill_estimate(&x, k).unwrap(), hill_estimate(&y, k).unwrap());
        assert_eq!(
            mti_dedh_estimate(&x, k).unwrap(),
            mti_dedh_estimate(&y, k).unwrap()
        );
        assert_eq!(zipf_estimate(&x, k).unwrap(), zipf_estimate(&y, k).unwrap());
        assert_eq!(zipf_g_estimate(&x, k).unwrap(), zipf_g_estimate(&y, k).unwrap());
    }
    let y = scaled(&x, 7.0);
    let rel = |a: f64, b: f64| ((a - b) / a).abs();
    assert!(rel(hill_estimate(&x, k).unwrap(), hill_estimate(&y, k).unwrap()) < 1e-12);
    assert!(
        rel(
            mti_dedh_estimate(&x, k).unwrap(),
            mti_dedh_estimate(&y, k).unwrap()
        ) < 1e-12
    );
    assert!(rel(zipf_g_estimate(&x, k).unwrap(), zipf_g_estimate(&y, k).unwrap()) < 1e-12);
}

#[test]
fn pareto_population_moments() {
    assert_eq!(mti_from_moments(1.0, 2.0).unwrap(), 1.0);
    // exact Pareto(γ = 1) quantile grid for the unweighted Zipf slope
    let k = 200usize;
    let mut x: Vec<f64> = (1..=k).map(|i| (k as f64 + 1.0) / i as f64).collect();
    x.push(0.5);
    x.sort_by(f64::total_cmp);
    assert!((zipf_estimate(&x, k).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn semiparametric_consistency_on_frechet() {
    let mut rng = RngStream::new(77, 0);
    let mut x = TestDistribution::Frechet1.sample_n(100_000, &mut rng);
    x.sort_by(f64::total_cmp);
    let alpha = hill_estimate(&x, 1000).unwrap();
    assert!((alpha - 1.0).abs() < 0.1, "hill {alpha}");
    let mti = mti_dedh_estimate(&x, 2000).unwrap();
    assert!((mti - 1.0).abs() < 0.15, "mti {mti}");
    let zg = zipf_g_estimate(&x, 2000).unwrap();
    assert!((zg - 1.0).abs() < 0.15, "zipfg {zg}");
}

fn gpd_draws(gamma: f64, sigma: f64, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, 0);
    (0..n)
        .map(|_| gpd_from_uniform(gamma, sigma, rng.uniform()))
        .collect()
}

#[test]
fn pwm_and_ml_consistency() {
    let y = gpd_draws(0.2, 1.0, 10_000, 9);
    let s = ExcessSample::new(0.0, y.clone(), y.len()).unwrap();
    let pwm = pwm_gpd_fit(&s);
    assert!((pwm.gamma - 0.2).abs() < 0.05, "pwm {pwm:?}");
    let ml = ml_gpd_fit(&s);
    assert!(
        ml.converged && (ml.gamma - 0.2).abs() < 0.05 && (ml.sigma - 1.0).abs() < 0.06,
        "ml {ml:?}"
    );
    // the optimum beats the other fits and its own neighbours
    let best = gpd_loglik(ml.gamma, ml.sigma, &y);
    assert!(best >= gpd_loglik(pwm.gamma, pwm.sigma, &y));
    for (dg, ds) in [(0.01, 0.0), (-0.01, 0.0), (0.0, 0.01), (0.0, -0.01)] {
        assert!(best >= gpd_loglik(ml.gamma + dg, ml.sigma * (1.0 + ds), &y));
    }

    let e = gpd_draws(0.0, 1.0, 10_000, 10);
    let ml = ml_gpd_fit(&ExcessSample::new(0.0, e.clone(), e.len()).unwrap());
    // standard error of the shape is about 1/sqrt(n) = 0.01
    assert!(ml.converged && ml.gamma.abs() < 0.04, "exp ml {ml:?}");
}

#[test]
fn ml_scale_equivariance() {
    let y = gpd_draws(0.3, 2.0, 800, 4);
    let a = ml_gpd_fit(&ExcessSample::new(0.0, y.clone(), 800).unwrap());
    let b = ml_gpd_fit(&ExcessSample::new(0.0, scaled(&y, 5.0), 800).unwrap());
    assert!((a.gamma - b.gamma).abs() < 1e-6);
    assert!((5.0 * a.sigma - b.sigma).abs() < 1e-5 * b.sigma);
}
