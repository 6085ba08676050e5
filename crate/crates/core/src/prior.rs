//! Damsleth's conjugate prior for Gamma(α, β) parameters, transferred to the
//! GPD through its exponential–gamma mixture representation.
//!
//! The prior on (α, β) is π(α) = Gamcon II(η/μ, δ) and π(β | α) =
//! Gamma(δα + 1, δη). Updating with latent Gamma observations z₁..z_k gives
//! δ′ = δ + k, η′ = (δη + Σzᵢ)/δ′ and μ′ = μ^{δ/δ′} (Πzᵢ)^{1/δ′}.
//!
//! Hyperparameters are held in accumulated form (δ, δη, δ ln μ), so that
//! updating in one batch and updating sequentially perform the same floating
//! point operations and agree bit for bit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::distributions::GamconParams;
use crate::error::{Error, Result};
use crate::estimators::{hill_estimate, ExcessSample};
use crate::special::{bisect, normal_quantile, psi};

/// Below this δ the Gibbs sampler is numerically unstable.
pub const MIN_STABLE_DELTA: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DamslethHyper {
    delta: f64,
    /// δ·η
    sum: f64,
    /// δ·ln μ
    log_sum: f64,
}

impl DamslethHyper {
    pub fn new(delta: f64, eta: f64, mu: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidPrior(format!("delta must be > 0, got {delta}")));
        }
        if !(mu > 0.0 && eta > mu && eta.is_finite()) {
            return Err(Error::InvalidPrior(format!(
                "need eta > mu > 0, got eta = {eta}, mu = {mu}"
            )));
        }
        Ok(Self {
            delta,
            sum: delta * eta,
            log_sum: delta * mu.ln(),
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn eta(&self) -> f64 {
        self.sum / self.delta
    }

    pub fn mu(&self) -> f64 {
        self.ln_mu().exp()
    }

    fn ln_mu(&self) -> f64 {
        self.log_sum / self.delta
    }

    /// ln(η/μ), the log of the Gamcon II `c` parameter.
    pub fn ln_c(&self) -> f64 {
        self.eta().ln() - self.ln_mu()
    }

    /// Marginal prior on α.
    pub fn alpha_prior(&self) -> Result<GamconParams> {
        GamconParams::from_ln_c(self.ln_c(), self.delta)
    }

    /// Shape and rate of π(β | α) = Gamma(δα + 1, δη).
    pub fn conditional_beta_params(&self, alpha: f64) -> (f64, f64) {
        (self.delta * alpha + 1.0, self.sum)
    }

    /// Refuses δ ≤ 0.5 unless `allow_low_delta` is set.
    pub fn check_sampler_stable(&self, allow_low_delta: bool) -> Result<()> {
        if self.delta > MIN_STABLE_DELTA || allow_low_delta {
            Ok(())
        } else {
            Err(Error::InvalidPrior(format!(
                "delta = {} <= {MIN_STABLE_DELTA} makes the sampler unstable; override to proceed",
                self.delta
            )))
        }
    }

    /// Conditional posterior given latent Gamma observations `z`.
    pub fn posterior_update(&self, z: &[f64]) -> Result<PosteriorHyper> {
        let mut next = *self;
        for &zi in z {
            if !(zi > 0.0 && zi.is_finite()) {
                return Err(Error::domain(format!("latent values must be > 0, got {zi}")));
            }
            // per-element increments keep split and batch updates bit-identical
            next.delta += 1.0;
            next.sum += zi;
            next.log_sum += zi.ln();
        }
        Ok(PosteriorHyper(next))
    }
}

/// Posterior hyperparameters (δ′, η′, μ′).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorHyper(DamslethHyper);

impl PosteriorHyper {
    pub fn delta_p(&self) -> f64 {
        self.0.delta()
    }

    pub fn eta_p(&self) -> f64 {
        self.0.eta()
    }

    pub fn mu_p(&self) -> f64 {
        self.0.mu()
    }

    pub fn ln_c(&self) -> f64 {
        self.0.ln_c()
    }

    /// π(α | z) = Gamcon II(η′/μ′, δ′). Fails when the latent values are all
    /// equal to η = μ, where c′ collapses to 1.
    pub fn alpha_conditional(&self) -> Result<GamconParams> {
        self.0.alpha_prior()
    }

    /// Shape and rate of π(β | α, z) = Gamma(δ′α + 1, δ′η′).
    pub fn conditional_beta_params(&self, alpha: f64) -> (f64, f64) {
        self.0.conditional_beta_params(alpha)
    }

    /// The posterior, reused as the prior for further data.
    pub fn as_prior(&self) -> DamslethHyper {
        self.0
    }

    pub fn posterior_update(&self, z: &[f64]) -> Result<PosteriorHyper> {
        self.0.posterior_update(z)
    }
}

/// δ = 1, η = (α̂ + 1)/β̂, μ = (α̂ + 1)e^{−2/α̂}/β̂: π(β | α̂) has mean β̂ and
/// π(α), which is Gamma(2, ln(η/μ)) for δ = 1, has mean α̂.
pub fn empirical_from_estimates(alpha_hat: f64, beta_hat: f64) -> Result<DamslethHyper> {
    if !(alpha_hat > 0.0 && alpha_hat.is_finite()) {
        return Err(Error::Degenerate(format!(
            "Hill estimate alpha = {alpha_hat} is unusable"
        )));
    }
    if !(beta_hat > 0.0 && beta_hat.is_finite()) {
        return Err(Error::Degenerate(format!(
            "scale anchor beta = {beta_hat} must be > 0"
        )));
    }
    let eta = (alpha_hat + 1.0) / beta_hat;
    let mu = eta * (-2.0 / alpha_hat).exp();
    DamslethHyper::new(1.0, eta, mu)
}

/// Empirical-Bayes hyperparameters anchored on the Hill estimate α̂ and
/// β̂ = x_{n-k,n} (the threshold).
pub fn empirical_hyperparameters(sample: &ExcessSample) -> Result<DamslethHyper> {
    let (alpha_hat, beta_hat) = hill_anchors(sample)?;
    empirical_from_estimates(alpha_hat, beta_hat)
}

/// (α̂, β̂) = (Hill estimate, x_{n-k,n}).
pub fn hill_anchors(sample: &ExcessSample) -> Result<(f64, f64)> {
    if sample.k() < 2 {
        return Err(Error::Degenerate("Hill anchors need at least 2 excesses".into()));
    }
    let alpha = hill_estimate(&sample.order_statistics(), sample.k())?;
    Ok((alpha, sample.threshold()))
}

/// μ making α_mode the mode of Gamcon II(η/μ, δ):
/// μ = η exp(ln δ + ψ(α_mode) − ψ(δ α_mode + 1)).
fn mu_for_mode(eta: f64, delta: f64, alpha_mode: f64) -> f64 {
    eta * (delta.ln() + psi(alpha_mode) - psi(delta * alpha_mode + 1.0)).exp()
}

/// The expert gives a rare level `q_max`, an interval [p1, p2] for its
/// exceedance probability and an uncertainty ε.
///
/// α is held at its Hill estimate and the opinion bounds β; bounding α with
/// β held fixed instead is not provided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpertOpinionOneQuantile {
    pub q_max: f64,
    pub p1: f64,
    pub p2: f64,
    pub epsilon: f64,
}

/// The expert gives two rare levels with their exceedance probabilities and
/// a confidence δ (the weight of the opinion in pseudo-observations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpertOpinionTwoQuantiles {
    pub q_max1: f64,
    pub q_max2: f64,
    pub p1: f64,
    pub p2: f64,
    pub delta: f64,
}

/// Bounds β₁ < β₂ implied by a one-quantile opinion with α = α̂.
pub fn expert_beta_bounds(
    op: &ExpertOpinionOneQuantile,
    sample: &ExcessSample,
    alpha_hat: f64,
) -> Result<(f64, f64)> {
    let u = sample.threshold();
    let ratio = sample.n() as f64 / sample.k() as f64;
    let bracket = |p: f64| (ratio * p).powf(-1.0 / alpha_hat) - 1.0;
    let (b1, b2) = (bracket(op.p1), bracket(op.p2));
    if !(b1 > 0.0 && b2 > 0.0) {
        return Err(Error::InfeasibleOpinion(format!(
            "n p / k must be < 1 for both probabilities (n = {}, k = {})",
            sample.n(),
            sample.k()
        )));
    }
    let beta1 = (op.q_max - u) / b1;
    let beta2 = (op.q_max - u) / b2;
    if !(beta1 > 0.0 && beta1 < beta2) {
        return Err(Error::InfeasibleOpinion(format!(
            "need 0 < beta1 < beta2, got beta1 = {beta1}, beta2 = {beta2}"
        )));
    }
    Ok((beta1, beta2))
}

/// Hyperparameters from a one-quantile opinion.
///
/// Matching a Gaussian to Gamma(δα̂ + 1, δη) with central 1 − ε mass on
/// [β₁, β₂] gives, with z = z_{1−ε/2} and R = (β₁ + β₂)/(β₂ − β₁),
/// δ = (z²R² − 1)/α̂ and η = 2α̂z²R² / ((β₁ + β₂)(z²R² − 1)); μ then puts the
/// mode of π(α) at α̂.
pub fn expert_hyperparameters_one_quantile(
    op: &ExpertOpinionOneQuantile,
    sample: &ExcessSample,
) -> Result<DamslethHyper> {
    op.validate(sample)?;
    let (alpha_hat, _) = hill_anchors(sample)?;
    let (beta1, beta2) = expert_beta_bounds(op, sample, alpha_hat)?;
    let z = normal_quantile(1.0 - op.epsilon / 2.0)?;
    let r = (beta1 + beta2) / (beta2 - beta1);
    let s = z * z * r * r;
    if !(s > 1.0) {
        return Err(Error::InfeasibleOpinion(format!(
            "z^2 R^2 = {s} <= 1 gives a non-positive delta"
        )));
    }
    let delta = (s - 1.0) / alpha_hat;
    let eta = 2.0 * alpha_hat * s / ((beta1 + beta2) * (s - 1.0));
    let mu = mu_for_mode(eta, delta, alpha_hat);
    DamslethHyper::new(delta, eta, mu)
        .map_err(|e| Error::InfeasibleOpinion(format!("resulting prior is invalid: {e}")))
}

/// ln(e^x − 1) without overflow for large x.
fn ln_expm1(x: f64) -> f64 {
    if x > 30.0 {
        x + (-(-x).exp()).ln_1p()
    } else {
        x.exp_m1().ln()
    }
}

/// Solves q_i = u + β₀[(n p_i/k)^{−1/α₀} − 1], i = 1, 2, for (α₀, β₀).
///
/// Dividing the two equations removes β₀; the log-ratio is monotone in
/// 1/α₀, which is bisected over [1e-3, 1e3].
pub fn solve_two_quantiles(op: &ExpertOpinionTwoQuantiles, sample: &ExcessSample) -> Result<(f64, f64)> {
    let u = sample.threshold();
    let ratio = sample.n() as f64 / sample.k() as f64;
    let l1 = -(ratio * op.p1).ln();
    let l2 = -(ratio * op.p2).ln();
    if !(l1 > 0.0 && l2 > 0.0) {
        return Err(Error::NoSolution(
            "n p / k must be < 1 for both probabilities".into(),
        ));
    }
    let target = ((op.q_max1 - u) / (op.q_max2 - u)).ln();
    let h = |t: f64| ln_expm1(t * l1) - ln_expm1(t * l2) - target;
    let root = bisect(h, 1e-3, 1e3, 1e-15).map_err(|e| {
        Error::NoSolution(format!(
            "quantile ratio equation has no root for alpha in [1e-3, 1e3]: {e}"
        ))
    })?;
    let t = root.root;
    let alpha0 = 1.0 / t;
    let beta0 = (op.q_max1 - u) / (t * l1).exp_m1();
    if !(alpha0 > 0.0 && beta0 > 0.0 && beta0.is_finite()) {
        return Err(Error::NoSolution(format!(
            "solution ({alpha0}, {beta0}) is not positive"
        )));
    }
    Ok((alpha0, beta0))
}

/// Hyperparameters from a two-quantile opinion: (α₀, β₀) are made the modes
/// of π(α) and π(β | α₀), i.e. η = α₀/β₀ and μ from the mode equation.
pub fn expert_hyperparameters_two_quantiles(
    op: &ExpertOpinionTwoQuantiles,
    sample: &ExcessSample,
) -> Result<DamslethHyper> {
    op.validate(sample)?;
    let (alpha0, beta0) = solve_two_quantiles(op, sample)?;
    let eta = alpha0 / beta0;
    let mu = mu_for_mode(eta, op.delta, alpha0);
    DamslethHyper::new(op.delta, eta, mu)
        .map_err(|e| Error::InfeasibleOpinion(format!("resulting prior is invalid: {e}")))
}

fn check_prob(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::InfeasibleOpinion(format!(
            "{name} must lie in (0, 1), got {p}"
        )))
    }
}

impl ExpertOpinionOneQuantile {
    pub fn validate(&self, sample: &ExcessSample) -> Result<()> {
        check_prob("p1", self.p1)?;
        check_prob("p2", self.p2)?;
        if !(self.p1 < self.p2) {
            return Err(Error::InfeasibleOpinion(format!(
                "need p1 < p2, got {} and {}",
                self.p1, self.p2
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
            return Err(Error::InfeasibleOpinion(format!(
                "epsilon must lie in (0, 0.5), got {}",
                self.epsilon
            )));
        }
        if !(self.q_max > sample.threshold()) {
            return Err(Error::InfeasibleOpinion(format!(
                "q_max = {} must exceed the threshold {}",
                self.q_max,
                sample.threshold()
            )));
        }
        Ok(())
    }
}

impl ExpertOpinionTwoQuantiles {
    pub fn validate(&self, sample: &ExcessSample) -> Result<()> {
        check_prob("p1", self.p1)?;
        check_prob("p2", self.p2)?;
        if self.p1 == self.p2 || self.q_max1 == self.q_max2 {
            return Err(Error::InfeasibleOpinion("the two quantiles must differ".into()));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InfeasibleOpinion(format!(
                "delta must be > 0, got {}",
                self.delta
            )));
        }
        let u = sample.threshold();
        if !(self.q_max1 > u && self.q_max2 > u) {
            return Err(Error::InfeasibleOpinion(
                "both rare values must exceed the threshold".into(),
            ));
        }
        Ok(())
    }
}

/// Either kind of opinion, as read from a flat `key = value` file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExpertOpinion {
    OneQuantile(ExpertOpinionOneQuantile),
    TwoQuantiles(ExpertOpinionTwoQuantiles),
}

impl ExpertOpinion {
    /// Parses `key = value` (or `key: value`) lines; `#` starts a comment.
    /// Keys `q_max, p1, p2, epsilon` describe a one-quantile opinion and
    /// `q_max1, q_max2, p1, p2, delta` a two-quantile one.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .or_else(|| line.split_once(':'))
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim().to_ascii_lowercase();
            let value: f64 = value.trim().parse().map_err(|_| {
                Error::Parse(format!("line {}: '{}' is not a number", lineno + 1, value.trim()))
            })?;
            if kv.insert(key.clone(), value).is_some() {
                return Err(Error::Parse(format!("duplicate key '{key}'")));
            }
        }
        let get = |k: &str| {
            kv.get(k)
                .copied()
                .ok_or_else(|| Error::Parse(format!("missing key '{k}'")))
        };
        let allowed: &[&str] = if kv.contains_key("q_max1") || kv.contains_key("q_max2") {
            &["q_max1", "q_max2", "p1", "p2", "delta"]
        } else {
            &["q_max", "p1", "p2", "epsilon"]
        };
        if let Some(extra) = kv.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unexpected key '{extra}'")));
        }
        if allowed.len() == 5 {
            Ok(ExpertOpinion::TwoQuantiles(ExpertOpinionTwoQuantiles {
                q_max1: get("q_max1")?,
                q_max2: get("q_max2")?,
                p1: get("p1")?,
                p2: get("p2")?,
                delta: get("delta")?,
            }))
        } else {
            Ok(ExpertOpinion::OneQuantile(ExpertOpinionOneQuantile {
                q_max: get("q_max")?,
                p1: get("p1")?,
                p2: get("p2")?,
                epsilon: get("epsilon")?,
            }))
        }
    }

    pub fn hyperparameters(&self, sample: &ExcessSample) -> Result<DamslethHyper> {
        match self {
            ExpertOpinion::OneQuantile(op) => expert_hyperparameters_one_quantile(op, sample),
            ExpertOpinion::TwoQuantiles(op) => expert_hyperparameters_two_quantiles(op, sample),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_update_preserves_prior() {
        let prior = DamslethHyper::new(1.5, 2.0, 0.7).unwrap();
        let post = prior.posterior_update(&[]).unwrap();
        assert_eq!(post.as_prior(), prior);
    }

    #[test]
    fn update_hand_arithmetic() {
        let prior = DamslethHyper::new(1.0, 2.0, 1.0).unwrap();
        let post = prior.posterior_update(&[1.0, 1.0]).unwrap();
        assert_eq!(post.delta_p(), 3.0);
        assert!((post.eta_p() - 4.0 / 3.0).abs() < 1e-15);
        assert!((post.mu_p() - 1.0).abs() < 1e-15);
        let e = std::f64::consts::E;
        let post = prior.posterior_update(&[e, e]).unwrap();
        assert!((post.mu_p() - (2.0f64 / 3.0).exp()).abs() < 1e-14);
    }

    #[test]
    fn update_rejects_nonpositive() {
        let prior = DamslethHyper::new(1.0, 2.0, 1.0).unwrap();
        assert!(prior.posterior_update(&[1.0, 0.0]).is_err());
        assert!(prior.posterior_update(&[-2.0]).is_err());
    }

    #[test]
    fn prior_validation() {
        assert!(DamslethHyper::new(0.0, 2.0, 1.0).is_err());
        assert!(DamslethHyper::new(1.0, 1.0, 1.0).is_err());
        assert!(DamslethHyper::new(1.0, 1.0, 2.0).is_err());
        let low = DamslethHyper::new(0.4, 2.0, 1.0).unwrap();
        assert!(low.check_sampler_stable(false).is_err());
        assert!(low.check_sampler_stable(true).is_ok());
    }

    #[test]
    fn conditional_beta() {
        let post = DamslethHyper::new(1.0, 2.0, 1.0)
            .unwrap()
            .posterior_update(&[1.0, 1.0])
            .unwrap();
        let (shape, rate) = post.conditional_beta_params(1.0);
        assert!((shape - 4.0).abs() < 1e-15 && (rate - 4.0).abs() < 1e-14);
        let prior = DamslethHyper::new(2.5, 3.0, 1.0).unwrap();
        assert_eq!(prior.conditional_beta_params(2.0), (6.0, 7.5));
        let unit = DamslethHyper::new(1.0, 1.0, 0.5).unwrap();
        assert_eq!(unit.conditional_beta_params(0.0), (1.0, 1.0));
    }

    #[test]
    fn empirical_examples() {
        let h = empirical_from_estimates(1.0, 2.0).unwrap();
        assert_eq!(h.delta(), 1.0);
        assert!((h.eta() - 1.0).abs() < 1e-15);
        assert!((h.mu() - (-2.0f64).exp()).abs() < 1e-15);
        let h = empirical_from_estimates(2.0, 1.0).unwrap();
        assert!((h.eta() - 3.0).abs() < 1e-15);
        assert!((h.mu() - 3.0 * (-1.0f64).exp()).abs() < 1e-14);
        // prior mean of Gamma(2, ln(eta/mu)) is alpha-hat
        assert!((2.0 / h.ln_c() - 2.0).abs() < 1e-14);
        assert!(empirical_from_estimates(f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn ln_expm1_branches_agree() {
        for x in [1e-8f64, 0.3, 5.0, 29.9, 30.1, 80.0] {
            let direct = x.exp_m1().ln();
            assert!((ln_expm1(x) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
        assert!(ln_expm1(2000.0).is_finite());
    }

    #[test]
    fn parse_one_quantile_file() {
        let text = "# expert\nq_max = 120\np1: 0.001\np2 = 0.01\nepsilon = 0.1\n";
        match ExpertOpinion::parse(text).unwrap() {
            ExpertOpinion::OneQuantile(op) => {
                assert_eq!(op.q_max, 120.0);
                assert_eq!(op.p1, 0.001);
                assert_eq!(op.epsilon, 0.1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_two_quantile_file() {
        let text = "q_max1 = 50\nq_max2 = 90\np1 = 0.01\np2 = 0.001\ndelta = 3";
        assert!(matches!(
            ExpertOpinion::parse(text).unwrap(),
            ExpertOpinion::TwoQuantiles(_)
        ));
    }

    #[test]
    fn parse_errors() {
        assert!(ExpertOpinion::parse("q_max = 1\np1 = 0.1\np2 = 0.2").is_err());
        assert!(ExpertOpinion::parse("q_max = x").is_err());
        assert!(ExpertOpinion::parse("q_max = 1\nq_max = 2").is_err());
        assert!(ExpertOpinion::parse("q_max=1\np1=0.1\np2=0.2\nepsilon=0.1\ndelta=2").is_err());
        assert!(ExpertOpinion::parse("just words").is_err());
    }
}
