//! Conjugate Bayes for exponential excesses (the γ = 0 case).
//!
//! With rate λ = 1/σ and a Gamma(a, b) prior, the posterior is
//! Gamma(a + k, b + S_k) and the posterior predictive of a new excess is
//! GPD with shape 1/(a + k) and scale (b + S_k)/(a + k).

use serde::{Deserialize, Serialize};

use super::ExcessSample;
use crate::distributions::GpdParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpBayesQuantiles {
    /// Plug-in of the posterior mean of λ.
    pub q_bayes: f64,
    /// Quantile of the posterior predictive GPD.
    pub q_pred: f64,
    /// Posterior mean of u + σ ln(k/np).
    pub q_post: f64,
    pub posterior_shape: f64,
    pub posterior_rate: f64,
}

impl ExpBayesQuantiles {
    pub fn predictive(&self) -> Result<GpdParams> {
        GpdParams::new(
            1.0 / self.posterior_shape,
            self.posterior_rate / self.posterior_shape,
        )
    }
}

/// The three estimates of q_{1-p}:
/// u + (b+S)/(a+k)·L, u + (b+S)[e^{L/(a+k)} − 1] and u + (b+S)/(a+k−1)·L
/// with L = ln(k/np).
pub fn exp_bayes_quantiles(sample: &ExcessSample, a: f64, b: f64, p: f64) -> Result<ExpBayesQuantiles> {
    if !(a > 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::domain(format!(
            "prior Gamma(a, b) needs a > 0, b >= 0, got ({a}, {b})"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!(
            "exceedance probability must lie in (0, 1), got {p}"
        )));
    }
    let k = sample.k() as f64;
    let np = sample.n() as f64 * p;
    if np > k {
        return Err(Error::domain(format!(
            "np = {np} exceeds k = {k}: the quantile lies below the threshold"
        )));
    }
    let shape = a + k;
    if !(shape > 1.0) {
        return Err(Error::domain(
            "a + k must exceed 1 for the posterior-mean quantile",
        ));
    }
    let rate = b + sample.sum();
    if !(rate > 0.0) {
        return Err(Error::Degenerate("b + S_k must be positive".into()));
    }
    let l = (k / np).ln();
    let u = sample.threshold();
    Ok(ExpBayesQuantiles {
        q_bayes: u + rate / shape * l,
        q_pred: u + rate * (l / shape).exp_m1(),
        q_post: u + rate / (shape - 1.0) * l,
        posterior_shape: shape,
        posterior_rate: rate,
    })
}
