//! Peaks-over-threshold samples and the frequentist comparators.

mod exp_bayes;
mod ml;
mod pwm;
mod semiparametric;

pub use exp_bayes::{exp_bayes_quantiles, ExpBayesQuantiles};
pub use ml::{ml_gpd_fit, profile_log_likelihood};
pub use pwm::{pwm_gpd_fit, pwm_in_reliable_range};
pub use semiparametric::{
    hill_estimate, hill_fit, log_spacing_moments, mti_dedh_estimate, mti_fit, mti_from_moments,
    zipf_estimate, zipf_g_estimate, zipf_g_fit,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::GpdParams;
use crate::error::{Error, Result};

/// Excesses over a threshold together with the size of the sample they
/// were cut from.
///
/// Excesses are stored in decreasing order, so `excesses()[j - 1]` is
/// `x_{n-j+1,n} - u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcessSample {
    threshold: f64,
    excesses: Vec<f64>,
    n: usize,
    years: Option<f64>,
}

impl ExcessSample {
    pub fn new(threshold: f64, mut excesses: Vec<f64>, n: usize) -> Result<Self> {
        if !threshold.is_finite() {
            return Err(Error::domain(format!(
                "threshold must be finite, got {threshold}"
            )));
        }
        if excesses.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(bad) = excesses.iter().find(|y| !(**y >= 0.0 && y.is_finite())) {
            return Err(Error::domain(format!(
                "excesses must be finite and >= 0, got {bad}"
            )));
        }
        if excesses.len() > n {
            return Err(Error::domain(format!(
                "k = {} excesses cannot exceed the sample size n = {n}",
                excesses.len()
            )));
        }
        excesses.sort_by(|a, b| b.total_cmp(a));
        Ok(Self {
            threshold,
            excesses,
            n,
            years: None,
        })
    }

    /// Observation period in years, used for exceedance rates.
    pub fn with_years(mut self, years: f64) -> Result<Self> {
        if !(years > 0.0 && years.is_finite()) {
            return Err(Error::domain(format!(
                "observation period must be > 0, got {years}"
            )));
        }
        self.years = Some(years);
        Ok(self)
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn excesses(&self) -> &[f64] {
        &self.excesses
    }

    pub fn k(&self) -> usize {
        self.excesses.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn years(&self) -> Option<f64> {
        self.years
    }

    pub fn sum(&self) -> f64 {
        self.excesses.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.sum() / self.k() as f64
    }

    /// Number of excesses equal to zero (ties at the threshold).
    pub fn zero_excess_count(&self) -> usize {
        self.excesses.iter().filter(|&&y| y == 0.0).count()
    }

    /// Annual exceedance rate k / T.
    pub fn rate(&self) -> Result<f64> {
        let years = self
            .years
            .ok_or_else(|| Error::domain("exceedance rate needs the observation period in years"))?;
        Ok(self.k() as f64 / years)
    }

    /// The k + 1 largest order statistics `x_{n-k,n} <= ... <= x_{n,n}`
    /// in increasing order, with the threshold standing in for `x_{n-k,n}`.
    pub fn order_statistics(&self) -> Vec<f64> {
        std::iter::once(self.threshold)
            .chain(self.excesses.iter().rev().map(|y| self.threshold + y))
            .collect()
    }
}

/// Cuts the `k` largest observations of `x` at `u = x_{n-k,n}`.
pub fn extract_excesses(x: &[f64], k: usize) -> Result<ExcessSample> {
    let n = x.len();
    if k == 0 || k >= n {
        return Err(Error::domain(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("observations must be finite, got {bad}")));
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    let u = sorted[n - k - 1];
    let excesses = sorted[n - k..].iter().map(|v| v - u).collect();
    ExcessSample::new(u, excesses, n)
}

/// Excesses of the observations strictly above a fixed threshold `u`.
pub fn excesses_above(x: &[f64], u: f64) -> Result<ExcessSample> {
    if let Some(bad) = x.iter().find(|v| !v.is_finite()) {
        return Err(Error::domain(format!("observations must be finite, got {bad}")));
    }
    let excesses: Vec<f64> = x.iter().filter(|&&v| v > u).map(|v| v - u).collect();
    if excesses.is_empty() {
        return Err(Error::Degenerate(format!(
            "no observation exceeds the threshold {u}"
        )));
    }
    ExcessSample::new(u, excesses, x.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    Hill,
    #[serde(rename = "ML")]
    Ml,
    #[serde(rename = "PWM")]
    Pwm,
    #[serde(rename = "MTI")]
    Mti,
    ZipfG,
    BayesQC,
    ExpBayes,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Hill => "Hill",
            Method::Ml => "ML",
            Method::Pwm => "PWM",
            Method::Mti => "MTI",
            Method::ZipfG => "ZipfG",
            Method::BayesQC => "BayesQC",
            Method::ExpBayes => "ExpBayes",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hill" => Ok(Method::Hill),
            "ml" | "mle" => Ok(Method::Ml),
            "pwm" => Ok(Method::Pwm),
            "mti" | "dedh" | "moment" => Ok(Method::Mti),
            "zipfg" | "zipf" => Ok(Method::ZipfG),
            "bayes" | "bayesqc" | "bayes-qc" => Ok(Method::BayesQC),
            "expbayes" | "exp-bayes" => Ok(Method::ExpBayes),
            _ => Err(Error::Unknown {
                kind: "method",
                name: s.to_string(),
            }),
        }
    }
}

/// A GPD point fit. `converged == false` marks a fit that could not be
/// produced; its parameters are then not meaningful.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub gamma: f64,
    pub sigma: f64,
    pub method: Method,
    pub converged: bool,
}

impl TailFit {
    pub(crate) fn ok(method: Method, gamma: f64, sigma: f64) -> Self {
        let converged = gamma.is_finite() && sigma > 0.0 && sigma.is_finite();
        Self {
            gamma,
            sigma,
            method,
            converged,
        }
    }

    pub(crate) fn failed(method: Method) -> Self {
        Self {
            gamma: f64::NAN,
            sigma: f64::NAN,
            method,
            converged: false,
        }
    }

    pub fn gpd(&self) -> Result<GpdParams> {
        if !self.converged {
            return Err(Error::Degenerate(format!("{} fit did not converge", self.method)));
        }
        GpdParams::new(self.gamma, self.sigma)
    }
}
