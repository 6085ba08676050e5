//! Tail quantities computed from posterior draws or point fits: POT
//! quantiles, predictive quantiles, credibility intervals, return levels and
//! excess-of-loss net premiums.

use serde::{Deserialize, Serialize};

use crate::distributions::GpdParams;
use crate::error::{Error, Result};
use crate::estimators::ExcessSample;
use crate::gibbs::ChainOutput;

/// Fewest draws [`summarize`] accepts.
pub const MIN_DRAWS: usize = 10;

/// Median, mean and equal-tailed credibility interval of a set of draws.
///
/// Draws equal to +∞ take part in the order statistics but not in `mean`;
/// their share is `infinite_fraction`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorSummary {
    pub median: f64,
    /// Mean of the finite draws only; `infinite_fraction` says how many were left out.
    pub mean: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub level: f64,
    pub infinite_fraction: f64,
}

/// Target of a POT quantile: q_{1−p} from a sample of size `n` with `k`
/// excesses over `u`.
/// Relative rounding allowance on np/k ≤ 1.
const RATIO_SLACK: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileRequest {
    pub p: f64,
    pub n: usize,
    pub k: usize,
    pub u: f64,
}

impl QuantileRequest {
    pub fn new(p: f64, n: usize, k: usize, u: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!(
                "exceedance probability must lie in (0, 1), got {p}"
            )));
        }
        if k == 0 || k > n {
            return Err(Error::domain(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
        }
        let req = Self { p, n, k, u };
        if req.ratio() > 1.0 + RATIO_SLACK {
            return Err(Error::domain(format!(
                "np/k = {} > 1: q_(1-p) lies below the threshold",
                req.ratio()
            )));
        }
        Ok(req)
    }

    pub fn for_sample(sample: &ExcessSample, p: f64) -> Result<Self> {
        Self::new(p, sample.n(), sample.k(), sample.threshold())
    }

    /// np/k.
    pub fn ratio(&self) -> f64 {
        self.n as f64 * self.p / self.k as f64
    }

    /// ln(k/np) ≥ 0. A ratio within a few ulps of 1 is p = k/n up to the
    /// rounding of k/n itself and maps to the threshold exactly.
    fn log_inv_ratio(&self) -> f64 {
        let r = self.ratio();
        if (r - 1.0).abs() <= RATIO_SLACK {
            0.0
        } else {
            -r.ln()
        }
    }
}

/// u + β[(np/k)^{−1/α} − 1].
pub fn pot_quantile(alpha: f64, beta: f64, req: &QuantileRequest) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::domain(format!(
            "need alpha, beta > 0, got ({alpha}, {beta})"
        )));
    }
    Ok(req.u + beta * (req.log_inv_ratio() / alpha).exp_m1())
}

/// Same quantity from a (γ, σ) fit, u + σ[(np/k)^{−γ} − 1]/γ, with the
/// exponential limit u + σ ln(k/np) at γ = 0.
pub fn pot_quantile_fit(fit: &GpdParams, req: &QuantileRequest) -> f64 {
    let l = req.log_inv_ratio();
    let g = fit.gamma();
    if g == 0.0 {
        req.u + fit.sigma() * l
    } else {
        req.u + fit.sigma() * (g * l).exp_m1() / g
    }
}

/// One POT quantile per retained draw.
pub fn posterior_quantile_draws(chain: &ChainOutput, req: &QuantileRequest) -> Result<Vec<f64>> {
    if chain.is_empty() {
        return Err(Error::InsufficientDraws { need: 1, got: 0 });
    }
    chain
        .alphas
        .iter()
        .zip(&chain.betas)
        .enumerate()
        .map(|(index, (&a, &b))| {
            pot_quantile(a, b, req).map_err(|e| Error::Draw {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Linear interpolation between order statistics at h = (K − 1)q of an
/// ascending slice. Infinite order statistics are handled without NaNs.
pub fn empirical_quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty() && (0.0..=1.0).contains(&q));
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let a = sorted[lo];
    if frac == 0.0 || lo + 1 >= sorted.len() {
        return a;
    }
    let b = sorted[lo + 1];
    if a == b {
        a
    } else if b.is_infinite() {
        b
    } else {
        a + frac * (b - a)
    }
}

/// Equal-tailed summary of `draws` at credibility `level`.
pub fn summarize(draws: &[f64], level: f64) -> Result<PosteriorSummary> {
    if draws.len() < MIN_DRAWS {
        return Err(Error::InsufficientDraws {
            need: MIN_DRAWS,
            got: draws.len(),
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain(format!(
            "credibility level must lie in (0, 1), got {level}"
        )));
    }
    if let Some(bad) = draws.iter().find(|v| v.is_nan() || **v == f64::NEG_INFINITY) {
        return Err(Error::domain(format!("draws must be real or +inf, got {bad}")));
    }
    let mut sorted = draws.to_vec();
    sorted.sort_by(f64::total_cmp);
    let finite: Vec<f64> = sorted.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return Err(Error::AllInfinite(draws.len()));
    }
    let tail = (1.0 - level) / 2.0;
    Ok(PosteriorSummary {
        median: empirical_quantile(&sorted, 0.5),
        mean: finite.iter().sum::<f64>() / finite.len() as f64,
        ci_lo: empirical_quantile(&sorted, tail),
        ci_hi: empirical_quantile(&sorted, 1.0 - tail),
        level,
        infinite_fraction: (sorted.len() - finite.len()) as f64 / sorted.len() as f64,
    })
}

/// Average over draws of the GPD excess quantile at `prob`.
pub fn predictive_quantile(chain: &ChainOutput, prob: f64) -> Result<f64> {
    if chain.is_empty() {
        return Err(Error::InsufficientDraws { need: 1, got: 0 });
    }
    let mut total = 0.0;
    for (index, (&a, &b)) in chain.alphas.iter().zip(&chain.betas).enumerate() {
        let q = GpdParams::from_alpha_beta(a, b)
            .and_then(|g| g.quantile(prob))
            .map_err(|e| Error::Draw {
                index,
                source: Box::new(e),
            })?;
        total += q;
    }
    Ok(total / chain.len() as f64)
}

/// Exceedance probability of the N-year return level, T/(N·n).
pub fn return_period_probability(sample: &ExcessSample, years_n: f64) -> Result<f64> {
    if !(years_n > 0.0 && years_n.is_finite()) {
        return Err(Error::domain(format!("return period must be > 0, got {years_n}")));
    }
    let t = sample
        .years()
        .ok_or_else(|| Error::domain("return levels need the observation period in years"))?;
    Ok(t / (years_n * sample.n() as f64))
}

/// Posterior summary of the N-year return level.
pub fn return_level(
    chain: &ChainOutput,
    sample: &ExcessSample,
    years_n: f64,
    level: f64,
) -> Result<PosteriorSummary> {
    let req = QuantileRequest::for_sample(sample, return_period_probability(sample, years_n)?)?;
    summarize(&posterior_quantile_draws(chain, &req)?, level)
}

/// N-year return level from a point fit.
pub fn return_level_point(fit: &GpdParams, sample: &ExcessSample, years_n: f64) -> Result<f64> {
    let req = QuantileRequest::for_sample(sample, return_period_probability(sample, years_n)?)?;
    Ok(pot_quantile_fit(fit, &req))
}

/// λσ/(1 − γ), or +∞ when γ ≥ 1.
pub fn net_premium_value(rate: f64, gamma: f64, sigma: f64) -> f64 {
    if gamma >= 1.0 {
        f64::INFINITY
    } else {
        rate * sigma / (1.0 - gamma)
    }
}

/// Per-draw premiums λβ/(α − 1), +∞ for α ≤ 1.
pub fn net_premium_draws(chain: &ChainOutput, sample: &ExcessSample) -> Result<Vec<f64>> {
    let rate = sample.rate()?;
    Ok(chain
        .alphas
        .iter()
        .zip(&chain.betas)
        .map(|(&a, &b)| {
            if a <= 1.0 {
                f64::INFINITY
            } else {
                rate * b / (a - 1.0)
            }
        })
        .collect())
}

/// Treatment of draws with γ ≥ 1, whose premium is infinite.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InfinitePremium {
    /// Keep them as +∞ in the order statistics.
    #[default]
    AsInfinity,
    /// Drop them and summarize the finite draws only.
    Exclude,
}

impl std::str::FromStr for InfinitePremium {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "infinity" | "inf" => Ok(InfinitePremium::AsInfinity),
            "exclude" => Ok(InfinitePremium::Exclude),
            _ => Err(Error::Unknown {
                kind: "premium convention",
                name: s.to_string(),
            }),
        }
    }
}

/// Posterior summary of the annual net premium. Draws with γ ≥ 1 count as
/// +∞.
pub fn net_premium(chain: &ChainOutput, sample: &ExcessSample, level: f64) -> Result<PosteriorSummary> {
    net_premium_with(chain, sample, level, InfinitePremium::AsInfinity)
}

/// [`net_premium`] under either convention. With `Exclude` the reported
/// `infinite_fraction` is the share of draws that were dropped.
pub fn net_premium_with(
    chain: &ChainOutput,
    sample: &ExcessSample,
    level: f64,
    convention: InfinitePremium,
) -> Result<PosteriorSummary> {
    let draws = net_premium_draws(chain, sample)?;
    match convention {
        InfinitePremium::AsInfinity => summarize(&draws, level),
        InfinitePremium::Exclude => {
            let finite: Vec<f64> = draws.iter().copied().filter(|v| v.is_finite()).collect();
            if finite.is_empty() {
                return Err(Error::AllInfinite(draws.len()));
            }
            let mut s = summarize(&finite, level)?;
            s.infinite_fraction = (draws.len() - finite.len()) as f64 / draws.len() as f64;
            Ok(s)
        }
    }
}

/// Net premium of a point fit; errors when the fit has γ ≥ 1.
pub fn net_premium_point(fit: &GpdParams, sample: &ExcessSample) -> Result<f64> {
    let v = net_premium_value(sample.rate()?, fit.gamma(), fit.sigma());
    if v.is_infinite() {
        return Err(Error::AllInfinite(1));
    }
    Ok(v)
}
