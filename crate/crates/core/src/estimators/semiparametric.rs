//! Order-statistic estimators of the tail index: Hill, the moment estimator
//! of Dekkers, Einmahl and de Haan, and the Zipf regression estimators.
//!
//! All of them take the full sample sorted in increasing order and the
//! number `k` of top order statistics to use.

use super::{ExcessSample, Method, TailFit};
use crate::error::{Error, Result};

fn top_log_spacings(sorted: &[f64], k: usize) -> Result<Vec<f64>> {
    let n = sorted.len();
    if k == 0 || k >= n {
        return Err(Error::domain(format!("need 1 <= k < n, got k = {k}, n = {n}")));
    }
    let base = sorted[n - k - 1];
    if !(base > 0.0) {
        return Err(Error::domain(format!(
            "log-spacing estimators need x_(n-k,n) > 0, got {base}"
        )));
    }
    // ratios, not differences of logs: scaling by a power of two is then exact
    Ok(sorted[n - k..].iter().map(|x| (x / base).ln()).collect())
}

/// First and second moments of the top `k` log-spacings above `x_{n-k,n}`.
pub fn log_spacing_moments(sorted: &[f64], k: usize) -> Result<(f64, f64)> {
    let sp = top_log_spacings(sorted, k)?;
    let kf = k as f64;
    let m1 = sp.iter().sum::<f64>() / kf;
    let m2 = sp.iter().map(|s| s * s).sum::<f64>() / kf;
    Ok((m1, m2))
}

/// Hill estimate of α = 1/γ (mean log-spacing divisor 1/k). The companion
/// scale estimate is `x_{n-k,n}` itself.
pub fn hill_estimate(sorted: &[f64], k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::domain(format!("Hill estimator needs k >= 2, got {k}")));
    }
    let (m1, _) = log_spacing_moments(sorted, k)?;
    if !(m1 > 0.0) || !m1.is_finite() {
        return Err(Error::Degenerate(format!(
            "mean log-spacing is {m1}; top order statistics are all equal"
        )));
    }
    Ok(1.0 / m1)
}

/// Hill-based GPD fit of the excesses: γ = 1/α̂ and σ = γ·u.
pub fn hill_fit(sample: &ExcessSample) -> TailFit {
    match hill_estimate(&sample.order_statistics(), sample.k()) {
        Ok(alpha) => {
            let gamma = 1.0 / alpha;
            TailFit::ok(Method::Hill, gamma, gamma * sample.threshold())
        }
        Err(_) => TailFit::failed(Method::Hill),
    }
}

/// γ̂ = M₁ + 1 − ½ (1 − M₁²/M₂)⁻¹.
pub fn mti_from_moments(m1: f64, m2: f64) -> Result<f64> {
    if !(m2 > 0.0) {
        return Err(Error::Degenerate("second log-moment is zero".into()));
    }
    let r = 1.0 - m1 * m1 / m2;
    if !(r > 0.0) {
        return Err(Error::Degenerate("M1^2 = M2: log-spacings are constant".into()));
    }
    Ok(m1 + 1.0 - 0.5 / r)
}

pub fn mti_dedh_estimate(sorted: &[f64], k: usize) -> Result<f64> {
    if k < 3 {
        return Err(Error::domain(format!("moment estimator needs k >= 3, got {k}")));
    }
    let (m1, m2) = log_spacing_moments(sorted, k)?;
    mti_from_moments(m1, m2)
}

/// Moment-estimator GPD fit. The scale is `u·M₁·(1 − γ̂₋)` with
/// `γ̂₋ = 1 − ½ (1 − M₁²/M₂)⁻¹`.
pub fn mti_fit(sample: &ExcessSample) -> TailFit {
    let sorted = sample.order_statistics();
    let k = sample.k();
    let fit = || -> Result<TailFit> {
        let gamma = mti_dedh_estimate(&sorted, k)?;
        let (m1, m2) = log_spacing_moments(&sorted, k)?;
        let gamma_minus = 1.0 - 0.5 / (1.0 - m1 * m1 / m2);
        let sigma = sample.threshold() * m1 * (1.0 - gamma_minus);
        Ok(TailFit::ok(Method::Mti, gamma, sigma))
    };
    fit().unwrap_or(TailFit::failed(Method::Mti))
}

fn ls_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Zipf estimator: least-squares slope of the Pareto quantile plot,
/// ln x_{n-i+1,n} against ln((k+1)/i), i = 1..k.
pub fn zipf_estimate(sorted: &[f64], k: usize) -> Result<f64> {
    let n = sorted.len();
    if k < 3 || k > n {
        return Err(Error::domain(format!(
            "Zipf estimator needs 3 <= k <= n, got k = {k}"
        )));
    }
    if !(sorted[n - k] > 0.0) {
        return Err(Error::domain("Zipf estimator needs positive order statistics"));
    }
    let kf = k as f64;
    let reference = sorted[n - k];
    let xs: Vec<f64> = (1..=k).map(|i| ((kf + 1.0) / i as f64).ln()).collect();
    let ys: Vec<f64> = (1..=k).map(|i| (sorted[n - i] / reference).ln()).collect();
    let slope = ls_slope(&xs, &ys).expect("abscissae are distinct");
    if ys.iter().all(|y| *y == ys[0]) {
        return Err(Error::Degenerate("constant top order statistics".into()));
    }
    Ok(slope)
}

/// Generalized Zipf estimator: least-squares slope of the generalized
/// quantile plot, ln UH_{j,n} against ln((k+1)/j), j = 1..k, where
/// UH_{j,n} = x_{n-j,n}·H_{j,n} and H_{j,n} is the Hill statistic on the top
/// j observations. Valid for any sign of γ. Points with H_{j,n} = 0 (ties
/// at the top of the sample) carry no information and are skipped.
pub fn zipf_g_estimate(sorted: &[f64], k: usize) -> Result<f64> {
    let n = sorted.len();
    if k < 3 || k >= n {
        return Err(Error::domain(format!(
            "ZipfG needs 3 <= k < n, got k = {k}, n = {n}"
        )));
    }
    if !(sorted[n - k - 1] > 0.0) {
        return Err(Error::domain("ZipfG needs x_(n-k,n) > 0"));
    }
    let kf = k as f64;
    let mut xs = Vec::with_capacity(k);
    let mut ys = Vec::with_capacity(k);
    // logs are taken relative to x_(n-k,n), which only shifts the intercept
    let reference = sorted[n - k - 1];
    let mut top_log_sum = 0.0;
    for j in 1..=k {
        top_log_sum += (sorted[n - j] / reference).ln();
        let ln_base = (sorted[n - j - 1] / reference).ln();
        let hill = top_log_sum / j as f64 - ln_base;
        if hill > 0.0 {
            xs.push(((kf + 1.0) / j as f64).ln());
            ys.push(ln_base + hill.ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::Degenerate(
            "generalized quantile plot has fewer than 3 points".into(),
        ));
    }
    ls_slope(&xs, &ys).ok_or_else(|| Error::Degenerate("constant abscissae".into()))
}

/// ZipfG GPD fit; the scale `γ·u` is only defined for γ > 0.
pub fn zipf_g_fit(sample: &ExcessSample) -> TailFit {
    match zipf_g_estimate(&sample.order_statistics(), sample.k()) {
        Ok(gamma) if gamma > 0.0 => TailFit::ok(Method::ZipfG, gamma, gamma * sample.threshold()),
        Ok(gamma) => TailFit {
            gamma,
            sigma: f64::NAN,
            method: Method::ZipfG,
            converged: false,
        },
        Err(_) => TailFit::failed(Method::ZipfG),
    }
}
