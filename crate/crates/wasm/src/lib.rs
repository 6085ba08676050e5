//! Browser demo. Every export takes plain numbers or text and returns a JSON
//! string; failures come back as `{"error": "..."}` so the page never has to
//! catch exceptions.

use gpdbayes::datasets::builtin_dataset;
use gpdbayes::estimators::{excesses_above, ml_gpd_fit};
use gpdbayes::gibbs::run_chain_on;
use gpdbayes::pot::{net_premium_with, summarize, InfinitePremium, PosteriorSummary};
use gpdbayes::prior::empirical_hyperparameters;
use gpdbayes::{ChainConfig, ExcessSample, GamconParams, GpdParams};
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_POINTS: usize = 2000;
const MAX_ITERATIONS: usize = 20_000;

#[derive(Serialize)]
struct ErrorJson {
    error: String,
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    let out = match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&ErrorJson { error }),
    };
    out.unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"))
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, String> {
    if !(2..=MAX_POINTS).contains(&points) {
        return Err(format!("points must lie in 2..={MAX_POINTS}"));
    }
    if !(hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err("empty plotting range".into());
    }
    let h = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|i| lo + h * i as f64).collect())
}

#[derive(Serialize)]
struct Curves {
    x: Vec<f64>,
    pdf: Vec<f64>,
    cdf: Vec<f64>,
    upper_endpoint: f64,
    mean: f64,
}

fn gpd_curves_impl(gamma: f64, sigma: f64, x_max: f64, points: usize) -> Result<Curves, String> {
    let g = GpdParams::new(gamma, sigma).map_err(|e| e.to_string())?;
    let x = grid(0.0, x_max, points)?;
    let pdf = x.iter().map(|&y| g.pdf(y).unwrap_or(0.0)).collect();
    let cdf = x.iter().map(|&y| g.cdf(y)).collect();
    Ok(Curves {
        x,
        pdf,
        cdf,
        upper_endpoint: g.upper_endpoint(),
        mean: g.mean(),
    })
}

/// GPD(γ, σ) density and distribution function on [0, x_max].
#[wasm_bindgen]
pub fn gpd_curves(gamma: f64, sigma: f64, x_max: f64, points: usize) -> String {
    to_json(gpd_curves_impl(gamma, sigma, x_max, points))
}

#[derive(Serialize)]
struct GamconView {
    mode: f64,
    bounds: (f64, f64),
    sd: f64,
    cauchy_scale: f64,
    x: Vec<f64>,
    /// Density normalized numerically on the grid.
    density: Vec<f64>,
    normal: Vec<f64>,
    cauchy: Vec<f64>,
}

fn gamcon_impl(c: f64, d: f64, points: usize) -> Result<GamconView, String> {
    let g = GamconParams::new(c, d).map_err(|e| e.to_string())?;
    let mode = g.mode().map_err(|e| e.to_string())?;
    let approx = g.normal_approx().map_err(|e| e.to_string())?;
    let prop = g.cauchy_proposal().map_err(|e| e.to_string())?;
    let x = grid(1e-6, mode + 8.0 * approx.sd, points)?;
    let peak = g.log_density_unnorm(mode).map_err(|e| e.to_string())?;
    let raw: Vec<f64> = x
        .iter()
        .map(|&v| g.log_density_unnorm(v).map_or(0.0, |l| (l - peak).exp()))
        .collect();
    // trapezoid normalization on the plotting grid
    let h = x[1] - x[0];
    let mass = h * (raw.iter().sum::<f64>() - 0.5 * (raw[0] + raw[raw.len() - 1]));
    let density = raw.iter().map(|v| v / mass).collect();
    let normal = x
        .iter()
        .map(|&v| {
            let t = (v - mode) / approx.sd;
            (-0.5 * t * t).exp() / (approx.sd * (2.0 * std::f64::consts::PI).sqrt())
        })
        .collect();
    let cauchy = x.iter().map(|&v| prop.pdf(v)).collect();
    Ok(GamconView {
        mode,
        bounds: g.mode_bounds(),
        sd: approx.sd,
        cauchy_scale: prop.scale,
        x,
        density,
        normal,
        cauchy,
    })
}

/// Gamcon II(c, d): mode, bounds, normal and Cauchy approximations.
#[wasm_bindgen]
pub fn gamcon_explore(c: f64, d: f64, points: usize) -> String {
    to_json(gamcon_impl(c, d, points))
}

#[derive(Serialize)]
struct Posterior {
    k: usize,
    threshold: f64,
    acceptance_rate: f64,
    gamma: PosteriorSummary,
    sigma: PosteriorSummary,
    premium: Option<PosteriorSummary>,
    ml_gamma: Option<f64>,
    ml_sigma: Option<f64>,
    /// Retained γ draws in chain order, for trace and histogram plots.
    gamma_draws: Vec<f64>,
}

fn sample_from(data: &str, threshold: f64, years: f64) -> Result<ExcessSample, String> {
    if data.trim().is_empty() {
        let fire = builtin_dataset("fire").map_err(|e| e.to_string())?;
        return fire.excess_sample().map_err(|e| e.to_string());
    }
    let values = data
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("'{t}' is not a number")))
        .collect::<Result<Vec<_>, _>>()?;
    let s = excesses_above(&values, threshold).map_err(|e| e.to_string())?;
    if years > 0.0 {
        s.with_years(years).map_err(|e| e.to_string())
    } else {
        Ok(s)
    }
}

fn fit_impl(
    data: &str,
    threshold: f64,
    years: f64,
    seed: u64,
    iterations: usize,
) -> Result<Posterior, String> {
    if !(10..=MAX_ITERATIONS).contains(&iterations) {
        return Err(format!("iterations must lie in 10..={MAX_ITERATIONS}"));
    }
    let sample = sample_from(data, threshold, years)?;
    let hyper = empirical_hyperparameters(&sample).map_err(|e| e.to_string())?;
    let mut cfg = ChainConfig::new(hyper, seed);
    cfg.total_iterations = iterations;
    cfg.burn_in = iterations / 2;
    let chain = run_chain_on(&sample, &cfg).map_err(|e| e.to_string())?;
    let gammas = chain.gammas();
    let premium = if sample.years().is_some() {
        Some(net_premium_with(&chain, &sample, 0.9, InfinitePremium::Exclude).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let ml = ml_gpd_fit(&sample);
    Ok(Posterior {
        k: sample.k(),
        threshold: sample.threshold(),
        acceptance_rate: chain.acceptance_rate,
        gamma: summarize(&gammas, 0.9).map_err(|e| e.to_string())?,
        sigma: summarize(&chain.sigmas(), 0.9).map_err(|e| e.to_string())?,
        premium,
        ml_gamma: ml.converged.then_some(ml.gamma),
        ml_sigma: ml.converged.then_some(ml.sigma),
        gamma_draws: gammas,
    })
}

/// Gibbs posterior for whitespace- or comma-separated data above
/// `threshold` (the fire claims when `data` is blank). `years > 0` enables
/// the net premium.
#[wasm_bindgen]
pub fn fit_posterior(data: &str, threshold: f64, years: f64, seed: u32, iterations: usize) -> String {
    to_json(fit_impl(data, threshold, years, seed as u64, iterations))
}
