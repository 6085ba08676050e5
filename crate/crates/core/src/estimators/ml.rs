//! GPD maximum likelihood by profile reduction.
//!
//! With τ = γ/σ the likelihood maximizer for fixed τ is
//! γ(τ) = (1/k) Σ ln(1 + τ yᵢ), leaving a one-dimensional search over
//! τ > −1/max(y). The search scans a grid then refines by golden section.
//! The likelihood is unbounded as γ → −∞ near τ = −1/max(y), so only the
//! region γ(τ) ≥ −1 is searched; a maximum sitting on either end of the scanned
//! range is reported as non-convergence.

use super::{ExcessSample, Method, TailFit};

const GRID_HALF: usize = 200;
const TAU_TOL: f64 = 1e-10;

fn profile_gamma(y: &[f64], tau: f64) -> f64 {
    y.iter().map(|&v| (tau * v).ln_1p()).sum::<f64>() / y.len() as f64
}

/// Profile log-likelihood ℓ(τ) = −k ln(γ(τ)/τ) − k(1 + γ(τ)), with the
/// exponential limit at τ = 0. Returns `-inf` outside the support.
pub fn profile_log_likelihood(y: &[f64], tau: f64) -> f64 {
    let k = y.len() as f64;
    if tau == 0.0 {
        let mean = y.iter().sum::<f64>() / k;
        return -k * mean.ln() - k;
    }
    let g = profile_gamma(y, tau);
    let sigma = g / tau;
    if !(sigma > 0.0) || !g.is_finite() {
        return f64::NEG_INFINITY;
    }
    -k * sigma.ln() - k * (1.0 + g)
}

fn params_at(y: &[f64], tau: f64) -> (f64, f64) {
    if tau == 0.0 {
        (0.0, y.iter().sum::<f64>() / y.len() as f64)
    } else {
        let g = profile_gamma(y, tau);
        (g, g / tau)
    }
}

/// Grid in s = τ·max(y) over (−1, 1e6], dense near −1 and near 0.
fn s_grid() -> Vec<f64> {
    let mut grid = Vec::with_capacity(2 * GRID_HALF + 1);
    let neg = GRID_HALF / 2;
    // distance to −1 from 1e-9 up to 0.5, then −0.5 .. −1e-9
    for i in 0..neg {
        let e = -9.0 + (i as f64) * (9.0 - 0.5f64.log10().abs()) / (neg as f64);
        grid.push(-1.0 + 10f64.powf(e));
    }
    for i in 0..neg {
        let e = 0.5f64.log10() - (i as f64) * (9.0 + 0.5f64.log10()) / (neg as f64 - 1.0);
        grid.push(-(10f64.powf(e)));
    }
    grid.push(0.0);
    for i in 0..GRID_HALF {
        let e = -9.0 + (i as f64) * 15.0 / (GRID_HALF as f64 - 1.0);
        grid.push(10f64.powf(e));
    }
    grid
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Maximum likelihood GPD fit of the excesses.
///
/// Never panics on awkward data: a likelihood without an interior maximum
/// yields `converged == false`.
pub fn ml_gpd_fit(sample: &ExcessSample) -> TailFit {
    ml_fit_excesses(sample.excesses())
}

pub(crate) fn ml_fit_excesses(y: &[f64]) -> TailFit {
    if y.len() < 2 {
        return TailFit::failed(Method::Ml);
    }
    let y_max = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let y_min = y.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(y_max > 0.0) || y_max == y_min {
        return TailFit::failed(Method::Ml);
    }

    let grid: Vec<f64> = s_grid()
        .into_iter()
        .filter(|&s| s == 0.0 || profile_gamma(y, s / y_max) >= -1.0)
        .collect();
    let values: Vec<f64> = grid
        .iter()
        .map(|&s| profile_log_likelihood(y, s / y_max))
        .collect();
    let (best, _) = values.iter().enumerate().filter(|(_, v)| v.is_finite()).fold(
        (usize::MAX, f64::NEG_INFINITY),
        |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
    );
    if best == usize::MAX || best == 0 || best == grid.len() - 1 {
        return TailFit::failed(Method::Ml);
    }

    let s_hat = golden_max(
        |s| profile_log_likelihood(y, s / y_max),
        grid[best - 1],
        grid[best + 1],
        TAU_TOL,
    );
    let s_hat = if profile_log_likelihood(y, s_hat / y_max) >= values[best] {
        s_hat
    } else {
        grid[best]
    };
    let (gamma, sigma) = params_at(y, s_hat / y_max);
    TailFit::ok(Method::Ml, gamma, sigma)
}
