use super::{ExcessSample, Method, TailFit};

/// Probability-weighted-moment GPD fit (Hosking and Wallis).
///
/// With ascending order statistics y₍ⱼ₎, a₀ = ȳ and
/// a₁ = (1/k) Σ ((k − j)/(k − 1)) y₍ⱼ₎ estimating E[Y(1 − F(Y))]:
/// γ̂ = 2 − a₀/(a₀ − 2a₁) and σ̂ = 2a₀a₁/(a₀ − 2a₁).
/// Reliable roughly for −0.4 < γ < 0.4; see [`pwm_in_reliable_range`].
pub fn pwm_gpd_fit(sample: &ExcessSample) -> TailFit {
    let k = sample.k();
    if k < 2 {
        return TailFit::failed(Method::Pwm);
    }
    let kf = k as f64;
    let a0 = sample.mean();
    // excesses are stored descending: index i holds ascending rank j = k - i
    let a1 = sample
        .excesses()
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let j = (k - i) as f64;
            (kf - j) / (kf - 1.0) * y
        })
        .sum::<f64>()
        / kf;
    let denom = a0 - 2.0 * a1;
    if denom == 0.0 || !denom.is_finite() {
        return TailFit::failed(Method::Pwm);
    }
    TailFit::ok(Method::Pwm, 2.0 - a0 / denom, 2.0 * a0 * a1 / denom)
}

pub fn pwm_in_reliable_range(fit: &TailFit) -> bool {
    fit.converged && fit.gamma > -0.4 && fit.gamma < 0.4
}
