//! Gibbs sampler for the GPD posterior under the Damsleth prior.
//!
//! Each sweep draws the latent Gamma variables z given (α, β), updates the
//! conjugate hyperparameters, moves α by a single independent Metropolis
//! step with a Cauchy proposal fitted to the Gamcon II conditional, and draws
//! β from its Gamma conditional.

use serde::{Deserialize, Serialize};

use crate::distributions::{gamma_sample, CauchyProposal, GamconParams};
use crate::error::{Error, Result};
use crate::estimators::ExcessSample;
use crate::prior::{hill_anchors, DamslethHyper};
use crate::rng::RngStream;

pub const DEFAULT_ITERATIONS: usize = 1000;
pub const DEFAULT_BURN_IN: usize = 500;

/// Starting point of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialState {
    pub alpha: f64,
    pub beta: f64,
}

impl InitialState {
    /// α⁽⁰⁾ = Hill estimate, β⁽⁰⁾ = threshold. Falls back to α⁽⁰⁾ = 1 and the
    /// mean excess when either anchor is unavailable.
    pub fn from_sample(sample: &ExcessSample) -> Self {
        let fallback_beta = if sample.mean() > 0.0 { sample.mean() } else { 1.0 };
        match hill_anchors(sample) {
            Ok((a, b)) if a.is_finite() && a > 0.0 && b > 0.0 => Self { alpha: a, beta: b },
            _ => Self {
                alpha: 1.0,
                beta: fallback_beta,
            },
        }
    }

    fn for_excesses(y: &[f64]) -> Self {
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        Self {
            alpha: 1.0,
            beta: if mean > 0.0 { mean } else { 1.0 },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub total_iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
    /// Stream id of the chain's generator, so many chains can share a seed.
    pub stream: u64,
    pub hyper: DamslethHyper,
    /// Allow δ ≤ 0.5.
    pub allow_low_delta: bool,
    /// `None` starts at α = 1 and β = mean excess.
    pub initial: Option<InitialState>,
}

impl ChainConfig {
    pub fn new(hyper: DamslethHyper, seed: u64) -> Self {
        Self {
            total_iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
            seed,
            stream: 0,
            hyper,
            allow_low_delta: false,
            initial: None,
        }
    }

    pub fn retained(&self) -> usize {
        self.total_iterations.saturating_sub(self.burn_in)
    }

    pub fn validate(&self) -> Result<()> {
        if self.total_iterations == 0 {
            return Err(Error::domain("total_iterations must be positive"));
        }
        if self.burn_in >= self.total_iterations {
            return Err(Error::domain(format!(
                "burn_in = {} must be < total_iterations = {}",
                self.burn_in, self.total_iterations
            )));
        }
        if let Some(init) = self.initial {
            if !(init.alpha > 0.0 && init.beta > 0.0 && init.alpha.is_finite() && init.beta.is_finite()) {
                return Err(Error::domain(format!(
                    "initial state must be positive, got {init:?}"
                )));
            }
        }
        self.hyper.check_sampler_stable(self.allow_low_delta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainState {
    pub alpha: f64,
    pub beta: f64,
    pub z: Vec<f64>,
    /// Outcome of the last Metropolis step.
    pub accepted: bool,
}

impl ChainState {
    /// State at (α, β) with z set to its conditional means (α + 1)/(β + yᵢ).
    pub fn new(alpha: f64, beta: f64, y: &[f64]) -> Self {
        let z = y.iter().map(|yi| (alpha + 1.0) / (beta + yi)).collect();
        Self {
            alpha,
            beta,
            z,
            accepted: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainOutput {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    /// Fraction of accepted Metropolis moves over all iterations.
    pub acceptance_rate: f64,
    /// Metropolis outcome of every iteration, burn-in included.
    pub accepted: Vec<bool>,
    pub seed: u64,
    pub stream: u64,
}

impl ChainOutput {
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// γ = 1/α per draw.
    pub fn gammas(&self) -> Vec<f64> {
        self.alphas.iter().map(|a| a.recip()).collect()
    }

    /// σ = β/α per draw.
    pub fn sigmas(&self) -> Vec<f64> {
        self.alphas.iter().zip(&self.betas).map(|(a, b)| b / a).collect()
    }

    /// Acceptance rate over the retained iterations only.
    pub fn retained_acceptance_rate(&self) -> f64 {
        let tail = &self.accepted[self.accepted.len() - self.alphas.len()..];
        tail.iter().filter(|&&a| a).count() as f64 / tail.len().max(1) as f64
    }
}

/// zᵢ ~ Gamma(α + 1, β + yᵢ), written into `z`.
pub fn latent_update_into(
    alpha: f64,
    beta: f64,
    y: &[f64],
    z: &mut [f64],
    rng: &mut RngStream,
) -> Result<()> {
    debug_assert_eq!(y.len(), z.len());
    let shape = alpha + 1.0;
    for (zi, yi) in z.iter_mut().zip(y) {
        *zi = gamma_sample(shape, beta + yi, rng)?;
    }
    Ok(())
}

/// Fresh latent vector drawn from its conditional given `state`.
pub fn latent_update(state: &ChainState, y: &[f64], rng: &mut RngStream) -> Result<Vec<f64>> {
    let mut z = vec![0.0; y.len()];
    latent_update_into(state.alpha, state.beta, y, &mut z, rng)?;
    Ok(z)
}

/// Log acceptance ratio for moving from `current` to `candidate` under an
/// independent proposal: ln ξ(Y) − ln ξ(α) − ln f(Y) + ln f(α), with ξ the
/// unnormalized target. Candidates outside (0, ∞) give −∞.
pub fn hm_log_ratio(target: &GamconParams, proposal: &CauchyProposal, current: f64, candidate: f64) -> f64 {
    if !(candidate > 0.0 && candidate.is_finite()) {
        return f64::NEG_INFINITY;
    }
    (target.log_kernel(candidate) - target.log_kernel(current))
        - (proposal.log_pdf(candidate) - proposal.log_pdf(current))
}

/// Step with an already computed proposal.
pub fn hm_step_with(
    current: f64,
    target: &GamconParams,
    proposal: &CauchyProposal,
    rng: &mut RngStream,
) -> (f64, bool) {
    let candidate = proposal.sample(rng);
    let log_rho = hm_log_ratio(target, proposal, current, candidate);
    if log_rho >= 0.0 || rng.uniform().ln() < log_rho {
        (candidate, true)
    } else {
        (current, false)
    }
}

/// One independent Metropolis–Hastings step for α targeting Gamcon II with
/// the matched Cauchy proposal.
pub fn hm_alpha_step(current: f64, target: &GamconParams, rng: &mut RngStream) -> Result<(f64, bool)> {
    let proposal = target.cauchy_proposal()?;
    Ok(hm_step_with(current, target, &proposal, rng))
}

/// One full sweep, updating `state` in place.
pub fn gibbs_iteration(
    state: &mut ChainState,
    y: &[f64],
    hyper: &DamslethHyper,
    rng: &mut RngStream,
) -> Result<()> {
    if state.z.len() != y.len() {
        state.z.resize(y.len(), 0.0);
    }
    latent_update_into(state.alpha, state.beta, y, &mut state.z, rng)?;
    let post = hyper.posterior_update(&state.z)?;
    let target = post.alpha_conditional()?;
    let (alpha, accepted) = hm_alpha_step(state.alpha, &target, rng)?;
    let (shape, rate) = post.conditional_beta_params(alpha);
    if !(shape.is_finite() && rate.is_finite()) {
        return Err(Error::Overflow(format!(
            "beta conditional Gamma({shape}, {rate}) is not representable"
        )));
    }
    let beta = gamma_sample(shape, rate, rng)?;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Overflow(format!(
            "beta draw {beta} from Gamma({shape}, {rate})"
        )));
    }
    state.alpha = alpha;
    state.beta = beta;
    state.accepted = accepted;
    Ok(())
}

/// Runs the sampler on excesses `y` and keeps the draws after burn-in.
pub fn run_chain(y: &[f64], cfg: &ChainConfig) -> Result<ChainOutput> {
    if y.is_empty() {
        return Err(Error::EmptySample);
    }
    if let Some(bad) = y.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(Error::domain(format!(
            "excesses must be finite and >= 0, got {bad}"
        )));
    }
    cfg.validate()?;
    let init = cfg.initial.unwrap_or_else(|| InitialState::for_excesses(y));
    let mut state = ChainState::new(init.alpha, init.beta, y);
    let mut rng = RngStream::new(cfg.seed, cfg.stream);

    let keep = cfg.retained();
    let mut alphas = Vec::with_capacity(keep);
    let mut betas = Vec::with_capacity(keep);
    let mut accepted = Vec::with_capacity(cfg.total_iterations);
    for iteration in 0..cfg.total_iterations {
        gibbs_iteration(&mut state, y, &cfg.hyper, &mut rng).map_err(|e| Error::Chain {
            iteration,
            source: Box::new(e),
        })?;
        accepted.push(state.accepted);
        if iteration >= cfg.burn_in {
            alphas.push(state.alpha);
            betas.push(state.beta);
        }
    }
    let acceptance_rate = accepted.iter().filter(|&&a| a).count() as f64 / accepted.len() as f64;
    Ok(ChainOutput {
        alphas,
        betas,
        acceptance_rate,
        accepted,
        seed: cfg.seed,
        stream: cfg.stream,
    })
}

/// [`run_chain`] on a POT sample, started at the Hill anchors unless the
/// config fixes a starting point.
pub fn run_chain_on(sample: &ExcessSample, cfg: &ChainConfig) -> Result<ChainOutput> {
    let mut cfg = *cfg;
    if cfg.initial.is_none() {
        cfg.initial = Some(InitialState::from_sample(sample));
    }
    run_chain(sample.excesses(), &cfg)
}
