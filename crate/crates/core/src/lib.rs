//! Bayesian estimation of heavy-tailed generalized Pareto tails.
//!
//! Excesses over a threshold are modeled as GPD(γ, σ) with γ > 0, or in the
//! (α, β) = (1/γ, σ/γ) parameterization as an exponential mixed over a
//! Gamma(α, β) rate. That mixture makes Damsleth's conjugate prior for the
//! Gamma family usable: a Gibbs sampler alternates latent Gamma rates, a
//! Metropolis step for α and a Gamma draw for β.
//!
//! ```
//! use gpdbayes::{datasets, gibbs, pot, prior};
//!
//! let sample = datasets::builtin_dataset("fire")?.excess_sample()?;
//! let hyper = prior::empirical_hyperparameters(&sample)?;
//! let chain = gibbs::run_chain_on(&sample, &gibbs::ChainConfig::new(hyper, 1))?;
//! let premium = pot::net_premium(&chain, &sample, 0.9)?;
//! assert!(premium.ci_lo <= premium.median);
//! # Ok::<(), gpdbayes::Error>(())
//! ```

// `!(x > 0.0)` guards reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bench;
pub mod datasets;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod gibbs;
pub mod pot;
pub mod prior;
pub mod rng;
pub mod special;

pub use distributions::{GamconParams, GpdParams, TestDistribution};
pub use error::{Error, Result};
pub use estimators::{ExcessSample, Method, TailFit};
pub use gibbs::{ChainConfig, ChainOutput};
pub use prior::DamslethHyper;
pub use rng::RngStream;
