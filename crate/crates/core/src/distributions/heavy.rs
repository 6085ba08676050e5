//! Heavy-tailed laws used to generate raw samples in the simulation study.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::gamma_sample;
use crate::error::Error;
use crate::rng::RngStream;

/// Fréchet(β) by inversion of F(x) = exp(−x^(−1/β)): x = (−ln U)^(−β).
pub fn frechet_from_uniform(beta: f64, u: f64) -> f64 {
    (-u.ln()).powf(-beta)
}

pub fn frechet_sample(beta: f64, rng: &mut RngStream) -> f64 {
    frechet_from_uniform(beta, rng.uniform())
}

/// Burr(β, τ, λ) by inversion of F(x) = 1 − [β/(β + x^τ)]^λ.
pub fn burr_from_uniform(beta: f64, tau: f64, lambda: f64, u: f64) -> f64 {
    // (1 − U)^(−1/λ) − 1, written to stay accurate for small U
    let bracket = (-(-u).ln_1p() / lambda).exp_m1();
    (beta * bracket).powf(1.0 / tau)
}

pub fn burr_sample(beta: f64, tau: f64, lambda: f64, rng: &mut RngStream) -> f64 {
    burr_from_uniform(beta, tau, lambda, rng.uniform())
}

/// Log-Gamma(2): exp(G) with G ~ Gamma(2, 1), density x^(−2) ln x on x > 1.
pub fn loggamma_from_gamma(g: f64) -> f64 {
    g.exp()
}

pub fn loggamma_sample(rng: &mut RngStream) -> f64 {
    let g = gamma_sample(2.0, 1.0, rng).expect("Gamma(2, 1) parameters are valid");
    loggamma_from_gamma(g)
}

/// The three generating distributions of the simulation study. All have
/// extreme value index 1; they differ in the second-order parameter ρ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TestDistribution {
    /// Fréchet(1)
    Frechet1,
    /// Burr(1, 0.5, 2)
    Burr1052,
    /// Log-Gamma(2)
    LogGamma2,
}

impl TestDistribution {
    pub const ALL: [TestDistribution; 3] = [Self::Frechet1, Self::Burr1052, Self::LogGamma2];

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self {
            Self::Frechet1 => frechet_sample(1.0, rng),
            Self::Burr1052 => burr_sample(1.0, 0.5, 2.0, rng),
            Self::LogGamma2 => loggamma_sample(rng),
        }
    }

    pub fn sample_n(&self, n: usize, rng: &mut RngStream) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }

    pub fn true_gamma(&self) -> f64 {
        1.0
    }

    /// Second-order parameter; metadata only.
    pub fn rho(&self) -> f64 {
        match self {
            Self::Frechet1 => -1.0,
            Self::Burr1052 => -0.5,
            Self::LogGamma2 => 0.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Frechet1 => "frechet",
            Self::Burr1052 => "burr",
            Self::LogGamma2 => "loggamma",
        }
    }
}

impl fmt::Display for TestDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestDistribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "frechet" | "frechet1" => Ok(Self::Frechet1),
            "burr" | "burr1052" => Ok(Self::Burr1052),
            "loggamma" | "log-gamma" | "loggamma2" => Ok(Self::LogGamma2),
            _ => Err(Error::Unknown {
                kind: "distribution",
                name: s.to_string(),
            }),
        }
    }
}
