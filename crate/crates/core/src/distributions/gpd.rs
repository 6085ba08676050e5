use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Generalized Pareto distribution with shape `gamma` and scale `sigma`.
///
/// For heavy tails (`gamma > 0`) the equivalent parameterization
/// `alpha = 1/gamma`, `beta = sigma/gamma` is available through
/// [`GpdParams::from_alpha_beta`], [`GpdParams::alpha`] and [`GpdParams::beta`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GpdParams {
    gamma: f64,
    sigma: f64,
}

impl GpdParams {
    pub fn new(gamma: f64, sigma: f64) -> Result<Self> {
        if !gamma.is_finite() || !(sigma > 0.0 && sigma.is_finite()) {
            return Err(Error::domain(format!(
                "GPD requires finite gamma and sigma > 0, got ({gamma}, {sigma})"
            )));
        }
        Ok(Self { gamma, sigma })
    }

    pub fn from_alpha_beta(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::domain(format!(
                "heavy-tailed GPD requires alpha > 0 and beta > 0, got ({alpha}, {beta})"
            )));
        }
        Self::new(1.0 / alpha, beta / alpha)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn alpha(&self) -> Result<f64> {
        self.require_heavy()?;
        Ok(1.0 / self.gamma)
    }

    pub fn beta(&self) -> Result<f64> {
        self.require_heavy()?;
        Ok(self.sigma / self.gamma)
    }

    fn require_heavy(&self) -> Result<()> {
        if self.gamma > 0.0 {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "(alpha, beta) parameterization needs gamma > 0, got {}",
                self.gamma
            )))
        }
    }

    /// Right end of the support; infinite unless `gamma < 0`.
    pub fn upper_endpoint(&self) -> f64 {
        if self.gamma < 0.0 {
            -self.sigma / self.gamma
        } else {
            f64::INFINITY
        }
    }

    /// Mean `sigma / (1 - gamma)`, infinite for `gamma >= 1`.
    pub fn mean(&self) -> f64 {
        if self.gamma < 1.0 {
            self.sigma / (1.0 - self.gamma)
        } else {
            f64::INFINITY
        }
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        if !(y >= 0.0) || y > self.upper_endpoint() {
            return Err(Error::domain(format!("y = {y} outside the GPD support")));
        }
        let (g, s) = (self.gamma, self.sigma);
        if g == 0.0 {
            return Ok((-y / s).exp() / s);
        }
        let t = g * y / s;
        if t <= -1.0 {
            // upper endpoint with gamma < 0
            return Ok(if g < -1.0 {
                f64::INFINITY
            } else if g == -1.0 {
                1.0 / s
            } else {
                0.0
            });
        }
        Ok(((-1.0 / g - 1.0) * t.ln_1p()).exp() / s)
    }

    pub fn cdf(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 0.0;
        }
        if y >= self.upper_endpoint() {
            return 1.0;
        }
        let (g, s) = (self.gamma, self.sigma);
        if g == 0.0 {
            -(-y / s).exp_m1()
        } else {
            -(-(g * y / s).ln_1p() / g).exp_m1()
        }
    }

    /// Upper tail `1 - F(y)`, computed without cancellation.
    pub fn survival(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 1.0;
        }
        if y >= self.upper_endpoint() {
            return 0.0;
        }
        let (g, s) = (self.gamma, self.sigma);
        if g == 0.0 {
            (-y / s).exp()
        } else {
            (-(g * y / s).ln_1p() / g).exp()
        }
    }

    /// Inverse CDF.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(prob > 0.0 && prob < 1.0) {
            return Err(Error::domain(format!(
                "GPD quantile requires 0 < prob < 1, got {prob}"
            )));
        }
        let (g, s) = (self.gamma, self.sigma);
        let log_tail = (-prob).ln_1p();
        Ok(if g == 0.0 {
            -s * log_tail
        } else {
            s / g * (-g * log_tail).exp_m1()
        })
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let u = rng.uniform();
        self.quantile(u).expect("uniform draw lies in (0, 1)")
    }

    /// Sum of log densities, `-inf` if any observation is outside the support.
    pub fn log_likelihood(&self, y: &[f64]) -> f64 {
        let (g, s) = (self.gamma, self.sigma);
        let k = y.len() as f64;
        if g == 0.0 {
            return -k * s.ln() - y.iter().sum::<f64>() / s;
        }
        let mut acc = 0.0;
        for &yi in y {
            let t = (g * yi / s).ln_1p();
            if !(yi >= 0.0) || t.is_nan() || t == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            acc += t;
        }
        -k * s.ln() - (1.0 / g + 1.0) * acc
    }
}
