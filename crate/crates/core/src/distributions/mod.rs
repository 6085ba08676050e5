mod gamcon;
mod gpd;
mod heavy;

pub use gamcon::{CauchyProposal, GamconNormalApprox, GamconParams};
pub use gpd::GpdParams;
pub use heavy::{
    burr_from_uniform, burr_sample, frechet_from_uniform, frechet_sample, loggamma_from_gamma,
    loggamma_sample, TestDistribution,
};

use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::rng::RngStream;

/// Gamma draw in the shape/rate parameterization, density ∝ z^(shape−1) e^(−rate z).
///
/// Marsaglia–Tsang squeeze for shape ≥ 1, with the U^(1/shape) boost below 1.
pub fn gamma_sample(shape: f64, rate: f64, rng: &mut RngStream) -> Result<f64> {
    let scale = rate.recip();
    if !(shape > 0.0 && shape.is_finite() && rate > 0.0 && scale.is_finite() && scale > 0.0) {
        return Err(Error::domain(format!(
            "Gamma(shape, rate) requires finite positive parameters, got ({shape}, {rate})"
        )));
    }
    let dist = Gamma::new(shape, scale).map_err(|e| Error::domain(e.to_string()))?;
    Ok(dist.sample(rng))
}
