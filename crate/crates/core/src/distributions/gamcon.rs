use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::RngStream;
use crate::special::{bisect, lgamma, psi, psi1};

/// Gamcon II(c, d) distribution on x > 0 with unnormalized density
/// Γ(dx + 1) Γ(x)^(-d) (cd)^(-dx).
///
/// `c` is stored through its logarithm: posterior values of `c` can sit very
/// close to 1 and `ln c` is what every formula consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GamconParams {
    ln_c: f64,
    d: f64,
}

/// Mode and standard deviation of the Laplace (normal) approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GamconNormalApprox {
    pub mode: f64,
    pub sd: f64,
}

/// Cauchy law sharing mode and modal value with the normal approximation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyProposal {
    pub location: f64,
    pub scale: f64,
}

impl GamconParams {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        if !(c > 1.0 && c.is_finite()) {
            return Err(Error::domain(format!("Gamcon II requires c > 1, got {c}")));
        }
        Self::from_ln_c(c.ln(), d)
    }

    pub fn from_ln_c(ln_c: f64, d: f64) -> Result<Self> {
        if !(ln_c > 0.0 && ln_c.is_finite()) {
            return Err(Error::domain(format!("Gamcon II requires ln c > 0, got {ln_c}")));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::domain(format!("Gamcon II requires d > 0, got {d}")));
        }
        Ok(Self { ln_c, d })
    }

    pub fn c(&self) -> f64 {
        self.ln_c.exp()
    }

    pub fn ln_c(&self) -> f64 {
        self.ln_c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// ln Γ(dx + 1) − d ln Γ(x) − dx ln(cd); the normalizer is omitted.
    pub fn log_density_unnorm(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(format!(
                "Gamcon II density requires x > 0, got {x}"
            )));
        }
        Ok(self.log_kernel(x))
    }

    pub(crate) fn log_kernel(&self, x: f64) -> f64 {
        let d = self.d;
        lgamma(d * x + 1.0) - d * lgamma(x) - d * x * (self.ln_c + d.ln())
    }

    /// Published bounds on the mode: (1 − 1/d)/(ln c + ln(d/2)) ≤ M ≤ 2/ln c.
    /// The lower bound is reported as 0 when it is not positive.
    pub fn mode_bounds(&self) -> (f64, f64) {
        let d = self.d;
        let denom = self.ln_c + (d / 2.0).ln();
        let lower = (1.0 - 1.0 / d) / denom;
        let lower = if lower > 0.0 && denom > 0.0 { lower } else { 0.0 };
        (lower, 2.0 / self.ln_c)
    }

    /// Left side of the stationarity equation ψ(dM + 1) − ψ(M) − ln d − ln c.
    pub fn mode_equation(&self, m: f64) -> f64 {
        psi(self.d * m + 1.0) - psi(m) - self.d.ln() - self.ln_c
    }

    /// Mode of the density, found by bisection inside the published bounds
    /// (widened by 10% once if floating evaluation lands outside them).
    pub fn mode(&self) -> Result<f64> {
        let (lower, upper) = self.mode_bounds();
        let f = |m: f64| self.mode_equation(m);
        let mut lo = if lower > 0.0 { lower } else { upper * 1e-12 };
        let mut hi = upper;
        for attempt in 0..2 {
            if f(lo) > 0.0 && f(hi) < 0.0 {
                let root = bisect(f, lo, hi, hi * 1e-16).map_err(|e| Error::Convergence {
                    c: self.c(),
                    d: self.d,
                    reason: e.to_string(),
                })?;
                return Ok(root.root);
            }
            if attempt == 0 {
                lo *= 0.9;
                hi *= 1.1;
            }
        }
        Err(Error::Convergence {
            c: self.c(),
            d: self.d,
            reason: format!("no sign change on [{lo}, {hi}]"),
        })
    }

    /// Laplace approximation: mode M and S = [d ψ′(M) − d² ψ′(dM + 1)]^(-1/2).
    pub fn normal_approx(&self) -> Result<GamconNormalApprox> {
        let mode = self.mode()?;
        let d = self.d;
        let radicand = d * psi1(mode) - d * d * psi1(d * mode + 1.0);
        if !(radicand > 0.0 && radicand.is_finite()) {
            return Err(Error::Curvature {
                c: self.c(),
                d,
                radicand,
            });
        }
        Ok(GamconNormalApprox {
            mode,
            sd: radicand.sqrt().recip(),
        })
    }

    pub fn cauchy_proposal(&self) -> Result<CauchyProposal> {
        Ok(CauchyProposal::matching(&self.normal_approx()?))
    }
}

impl GamconNormalApprox {
    /// Density of the normal approximant at its mode, 1/(S√(2π)).
    pub fn modal_value(&self) -> f64 {
        1.0 / (self.sd * (2.0 * std::f64::consts::PI).sqrt())
    }
}

impl CauchyProposal {
    /// Same mode, and 1/(π·scale) equal to the normal modal value, so
    /// scale = S·√(2/π).
    pub fn matching(approx: &GamconNormalApprox) -> Self {
        Self {
            location: approx.mode,
            scale: approx.sd * (2.0 / std::f64::consts::PI).sqrt(),
        }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        let t = (x - self.location) / self.scale;
        -(std::f64::consts::PI * self.scale).ln() - (t * t).ln_1p()
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let u = rng.uniform();
        self.location + self.scale * (std::f64::consts::PI * (u - 0.5)).tan()
    }
}
