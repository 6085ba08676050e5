//! Log-gamma, digamma, trigamma, a standard normal quantile and bisection.
//!
//! The polygamma functions shift the argument upward with the recurrence
//! until it exceeds [`ASYMPTOTIC_CUTOFF`], then sum the asymptotic series.

use crate::error::{Error, Result};

const ASYMPTOTIC_CUTOFF: f64 = 10.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Maximum number of halvings performed by [`bisect`].
pub const MAX_BISECTIONS: usize = 200;

/// Natural log of the gamma function for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    check_positive("ln_gamma", x)?;
    Ok(lgamma(x))
}

/// Digamma function ψ(x) = d/dx ln Γ(x) for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    Ok(psi(x))
}

/// Trigamma function ψ′(x) for `x > 0`. Always positive.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive("trigamma", x)?;
    Ok(psi1(x))
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} requires a finite x > 0, got {x}")))
    }
}

pub(crate) fn lgamma(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut x = x;
    while x < ASYMPTOTIC_CUTOFF {
        shift += x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0
            + inv2
                * (-1.0 / 360.0
                    + inv2
                        * (1.0 / 1260.0
                            + inv2
                                * (-1.0 / 1680.0
                                    + inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360_360.0 + inv2 / 156.0))))));
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series - shift
}

pub(crate) fn psi(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut x = x;
    while x < ASYMPTOTIC_CUTOFF {
        shift += 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    x.ln() - 0.5 / x - series - shift
}

pub(crate) fn psi1(x: f64) -> f64 {
    let mut shift = 0.0;
    let mut x = x;
    while x < ASYMPTOTIC_CUTOFF {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        + 0.5 * inv2
        + inv
            * inv2
            * (1.0 / 6.0
                + inv2
                    * (-1.0 / 30.0
                        + inv2
                            * (1.0 / 42.0
                                + inv2
                                    * (-1.0 / 30.0
                                        + inv2
                                            * (5.0 / 66.0 + inv2 * (-691.0 / 2730.0 + inv2 * 7.0 / 6.0))))));
    series + shift
}

/// Quantile of the standard normal distribution.
///
/// Acklam's rational approximation, relative error below 1.2e-9 on (0, 1).
pub fn normal_quantile(prob: f64) -> Result<f64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(Error::domain(format!(
            "normal quantile requires 0 < prob < 1, got {prob}"
        )));
    }
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const LOW: f64 = 0.024_25;

    let tail = |q: f64| {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    let z = if prob < LOW {
        tail((-2.0 * prob.ln()).sqrt())
    } else if prob <= 1.0 - LOW {
        let q = prob - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - prob).ln()).sqrt())
    };
    Ok(z)
}

/// Result of a successful bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketedRoot {
    pub lo: f64,
    pub hi: f64,
    pub root: f64,
    /// |f(root)|
    pub residual: f64,
}

/// Bisection on a sign-changing function.
///
/// Halves `[lo, hi]` until its width is at most `tol` (or the midpoint is no
/// longer representable strictly inside the bracket). Fails after
/// [`MAX_BISECTIONS`] halvings.
pub fn bisect<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<BracketedRoot>
where
    F: FnMut(f64) -> f64,
{
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::domain(format!(
            "bisect requires lo < hi and tol > 0, got [{lo}, {hi}], tol = {tol}"
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return Err(Error::Bracket { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0 || (f_lo == 0.0 && f_hi > 0.0);

    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            let residual = f(mid).abs();
            return Ok(BracketedRoot {
                lo,
                hi,
                root: mid,
                residual,
            });
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(BracketedRoot {
                lo,
                hi,
                root: mid,
                residual: 0.0,
            });
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::IterationCap(MAX_BISECTIONS))
}
