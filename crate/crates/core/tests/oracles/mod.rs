//! Reference computations used by the integration and acceptance tests.
//! Nothing in here calls into the library's own numerics: special functions
//! come from statrs and integrals from plain adaptive Simpson.
#![allow(dead_code)]

use statrs::function::gamma::{digamma, ln_gamma};

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson on [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

/// ∫_a^∞ f over doubling panels until a panel adds less than `tol`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, first_width: f64, tol: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    let mut width = first_width;
    for _ in 0..200 {
        let part = integrate(&f, lo, lo + width, tol);
        total += part;
        if part.abs() < tol && lo > a {
            break;
        }
        lo += width;
        width *= 2.0;
    }
    total
}

/// Gamma(shape, rate) density.
pub fn gamma_pdf(z: f64, shape: f64, rate: f64) -> f64 {
    if z <= 0.0 {
        return 0.0;
    }
    (shape * rate.ln() + (shape - 1.0) * z.ln() - rate * z - ln_gamma(shape)).exp()
}

/// Gamcon II(c, d) log kernel evaluated with statrs special functions.
pub fn gamcon_log_kernel(c: f64, d: f64, x: f64) -> f64 {
    ln_gamma(d * x + 1.0) - d * ln_gamma(x) - d * x * (c * d).ln()
}

/// ψ(dM + 1) − ψ(M) − ln d − ln c.
pub fn gamcon_mode_residual(c: f64, d: f64, m: f64) -> f64 {
    digamma(d * m + 1.0) - digamma(m) - d.ln() - c.ln()
}

/// Standard deviation implied by the curvature of the log kernel at `m`,
/// from a central difference of its analytic first derivative.
pub fn gamcon_curvature_sd(c: f64, d: f64, m: f64) -> f64 {
    let grad = |x: f64| d * digamma(d * x + 1.0) - d * digamma(x) - d * (c * d).ln();
    let h = 1e-5 * m;
    let second = (grad(m + h) - grad(m - h)) / (2.0 * h);
    (-second).sqrt().recip()
}

/// Tabulated CDF of Gamcon II(c, d), normalized by quadrature.
pub struct GamconCdf {
    grid: Vec<f64>,
    cdf: Vec<f64>,
}

impl GamconCdf {
    pub fn new(c: f64, d: f64, mode: f64) -> Self {
        let peak = gamcon_log_kernel(c, d, mode);
        let f = |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                (gamcon_log_kernel(c, d, x) - peak).exp()
            }
        };
        let upper = {
            let mut u = 2.0 * mode;
            while f(u) > 1e-18 {
                u *= 1.5;
            }
            u
        };
        let cells = 20_000;
        let h = upper / cells as f64;
        let mut grid = vec![0.0];
        let mut cum = vec![0.0];
        for i in 0..cells {
            let a = i as f64 * h;
            cum.push(cum[i] + integrate(f, a, a + h, 1e-14));
            grid.push(a + h);
        }
        let total = *cum.last().unwrap();
        Self {
            grid,
            cdf: cum.into_iter().map(|v| v / total).collect(),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self.grid.iter().position(|&g| g >= x) {
            None => 1.0,
            Some(0) => 0.0,
            Some(i) => {
                let t = (x - self.grid[i - 1]) / (self.grid[i] - self.grid[i - 1]);
                self.cdf[i - 1] + t * (self.cdf[i] - self.cdf[i - 1])
            }
        }
    }
}

impl GamconCdf {
    /// Inverse by table lookup and linear interpolation.
    pub fn inverse(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c < u).clamp(1, self.cdf.len() - 1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let t = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.0 };
        self.grid[i - 1] + t * (self.grid[i] - self.grid[i - 1])
    }

    /// Mean by the trapezoid rule on the table.
    pub fn mean(&self) -> f64 {
        // E[X] = ∫ (1 − F)
        self.grid
            .windows(2)
            .zip(self.cdf.windows(2))
            .map(|(g, c)| (g[1] - g[0]) * (1.0 - 0.5 * (c[0] + c[1])))
            .sum()
    }
}

/// Two-sided Kolmogorov–Smirnov statistic of a sample against a CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic p-value of the KS statistic `d` for sample size `n`.
pub fn ks_pvalue(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    let lambda = (sn + 0.12 + 0.11 / sn) * d;
    let mut sum = 0.0;
    for j in 1..=100 {
        let term = (-2.0 * (j * j) as f64 * lambda * lambda).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Inverse CDF sample of GPD(γ, σ) from a uniform.
pub fn gpd_from_uniform(gamma: f64, sigma: f64, u: f64) -> f64 {
    if gamma == 0.0 {
        -sigma * (1.0 - u).ln()
    } else {
        sigma * ((1.0 - u).powf(-gamma) - 1.0) / gamma
    }
}

/// Plain GPD log-likelihood, written out from the density.
pub fn gpd_loglik(gamma: f64, sigma: f64, y: &[f64]) -> f64 {
    if sigma <= 0.0 {
        return f64::NEG_INFINITY;
    }
    y.iter()
        .map(|&v| {
            let t = 1.0 + gamma * v / sigma;
            if t <= 0.0 {
                f64::NEG_INFINITY
            } else if gamma == 0.0 {
                -sigma.ln() - v / sigma
            } else {
                -sigma.ln() - (1.0 / gamma + 1.0) * t.ln()
            }
        })
        .sum()
}

/// Sample median.
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}
