//! Monte Carlo study: replicated samples from a heavy-tailed law, every
//! estimator swept over k, coverage of the Bayes credibility intervals and
//! Monte Carlo confidence intervals (MCCI) across replications.
//!
//! Each replication draws its sample from stream (seed, DATA, r) and each
//! chain runs on stream (seed, CHAIN, r, k), so cells are independent tasks
//! and extending the k grid leaves existing cells untouched.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::TestDistribution;
use crate::error::{Error, Result};
use crate::estimators::{
    extract_excesses, hill_fit, ml_gpd_fit, mti_fit, pwm_gpd_fit, zipf_g_fit, ExcessSample, Method, TailFit,
};
use crate::gibbs::{run_chain_on, ChainConfig, DEFAULT_BURN_IN, DEFAULT_ITERATIONS};
use crate::pot::{
    empirical_quantile, posterior_quantile_draws, pot_quantile_fit, summarize, QuantileRequest,
};
use crate::prior::empirical_hyperparameters;
use crate::rng::{stream_key, RngStream};
use crate::special::bisect;

const TAG_DATA: u8 = 1;
const TAG_CHAIN: u8 = 2;

/// Estimators run in every cell, Bayes first.
pub const BENCH_METHODS: [Method; 6] = [
    Method::BayesQC,
    Method::Ml,
    Method::Mti,
    Method::ZipfG,
    Method::Pwm,
    Method::Hill,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BenchProfile {
    /// 20 replications, k ∈ {25, 50, 100, 200}.
    Scaled,
    /// 100 replications, k = 5, 10, …, 495.
    Full,
}

impl FromStr for BenchProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scaled" => Ok(BenchProfile::Scaled),
            "full" => Ok(BenchProfile::Full),
            _ => Err(Error::Unknown {
                kind: "profile",
                name: s.to_string(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchDesign {
    pub distribution: TestDistribution,
    pub n: usize,
    pub replications: usize,
    pub k_grid: Vec<usize>,
    /// Exceedance probability of the target quantile.
    pub p: f64,
    pub total_iterations: usize,
    pub burn_in: usize,
    /// Credibility level of the Bayes intervals.
    pub level: f64,
    pub seed: u64,
}

impl BenchDesign {
    pub fn new(distribution: TestDistribution, profile: BenchProfile, seed: u64) -> Self {
        let (replications, k_grid) = match profile {
            BenchProfile::Scaled => (20, vec![25, 50, 100, 200]),
            BenchProfile::Full => (100, (5..=495).step_by(5).collect()),
        };
        Self {
            distribution,
            n: 500,
            replications,
            k_grid,
            p: 1.0 / 5000.0,
            total_iterations: DEFAULT_ITERATIONS,
            burn_in: DEFAULT_BURN_IN,
            level: 0.9,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications == 0 {
            return Err(Error::domain("need at least one replication"));
        }
        if self.k_grid.is_empty() {
            return Err(Error::domain("k grid is empty"));
        }
        if let Some(&k) = self.k_grid.iter().find(|&&k| k < 3 || k >= self.n) {
            return Err(Error::domain(format!(
                "k = {k} must satisfy 3 <= k < n = {}",
                self.n
            )));
        }
        if self.replications as u64 >= 1 << 36 || self.k_grid.iter().any(|&k| k as u64 >= 1 << 24) {
            return Err(Error::domain("replication or k index too large for stream keys"));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(Error::domain(format!("p must lie in (0, 1), got {}", self.p)));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(Error::domain(format!(
                "level must lie in (0, 1), got {}",
                self.level
            )));
        }
        if self.burn_in >= self.total_iterations {
            return Err(Error::domain("burn_in must be < total_iterations"));
        }
        Ok(())
    }
}

/// Exact q_{1−p} of the generating law.
pub fn true_quantile(dist: TestDistribution, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    match dist {
        // F(x) = exp(−1/x)
        TestDistribution::Frechet1 => Ok(-1.0 / (-p).ln_1p()),
        // 1 − F(x) = (1 + √x)^(−2)
        TestDistribution::Burr1052 => {
            let r = p.powf(-0.5) - 1.0;
            Ok(r * r)
        }
        // 1 − F(e^g) = e^(−g)(1 + g) for G ~ Gamma(2, 1)
        TestDistribution::LogGamma2 => {
            let ln_p = p.ln();
            let root = bisect(|g| g.ln_1p() - g - ln_p, 0.0, 1e3, 1e-13)?;
            Ok(root.root.exp())
        }
    }
}

/// Estimates from one (replication, k) cell. `None` marks a failed estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub replication: usize,
    pub k: usize,
    /// (γ̂, q̂) per method, in [`BENCH_METHODS`] order.
    pub estimates: Vec<Option<(f64, f64)>>,
    /// Bayes credibility intervals for γ and q.
    pub bayes_ci: Option<BayesIntervals>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BayesIntervals {
    pub gamma: (f64, f64),
    pub q: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodRow {
    pub k: usize,
    pub method: Method,
    /// Replications in which the estimator produced a value.
    pub successes: usize,
    pub mean_gamma: Option<f64>,
    pub mean_q: Option<f64>,
    pub mcci_gamma: Option<(f64, f64)>,
    pub mcci_q: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub k: usize,
    pub replications: usize,
    pub covered_gamma: usize,
    pub covered_q: usize,
    pub mean_ci_gamma: Option<(f64, f64)>,
    pub mean_ci_q: Option<(f64, f64)>,
}

impl CoverageRow {
    pub fn coverage_gamma(&self) -> f64 {
        self.covered_gamma as f64 / self.replications as f64
    }

    pub fn coverage_q(&self) -> f64 {
        self.covered_q as f64 / self.replications as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub design: BenchDesign,
    pub true_gamma: f64,
    pub true_quantile: f64,
    pub rho: f64,
    pub rows: Vec<MethodRow>,
    pub coverage: Vec<CoverageRow>,
    pub cells: Vec<CellResult>,
}

impl BenchReport {
    pub fn row(&self, k: usize, method: Method) -> Option<&MethodRow> {
        self.rows.iter().find(|r| r.k == k && r.method == method)
    }

    pub fn coverage_at(&self, k: usize) -> Option<&CoverageRow> {
        self.coverage.iter().find(|r| r.k == k)
    }
}

fn fit_estimate(fit: TailFit, req: &QuantileRequest) -> Option<(f64, f64)> {
    let gpd = fit.gpd().ok()?;
    let q = pot_quantile_fit(&gpd, req);
    q.is_finite().then_some((fit.gamma, q))
}

fn bayes_cell(
    sample: &ExcessSample,
    req: &QuantileRequest,
    design: &BenchDesign,
    rep: usize,
    k: usize,
) -> Result<((f64, f64), BayesIntervals)> {
    let hyper = empirical_hyperparameters(sample)?;
    let mut cfg = ChainConfig::new(hyper, design.seed);
    cfg.total_iterations = design.total_iterations;
    cfg.burn_in = design.burn_in;
    cfg.stream = stream_key(TAG_CHAIN, rep as u64, k as u64);
    let chain = run_chain_on(sample, &cfg)?;
    let g = summarize(&chain.gammas(), design.level)?;
    let q = summarize(&posterior_quantile_draws(&chain, req)?, design.level)?;
    Ok((
        (g.median, q.median),
        BayesIntervals {
            gamma: (g.ci_lo, g.ci_hi),
            q: (q.ci_lo, q.ci_hi),
        },
    ))
}

fn run_cell(x: &[f64], design: &BenchDesign, rep: usize, k: usize) -> CellResult {
    let mut estimates = vec![None; BENCH_METHODS.len()];
    let mut bayes_ci = None;
    let prepared =
        extract_excesses(x, k).and_then(|s| QuantileRequest::for_sample(&s, design.p).map(|r| (s, r)));
    if let Ok((sample, req)) = prepared {
        for (slot, method) in estimates.iter_mut().zip(BENCH_METHODS) {
            *slot = match method {
                Method::BayesQC => match bayes_cell(&sample, &req, design, rep, k) {
                    Ok((point, ci)) => {
                        bayes_ci = Some(ci);
                        Some(point)
                    }
                    Err(_) => None,
                },
                Method::Ml => fit_estimate(ml_gpd_fit(&sample), &req),
                Method::Mti => fit_estimate(mti_fit(&sample), &req),
                Method::ZipfG => fit_estimate(zipf_g_fit(&sample), &req),
                Method::Pwm => fit_estimate(pwm_gpd_fit(&sample), &req),
                Method::Hill => fit_estimate(hill_fit(&sample), &req),
                Method::ExpBayes => None,
            };
        }
    }
    CellResult {
        replication: rep,
        k,
        estimates,
        bayes_ci,
    }
}

fn mean_and_mcci(values: &mut [f64]) -> (Option<f64>, Option<(f64, f64)>) {
    if values.is_empty() {
        return (None, None);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    values.sort_by(f64::total_cmp);
    (
        Some(mean),
        Some((empirical_quantile(values, 0.05), empirical_quantile(values, 0.95))),
    )
}

fn mean_interval(iv: &[(f64, f64)]) -> Option<(f64, f64)> {
    if iv.is_empty() {
        return None;
    }
    let n = iv.len() as f64;
    Some((
        iv.iter().map(|v| v.0).sum::<f64>() / n,
        iv.iter().map(|v| v.1).sum::<f64>() / n,
    ))
}

/// Runs every (replication, k) cell in parallel and aggregates.
pub fn run_bench(design: &BenchDesign) -> Result<BenchReport> {
    design.validate()?;
    let dist = design.distribution;
    let true_gamma = dist.true_gamma();
    let q_true = true_quantile(dist, design.p)?;

    let samples: Vec<Vec<f64>> = (0..design.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = RngStream::new(design.seed, stream_key(TAG_DATA, r as u64, 0));
            dist.sample_n(design.n, &mut rng)
        })
        .collect();

    let tasks: Vec<(usize, usize)> = (0..design.replications)
        .flat_map(|r| design.k_grid.iter().map(move |&k| (r, k)))
        .collect();
    let cells: Vec<CellResult> = tasks
        .par_iter()
        .map(|&(r, k)| run_cell(&samples[r], design, r, k))
        .collect();

    let mut rows = Vec::new();
    let mut coverage = Vec::new();
    for &k in &design.k_grid {
        let at_k: Vec<&CellResult> = cells.iter().filter(|c| c.k == k).collect();
        for (m, method) in BENCH_METHODS.iter().enumerate() {
            let ok: Vec<(f64, f64)> = at_k.iter().filter_map(|c| c.estimates[m]).collect();
            let mut gammas: Vec<f64> = ok.iter().map(|v| v.0).collect();
            let mut qs: Vec<f64> = ok.iter().map(|v| v.1).collect();
            let (mean_gamma, mcci_gamma) = mean_and_mcci(&mut gammas);
            let (mean_q, mcci_q) = mean_and_mcci(&mut qs);
            rows.push(MethodRow {
                k,
                method: *method,
                successes: ok.len(),
                mean_gamma,
                mean_q,
                mcci_gamma,
                mcci_q,
            });
        }
        let cis: Vec<BayesIntervals> = at_k.iter().filter_map(|c| c.bayes_ci).collect();
        let inside = |v: f64, (lo, hi): (f64, f64)| lo <= v && v <= hi;
        coverage.push(CoverageRow {
            k,
            replications: design.replications,
            covered_gamma: cis.iter().filter(|c| inside(true_gamma, c.gamma)).count(),
            covered_q: cis.iter().filter(|c| inside(q_true, c.q)).count(),
            mean_ci_gamma: mean_interval(&cis.iter().map(|c| c.gamma).collect::<Vec<_>>()),
            mean_ci_q: mean_interval(&cis.iter().map(|c| c.q).collect::<Vec<_>>()),
        });
    }

    Ok(BenchReport {
        design: design.clone(),
        true_gamma,
        true_quantile: q_true,
        rho: dist.rho(),
        rows,
        coverage,
        cells,
    })
}

/// Figure families that can be emitted as tab-separated tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Figure {
    /// k, then mean γ̂ and mean q̂ per method.
    Means,
    /// k, coverage_gamma, coverage_q.
    Coverage,
    /// k, then the MCCI width of q̂ per method.
    McciWidth,
    /// k, bayes_ci_lo, bayes_ci_hi, mcci_lo, mcci_hi (all for q).
    Intervals,
}

impl Figure {
    pub const ALL: [Figure; 4] = [
        Figure::Means,
        Figure::Coverage,
        Figure::McciWidth,
        Figure::Intervals,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Means => "means",
            Figure::Coverage => "coverage",
            Figure::McciWidth => "mcci-width",
            Figure::Intervals => "intervals",
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|fig| fig.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Unknown {
                kind: "figure",
                name: s.to_string(),
            })
    }
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_string(), |x| x.to_string())
}

/// Tab-separated table for one figure family. Missing values are `NA`.
pub fn emit_figure_data(report: &BenchReport, which: Figure) -> String {
    let mut out = String::new();
    let mut header = vec!["k".to_string()];
    match which {
        Figure::Means => {
            for m in BENCH_METHODS {
                header.push(format!("gamma_{m}"));
                header.push(format!("q_{m}"));
            }
        }
        Figure::Coverage => header.extend(["coverage_gamma", "coverage_q"].map(String::from)),
        Figure::McciWidth => header.extend(BENCH_METHODS.iter().map(|m| format!("width_{m}"))),
        Figure::Intervals => {
            header.extend(["bayes_ci_lo", "bayes_ci_hi", "mcci_lo", "mcci_hi"].map(String::from))
        }
    }
    out.push_str(&header.join("\t"));
    out.push('\n');

    for &k in &report.design.k_grid {
        let mut line = vec![k.to_string()];
        match which {
            Figure::Means => {
                for m in BENCH_METHODS {
                    let row = report.row(k, m);
                    line.push(cell(row.and_then(|r| r.mean_gamma)));
                    line.push(cell(row.and_then(|r| r.mean_q)));
                }
            }
            Figure::Coverage => {
                let c = report.coverage_at(k);
                line.push(cell(c.map(|c| c.coverage_gamma())));
                line.push(cell(c.map(|c| c.coverage_q())));
            }
            Figure::McciWidth => {
                for m in BENCH_METHODS {
                    let w = report.row(k, m).and_then(|r| r.mcci_q).map(|(lo, hi)| hi - lo);
                    line.push(cell(w));
                }
            }
            Figure::Intervals => {
                let ci = report.coverage_at(k).and_then(|c| c.mean_ci_q);
                let mcci = report.row(k, Method::BayesQC).and_then(|r| r.mcci_q);
                line.push(cell(ci.map(|v| v.0)));
                line.push(cell(ci.map(|v| v.1)));
                line.push(cell(mcci.map(|v| v.0)));
                line.push(cell(mcci.map(|v| v.1)));
            }
        }
        let _ = writeln!(out, "{}", line.join("\t"));
    }
    out
}
