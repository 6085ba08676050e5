use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use gpdbayes::gibbs::{DEFAULT_BURN_IN, DEFAULT_ITERATIONS};

#[derive(Debug, Parser)]
#[command(
    name = "gpdbayes",
    version,
    about = "Bayesian and classical GPD tail estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit tail models to a dataset and report quantiles, return levels and premiums.
    Fit(FitArgs),
    /// Monte Carlo study over replicated heavy-tailed samples.
    Bench(BenchArgs),
    /// Draw a sample from one of the test distributions.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Built-in dataset (`fire`).
    #[arg(long, conflicts_with = "input", required_unless_present = "input")]
    pub dataset: Option<String>,

    /// File with one value per line.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Use the k largest observations; the threshold is the next one down.
    #[arg(long, conflicts_with = "threshold")]
    pub k: Option<usize>,

    /// Fixed threshold; every observation above it is an exceedance.
    #[arg(long)]
    pub threshold: Option<f64>,

    /// The input already holds excesses over --threshold (default 0).
    #[arg(long, requires = "input")]
    pub excesses: bool,

    /// Size of the sample the excesses were cut from (default: their count).
    #[arg(long, requires = "excesses")]
    pub n: Option<usize>,

    /// Comma-separated methods: bayes, ml, pwm, mti, zipfg, hill, expbayes.
    #[arg(long, value_delimiter = ',')]
    pub method: Vec<String>,

    /// Exceedance probability p of the extreme quantile q_{1-p}.
    #[arg(long = "quantile-p", visible_alias = "p")]
    pub quantile_p: Option<f64>,

    /// Return period N in years.
    #[arg(long)]
    pub return_period: Option<f64>,

    /// Observation period in years (built-in datasets carry their own).
    #[arg(long)]
    pub years: Option<f64>,

    /// Require the net premium (computed by default whenever years are known).
    #[arg(long)]
    pub premium: bool,

    /// Posterior draws with infinite premium: `infinity` or `exclude`.
    #[arg(long, default_value = "infinity")]
    pub premium_infinite: String,

    /// Credibility level of posterior intervals.
    #[arg(long, default_value_t = 0.9)]
    pub level: f64,

    #[arg(long, env = "GPDBAYES_ITERATIONS", default_value_t = DEFAULT_ITERATIONS)]
    pub iterations: usize,

    #[arg(long, env = "GPDBAYES_BURN_IN", default_value_t = DEFAULT_BURN_IN)]
    pub burn_in: usize,

    #[arg(long, env = "GPDBAYES_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Expert opinion file (`key = value` lines) defining the prior.
    #[arg(long)]
    pub expert_file: Option<PathBuf>,

    /// Run the sampler even when the prior has delta <= 0.5.
    #[arg(long)]
    pub allow_low_delta: bool,

    /// Gamma(a, b) prior on the exponential rate, as `a,b`; enables expbayes.
    #[arg(long, value_delimiter = ',', num_args = 1)]
    pub exp_prior: Option<Vec<f64>>,

    /// Emit the JSON report instead of text.
    #[arg(long)]
    pub json: bool,

    /// Leave the generation time out of the report.
    #[arg(long)]
    pub no_timestamp: bool,

    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// `scaled` (20 replications, k in 25..200) or `full` (100 replications, k = 5..495).
    #[arg(long, default_value = "scaled")]
    pub profile: String,

    /// frechet, burr, loggamma or all.
    #[arg(long, default_value = "frechet")]
    pub dist: String,

    #[arg(long, env = "GPDBAYES_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Directory receiving `<dist>_<figure>.tsv` and `<dist>_report.json`.
    #[arg(long, default_value = "bench-out")]
    pub out_dir: PathBuf,

    #[arg(long)]
    pub replications: Option<usize>,

    /// Sample size per replication.
    #[arg(long)]
    pub n: Option<usize>,

    /// Comma-separated k values.
    #[arg(long, value_delimiter = ',')]
    pub k_grid: Option<Vec<usize>>,

    #[arg(long, env = "GPDBAYES_ITERATIONS")]
    pub iterations: Option<usize>,

    #[arg(long, env = "GPDBAYES_BURN_IN")]
    pub burn_in: Option<usize>,

    /// Exceedance probability of the target quantile.
    #[arg(long)]
    pub p: Option<f64>,

    #[arg(long)]
    pub level: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// frechet, burr or loggamma.
    #[arg(long)]
    pub dist: String,

    #[arg(long)]
    pub n: usize,

    #[arg(long, env = "GPDBAYES_SEED", default_value_t = 1)]
    pub seed: u64,

    /// Write values here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}
