use std::time::{SystemTime, UNIX_EPOCH};

use gpdbayes::datasets::builtin_dataset;
use gpdbayes::estimators::{
    excesses_above, exp_bayes_quantiles, extract_excesses, hill_fit, ml_gpd_fit, mti_fit, pwm_gpd_fit,
    zipf_g_fit,
};
use gpdbayes::gibbs::run_chain_on;
use gpdbayes::pot::{
    net_premium_point, net_premium_with, posterior_quantile_draws, pot_quantile_fit, return_level,
    return_level_point, return_period_probability, summarize, InfinitePremium, QuantileRequest,
};
use gpdbayes::prior::{empirical_hyperparameters, ExpertOpinion};
use gpdbayes::{ChainConfig, DamslethHyper, ExcessSample, GpdParams, Method, TailFit};

use crate::args::FitArgs;
use crate::error::{CliError, Result};
use crate::input::read_values;
use crate::report::{
    BayesReport, DataInfo, ExpBayesReport, FitRow, PriorInfo, RunReport, Settings, SCHEMA_VERSION,
};

const DEFAULT_METHODS: [Method; 6] = [
    Method::BayesQC,
    Method::Ml,
    Method::Pwm,
    Method::Mti,
    Method::ZipfG,
    Method::Hill,
];

fn load_sample(args: &FitArgs) -> Result<(ExcessSample, String)> {
    let (sample, source, years) = if let Some(name) = &args.dataset {
        if args.excesses {
            return Err(CliError::usage("--excesses applies to --input files only"));
        }
        let ds = builtin_dataset(name)?;
        let sample = match (args.k, args.threshold) {
            (Some(k), _) => extract_excesses(&ds.values, k)?,
            (None, Some(u)) => excesses_above(&ds.values, u)?,
            (None, None) => ds.excess_sample()?,
        };
        (sample, format!("{} (built-in)", ds.name), Some(ds.years))
    } else {
        let path = args
            .input
            .as_ref()
            .ok_or_else(|| CliError::usage("need --dataset or --input"))?;
        let values = read_values(path)?;
        let sample = if args.excesses {
            if args.k.is_some() {
                return Err(CliError::usage("--k cannot be combined with --excesses"));
            }
            let n = args.n.unwrap_or(values.len());
            ExcessSample::new(args.threshold.unwrap_or(0.0), values, n)?
        } else {
            match (args.k, args.threshold) {
                (Some(k), _) => extract_excesses(&values, k)?,
                (None, Some(u)) => excesses_above(&values, u)?,
                (None, None) => return Err(CliError::usage("raw input needs --k or --threshold")),
            }
        };
        (sample, path.display().to_string(), None)
    };
    let sample = match args.years.or(years) {
        Some(t) => sample.with_years(t)?,
        None => sample,
    };
    Ok((sample, source))
}

fn requested_methods(args: &FitArgs) -> Result<Vec<Method>> {
    let mut methods: Vec<Method> = if args.method.is_empty() {
        let mut m = DEFAULT_METHODS.to_vec();
        if args.exp_prior.is_some() {
            m.push(Method::ExpBayes);
        }
        m
    } else {
        args.method
            .iter()
            .map(|s| s.trim().parse())
            .collect::<Result<_, gpdbayes::Error>>()?
    };
    methods.dedup();
    if methods.contains(&Method::ExpBayes) && args.exp_prior.is_none() {
        return Err(CliError::usage("expbayes needs --exp-prior a,b"));
    }
    Ok(methods)
}

/// Fills quantile, return level and premium of a converged point fit.
fn point_row(fit: TailFit, sample: &ExcessSample, req: Option<&QuantileRequest>, args: &FitArgs) -> FitRow {
    let gpd = match fit.gpd() {
        Ok(g) => g,
        Err(e) => return FitRow::failed(fit.method, e.to_string()),
    };
    let mut row = point_values(fit.method, &gpd, sample, req, args);
    row.converged = fit.converged;
    row
}

fn point_values(
    method: Method,
    gpd: &GpdParams,
    sample: &ExcessSample,
    req: Option<&QuantileRequest>,
    args: &FitArgs,
) -> FitRow {
    let mut notes = Vec::new();
    let return_level = args
        .return_period
        .and_then(|n| match return_level_point(gpd, sample, n) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(e.to_string());
                None
            }
        });
    let premium = if sample.years().is_some() {
        match net_premium_point(gpd, sample) {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(e.to_string());
                None
            }
        }
    } else {
        None
    };
    FitRow {
        method,
        converged: true,
        gamma: Some(gpd.gamma()),
        sigma: Some(gpd.sigma()),
        quantile: req.map(|r| pot_quantile_fit(gpd, r)),
        return_level,
        premium,
        note: (!notes.is_empty()).then(|| notes.join("; ")),
    }
}

fn prior_for(args: &FitArgs, sample: &ExcessSample) -> Result<(DamslethHyper, String)> {
    match &args.expert_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let hyper = ExpertOpinion::parse(&text)?.hyperparameters(sample)?;
            Ok((hyper, format!("expert:{}", path.display())))
        }
        None => Ok((empirical_hyperparameters(sample)?, "empirical".into())),
    }
}

fn bayes_fit(
    args: &FitArgs,
    sample: &ExcessSample,
    req: Option<&QuantileRequest>,
    convention: InfinitePremium,
) -> Result<(FitRow, BayesReport)> {
    let (hyper, source) = prior_for(args, sample)?;
    let mut cfg = ChainConfig::new(hyper, args.seed);
    cfg.total_iterations = args.iterations;
    cfg.burn_in = args.burn_in;
    cfg.allow_low_delta = args.allow_low_delta;
    let chain = run_chain_on(sample, &cfg)?;

    let level = args.level;
    let gamma = summarize(&chain.gammas(), level)?;
    let sigma = summarize(&chain.sigmas(), level)?;
    let quantile = req
        .map(|r| summarize(&posterior_quantile_draws(&chain, r)?, level))
        .transpose()?;
    let rl = args
        .return_period
        .map(|n| return_level(&chain, sample, n, level))
        .transpose()?;
    let premium = if sample.years().is_some() {
        Some(net_premium_with(&chain, sample, level, convention)?)
    } else {
        None
    };
    let row = FitRow {
        method: Method::BayesQC,
        converged: true,
        gamma: Some(gamma.median),
        sigma: Some(sigma.median),
        quantile: quantile.map(|s| s.median),
        return_level: rl.map(|s| s.median),
        premium: premium.map(|s| s.median),
        note: None,
    };
    let report = BayesReport {
        prior: PriorInfo {
            source,
            delta: hyper.delta(),
            eta: hyper.eta(),
            mu: hyper.mu(),
        },
        retained: chain.len(),
        acceptance_rate: chain.acceptance_rate,
        gamma,
        sigma,
        quantile,
        return_level: rl,
        premium,
    };
    Ok((row, report))
}

fn exp_bayes_fit(
    args: &FitArgs,
    sample: &ExcessSample,
    req: Option<&QuantileRequest>,
) -> Result<(FitRow, ExpBayesReport)> {
    let ab = args.exp_prior.as_deref().unwrap_or_default();
    let [a, b] = ab else {
        return Err(CliError::usage(format!(
            "--exp-prior takes two numbers a,b, got {}",
            ab.len()
        )));
    };
    let shape = a + sample.k() as f64;
    let rate = b + sample.sum();
    // plug-in exponential fit with scale (b + S)/(a + k)
    let gpd = GpdParams::new(0.0, rate / shape)?;
    let mut row = point_values(Method::ExpBayes, &gpd, sample, None, args);
    let (mut q_bayes, mut q_post, mut q_pred) = (None, None, None);
    if let Some(r) = req {
        let q = exp_bayes_quantiles(sample, *a, *b, r.p)?;
        (q_bayes, q_post, q_pred) = (Some(q.q_bayes), Some(q.q_post), Some(q.q_pred));
        row.quantile = q_bayes;
    }
    let report = ExpBayesReport {
        a: *a,
        b: *b,
        posterior_shape: shape,
        posterior_rate: rate,
        q_bayes,
        q_post,
        q_pred,
    };
    Ok((row, report))
}

pub fn run_fit(args: &FitArgs) -> Result<RunReport> {
    let (sample, source) = load_sample(args)?;
    let methods = requested_methods(args)?;
    let convention: InfinitePremium = args.premium_infinite.parse()?;
    if args.premium && sample.years().is_none() {
        return Err(CliError::usage("--premium needs --years for a raw input file"));
    }
    if let Some(n) = args.return_period {
        return_period_probability(&sample, n)?;
    }
    let req = args
        .quantile_p
        .map(|p| QuantileRequest::for_sample(&sample, p))
        .transpose()?;

    let mut fits = Vec::new();
    let mut bayes = None;
    let mut exp_bayes = None;
    for &m in &methods {
        let row = match m {
            Method::BayesQC => {
                let (row, rep) = bayes_fit(args, &sample, req.as_ref(), convention)?;
                bayes = Some(rep);
                row
            }
            Method::ExpBayes => {
                let (row, rep) = exp_bayes_fit(args, &sample, req.as_ref())?;
                exp_bayes = Some(rep);
                row
            }
            Method::Ml => point_row(ml_gpd_fit(&sample), &sample, req.as_ref(), args),
            Method::Pwm => point_row(pwm_gpd_fit(&sample), &sample, req.as_ref(), args),
            Method::Mti => point_row(mti_fit(&sample), &sample, req.as_ref(), args),
            Method::ZipfG => point_row(zipf_g_fit(&sample), &sample, req.as_ref(), args),
            Method::Hill => point_row(hill_fit(&sample), &sample, req.as_ref(), args),
        };
        fits.push(row);
    }

    let generated_unix = (!args.no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        tool: format!("gpdbayes {}", env!("CARGO_PKG_VERSION")),
        generated_unix,
        data: DataInfo {
            source,
            n: sample.n(),
            k: sample.k(),
            threshold: sample.threshold(),
            excess_sum: sample.sum(),
            years: sample.years(),
            rate: sample.rate().ok(),
        },
        settings: Settings {
            level: args.level,
            quantile_p: args.quantile_p,
            return_period: args.return_period,
            premium_infinite: convention,
            iterations: args.iterations,
            burn_in: args.burn_in,
            seed: args.seed,
        },
        fits,
        bayes,
        exp_bayes,
    })
}
