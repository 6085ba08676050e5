//! Fit report. The JSON form is the machine-readable variant and is
//! byte-stable for a fixed seed once the timestamp is omitted. Infinite
//! values serialize as `null`.

use std::fmt::Write as _;

use gpdbayes::pot::{InfinitePremium, PosteriorSummary};
use gpdbayes::Method;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool: String,
    /// Seconds since the Unix epoch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_unix: Option<u64>,
    pub data: DataInfo,
    pub settings: Settings,
    pub fits: Vec<FitRow>,
    pub bayes: Option<BayesReport>,
    pub exp_bayes: Option<ExpBayesReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataInfo {
    pub source: String,
    pub n: usize,
    pub k: usize,
    pub threshold: f64,
    pub excess_sum: f64,
    pub years: Option<f64>,
    pub rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub level: f64,
    pub quantile_p: Option<f64>,
    pub return_period: Option<f64>,
    pub premium_infinite: InfinitePremium,
    pub iterations: usize,
    pub burn_in: usize,
    pub seed: u64,
}

/// Point estimates of one method. Bayes rows hold posterior medians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub method: Method,
    pub converged: bool,
    pub gamma: Option<f64>,
    pub sigma: Option<f64>,
    pub quantile: Option<f64>,
    pub return_level: Option<f64>,
    pub premium: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl FitRow {
    pub fn failed(method: Method, note: impl Into<String>) -> Self {
        Self {
            method,
            converged: false,
            gamma: None,
            sigma: None,
            quantile: None,
            return_level: None,
            premium: None,
            note: Some(note.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriorInfo {
    /// `empirical` or `expert:<file>`.
    pub source: String,
    pub delta: f64,
    pub eta: f64,
    pub mu: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BayesReport {
    pub prior: PriorInfo,
    pub retained: usize,
    pub acceptance_rate: f64,
    pub gamma: PosteriorSummary,
    pub sigma: PosteriorSummary,
    pub quantile: Option<PosteriorSummary>,
    pub return_level: Option<PosteriorSummary>,
    pub premium: Option<PosteriorSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpBayesReport {
    pub a: f64,
    pub b: f64,
    pub posterior_shape: f64,
    pub posterior_rate: f64,
    pub q_bayes: Option<f64>,
    pub q_post: Option<f64>,
    pub q_pred: Option<f64>,
}

fn num(v: Option<f64>) -> String {
    match v {
        None => "NA".into(),
        Some(x) if x.is_infinite() => "inf".into(),
        Some(x) => format!("{x:.6}"),
    }
}

fn summary_line(out: &mut String, name: &str, s: &PosteriorSummary) {
    let _ = write!(
        out,
        "{name:<14}{:>14}{:>14}{:>14}{:>14}",
        num(Some(s.median)),
        num(Some(s.mean)),
        num(Some(s.ci_lo)),
        num(Some(s.ci_hi))
    );
    if s.infinite_fraction > 0.0 {
        let _ = write!(out, "   ({:.1}% of draws infinite)", 100.0 * s.infinite_fraction);
    }
    out.push('\n');
}

/// Human-readable key-value header followed by tables.
pub fn render_text(r: &RunReport) -> String {
    let mut out = String::new();
    let kv = |out: &mut String, k: &str, v: String| {
        let _ = writeln!(out, "{k:<16}{v}");
    };
    kv(&mut out, "schema_version", r.schema_version.to_string());
    kv(&mut out, "tool", r.tool.clone());
    if let Some(t) = r.generated_unix {
        kv(&mut out, "generated_unix", t.to_string());
    }
    kv(&mut out, "source", r.data.source.clone());
    kv(&mut out, "n", r.data.n.to_string());
    kv(&mut out, "k", r.data.k.to_string());
    kv(&mut out, "threshold", r.data.threshold.to_string());
    kv(&mut out, "excess_sum", num(Some(r.data.excess_sum)));
    kv(&mut out, "years", num(r.data.years));
    kv(&mut out, "rate", num(r.data.rate));
    kv(&mut out, "level", r.settings.level.to_string());
    kv(&mut out, "quantile_p", num(r.settings.quantile_p));
    kv(&mut out, "return_period", num(r.settings.return_period));
    kv(&mut out, "seed", r.settings.seed.to_string());
    kv(
        &mut out,
        "iterations",
        format!("{} (burn-in {})", r.settings.iterations, r.settings.burn_in),
    );

    out.push('\n');
    let _ = writeln!(
        out,
        "{:<10}{:>14}{:>14}{:>14}{:>14}{:>14}",
        "method", "gamma", "sigma", "quantile", "return_level", "premium"
    );
    for f in &r.fits {
        let _ = write!(
            out,
            "{:<10}{:>14}{:>14}{:>14}{:>14}{:>14}",
            f.method.name(),
            num(f.gamma),
            num(f.sigma),
            num(f.quantile),
            num(f.return_level),
            num(f.premium)
        );
        if let Some(note) = &f.note {
            let _ = write!(out, "   {note}");
        }
        out.push('\n');
    }

    if let Some(b) = &r.bayes {
        out.push('\n');
        let _ = writeln!(
            out,
            "BayesQC posterior, prior {} (delta {}, eta {}, mu {}), {} draws, acceptance {:.3}",
            b.prior.source,
            num(Some(b.prior.delta)),
            num(Some(b.prior.eta)),
            num(Some(b.prior.mu)),
            b.retained,
            b.acceptance_rate
        );
        let _ = writeln!(
            out,
            "{:<14}{:>14}{:>14}{:>14}{:>14}",
            "quantity", "median", "mean", "ci_lo", "ci_hi"
        );
        summary_line(&mut out, "gamma", &b.gamma);
        summary_line(&mut out, "sigma", &b.sigma);
        if let Some(s) = &b.quantile {
            summary_line(&mut out, "quantile", s);
        }
        if let Some(s) = &b.return_level {
            summary_line(&mut out, "return_level", s);
        }
        if let Some(s) = &b.premium {
            summary_line(&mut out, "premium", s);
        }
    }

    if let Some(e) = &r.exp_bayes {
        out.push('\n');
        let _ = writeln!(
            out,
            "ExpBayes, prior Gamma({}, {}), posterior Gamma({}, {})",
            e.a,
            e.b,
            num(Some(e.posterior_shape)),
            num(Some(e.posterior_rate))
        );
        let _ = writeln!(out, "{:<16}{}", "q_bayes", num(e.q_bayes));
        let _ = writeln!(out, "{:<16}{}", "q_post", num(e.q_post));
        let _ = writeln!(out, "{:<16}{}", "q_pred", num(e.q_pred));
    }
    out
}
