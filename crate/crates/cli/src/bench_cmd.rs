use std::fmt::Write as _;

use gpdbayes::bench::{emit_figure_data, run_bench, BenchDesign, BenchProfile, BenchReport, Figure};
use gpdbayes::TestDistribution;

use crate::args::BenchArgs;
use crate::error::{CliError, Result};

pub fn design_for(args: &BenchArgs, dist: TestDistribution) -> Result<BenchDesign> {
    let profile: BenchProfile = args.profile.parse()?;
    let mut d = BenchDesign::new(dist, profile, args.seed);
    if let Some(v) = args.replications {
        d.replications = v;
    }
    if let Some(v) = args.n {
        d.n = v;
    }
    if let Some(v) = &args.k_grid {
        d.k_grid = v.clone();
    }
    if let Some(v) = args.iterations {
        d.total_iterations = v;
    }
    if let Some(v) = args.burn_in {
        d.burn_in = v;
    }
    if let Some(v) = args.p {
        d.p = v;
    }
    if let Some(v) = args.level {
        d.level = v;
    }
    d.validate()?;
    Ok(d)
}

pub fn distributions(name: &str) -> Result<Vec<TestDistribution>> {
    if name.eq_ignore_ascii_case("all") {
        Ok(TestDistribution::ALL.to_vec())
    } else {
        Ok(vec![name.parse()?])
    }
}

fn coverage_table(r: &BenchReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}: true gamma {}, true quantile {:.4}, {} replications, n = {}",
        r.design.distribution, r.true_gamma, r.true_quantile, r.design.replications, r.design.n
    );
    let _ = writeln!(out, "{:>6}{:>16}{:>16}", "k", "coverage_gamma", "coverage_q");
    for c in &r.coverage {
        let _ = writeln!(
            out,
            "{:>6}{:>16.3}{:>16.3}",
            c.k,
            c.coverage_gamma(),
            c.coverage_q()
        );
    }
    out
}

/// Runs the study and writes one table per figure plus the JSON report.
/// Returns a short coverage summary.
pub fn run_bench_command(args: &BenchArgs) -> Result<String> {
    std::fs::create_dir_all(&args.out_dir).map_err(|e| CliError::io(&args.out_dir, e))?;
    let mut summary = String::new();
    for dist in distributions(&args.dist)? {
        let design = design_for(args, dist)?;
        let report = run_bench(&design)?;
        for fig in Figure::ALL {
            let path = args.out_dir.join(format!("{dist}_{fig}.tsv"));
            std::fs::write(&path, emit_figure_data(&report, fig)).map_err(|e| CliError::io(&path, e))?;
        }
        let path = args.out_dir.join(format!("{dist}_report.json"));
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(&path, json).map_err(|e| CliError::io(&path, e))?;
        summary.push_str(&coverage_table(&report));
    }
    Ok(summary)
}
