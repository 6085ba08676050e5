mod oracles;

use gpdbayes::bench::{emit_figure_data, run_bench, BenchDesign, BenchProfile, Figure, BENCH_METHODS};
use gpdbayes::distributions::GpdParams;
use gpdbayes::estimators::{ExcessSample, Method};
use gpdbayes::gibbs::{run_chain_on, ChainConfig};
use gpdbayes::pot::{empirical_quantile, predictive_quantile};
use gpdbayes::prior::empirical_hyperparameters;
use gpdbayes::{RngStream, TestDistribution};
use oracles::gpd_from_uniform;

#[test]
fn predictive_quantile_matches_mixture_simulation() {
    // large k keeps the posterior tight, where the averaged quantile and the
    // quantile of the mixture coincide up to MC error
    let mut rng = RngStream::new(31, 0);
    let y: Vec<f64> = (0..3000)
        .map(|_| gpd_from_uniform(0.5, 2.0, rng.uniform()))
        .collect();
    // σ = γu makes u + Y exactly Pareto, so the Hill anchors are consistent
    let sample = ExcessSample::new(4.0, y, 30_000).unwrap();
    let chain = run_chain_on(
        &sample,
        &ChainConfig::new(empirical_hyperparameters(&sample).unwrap(), 5),
    )
    .unwrap();
    let prob = 0.95;
    let averaged = predictive_quantile(&chain, prob).unwrap();

    let m = 200_000;
    let mut sim: Vec<f64> = (0..m)
        .map(|_| {
            let i = ((rng.uniform() * chain.len() as f64) as usize).min(chain.len() - 1);
            let (a, b) = (chain.alphas[i], chain.betas[i]);
            gpd_from_uniform(1.0 / a, b / a, rng.uniform())
        })
        .collect();
    sim.sort_by(f64::total_cmp);
    let mixture = empirical_quantile(&sim, prob);
    assert!(
        (averaged - mixture).abs() / mixture < 0.02,
        "{averaged} vs {mixture}"
    );

    // a degenerate chain gives the GPD quantile itself
    let mut flat = chain.clone();
    flat.alphas.iter_mut().for_each(|a| *a = 2.0);
    flat.betas.iter_mut().for_each(|b| *b = 4.0);
    let exact = GpdParams::from_alpha_beta(2.0, 4.0)
        .unwrap()
        .quantile(prob)
        .unwrap();
    assert!((predictive_quantile(&flat, prob).unwrap() - exact).abs() < 1e-12);
}

fn small_design(k_grid: Vec<usize>) -> BenchDesign {
    let mut d = BenchDesign::new(TestDistribution::Frechet1, BenchProfile::Scaled, 99);
    d.n = 200;
    d.replications = 3;
    d.k_grid = k_grid;
    d.total_iterations = 200;
    d.burn_in = 100;
    d
}

#[test]
fn bench_is_deterministic() {
    let d = small_design(vec![20, 40]);
    let a = run_bench(&d).unwrap();
    let b = run_bench(&d).unwrap();
    assert_eq!(a, b);
    for fig in Figure::ALL {
        assert_eq!(emit_figure_data(&a, fig), emit_figure_data(&b, fig));
    }
}

#[test]
fn extending_the_k_grid_keeps_cells() {
    let a = run_bench(&small_design(vec![20, 40])).unwrap();
    let b = run_bench(&small_design(vec![20, 30, 40])).unwrap();
    for cell in &a.cells {
        let twin = b
            .cells
            .iter()
            .find(|c| c.k == cell.k && c.replication == cell.replication)
            .unwrap();
        assert_eq!(cell, twin);
    }
}

#[test]
fn figure_tables_have_fixed_columns() {
    let r = run_bench(&small_design(vec![20, 40])).unwrap();
    let header = |f| emit_figure_data(&r, f).lines().next().unwrap().to_string();
    assert_eq!(header(Figure::Coverage), "k\tcoverage_gamma\tcoverage_q");
    assert_eq!(
        header(Figure::Intervals),
        "k\tbayes_ci_lo\tbayes_ci_hi\tmcci_lo\tmcci_hi"
    );
    assert_eq!(
        header(Figure::McciWidth).split('\t').count(),
        1 + BENCH_METHODS.len()
    );
    assert_eq!(
        header(Figure::Means).split('\t').count(),
        1 + 2 * BENCH_METHODS.len()
    );
    for f in Figure::ALL {
        let table = emit_figure_data(&r, f);
        assert_eq!(table.lines().count(), 3);
        let width = table.lines().next().unwrap().split('\t').count();
        assert!(table.lines().all(|l| l.split('\t').count() == width));
    }
    for c in &r.coverage {
        assert!(c.covered_gamma <= c.replications && c.covered_q <= c.replications);
    }
    for row in &r.rows {
        if let Some((lo, hi)) = row.mcci_q {
            assert!(lo <= hi);
        }
    }
}

#[test]
fn scaled_frechet_coverage_and_precision() {
    let d = BenchDesign::new(TestDistribution::Frechet1, BenchProfile::Scaled, 2024);
    let r = run_bench(&d).unwrap();
    for &k in &[50, 100, 200] {
        let c = r.coverage_at(k).unwrap();
        assert!(
            c.coverage_gamma() >= 0.7,
            "k = {k}: gamma coverage {}",
            c.coverage_gamma()
        );
        assert!(c.coverage_q() >= 0.7, "k = {k}: q coverage {}", c.coverage_q());
    }
    let width = |k| {
        let (lo, hi) = r.row(k, Method::BayesQC).unwrap().mcci_gamma.unwrap();
        hi - lo
    };
    assert!(width(25) > width(200), "{} vs {}", width(25), width(200));
}
