//! Command-line front end: `fit`, `bench` and `simulate`.

pub mod args;
pub mod bench_cmd;
pub mod error;
pub mod fit;
pub mod input;
pub mod report;

use std::io::Write as _;
use std::path::Path;

use gpdbayes::{RngStream, TestDistribution};

pub use args::{Cli, Command};
pub use error::{CliError, Result};

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Fit(args) => {
            let report = fit::run_fit(&args)?;
            let text = if args.json {
                let mut s = serde_json::to_string_pretty(&report)?;
                s.push('\n');
                s
            } else {
                report::render_text(&report)
            };
            emit(&text, args.output.as_deref())
        }
        Command::Bench(args) => {
            let summary = bench_cmd::run_bench_command(&args)?;
            emit(&summary, None)
        }
        Command::Simulate(args) => {
            let dist: TestDistribution = args.dist.parse()?;
            if args.n == 0 {
                return Err(CliError::usage("--n must be positive"));
            }
            let mut rng = RngStream::new(args.seed, 0);
            let values = dist.sample_n(args.n, &mut rng);
            emit(&input::format_values(&values), args.output.as_deref())
        }
    }
}
