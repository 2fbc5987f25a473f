//! `phonoskel`: builds 3D skeleton and phonological datasets from dual-view
//! pose keypoints, reports statistics, validates datasets and generates
//! synthetic corpora.

mod args;
mod build3d;
mod build_phono;
mod output;
mod stats;
mod synth;
mod validate;

use std::process::ExitCode;

use clap::Parser;

use args::{Args, Command};
use output::{CliError, Outcome, RunSummary};

fn run(args: &Args) -> Result<Outcome, CliError> {
    args.check()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs())
        .build()
        .map_err(|e| CliError::data("ThreadPool", e.to_string()))?;
    pool.install(|| match args.command {
        Command::Build3d => build3d::run(args),
        Command::BuildPhono => build_phono::run(args),
        Command::Stats => stats::run(args),
        Command::Validate => validate::run(args),
        Command::Synth => synth::run(args),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PHONOSKEL_LOG", "warn")).init();
    let args = Args::parse();
    let result = run(&args);
    let summary = RunSummary::new(&args, &result);
    if let Some(out_dir) = &args.out_dir {
        if let Err(e) = summary.write(out_dir) {
            log::warn!("could not write run summary: {e}");
        }
    }
    match result {
        Ok(outcome) => {
            outcome.print();
            ExitCode::SUCCESS
        }
        Err(e) => {
            e.print();
            ExitCode::from(e.exit_code())
        }
    }
}
