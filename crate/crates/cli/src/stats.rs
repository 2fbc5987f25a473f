//! `stats`: dataset report and attribute correlation matrix.

use phonoskel::docs::read_phono;
use phonoskel::model::PhonoSample;
use phonoskel::stats::{attribute_correlation, dataset_stats, StatsError};
use rayon::prelude::*;

use crate::args::{Args, Command};
use crate::build_phono::read_index;
use crate::output::{fresh_dir, read_text, write_text, CliError, Outcome};

fn empty() -> CliError {
    CliError::data("EmptyDataset", StatsError::EmptyDataset.to_string())
}

pub fn run(args: &Args) -> Result<Outcome, CliError> {
    let src = args.out_dir().join("phono");
    let index = read_index(&src, "EmptyDataset").map_err(|e| match e {
        CliError::Data { kind, .. } if kind == "EmptyDataset" => empty(),
        other => other,
    })?;
    let loaded: Vec<Result<PhonoSample, String>> = index
        .samples
        .par_iter()
        .map(|e| {
            let text =
                read_text(&src.join(&e.file)).map_err(|_| format!("{}: unreadable", e.file))?;
            read_phono(&text).map_err(|err| format!("{}: {err}", e.file))
        })
        .collect();
    let problems: Vec<String> = loaded
        .iter()
        .filter_map(|r| r.as_ref().err().cloned())
        .collect();
    if !problems.is_empty() {
        return Err(CliError::data(
            "MalformedDocument",
            format!("{} unreadable samples", problems.len()),
        )
        .with_details(problems));
    }
    let samples: Vec<PhonoSample> = loaded.into_iter().flatten().collect();
    let report = dataset_stats(&samples).map_err(|_| empty())?;

    let root = fresh_dir(&args.out_dir().join("stats"))?;
    write_text(&root.join("report.json"), &report.to_json())?;
    write_text(&root.join("report.csv"), &report.to_csv())?;
    let mut outcome = Outcome::new(Command::Stats)
        .count("samples", report.overall.samples)
        .count("labels", report.overall.labels)
        .count("frames", report.overall.frames);
    match attribute_correlation(&samples, args.bins) {
        Ok(m) => {
            write_text(&root.join("correlation.csv"), &m.to_csv())?;
            write_text(&root.join("correlation_long.csv"), &m.to_long_csv())?;
            outcome = outcome.count("correlation_attributes", m.attributes.len());
        }
        Err(e) => log::warn!("correlation matrix not written: {e}"),
    }
    Ok(outcome)
}
