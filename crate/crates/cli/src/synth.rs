//! `synth`: synthetic corpus with the attributes the pipeline must recover.

use phonoskel::docs::{write_phono, IndexEntry, SampleIndex};
use phonoskel::ingest::write_annotations;
use phonoskel::ingest::write_video_document;
use phonoskel::model::RoleTable;
use phonoskel::synth::generate_corpus;
use rayon::prelude::*;

use crate::args::{Args, Command};
use crate::output::{fresh_dir, write_text, CliError, Outcome};

pub fn run(args: &Args) -> Result<Outcome, CliError> {
    let corpus = generate_corpus(&args.script_params(), args.seed, args.samples)
        .map_err(|e| CliError::data("InfeasibleScript", e.to_string()))?;
    let out = args.out_dir();
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let front = fresh_dir(&out.join("front"))?;
    let side = fresh_dir(&out.join("side"))?;
    let expected = fresh_dir(&out.join("expected"))?;
    let samples = fresh_dir(&expected.join("samples"))?;
    let roles = RoleTable::default();

    corpus.videos.par_iter().try_for_each(|v| {
        let name = format!("{}.json", v.key());
        write_text(
            &front.join(&name),
            &write_video_document(&v.frontal, &roles),
        )?;
        write_text(&side.join(&name), &write_video_document(&v.side, &roles))
    })?;
    corpus.expected.par_iter().try_for_each(|s| {
        write_text(
            &samples.join(format!("{}.json", s.meta.sample_id())),
            &write_phono(s),
        )
    })?;
    let index = SampleIndex {
        samples: corpus
            .expected
            .iter()
            .map(|s| {
                let id = s.meta.sample_id();
                IndexEntry {
                    file: format!("samples/{id}.json"),
                    label: s.meta.label.clone(),
                    frames: s.frames.len(),
                    id,
                }
            })
            .collect(),
    };
    write_text(&expected.join("index.json"), &index.to_json())?;
    write_text(
        &out.join("annotations.csv"),
        &write_annotations(&corpus.annotations),
    )?;

    Ok(Outcome::new(Command::Synth)
        .count("videos", corpus.videos.len())
        .count("samples", corpus.expected.len()))
}
