//! `build-3d`: pose documents + annotations -> normalized 3D samples.

use std::collections::{HashMap, HashSet};
use std::fs;

use phonoskel::docs::{write_sample3d, IndexEntry, SampleIndex};
use phonoskel::ingest::{load_annotations, load_view, AnnotationRecord, HandshapeCatalog, View};
use phonoskel::model::RoleTable;
use phonoskel::pipeline::{build_sample3d, PipelineConfig};
use rayon::prelude::*;

use crate::args::{Args, Command};
use crate::output::{fresh_dir, write_json, write_text, CliError, Outcome, Skip, SkipReport};

type Built = (usize, Result<IndexEntry, Skip>);

struct Job<'a> {
    args: &'a Args,
    cfg: PipelineConfig,
    roles: RoleTable,
    samples_dir: std::path::PathBuf,
}

impl Job<'_> {
    fn video(&self, key: &str, records: &[(usize, &AnnotationRecord)]) -> Vec<Built> {
        let views =
            load_view(self.args.front_dir(), key, View::Frontal, &self.roles).and_then(|f| {
                Ok((
                    f,
                    load_view(self.args.side_dir(), key, View::Side, &self.roles)?,
                ))
            });
        let (frontal, side) = match views {
            Ok(v) => v,
            Err(e) => {
                return records
                    .iter()
                    .map(|(i, r)| {
                        (
                            *i,
                            Err(Skip::sample(&r.meta.sample_id(), e.kind(), e.to_string())),
                        )
                    })
                    .collect()
            }
        };
        records
            .iter()
            .map(|&(i, rec)| (i, self.sample(&frontal, &side, rec)))
            .collect()
    }

    fn sample(
        &self,
        frontal: &[phonoskel::ingest::ViewFrame2D],
        side: &[phonoskel::ingest::ViewFrame2D],
        rec: &AnnotationRecord,
    ) -> Result<IndexEntry, Skip> {
        let id = rec.meta.sample_id();
        let built = build_sample3d(frontal, side, &rec.meta, &self.cfg)
            .map_err(|e| Skip::sample(&id, e.kind(), e.to_string()))?;
        let file = format!("samples/{id}.json");
        let text = write_sample3d(&built.sample, &built.widths, &self.roles);
        fs::write(self.samples_dir.join(format!("{id}.json")), text)
            .map_err(|e| Skip::sample(&id, "Io", e.to_string()))?;
        Ok(IndexEntry {
            id,
            label: rec.meta.label.clone(),
            frames: built.sample.frames.len(),
            file,
        })
    }
}

pub fn run(args: &Args) -> Result<Outcome, CliError> {
    let catalog = load_annotations(args.annotations(), &HandshapeCatalog::default())
        .map_err(|e| CliError::data(e.kind(), e.to_string()))?;
    let root = fresh_dir(&args.out_dir().join("3d"))?;
    let job = Job {
        args,
        cfg: args.pipeline(),
        roles: RoleTable::default(),
        samples_dir: fresh_dir(&root.join("samples"))?,
    };

    let mut skipped: Vec<Skip> = catalog
        .skipped
        .iter()
        .map(|row| Skip {
            id: None,
            line: Some(row.line),
            kind: "UnknownHandshape".into(),
            detail: row.reason.clone(),
        })
        .collect();

    let mut seen = HashSet::new();
    let mut duplicates = Vec::new();
    let mut videos: Vec<(String, Vec<(usize, &AnnotationRecord)>)> = Vec::new();
    let mut video_slot: HashMap<String, usize> = HashMap::new();
    for (i, rec) in catalog.records.iter().enumerate() {
        let id = rec.meta.sample_id();
        if !seen.insert(id.clone()) {
            duplicates.push((
                i,
                Err(Skip::sample(
                    &id,
                    "DuplicateSample",
                    "repeated annotation row",
                )),
            ));
            continue;
        }
        let key = rec.meta.video_key();
        let slot = *video_slot.entry(key.clone()).or_insert_with(|| {
            videos.push((key, Vec::new()));
            videos.len() - 1
        });
        videos[slot].1.push((i, rec));
    }

    let mut results: Vec<Built> = videos
        .par_iter()
        .map(|(key, records)| job.video(key, records))
        .flatten()
        .collect();
    results.extend(duplicates);
    results.sort_by_key(|(i, _)| *i);

    let mut index = SampleIndex::default();
    for (_, r) in results {
        match r {
            Ok(entry) => index.samples.push(entry),
            Err(skip) => {
                log::warn!(
                    "skipped {}: {}",
                    skip.id.as_deref().unwrap_or("?"),
                    skip.detail
                );
                skipped.push(skip);
            }
        }
    }
    write_text(&root.join("index.json"), &index.to_json())?;
    let total = catalog.records.len() + catalog.skipped.len();
    let built = index.samples.len();
    write_json(
        &root.join("skipped.json"),
        &SkipReport {
            total,
            built,
            skipped: &skipped,
        },
    )?;

    if built == 0 {
        let details = skipped
            .iter()
            .map(|s| format!("{}: {}", s.kind, s.detail))
            .collect();
        return Err(CliError::data(
            "NoSamplesBuilt",
            format!("none of {total} annotated samples could be built"),
        )
        .with_details(details));
    }
    let mut outcome = Outcome::new(Command::Build3d)
        .count("annotations", total)
        .count("built", built)
        .count("skipped", skipped.len());
    outcome.skipped = skipped;
    Ok(outcome)
}
