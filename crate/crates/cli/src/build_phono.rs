//! `build-phono`: 3D samples + annotations -> phonological samples.

use std::collections::HashMap;
use std::path::Path;

use phonoskel::docs::{read_sample3d, write_phono, IndexEntry, SampleIndex};
use phonoskel::ingest::{load_annotations, AnnotationRecord, HandshapeCatalog};
use phonoskel::model::RoleTable;
use phonoskel::pipeline::{build_phono, PipelineConfig};
use rayon::prelude::*;

use crate::args::{Args, Command};
use crate::output::{
    fresh_dir, read_text, write_json, write_text, CliError, Outcome, Skip, SkipReport,
};

pub fn read_index(dir: &Path, missing_kind: &str) -> Result<SampleIndex, CliError> {
    let path = dir.join("index.json");
    if !path.is_file() {
        return Err(CliError::data(
            missing_kind,
            format!("{} not found", path.display()),
        ));
    }
    SampleIndex::from_json(&read_text(&path)?)
        .map_err(|e| CliError::data("MalformedDocument", format!("{}: {e}", path.display())))
}

fn one(
    entry: &IndexEntry,
    src: &Path,
    dst: &Path,
    annotations: &HashMap<String, &AnnotationRecord>,
    roles: &RoleTable,
    cfg: &PipelineConfig,
) -> Result<IndexEntry, Skip> {
    let skip = |kind: &str, detail: String| Skip::sample(&entry.id, kind, detail);
    let text =
        std::fs::read_to_string(src.join(&entry.file)).map_err(|e| skip("Io", e.to_string()))?;
    let doc = read_sample3d(&text, roles).map_err(|e| skip("MalformedDocument", e.to_string()))?;
    if doc.sample.meta.sample_id() != entry.id {
        return Err(skip(
            "IndexMismatch",
            format!("document holds {}", doc.sample.meta.sample_id()),
        ));
    }
    let rec = annotations.get(&entry.id).ok_or_else(|| {
        skip(
            "MissingAnnotation",
            "no annotation row for this sample".into(),
        )
    })?;
    let phono = build_phono(&doc.sample, rec, cfg).map_err(|e| skip(e.kind(), e.to_string()))?;
    std::fs::write(dst.join(format!("{}.json", entry.id)), write_phono(&phono))
        .map_err(|e| skip("Io", e.to_string()))?;
    Ok(IndexEntry {
        id: entry.id.clone(),
        label: phono.meta.label.clone(),
        frames: phono.frames.len(),
        file: format!("samples/{}.json", entry.id),
    })
}

pub fn run(args: &Args) -> Result<Outcome, CliError> {
    let src = args.out_dir().join("3d");
    let index = read_index(&src, "Missing3dDataset")?;
    let catalog = load_annotations(args.annotations(), &HandshapeCatalog::default())
        .map_err(|e| CliError::data(e.kind(), e.to_string()))?;
    let mut annotations = HashMap::new();
    for rec in &catalog.records {
        annotations.entry(rec.meta.sample_id()).or_insert(rec);
    }
    let root = fresh_dir(&args.out_dir().join("phono"))?;
    let dst = fresh_dir(&root.join("samples"))?;
    let roles = RoleTable::default();
    let cfg = args.pipeline();

    let results: Vec<Result<IndexEntry, Skip>> = index
        .samples
        .par_iter()
        .map(|e| one(e, &src, &dst, &annotations, &roles, &cfg))
        .collect();
    let mut out = SampleIndex::default();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(e) => out.samples.push(e),
            Err(s) => {
                log::warn!("skipped {}: {}", s.id.as_deref().unwrap_or("?"), s.detail);
                skipped.push(s);
            }
        }
    }
    write_text(&root.join("index.json"), &out.to_json())?;
    let total = index.samples.len();
    let built = out.samples.len();
    write_json(
        &root.join("skipped.json"),
        &SkipReport {
            total,
            built,
            skipped: &skipped,
        },
    )?;
    if built == 0 && total > 0 {
        let details = skipped
            .iter()
            .map(|s| format!("{}: {}", s.kind, s.detail))
            .collect();
        return Err(CliError::data(
            "NoSamplesBuilt",
            format!("none of {total} samples could be processed"),
        )
        .with_details(details));
    }
    let mut outcome = Outcome::new(Command::BuildPhono)
        .count("samples_3d", total)
        .count("built", built)
        .count("skipped", skipped.len());
    outcome.skipped = skipped;
    Ok(outcome)
}
