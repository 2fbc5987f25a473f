//! `validate`: schema and invariant checks over an existing dataset.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use phonoskel::docs::{read_phono, read_sample3d, SampleIndex};
use phonoskel::fuse::shoulder_width;
use phonoskel::model::RoleTable;
use rayon::prelude::*;

use crate::args::{Args, Command};
use crate::build_phono::read_index;
use crate::output::{read_text, CliError, Outcome};

/// Shoulder width after a round trip through six-decimal documents.
const WIDTH_TOLERANCE: f64 = 1e-5;

fn index_problems(dir: &Path, index: &SampleIndex) -> Vec<String> {
    let mut problems = Vec::new();
    let mut ids = HashSet::new();
    let mut files = HashSet::new();
    for e in &index.samples {
        if !ids.insert(e.id.as_str()) {
            problems.push(format!("{}: listed twice", e.id));
        }
        files.insert(dir.join(&e.file));
    }
    if let Ok(listing) = std::fs::read_dir(dir.join("samples")) {
        let mut extra: Vec<String> = listing
            .flatten()
            .map(|f| f.path())
            .filter(|p| !files.contains(p))
            .map(|p| format!("{}: not listed in index", p.display()))
            .collect();
        extra.sort();
        problems.extend(extra);
    }
    problems
}

fn check_3d(dir: &Path, index: &SampleIndex) -> Vec<String> {
    let roles = RoleTable::default();
    let mut problems = index_problems(dir, index);
    let per_sample: Vec<Vec<String>> = index
        .samples
        .par_iter()
        .map(|e| {
            let mut p = Vec::new();
            let doc = match read_text(&dir.join(&e.file)) {
                Err(_) => return vec![format!("{}: unreadable", e.id)],
                Ok(text) => match read_sample3d(&text, &roles) {
                    Err(err) => return vec![format!("{}: {err}", e.id)],
                    Ok(doc) => doc,
                },
            };
            let s = &doc.sample;
            if s.meta.sample_id() != e.id || s.meta.label != e.label || s.frames.len() != e.frames {
                p.push(format!("{}: document disagrees with index", e.id));
            }
            for (frame, fallback) in s.frames.iter().zip(&doc.median_fallback) {
                if *fallback {
                    continue;
                }
                match shoulder_width(frame) {
                    Ok(w) if (w - 1.0).abs() <= WIDTH_TOLERANCE => {}
                    Ok(w) => p.push(format!(
                        "{}: frame {} shoulder width {w}",
                        e.id, frame.frame_index
                    )),
                    Err(err) => p.push(format!("{}: frame {}: {err}", e.id, frame.frame_index)),
                }
            }
            p
        })
        .collect();
    problems.extend(per_sample.into_iter().flatten());
    problems
}

fn check_phono(
    dir: &Path,
    index: &SampleIndex,
    frames_3d: Option<&HashMap<String, usize>>,
) -> Vec<String> {
    let mut problems = index_problems(dir, index);
    let per_sample: Vec<Vec<String>> = index
        .samples
        .par_iter()
        .map(|e| {
            let sample = match read_text(&dir.join(&e.file)) {
                Err(_) => return vec![format!("{}: unreadable", e.id)],
                Ok(text) => match read_phono(&text) {
                    Err(err) => return vec![format!("{}: {err}", e.id)],
                    Ok(s) => s,
                },
            };
            let mut p = Vec::new();
            if sample.meta.sample_id() != e.id
                || sample.meta.label != e.label
                || sample.frames.len() != e.frames
            {
                p.push(format!("{}: document disagrees with index", e.id));
            }
            if let Some(frames) = frames_3d {
                match frames.get(&e.id) {
                    Some(&n) if n == sample.frames.len() => {}
                    Some(&n) => p.push(format!(
                        "{}: {} frames but the 3D sample has {n}",
                        e.id,
                        sample.frames.len()
                    )),
                    None => p.push(format!("{}: no 3D sample", e.id)),
                }
            }
            p
        })
        .collect();
    problems.extend(per_sample.into_iter().flatten());
    problems
}

pub fn run(args: &Args) -> Result<Outcome, CliError> {
    let (dir_3d, dir_phono) = (args.out_dir().join("3d"), args.out_dir().join("phono"));
    let has = |d: &Path| d.join("index.json").is_file();
    if !has(&dir_3d) && !has(&dir_phono) {
        return Err(CliError::data(
            "NothingToValidate",
            format!("no dataset index under {}", args.out_dir().display()),
        ));
    }
    let mut outcome = Outcome::new(Command::Validate);
    let mut problems = Vec::new();
    let mut frames_3d = None;
    if has(&dir_3d) {
        let index = read_index(&dir_3d, "Missing3dDataset")?;
        problems.extend(check_3d(&dir_3d, &index));
        outcome = outcome.count("samples_3d", index.samples.len());
        frames_3d = Some(
            index
                .samples
                .iter()
                .map(|e| (e.id.clone(), e.frames))
                .collect::<HashMap<_, _>>(),
        );
    }
    if has(&dir_phono) {
        let index = read_index(&dir_phono, "MissingPhonoDataset")?;
        problems.extend(check_phono(&dir_phono, &index, frames_3d.as_ref()));
        outcome = outcome.count("samples_phono", index.samples.len());
    }
    if !problems.is_empty() {
        return Err(CliError::data(
            "InvalidDataset",
            format!("{} problems found", problems.len()),
        )
        .with_details(problems));
    }
    Ok(outcome.count("problems", 0))
}
