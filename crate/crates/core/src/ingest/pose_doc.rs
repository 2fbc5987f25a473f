//! Pose documents in the upstream estimator's layout.
//!
//! Two shapes are accepted:
//!
//! * a per-frame document, `{"version": 1.3, "people": [{...}]}`, one file per
//!   frame named `<anything>_<frame number>_keypoints.json`;
//! * a per-video document, `{"frames": [{"frame": 0, "people": [{...}]}, ...]}`.
//!
//! Each person carries flat `[x, y, score, x, y, score, ...]` arrays under
//! `pose_keypoints_2d`, `face_keypoints_2d`, `hand_left_keypoints_2d` and
//! `hand_right_keypoints_2d`. Missing or empty arrays are zero-filled.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{IngestError, View, ViewFrame2D};
use crate::model::{Group, Groups, Keypoint2D, RoleTable};

#[derive(Debug, Default, Serialize, Deserialize)]
struct PersonDoc {
    #[serde(default)]
    pose_keypoints_2d: Vec<f64>,
    #[serde(default)]
    face_keypoints_2d: Vec<f64>,
    #[serde(default)]
    hand_left_keypoints_2d: Vec<f64>,
    #[serde(default)]
    hand_right_keypoints_2d: Vec<f64>,
}

impl PersonDoc {
    fn array(&self, group: Group) -> &[f64] {
        match group {
            Group::Body => &self.pose_keypoints_2d,
            Group::Face => &self.face_keypoints_2d,
            Group::LeftHand => &self.hand_left_keypoints_2d,
            Group::RightHand => &self.hand_right_keypoints_2d,
        }
    }

    fn array_mut(&mut self, group: Group) -> &mut Vec<f64> {
        match group {
            Group::Body => &mut self.pose_keypoints_2d,
            Group::Face => &mut self.face_keypoints_2d,
            Group::LeftHand => &mut self.hand_left_keypoints_2d,
            Group::RightHand => &mut self.hand_right_keypoints_2d,
        }
    }

    fn body_confidence(&self) -> f64 {
        self.pose_keypoints_2d.iter().skip(2).step_by(3).sum()
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FrameDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frame: Option<usize>,
    #[serde(default)]
    people: Vec<PersonDoc>,
}

#[derive(Debug, Deserialize)]
struct AnyDoc {
    #[serde(default)]
    frames: Option<Vec<FrameDoc>>,
    #[serde(default)]
    people: Option<Vec<PersonDoc>>,
}

#[derive(Serialize)]
struct VideoDocOut<'a> {
    frames: &'a [FrameDoc],
}

#[derive(Serialize)]
struct FrameDocOut<'a> {
    version: f64,
    people: &'a [PersonDoc],
}

fn malformed(msg: impl Into<String>) -> IngestError {
    IngestError::MalformedDocument(msg.into())
}

fn convert_group(
    array: &[f64],
    group: Group,
    roles: &RoleTable,
) -> Result<Vec<Keypoint2D>, IngestError> {
    if array.is_empty() {
        return Ok(vec![Keypoint2D::MISSING; group.size()]);
    }
    let expected = roles.source_len(group);
    if !array.len().is_multiple_of(3) || array.len() / 3 != expected {
        return Err(IngestError::WrongCardinality {
            group,
            found: array.len() / 3,
            expected,
        });
    }
    roles
        .source_indices(group)
        .iter()
        .map(|&src| {
            let (x, y, score) = (array[3 * src], array[3 * src + 1], array[3 * src + 2]);
            if !(x.is_finite() && y.is_finite() && score.is_finite()) {
                return Err(malformed(format!(
                    "non-finite value in {group} keypoint {src}"
                )));
            }
            let score = score.clamp(0.0, 1.0);
            Ok(if score == 0.0 {
                Keypoint2D::MISSING
            } else {
                Keypoint2D::new(x, y, score)
            })
        })
        .collect()
}

fn convert_frame(
    doc: &FrameDoc,
    view: View,
    frame_index: usize,
    roles: &RoleTable,
) -> Result<ViewFrame2D, IngestError> {
    // Several detections: keep the most confident body.
    let person = doc
        .people
        .iter()
        .enumerate()
        .max_by(|(ia, a), (ib, b)| {
            a.body_confidence()
                .total_cmp(&b.body_confidence())
                .then(ib.cmp(ia))
        })
        .map(|(_, p)| p);
    let keypoints = match person {
        None => Groups::filled(Keypoint2D::MISSING),
        Some(p) => {
            let [b, f, l, r] = Group::ALL;
            Groups::from_vecs([
                convert_group(p.array(b), b, roles)?,
                convert_group(p.array(f), f, roles)?,
                convert_group(p.array(l), l, roles)?,
                convert_group(p.array(r), r, roles)?,
            ])
            .expect("converted groups have role-table sizes")
        }
    };
    Ok(ViewFrame2D {
        view,
        frame_index,
        keypoints,
    })
}

/// Parses a per-frame or per-video pose document.
///
/// A per-frame document yields a single frame with index 0; per-video frames
/// take their `frame` field, or their array position when it is absent.
pub fn parse_view_frames<R: Read>(
    mut document: R,
    view: View,
    roles: &RoleTable,
) -> Result<Vec<ViewFrame2D>, IngestError> {
    let mut text = String::new();
    document
        .read_to_string(&mut text)
        .map_err(|e| malformed(e.to_string()))?;
    parse_text(&text, view, roles)
}

fn parse_text(text: &str, view: View, roles: &RoleTable) -> Result<Vec<ViewFrame2D>, IngestError> {
    let doc: AnyDoc = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    match (doc.frames, doc.people) {
        (Some(frames), _) => {
            let mut out = Vec::with_capacity(frames.len());
            for (pos, frame) in frames.iter().enumerate() {
                let index = frame.frame.unwrap_or(pos);
                if let Some(prev) = out.last().map(|f: &ViewFrame2D| f.frame_index) {
                    if index <= prev {
                        return Err(malformed(format!(
                            "frame numbers not increasing ({prev} then {index})"
                        )));
                    }
                }
                out.push(convert_frame(frame, view, index, roles)?);
            }
            Ok(out)
        }
        (None, Some(people)) => {
            let frame = FrameDoc {
                frame: None,
                people,
            };
            Ok(vec![convert_frame(&frame, view, 0, roles)?])
        }
        (None, None) => Err(malformed("document has neither `frames` nor `people`")),
    }
}

/// Trailing run of digits in a per-frame file stem, e.g. `clip_000000000042_keypoints`.
fn frame_number(stem: &str) -> Option<usize> {
    let stem = stem.strip_suffix("_keypoints").unwrap_or(stem);
    let digits: String = stem
        .chars()
        .rev()
        .take_while(|c| c.is_ascii_digit())
        .collect::<Vec<_>>()
        .into_iter()
        .rev()
        .collect();
    digits.parse().ok()
}

/// Loads the frames of video `key` from `dir`, either `dir/<key>.json`
/// (per-video document) or `dir/<key>/` (per-frame documents).
pub fn load_view(
    dir: &Path,
    key: &str,
    view: View,
    roles: &RoleTable,
) -> Result<Vec<ViewFrame2D>, IngestError> {
    let io = |path: &Path, source| IngestError::Io {
        path: path.display().to_string(),
        source,
    };
    let file = dir.join(format!("{key}.json"));
    if file.is_file() {
        let text = fs::read_to_string(&file).map_err(|e| io(&file, e))?;
        return parse_text(&text, view, roles).map_err(|e| annotate(e, &file));
    }
    let folder = dir.join(key);
    if !folder.is_dir() {
        return Err(IngestError::MissingView {
            view,
            key: key.to_owned(),
        });
    }
    let mut numbered = Vec::new();
    for entry in fs::read_dir(&folder).map_err(|e| io(&folder, e))? {
        let path = entry.map_err(|e| io(&folder, e))?.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") {
            continue;
        }
        let stem = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default();
        let n = frame_number(stem).ok_or_else(|| {
            malformed(format!("{}: no frame number in file name", path.display()))
        })?;
        numbered.push((n, path));
    }
    numbered.sort();
    let mut frames = Vec::with_capacity(numbered.len());
    for (n, path) in numbered {
        let text = fs::read_to_string(&path).map_err(|e| io(&path, e))?;
        let doc: FrameDoc = serde_json::from_str(&text)
            .map_err(|e| malformed(format!("{}: {e}", path.display())))?;
        frames.push(convert_frame(&doc, view, n, roles).map_err(|e| annotate(e, &path))?);
    }
    Ok(frames)
}

fn annotate(err: IngestError, path: &Path) -> IngestError {
    match err {
        IngestError::MalformedDocument(m) => malformed(format!("{}: {m}", path.display())),
        other => other,
    }
}

fn person_doc(frame: &ViewFrame2D, roles: &RoleTable) -> PersonDoc {
    let mut person = PersonDoc::default();
    for group in Group::ALL {
        let array = person.array_mut(group);
        *array = vec![0.0; 3 * roles.source_len(group)];
        for (kp, &src) in frame
            .keypoints
            .group(group)
            .iter()
            .zip(roles.source_indices(group))
        {
            array[3 * src] = kp.x;
            array[3 * src + 1] = kp.y;
            array[3 * src + 2] = kp.score;
        }
    }
    person
}

/// Emits frames as a per-video document that [`parse_view_frames`] reads back
/// bit-exactly.
pub fn write_video_document(frames: &[ViewFrame2D], roles: &RoleTable) -> String {
    let docs: Vec<FrameDoc> = frames
        .iter()
        .map(|f| FrameDoc {
            frame: Some(f.frame_index),
            people: vec![person_doc(f, roles)],
        })
        .collect();
    serde_json::to_string(&VideoDocOut { frames: &docs }).expect("pose document serializes")
}

/// Emits a single frame in the per-frame layout.
pub fn write_frame_document(frame: &ViewFrame2D, roles: &RoleTable) -> String {
    let people = [person_doc(frame, roles)];
    serde_json::to_string(&FrameDocOut {
        version: 1.3,
        people: &people,
    })
    .expect("pose document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(n: usize, base: f64) -> Vec<f64> {
        (0..n)
            .flat_map(|i| [base + i as f64, base + 0.5 * i as f64, 0.9])
            .collect()
    }

    fn full_person_json() -> String {
        format!(
            r#"{{"pose_keypoints_2d":{:?},"face_keypoints_2d":{:?},"hand_left_keypoints_2d":{:?},"hand_right_keypoints_2d":{:?}}}"#,
            triples(25, 100.0),
            triples(70, 200.0),
            triples(21, 300.0),
            triples(21, 400.0)
        )
    }

    #[test]
    fn single_frame_document() {
        let doc = format!(r#"{{"version":1.3,"people":[{}]}}"#, full_person_json());
        let frames =
            parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).unwrap();
        assert_eq!(frames.len(), 1);
        let f = &frames[0];
        assert_eq!(
            f.keypoints.group(Group::Body)[3],
            Keypoint2D::new(103.0, 101.5, 0.9)
        );
        assert_eq!(
            f.keypoints.group(Group::RightHand)[0],
            Keypoint2D::new(400.0, 400.0, 0.9)
        );
    }

    #[test]
    fn missing_face_is_zero_filled() {
        let doc = format!(
            r#"{{"people":[{{"pose_keypoints_2d":{:?},"hand_left_keypoints_2d":[],"hand_right_keypoints_2d":{:?}}}]}}"#,
            triples(25, 1.0),
            triples(21, 1.0)
        );
        let frames = parse_view_frames(doc.as_bytes(), View::Side, &RoleTable::default()).unwrap();
        let face = frames[0].keypoints.group(Group::Face);
        assert_eq!(face.len(), 70);
        assert!(face.iter().all(|k| *k == Keypoint2D::MISSING));
        assert!(frames[0]
            .keypoints
            .group(Group::LeftHand)
            .iter()
            .all(|k| k.score == 0.0));
    }

    #[test]
    fn no_people_is_all_missing() {
        let frames =
            parse_view_frames(&br#"{"people":[]}"#[..], View::Side, &RoleTable::default()).unwrap();
        assert!(frames[0]
            .keypoints
            .iter()
            .all(|(_, k)| *k == Keypoint2D::MISSING));
    }

    #[test]
    fn truncated_document_is_malformed() {
        let doc = format!(r#"{{"people":[{}]"#, full_person_json());
        let err =
            parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).unwrap_err();
        assert!(matches!(err, IngestError::MalformedDocument(_)));
    }

    #[test]
    fn wrong_cardinality() {
        let doc = format!(
            r#"{{"people":[{{"pose_keypoints_2d":{:?}}}]}}"#,
            triples(18, 0.0)
        );
        let err =
            parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).unwrap_err();
        assert!(matches!(
            err,
            IngestError::WrongCardinality {
                group: Group::Body,
                found: 18,
                expected: 25
            }
        ));
    }

    #[test]
    fn zero_score_zeroes_coordinates_and_scores_clamp() {
        let mut body = triples(25, 10.0);
        body[2] = 0.0;
        body[5] = 1.02;
        let doc = format!(r#"{{"people":[{{"pose_keypoints_2d":{:?}}}]}}"#, body);
        let frames =
            parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).unwrap();
        let b = frames[0].keypoints.group(Group::Body);
        assert_eq!(b[0], Keypoint2D::MISSING);
        assert_eq!(b[1].score, 1.0);
    }

    #[test]
    fn picks_most_confident_person() {
        let weak: Vec<f64> = (0..25).flat_map(|_| [1.0, 1.0, 0.1]).collect();
        let strong: Vec<f64> = (0..25).flat_map(|_| [2.0, 2.0, 0.8]).collect();
        let doc = format!(
            r#"{{"people":[{{"pose_keypoints_2d":{weak:?}}},{{"pose_keypoints_2d":{strong:?}}}]}}"#
        );
        let frames =
            parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).unwrap();
        assert_eq!(frames[0].keypoints.group(Group::Body)[0].x, 2.0);
    }

    #[test]
    fn video_document_frame_numbers() {
        let doc = r#"{"frames":[{"frame":4,"people":[]},{"frame":9,"people":[]}]}"#;
        let frames =
            parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).unwrap();
        assert_eq!(
            frames.iter().map(|f| f.frame_index).collect::<Vec<_>>(),
            vec![4, 9]
        );
        let doc = r#"{"frames":[{"frame":4,"people":[]},{"frame":4,"people":[]}]}"#;
        assert!(parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).is_err());
        let doc = r#"{"frames":[{"people":[]},{"people":[]}]}"#;
        let frames =
            parse_view_frames(doc.as_bytes(), View::Frontal, &RoleTable::default()).unwrap();
        assert_eq!(frames[1].frame_index, 1);
    }

    #[test]
    fn frame_numbers_from_file_names() {
        assert_eq!(frame_number("clip_000000000042_keypoints"), Some(42));
        assert_eq!(frame_number("7"), Some(7));
        assert_eq!(frame_number("clip_keypoints"), None);
    }

    #[test]
    fn per_frame_directory() {
        let roles = RoleTable::default();
        let dir = tempfile::tempdir().unwrap();
        let folder = dir.path().join("s1_scene1");
        fs::create_dir(&folder).unwrap();
        for n in [12usize, 3, 7] {
            let mut frame = ViewFrame2D {
                view: View::Side,
                frame_index: n,
                keypoints: Groups::filled(Keypoint2D::MISSING),
            };
            frame.keypoints.group_mut(Group::Body)[0] = Keypoint2D::new(n as f64, 1.0, 0.5);
            fs::write(
                folder.join(format!("s1_scene1_{n:012}_keypoints.json")),
                write_frame_document(&frame, &roles),
            )
            .unwrap();
        }
        let frames = load_view(dir.path(), "s1_scene1", View::Side, &roles).unwrap();
        assert_eq!(
            frames.iter().map(|f| f.frame_index).collect::<Vec<_>>(),
            vec![3, 7, 12]
        );
        assert_eq!(frames[2].keypoints.group(Group::Body)[0].x, 12.0);

        let err = load_view(dir.path(), "s2_scene1", View::Side, &roles).unwrap_err();
        assert!(matches!(err, IngestError::MissingView { .. }));
    }
}
