use serde::Deserialize;

use super::{push_fixed6, push_json_str, DocError};
use crate::fuse::WidthSource;
use crate::model::{Group, Groups, Keypoint3D, RoleTable, Sample3D, SampleMeta, SkeletonFrame};

pub(super) fn push_meta(out: &mut String, meta: &SampleMeta) {
    for (key, value) in [
        ("label", &meta.label),
        ("session", &meta.session),
        ("scene", &meta.scene),
        ("consultant", &meta.consultant),
    ] {
        out.push_str("  \"");
        out.push_str(key);
        out.push_str("\": ");
        push_json_str(out, value);
        out.push_str(",\n");
    }
    out.push_str(&format!("  \"frame_start\": {},\n", meta.frame_start));
    out.push_str(&format!("  \"frame_end\": {},\n", meta.frame_end));
}

fn push_array(out: &mut String, values: impl Iterator<Item = f64>) {
    out.push('[');
    for (i, v) in values.enumerate() {
        if i > 0 {
            out.push(',');
        }
        push_fixed6(out, v);
    }
    out.push(']');
}

/// Renders a normalized sample. `widths` gives, per frame, where its
/// normalization width came from.
pub fn write_sample3d(sample: &Sample3D, widths: &[WidthSource], roles: &RoleTable) -> String {
    let mut out = String::with_capacity(8192 * sample.frames.len().max(1));
    out.push_str("{\n");
    push_meta(&mut out, &sample.meta);
    out.push_str("  \"skeletons\": [");
    for (n, frame) in sample.frames.iter().enumerate() {
        out.push_str(if n == 0 { "\n" } else { ",\n" });
        out.push_str(&format!(
            "    {{\n      \"frame\": {},\n",
            frame.frame_index
        ));
        let source = match widths.get(n) {
            Some(WidthSource::Median(_)) => "median",
            _ => "frame",
        };
        out.push_str(&format!("      \"width_source\": \"{source}\""));
        for group in Group::ALL {
            let kps = frame.keypoints.group(group);
            out.push_str(&format!(
                ",\n      \"{}\": {{\n        \"name\": [",
                group.key()
            ));
            for (i, name) in roles.names(group).iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                push_json_str(&mut out, name);
            }
            out.push_str("],\n        \"score\": ");
            push_array(&mut out, kps.iter().map(|k| k.score));
            out.push_str(",\n        \"x\": ");
            push_array(&mut out, kps.iter().map(|k| k.x));
            out.push_str(",\n        \"y\": ");
            push_array(&mut out, kps.iter().map(|k| k.y));
            out.push_str(",\n        \"z\": ");
            push_array(&mut out, kps.iter().map(|k| k.z));
            out.push_str("\n      }");
        }
        out.push_str("\n    }");
    }
    out.push_str("\n  ]\n}\n");
    out
}

#[derive(Deserialize)]
struct GroupDoc {
    name: Vec<String>,
    score: Vec<f64>,
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
}

#[derive(Deserialize)]
struct SkeletonDoc {
    frame: usize,
    #[serde(default)]
    width_source: Option<String>,
    body: GroupDoc,
    face: GroupDoc,
    left_hand: GroupDoc,
    right_hand: GroupDoc,
}

pub(super) struct MetaDoc {
    pub label: String,
    pub session: String,
    pub scene: String,
    pub consultant: String,
    pub frame_start: usize,
    pub frame_end: usize,
}

impl MetaDoc {
    pub fn into_meta(self) -> Result<SampleMeta, DocError> {
        if self.label.is_empty() {
            return Err(DocError::Schema("empty label".into()));
        }
        if self.frame_start > self.frame_end {
            return Err(DocError::Schema(format!(
                "frame_start {} after frame_end {}",
                self.frame_start, self.frame_end
            )));
        }
        Ok(SampleMeta {
            label: self.label,
            session: self.session,
            scene: self.scene,
            consultant: self.consultant,
            frame_start: self.frame_start,
            frame_end: self.frame_end,
        })
    }
}

#[derive(Deserialize)]
struct Doc {
    label: String,
    session: String,
    scene: String,
    consultant: String,
    frame_start: usize,
    frame_end: usize,
    skeletons: Vec<SkeletonDoc>,
}

/// A parsed 3D sample document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document3D {
    pub sample: Sample3D,
    /// Per frame: whether it was normalized by the sample's median width.
    pub median_fallback: Vec<bool>,
}

fn read_group(
    doc: GroupDoc,
    group: Group,
    roles: &RoleTable,
    frame: usize,
) -> Result<Vec<Keypoint3D>, DocError> {
    let schema = |msg: String| DocError::Schema(format!("frame {frame}, {group}: {msg}"));
    let n = group.size();
    for (field, len) in [
        ("name", doc.name.len()),
        ("score", doc.score.len()),
        ("x", doc.x.len()),
        ("y", doc.y.len()),
        ("z", doc.z.len()),
    ] {
        if len != n {
            return Err(schema(format!("`{field}` has {len} entries, expected {n}")));
        }
    }
    if doc.name.as_slice() != roles.names(group) {
        return Err(schema("keypoint names differ from the role table".into()));
    }
    (0..n)
        .map(|i| {
            let k = Keypoint3D::new(doc.x[i], doc.y[i], doc.z[i], doc.score[i]);
            if !(0.0..=1.0).contains(&k.score) {
                return Err(schema(format!(
                    "score {} of keypoint {i} outside [0, 1]",
                    k.score
                )));
            }
            if !k.position().is_finite() {
                return Err(schema(format!("keypoint {i} is not finite")));
            }
            if k.is_missing() && k.position() != crate::model::Vector3::ZERO {
                return Err(schema(format!(
                    "missing keypoint {i} has non-zero coordinates"
                )));
            }
            Ok(k)
        })
        .collect()
}

/// Parses and schema-checks a 3D sample document.
pub fn read_sample3d(text: &str, roles: &RoleTable) -> Result<Document3D, DocError> {
    let doc: Doc = serde_json::from_str(text)?;
    let meta = MetaDoc {
        label: doc.label,
        session: doc.session,
        scene: doc.scene,
        consultant: doc.consultant,
        frame_start: doc.frame_start,
        frame_end: doc.frame_end,
    }
    .into_meta()?;
    if doc.skeletons.is_empty() {
        return Err(DocError::Schema("sample has no frames".into()));
    }
    let mut frames = Vec::with_capacity(doc.skeletons.len());
    let mut median_fallback = Vec::with_capacity(doc.skeletons.len());
    for s in doc.skeletons {
        if let Some(prev) = frames.last().map(|f: &SkeletonFrame| f.frame_index) {
            if s.frame <= prev {
                return Err(DocError::Schema(format!(
                    "frame {} follows frame {prev}",
                    s.frame
                )));
            }
        }
        median_fallback.push(match s.width_source.as_deref() {
            None | Some("frame") => false,
            Some("median") => true,
            Some(other) => return Err(DocError::Schema(format!("unknown width_source `{other}`"))),
        });
        let keypoints = Groups::from_vecs([
            read_group(s.body, Group::Body, roles, s.frame)?,
            read_group(s.face, Group::Face, roles, s.frame)?,
            read_group(s.left_hand, Group::LeftHand, roles, s.frame)?,
            read_group(s.right_hand, Group::RightHand, roles, s.frame)?,
        ])
        .expect("group sizes checked");
        frames.push(SkeletonFrame {
            frame_index: s.frame,
            keypoints,
        });
    }
    Ok(Document3D {
        sample: Sample3D { meta, frames },
        median_fallback,
    })
}
