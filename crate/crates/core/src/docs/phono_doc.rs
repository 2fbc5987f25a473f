use serde::Deserialize;

use super::dataset3d::{push_meta, MetaDoc};
use super::{push_fixed6, push_json_str, DocError};
use crate::model::{Attribute, AttributeValue, DirectionSet, Hand, PhonoFrame, PhonoSample};

fn push_attr(
    out: &mut String,
    attr: Attribute,
    value: impl FnOnce(&mut String),
    score: f64,
    last: bool,
) {
    out.push_str("      \"");
    out.push_str(attr.name());
    out.push_str("\": {\"value\": ");
    value(out);
    out.push_str(", \"score\": ");
    push_fixed6(out, score);
    out.push_str(if last { "}\n" } else { "},\n" });
}

pub fn write_phono(sample: &PhonoSample) -> String {
    let mut out = String::with_capacity(512 + 640 * sample.frames.len());
    out.push_str("{\n");
    push_meta(&mut out, &sample.meta);
    out.push_str(&format!(
        "  \"dominant_hand\": \"{}\",\n",
        sample.dominant_hand
    ));
    out.push_str("  \"frames\": [");
    for (n, f) in sample.frames.iter().enumerate() {
        out.push_str(if n == 0 { "\n" } else { ",\n" });
        out.push_str(&format!("    {{\n      \"frame\": {},\n", f.frame_index));
        for attr in Attribute::CATEGORICAL {
            let text = f.categorical(attr).expect("categorical attribute");
            push_attr(
                &mut out,
                attr,
                |o| push_json_str(o, &text),
                f.score(attr),
                false,
            );
        }
        push_attr(
            &mut out,
            Attribute::MouthOpening,
            |o| push_fixed6(o, f.mouth_opening.value),
            f.mouth_opening.score,
            true,
        );
        out.push_str("    }");
    }
    out.push_str("\n  ]\n}\n");
    out
}

#[derive(Deserialize)]
struct Attr<V> {
    value: V,
    score: f64,
}

#[derive(Deserialize)]
struct FrameDoc {
    frame: usize,
    dh_handshape: Attr<String>,
    ndh_handshape: Attr<String>,
    dh_orientation: Attr<String>,
    ndh_orientation: Attr<String>,
    dh_movement: Attr<String>,
    ndh_movement: Attr<String>,
    mouth_opening: Attr<f64>,
}

#[derive(Deserialize)]
struct Doc {
    label: String,
    session: String,
    scene: String,
    consultant: String,
    frame_start: usize,
    frame_end: usize,
    dominant_hand: String,
    frames: Vec<FrameDoc>,
}

fn score(attr: Attribute, frame: usize, s: f64) -> Result<f64, DocError> {
    if (0.0..=1.0).contains(&s) {
        Ok(s)
    } else {
        Err(DocError::Schema(format!(
            "frame {frame}: {} score {s} outside [0, 1]",
            attr.name()
        )))
    }
}

fn direction(
    attr: Attribute,
    frame: usize,
    a: Attr<String>,
) -> Result<AttributeValue<DirectionSet>, DocError> {
    let value = a
        .value
        .parse::<DirectionSet>()
        .map_err(|e| DocError::Schema(format!("frame {frame}: {}: {e}", attr.name())))?;
    Ok(AttributeValue::new(value, score(attr, frame, a.score)?))
}

fn handshape(
    attr: Attribute,
    frame: usize,
    a: Attr<String>,
) -> Result<AttributeValue<String>, DocError> {
    if a.value.is_empty() {
        return Err(DocError::Schema(format!(
            "frame {frame}: empty {}",
            attr.name()
        )));
    }
    let s = score(attr, frame, a.score)?;
    Ok(AttributeValue::new(a.value, s))
}

/// Parses and schema-checks a phonological sample document.
pub fn read_phono(text: &str) -> Result<PhonoSample, DocError> {
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
    let dominant_hand = match doc.dominant_hand.as_str() {
        "left" => Hand::Left,
        "right" => Hand::Right,
        other => return Err(DocError::Schema(format!("unknown dominant_hand `{other}`"))),
    };
    if doc.frames.is_empty() {
        return Err(DocError::Schema("sample has no frames".into()));
    }
    let mut frames: Vec<PhonoFrame> = Vec::with_capacity(doc.frames.len());
    for f in doc.frames {
        let t = f.frame;
        if let Some(prev) = frames.last() {
            if t <= prev.frame_index {
                return Err(DocError::Schema(format!(
                    "frame {t} follows frame {}",
                    prev.frame_index
                )));
            }
        }
        let mouth = f.mouth_opening;
        if !(mouth.value >= 0.0 && mouth.value.is_finite()) {
            return Err(DocError::Schema(format!(
                "frame {t}: mouth_opening {} is negative",
                mouth.value
            )));
        }
        frames.push(PhonoFrame {
            frame_index: t,
            dh_handshape: handshape(Attribute::DhHandshape, t, f.dh_handshape)?,
            ndh_handshape: handshape(Attribute::NdhHandshape, t, f.ndh_handshape)?,
            dh_orientation: direction(Attribute::DhOrientation, t, f.dh_orientation)?,
            ndh_orientation: direction(Attribute::NdhOrientation, t, f.ndh_orientation)?,
            dh_movement: direction(Attribute::DhMovement, t, f.dh_movement)?,
            ndh_movement: direction(Attribute::NdhMovement, t, f.ndh_movement)?,
            mouth_opening: AttributeValue::new(
                mouth.value,
                score(Attribute::MouthOpening, t, mouth.score)?,
            ),
        });
    }
    let first = &frames[0];
    if !first.dh_movement.value.is_empty() || !first.ndh_movement.value.is_empty() {
        return Err(DocError::Schema("first frame has a movement".into()));
    }
    Ok(PhonoSample {
        meta,
        dominant_hand,
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SampleMeta;

    fn frame(t: usize, movement: &str) -> PhonoFrame {
        let dir = |s: &str| AttributeValue::new(DirectionSet::parse_any_order(s).unwrap(), 0.5);
        PhonoFrame {
            frame_index: t,
            dh_handshape: AttributeValue::new("A".into(), 1.0),
            ndh_handshape: AttributeValue::new("none".into(), 0.0),
            dh_orientation: dir("front_left"),
            ndh_orientation: dir("none"),
            dh_movement: dir(movement),
            ndh_movement: dir("none"),
            mouth_opening: AttributeValue::new(0.25, 0.8),
        }
    }

    fn sample() -> PhonoSample {
        PhonoSample {
            meta: SampleMeta {
                label: "BOOK".into(),
                session: "s1".into(),
                scene: "2".into(),
                consultant: "C".into(),
                frame_start: 0,
                frame_end: 20,
            },
            dominant_hand: Hand::Left,
            frames: vec![frame(0, "none"), frame(1, "up_front")],
        }
    }

    #[test]
    fn write_then_read() {
        let s = sample();
        let text = write_phono(&s);
        assert!(
            text.contains("\"dh_orientation\": {\"value\": \"left_front\", \"score\": 0.500000}")
        );
        assert!(text.contains("\"mouth_opening\": {\"value\": 0.250000, \"score\": 0.800000}"));
        assert_eq!(read_phono(&text).unwrap(), s);
    }

    #[test]
    fn rejects_bad_documents() {
        let text = write_phono(&sample());
        let broken = text.replacen("left_front", "front_left", 1);
        assert!(matches!(read_phono(&broken), Err(DocError::Schema(_))));
        let broken = text.replacen("\"value\": 0.250000", "\"value\": -0.250000", 1);
        assert!(matches!(read_phono(&broken), Err(DocError::Schema(_))));
        let mut s = sample();
        s.frames[0].dh_movement.value = DirectionSet::parse_any_order("up").unwrap();
        assert!(matches!(
            read_phono(&write_phono(&s)),
            Err(DocError::Schema(_))
        ));
    }
}
