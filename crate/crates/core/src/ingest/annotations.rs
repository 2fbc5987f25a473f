//! Annotation catalog: one delimited row per sign occurrence.
//!
//! Required columns (header row, any order): `label, session, scene,
//! consultant, frame_start, frame_end, initial_handshape, final_handshape,
//! dominant_hand`. Optional: `ndh_initial_handshape, ndh_final_handshape`.
//! The delimiter is a tab when the header contains one, otherwise a comma.

use std::collections::HashSet;
use std::path::Path;

use super::IngestError;
use crate::model::{Hand, SampleMeta};

const DEFAULT_HANDSHAPES: &str = include_str!("../../assets/handshapes.txt");

pub const ANNOTATION_COLUMNS: [&str; 9] = [
    "label",
    "session",
    "scene",
    "consultant",
    "frame_start",
    "frame_end",
    "initial_handshape",
    "final_handshape",
    "dominant_hand",
];

/// Set of accepted handshape codes.
#[derive(Debug, Clone)]
pub struct HandshapeCatalog {
    codes: Vec<String>,
    lookup: HashSet<String>,
}

impl Default for HandshapeCatalog {
    fn default() -> Self {
        Self::parse(DEFAULT_HANDSHAPES)
    }
}

impl HandshapeCatalog {
    /// One code per line; blank lines and `#` comments ignored.
    pub fn parse(text: &str) -> Self {
        let codes: Vec<String> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_owned)
            .collect();
        let lookup = codes.iter().cloned().collect();
        Self { codes, lookup }
    }

    pub fn contains(&self, code: &str) -> bool {
        self.lookup.contains(code)
    }

    pub fn codes(&self) -> &[String] {
        &self.codes
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationRecord {
    pub meta: SampleMeta,
    pub initial_handshape: String,
    pub final_handshape: String,
    pub ndh_handshapes: Option<(String, String)>,
    pub dominant_hand: Option<Hand>,
}

impl AnnotationRecord {
    /// The dominant hand, right when unannotated.
    pub fn dominant(&self) -> Hand {
        self.dominant_hand.unwrap_or(Hand::Right)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct AnnotationCatalog {
    pub records: Vec<AnnotationRecord>,
    pub skipped: Vec<SkippedRow>,
}

impl AnnotationCatalog {
    pub fn skip_count(&self) -> usize {
        self.skipped.len()
    }
}

pub fn load_annotations(
    path: &Path,
    handshapes: &HandshapeCatalog,
) -> Result<AnnotationCatalog, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_annotations(&text, handshapes)
}

pub fn parse_annotations(
    text: &str,
    handshapes: &HandshapeCatalog,
) -> Result<AnnotationCatalog, IngestError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let Some(header) = text.lines().find(|l| !l.trim().is_empty()) else {
        return Ok(AnnotationCatalog::default());
    };
    let delimiter = if header.contains('\t') { b'\t' } else { b',' };
    let bad = |msg: String| IngestError::MalformedCatalog(msg);

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| bad(e.to_string()))?.clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let mut required = [0usize; 9];
    for (slot, name) in required.iter_mut().zip(ANNOTATION_COLUMNS) {
        *slot = column(name).ok_or_else(|| bad(format!("missing column `{name}`")))?;
    }
    let ndh = (
        column("ndh_initial_handshape"),
        column("ndh_final_handshape"),
    );

    let mut catalog = AnnotationCatalog::default();
    for row in reader.records() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |i: usize| row.get(required[i]).unwrap_or("");
        let number = |i: usize| {
            field(i).parse::<usize>().map_err(|_| {
                bad(format!(
                    "line {line}: `{}` = `{}` is not a frame number",
                    ANNOTATION_COLUMNS[i],
                    field(i)
                ))
            })
        };
        let meta = SampleMeta {
            label: field(0).to_owned(),
            session: field(1).to_owned(),
            scene: field(2).to_owned(),
            consultant: field(3).to_owned(),
            frame_start: number(4)?,
            frame_end: number(5)?,
        };
        if meta.label.is_empty() {
            return Err(bad(format!("line {line}: empty label")));
        }
        if meta.frame_start > meta.frame_end {
            return Err(bad(format!(
                "line {line}: frame_start {} after frame_end {}",
                meta.frame_start, meta.frame_end
            )));
        }
        let dominant_hand = match field(8).to_ascii_lowercase().as_str() {
            "left" | "l" => Some(Hand::Left),
            "right" | "r" => Some(Hand::Right),
            "" => {
                log::warn!("line {line}: dominant hand unspecified, assuming right");
                None
            }
            other => return Err(bad(format!("line {line}: unknown dominant hand `{other}`"))),
        };

        let mut codes = vec![field(6).to_owned(), field(7).to_owned()];
        let ndh_codes = match ndh {
            (Some(a), Some(b)) => {
                let (a, b) = (row.get(a).unwrap_or(""), row.get(b).unwrap_or(""));
                if a.is_empty() && b.is_empty() {
                    None
                } else {
                    codes.push(a.to_owned());
                    codes.push(b.to_owned());
                    Some((a.to_owned(), b.to_owned()))
                }
            }
            _ => None,
        };
        if let Some(unknown) = codes.iter().find(|c| !handshapes.contains(c)) {
            log::warn!("line {line}: unknown handshape `{unknown}`, row skipped");
            catalog.skipped.push(SkippedRow {
                line,
                reason: format!("unknown handshape `{unknown}`"),
            });
            continue;
        }
        let mut codes = codes.into_iter();
        catalog.records.push(AnnotationRecord {
            meta,
            initial_handshape: codes.next().unwrap_or_default(),
            final_handshape: codes.next().unwrap_or_default(),
            ndh_handshapes: ndh_codes,
            dominant_hand,
        });
    }
    Ok(catalog)
}

/// Comma-delimited catalog with the required columns followed by the two
/// non-dominant handshape columns.
pub fn write_annotations(records: &[AnnotationRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = ANNOTATION_COLUMNS
        .into_iter()
        .chain(["ndh_initial_handshape", "ndh_final_handshape"]);
    w.write_record(header).expect("write to memory");
    for r in records {
        let m = &r.meta;
        let (ndh_initial, ndh_final) = r
            .ndh_handshapes
            .as_ref()
            .map_or(("", ""), |(a, b)| (a.as_str(), b.as_str()));
        let start = m.frame_start.to_string();
        let end = m.frame_end.to_string();
        let hand = r.dominant_hand.map_or("", Hand::as_str);
        w.write_record([
            m.label.as_str(),
            &m.session,
            &m.scene,
            &m.consultant,
            &start,
            &end,
            &r.initial_handshape,
            &r.final_handshape,
            hand,
            ndh_initial,
            ndh_final,
        ])
        .expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER: &str = "label,session,scene,consultant,frame_start,frame_end,initial_handshape,final_handshape,dominant_hand\n";

    #[test]
    fn bundled_catalog_has_88_codes() {
        let c = HandshapeCatalog::default();
        assert_eq!(c.len(), 88);
        assert_eq!(c.codes().iter().collect::<HashSet<_>>().len(), 88);
        for code in ["A", "U/H", "M", "F/9", "loose-E"] {
            assert!(c.contains(code), "{code}");
        }
    }

    #[test]
    fn one_record() {
        let text = format!("{HEADER}CHAIR,s1,1,C,120,180,A,B,right\n");
        let cat = parse_annotations(&text, &HandshapeCatalog::default()).unwrap();
        assert_eq!(cat.records.len(), 1);
        let r = &cat.records[0];
        assert_eq!(r.meta.label, "CHAIR");
        assert_eq!((r.meta.frame_start, r.meta.frame_end), (120, 180));
        assert_eq!(
            (r.initial_handshape.as_str(), r.final_handshape.as_str()),
            ("A", "B")
        );
        assert_eq!(r.dominant(), Hand::Right);
        assert_eq!(cat.skip_count(), 0);
    }

    #[test]
    fn unknown_handshape_is_skipped() {
        let text =
            format!("{HEADER}CHAIR,s1,1,C,120,180,ZZZ,B,right\nBOOK,s1,1,C,200,240,B,B,left\n");
        let cat = parse_annotations(&text, &HandshapeCatalog::default()).unwrap();
        assert_eq!(cat.skip_count(), 1);
        assert_eq!(cat.records.len(), 1);
        assert_eq!(cat.records[0].dominant(), Hand::Left);
    }

    #[test]
    fn written_catalog_parses_back() {
        let text =
            format!("{HEADER}CHAIR,s1,1,C,120,180,A,B,right\n\"BOOK, red\",s2,3,D,0,40,B,B,\n");
        let hs = HandshapeCatalog::default();
        let mut cat = parse_annotations(&text, &hs).unwrap();
        cat.records[0].ndh_handshapes = Some(("B".into(), "flat-B".into()));
        let again = parse_annotations(&write_annotations(&cat.records), &hs).unwrap();
        assert_eq!(again.records, cat.records);
    }

    #[test]
    fn empty_file() {
        let cat = parse_annotations("", &HandshapeCatalog::default()).unwrap();
        assert!(cat.records.is_empty());
        assert_eq!(cat.skip_count(), 0);
        assert!(parse_annotations(HEADER, &HandshapeCatalog::default())
            .unwrap()
            .records
            .is_empty());
    }

    #[test]
    fn tab_delimited_with_ndh_and_default_dominant() {
        let text = "label\tsession\tscene\tconsultant\tframe_start\tframe_end\tinitial_handshape\tfinal_handshape\tdominant_hand\tndh_initial_handshape\tndh_final_handshape\n\
                    BOOK\ts2\t3\tD\t0\t40\tB\tB\t\tB\tflat-B\n";
        let cat = parse_annotations(text, &HandshapeCatalog::default()).unwrap();
        let r = &cat.records[0];
        assert_eq!(r.dominant_hand, None);
        assert_eq!(r.dominant(), Hand::Right);
        assert_eq!(r.ndh_handshapes, Some(("B".into(), "flat-B".into())));
    }

    #[test]
    fn malformed_rows() {
        let hs = HandshapeCatalog::default();
        assert!(matches!(
            parse_annotations("label,session\nX,s\n", &hs),
            Err(IngestError::MalformedCatalog(_))
        ));
        let text = format!("{HEADER}CHAIR,s1,1,C,abc,180,A,B,right\n");
        assert!(matches!(
            parse_annotations(&text, &hs),
            Err(IngestError::MalformedCatalog(_))
        ));
        let text = format!("{HEADER}CHAIR,s1,1,C,200,180,A,B,right\n");
        assert!(matches!(
            parse_annotations(&text, &hs),
            Err(IngestError::MalformedCatalog(_))
        ));
        let text = format!("{HEADER}CHAIR,s1,1,C,1,2,A,B\n");
        assert!(matches!(
            parse_annotations(&text, &hs),
            Err(IngestError::MalformedCatalog(_))
        ));
    }
}
