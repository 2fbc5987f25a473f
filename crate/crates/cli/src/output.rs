use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::args::{Args, Command, SideCamera};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data {
        kind: String,
        message: String,
        details: Vec<String>,
    },
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError::Usage(message.into())
    }

    pub fn data(kind: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Data {
            kind: kind.into(),
            message: message.into(),
            details: Vec::new(),
        }
    }

    pub fn with_details(mut self, more: Vec<String>) -> Self {
        if let CliError::Data { details, .. } = &mut self {
            details.extend(more);
        }
        self
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::data("Io", format!("{}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data { .. } => 1,
        }
    }

    pub fn print(&self) {
        match self {
            CliError::Usage(m) => eprintln!("usage error: {m}"),
            CliError::Data {
                kind,
                message,
                details,
            } => {
                eprintln!("error[{kind}]: {message}");
                for d in details {
                    eprintln!("  {d}");
                }
            }
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Data { kind, message, .. } => write!(f, "{kind}: {message}"),
        }
    }
}

/// One sample (or annotation row) that was left out, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Skip {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u64>,
    pub kind: String,
    pub detail: String,
}

impl Skip {
    pub fn sample(id: &str, kind: &str, detail: impl Into<String>) -> Self {
        Skip {
            id: Some(id.to_owned()),
            line: None,
            kind: kind.to_owned(),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SkipReport<'a> {
    pub total: usize,
    pub built: usize,
    pub skipped: &'a [Skip],
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub command: Option<Command>,
    pub counts: BTreeMap<&'static str, usize>,
    pub skipped: Vec<Skip>,
}

impl Outcome {
    pub fn new(command: Command) -> Self {
        Outcome {
            command: Some(command),
            ..Outcome::default()
        }
    }

    pub fn count(mut self, name: &'static str, n: usize) -> Self {
        self.counts.insert(name, n);
        self
    }

    pub fn skipped_by_kind(&self) -> BTreeMap<String, usize> {
        let mut by_kind = BTreeMap::new();
        for s in &self.skipped {
            *by_kind.entry(s.kind.clone()).or_insert(0) += 1;
        }
        by_kind
    }

    pub fn print(&self) {
        let name = self.command.map_or("", Command::name);
        let counts: Vec<String> = self
            .counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        println!("{name}: {}", counts.join(" "));
        for (kind, n) in self.skipped_by_kind() {
            println!("  skipped {n} ({kind})");
        }
    }
}

#[derive(Debug, Serialize)]
struct ConfigEcho<'a> {
    front_dir: Option<&'a Path>,
    side_dir: Option<&'a Path>,
    annotations: Option<&'a Path>,
    source_fps: u32,
    target_fps: u32,
    threshold_k: f64,
    z_scale: f64,
    side_camera: SideCamera,
    seed: u64,
    samples: usize,
    bins: usize,
}

#[derive(Debug, Serialize)]
struct ErrorEcho<'a> {
    kind: &'a str,
    message: &'a str,
    details: &'a [String],
}

/// Machine-readable record of one invocation. Holds nothing that varies
/// between runs with the same inputs.
#[derive(Debug, Serialize)]
pub struct RunSummary<'a> {
    command: &'static str,
    status: &'static str,
    config: ConfigEcho<'a>,
    counts: BTreeMap<&'static str, usize>,
    skipped_by_kind: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<ErrorEcho<'a>>,
}

impl<'a> RunSummary<'a> {
    pub fn new(args: &'a Args, result: &'a Result<Outcome, CliError>) -> Self {
        let (status, counts, skipped_by_kind, error) = match result {
            Ok(o) => ("ok", o.counts.clone(), o.skipped_by_kind(), None),
            Err(CliError::Usage(m)) => (
                "usage_error",
                BTreeMap::new(),
                BTreeMap::new(),
                Some(ErrorEcho {
                    kind: "Usage",
                    message: m,
                    details: &[],
                }),
            ),
            Err(CliError::Data {
                kind,
                message,
                details,
            }) => (
                "data_error",
                BTreeMap::new(),
                BTreeMap::new(),
                Some(ErrorEcho {
                    kind,
                    message,
                    details,
                }),
            ),
        };
        RunSummary {
            command: args.command.name(),
            status,
            config: ConfigEcho {
                front_dir: args.front_dir.as_deref(),
                side_dir: args.side_dir.as_deref(),
                annotations: args.annotations.as_deref(),
                source_fps: args.source_fps,
                target_fps: args.target_fps,
                threshold_k: args.threshold_k,
                z_scale: args.z_scale,
                side_camera: args.side_camera,
                seed: args.seed,
                samples: args.samples,
                bins: args.bins,
            },
            counts,
            skipped_by_kind,
            error,
        }
    }

    /// Writes `run-<command>.json` if `out_dir` exists.
    pub fn write(&self, out_dir: &Path) -> Result<(), CliError> {
        if !out_dir.is_dir() {
            return Ok(());
        }
        write_json(&out_dir.join(format!("run-{}.json", self.command)), self)
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_text(path, &text)
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Empties and recreates one of the command's own output directories.
pub fn fresh_dir(path: &Path) -> Result<PathBuf, CliError> {
    if path.exists() {
        fs::remove_dir_all(path).map_err(|e| CliError::io(path, e))?;
    }
    fs::create_dir_all(path).map_err(|e| CliError::io(path, e))?;
    Ok(path.to_path_buf())
}
