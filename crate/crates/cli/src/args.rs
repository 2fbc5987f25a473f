use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use phonoskel::fuse::{FusionConfig, SideCameraSide};
use phonoskel::ingest::stride;
use phonoskel::phono::PhonoConfig;
use phonoskel::pipeline::PipelineConfig;
use phonoskel::synth::ScriptParams;
use serde::Serialize;

use crate::output::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    #[value(name = "build-3d")]
    Build3d,
    BuildPhono,
    Stats,
    Validate,
    Synth,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Build3d => "build-3d",
            Command::BuildPhono => "build-phono",
            Command::Stats => "stats",
            Command::Validate => "validate",
            Command::Synth => "synth",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SideCamera {
    #[value(name = "signer_right")]
    SignerRight,
    #[value(name = "signer_left")]
    SignerLeft,
}

/// Every flag can also be set through the environment variable shown in
/// its help text.
#[derive(Debug, Clone, Parser)]
#[command(name = "phonoskel", version, about)]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,

    /// Frontal-view pose documents
    #[arg(long, env = "PHONOSKEL_FRONT_DIR")]
    pub front_dir: Option<PathBuf>,

    /// Side-view pose documents
    #[arg(long, env = "PHONOSKEL_SIDE_DIR")]
    pub side_dir: Option<PathBuf>,

    /// Annotation catalog (comma- or tab-delimited)
    #[arg(long, env = "PHONOSKEL_ANNOTATIONS")]
    pub annotations: Option<PathBuf>,

    /// Dataset directory the commands read from and write to
    #[arg(long, visible_alias = "out", env = "PHONOSKEL_OUT_DIR")]
    pub out_dir: Option<PathBuf>,

    #[arg(long, default_value_t = 60, env = "PHONOSKEL_SOURCE_FPS")]
    pub source_fps: u32,

    #[arg(long, default_value_t = 3, env = "PHONOSKEL_TARGET_FPS")]
    pub target_fps: u32,

    /// Direction threshold in shoulder-width units
    #[arg(long, default_value_t = 0.30, env = "PHONOSKEL_THRESHOLD_K")]
    pub threshold_k: f64,

    /// Side-view to frontal-view pixel scale
    #[arg(long, default_value_t = 1.0, env = "PHONOSKEL_Z_SCALE")]
    pub z_scale: f64,

    /// Side of the signer the side camera stands on
    #[arg(long, value_enum, default_value_t = SideCamera::SignerRight, env = "PHONOSKEL_SIDE_CAMERA")]
    pub side_camera: SideCamera,

    /// Worker threads [default: available parallelism]
    #[arg(long, env = "PHONOSKEL_JOBS")]
    pub jobs: Option<usize>,

    /// Seed for `synth`
    #[arg(long, default_value_t = 0, env = "PHONOSKEL_SEED")]
    pub seed: u64,

    /// Number of signs generated by `synth`
    #[arg(long, default_value_t = 30, env = "PHONOSKEL_SAMPLES")]
    pub samples: usize,

    /// Equal-frequency bins for mouth opening in the correlation matrix
    #[arg(long, default_value_t = 5, env = "PHONOSKEL_BINS")]
    pub bins: usize,
}

fn require<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    value
        .as_deref()
        .ok_or_else(|| CliError::usage(format!("--{flag} is required for this command")))
}

fn existing<'a>(value: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, CliError> {
    let path = require(value, flag)?;
    if !path.exists() {
        return Err(CliError::usage(format!(
            "--{flag} {} does not exist",
            path.display()
        )));
    }
    Ok(path)
}

impl Args {
    pub fn jobs(&self) -> usize {
        self.jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
    }

    pub fn check(&self) -> Result<(), CliError> {
        stride(self.source_fps, self.target_fps).map_err(|e| CliError::usage(e.to_string()))?;
        if !(self.threshold_k.is_finite() && self.threshold_k >= 0.0) {
            return Err(CliError::usage(
                "--threshold-k must be a non-negative number",
            ));
        }
        if !(self.z_scale.is_finite() && self.z_scale > 0.0) {
            return Err(CliError::usage("--z-scale must be a positive number"));
        }
        if self.jobs == Some(0) {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        if self.bins < 2 {
            return Err(CliError::usage("--bins must be at least 2"));
        }
        if self.samples == 0 {
            return Err(CliError::usage("--samples must be at least 1"));
        }
        match self.command {
            Command::Build3d => {
                existing(&self.front_dir, "front-dir")?;
                existing(&self.side_dir, "side-dir")?;
                existing(&self.annotations, "annotations")?;
                require(&self.out_dir, "out-dir")?;
            }
            Command::BuildPhono => {
                existing(&self.annotations, "annotations")?;
                existing(&self.out_dir, "out-dir")?;
            }
            Command::Stats | Command::Validate => {
                existing(&self.out_dir, "out-dir")?;
            }
            Command::Synth => {
                require(&self.out_dir, "out-dir")?;
            }
        }
        Ok(())
    }

    /// Only valid after [`Args::check`].
    pub fn out_dir(&self) -> &Path {
        self.out_dir.as_deref().expect("checked")
    }

    pub fn front_dir(&self) -> &Path {
        self.front_dir.as_deref().expect("checked")
    }

    pub fn side_dir(&self) -> &Path {
        self.side_dir.as_deref().expect("checked")
    }

    pub fn annotations(&self) -> &Path {
        self.annotations.as_deref().expect("checked")
    }

    pub fn fusion(&self) -> FusionConfig {
        FusionConfig {
            z_scale: self.z_scale,
            side_camera_side: match self.side_camera {
                SideCamera::SignerRight => SideCameraSide::SignerRight,
                SideCamera::SignerLeft => SideCameraSide::SignerLeft,
            },
            ..FusionConfig::default()
        }
    }

    pub fn phono(&self) -> PhonoConfig {
        PhonoConfig {
            threshold_k: self.threshold_k,
            ..PhonoConfig::default()
        }
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            source_fps: self.source_fps,
            target_fps: self.target_fps,
            fusion: self.fusion(),
            phono: self.phono(),
        }
    }

    pub fn script_params(&self) -> ScriptParams {
        ScriptParams {
            source_fps: self.source_fps,
            target_fps: self.target_fps,
            fusion: self.fusion(),
            phono: self.phono(),
            ..ScriptParams::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let a = Args::try_parse_from(["phonoskel", "stats", "--out", "x"]).unwrap();
        assert_eq!(a.command, Command::Stats);
        assert_eq!((a.source_fps, a.target_fps), (60, 3));
        assert_eq!(a.threshold_k, 0.30);
        assert_eq!(a.z_scale, 1.0);
        assert_eq!(a.side_camera, SideCamera::SignerRight);
        assert_eq!(a.out_dir, Some(PathBuf::from("x")));
    }

    #[test]
    fn rejects_bad_numbers() {
        let a = Args::try_parse_from(["phonoskel", "synth", "--out-dir", "x", "--target-fps", "7"])
            .unwrap();
        assert_eq!(a.check().unwrap_err().exit_code(), 2);
        let a = Args::try_parse_from(["phonoskel", "synth", "--out-dir", "x", "--z-scale", "0"])
            .unwrap();
        assert!(a.check().is_err());
        let a = Args::try_parse_from(["phonoskel", "build-3d", "--out-dir", "x"]).unwrap();
        assert!(a.check().is_err());
        assert!(Args::try_parse_from(["phonoskel", "build3d"]).is_err());
    }
}
