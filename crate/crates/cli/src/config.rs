//! Run configuration: a JSON file mirroring the command-line flags, merged
//! with the flags (flags win), then validated.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use meanarc::estimators::{SamplingOptions, MIN_SAMPLES};
use meanarc::geom::SimplePolygon;
use meanarc::shapes::{build, load_shape, ShapeSpec, SPEC_KINDS};

use crate::CliError;

pub const DEFAULT_SAMPLES: usize = 100_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_STREAMS: usize = 8;
pub const DEFAULT_PLACEMENTS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Mean arc length over a grid of trajectory scales.
    Sweep,
    /// Sampled kinematic measures against their closed forms.
    Verify,
    /// Largest scale at which the trajectory fits inside the domain.
    Critical,
    /// Whether the trajectory fits inside the domain as given.
    Embed,
    /// A few sampled placements, drawn as an SVG scene.
    Sample,
}

/// Everything a config file may set. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub command: Option<Command>,
    pub domain: Option<String>,
    pub trajectory: Option<String>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub streams: Option<usize>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub lambda_steps: Option<usize>,
    pub lambdas: Option<Vec<f64>>,
    pub out: Option<PathBuf>,
    pub svg: Option<bool>,
    pub eps_length: Option<f64>,
    pub window_scale: Option<f64>,
    pub budget: Option<usize>,
    pub placements: Option<usize>,
}

pub fn parse_config_json(text: &str) -> Result<ConfigFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(format!("config file: {e}")))
}

pub fn load_config(path: &Path) -> Result<ConfigFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_json(&text)
}

/// Mean arc lengths of random closed trajectories crossing planar domains.
///
/// Shapes are either a spec such as `circle:r=1,res=256` or
/// `star:outer=1,inner=0.5,points=5`, or the path of a JSON vertex file.
#[derive(Debug, Clone, Default, Parser)]
#[command(name = "meanarc", version)]
pub struct Cli {
    #[arg(long, value_enum)]
    pub command: Option<Command>,
    /// JSON file with the same keys as the long flags (snake_case).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub domain: Option<String>,
    #[arg(long)]
    pub trajectory: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub streams: Option<usize>,
    #[arg(long)]
    pub lambda_min: Option<f64>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub lambda_steps: Option<usize>,
    /// Comma-separated scales; overrides the min/max/steps grid.
    #[arg(long, value_delimiter = ',')]
    pub lambdas: Option<Vec<f64>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: bool,
    /// Length tolerance for boundary contacts.
    #[arg(long)]
    pub eps_length: Option<f64>,
    /// Multiplies the sampling window's sides. Anything below 1 biases the
    /// estimates; meant for testing the verification gate.
    #[arg(long)]
    pub window_scale: Option<f64>,
    /// Margin evaluations per containment search.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Placements drawn by `sample`.
    #[arg(long)]
    pub placements: Option<usize>,
}

impl Cli {
    /// Reads `--config` if given and lays the flags over it.
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => load_config(path)?,
            None => ConfigFile::default(),
        };
        let merged = ConfigFile {
            command: self.command.or(file.command),
            domain: self.domain.or(file.domain),
            trajectory: self.trajectory.or(file.trajectory),
            samples: self.samples.or(file.samples),
            seed: self.seed.or(file.seed),
            streams: self.streams.or(file.streams),
            lambda_min: self.lambda_min.or(file.lambda_min),
            lambda_max: self.lambda_max.or(file.lambda_max),
            lambda_steps: self.lambda_steps.or(file.lambda_steps),
            lambdas: self.lambdas.or(file.lambdas),
            out: self.out.or(file.out),
            svg: Some(self.svg || file.svg.unwrap_or(false)),
            eps_length: self.eps_length.or(file.eps_length),
            window_scale: self.window_scale.or(file.window_scale),
            budget: self.budget.or(file.budget),
            placements: self.placements.or(file.placements),
        };
        RunConfig::from_file(merged)
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub domain: String,
    pub trajectory: String,
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
    /// Empty unless the command is `sweep`.
    pub lambdas: Vec<f64>,
    pub out: PathBuf,
    pub svg: bool,
    pub eps_length: Option<f64>,
    pub window_scale: f64,
    pub budget: Option<usize>,
    pub placements: usize,
}

impl RunConfig {
    pub fn from_file(f: ConfigFile) -> Result<Self, CliError> {
        let command = f
            .command
            .ok_or_else(|| CliError::Config("missing --command".into()))?;
        let lambdas = if command == Command::Sweep {
            lambda_grid(&f)?
        } else {
            Vec::new()
        };
        let domain = f
            .domain
            .ok_or_else(|| CliError::Config("missing --domain".into()))?;
        let trajectory = f
            .trajectory
            .ok_or_else(|| CliError::Config("missing --trajectory".into()))?;
        let samples = f.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < MIN_SAMPLES {
            return Err(CliError::Config(format!(
                "--samples must be at least {MIN_SAMPLES}, got {samples}"
            )));
        }
        let streams = f.streams.unwrap_or(DEFAULT_STREAMS);
        if streams == 0 {
            return Err(CliError::Config("--streams must be positive".into()));
        }
        let window_scale = f.window_scale.unwrap_or(1.0);
        if !(window_scale > 0.0 && window_scale.is_finite()) {
            return Err(CliError::Config(format!(
                "--window-scale must be positive, got {window_scale}"
            )));
        }
        if let Some(eps) = f.eps_length {
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(CliError::Config(format!(
                    "--eps-length must be positive, got {eps}"
                )));
            }
        }
        let config = RunConfig {
            command,
            domain,
            trajectory,
            samples,
            seed: f.seed.unwrap_or(DEFAULT_SEED),
            streams,
            lambdas,
            out: f.out.unwrap_or_else(|| PathBuf::from(".")),
            svg: f.svg.unwrap_or(false),
            eps_length: f.eps_length,
            window_scale,
            budget: f.budget,
            placements: f.placements.unwrap_or(DEFAULT_PLACEMENTS),
        };
        // Fail on missing files and bad specs before any work starts.
        resolve_shape(&config.domain)?;
        resolve_shape(&config.trajectory)?;
        Ok(config)
    }

    pub fn sampling(&self) -> SamplingOptions {
        SamplingOptions {
            streams: self.streams,
            eps_length: self.eps_length,
            window_scale: self.window_scale,
            ..SamplingOptions::with_samples(self.samples, self.seed)
        }
    }
}

fn lambda_grid(f: &ConfigFile) -> Result<Vec<f64>, CliError> {
    let grid = match (&f.lambdas, f.lambda_min, f.lambda_max, f.lambda_steps) {
        (Some(list), ..) => list.clone(),
        (None, Some(lo), Some(hi), steps) => {
            let steps = steps.unwrap_or(10);
            if steps == 0 {
                return Err(CliError::Config("--lambda-steps must be positive".into()));
            }
            if steps == 1 {
                vec![lo]
            } else {
                (0..steps)
                    .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
                    .collect()
            }
        }
        _ => {
            return Err(CliError::Config(
                "sweep needs --lambdas or both --lambda-min and --lambda-max".into(),
            ))
        }
    };
    if grid.is_empty() {
        return Err(CliError::Config("the lambda grid is empty".into()));
    }
    if !grid.iter().all(|&l| l > 0.0 && l.is_finite()) {
        return Err(CliError::Config(format!(
            "lambdas must be positive and finite, got {grid:?}"
        )));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::Config(format!(
            "lambdas must be strictly increasing, got {grid:?}"
        )));
    }
    Ok(grid)
}

/// A spec in the mini-syntax when it names a known kind, otherwise a path to
/// a JSON vertex file.
pub fn resolve_shape(s: &str) -> Result<SimplePolygon, CliError> {
    let kind = s.split_once(':').map_or(s, |(k, _)| k).trim();
    if SPEC_KINDS.contains(&kind.to_ascii_lowercase().as_str()) {
        let spec: ShapeSpec = s
            .parse()
            .map_err(|e| CliError::Config(format!("shape '{s}': {e}")))?;
        if let ShapeSpec::FromFile { path } = &spec {
            return load_file_shape(path);
        }
        return build(&spec).map_err(|e| CliError::Config(format!("shape '{s}': {e}")));
    }
    load_file_shape(Path::new(s))
}

fn load_file_shape(path: &Path) -> Result<SimplePolygon, CliError> {
    if !path.exists() {
        return Err(CliError::Config(format!(
            "'{}' is neither a shape spec nor an existing file",
            path.display()
        )));
    }
    load_shape(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
