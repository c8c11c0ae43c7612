//! Command-line driver for `meanarc`: runs sweeps, verification tables,
//! critical-scale searches and fit tests, and writes CSV, JSON and SVG files.

pub mod config;
pub mod output;
pub mod svg;

use std::io::Write;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use meanarc::arc::{Detail, PreparedDomain};
use meanarc::critical::{
    default_bounds, find_critical_scale, test_embeddability, CriticalError, CriticalScaleResult,
    EmbedReport, SearchOptions,
};
use meanarc::estimators::{sweep_scale, EstimateError, Experiment, Measures};
use meanarc::formulas::{
    blaschke_s, cauchy_mean, contained_measure, poincare_ni, santalo_ntot, ShapeSummary,
};
use meanarc::geom::{is_convex, RigidMotion, SimplePolygon, Tolerance};
use meanarc::sampler::PlacementSample;
use meanarc::shapes::scale;

use config::{resolve_shape, Command, RunConfig};
use output::{Metadata, Status, SweepReport, VerifyReport, VerifyRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("verification failed: {0} quantities outside ±{z} standard errors", z = output::Z_LIMIT)]
    Verification(usize),
    #[error(
        "{capped} of {slots} sampling slots stayed degenerate after repeated redraws; \
         check the shapes or raise --eps-length"
    )]
    Flood { capped: u64, slots: u64 },
    #[error("{0}")]
    Computation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Verification(_) => 4,
            CliError::Flood { .. } => 5,
            CliError::Computation(_) => 6,
        }
    }
}

impl From<EstimateError> for CliError {
    fn from(e: EstimateError) -> Self {
        match e {
            EstimateError::DegenerateFlood { capped, slots } => CliError::Flood { capped, slots },
            EstimateError::TooFewSamples(_)
            | EstimateError::NoStreams
            | EstimateError::InvalidWindowScale(_)
            | EstimateError::InvalidLambdas
            | EstimateError::Geometry(_)
            | EstimateError::Shape(_) => CliError::Config(e.to_string()),
            EstimateError::NoIntersections => CliError::Computation(e.to_string()),
        }
    }
}

impl From<CriticalError> for CliError {
    fn from(e: CriticalError) -> Self {
        match e {
            CriticalError::Estimate(e) => e.into(),
            CriticalError::Shape(e) => CliError::Config(e.to_string()),
            other => CliError::Computation(other.to_string()),
        }
    }
}

fn io_err(path: PathBuf) -> impl FnOnce(std::io::Error) -> CliError {
    move |source| CliError::Io { path, source }
}

/// Runs `config`, writing result files under `config.out` and a summary to
/// `log`.
pub fn run(config: &RunConfig, log: &mut dyn Write) -> Result<(), CliError> {
    std::fs::create_dir_all(&config.out).map_err(io_err(config.out.clone()))?;
    let domain = resolve_shape(&config.domain)?;
    let trajectory = resolve_shape(&config.trajectory)?;
    match config.command {
        Command::Sweep => run_sweep(config, &domain, &trajectory, log),
        Command::Verify => run_verify(config, &domain, &trajectory, log),
        Command::Critical => run_critical(config, &domain, &trajectory, log),
        Command::Embed => run_embed(config, &domain, &trajectory, log),
        Command::Sample => run_sample(config, &domain, &trajectory, log),
    }
}

fn say(log: &mut dyn Write, text: &str) -> Result<(), CliError> {
    log.write_all(text.as_bytes())
        .map_err(io_err(PathBuf::from("<output>")))
}

fn search_options(config: &RunConfig) -> SearchOptions {
    let mut o = SearchOptions {
        seed: config.seed,
        ..SearchOptions::default()
    };
    if let Some(b) = config.budget {
        o.budget = b;
    }
    o
}

pub fn run_sweep(
    config: &RunConfig,
    domain: &SimplePolygon,
    template: &SimplePolygon,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let result = sweep_scale(domain, template, &config.lambdas, &config.sampling())?;
    let rows = output::sweep_records(&result);

    let mut csv = Vec::new();
    output::write_sweep_csv(&rows, &mut csv)
        .map_err(|e| CliError::Computation(format!("csv: {e}")))?;
    output::write_file(&config.out.join("sweep.csv"), &csv)?;
    let report = SweepReport {
        metadata: Metadata::of(config),
        rows: rows.clone(),
    };
    output::write_json(&report, &config.out.join("sweep.json"))?;
    if config.svg {
        output::write_file(
            &config.out.join("sweep.svg"),
            svg::render_sweep(&rows).as_bytes(),
        )?;
    }

    let mut text = format!(
        "{:>10} {:>12} {:>12} {:>10} {:>10}\n",
        "lambda", "per_arc", "stderr", "norm", "contained"
    );
    for r in &rows {
        text.push_str(&format!(
            "{:>10.4} {:>12.6} {:>12.6} {:>10.4} {:>10}\n",
            r.lambda, r.per_arc_mean, r.per_arc_stderr, r.normalized_per_arc, r.n_contained
        ));
    }
    say(log, &text)
}

/// Closed-form rows for the pair; the overlap rows only for convex pairs.
pub fn verify_rows(
    measures: &Measures,
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
) -> Vec<VerifyRow> {
    let d = ShapeSummary::of(domain);
    let t = ShapeSummary::of(trajectory);
    let mut rows = vec![
        VerifyRow::checked("S", blaschke_s(d, t), &measures.s),
        VerifyRow::checked("Ni", poincare_ni(d, t), &measures.ni),
    ];
    // A measure cannot be negative; the identity dips below zero only from
    // the isoperimetric deficit of polygonal disks.
    let nc = contained_measure(d, t).max(0.0);
    if is_convex(domain) && is_convex(trajectory) {
        rows.push(VerifyRow::checked("Ntot", santalo_ntot(d, t), &measures.ntot));
        rows.push(VerifyRow::checked("Nc", nc, &measures.nc));
    } else {
        let note = "needs convex shapes";
        rows.push(VerifyRow::skipped("Ntot", santalo_ntot(d, t), note));
        rows.push(VerifyRow::skipped("Nc", nc, note));
    }
    rows
}

pub fn run_verify(
    config: &RunConfig,
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let opts = config.sampling();
    let exp = Experiment::new(domain, trajectory, &opts)?;
    let tally = exp.run(&opts)?;
    let measures = Measures::from_tally(&tally, exp.window().measure());
    let rows = verify_rows(&measures, domain, trajectory);
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    let report = VerifyReport {
        metadata: Metadata::of(config),
        rows,
        passed: failed == 0,
    };
    output::write_json(&report, &config.out.join("verify.json"))?;
    say(log, &output::verify_table(&report.rows))?;
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub metadata: Metadata,
    pub bounds: (f64, f64),
    pub result: CriticalScaleResult,
}

/// Placement of `trajectory` by `motion` with its arcs, for drawing.
fn placement(domain: &SimplePolygon, trajectory: &SimplePolygon, motion: RigidMotion) -> PlacementSample {
    let prepared = PreparedDomain::new(domain.clone(), Tolerance::for_pair(domain, trajectory));
    PlacementSample {
        motion,
        report: prepared.clip(trajectory, motion, Detail::Polylines),
        resample_count: 0,
    }
}

pub fn run_critical(
    config: &RunConfig,
    domain: &SimplePolygon,
    template: &SimplePolygon,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let bounds = default_bounds(domain, template);
    let result = find_critical_scale(domain, template, bounds, &search_options(config))?;
    let report = CriticalReport {
        metadata: Metadata::of(config),
        bounds,
        result,
    };
    output::write_json(&report, &config.out.join("critical.json"))?;
    if config.svg {
        let fitted = scale(template, result.lambda_critical)
            .map_err(|e| CliError::Computation(e.to_string()))?;
        let scene = svg::render_scene(
            domain,
            &fitted,
            &[placement(domain, &fitted, result.witness)],
            cauchy_mean(ShapeSummary::of(domain)),
        );
        output::write_file(&config.out.join("critical.svg"), scene.as_bytes())?;
    }
    say(
        log,
        &format!(
            "lambda_critical {:.6} (search failed at {:.6}; {} evaluations)\n",
            result.lambda_critical, result.lambda_upper, result.stats.evaluations
        ),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbedOutput {
    pub metadata: Metadata,
    pub report: EmbedReport,
}

pub fn run_embed(
    config: &RunConfig,
    container: &SimplePolygon,
    candidate: &SimplePolygon,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let report =
        test_embeddability(container, candidate, &config.sampling(), &search_options(config))?;
    output::write_json(
        &EmbedOutput {
            metadata: Metadata::of(config),
            report,
        },
        &config.out.join("embed.json"),
    )?;
    if config.svg {
        let shown: Vec<PlacementSample> = report
            .evidence
            .witness
            .map(|w| placement(container, candidate, w))
            .into_iter()
            .collect();
        let scene = svg::render_scene(
            container,
            candidate,
            &shown,
            cauchy_mean(ShapeSummary::of(container)),
        );
        output::write_file(&config.out.join("embed.svg"), scene.as_bytes())?;
    }
    let mut text = format!(
        "fits (direct search): {}\nfits (contained measure, z = {:.2}): {}\n",
        report.fits, report.evidence.nc_z, report.statistical_fits
    );
    if !report.agree {
        text.push_str("warning: the two verdicts disagree\n");
    }
    say(log, &text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub motion: RigidMotion,
    pub inside_length: f64,
    pub crossing_count: usize,
    pub classification: meanarc::arc::Classification,
    pub resample_count: u32,
}

pub fn run_sample(
    config: &RunConfig,
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    log: &mut dyn Write,
) -> Result<(), CliError> {
    let exp = Experiment::new(domain, trajectory, &config.sampling())?;
    let placements = exp.sample_placements(config.placements, config.seed);
    let records: Vec<SampleRecord> = placements
        .iter()
        .map(|p| SampleRecord {
            motion: p.motion,
            inside_length: p.report.inside_length,
            crossing_count: p.report.crossing_count,
            classification: p.report.classification,
            resample_count: p.resample_count,
        })
        .collect();
    output::write_json(&records, &config.out.join("sample.json"))?;
    let scene = svg::render_scene(domain, trajectory, &placements, cauchy_mean(exp.domain_summary));
    output::write_file(&config.out.join("sample.svg"), scene.as_bytes())?;
    say(
        log,
        &format!(
            "{} placements written to {}\n",
            records.len(),
            config.out.join("sample.svg").display()
        ),
    )
}
