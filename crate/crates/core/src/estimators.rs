//! Monte Carlo estimates of kinematic measures and mean arc length.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arc::{ArcReport, Classification, Detail, PreparedDomain};
use crate::formulas::{cauchy_mean, mazzolo_mean, small_trajectory_mean, ShapeSummary};
use crate::geom::{GeomError, Point, SimplePolygon, Tolerance};
use crate::sampler::{
    build_window, fill_slot, stream_counts, stream_rng, PlacementSample, SamplingWindow,
    FLOOD_FRACTION,
};
use crate::shapes::{scale, ShapeError};

pub const MIN_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingOptions {
    pub samples: usize,
    pub seed: u64,
    pub streams: usize,
    /// Overrides the default `1e-9 × diameter` length tolerance.
    pub eps_length: Option<f64>,
    /// Multiplies the sides of the covering window. Anything below 1 breaks
    /// the estimators on purpose.
    pub window_scale: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            samples: 100_000,
            seed: 1,
            streams: 8,
            eps_length: None,
            window_scale: 1.0,
        }
    }
}

impl SamplingOptions {
    pub fn with_samples(samples: usize, seed: u64) -> Self {
        SamplingOptions {
            samples,
            seed,
            ..SamplingOptions::default()
        }
    }
}

#[derive(Debug, Error)]
pub enum EstimateError {
    #[error("at least {MIN_SAMPLES} samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("at least one stream is required")]
    NoStreams,
    #[error("window scale must be positive and finite, got {0}")]
    InvalidWindowScale(f64),
    #[error("{capped} of {slots} placement slots hit the resample cap; check the tolerance or the shapes")]
    DegenerateFlood { capped: u64, slots: u64 },
    #[error("no sampled placement crossed the domain boundary")]
    NoIntersections,
    #[error("scale factors must be positive and strictly increasing")]
    InvalidLambdas,
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Running sums over accepted placements of one or more streams.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PlacementTally {
    pub accepted: u64,
    pub capped_slots: u64,
    pub resampled_slots: u64,
    pub resample_draws: u64,
    pub sum_s: f64,
    pub sum_s2: f64,
    pub sum_n: f64,
    pub sum_n2: f64,
    pub overlapping: u64,
    pub intersecting: u64,
    pub contained: u64,
    pub covering: u64,
    pub disjoint: u64,
    /// Sums over intersecting placements only; `a` is the arc count `n/2`.
    pub arc_s: f64,
    pub arc_s2: f64,
    pub arc_a: f64,
    pub arc_a2: f64,
    pub arc_sa: f64,
}

impl PlacementTally {
    pub fn record(&mut self, report: &ArcReport) {
        let s = report.inside_length;
        let n = report.crossing_count as f64;
        self.accepted += 1;
        self.sum_s += s;
        self.sum_s2 += s * s;
        self.sum_n += n;
        self.sum_n2 += n * n;
        match report.classification {
            Classification::Disjoint => self.disjoint += 1,
            Classification::TrajectoryInsideDomain => self.contained += 1,
            Classification::DomainInsideTrajectory => self.covering += 1,
            Classification::Crossing => {
                let a = n / 2.0;
                self.intersecting += 1;
                self.arc_s += s;
                self.arc_s2 += s * s;
                self.arc_a += a;
                self.arc_a2 += a * a;
                self.arc_sa += s * a;
            }
        }
        if report.classification != Classification::Disjoint {
            self.overlapping += 1;
        }
    }

    pub fn merge(&mut self, o: &PlacementTally) {
        self.accepted += o.accepted;
        self.capped_slots += o.capped_slots;
        self.resampled_slots += o.resampled_slots;
        self.resample_draws += o.resample_draws;
        self.sum_s += o.sum_s;
        self.sum_s2 += o.sum_s2;
        self.sum_n += o.sum_n;
        self.sum_n2 += o.sum_n2;
        self.overlapping += o.overlapping;
        self.intersecting += o.intersecting;
        self.contained += o.contained;
        self.covering += o.covering;
        self.disjoint += o.disjoint;
        self.arc_s += o.arc_s;
        self.arc_s2 += o.arc_s2;
        self.arc_a += o.arc_a;
        self.arc_a2 += o.arc_a2;
        self.arc_sa += o.arc_sa;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
    pub window_measure: f64,
}

impl MeasureEstimate {
    /// `window_measure ×` the sample mean of an integrand given its sum and
    /// sum of squares.
    pub fn from_sums(sum: f64, sum2: f64, samples: u64, window_measure: f64) -> Self {
        let n = samples as f64;
        let mean = sum / n;
        let var = if samples > 1 {
            ((sum2 / n - mean * mean) * n / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        MeasureEstimate {
            value: window_measure * mean,
            std_error: window_measure * (var / n).sqrt(),
            samples,
            window_measure,
        }
    }

    fn from_count(count: u64, samples: u64, window_measure: f64) -> Self {
        let c = count as f64;
        MeasureEstimate::from_sums(c, c, samples, window_measure)
    }

    /// `(value − target) / std_error`. A zero sample variance (for example no
    /// hits at all) falls back to the resolution of one sample,
    /// `window_measure / samples`.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.value - target;
        let se = if self.std_error > 0.0 {
            self.std_error
        } else {
            self.window_measure / self.samples.max(1) as f64
        };
        if d == 0.0 {
            0.0
        } else {
            d / se
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measures {
    pub s: MeasureEstimate,
    pub ni: MeasureEstimate,
    pub ntot: MeasureEstimate,
    pub nc: MeasureEstimate,
    pub nsup: MeasureEstimate,
}

impl Measures {
    pub fn from_tally(t: &PlacementTally, window_measure: f64) -> Self {
        let n = t.accepted;
        Measures {
            s: MeasureEstimate::from_sums(t.sum_s, t.sum_s2, n, window_measure),
            ni: MeasureEstimate::from_sums(t.sum_n, t.sum_n2, n, window_measure),
            ntot: MeasureEstimate::from_count(t.overlapping, n, window_measure),
            nc: MeasureEstimate::from_count(t.contained, n, window_measure),
            nsup: MeasureEstimate::from_count(t.covering, n, window_measure),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanArcEstimate {
    /// Total inside length over total arc count, intersecting placements only.
    pub per_arc_mean: f64,
    pub per_arc_stderr: f64,
    /// Mean inside length per intersecting placement.
    pub per_trajectory_mean: f64,
    pub per_trajectory_stderr: f64,
    /// `per_arc_mean` over the domain's Cauchy mean.
    pub normalized_per_arc: f64,
    pub normalized_stderr: f64,
    pub intersecting_count: u64,
    pub contained_count: u64,
    pub covering_count: u64,
    pub disjoint_count: u64,
}

impl MeanArcEstimate {
    pub fn from_tally(t: &PlacementTally, domain: ShapeSummary) -> Result<Self, EstimateError> {
        if t.intersecting == 0 {
            return Err(EstimateError::NoIntersections);
        }
        let m = t.intersecting as f64;
        let ratio = t.arc_s / t.arc_a;
        let per_arc_stderr = if t.intersecting > 1 {
            // First-order delta method for mean(s) / mean(a).
            let ms = t.arc_s / m;
            let ma = t.arc_a / m;
            let c = m / (m - 1.0);
            let vs = (t.arc_s2 / m - ms * ms) * c;
            let va = (t.arc_a2 / m - ma * ma) * c;
            let cov = (t.arc_sa / m - ms * ma) * c;
            let v = (vs - 2.0 * ratio * cov + ratio * ratio * va) / (m * ma * ma);
            v.max(0.0).sqrt()
        } else {
            0.0
        };
        let traj = MeasureEstimate::from_sums(t.arc_s, t.arc_s2, t.intersecting, 1.0);
        let cauchy = cauchy_mean(domain);
        Ok(MeanArcEstimate {
            per_arc_mean: ratio,
            per_arc_stderr,
            per_trajectory_mean: traj.value,
            per_trajectory_stderr: traj.std_error,
            normalized_per_arc: ratio / cauchy,
            normalized_stderr: per_arc_stderr / cauchy,
            intersecting_count: t.intersecting,
            contained_count: t.contained,
            covering_count: t.covering,
            disjoint_count: t.disjoint,
        })
    }

    pub fn total(&self) -> u64 {
        self.intersecting_count + self.contained_count + self.covering_count + self.disjoint_count
    }
}

/// A domain and trajectory ready for repeated sampling.
#[derive(Debug, Clone)]
pub struct Experiment {
    domain: PreparedDomain,
    trajectory: SimplePolygon,
    window: SamplingWindow,
    pub domain_summary: ShapeSummary,
    pub trajectory_summary: ShapeSummary,
}

impl Experiment {
    pub fn new(
        domain: &SimplePolygon,
        trajectory: &SimplePolygon,
        options: &SamplingOptions,
    ) -> Result<Self, EstimateError> {
        if !(options.window_scale > 0.0 && options.window_scale.is_finite()) {
            return Err(EstimateError::InvalidWindowScale(options.window_scale));
        }
        let mut tol = Tolerance::for_pair(domain, trajectory);
        if let Some(eps) = options.eps_length {
            tol = Tolerance::new(eps, tol.eps_param)?;
        }
        let window =
            build_window(domain, trajectory, trajectory.centroid()).scaled(options.window_scale);
        Ok(Experiment {
            domain: PreparedDomain::new(domain.clone(), tol),
            trajectory: trajectory.clone(),
            window,
            domain_summary: ShapeSummary::of(domain),
            trajectory_summary: ShapeSummary::of(trajectory),
        })
    }

    pub fn window(&self) -> &SamplingWindow {
        &self.window
    }

    pub fn domain(&self) -> &PreparedDomain {
        &self.domain
    }

    pub fn trajectory(&self) -> &SimplePolygon {
        &self.trajectory
    }

    fn run_stream(&self, seed: u64, stream: usize, slots: usize) -> PlacementTally {
        let mut rng = stream_rng(seed, stream);
        let mut tally = PlacementTally::default();
        let template = self.trajectory.vertices();
        let mut placed = vec![Point::ORIGIN; template.len()];
        for _ in 0..slots {
            let slot = fill_slot(&self.window, &mut rng, |m| {
                for (p, &v) in placed.iter_mut().zip(template) {
                    *p = m.apply(v);
                }
                self.domain.clip_placed(&placed, Detail::Lengths)
            });
            match slot {
                Some(sample) => {
                    if sample.resample_count > 0 {
                        tally.resampled_slots += 1;
                        tally.resample_draws += u64::from(sample.resample_count);
                    }
                    tally.record(&sample.report);
                }
                None => tally.capped_slots += 1,
            }
        }
        tally
    }

    /// Samples `options.samples` placements over `options.streams` streams.
    /// Per-stream tallies are merged in stream order, so the result does not
    /// depend on the thread count.
    pub fn run(&self, options: &SamplingOptions) -> Result<PlacementTally, EstimateError> {
        if options.samples < MIN_SAMPLES {
            return Err(EstimateError::TooFewSamples(options.samples));
        }
        if options.streams == 0 {
            return Err(EstimateError::NoStreams);
        }
        let counts = stream_counts(options.samples, options.streams);
        let partials: Vec<PlacementTally> = counts
            .par_iter()
            .enumerate()
            .map(|(k, &n)| self.run_stream(options.seed, k, n))
            .collect();
        let mut total = PlacementTally::default();
        for p in &partials {
            total.merge(p);
        }
        let slots = options.samples as u64;
        log::debug!(
            "{} of {} slots resampled ({} extra draws), {} capped",
            total.resampled_slots,
            slots,
            total.resample_draws,
            total.capped_slots
        );
        if total.capped_slots as f64 > FLOOD_FRACTION * slots as f64 {
            return Err(EstimateError::DegenerateFlood {
                capped: total.capped_slots,
                slots,
            });
        }
        Ok(total)
    }

    /// The first `count` accepted placements of stream 0, with arc polylines.
    pub fn sample_placements(&self, count: usize, seed: u64) -> Vec<PlacementSample> {
        let mut rng = stream_rng(seed, 0);
        (0..count)
            .filter_map(|_| {
                fill_slot(&self.window, &mut rng, |m| {
                    self.domain.clip(&self.trajectory, m, Detail::Polylines)
                })
            })
            .collect()
    }
}

pub fn estimate_measures(
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    options: &SamplingOptions,
) -> Result<Measures, EstimateError> {
    let exp = Experiment::new(domain, trajectory, options)?;
    let tally = exp.run(options)?;
    Ok(Measures::from_tally(&tally, exp.window().measure()))
}

pub fn estimate_mean_arc(
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    options: &SamplingOptions,
) -> Result<MeanArcEstimate, EstimateError> {
    let exp = Experiment::new(domain, trajectory, options)?;
    let tally = exp.run(options)?;
    MeanArcEstimate::from_tally(&tally, exp.domain_summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub lambda: f64,
    /// Trajectory area over domain area.
    pub area_ratio: f64,
    pub estimate: MeanArcEstimate,
    pub eq5: f64,
    pub eq3: f64,
    pub mazzolo: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

/// One mean-arc estimate per scale of `template` (scaled about its centroid).
/// Row `i` uses seed `options.seed + i`.
pub fn sweep_scale(
    domain: &SimplePolygon,
    template: &SimplePolygon,
    lambdas: &[f64],
    options: &SamplingOptions,
) -> Result<SweepResult, EstimateError> {
    let increasing = lambdas.windows(2).all(|w| w[0] < w[1]);
    if lambdas.is_empty() || !increasing || !lambdas.iter().all(|&l| l > 0.0 && l.is_finite()) {
        return Err(EstimateError::InvalidLambdas);
    }
    let rows = lambdas
        .par_iter()
        .enumerate()
        .map(|(i, &lambda)| {
            let trajectory = scale(template, lambda)?;
            let opts = SamplingOptions {
                seed: options.seed.wrapping_add(i as u64),
                ..*options
            };
            let exp = Experiment::new(domain, &trajectory, &opts)?;
            let tally = exp.run(&opts)?;
            let d = exp.domain_summary;
            let t = exp.trajectory_summary;
            Ok(SweepRow {
                lambda,
                area_ratio: t.area / d.area,
                estimate: MeanArcEstimate::from_tally(&tally, d)?,
                eq5: small_trajectory_mean(d, t),
                eq3: cauchy_mean(d),
                mazzolo: mazzolo_mean(d, t),
            })
        })
        .collect::<Result<Vec<_>, EstimateError>>()?;
    Ok(SweepResult { rows })
}
