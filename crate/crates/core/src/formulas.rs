//! Closed-form kinematic measures and mean arc lengths.
//!
//! Every function takes [`ShapeSummary`] values (area and perimeter only);
//! geometry never reaches this module. `d` is the explored domain, `t` the
//! trajectory loop.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{area, perimeter, SimplePolygon};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeSummary {
    pub area: f64,
    pub perimeter: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FormulaError {
    #[error("invalid summary: area={area}, perimeter={perimeter}")]
    InvalidSummary { area: f64, perimeter: f64 },
    #[error(
        "small-trajectory mean is negative ({0}); the trajectory is too large for the formula"
    )]
    NegativeResult(f64),
}

impl ShapeSummary {
    /// Validates positivity and the isoperimetric bound `P² ≥ 4πA`.
    pub fn new(area: f64, perimeter: f64) -> Result<Self, FormulaError> {
        let ok = area > 0.0
            && perimeter > 0.0
            && area.is_finite()
            && perimeter.is_finite()
            && perimeter * perimeter >= 4.0 * PI * area * (1.0 - 1e-9);
        if ok {
            Ok(ShapeSummary { area, perimeter })
        } else {
            Err(FormulaError::InvalidSummary { area, perimeter })
        }
    }

    pub fn of(p: &SimplePolygon) -> Self {
        // Valid polygons always satisfy the bound.
        ShapeSummary {
            area: area(p),
            perimeter: perimeter(p),
        }
    }

    /// The summary of this shape scaled by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        ShapeSummary {
            area: self.area * lambda * lambda,
            perimeter: self.perimeter * lambda,
        }
    }
}

/// Measure of inside arc length over all placements: `2π·A₁·P₂`.
pub fn blaschke_s(d: ShapeSummary, t: ShapeSummary) -> f64 {
    TAU * d.area * t.perimeter
}

/// Measure of boundary crossings: `4·P₁·P₂`.
pub fn poincare_ni(d: ShapeSummary, t: ShapeSummary) -> f64 {
    4.0 * d.perimeter * t.perimeter
}

/// Generalized Cauchy mean arc length `π·A₁/P₁`.
pub fn cauchy_mean(d: ShapeSummary) -> f64 {
    PI * d.area / d.perimeter
}

/// Measure of overlapping placements of two convex shapes:
/// `2π(A₁ + A₂) + P₁·P₂`.
pub fn santalo_ntot(d: ShapeSummary, t: ShapeSummary) -> f64 {
    TAU * (d.area + t.area) + d.perimeter * t.perimeter
}

/// Partial-overlap measure in the small-trajectory regime, `N_i / 2`.
pub fn partial_overlap_measure(d: ShapeSummary, t: ShapeSummary) -> f64 {
    poincare_ni(d, t) / 2.0
}

/// Measure of fully contained placements in the small-trajectory regime:
/// `2π(A₁ + A₂) − P₁·P₂`. Exact for disk pairs.
pub fn contained_measure(d: ShapeSummary, t: ShapeSummary) -> f64 {
    TAU * (d.area + t.area) - d.perimeter * t.perimeter
}

/// Small-trajectory mean arc length `(P₁P₂ − 2πA₂) / (2P₁)`. May be negative
/// for large trajectories; see [`small_trajectory_mean_checked`].
pub fn small_trajectory_mean(d: ShapeSummary, t: ShapeSummary) -> f64 {
    (d.perimeter * t.perimeter - TAU * t.area) / (2.0 * d.perimeter)
}

pub fn small_trajectory_mean_checked(
    d: ShapeSummary,
    t: ShapeSummary,
) -> Result<f64, FormulaError> {
    let v = small_trajectory_mean(d, t);
    if v < 0.0 {
        Err(FormulaError::NegativeResult(v))
    } else {
        Ok(v)
    }
}

/// Mean arc length over all overlapping placements of a convex pair:
/// the Blaschke measure divided by the Santaló measure.
pub fn mazzolo_mean(d: ShapeSummary, t: ShapeSummary) -> f64 {
    blaschke_s(d, t) / santalo_ntot(d, t)
}

/// Piecewise model: the small-trajectory mean until it first reaches the
/// Cauchy value, then the Cauchy value.
pub fn piecewise_mean(d: ShapeSummary, template: ShapeSummary, lambda: f64) -> f64 {
    let plateau = cauchy_mean(d);
    match small_to_cauchy_crossover(d, template) {
        Some(cross) if lambda < cross => small_trajectory_mean(d, template.scaled(lambda)),
        _ => plateau,
    }
}

/// Smallest scale `λ > 0` at which the small-trajectory mean of the scaled
/// template reaches the Cauchy value.
pub fn small_to_cauchy_crossover(d: ShapeSummary, template: ShapeSummary) -> Option<f64> {
    // λp/2 − πλ²a/P₁ = πA₁/P₁  ⇔  πa·λ² − (pP₁/2)·λ + πA₁ = 0
    let qa = PI * template.area;
    let qb = -template.perimeter * d.perimeter / 2.0;
    let qc = PI * d.area;
    let mut disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        // Zero for disk pairs (the parabola touches the plateau); absorb rounding.
        if disc > -1e-12 * qb * qb {
            disc = 0.0;
        } else {
            return None;
        }
    }
    // Numerically stable smaller root.
    let q = -0.5 * (qb - disc.sqrt());
    Some(qc / q)
}
