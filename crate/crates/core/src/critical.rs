//! Largest congruent copy of a trajectory that fits inside a domain, and the
//! direct fit test it is built on.
//!
//! The search is one-sided: a found placement is verified by
//! [`PreparedDomain::contains_placed`], so a reported scale always fits, but a
//! missed placement makes the result a lower bound.

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arc::PreparedDomain;
use crate::estimators::{
    EstimateError, Experiment, MeanArcEstimate, MeasureEstimate, Measures, SamplingOptions,
};
use crate::formulas::cauchy_mean;
use crate::geom::{
    locate_in_loop, point_segment_distance, BoundingBox, Location, Point, RigidMotion,
    SimplePolygon, Tolerance,
};
use crate::sampler::stream_rng;
use crate::shapes::{scale, ShapeError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Margin evaluations allowed per containment search.
    pub budget: usize,
    pub seed: u64,
    /// Positions per axis in the coarse start grid.
    pub grid: usize,
    /// Rotations in the coarse start grid.
    pub angles: usize,
    /// Coarse candidates refined locally.
    pub starts: usize,
    /// Relative width of the final scale bracket.
    pub rel_tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: 10_000,
            seed: 1,
            grid: 8,
            angles: 12,
            starts: 4,
            rel_tol: 1e-4,
        }
    }
}

#[derive(Debug, Error)]
pub enum CriticalError {
    #[error("no fitting placement found at the lower bound {0}")]
    LowerBoundDoesNotFit(f64),
    #[error("a fitting placement exists at the upper bound {0}")]
    UpperBoundFits(f64),
    #[error("scale bounds must satisfy 0 < low < high, got [{0}, {1}]")]
    BoundsInvalid(f64, f64),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Estimate(#[from] EstimateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub evaluations: usize,
    pub refinement_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalScaleResult {
    pub lambda_critical: f64,
    /// Smallest scale at which the search failed.
    pub lambda_upper: f64,
    /// Places the template (scaled by `lambda_critical` about its centroid)
    /// inside the domain.
    pub witness: RigidMotion,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    pub witness: Option<RigidMotion>,
    pub best_margin: f64,
    pub best_motion: RigidMotion,
    pub evaluations: usize,
}

/// Signed distance from `q` to the loop: positive inside.
fn loop_depth(q: Point, verts: &[Point], eps: f64) -> f64 {
    let n = verts.len();
    let d = (0..n)
        .map(|i| point_segment_distance(q, verts[i], verts[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min);
    match locate_in_loop(q, verts, eps) {
        Location::Inside => d,
        Location::Outside => -d,
        Location::OnBoundary => 0.0,
    }
}

/// Containment margin of a placed loop: the smallest depth of its vertices
/// inside the domain, and of the domain's vertices outside it. Positive only
/// if the loop fits.
pub fn containment_margin(domain: &PreparedDomain, placed: &[Point]) -> f64 {
    let mut m = f64::INFINITY;
    for &v in placed {
        m = m.min(domain.depth(v));
        if m < 0.0 {
            return m;
        }
    }
    let (center, rim) = enclosing_disk(placed);
    let eps = domain.tolerance().eps_length;
    for &w in domain.polygon().vertices() {
        // Farther than `m` from the disk around the loop: cannot lower `m`.
        if w.dist(center) - rim >= m {
            continue;
        }
        m = m.min(-loop_depth(w, placed, eps));
    }
    m
}

/// A disk (not the smallest) containing all points.
fn enclosing_disk(points: &[Point]) -> (Point, f64) {
    let c = BoundingBox::of_points(points).center();
    let r = points.iter().map(|p| p.dist(c)).fold(0.0, f64::max);
    (c, r)
}

/// Streaming log-sum-exp lower envelope: `min − log(Σ exp(−β(g − min)))/β`.
struct SoftMin {
    beta: f64,
    min: f64,
    acc: f64,
}

/// Terms further than this many `1/β` above the minimum are dropped.
const SOFT_CUTOFF: f64 = 15.0;

impl SoftMin {
    fn new(beta: f64) -> Self {
        SoftMin {
            beta,
            min: f64::INFINITY,
            acc: 0.0,
        }
    }

    #[inline]
    fn push(&mut self, g: f64) {
        if g < self.min {
            self.acc = self.acc * (-self.beta * (self.min - g)).exp() + 1.0;
            self.min = g;
        } else {
            let x = self.beta * (g - self.min);
            // exp(-15) relative to the leading term is noise for the search.
            if x < SOFT_CUTOFF {
                self.acc += (-x).exp();
            }
        }
    }

    fn value(&self) -> f64 {
        self.min - self.acc.ln() / self.beta
    }
}

struct Searcher<'a> {
    domain: &'a PreparedDomain,
    /// The candidate about its centroid, indexed; domain vertices are taken
    /// into this frame to measure them against the placed loop.
    shape: PreparedDomain,
    /// Largest vertex distance from the centroid.
    rim: f64,
    placed: Vec<Point>,
    depths: Vec<f64>,
    /// Current placement: centroid position and rotation.
    at: [f64; 3],
    evaluations: usize,
}

impl Searcher<'_> {
    fn place(&mut self, q: [f64; 3]) {
        let (s, c) = q[2].sin_cos();
        for (p, v) in self.placed.iter_mut().zip(self.shape.polygon().vertices()) {
            *p = Point::new(c * v.x - s * v.y + q[0], s * v.x + c * v.y + q[1]);
        }
        self.at = q;
    }

    /// Domain point `w` in the candidate's own frame.
    #[inline]
    fn local(&self, w: Point) -> Point {
        let (s, c) = self.at[2].sin_cos();
        let d = Point::new(w.x - self.at[0], w.y - self.at[1]);
        Point::new(c * d.x + s * d.y, -s * d.x + c * d.y)
    }

    fn may_reach(&self, w: Point, within: f64) -> bool {
        w.dist(Point::new(self.at[0], self.at[1])) - self.rim <= within
    }

    /// [`containment_margin`] when positive; when negative, the depth of
    /// the first vertex found outside.
    fn margin(&mut self, q: [f64; 3]) -> f64 {
        self.evaluations += 1;
        self.place(q);
        let mut m = f64::INFINITY;
        for &v in &self.placed {
            match self.domain.locate(v) {
                Location::Outside => return -self.domain.boundary_distance(v),
                Location::OnBoundary => return 0.0,
                Location::Inside if m.is_infinite() => m = self.domain.boundary_distance(v),
                Location::Inside => self.domain.for_each_edge_near(v, m, |_, d| m = m.min(d)),
            }
        }
        for &w in self.domain.polygon().vertices() {
            if !self.may_reach(w, m) {
                continue;
            }
            let local = self.local(w);
            match self.shape.locate(local) {
                Location::Inside => m = m.min(-self.shape.boundary_distance(local)),
                Location::OnBoundary => m = m.min(0.0),
                Location::Outside => self.shape.for_each_edge_near(local, m, |_, d| m = m.min(d)),
            }
        }
        m
    }

    /// Smooth lower bound of the margin at sharpness `beta`, and the exact
    /// margin. Every vertex-edge distance on the relevant side is a term, so
    /// nearest-edge switches leave no kinks.
    fn soft(&mut self, q: [f64; 3], beta: f64) -> (f64, f64) {
        self.evaluations += 1;
        self.place(q);
        let domain = self.domain;
        // Pass 1: exact depth of outside vertices, smallest depth of inside
        // ones (marked +∞ here).
        self.depths.clear();
        let mut m1 = f64::INFINITY;
        let mut inside_min = f64::INFINITY;
        for &v in &self.placed {
            let d = match domain.locate(v) {
                Location::Outside => -domain.boundary_distance(v),
                Location::OnBoundary => 0.0,
                Location::Inside => {
                    if inside_min.is_infinite() {
                        inside_min = domain.boundary_distance(v);
                    } else {
                        domain.for_each_edge_near(v, inside_min, |_, d| {
                            inside_min = inside_min.min(d)
                        });
                    }
                    f64::INFINITY
                }
            };
            m1 = m1.min(d);
            self.depths.push(d);
        }
        m1 = m1.min(inside_min);
        // Terms above this are dropped by `SoftMin` anyway.
        let cutoff = m1 + SOFT_CUTOFF / beta;
        let mut soft = SoftMin::new(beta);
        for (&v, &d) in self.placed.iter().zip(&self.depths) {
            if d.is_infinite() {
                domain.for_each_edge_near(v, cutoff, |_, dist| soft.push(dist));
            } else {
                soft.push(d);
            }
        }
        for &w in domain.polygon().vertices() {
            if !self.may_reach(w, cutoff) {
                continue;
            }
            let local = self.local(w);
            match self.shape.locate(local) {
                Location::Outside => self
                    .shape
                    .for_each_edge_near(local, cutoff, |_, dist| soft.push(dist)),
                Location::Inside => soft.push(-self.shape.boundary_distance(local)),
                Location::OnBoundary => soft.push(0.0),
            }
        }
        (soft.value(), soft.min)
    }

    fn verified(&mut self, q: [f64; 3]) -> bool {
        self.place(q);
        self.domain.contains_placed(&self.placed)
    }
}

fn motion_for(centroid: Point, q: [f64; 3]) -> RigidMotion {
    let r = RigidMotion::new(q[2], 0.0, 0.0).apply(centroid);
    RigidMotion::new(q[2], q[0] - r.x, q[1] - r.y)
}

const DIRECTIONS: usize = 6;
const RANDOM_DIRECTIONS: usize = 10;
const SHARPNESS: f64 = 16.0;

fn direction(k: usize) -> [f64; 3] {
    let mut d = [0.0; 3];
    d[k / 2] = if k % 2 == 0 { 1.0 } else { -1.0 };
    d
}

struct LocalSearch {
    /// Rotation is measured in arc length at the candidate's rim, so one
    /// step moves every vertex by about the same amount in every direction.
    rim: f64,
    h0: f64,
    floor: f64,
    dirs: Vec<[f64; 3]>,
}

impl LocalSearch {
    /// Random-direction ascent on the soft margin. Returns the best exact
    /// margin seen, where, and whether that placement verified as fitting.
    fn run<R: Rng>(
        &mut self,
        s: &mut Searcher,
        rng: &mut R,
        q0: [f64; 3],
        budget: usize,
    ) -> (f64, [f64; 3], bool) {
        let limit = s.evaluations + budget;
        let mut q = q0;
        let mut h = self.h0;
        let mut best = (f64::NEG_INFINITY, q0);
        loop {
            // Smoothing width follows the step so the search resolves kinks
            // only as finely as it moves.
            let beta = SHARPNESS / h;
            let (cur, hard) = s.soft(q, beta);
            if hard > best.0 {
                best = (hard, q);
            }
            if hard > 0.0 && s.verified(q) {
                return (hard, q, true);
            }
            if s.evaluations >= limit || h < self.floor {
                return (best.0, best.1, false);
            }
            self.dirs.truncate(DIRECTIONS);
            for _ in 0..RANDOM_DIRECTIONS {
                let z = rng.random::<f64>() * 2.0 - 1.0;
                let phi = rng.random::<f64>() * TAU;
                let r = (1.0 - z * z).sqrt();
                self.dirs.push([r * phi.cos(), r * phi.sin(), z]);
            }
            let mut next = (cur, q);
            for u in &self.dirs {
                let len = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
                let t = h / len;
                let cand = [q[0] + u[0] * t, q[1] + u[1] * t, q[2] + u[2] * t / self.rim];
                let (sc, _) = s.soft(cand, beta);
                if sc > next.0 {
                    next = (sc, cand);
                }
            }
            if next.0 > cur {
                // Small gains (typically pure rotations) keep the step.
                if next.0 - cur > 0.25 * h {
                    h = (1.5 * h).min(2.0 * self.h0);
                }
                q = next.1;
            } else {
                h *= 0.5;
            }
        }
    }
}

/// Looks for a placement of `candidate` strictly inside `domain`.
///
/// `warm` (a motion of `candidate`) is refined first when given. Then a
/// coarse grid over the domain's box and rotations ranks starting points, and
/// the best few are refined by ascent on a smoothed [`containment_margin`].
pub fn search_containment(
    domain: &PreparedDomain,
    candidate: &SimplePolygon,
    options: &SearchOptions,
    warm: Option<RigidMotion>,
) -> SearchOutcome {
    let centroid = candidate.centroid();
    let shape = candidate.translated(Point::ORIGIN - centroid);
    let rim = shape
        .vertices()
        .iter()
        .map(|v| v.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut s = Searcher {
        domain,
        placed: shape.vertices().to_vec(),
        shape: PreparedDomain::new(shape.clone(), Tolerance::for_diameter(shape.diameter())),
        rim,
        depths: Vec::new(),
        at: [0.0; 3],
        evaluations: 0,
    };
    let bbox = domain.polygon().bbox();
    let g = options.grid.max(1);
    let k = options.angles.max(1);
    let cw = bbox.width() / g as f64;
    let ch = bbox.height() / g as f64;
    let dtheta = TAU / k as f64;

    let mut rng = stream_rng(options.seed, 0);
    let mut local = LocalSearch {
        rim,
        h0: 0.5 * cw.max(ch),
        floor: 1e-7 * bbox.diagonal(),
        dirs: (0..DIRECTIONS).map(direction).collect(),
    };
    // Warm start and coarse starts share the budget equally.
    let per_start = options.budget / (options.starts.max(1) + 2);
    let mut best = (f64::NEG_INFINITY, [bbox.center().x, bbox.center().y, 0.0]);
    let found = |s: &Searcher, q: [f64; 3], m: f64| SearchOutcome {
        witness: Some(motion_for(centroid, q)),
        best_margin: m,
        best_motion: motion_for(centroid, q),
        evaluations: s.evaluations,
    };

    if let Some(w) = warm {
        let c = w.apply(centroid);
        let q = [c.x, c.y, w.theta];
        let (m, q, ok) = local.run(&mut s, &mut rng, q, per_start);
        if ok {
            return found(&s, q, m);
        }
        best = (m, q);
    }

    let mut coarse = Vec::with_capacity(g * g * k);
    for iy in 0..g {
        for ix in 0..g {
            let x = bbox.min.x + (ix as f64 + 0.5) * cw;
            let y = bbox.min.y + (iy as f64 + 0.5) * ch;
            if domain.locate(Point::new(x, y)) != Location::Inside {
                continue;
            }
            let phase = rng.random::<f64>() * dtheta;
            for a in 0..k {
                let q = [x, y, phase + a as f64 * dtheta];
                coarse.push((s.margin(q), q));
            }
        }
    }
    coarse.sort_by(|a, b| b.0.total_cmp(&a.0));
    for &(_, q0) in coarse.iter().take(options.starts.max(1)) {
        let (m, q, ok) = local.run(&mut s, &mut rng, q0, per_start);
        if ok {
            return found(&s, q, m);
        }
        if m > best.0 {
            best = (m, q);
        }
    }
    SearchOutcome {
        witness: None,
        best_margin: best.0,
        best_motion: motion_for(centroid, best.1),
        evaluations: s.evaluations,
    }
}

/// Bounds that bracket the critical scale for any pair: above
/// `diam(domain)/diam(template)` nothing fits.
pub fn default_bounds(domain: &SimplePolygon, template: &SimplePolygon) -> (f64, f64) {
    let hi = 1.001 * domain.diameter() / template.diameter();
    (1e-3 * hi, hi)
}

/// Largest scale of `template` (about its centroid) for which a fitting
/// placement was found, by bisection between `bounds`.
pub fn find_critical_scale(
    domain: &SimplePolygon,
    template: &SimplePolygon,
    bounds: (f64, f64),
    options: &SearchOptions,
) -> Result<CriticalScaleResult, CriticalError> {
    let (mut lo, mut hi) = bounds;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(CriticalError::BoundsInvalid(lo, hi));
    }
    let prepared = PreparedDomain::new(domain.clone(), Tolerance::for_diameter(domain.diameter()));
    let mut evaluations = 0;
    let mut search = |lambda: f64, warm: Option<RigidMotion>| -> Result<_, CriticalError> {
        let scaled = scale(template, lambda)?;
        let out = search_containment(&prepared, &scaled, options, warm);
        evaluations += out.evaluations;
        Ok(out.witness)
    };
    if search(hi, None)?.is_some() {
        return Err(CriticalError::UpperBoundFits(hi));
    }
    let mut witness = search(lo, None)?.ok_or(CriticalError::LowerBoundDoesNotFit(lo))?;
    let mut depth = 0;
    while hi - lo > options.rel_tol * lo {
        // Geometric midpoint while the bracket spans orders of magnitude.
        let mid = if hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        // Scaling is about the centroid, so a placement at `lo` keeps its
        // centroid and angle at `mid`.
        match search(mid, Some(witness))? {
            Some(w) => {
                lo = mid;
                witness = w;
            }
            None => hi = mid,
        }
        depth += 1;
    }
    log::debug!("critical scale in [{lo}, {hi}] after {evaluations} evaluations");
    Ok(CriticalScaleResult {
        lambda_critical: lo,
        lambda_upper: hi,
        witness,
        stats: SearchStats {
            evaluations,
            refinement_depth: depth,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedEvidence {
    pub witness: Option<RigidMotion>,
    pub nc_estimate: MeasureEstimate,
    /// `nc / std_error`, zero when no contained placement was sampled.
    pub nc_z: f64,
    /// Cauchy mean of the container minus the sampled per-arc mean.
    pub mean_gap: Option<f64>,
    pub mean_arc: Option<MeanArcEstimate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbedReport {
    /// Direct-search verdict.
    pub fits: bool,
    /// Sampling verdict: contained placements significant beyond 3 standard
    /// errors.
    pub statistical_fits: bool,
    pub agree: bool,
    pub evidence: EmbedEvidence,
}

pub const EMBED_Z_THRESHOLD: f64 = 3.0;

/// Decides whether `candidate` fits inside `container` at its own size, by
/// direct search, and reports the sampled contained-placement measure next
/// to it.
pub fn test_embeddability(
    container: &SimplePolygon,
    candidate: &SimplePolygon,
    sampling: &SamplingOptions,
    search: &SearchOptions,
) -> Result<EmbedReport, CriticalError> {
    let prepared =
        PreparedDomain::new(container.clone(), Tolerance::for_pair(container, candidate));
    let direct = search_containment(&prepared, candidate, search, None);

    let exp = Experiment::new(container, candidate, sampling)?;
    let tally = exp.run(sampling)?;
    let measures = Measures::from_tally(&tally, exp.window().measure());
    let nc = measures.nc;
    let nc_z = if nc.std_error > 0.0 {
        nc.value / nc.std_error
    } else {
        0.0
    };
    let mean_arc = MeanArcEstimate::from_tally(&tally, exp.domain_summary).ok();
    let mean_gap = mean_arc.map(|m| cauchy_mean(exp.domain_summary) - m.per_arc_mean);
    let fits = direct.witness.is_some();
    let statistical_fits = nc_z > EMBED_Z_THRESHOLD;
    if fits != statistical_fits {
        log::info!("direct search and sampling disagree (fits={fits}, nc z={nc_z:.2})");
    }
    Ok(EmbedReport {
        fits,
        statistical_fits,
        agree: fits == statistical_fits,
        evidence: EmbedEvidence {
            witness: direct.witness,
            nc_estimate: nc,
            nc_z,
            mean_gap,
            mean_arc,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::apply_motion;
    use crate::shapes::{build, ShapeSpec};
    use std::f64::consts::SQRT_2;

    fn unit_square() -> SimplePolygon {
        build(&ShapeSpec::Rectangle { w: 1.0, h: 1.0 }).unwrap()
    }

    #[test]
    fn circle_in_square() {
        let r = find_critical_scale(
            &unit_square(),
            &build(&ShapeSpec::circle(1.0)).unwrap(),
            (0.1, 1.0),
            &SearchOptions::default(),
        )
        .unwrap();
        assert!((r.lambda_critical - 0.5).abs() < 1e-3, "{r:?}");
    }

    #[test]
    fn square_in_disk() {
        let r = find_critical_scale(
            &build(&ShapeSpec::circle(1.0)).unwrap(),
            &unit_square(),
            (0.1, 2.0),
            &SearchOptions::default(),
        )
        .unwrap();
        assert!((r.lambda_critical - SQRT_2).abs() < 1e-3, "{r:?}");
        let placed = apply_motion(
            &scale(&unit_square(), r.lambda_critical).unwrap(),
            r.witness,
        );
        assert!(crate::arc::classify_containment(
            &build(&ShapeSpec::circle(1.0)).unwrap(),
            &placed
        ));
    }

    #[test]
    fn bounds_are_checked() {
        let sq = unit_square();
        let c = build(&ShapeSpec::circle(1.0)).unwrap();
        let o = SearchOptions::default();
        assert!(matches!(
            find_critical_scale(&sq, &c, (0.1, 0.4), &o),
            Err(CriticalError::UpperBoundFits(_))
        ));
        assert!(matches!(
            find_critical_scale(&sq, &c, (0.6, 1.0), &o),
            Err(CriticalError::LowerBoundDoesNotFit(_))
        ));
        assert!(matches!(
            find_critical_scale(&sq, &c, (0.6, 0.5), &o),
            Err(CriticalError::BoundsInvalid(..))
        ));
    }

    #[test]
    fn margin_sign() {
        let sq = PreparedDomain::new(unit_square(), Tolerance::for_diameter(2.0));
        let c = build(&ShapeSpec::circle(0.4)).unwrap();
        assert!((containment_margin(&sq, c.vertices()) - 0.1).abs() < 1e-12);
        let c = build(&ShapeSpec::circle(0.6)).unwrap();
        assert!(containment_margin(&sq, c.vertices()) < 0.0);
    }

    #[test]
    fn embed_examples() {
        let sq = unit_square();
        let sampling = SamplingOptions::with_samples(20_000, 11);
        let search = SearchOptions::default();

        let small = build(&ShapeSpec::circle(0.4)).unwrap();
        let r = test_embeddability(&sq, &small, &sampling, &search).unwrap();
        assert!(r.fits && r.statistical_fits && r.agree, "{r:?}");
        let centre = r.evidence.witness.unwrap().apply(small.centroid());
        assert!(centre.norm() <= 0.1 + 1e-9, "{centre:?}");

        let big = build(&ShapeSpec::circle(0.6)).unwrap();
        let r = test_embeddability(&sq, &big, &sampling, &search).unwrap();
        assert!(!r.fits && !r.statistical_fits && r.agree, "{r:?}");
        assert_eq!(r.evidence.nc_z, 0.0);
    }

    #[test]
    fn rectangle_in_l_shape() {
        let l = build(&ShapeSpec::LShape {
            size: 2.0,
            arm: 1.0,
        })
        .unwrap();
        let rect = build(&ShapeSpec::Rectangle { w: 1.0, h: 0.8 }).unwrap();
        // Lower-left corner at (0.1, 0.1), axis aligned.
        let placed = apply_motion(&rect, RigidMotion::new(0.0, 0.6, 0.5));
        assert!(crate::arc::classify_containment(&l, &placed));
        let prepared = PreparedDomain::new(l.clone(), Tolerance::for_pair(&l, &rect));
        let o = search_containment(&prepared, &rect, &SearchOptions::default(), None);
        let w = o.witness.unwrap();
        assert!(crate::arc::classify_containment(&l, &apply_motion(&rect, w)));
    }
}
