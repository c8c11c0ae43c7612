//! Uniform rigid motions under dK = dx dy dθ over a window that covers every
//! interacting placement, split into independent seeded streams.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arc::ArcReport;
use crate::geom::{circumradius_about, Point, RigidMotion, SimplePolygon};

/// Maximum redraws for one slot before it is given up.
pub const RESAMPLE_CAP: u32 = 100;

/// Fraction of given-up slots above which a run is rejected.
pub const FLOOD_FRACTION: f64 = 1e-3;

/// Translation box for the trajectory's reference point; θ always spans
/// `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingWindow {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Point of the trajectory (in its own frame) that the sampled `(x, y)`
    /// positions.
    pub reference: Point,
}

impl SamplingWindow {
    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    /// `|x_range|·|y_range|·2π`.
    pub fn measure(&self) -> f64 {
        self.width() * self.height() * TAU
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.x_min + self.x_max),
            0.5 * (self.y_min + self.y_max),
        )
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Same centre, sides multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> SamplingWindow {
        let c = self.center();
        let hw = 0.5 * self.width() * factor;
        let hh = 0.5 * self.height() * factor;
        SamplingWindow {
            x_min: c.x - hw,
            x_max: c.x + hw,
            y_min: c.y - hh,
            y_max: c.y + hh,
            reference: self.reference,
        }
    }

    /// The motion that rotates the trajectory by `theta` and puts its
    /// reference point at `(x, y)`.
    pub fn motion_at(&self, x: f64, y: f64, theta: f64) -> RigidMotion {
        let rotated = RigidMotion::new(theta, 0.0, 0.0).apply(self.reference);
        RigidMotion::new(theta, x - rotated.x, y - rotated.y)
    }

    /// Where `m` puts the reference point.
    pub fn position_of(&self, m: &RigidMotion) -> Point {
        m.apply(self.reference)
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> RigidMotion {
        let x = self.x_min + self.width() * rng.random::<f64>();
        let y = self.y_min + self.height() * rng.random::<f64>();
        let theta = TAU * rng.random::<f64>();
        self.motion_at(x, y, theta)
    }
}

/// The domain's bounding box inflated by the trajectory's circumradius about
/// `reference`. A reference point outside it keeps the trajectory out of
/// reach of the domain.
pub fn build_window(
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    reference: Point,
) -> SamplingWindow {
    let r = circumradius_about(trajectory, reference);
    let b = domain.bbox();
    SamplingWindow {
        x_min: b.min.x - r,
        x_max: b.max.x + r,
        y_min: b.min.y - r,
        y_max: b.max.y + r,
        reference,
    }
}

/// Generator for one stream of a seeded run.
pub fn stream_rng(seed: u64, stream: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// How many of `count` slots each of `streams` streams owns.
pub fn stream_counts(count: usize, streams: usize) -> Vec<usize> {
    let base = count / streams;
    let extra = count % streams;
    (0..streams)
        .map(|k| base + usize::from(k < extra))
        .collect()
}

/// `count` motions, stream by stream. Stream `k` is reproducible on its own.
pub fn sample_motions(
    window: &SamplingWindow,
    count: usize,
    seed: u64,
    streams: usize,
) -> Vec<RigidMotion> {
    let streams = streams.max(1);
    let mut out = Vec::with_capacity(count);
    for (k, n) in stream_counts(count, streams).into_iter().enumerate() {
        let mut rng = stream_rng(seed, k);
        out.extend((0..n).map(|_| window.draw(&mut rng)));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Resample,
}

pub fn resample_policy(report: &ArcReport) -> Decision {
    if report.degenerate || report.crossing_count % 2 == 1 {
        Decision::Resample
    } else {
        Decision::Accept
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlacementSample {
    pub motion: RigidMotion,
    pub report: ArcReport,
    pub resample_count: u32,
}

/// Fills one slot: draws and evaluates until the policy accepts. Returns
/// `None` once [`RESAMPLE_CAP`] redraws have all been rejected.
pub fn fill_slot<R: Rng + ?Sized>(
    window: &SamplingWindow,
    rng: &mut R,
    mut evaluate: impl FnMut(RigidMotion) -> ArcReport,
) -> Option<PlacementSample> {
    for resample_count in 0..=RESAMPLE_CAP {
        let motion = window.draw(rng);
        let report = evaluate(motion);
        if resample_policy(&report) == Decision::Accept {
            return Some(PlacementSample {
                motion,
                report,
                resample_count,
            });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::{build, ShapeSpec};
    use std::f64::consts::PI;

    fn unit_square() -> SimplePolygon {
        build(&ShapeSpec::Rectangle { w: 1.0, h: 1.0 })
            .unwrap()
            .translated(Point::new(0.5, 0.5))
    }

    #[test]
    fn window_examples() {
        let circle = build(&ShapeSpec::circle(0.5)).unwrap();
        let w = build_window(&unit_square(), &circle, Point::ORIGIN);
        assert!((w.x_min + 0.5).abs() < 1e-15 && (w.x_max - 1.5).abs() < 1e-15);
        assert!((w.y_min + 0.5).abs() < 1e-15 && (w.y_max - 1.5).abs() < 1e-15);
        assert!((w.measure() - 4.0 * TAU).abs() < 1e-12);

        // First vertex of the circle sits on its rim at angle 0.
        let rim = circle.vertices()[0];
        let w = build_window(&unit_square(), &circle, rim);
        assert!((w.x_min + 1.0).abs() < 1e-15 && (w.x_max - 2.0).abs() < 1e-15);
        assert!((w.measure() - 9.0 * TAU).abs() < 1e-12);
    }

    #[test]
    fn motion_places_reference_point() {
        let w = SamplingWindow {
            x_min: 0.0,
            x_max: 1.0,
            y_min: 0.0,
            y_max: 1.0,
            reference: Point::new(0.3, -0.2),
        };
        let m = w.motion_at(0.25, 0.75, 1.1);
        let p = w.position_of(&m);
        assert!(p.dist(Point::new(0.25, 0.75)) < 1e-15);
        assert!((m.theta - 1.1).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic() {
        let w = build_window(
            &unit_square(),
            &build(&ShapeSpec::circle(0.5)).unwrap(),
            Point::ORIGIN,
        );
        let a = sample_motions(&w, 1000, 42, 7);
        let b = sample_motions(&w, 1000, 42, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_motions(&w, 1000, 43, 7));
        // Each stream is a prefix-stable sequence of its own.
        let mut rng = stream_rng(42, 1);
        let first_of_stream_1 = w.draw(&mut rng);
        assert_eq!(a[stream_counts(1000, 7)[0]], first_of_stream_1);
    }

    #[test]
    fn stream_counts_partition() {
        assert_eq!(stream_counts(10, 3), vec![4, 3, 3]);
        assert_eq!(stream_counts(2, 4), vec![1, 1, 0, 0]);
        assert_eq!(stream_counts(1_000_003, 8).iter().sum::<usize>(), 1_000_003);
    }

    #[test]
    fn uniform_moments() {
        let w = build_window(
            &unit_square(),
            &build(&ShapeSpec::circle(0.5)).unwrap(),
            Point::ORIGIN,
        );
        let n = 1_000_000;
        let ms = sample_motions(&w, n, 7, 4);
        let mean_theta = ms.iter().map(|m| m.theta).sum::<f64>() / n as f64;
        assert!((mean_theta - PI).abs() < 3.0 * (PI / 3f64.sqrt()) / (n as f64).sqrt());
        let mean_x = ms.iter().map(|m| w.position_of(m).x).sum::<f64>() / n as f64;
        let se_x = w.width() / 12f64.sqrt() / (n as f64).sqrt();
        assert!((mean_x - w.center().x).abs() < 3.0 * se_x);
    }

    #[test]
    fn policy_examples() {
        use crate::arc::clip_boundary;
        use crate::geom::Tolerance;
        let sq = unit_square();
        let tol = Tolerance::for_diameter(2.0);
        let clean = clip_boundary(&sq, &sq, RigidMotion::new(0.0, 0.5, 0.5), tol);
        assert_eq!(resample_policy(&clean), Decision::Accept);
        let tri = SimplePolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
        ])
        .unwrap();
        let touching = clip_boundary(&sq, &tri, RigidMotion::new(0.0, 1.0, 0.5), tol);
        assert_eq!(resample_policy(&touching), Decision::Resample);
        let shared = clip_boundary(&sq, &sq, RigidMotion::new(0.0, 1.0, 0.0), tol);
        assert_eq!(resample_policy(&shared), Decision::Resample);
    }
}
