//! Static SVG output: sampled placements over a domain, and sweep curves.
//! Coordinates are printed at fixed precision so output is byte-stable.

use std::fmt::Write as _;

use meanarc::arc::Classification;
use meanarc::geom::{apply_motion, BoundingBox, Point, SimplePolygon};
use meanarc::sampler::PlacementSample;

use crate::output::SweepRecord;

const SIZE: f64 = 600.0;
const PAD: f64 = 20.0;
const LEGEND: f64 = 70.0;

const STYLE: &str = "\
.domain{fill:#dde6f0;stroke:#223;stroke-width:1.5}\
.trajectory{fill:none;stroke:#999;stroke-width:0.8}\
.arc{fill:none;stroke:#c02;stroke-width:2}\
.legend{font:13px sans-serif;fill:#222}\
.axis{stroke:#222;stroke-width:1}\
.mc{fill:none;stroke:#c02;stroke-width:1.5}\
.eq5{fill:none;stroke:#26a;stroke-width:1.2;stroke-dasharray:6 3}\
.eq3{fill:none;stroke:#2a6;stroke-width:1.2}\
.mazzolo{fill:none;stroke:#a62;stroke-width:1.2;stroke-dasharray:2 3}";

/// World to picture coordinates, y pointing up.
struct Frame {
    min: Point,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(b: &BoundingBox, width: f64, height: f64) -> Frame {
        let w = b.width().max(1e-12);
        let h = b.height().max(1e-12);
        let scale = ((width - 2.0 * PAD) / w).min((height - 2.0 * PAD) / h);
        let min = Point::new(
            b.min.x - (width / scale - w) / 2.0,
            b.min.y - (height / scale - h) / 2.0,
        );
        Frame { min, scale, height }
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.min.x) * self.scale,
            self.height - (p.y - self.min.y) * self.scale,
        )
    }

    fn path(&self, pts: &[Point], closed: bool) -> String {
        let mut d = String::new();
        for (i, &p) in pts.iter().enumerate() {
            let (x, y) = self.map(p);
            let _ = write!(d, "{}{x:.3},{y:.3}", if i == 0 { "M" } else { " L" });
        }
        if closed {
            d.push_str(" Z");
        }
        d
    }
}

fn header(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(out, "<style>{STYLE}</style>");
}

/// The domain, every placed trajectory, and its inside arcs on top. The
/// legend gives the per-arc mean of the drawn arcs next to `cauchy`.
pub fn render_scene(
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    placements: &[PlacementSample],
    cauchy: f64,
) -> String {
    let mut pts: Vec<Point> = domain.vertices().to_vec();
    let loops: Vec<SimplePolygon> = placements
        .iter()
        .map(|p| apply_motion(trajectory, p.motion))
        .collect();
    for l in &loops {
        pts.extend_from_slice(l.vertices());
    }
    let frame = Frame::fit(&BoundingBox::of_points(&pts), SIZE, SIZE);

    let mut out = String::new();
    header(&mut out, SIZE, SIZE + LEGEND);
    let _ = writeln!(
        out,
        "<path class=\"domain\" d=\"{}\"/>",
        frame.path(domain.vertices(), true)
    );
    for l in &loops {
        let _ = writeln!(
            out,
            "<path class=\"trajectory\" d=\"{}\"/>",
            frame.path(l.vertices(), true)
        );
    }
    let (mut total, mut arcs) = (0.0, 0usize);
    for (p, l) in placements.iter().zip(&loops) {
        if p.report.classification == Classification::TrajectoryInsideDomain {
            let _ = writeln!(
                out,
                "<path class=\"arc\" d=\"{}\"/>",
                frame.path(l.vertices(), true)
            );
            continue;
        }
        for a in &p.report.arcs {
            let _ = writeln!(
                out,
                "<path class=\"arc\" d=\"{}\"/>",
                frame.path(&a.polyline, false)
            );
            if p.report.classification == Classification::Crossing {
                total += a.length;
                arcs += 1;
            }
        }
    }
    let mean = if arcs > 0 {
        format!("{:.4}", total / arcs as f64)
    } else {
        "-".to_string()
    };
    let _ = writeln!(
        out,
        "<text class=\"legend\" x=\"{PAD}\" y=\"{:.0}\">placements: {}, crossing arcs: {arcs}</text>",
        SIZE + 25.0,
        placements.len()
    );
    let _ = writeln!(
        out,
        "<text class=\"legend\" x=\"{PAD}\" y=\"{:.0}\">mean arc (shown): {mean}   πA/P: {cauchy:.4}</text>",
        SIZE + 50.0
    );
    out.push_str("</svg>\n");
    out
}

/// Per-arc mean against λ with the closed-form curves behind it.
pub fn render_sweep(records: &[SweepRecord]) -> String {
    let mut out = String::new();
    header(&mut out, SIZE, SIZE + LEGEND);
    let curve = |f: fn(&SweepRecord) -> f64| -> Vec<Point> {
        records.iter().map(|r| Point::new(r.lambda, f(r))).collect()
    };
    let mc = curve(|r| r.per_arc_mean);
    let eq5: Vec<Point> = curve(|r| r.eq5).into_iter().filter(|p| p.y >= 0.0).collect();
    let eq3 = curve(|r| r.eq3);
    let mazzolo = curve(|r| r.mazzolo);
    let mut all: Vec<Point> = mc.iter().chain(&eq3).chain(&mazzolo).copied().collect();
    all.push(Point::new(0.0, 0.0));
    let top = all.iter().map(|p| p.y).fold(0.0, f64::max);
    let frame = Frame::fit(&BoundingBox::of_points(&all), SIZE, SIZE);
    let axis_end = all.iter().map(|p| p.x).fold(0.0, f64::max);
    let _ = writeln!(
        out,
        "<path class=\"axis\" d=\"{}\"/>",
        frame.path(
            &[
                Point::new(0.0, top),
                Point::new(0.0, 0.0),
                Point::new(axis_end, 0.0)
            ],
            false
        )
    );
    for (class, pts) in [("eq3", &eq3), ("mazzolo", &mazzolo), ("eq5", &eq5), ("mc", &mc)] {
        if pts.len() > 1 {
            let _ = writeln!(
                out,
                "<path class=\"{class}\" d=\"{}\"/>",
                frame.path(pts, false)
            );
        }
    }
    for r in records {
        let (x, y0) = frame.map(Point::new(r.lambda, r.per_arc_mean - r.per_arc_stderr));
        let (_, y1) = frame.map(Point::new(r.lambda, r.per_arc_mean + r.per_arc_stderr));
        let (_, y) = frame.map(Point::new(r.lambda, r.per_arc_mean));
        let _ = writeln!(
            out,
            "<path class=\"mc\" d=\"M{x:.3},{y0:.3} L{x:.3},{y1:.3}\"/><circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"2.5\" fill=\"#c02\"/>"
        );
    }
    let _ = writeln!(
        out,
        "<text class=\"legend\" x=\"{PAD}\" y=\"{:.0}\">red: sampled per-arc mean ± 1 s.e.; green: πA/P; blue dashed: small-trajectory mean; orange dotted: mean over overlaps</text>",
        SIZE + 25.0
    );
    if let (Some(first), Some(last)) = (records.first(), records.last()) {
        let _ = writeln!(
            out,
            "<text class=\"legend\" x=\"{PAD}\" y=\"{:.0}\">λ from {} to {}; plateau πA/P = {:.4}</text>",
            SIZE + 50.0,
            first.lambda,
            last.lambda,
            last.eq3
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use meanarc::estimators::{Experiment, SamplingOptions};
    use meanarc::shapes::{build, ShapeSpec};

    fn square() -> SimplePolygon {
        build(&ShapeSpec::Rectangle { w: 1.0, h: 1.0 }).unwrap()
    }

    #[test]
    fn empty_scene_has_only_the_domain() {
        let c = build(&ShapeSpec::circle(0.1)).unwrap();
        let svg = render_scene(&square(), &c, &[], 0.785);
        assert_eq!(svg.matches("class=\"domain\"").count(), 1);
        assert!(!svg.contains("class=\"trajectory\" d"));
        assert!(!svg.contains("class=\"arc\" d"));
    }

    #[test]
    fn contained_loop_is_drawn_as_arc() {
        let c = build(&ShapeSpec::circle(0.1)).unwrap();
        let opts = SamplingOptions::with_samples(1000, 1);
        let exp = Experiment::new(&square(), &c, &opts).unwrap();
        let inside: Vec<_> = exp
            .sample_placements(200, 2)
            .into_iter()
            .filter(|p| p.report.classification == Classification::TrajectoryInsideDomain)
            .take(1)
            .collect();
        assert_eq!(inside.len(), 1);
        let svg = render_scene(&square(), &c, &inside, 0.785);
        let traj = svg
            .lines()
            .find(|l| l.starts_with("<path class=\"trajectory\""))
            .unwrap();
        let arc = svg
            .lines()
            .find(|l| l.starts_with("<path class=\"arc\""))
            .unwrap();
        assert_eq!(
            traj.trim_start_matches("<path class=\"trajectory\""),
            arc.trim_start_matches("<path class=\"arc\"")
        );
    }

    #[test]
    fn rendering_is_deterministic() {
        let c = build(&ShapeSpec::circle(0.3)).unwrap();
        let opts = SamplingOptions::with_samples(1000, 1);
        let exp = Experiment::new(&square(), &c, &opts).unwrap();
        let a = render_scene(&square(), &c, &exp.sample_placements(10, 4), 0.785);
        let b = render_scene(&square(), &c, &exp.sample_placements(10, 4), 0.785);
        assert_eq!(a, b);
    }
}
