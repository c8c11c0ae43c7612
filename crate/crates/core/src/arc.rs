//! Per-placement evaluation: how much of a placed trajectory loop lies inside
//! the domain, how often the two boundaries cross, and how the placement
//! relates to the domain.
//!
//! The moved loop is cut at every transversal crossing with the domain
//! boundary. Between two consecutive crossings the loop is entirely inside or
//! entirely outside, so each such run is classified once, at the midpoint of
//! its longest piece; runs must alternate. Any touch, collinear overlap,
//! boundary-hugging midpoint or broken alternation marks the report
//! degenerate so the sampler can redraw the placement.

use serde::{Deserialize, Serialize};

use crate::geom::{
    apply_motion, dot, locate_in_loop, point_segment_distance, segment_intersection, BoundingBox,
    Location, Point, RigidMotion, SegmentIntersection, SimplePolygon, Tolerance,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    Disjoint,
    Crossing,
    TrajectoryInsideDomain,
    DomainInsideTrajectory,
}

/// A maximal connected piece of the trajectory loop inside the domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Arc {
    pub length: f64,
    /// Empty unless polylines were requested.
    pub polyline: Vec<Point>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArcReport {
    pub inside_length: f64,
    pub crossing_count: usize,
    pub arcs: Vec<Arc>,
    pub classification: Classification,
    pub degenerate: bool,
}

impl ArcReport {
    fn disjoint() -> Self {
        ArcReport {
            inside_length: 0.0,
            crossing_count: 0,
            arcs: Vec::new(),
            classification: Classification::Disjoint,
            degenerate: false,
        }
    }

    fn degenerate(crossing_count: usize) -> Self {
        ArcReport {
            degenerate: true,
            crossing_count,
            ..ArcReport::disjoint()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detail {
    Lengths,
    Polylines,
}

#[derive(Debug, Clone, Copy)]
struct Crossing {
    edge: usize,
    s: f64,
    point: Point,
}

/// Uniform grid over the domain's bounding box; each cell lists the domain
/// edges whose boxes touch it.
#[derive(Debug, Clone)]
struct EdgeGrid {
    origin: Point,
    cell_w: f64,
    cell_h: f64,
    nx: usize,
    ny: usize,
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl EdgeGrid {
    fn new(polygon: &SimplePolygon, bbox: BoundingBox) -> Self {
        // Square cells, about one edge per cell.
        let n = polygon.len().max(1) as f64;
        let (w, h) = (bbox.width(), bbox.height());
        let cell = (w * h / n).sqrt().max(w.max(h) / 256.0).max(f64::MIN_POSITIVE);
        let nx = ((w / cell).ceil() as usize).clamp(1, 256);
        let ny = ((h / cell).ceil() as usize).clamp(1, 256);
        let cell_w = (w / nx as f64).max(f64::MIN_POSITIVE);
        let cell_h = (h / ny as f64).max(f64::MIN_POSITIVE);
        let mut grid = EdgeGrid {
            origin: bbox.min,
            cell_w,
            cell_h,
            nx,
            ny,
            starts: Vec::new(),
            items: Vec::new(),
        };
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); nx * ny];
        for (i, (a, b)) in polygon.edges().enumerate() {
            let (x0, x1, y0, y1) = grid.cell_range(&BoundingBox::of_segment(a, b));
            for iy in y0..=y1 {
                for ix in x0..=x1 {
                    buckets[iy * nx + ix].push(i as u32);
                }
            }
        }
        grid.starts.push(0);
        for b in &buckets {
            grid.items.extend_from_slice(b);
            grid.starts.push(grid.items.len() as u32);
        }
        grid
    }

    #[inline]
    fn col(&self, x: f64) -> usize {
        let v = (x - self.origin.x) / self.cell_w;
        if v <= 0.0 {
            0
        } else {
            (v as usize).min(self.nx - 1)
        }
    }

    #[inline]
    fn row(&self, y: f64) -> usize {
        let v = (y - self.origin.y) / self.cell_h;
        if v <= 0.0 {
            0
        } else {
            (v as usize).min(self.ny - 1)
        }
    }

    #[inline]
    fn items(&self, ix: usize, iy: usize) -> &[u32] {
        let cell = iy * self.nx + ix;
        &self.items[self.starts[cell] as usize..self.starts[cell + 1] as usize]
    }

    #[inline]
    fn cell_range(&self, b: &BoundingBox) -> (usize, usize, usize, usize) {
        let clamp = |v: f64, n: usize| -> usize {
            if v <= 0.0 {
                0
            } else {
                (v as usize).min(n - 1)
            }
        };
        (
            clamp((b.min.x - self.origin.x) / self.cell_w, self.nx),
            clamp((b.max.x - self.origin.x) / self.cell_w, self.nx),
            clamp((b.min.y - self.origin.y) / self.cell_h, self.ny),
            clamp((b.max.y - self.origin.y) / self.cell_h, self.ny),
        )
    }
}

/// A domain polygon with its edge index and tolerance, reused across many
/// placements.
#[derive(Debug, Clone)]
pub struct PreparedDomain {
    polygon: SimplePolygon,
    tol: Tolerance,
    bbox: BoundingBox,
    grid: EdgeGrid,
}

impl PreparedDomain {
    pub fn new(polygon: SimplePolygon, tol: Tolerance) -> Self {
        let bbox = polygon.bbox();
        let grid = EdgeGrid::new(&polygon, bbox.inflate(tol.eps_length));
        PreparedDomain {
            polygon,
            tol,
            bbox,
            grid,
        }
    }

    pub fn polygon(&self) -> &SimplePolygon {
        &self.polygon
    }

    pub fn tolerance(&self) -> Tolerance {
        self.tol
    }

    /// Same answer as [`crate::geom::point_in_polygon`], using the edge index.
    pub fn locate(&self, q: Point) -> Location {
        let eps = self.tol.eps_length;
        if !self.bbox.inflate(eps).contains(q) {
            return Location::Outside;
        }
        let mut near = false;
        self.for_each_edge_near(q, eps, |_, d| near |= d < eps);
        if near {
            return Location::OnBoundary;
        }
        // Ray towards +x. An edge is counted only in the cell holding its
        // crossing point, so edges spanning several cells count once.
        let g = &self.grid;
        let iy = g.row(q.y);
        let mut inside = false;
        for ix in g.col(q.x)..g.nx {
            for &j in g.items(ix, iy) {
                let (a, b) = self.polygon.edge(j as usize);
                if (a.y > q.y) != (b.y > q.y) {
                    let x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
                    let cell_x = x.clamp(a.x.min(b.x), a.x.max(b.x));
                    if q.x < x && g.col(cell_x) == ix {
                        inside = !inside;
                    }
                }
            }
        }
        if inside {
            Location::Inside
        } else {
            Location::Outside
        }
    }

    /// Brute-force location, for cross-checking the indexed one.
    pub fn locate_exhaustive(&self, q: Point) -> Location {
        locate_in_loop(q, self.polygon.vertices(), self.tol.eps_length)
    }

    /// Calls `visit(edge, distance)` once for every domain edge within
    /// distance `r` of `q`.
    pub fn for_each_edge_near(&self, q: Point, r: f64, mut visit: impl FnMut(usize, f64)) {
        let g = &self.grid;
        let (x0, x1, y0, y1) = g.cell_range(&BoundingBox {
            min: Point::new(q.x - r, q.y - r),
            max: Point::new(q.x + r, q.y + r),
        });
        for iy in y0..=y1 {
            for ix in x0..=x1 {
                for &j in g.items(ix, iy) {
                    let (a, b) = self.polygon.edge(j as usize);
                    if q.x + r < a.x.min(b.x)
                        || q.x - r > a.x.max(b.x)
                        || q.y + r < a.y.min(b.y)
                        || q.y - r > a.y.max(b.y)
                    {
                        continue;
                    }
                    let foot = nearest_on_segment(q, a, b);
                    let d = q.dist(foot);
                    // Report each edge from the cell holding its nearest point.
                    if d <= r && g.col(foot.x) == ix && g.row(foot.y) == iy {
                        visit(j as usize, d);
                    }
                }
            }
        }
    }

    /// Distance from `q` to the domain boundary.
    pub fn boundary_distance(&self, q: Point) -> f64 {
        let g = &self.grid;
        let (cx, cy) = (g.col(q.x), g.row(q.y));
        let mut best = f64::INFINITY;
        for k in 0.. {
            let (lx, hx) = (cx.saturating_sub(k), (cx + k).min(g.nx - 1));
            let (ly, hy) = (cy.saturating_sub(k), (cy + k).min(g.ny - 1));
            let mut scan = |ix: usize, iy: usize| {
                for &j in g.items(ix, iy) {
                    let (a, b) = self.polygon.edge(j as usize);
                    best = best.min(point_segment_distance(q, a, b));
                }
            };
            // Only the cells at Chebyshev distance exactly `k`.
            for iy in ly..=hy {
                if iy.abs_diff(cy) == k {
                    (lx..=hx).for_each(|ix| scan(ix, iy));
                } else {
                    if cx >= k {
                        scan(cx - k, iy);
                    }
                    if k > 0 && cx + k < g.nx {
                        scan(cx + k, iy);
                    }
                }
            }
            if lx == 0 && ly == 0 && hx == g.nx - 1 && hy == g.ny - 1 {
                break;
            }
            // Cells beyond the ring are at least this far away.
            let mut reach = f64::INFINITY;
            if lx > 0 {
                reach = reach.min(q.x - (g.origin.x + lx as f64 * g.cell_w));
            }
            if hx < g.nx - 1 {
                reach = reach.min(g.origin.x + (hx + 1) as f64 * g.cell_w - q.x);
            }
            if ly > 0 {
                reach = reach.min(q.y - (g.origin.y + ly as f64 * g.cell_h));
            }
            if hy < g.ny - 1 {
                reach = reach.min(g.origin.y + (hy + 1) as f64 * g.cell_h - q.y);
            }
            if best <= reach {
                break;
            }
        }
        best
    }

    /// Signed distance to the boundary, positive inside.
    pub fn depth(&self, q: Point) -> f64 {
        let d = self.boundary_distance(q);
        if d < self.tol.eps_length {
            return 0.0;
        }
        match self.locate(q) {
            Location::Inside => d,
            Location::Outside => -d,
            Location::OnBoundary => 0.0,
        }
    }

    /// Calls `visit(trajectory_edge, domain_edge)` for every candidate pair
    /// whose boxes overlap. Stops when `visit` returns false.
    fn for_each_candidate(&self, verts: &[Point], mut visit: impl FnMut(usize, usize) -> bool) {
        let eps = self.tol.eps_length;
        let n = verts.len();
        let mut stamp = vec![u32::MAX; self.polygon.len()];
        for i in 0..n {
            let a = verts[i];
            let b = verts[(i + 1) % n];
            let eb = BoundingBox::of_segment(a, b);
            if !eb.overlaps(&self.bbox, eps) {
                continue;
            }
            let (x0, x1, y0, y1) = self.grid.cell_range(&eb.inflate(eps));
            for iy in y0..=y1 {
                for ix in x0..=x1 {
                    let cell = iy * self.grid.nx + ix;
                    let lo = self.grid.starts[cell] as usize;
                    let hi = self.grid.starts[cell + 1] as usize;
                    for &j in &self.grid.items[lo..hi] {
                        if stamp[j as usize] == i as u32 {
                            continue;
                        }
                        stamp[j as usize] = i as u32;
                        if !visit(i, j as usize) {
                            return;
                        }
                    }
                }
            }
        }
    }

    /// All proper crossings, sorted along the loop, plus a degeneracy flag.
    fn crossings(&self, verts: &[Point]) -> (Vec<Crossing>, bool) {
        let n = verts.len();
        let mut out = Vec::new();
        let mut degenerate = false;
        self.for_each_candidate(verts, |i, j| {
            let (d0, d1) = self.polygon.edge(j);
            match segment_intersection(verts[i], verts[(i + 1) % n], d0, d1, self.tol) {
                SegmentIntersection::None => {}
                SegmentIntersection::Proper { point, s, .. } => {
                    out.push(Crossing { edge: i, s, point })
                }
                SegmentIntersection::Degenerate => degenerate = true,
            }
            true
        });
        out.sort_by(|a, b| a.edge.cmp(&b.edge).then(a.s.total_cmp(&b.s)));
        (out, degenerate)
    }

    /// Evaluates `trajectory` placed by `motion`.
    pub fn clip(
        &self,
        trajectory: &SimplePolygon,
        motion: RigidMotion,
        detail: Detail,
    ) -> ArcReport {
        let verts: Vec<Point> = trajectory
            .vertices()
            .iter()
            .map(|&v| motion.apply(v))
            .collect();
        self.clip_placed(&verts, detail)
    }

    /// Evaluates an already placed trajectory loop (CCW vertex list).
    pub fn clip_placed(&self, verts: &[Point], detail: Detail) -> ArcReport {
        let eps = self.tol.eps_length;
        if !BoundingBox::of_points(verts).overlaps(&self.bbox, eps) {
            return ArcReport::disjoint();
        }
        let (crossings, degenerate) = self.crossings(verts);
        if crossings.is_empty() {
            if degenerate {
                return ArcReport::degenerate(0);
            }
            return self.classify_uncrossed(verts, detail);
        }
        let n = crossings.len();
        if n % 2 == 1 {
            return ArcReport::degenerate(n);
        }

        let nv = verts.len();
        let mut report = ArcReport {
            inside_length: 0.0,
            crossing_count: n,
            arcs: Vec::with_capacity(n / 2),
            classification: Classification::Crossing,
            degenerate,
        };
        let mut first_inside: Option<bool> = None;
        let mut prev_inside: Option<bool> = None;
        for k in 0..n {
            let a = crossings[k];
            let b = crossings[(k + 1) % n];
            let mut run = Run::new(detail == Detail::Polylines);
            if a.edge == b.edge && k + 1 < n {
                run.piece(a.point, b.point);
            } else {
                run.piece(a.point, verts[(a.edge + 1) % nv]);
                let full = (b.edge + nv - a.edge - 1) % nv;
                let mut e = (a.edge + 1) % nv;
                for _ in 0..full {
                    run.piece(verts[e], verts[(e + 1) % nv]);
                    e = (e + 1) % nv;
                }
                run.piece(verts[b.edge], b.point);
            }
            let inside = match self.locate(run.probe) {
                Location::Inside => true,
                Location::Outside => false,
                Location::OnBoundary => {
                    report.degenerate = true;
                    false
                }
            };
            if prev_inside == Some(inside) {
                report.degenerate = true;
            }
            prev_inside = Some(inside);
            first_inside.get_or_insert(inside);
            if inside {
                report.inside_length += run.length;
                report.arcs.push(Arc {
                    length: run.length,
                    polyline: run.polyline,
                });
            }
        }
        // Wrap-around alternation between the last and first runs.
        if prev_inside == first_inside {
            report.degenerate = true;
        }
        report
    }

    fn classify_uncrossed(&self, verts: &[Point], detail: Detail) -> ArcReport {
        match self.locate(verts[0]) {
            Location::Inside => {
                let length = loop_length(verts);
                let polyline = if detail == Detail::Polylines {
                    let mut p = verts.to_vec();
                    p.push(verts[0]);
                    p
                } else {
                    Vec::new()
                };
                ArcReport {
                    inside_length: length,
                    crossing_count: 0,
                    arcs: vec![Arc { length, polyline }],
                    classification: Classification::TrajectoryInsideDomain,
                    degenerate: false,
                }
            }
            Location::OnBoundary => ArcReport::degenerate(0),
            Location::Outside => {
                match locate_in_loop(self.polygon.vertices()[0], verts, self.tol.eps_length) {
                    Location::Inside => ArcReport {
                        classification: Classification::DomainInsideTrajectory,
                        ..ArcReport::disjoint()
                    },
                    Location::Outside => ArcReport::disjoint(),
                    Location::OnBoundary => ArcReport::degenerate(0),
                }
            }
        }
    }

    /// True iff every vertex of the placed loop is strictly inside the domain
    /// and no edge pair touches or crosses.
    pub fn contains_placed(&self, verts: &[Point]) -> bool {
        let mut hit = false;
        let n = verts.len();
        self.for_each_candidate(verts, |i, j| {
            let (d0, d1) = self.polygon.edge(j);
            hit = segment_intersection(verts[i], verts[(i + 1) % n], d0, d1, self.tol)
                != SegmentIntersection::None;
            !hit
        });
        !hit && verts.iter().all(|&v| self.locate(v) == Location::Inside)
    }
}

struct Run {
    length: f64,
    longest: f64,
    probe: Point,
    keep: bool,
    polyline: Vec<Point>,
}

impl Run {
    fn new(keep: bool) -> Self {
        Run {
            length: 0.0,
            longest: -1.0,
            probe: Point::ORIGIN,
            keep,
            polyline: Vec::new(),
        }
    }

    #[inline]
    fn piece(&mut self, a: Point, b: Point) {
        let l = a.dist(b);
        self.length += l;
        if l > self.longest {
            self.longest = l;
            self.probe = a.lerp(b, 0.5);
        }
        if self.keep {
            if self.polyline.is_empty() {
                self.polyline.push(a);
            }
            self.polyline.push(b);
        }
    }
}

#[inline]
fn nearest_on_segment(q: Point, a: Point, b: Point) -> Point {
    let d = b - a;
    let len2 = dot(d, d);
    if len2 == 0.0 {
        return a;
    }
    a + d * (dot(q - a, d) / len2).clamp(0.0, 1.0)
}

fn loop_length(verts: &[Point]) -> f64 {
    let n = verts.len();
    (0..n).map(|i| verts[i].dist(verts[(i + 1) % n])).sum()
}

/// Evaluates one placement of `trajectory` (moved by `motion`) against
/// `domain`, with arc polylines.
pub fn clip_boundary(
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    motion: RigidMotion,
    tol: Tolerance,
) -> ArcReport {
    PreparedDomain::new(domain.clone(), tol).clip(trajectory, motion, Detail::Polylines)
}

/// True iff `inner` lies strictly inside `outer`: every vertex inside and no
/// edge pair touching or crossing.
pub fn classify_containment(outer: &SimplePolygon, inner: &SimplePolygon) -> bool {
    let tol = Tolerance::for_pair(outer, inner);
    PreparedDomain::new(outer.clone(), tol).contains_placed(inner.vertices())
}

/// One piece of the moved loop between consecutive cut points (crossings or
/// vertices), classified by its own midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub start: Point,
    pub end: Point,
    pub length: f64,
    pub location: Location,
}

/// Splits the moved loop at every crossing and vertex and classifies every
/// piece independently.
pub fn classify_pieces(
    domain: &SimplePolygon,
    trajectory: &SimplePolygon,
    motion: RigidMotion,
    tol: Tolerance,
) -> Vec<Piece> {
    let moved = apply_motion(trajectory, motion);
    let verts = moved.vertices();
    let prepared = PreparedDomain::new(domain.clone(), tol);
    let (crossings, _) = prepared.crossings(verts);
    let n = verts.len();
    let mut pieces = Vec::with_capacity(n + crossings.len());
    let mut c = 0;
    for i in 0..n {
        let mut from = verts[i];
        let end = verts[(i + 1) % n];
        while c < crossings.len() && crossings[c].edge == i {
            let p = crossings[c].point;
            pieces.push(piece(&prepared, from, p));
            from = p;
            c += 1;
        }
        pieces.push(piece(&prepared, from, end));
    }
    pieces
}

fn piece(domain: &PreparedDomain, start: Point, end: Point) -> Piece {
    Piece {
        start,
        end,
        length: start.dist(end),
        location: domain.locate(start.lerp(end, 0.5)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::perimeter;
    use crate::shapes::{build, ShapeSpec};

    fn square(x0: f64, y0: f64, side: f64) -> SimplePolygon {
        SimplePolygon::new(vec![
            Point::new(x0, y0),
            Point::new(x0 + side, y0),
            Point::new(x0 + side, y0 + side),
            Point::new(x0, y0 + side),
        ])
        .unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::for_diameter(10.0)
    }

    #[test]
    fn overlapping_squares() {
        let r = clip_boundary(
            &square(0.0, 0.0, 1.0),
            &square(0.0, 0.0, 1.0),
            RigidMotion::new(0.0, 0.5, 0.5),
            tol(),
        );
        assert!(!r.degenerate);
        assert_eq!(r.crossing_count, 2);
        assert_eq!(r.arcs.len(), 1);
        assert!((r.inside_length - 1.0).abs() < 1e-15);
        assert_eq!(r.classification, Classification::Crossing);
        let poly = &r.arcs[0].polyline;
        assert_eq!(poly.len(), 3);
        assert!(poly[1].dist(Point::new(0.5, 0.5)) < 1e-15);
    }

    #[test]
    fn small_circle_inside_and_big_circle_around() {
        let small = build(&ShapeSpec::circle(0.1)).unwrap();
        let r = clip_boundary(
            &square(0.0, 0.0, 1.0),
            &small,
            RigidMotion::new(0.3, 0.5, 0.5),
            tol(),
        );
        assert_eq!(r.crossing_count, 0);
        assert_eq!(r.classification, Classification::TrajectoryInsideDomain);
        assert!((r.inside_length - perimeter(&small)).abs() < 1e-12);
        assert_eq!(r.arcs.len(), 1);

        let big = build(&ShapeSpec::circle(10.0)).unwrap();
        let r = clip_boundary(
            &square(0.0, 0.0, 1.0),
            &big,
            RigidMotion::new(0.3, 0.5, 0.5),
            tol(),
        );
        assert_eq!(r.crossing_count, 0);
        assert_eq!(r.inside_length, 0.0);
        assert_eq!(r.classification, Classification::DomainInsideTrajectory);

        let r = clip_boundary(
            &square(0.0, 0.0, 1.0),
            &small,
            RigidMotion::new(0.0, 5.0, 0.5),
            tol(),
        );
        assert_eq!(r.classification, Classification::Disjoint);
    }

    #[test]
    fn degenerate_placements_are_flagged() {
        // Shared full edge (collinear overlap).
        let r = clip_boundary(
            &square(0.0, 0.0, 1.0),
            &square(0.0, 0.0, 1.0),
            RigidMotion::new(0.0, 1.0, 0.0),
            tol(),
        );
        assert!(r.degenerate);
        // A trajectory vertex lying on the domain boundary.
        let tri = SimplePolygon::new(vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, -1.0),
            Point::new(1.0, 1.0),
        ])
        .unwrap();
        let r = clip_boundary(
            &square(0.0, 0.0, 1.0),
            &tri,
            RigidMotion::new(0.0, 0.0, 0.5),
            tol(),
        );
        assert!(r.degenerate);
    }

    #[test]
    fn containment_examples() {
        let sq = square(0.0, 0.0, 1.0);
        let at_center = |r: f64| {
            apply_motion(
                &build(&ShapeSpec::circle(r)).unwrap(),
                RigidMotion::new(0.0, 0.5, 0.5),
            )
        };
        assert!(classify_containment(&sq, &at_center(0.4)));
        assert!(!classify_containment(&sq, &at_center(0.6)));
    }

    #[test]
    fn wraparound_run_on_single_edge() {
        // A long thin bar whose first edge pokes through the domain twice:
        // both crossings sit on trajectory edge 0.
        let domain = square(0.0, 0.0, 1.0);
        let bar = SimplePolygon::new(vec![
            Point::new(-1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(2.0, 0.2),
            Point::new(-1.0, 0.2),
        ])
        .unwrap();
        // Shift so edge 0 runs at y=0.3 and edge 2 at y=0.5.
        let r = clip_boundary(&domain, &bar, RigidMotion::new(0.0, 0.0, 0.3), tol());
        assert!(!r.degenerate);
        assert_eq!(r.crossing_count, 4);
        assert_eq!(r.arcs.len(), 2);
        assert!((r.inside_length - 2.0).abs() < 1e-14);
    }

    #[test]
    fn indexed_queries_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let shapes = [
            ShapeSpec::circle(1.0),
            ShapeSpec::Star {
                outer: 1.0,
                inner: 0.5,
                points: 5,
            },
            ShapeSpec::Comb {
                teeth: 4,
                width: 5.0,
                base: 1.0,
                tooth_length: 2.0,
            },
            ShapeSpec::Rectangle { w: 1.0, h: 1.0 },
        ];
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for spec in &shapes {
            let p = build(spec).unwrap();
            let d = PreparedDomain::new(p.clone(), Tolerance::for_diameter(p.diameter()));
            let b = p.bbox().inflate(0.5);
            let mut probes: Vec<Point> = (0..4000)
                .map(|_| {
                    Point::new(
                        rng.random_range(b.min.x..b.max.x),
                        rng.random_range(b.min.y..b.max.y),
                    )
                })
                .collect();
            // Vertices and edge midpoints exercise the boundary band.
            probes.extend(p.vertices().iter().copied());
            probes.extend(p.edges().map(|(a, b)| a.lerp(b, 0.5)));
            for q in probes {
                assert_eq!(d.locate(q), d.locate_exhaustive(q), "{spec:?} {q}");
                let brute = p
                    .edges()
                    .map(|(a, b)| point_segment_distance(q, a, b))
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(d.boundary_distance(q), brute, "{spec:?} {q}");
                let r = 0.3;
                let mut seen = Vec::new();
                d.for_each_edge_near(q, r, |j, dist| {
                    assert!(dist <= r);
                    seen.push(j)
                });
                seen.sort_unstable();
                let want: Vec<usize> = p
                    .edges()
                    .enumerate()
                    .filter(|(_, (a, b))| point_segment_distance(q, *a, *b) <= r)
                    .map(|(j, _)| j)
                    .collect();
                assert_eq!(seen, want, "{spec:?} {q}");
            }
        }
    }

    /// Inside length from `n` points spread evenly by arc length.
    fn sampled_inside_length(domain: &SimplePolygon, loop_: &SimplePolygon, n: usize) -> f64 {
        let total = perimeter(loop_);
        let lens: Vec<f64> = loop_.edges().map(|(a, b)| a.dist(b)).collect();
        let mut inside = 0usize;
        let (mut edge, mut start) = (0usize, 0.0);
        for k in 0..n {
            let t = (k as f64 + 0.5) / n as f64 * total;
            while t > start + lens[edge] {
                start += lens[edge];
                edge += 1;
            }
            let (a, b) = loop_.edge(edge);
            let p = a + (b - a) * ((t - start) / lens[edge]);
            if crate::geom::point_in_polygon(p, domain, tol()) == Location::Inside {
                inside += 1;
            }
        }
        total * inside as f64 / n as f64
    }

    #[test]
    fn comb_crossed_by_thin_rectangle() {
        let comb = build(&ShapeSpec::Comb {
            teeth: 3,
            width: 5.0,
            base: 1.0,
            tooth_length: 2.0,
        })
        .unwrap();
        // Bottom edge at y = 2 runs through all three teeth; the rest is above.
        let bar = build(&ShapeSpec::Rectangle { w: 6.0, h: 1.5 }).unwrap();
        let motion = RigidMotion::new(0.0, 2.5, 2.75);
        let r = clip_boundary(&comb, &bar, motion, tol());
        assert!(!r.degenerate);
        assert_eq!(r.crossing_count, 6);
        assert_eq!(r.arcs.len(), 3);
        assert!((r.inside_length - 3.0).abs() < 1e-12);
        let n = 1_000_000;
        let oracle = sampled_inside_length(&comb, &apply_motion(&bar, motion), n);
        // Each crossing misplaces at most one sample.
        assert!((r.inside_length - oracle).abs() <= 6.0 * perimeter(&bar) / n as f64);
    }

    #[test]
    fn square_over_l_notch_is_not_contained() {
        let l = build(&ShapeSpec::LShape {
            size: 2.0,
            arm: 1.0,
        })
        .unwrap();
        let small = square(0.8, 0.8, 0.4);
        assert!(!classify_containment(&l, &small));
        // Dense grid over the small square finds points in the notch.
        let outside = (0..=40)
            .flat_map(|i| (0..=40).map(move |j| (i, j)))
            .map(|(i, j)| Point::new(0.8 + 0.01 * i as f64, 0.8 + 0.01 * j as f64))
            .filter(|&p| crate::geom::point_in_polygon(p, &l, tol()) == Location::Outside)
            .count();
        assert!(outside > 0);
        assert!(classify_containment(&l, &square(0.1, 0.1, 0.8)));
    }
}
