//! Planar primitives: points, simple polygons, rigid motions and the
//! tolerance-aware predicates everything else is built on.
//!
//! Smooth curves are represented by polygons. All predicates work in plain
//! `f64` with explicit length/parameter tolerances; ambiguous configurations
//! (touches, collinear overlaps, near tangencies) are reported as such rather
//! than resolved.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn lerp(self, other: Point, t: f64) -> Point {
        self + (other - self) * t
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

#[inline]
pub fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

#[inline]
pub fn dot(a: Point, b: Point) -> f64 {
    a.x * b.x + a.y * b.y
}

/// Distance from `q` to the closed segment `a`–`b`.
pub fn point_segment_distance(q: Point, a: Point, b: Point) -> f64 {
    let d = b - a;
    let len2 = dot(d, d);
    if len2 == 0.0 {
        return q.dist(a);
    }
    let t = (dot(q - a, d) / len2).clamp(0.0, 1.0);
    q.dist(a + d * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min: Point,
    pub max: Point,
}

impl BoundingBox {
    pub fn of_points(points: &[Point]) -> Self {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        BoundingBox { min, max }
    }

    #[inline]
    pub fn of_segment(a: Point, b: Point) -> Self {
        BoundingBox {
            min: Point::new(a.x.min(b.x), a.y.min(b.y)),
            max: Point::new(a.x.max(b.x), a.y.max(b.y)),
        }
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        self.min.lerp(self.max, 0.5)
    }

    pub fn inflate(&self, by: f64) -> Self {
        BoundingBox {
            min: Point::new(self.min.x - by, self.min.y - by),
            max: Point::new(self.max.x + by, self.max.y + by),
        }
    }

    #[inline]
    pub fn overlaps(&self, other: &BoundingBox, slack: f64) -> bool {
        self.min.x <= other.max.x + slack
            && other.min.x <= self.max.x + slack
            && self.min.y <= other.max.y + slack
            && other.min.y <= self.max.y + slack
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }
}

/// Absolute length and parametric tolerances used by every predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps_length: f64,
    pub eps_param: f64,
}

impl Tolerance {
    pub const DEFAULT_RELATIVE_LENGTH: f64 = 1e-9;
    pub const DEFAULT_PARAM: f64 = 1e-12;

    pub fn new(eps_length: f64, eps_param: f64) -> Result<Self, GeomError> {
        if !(eps_length > 0.0 && eps_length.is_finite() && eps_param > 0.0 && eps_param.is_finite())
        {
            return Err(GeomError::InvalidTolerance {
                eps_length,
                eps_param,
            });
        }
        Ok(Tolerance {
            eps_length,
            eps_param,
        })
    }

    /// Default tolerance for shapes of the given diameter.
    pub fn for_diameter(diameter: f64) -> Self {
        let scale = if diameter > 0.0 && diameter.is_finite() {
            diameter
        } else {
            1.0
        };
        Tolerance {
            eps_length: Self::DEFAULT_RELATIVE_LENGTH * scale,
            eps_param: Self::DEFAULT_PARAM,
        }
    }

    /// Default tolerance for a pair of shapes, scaled by the larger diameter.
    pub fn for_pair(a: &SimplePolygon, b: &SimplePolygon) -> Self {
        Self::for_diameter(a.diameter().max(b.diameter()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("polygon needs at least 3 vertices, got {count}")]
    TooFewVertices { count: usize },
    #[error("vertex {vertex} is not finite")]
    NonFinite { vertex: usize },
    #[error("vertex {vertex} repeats its predecessor (zero-length edge {prev}->{vertex})")]
    RepeatedVertex { vertex: usize, prev: usize },
    #[error("edge {}->{} folds back onto edge {}->{}", first.0, first.1, second.0, second.1)]
    FoldBack {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("edge {}->{} intersects edge {}->{}", first.0, first.1, second.0, second.1)]
    SelfIntersection {
        first: (usize, usize),
        second: (usize, usize),
    },
    #[error("polygon has zero area")]
    ZeroArea,
    #[error("all input points are collinear")]
    DegenerateInput,
    #[error("invalid tolerance (eps_length={eps_length}, eps_param={eps_param})")]
    InvalidTolerance { eps_length: f64, eps_param: f64 },
}

/// A closed, non-self-intersecting, counter-clockwise vertex loop. The
/// closing edge from the last vertex back to the first is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplePolygon {
    vertices: Vec<Point>,
}

impl SimplePolygon {
    /// Validates a vertex loop. Clockwise input is reversed.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeomError> {
        let n = vertices.len();
        if n < 3 {
            return Err(GeomError::TooFewVertices { count: n });
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite { vertex: i });
        }
        let tol = Tolerance::for_diameter(BoundingBox::of_points(&vertices).diagonal());
        for i in 0..n {
            let prev = (i + n - 1) % n;
            if vertices[i].dist(vertices[prev]) <= tol.eps_length {
                return Err(GeomError::RepeatedVertex { vertex: i, prev });
            }
        }
        check_simple(&vertices, tol)?;
        let signed = signed_area_of(&vertices);
        if signed.abs() <= tol.eps_length * tol.eps_length {
            return Err(GeomError::ZeroArea);
        }
        let mut vertices = vertices;
        if signed < 0.0 {
            vertices.reverse();
        }
        Ok(SimplePolygon { vertices })
    }

    /// Wraps vertices already known to form a valid CCW simple loop.
    pub(crate) fn from_valid(vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.len() >= 3);
        SimplePolygon { vertices }
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false for a valid polygon; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    #[inline]
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        (0..self.vertices.len()).map(move |i| self.edge(i))
    }

    pub fn bbox(&self) -> BoundingBox {
        BoundingBox::of_points(&self.vertices)
    }

    /// Largest vertex-to-vertex distance.
    pub fn diameter(&self) -> f64 {
        let mut hull = hull_vertices(&self.vertices);
        if hull.len() < 2 {
            hull = self.vertices.clone();
        }
        let mut best = 0.0f64;
        for (i, a) in hull.iter().enumerate() {
            for b in &hull[i + 1..] {
                best = best.max(a.dist(*b));
            }
        }
        best
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let mut a2 = 0.0;
        let mut cx = 0.0;
        let mut cy = 0.0;
        // Shift to the first vertex to limit cancellation far from the origin.
        let o = self.vertices[0];
        for (p, q) in self.edges() {
            let (p, q) = (p - o, q - o);
            let c = cross(p, q);
            a2 += c;
            cx += (p.x + q.x) * c;
            cy += (p.y + q.y) * c;
        }
        Point::new(o.x + cx / (3.0 * a2), o.y + cy / (3.0 * a2))
    }

    pub fn translated(&self, by: Point) -> SimplePolygon {
        SimplePolygon::from_valid(self.vertices.iter().map(|&p| p + by).collect())
    }
}

fn signed_area_of(vertices: &[Point]) -> f64 {
    let o = vertices[0];
    let n = vertices.len();
    let mut s = 0.0;
    for i in 1..n - 1 {
        s += cross(vertices[i] - o, vertices[i + 1] - o);
    }
    0.5 * s
}

fn check_simple(vertices: &[Point], tol: Tolerance) -> Result<(), GeomError> {
    let n = vertices.len();
    let edge = |i: usize| (vertices[i], vertices[(i + 1) % n]);

    // Adjacent edges may only share their common vertex.
    for i in 0..n {
        let j = (i + 1) % n;
        let (a0, a1) = edge(i);
        let (_, b1) = edge(j);
        let u = a1 - a0;
        let v = b1 - a1;
        let sin = cross(u, v) / (u.norm() * v.norm());
        if sin.abs() <= tol.eps_param && dot(u, v) < 0.0 {
            return Err(GeomError::FoldBack {
                first: (i, (i + 1) % n),
                second: (j, (j + 1) % n),
            });
        }
    }

    // Sweep over x-sorted edge boxes; report the lexicographically first pair.
    let mut order: Vec<(usize, BoundingBox)> = (0..n)
        .map(|i| {
            let (a, b) = edge(i);
            (i, BoundingBox::of_segment(a, b))
        })
        .collect();
    order.sort_by(|a, b| a.1.min.x.total_cmp(&b.1.min.x).then(a.0.cmp(&b.0)));
    let mut worst: Option<(usize, usize)> = None;
    for (k, (i, bi)) in order.iter().enumerate() {
        for (j, bj) in &order[k + 1..] {
            if bj.min.x > bi.max.x + tol.eps_length {
                break;
            }
            let (lo, hi) = if i < j { (*i, *j) } else { (*j, *i) };
            if hi == lo + 1 || (lo == 0 && hi == n - 1) {
                continue;
            }
            if !bi.overlaps(bj, tol.eps_length) {
                continue;
            }
            let (a0, a1) = edge(lo);
            let (b0, b1) = edge(hi);
            if segment_intersection(a0, a1, b0, b1, tol) != SegmentIntersection::None
                && worst.is_none_or(|w| (lo, hi) < w)
            {
                worst = Some((lo, hi));
            }
        }
    }
    match worst {
        Some((lo, hi)) => Err(GeomError::SelfIntersection {
            first: (lo, (lo + 1) % n),
            second: (hi, (hi + 1) % n),
        }),
        None => Ok(()),
    }
}

/// A rotation about the origin followed by a translation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidMotion {
    pub theta: f64,
    pub tx: f64,
    pub ty: f64,
}

impl RigidMotion {
    pub const IDENTITY: RigidMotion = RigidMotion {
        theta: 0.0,
        tx: 0.0,
        ty: 0.0,
    };

    /// Builds a motion with `theta` reduced to `[0, 2π)`.
    pub fn new(theta: f64, tx: f64, ty: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        RigidMotion { theta, tx, ty }
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        let (s, c) = self.theta.sin_cos();
        Point::new(c * p.x - s * p.y + self.tx, s * p.x + c * p.y + self.ty)
    }

    pub fn inverse(&self) -> RigidMotion {
        let (s, c) = self.theta.sin_cos();
        // R^T (p - t)
        RigidMotion::new(
            -self.theta,
            -(c * self.tx + s * self.ty),
            s * self.tx - c * self.ty,
        )
    }

    /// `self ∘ first`: applies `first`, then `self`.
    pub fn compose(&self, first: &RigidMotion) -> RigidMotion {
        let t = self.apply(Point::new(first.tx, first.ty));
        RigidMotion::new(self.theta + first.theta, t.x, t.y)
    }
}

pub fn area(p: &SimplePolygon) -> f64 {
    signed_area_of(&p.vertices)
}

pub fn perimeter(p: &SimplePolygon) -> f64 {
    p.edges().map(|(a, b)| a.dist(b)).sum()
}

/// True when no consecutive edge pair turns clockwise. Collinear runs pass.
pub fn is_convex(p: &SimplePolygon) -> bool {
    let n = p.len();
    (0..n).all(|i| {
        let (a, b) = p.edge(i);
        let (_, c) = p.edge((i + 1) % n);
        let u = b - a;
        let v = c - b;
        cross(u, v) >= -Tolerance::DEFAULT_PARAM * u.norm() * v.norm()
    })
}

/// Andrew's monotone chain, strict turns only. Returns CCW hull vertices.
fn hull_vertices(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    fn chain<'a>(points: impl Iterator<Item = &'a Point>) -> Vec<Point> {
        let mut out: Vec<Point> = Vec::new();
        for &p in points {
            while out.len() >= 2 {
                let a = out[out.len() - 2];
                let b = out[out.len() - 1];
                if cross(b - a, p - b) <= 0.0 {
                    out.pop();
                } else {
                    break;
                }
            }
            out.push(p);
        }
        out.pop();
        out
    }
    let mut hull = chain(pts.iter());
    hull.extend(chain(pts.iter().rev()));
    hull
}

pub fn convex_hull(points: &[Point]) -> Result<SimplePolygon, GeomError> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(GeomError::DegenerateInput);
    }
    let hull = hull_vertices(points);
    if hull.len() < 3 {
        return Err(GeomError::DegenerateInput);
    }
    let tol = Tolerance::for_diameter(BoundingBox::of_points(&hull).diagonal());
    if signed_area_of(&hull) <= tol.eps_length * tol.eps_length {
        return Err(GeomError::DegenerateInput);
    }
    Ok(SimplePolygon::from_valid(hull))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Location {
    Inside,
    Outside,
    OnBoundary,
}

/// Even-odd classification, with a boundary band of width `eps_length`.
pub fn point_in_polygon(q: Point, p: &SimplePolygon, tol: Tolerance) -> Location {
    locate_in_loop(q, p.vertices(), tol.eps_length)
}

pub(crate) fn locate_in_loop(q: Point, vertices: &[Point], eps: f64) -> Location {
    let n = vertices.len();
    let mut inside = false;
    let mut prev = vertices[n - 1];
    for &cur in vertices {
        let (a, b) = (prev, cur);
        prev = cur;
        // Cheap box test before the distance computation.
        if q.x >= a.x.min(b.x) - eps
            && q.x <= a.x.max(b.x) + eps
            && q.y >= a.y.min(b.y) - eps
            && q.y <= a.y.max(b.y) + eps
            && point_segment_distance(q, a, b) < eps
        {
            return Location::OnBoundary;
        }
        if (a.y > q.y) != (b.y > q.y) {
            let x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if q.x < x {
                inside = !inside;
            }
        }
    }
    if inside {
        Location::Inside
    } else {
        Location::Outside
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentIntersection {
    None,
    /// Transversal interior crossing at `point`; `s` is the parameter along
    /// the first segment and `t` along the second.
    Proper {
        point: Point,
        s: f64,
        t: f64,
    },
    /// Endpoint touch, collinear overlap or near tangency.
    Degenerate,
}

/// Classifies the intersection of segments `a0–a1` and `b0–b1`.
pub fn segment_intersection(
    a0: Point,
    a1: Point,
    b0: Point,
    b1: Point,
    tol: Tolerance,
) -> SegmentIntersection {
    let eps = tol.eps_length;
    if !BoundingBox::of_segment(a0, a1).overlaps(&BoundingBox::of_segment(b0, b1), eps) {
        return SegmentIntersection::None;
    }
    let r = a1 - a0;
    let q = b1 - b0;
    let lr = r.norm();
    let lq = q.norm();
    let w = b0 - a0;
    let denom = cross(r, q);

    if denom.abs() <= tol.eps_param * lr * lq {
        // Parallel: the larger of the two line offsets decides.
        let offset = (cross(r, w).abs() / lr).max(cross(q, w).abs() / lq);
        if offset > eps {
            return SegmentIntersection::None;
        }
        let overlap = |o: Point, d: Point, len: f64, p0: Point, p1: Point| {
            let l2 = len * len;
            let t0 = dot(p0 - o, d) / l2;
            let t1 = dot(p1 - o, d) / l2;
            let slack = eps / len;
            t0.max(t1) >= -slack && t0.min(t1) <= 1.0 + slack
        };
        if overlap(a0, r, lr, b0, b1) && overlap(b0, q, lq, a0, a1) {
            return SegmentIntersection::Degenerate;
        }
        return SegmentIntersection::None;
    }

    let s = cross(w, q) / denom;
    let t = cross(w, r) / denom;
    let es = eps / lr;
    let et = eps / lq;
    if s < -es || s > 1.0 + es || t < -et || t > 1.0 + et {
        return SegmentIntersection::None;
    }
    if s <= es || s >= 1.0 - es || t <= et || t >= 1.0 - et {
        return SegmentIntersection::Degenerate;
    }
    let pa = a0 + r * s;
    let pb = b0 + q * t;
    SegmentIntersection::Proper {
        point: Point::new((pa.x + pb.x) * 0.5, (pa.y + pb.y) * 0.5),
        s,
        t,
    }
}

pub fn apply_motion(p: &SimplePolygon, m: RigidMotion) -> SimplePolygon {
    SimplePolygon::from_valid(p.vertices.iter().map(|&v| m.apply(v)).collect())
}

/// Largest distance from `reference` to a vertex of `p`.
pub fn circumradius_about(p: &SimplePolygon, reference: Point) -> f64 {
    p.vertices
        .iter()
        .map(|v| v.dist(reference))
        .fold(0.0, f64::max)
}

/// Signed distance to the boundary, positive inside.
pub fn signed_distance(q: Point, p: &SimplePolygon, tol: Tolerance) -> f64 {
    let d = p
        .edges()
        .map(|(a, b)| point_segment_distance(q, a, b))
        .fold(f64::INFINITY, f64::min);
    match point_in_polygon(q, p, tol) {
        Location::Inside => d,
        Location::Outside => -d,
        Location::OnBoundary => 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    fn unit_square() -> SimplePolygon {
        SimplePolygon::new(pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap()
    }

    fn l_shape() -> SimplePolygon {
        SimplePolygon::new(pts(&[
            (0., 0.),
            (2., 0.),
            (2., 1.),
            (1., 1.),
            (1., 2.),
            (0., 2.),
        ]))
        .unwrap()
    }

    fn regular(n: usize, r: f64) -> SimplePolygon {
        SimplePolygon::new(
            (0..n)
                .map(|i| {
                    let a = TAU * i as f64 / n as f64;
                    Point::new(r * a.cos(), r * a.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    fn tol() -> Tolerance {
        Tolerance::for_diameter(2.0)
    }

    #[test]
    fn area_examples() {
        assert_eq!(area(&unit_square()), 1.0);
        assert!((area(&regular(256, 1.0)) - 0.5 * 256.0 * (TAU / 256.0).sin()).abs() < 1e-12);
        assert!((area(&regular(256, 1.0)) - 3.141277).abs() < 1e-6);
        assert_eq!(area(&l_shape()), 3.0);
    }

    #[test]
    fn perimeter_examples() {
        assert_eq!(perimeter(&unit_square()), 4.0);
        assert_eq!(perimeter(&l_shape()), 8.0);
        let p = perimeter(&regular(256, 1.0));
        assert!((p - 512.0 * (PI / 256.0).sin()).abs() < 1e-12);
        assert!((p - 6.283028).abs() < 1e-6);
    }

    #[test]
    fn convexity_examples() {
        assert!(is_convex(&unit_square()));
        assert!(!is_convex(&l_shape()));
        let star: Vec<Point> = (0..10)
            .map(|i| {
                let r = if i % 2 == 0 { 1.0 } else { 0.4 };
                let a = PI * i as f64 / 5.0;
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        assert!(!is_convex(&SimplePolygon::new(star).unwrap()));
        // Collinear run along the bottom edge still counts as convex.
        let p =
            SimplePolygon::new(pts(&[(0., 0.), (0.5, 0.), (1., 0.), (1., 1.), (0., 1.)])).unwrap();
        assert!(is_convex(&p));
    }

    #[test]
    fn clockwise_input_is_reversed() {
        let p = SimplePolygon::new(pts(&[(0., 0.), (0., 1.), (1., 1.), (1., 0.)])).unwrap();
        assert_eq!(area(&p), 1.0);
        assert_eq!(p.vertices()[0], Point::new(1.0, 0.0));
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            SimplePolygon::new(pts(&[(0., 0.), (1., 0.)])),
            Err(GeomError::TooFewVertices { count: 2 })
        );
        assert_eq!(
            SimplePolygon::new(pts(&[(0., 0.), (1., 0.), (1., 0.), (0., 1.)])),
            Err(GeomError::RepeatedVertex { vertex: 2, prev: 1 })
        );
        assert_eq!(
            SimplePolygon::new(pts(&[(0., 0.), (f64::NAN, 0.), (0., 1.)])),
            Err(GeomError::NonFinite { vertex: 1 })
        );
        assert_eq!(
            SimplePolygon::new(pts(&[(0., 0.), (1., 1.), (1., 0.), (0., 1.)])),
            Err(GeomError::SelfIntersection {
                first: (0, 1),
                second: (2, 3)
            })
        );
        assert!(matches!(
            SimplePolygon::new(pts(&[(0., 0.), (1., 0.), (2., 0.)])),
            Err(GeomError::FoldBack { .. })
        ));
        assert!(matches!(
            SimplePolygon::new(pts(&[(0., 0.), (2., 0.), (1., 0.), (1., 1.)])),
            Err(GeomError::FoldBack { .. })
        ));
        // Vertex touching a non-adjacent edge.
        assert!(matches!(
            SimplePolygon::new(pts(&[(0., 0.), (2., 0.), (2., 2.), (1., 0.), (0., 2.)])),
            Err(GeomError::SelfIntersection { .. })
        ));
    }

    #[test]
    fn convex_hull_examples() {
        let h = convex_hull(&pts(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.), (0.5, 0.5)])).unwrap();
        assert_eq!(h.len(), 4);
        assert_eq!(area(&h), 1.0);
        // (2,2) is not an L vertex, so the hull cuts the notch diagonally.
        let h = convex_hull(l_shape().vertices()).unwrap();
        assert_eq!(
            h.vertices(),
            &pts(&[(0., 0.), (2., 0.), (2., 1.), (1., 2.), (0., 2.)])[..]
        );
        assert_eq!(area(&h), 3.5);
        assert_eq!(
            convex_hull(&pts(&[(0., 0.), (1., 1.), (2., 2.), (3., 3.)])),
            Err(GeomError::DegenerateInput)
        );
    }

    #[test]
    fn point_in_polygon_examples() {
        let t = tol();
        assert_eq!(
            point_in_polygon(Point::new(0.5, 0.5), &unit_square(), t),
            Location::Inside
        );
        assert_eq!(
            point_in_polygon(Point::new(1.5, 1.5), &l_shape(), t),
            Location::Outside
        );
        assert_eq!(
            point_in_polygon(Point::new(1.0, 0.5), &unit_square(), t),
            Location::OnBoundary
        );
    }

    #[test]
    fn segment_intersection_examples() {
        let t = tol();
        let p = |x, y| Point::new(x, y);
        match segment_intersection(p(0., 0.), p(1., 1.), p(0., 1.), p(1., 0.), t) {
            SegmentIntersection::Proper { point, s, t } => {
                assert!((point.x - 0.5).abs() < 1e-15 && (point.y - 0.5).abs() < 1e-15);
                assert!((s - 0.5).abs() < 1e-15 && (t - 0.5).abs() < 1e-15);
            }
            other => panic!("expected proper crossing, got {other:?}"),
        }
        assert_eq!(
            segment_intersection(p(0., 0.), p(1., 0.), p(0., 1.), p(1., 1.), t),
            SegmentIntersection::None
        );
        assert_eq!(
            segment_intersection(p(0., 0.), p(1., 0.), p(0.5, 0.), p(0.5, 1.), t),
            SegmentIntersection::Degenerate
        );
        // Collinear overlap and collinear disjoint.
        assert_eq!(
            segment_intersection(p(0., 0.), p(1., 0.), p(0.5, 0.), p(2., 0.), t),
            SegmentIntersection::Degenerate
        );
        assert_eq!(
            segment_intersection(p(0., 0.), p(1., 0.), p(1.5, 0.), p(2., 0.), t),
            SegmentIntersection::None
        );
    }

    #[test]
    fn apply_motion_examples() {
        let sq = unit_square();
        assert_eq!(apply_motion(&sq, RigidMotion::IDENTITY), sq);
        let r = apply_motion(&sq, RigidMotion::new(FRAC_PI_2, 0.0, 0.0));
        let expect = pts(&[(0., 0.), (0., 1.), (-1., 1.), (-1., 0.)]);
        for (a, b) in r.vertices().iter().zip(&expect) {
            assert!(a.dist(*b) < 1e-15, "{a} vs {b}");
        }
        assert!((area(&r) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn motion_inverse_and_compose() {
        let m = RigidMotion::new(1.1, 0.3, -2.0);
        let q = Point::new(0.7, 0.2);
        assert!(m.inverse().apply(m.apply(q)).dist(q) < 1e-14);
        let n = RigidMotion::new(-0.4, 1.0, 0.5);
        assert!(n.compose(&m).apply(q).dist(n.apply(m.apply(q))) < 1e-14);
        assert!(RigidMotion::new(-0.1, 0., 0.).theta < TAU);
        assert_eq!(RigidMotion::new(TAU, 0., 0.).theta, 0.0);
    }

    #[test]
    fn circumradius_examples() {
        let sq = unit_square();
        assert!((circumradius_about(&sq, Point::new(0.5, 0.5)) - SQRT_2 / 2.0).abs() < 1e-15);
        assert!((circumradius_about(&sq, Point::ORIGIN) - SQRT_2).abs() < 1e-15);
        assert!((circumradius_about(&regular(256, 1.0), Point::ORIGIN) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn centroid_and_diameter() {
        let c = l_shape().centroid();
        // Two unit squares at (0.5,0.5),(1.5,0.5) and one at (0.5,1.5).
        assert!(c.dist(Point::new(5.0 / 6.0, 5.0 / 6.0)) < 1e-15);
        assert!((unit_square().diameter() - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn signed_distance_sign() {
        let t = tol();
        let sq = unit_square();
        assert!((signed_distance(Point::new(0.5, 0.4), &sq, t) - 0.4).abs() < 1e-15);
        assert!((signed_distance(Point::new(1.5, 0.5), &sq, t) + 0.5).abs() < 1e-15);
    }
}
