//! Parametric shape constructors and the JSON shape file format.
//!
//! Curved kinds are polygons inscribed in the ideal curve. Built shapes are
//! centred on the origin except `LShape` and `Comb`, which are anchored at
//! `(0, 0)` so their vertices stay on round numbers.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{convex_hull, GeomError, Point, SimplePolygon};

pub const MIN_RESOLUTION: usize = 16;
/// Upper bound on any vertex-count parameter.
pub const MAX_VERTICES: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShapeSpec {
    Circle {
        r: f64,
        resolution: usize,
    },
    Ellipse {
        a: f64,
        b: f64,
        resolution: usize,
    },
    Rectangle {
        w: f64,
        h: f64,
    },
    RegularPolygon {
        n: usize,
        r: f64,
    },
    Star {
        outer: f64,
        inner: f64,
        points: usize,
    },
    /// Square of side `size` with a `(size - arm)²` notch cut from one corner.
    LShape {
        size: f64,
        arm: f64,
    },
    /// Disk of radius `r` with a rectangular slot hanging below it.
    Keyhole {
        r: f64,
        slot_width: f64,
        slot_length: f64,
        resolution: usize,
    },
    /// Base bar of height `base` with `teeth` upward teeth; tooth and gap
    /// widths are both `width / (2·teeth − 1)`.
    Comb {
        teeth: usize,
        width: f64,
        base: f64,
        tooth_length: f64,
    },
    /// Convex hull of `k` points drawn uniformly in a disk of radius `r`.
    RandomConvex {
        k: usize,
        r: f64,
        seed: u64,
    },
    FromFile {
        path: PathBuf,
    },
}

#[derive(Debug, Error)]
pub enum ShapeError {
    #[error("invalid shape spec: {0}")]
    InvalidSpec(String),
    #[error("invalid scale factor {0} (must be positive and finite)")]
    InvalidScale(f64),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("vertex {index}: {message}")]
    Vertex { index: usize, message: String },
    #[error("invalid polygon: {0}")]
    Validation(#[from] GeomError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl ShapeError {
    fn spec(msg: impl Into<String>) -> Self {
        ShapeError::InvalidSpec(msg.into())
    }
}

fn positive(name: &str, v: f64) -> Result<(), ShapeError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(ShapeError::spec(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn count_in(name: &str, v: usize, min: usize) -> Result<(), ShapeError> {
    if (min..=MAX_VERTICES).contains(&v) {
        Ok(())
    } else {
        Err(ShapeError::spec(format!(
            "{name} must lie in {min}..={MAX_VERTICES}, got {v}"
        )))
    }
}

impl ShapeSpec {
    pub fn circle(r: f64) -> Self {
        ShapeSpec::Circle { r, resolution: 256 }
    }

    pub fn ellipse(a: f64, b: f64) -> Self {
        ShapeSpec::Ellipse {
            a,
            b,
            resolution: 256,
        }
    }

    pub fn validate(&self) -> Result<(), ShapeError> {
        match *self {
            ShapeSpec::Circle { r, resolution } => {
                positive("r", r)?;
                count_in("resolution", resolution, MIN_RESOLUTION)
            }
            ShapeSpec::Ellipse { a, b, resolution } => {
                positive("a", a)?;
                positive("b", b)?;
                count_in("resolution", resolution, MIN_RESOLUTION)
            }
            ShapeSpec::Rectangle { w, h } => {
                positive("w", w)?;
                positive("h", h)
            }
            ShapeSpec::RegularPolygon { n, r } => {
                positive("r", r)?;
                count_in("n", n, 3)
            }
            ShapeSpec::Star {
                outer,
                inner,
                points,
            } => {
                positive("outer", outer)?;
                positive("inner", inner)?;
                count_in("points", points, 3)?;
                // Beyond this the inner vertices stop being reflex.
                let limit = outer * (PI / points as f64).cos();
                if inner >= limit {
                    return Err(ShapeError::spec(format!(
                        "star inner radius {inner} must be below outer·cos(π/points) = {limit}"
                    )));
                }
                Ok(())
            }
            ShapeSpec::LShape { size, arm } => {
                positive("size", size)?;
                positive("arm", arm)?;
                if arm >= size {
                    return Err(ShapeError::spec(format!(
                        "lshape arm {arm} must be smaller than size {size}"
                    )));
                }
                Ok(())
            }
            ShapeSpec::Keyhole {
                r,
                slot_width,
                slot_length,
                resolution,
            } => {
                positive("r", r)?;
                positive("slot_width", slot_width)?;
                positive("slot_length", slot_length)?;
                count_in("resolution", resolution, MIN_RESOLUTION)?;
                if slot_width >= 2.0 * r {
                    return Err(ShapeError::spec(format!(
                        "keyhole slot width {slot_width} must be below the diameter {}",
                        2.0 * r
                    )));
                }
                Ok(())
            }
            ShapeSpec::Comb {
                teeth,
                width,
                base,
                tooth_length,
            } => {
                positive("width", width)?;
                positive("base", base)?;
                positive("tooth_length", tooth_length)?;
                count_in("teeth", teeth, 2)
            }
            ShapeSpec::RandomConvex { k, r, .. } => {
                positive("r", r)?;
                count_in("k", k, 3)
            }
            ShapeSpec::FromFile { .. } => Ok(()),
        }
    }

    /// Whether the kind is convex by construction; `None` for files.
    pub fn convex_by_construction(&self) -> Option<bool> {
        match self {
            ShapeSpec::Circle { .. }
            | ShapeSpec::Ellipse { .. }
            | ShapeSpec::Rectangle { .. }
            | ShapeSpec::RegularPolygon { .. }
            | ShapeSpec::RandomConvex { .. } => Some(true),
            ShapeSpec::Star { .. }
            | ShapeSpec::LShape { .. }
            | ShapeSpec::Keyhole { .. }
            | ShapeSpec::Comb { .. } => Some(false),
            ShapeSpec::FromFile { .. } => None,
        }
    }
}

fn on_ellipse(a: f64, b: f64, angle: f64) -> Point {
    Point::new(a * angle.cos(), b * angle.sin())
}

pub fn build(spec: &ShapeSpec) -> Result<SimplePolygon, ShapeError> {
    spec.validate()?;
    let vertices: Vec<Point> = match *spec {
        ShapeSpec::Circle { r, resolution } => (0..resolution)
            .map(|i| on_ellipse(r, r, TAU * i as f64 / resolution as f64))
            .collect(),
        ShapeSpec::Ellipse { a, b, resolution } => (0..resolution)
            .map(|i| on_ellipse(a, b, TAU * i as f64 / resolution as f64))
            .collect(),
        ShapeSpec::Rectangle { w, h } => vec![
            Point::new(-w / 2.0, -h / 2.0),
            Point::new(w / 2.0, -h / 2.0),
            Point::new(w / 2.0, h / 2.0),
            Point::new(-w / 2.0, h / 2.0),
        ],
        ShapeSpec::RegularPolygon { n, r } => (0..n)
            .map(|i| on_ellipse(r, r, TAU * i as f64 / n as f64))
            .collect(),
        ShapeSpec::Star {
            outer,
            inner,
            points,
        } => (0..2 * points)
            .map(|i| {
                let rho = if i % 2 == 0 { outer } else { inner };
                on_ellipse(rho, rho, PI * i as f64 / points as f64)
            })
            .collect(),
        ShapeSpec::LShape { size, arm } => vec![
            Point::new(0.0, 0.0),
            Point::new(size, 0.0),
            Point::new(size, arm),
            Point::new(arm, arm),
            Point::new(arm, size),
            Point::new(0.0, size),
        ],
        ShapeSpec::Keyhole {
            r,
            slot_width,
            slot_length,
            resolution,
        } => {
            let half = slot_width / 2.0;
            let start = -(half / r).acos();
            let end = -PI + (half / r).acos() + TAU;
            let mut v: Vec<Point> = (0..resolution)
                .map(|i| {
                    let t = i as f64 / (resolution - 1) as f64;
                    on_ellipse(r, r, start + (end - start) * t)
                })
                .collect();
            // Pin the junctions exactly onto the slot walls.
            let junction_y = -(r * r - half * half).sqrt();
            v[0] = Point::new(half, junction_y);
            v[resolution - 1] = Point::new(-half, junction_y);
            v.push(Point::new(-half, -r - slot_length));
            v.push(Point::new(half, -r - slot_length));
            v
        }
        ShapeSpec::Comb {
            teeth,
            width,
            base,
            tooth_length,
        } => {
            let tw = width / (2 * teeth - 1) as f64;
            let top = base + tooth_length;
            let mut v = vec![Point::new(0.0, 0.0), Point::new(width, 0.0)];
            for i in (0..teeth).rev() {
                let x0 = 2.0 * i as f64 * tw;
                let x1 = if i == teeth - 1 { width } else { x0 + tw };
                v.push(Point::new(x1, top));
                v.push(Point::new(x0, top));
                if i > 0 {
                    v.push(Point::new(x0, base));
                    v.push(Point::new(x0 - tw, base));
                }
            }
            v
        }
        ShapeSpec::RandomConvex { k, r, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pts: Vec<Point> = (0..k)
                .map(|_| {
                    let rho = r * rng.random::<f64>().sqrt();
                    let a = TAU * rng.random::<f64>();
                    on_ellipse(rho, rho, a)
                })
                .collect();
            return convex_hull(&pts).map_err(ShapeError::from);
        }
        ShapeSpec::FromFile { ref path } => return load_shape(path),
    };
    Ok(SimplePolygon::new(vertices)?)
}

/// Scales about the area centroid.
pub fn scale(p: &SimplePolygon, lambda: f64) -> Result<SimplePolygon, ShapeError> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(ShapeError::InvalidScale(lambda));
    }
    let c = p.centroid();
    Ok(SimplePolygon::from_valid(
        p.vertices().iter().map(|&v| c + (v - c) * lambda).collect(),
    ))
}

#[derive(Deserialize)]
struct ShapeFile {
    vertices: Vec<Vec<f64>>,
}

/// Parses the `{"vertices": [[x, y], ...]}` shape format.
pub fn parse_shape_json(text: &str) -> Result<SimplePolygon, ShapeError> {
    let file: ShapeFile = serde_json::from_str(text).map_err(|e| ShapeError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut vertices = Vec::with_capacity(file.vertices.len());
    for (index, v) in file.vertices.iter().enumerate() {
        match v.as_slice() {
            [x, y] => vertices.push(Point::new(*x, *y)),
            _ => {
                return Err(ShapeError::Vertex {
                    index,
                    message: format!("expected [x, y], got {} components", v.len()),
                })
            }
        }
    }
    Ok(SimplePolygon::new(vertices)?)
}

/// Serializes with 17 significant digits, enough to round-trip any `f64`.
pub fn shape_to_json(p: &SimplePolygon) -> String {
    let mut out = String::from("{\n  \"vertices\": [\n");
    let n = p.len();
    for (i, v) in p.vertices().iter().enumerate() {
        let sep = if i + 1 < n { "," } else { "" };
        let _ = writeln!(out, "    [{:.16e}, {:.16e}]{sep}", v.x, v.y);
    }
    out.push_str("  ]\n}\n");
    out
}

pub fn load_shape(path: &Path) -> Result<SimplePolygon, ShapeError> {
    let text = std::fs::read_to_string(path).map_err(|source| ShapeError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_shape_json(&text)
}

pub fn save_shape(p: &SimplePolygon, path: &Path) -> Result<(), ShapeError> {
    std::fs::write(path, shape_to_json(p)).map_err(|source| ShapeError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Names accepted before the `:` of the mini-syntax.
pub const SPEC_KINDS: &[&str] = &[
    "circle",
    "ellipse",
    "rect",
    "rectangle",
    "regular",
    "polygon",
    "star",
    "lshape",
    "keyhole",
    "comb",
    "random-convex",
    "blob",
    "file",
];

/// Parses `kind:key=value,...`, e.g. `circle:r=1,res=256` or `star:inner=0.4`.
/// Omitted parameters take defaults.
impl FromStr for ShapeSpec {
    type Err = ShapeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        let kind = kind.trim().to_ascii_lowercase();
        if kind == "file" {
            if rest.is_empty() {
                return Err(ShapeError::spec("file: needs a path"));
            }
            return Ok(ShapeSpec::FromFile {
                path: PathBuf::from(rest),
            });
        }
        let mut params = Params::parse(rest)?;
        let spec = match kind.as_str() {
            "circle" => ShapeSpec::Circle {
                r: params.real("r", 1.0)?,
                resolution: params.count("res", 256)?,
            },
            "ellipse" => ShapeSpec::Ellipse {
                a: params.real("a", 1.0)?,
                b: params.real("b", 0.5)?,
                resolution: params.count("res", 256)?,
            },
            "rect" | "rectangle" => ShapeSpec::Rectangle {
                w: params.real("w", 1.0)?,
                h: params.real("h", 1.0)?,
            },
            "regular" | "polygon" => ShapeSpec::RegularPolygon {
                n: params.count("n", 6)?,
                r: params.real("r", 1.0)?,
            },
            "star" => ShapeSpec::Star {
                outer: params.real("outer", 1.0)?,
                inner: params.real("inner", 0.4)?,
                points: params.count("points", 5)?,
            },
            "lshape" => ShapeSpec::LShape {
                size: params.real("size", 2.0)?,
                arm: params.real("arm", 1.0)?,
            },
            "keyhole" => ShapeSpec::Keyhole {
                r: params.real("r", 1.0)?,
                slot_width: params.real("w", 0.6)?,
                slot_length: params.real("l", 1.2)?,
                resolution: params.count("res", 256)?,
            },
            "comb" => ShapeSpec::Comb {
                teeth: params.count("teeth", 3)?,
                width: params.real("width", 5.0)?,
                base: params.real("base", 1.0)?,
                tooth_length: params.real("length", 2.0)?,
            },
            "random-convex" | "blob" => ShapeSpec::RandomConvex {
                k: params.count("k", 12)?,
                r: params.real("r", 1.0)?,
                seed: params.count("seed", 0)? as u64,
            },
            other => return Err(ShapeError::spec(format!("unknown shape kind '{other}'"))),
        };
        params.finish()?;
        spec.validate()?;
        Ok(spec)
    }
}

struct Params<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(rest: &'a str) -> Result<Self, ShapeError> {
        let mut pairs = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| ShapeError::spec(format!("expected key=value, got '{item}'")))?;
            let k = k.trim();
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(ShapeError::spec(format!("parameter '{k}' given twice")));
            }
            pairs.push((k, v.trim()));
        }
        Ok(Params { pairs })
    }

    fn take(&mut self, key: &str) -> Option<&'a str> {
        let i = self.pairs.iter().position(|(k, _)| *k == key)?;
        Some(self.pairs.remove(i).1)
    }

    fn real(&mut self, key: &str, default: f64) -> Result<f64, ShapeError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .map_err(|_| ShapeError::spec(format!("{key}: '{v}' is not a number"))),
        }
    }

    fn count(&mut self, key: &str, default: usize) -> Result<usize, ShapeError> {
        match self.take(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| ShapeError::spec(format!("{key}: '{v}' is not a whole number"))),
        }
    }

    fn finish(self) -> Result<(), ShapeError> {
        match self.pairs.first() {
            None => Ok(()),
            Some((k, _)) => Err(ShapeError::spec(format!("unknown parameter '{k}'"))),
        }
    }
}
