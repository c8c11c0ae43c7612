#![allow(dead_code)]

use meanarc::geom::{perimeter, point_in_polygon, Location, SimplePolygon, Tolerance};
use meanarc::shapes::ShapeSpec;
use proptest::prelude::*;

pub fn convex_spec() -> impl Strategy<Value = ShapeSpec> {
    prop_oneof![
        (0.2..2.0f64).prop_map(|r| ShapeSpec::Circle { r, resolution: 64 }),
        (0.2..2.0f64, 0.2..2.0f64).prop_map(|(a, b)| ShapeSpec::Ellipse {
            a,
            b,
            resolution: 64
        }),
        (0.2..2.0f64, 0.2..2.0f64).prop_map(|(w, h)| ShapeSpec::Rectangle { w, h }),
        (3usize..12, 0.2..2.0f64).prop_map(|(n, r)| ShapeSpec::RegularPolygon { n, r }),
        (5usize..20, 0.3..2.0f64, any::<u64>())
            .prop_map(|(k, r, seed)| ShapeSpec::RandomConvex { k, r, seed }),
    ]
}

pub fn nonconvex_spec() -> impl Strategy<Value = ShapeSpec> {
    prop_oneof![
        (0.3..2.0f64, 0.2..0.95f64, 3usize..9).prop_map(|(outer, f, points)| {
            let limit = outer * (std::f64::consts::PI / points as f64).cos();
            ShapeSpec::Star {
                outer,
                inner: limit * f,
                points,
            }
        }),
        (0.5..2.0f64, 0.1..0.9f64).prop_map(|(size, f)| ShapeSpec::LShape {
            size,
            arm: size * f
        }),
        (0.3..1.5f64, 0.1..0.9f64, 0.2..2.0f64).prop_map(|(r, f, slot_length)| {
            ShapeSpec::Keyhole {
                r,
                slot_width: 2.0 * r * f,
                slot_length,
                resolution: 48,
            }
        }),
        (2usize..5, 1.0..4.0f64, 0.2..1.0f64, 0.2..2.0f64).prop_map(
            |(teeth, width, base, tooth_length)| ShapeSpec::Comb {
                teeth,
                width,
                base,
                tooth_length
            }
        ),
    ]
}

pub fn any_spec() -> impl Strategy<Value = ShapeSpec> {
    prop_oneof![convex_spec(), nonconvex_spec()]
}

/// Inside length of `loop_` from `n` points spread evenly by arc length.
/// Off by at most `crossings · P / n`.
pub fn sampled_inside_length(domain: &SimplePolygon, loop_: &SimplePolygon, n: usize) -> f64 {
    let tol = Tolerance::for_pair(domain, loop_);
    let total = perimeter(loop_);
    let lens: Vec<f64> = loop_.edges().map(|(a, b)| a.dist(b)).collect();
    let mut inside = 0usize;
    let (mut edge, mut start) = (0usize, 0.0);
    for k in 0..n {
        let t = (k as f64 + 0.5) / n as f64 * total;
        while edge + 1 < lens.len() && t > start + lens[edge] {
            start += lens[edge];
            edge += 1;
        }
        let (a, b) = loop_.edge(edge);
        let p = a.lerp(b, ((t - start) / lens[edge]).min(1.0));
        if point_in_polygon(p, domain, tol) == Location::Inside {
            inside += 1;
        }
    }
    total * inside as f64 / n as f64
}
