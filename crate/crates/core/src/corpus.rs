//! Named test surfaces and seeded random ones.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curvature::CurvatureProfile;
use crate::geom::Vec2;
use crate::surface::{
    generate_doubled_polygon, polyhedron, random_convex_polygon, regular_polygon, ConeSurface, DEFAULT_TOL,
};

/// Names accepted by [`named`].
pub const NAMES: &[&str] = &["equilateral", "square", "right", "obtuse", "pentagon", "hexagon", "tetrahedron", "thin"];

fn doubled(pts: &[Vec2]) -> ConeSurface {
    generate_doubled_polygon(pts, DEFAULT_TOL).expect("fixed convex polygon")
}

/// A fixed surface by name:
///
/// * `equilateral`, `square`, `pentagon`, `hexagon`: doubled regular polygons with unit side;
/// * `right`: doubled triangle with angles π/2, π/3, π/6;
/// * `obtuse`: doubled triangle (0,0), (1,0), (0.5,0.2), which is not Delaunay;
/// * `tetrahedron`: an irregular tetrahedron;
/// * `thin`: doubled isosceles triangle with apex angle π/10.
pub fn named(name: &str) -> Option<ConeSurface> {
    let v = Vec2::new;
    Some(match name {
        "equilateral" => doubled(&regular_polygon(3)),
        "square" => doubled(&regular_polygon(4)),
        "pentagon" => doubled(&regular_polygon(5)),
        "hexagon" => doubled(&regular_polygon(6)),
        "right" => doubled(&[v(0.0, 0.0), v(1.0, 0.0), v(0.0, 3f64.sqrt())]),
        "obtuse" => doubled(&[v(0.0, 0.0), v(1.0, 0.0), v(0.5, 0.2)]),
        "thin" => doubled(&[v(0.0, 0.0), v(1.0, 0.0), v(0.5, 0.5 / (PI / 20.0).tan())]),
        "tetrahedron" => polyhedron(
            &[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.1, 0.9, 0.0], [0.3, 0.25, 0.7]],
            &[[0, 2, 1], [0, 1, 3], [1, 2, 3], [2, 0, 3]],
            DEFAULT_TOL,
        )
        .expect("fixed tetrahedron"),
        _ => return None,
    })
}

/// Doubled random convex polygon with 3 to 12 vertices whose curvature gap
/// exceeds `min_gap`. The seed fully determines the result.
pub fn random_doubled_polygon(seed: u64, min_gap: f64) -> ConeSurface {
    random_doubled_polygon_with(seed, None, min_gap)
}

/// As [`random_doubled_polygon`], with the vertex count fixed when given.
/// `min_gap` must be below 1/3, the largest gap any flat sphere has.
pub fn random_doubled_polygon_with(seed: u64, vertices: Option<usize>, min_gap: f64) -> ConeSurface {
    assert!(min_gap < 1.0 / 3.0, "no flat sphere has gap above 1/3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let m = vertices.unwrap_or_else(|| rng.gen_range(3..=12));
        let pts = random_convex_polygon(&mut rng, m);
        let Ok(s) = generate_doubled_polygon(&pts, DEFAULT_TOL) else { continue };
        let gap = CurvatureProfile::new(s.curvatures()).and_then(|p| p.gap());
        if gap.is_ok_and(|g| g > min_gap) {
            return s;
        }
    }
}

/// Every named surface plus a few seeded random ones with gap above 0.01.
pub fn corpus() -> Vec<(String, ConeSurface)> {
    let mut out: Vec<(String, ConeSurface)> =
        NAMES.iter().map(|&n| (n.to_string(), named(n).expect("listed name"))).collect();
    for seed in 0..4 {
        out.push((format!("random-{seed}"), random_doubled_polygon(seed, 0.01)));
    }
    out
}
