use std::collections::HashMap;
use std::f64::consts::PI;

use rand::Rng;

use super::{ConeSurface, RawSurface, Slot, SurfaceError};
use crate::geom::{orient2d, Vec2};

/// Double a strictly convex counterclockwise polygon.
///
/// The polygon is fanned from vertex 0; the top copy keeps the fan and the
/// bottom copy is its mirror image. Boundary edges are glued between the
/// copies, fan diagonals within each copy. Cone angle at vertex `i` is twice
/// its interior angle and the area is twice the polygon's.
pub fn generate_doubled_polygon(vertices: &[Vec2], tol: f64) -> Result<ConeSurface, SurfaceError> {
    let m = vertices.len();
    if m < 3 {
        return Err(SurfaceError::TooFewPolygonVertices(m));
    }
    let scale = vertices.iter().map(|p| p.norm()).fold(0.0, f64::max).max(1e-300);
    for i in 0..m {
        let o = orient2d(vertices[i], vertices[(i + 1) % m], vertices[(i + 2) % m]);
        if o <= tol * scale * scale {
            return Err(SurfaceError::NotConvex((i + 1) % m));
        }
    }
    let k = m - 2;
    let p = vertices;
    let mut lengths = Vec::with_capacity(2 * k);
    // top copy: (P0, Pi, Pi+1)
    for i in 1..=k {
        lengths.push([p[0].dist(p[i]), p[i].dist(p[i + 1]), p[i + 1].dist(p[0])]);
    }
    // mirror copy: (P0, Pi+1, Pi)
    for i in 1..=k {
        lengths.push([p[0].dist(p[i + 1]), p[i + 1].dist(p[i]), p[i].dist(p[0])]);
    }
    let mut gluing = vec![None; 6 * k];
    let mut glue = |a: Slot, b: Slot| {
        gluing[a.index()] = Some(b);
        gluing[b.index()] = Some(a);
    };
    for j in 0..k {
        let top = j;
        let bot = k + j;
        // outer edge Pi Pi+1
        glue(Slot::new(top, 1), Slot::new(bot, 1));
        if j == 0 {
            glue(Slot::new(top, 0), Slot::new(bot, 2));
        } else {
            glue(Slot::new(top, 0), Slot::new(top - 1, 2));
            glue(Slot::new(bot, 2), Slot::new(bot - 1, 0));
        }
        if j == k - 1 {
            glue(Slot::new(top, 2), Slot::new(bot, 0));
        }
    }
    RawSurface { lengths, gluing }.into_cone_surface(tol)
}

/// Regular `m`-gon with unit side, counterclockwise, starting at the origin.
pub fn regular_polygon(m: usize) -> Vec<Vec2> {
    let mut pts = Vec::with_capacity(m);
    let mut p = Vec2::ZERO;
    for i in 0..m {
        pts.push(p);
        p = p + Vec2::from_angle(2.0 * PI * i as f64 / m as f64);
    }
    pts
}

/// Random strictly convex polygon: jittered points on a random ellipse,
/// resampled until convex.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, m: usize) -> Vec<Vec2> {
    assert!(m >= 3);
    loop {
        let mut angles: Vec<f64> = (0..m).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let a = rng.gen_range(0.5..1.5);
        let b = rng.gen_range(0.5..1.5);
        let rot = rng.gen_range(0.0..PI);
        let pts: Vec<Vec2> = angles
            .iter()
            .map(|&t| {
                let r = 1.0 + rng.gen_range(-0.05..0.05);
                Vec2::new(a * r * t.cos(), b * r * t.sin()).rotated(rot)
            })
            .collect();
        let convex = (0..m).all(|i| {
            let (p, q, r) = (pts[i], pts[(i + 1) % m], pts[(i + 2) % m]);
            orient2d(p, q, r) > 1e-3 * (q - p).norm() * (r - q).norm()
        });
        let separated = (0..m).all(|i| pts[i].dist(pts[(i + 1) % m]) > 0.05);
        if convex && separated {
            return pts;
        }
    }
}

/// Surface of a convex polyhedron in 3-space. Faces are vertex index
/// triples, counterclockwise seen from outside.
pub fn polyhedron(points: &[[f64; 3]], faces: &[[usize; 3]], tol: f64) -> Result<ConeSurface, SurfaceError> {
    let d = |a: usize, b: usize| {
        let (p, q) = (points[a], points[b]);
        ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
    };
    let mut lengths = Vec::with_capacity(faces.len());
    let mut directed: HashMap<(usize, usize), Slot> = HashMap::new();
    for (t, f) in faces.iter().enumerate() {
        lengths.push([d(f[0], f[1]), d(f[1], f[2]), d(f[2], f[0])]);
        for e in 0..3 {
            directed.insert((f[e], f[(e + 1) % 3]), Slot::new(t, e));
        }
    }
    let mut gluing = vec![None; 3 * faces.len()];
    for (t, f) in faces.iter().enumerate() {
        for e in 0..3 {
            gluing[3 * t + e] = directed.get(&(f[(e + 1) % 3], f[e])).copied();
        }
    }
    RawSurface { lengths, gluing }.into_cone_surface(tol)
}

/// Mark a regular point (cone angle 2π) at chart position `point` of
/// `triangle`, splitting the triangle into three. Existing vertex ids are
/// kept; the new vertex gets the next id.
pub fn mark_point(s: &ConeSurface, triangle: usize, point: Vec2) -> Result<ConeSurface, SurfaceError> {
    if triangle >= s.triangle_count() {
        return Err(SurfaceError::TriangleOutOfRange(triangle));
    }
    let c = s.chart(triangle);
    let scale = s.local_scale(triangle);
    for e in 0..3 {
        if orient2d(c[e], c[(e + 1) % 3], point) <= 1e-9 * scale * scale {
            return Err(SurfaceError::PointOutsideTriangle(triangle));
        }
    }
    let mut raw = s.to_raw();
    let mut labels = s.corner_labels().to_vec();
    let new_vertex = s.vertex_count();
    let t = s.triangle_count();
    let ids = [triangle, t, t + 1];
    let old_len = raw.lengths[triangle];
    let old_labels = labels[triangle];
    let old_gluing: Vec<Option<Slot>> = (0..3).map(|e| raw.gluing[3 * triangle + e]).collect();
    raw.lengths.resize(t + 2, [0.0; 3]);
    raw.gluing.resize(3 * (t + 2), None);
    labels.resize(t + 2, [0; 3]);
    // new triangle i = (c_i, c_{i+1}, p); its edge 0 is old edge i
    let remap = |sl: Slot| if sl.triangle == triangle { Slot::new(ids[sl.edge], 0) } else { sl };
    for i in 0..3 {
        let j = (i + 1) % 3;
        raw.lengths[ids[i]] = [old_len[i], c[j].dist(point), point.dist(c[i])];
        labels[ids[i]] = [old_labels[i], old_labels[j], new_vertex];
        let outer = remap(old_gluing[i].expect("valid surface"));
        raw.gluing[3 * ids[i]] = Some(outer);
        raw.gluing[outer.index()] = Some(Slot::new(ids[i], 0));
        raw.gluing[3 * ids[i] + 1] = Some(Slot::new(ids[j], 2));
        raw.gluing[3 * ids[j] + 2] = Some(Slot::new(ids[i], 1));
    }
    ConeSurface::build(raw, s.tol(), Some(&labels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{cone_data, validate_surface, DEFAULT_TOL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn doubled_unit_triangle() {
        let s = generate_doubled_polygon(&regular_polygon(3), DEFAULT_TOL).unwrap();
        assert_eq!(s.triangle_count(), 2);
        assert_eq!(s.vertex_count(), 3);
        assert!((s.area() - 3f64.sqrt() / 2.0).abs() < 1e-12);
        for c in cone_data(&s) {
            assert!((c.angle - 2.0 * PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn doubled_unit_square() {
        let s = generate_doubled_polygon(&regular_polygon(4), DEFAULT_TOL).unwrap();
        assert_eq!(s.triangle_count(), 4);
        assert_eq!(s.vertex_count(), 4);
        assert!((s.area() - 2.0).abs() < 1e-12);
        for c in cone_data(&s) {
            assert!((c.angle - PI).abs() < 1e-12);
            assert!((c.curvature - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn right_triangle_curvatures() {
        // angles π/2 at P0, π/3 at P1, π/6 at P2: k = 1 − α/π
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 3f64.sqrt())];
        let s = generate_doubled_polygon(&pts, DEFAULT_TOL).unwrap();
        let k: Vec<f64> = cone_data(&s).iter().map(|c| c.curvature).collect();
        for (got, want) in k.iter().zip([0.5, 2.0 / 3.0, 5.0 / 6.0]) {
            assert!((got - want).abs() < 1e-12, "{k:?}");
        }
    }

    #[test]
    fn collinear_points_are_rejected() {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)];
        assert!(matches!(generate_doubled_polygon(&pts, DEFAULT_TOL), Err(SurfaceError::NotConvex(_))));
        let cw = [Vec2::new(0.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 0.0)];
        assert!(generate_doubled_polygon(&cw, DEFAULT_TOL).is_err());
    }

    #[test]
    fn random_polygons_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in 3..=12 {
            let pts = random_convex_polygon(&mut rng, m);
            let s = generate_doubled_polygon(&pts, DEFAULT_TOL).unwrap();
            assert!(validate_surface(&s.to_raw(), DEFAULT_TOL).pass);
            assert_eq!(s.vertex_count(), m);
        }
    }

    #[test]
    fn tetrahedron() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.3, 0.8, 0.0], [0.2, 0.3, 0.9]];
        let faces = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [2, 0, 3]];
        let s = polyhedron(&pts, &faces, DEFAULT_TOL).unwrap();
        assert_eq!(s.vertex_count(), 4);
        let total: f64 = s.curvatures().iter().sum();
        assert!((total - 2.0).abs() < 1e-12);
    }

    #[test]
    fn marking_adds_a_flat_vertex() {
        let s = generate_doubled_polygon(&regular_polygon(3), DEFAULT_TOL).unwrap();
        let c = s.chart(0);
        let centroid = (c[0] + c[1] + c[2]) / 3.0;
        let m = mark_point(&s, 0, centroid).unwrap();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.triangle_count(), 4);
        assert!((m.cone_angle(3) - 2.0 * PI).abs() < 1e-12);
        for v in 0..3 {
            assert!((m.cone_angle(v) - s.cone_angle(v)).abs() < 1e-12);
        }
        assert!((m.area() - s.area()).abs() < 1e-12);
        assert!(mark_point(&s, 0, Vec2::new(5.0, 5.0)).is_err());
    }
}
