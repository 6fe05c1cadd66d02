//! Delaunay triangulations by edge flips, and what they bound.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

use crate::geodesic::{unfold, Motion};
use crate::geom::{incircle, orient2d, Vec2};
use crate::surface::{mark_point, ConeSurface, RawSurface, Slot, SurfaceError, VertexId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DelaunayError {
    #[error("flip cap {cap} reached before the triangulation became Delaunay")]
    CapExceeded { cap: usize },
    #[error("curvature gap must be positive")]
    ZeroGap,
    #[error("surface area {0} is not 1")]
    NotUnitArea(f64),
    #[error("edge skeleton is disconnected")]
    Disconnected,
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// The quadrilateral around the edge at `slot`, unfolded in the chart of
/// `slot.triangle`: `a, b` are the edge ends, `c` the apex on this side and
/// `d` the apex across.
struct Quad {
    a: Vec2,
    b: Vec2,
    c: Vec2,
    d: Vec2,
}

fn quad(s: &ConeSurface, slot: Slot) -> Quad {
    let ch = s.chart(slot.triangle);
    let e = slot.edge;
    let (p, m) = unfold(s, slot, &Motion::IDENTITY);
    let d = m.apply(s.chart(p.triangle)[(p.edge + 2) % 3]);
    Quad { a: ch[e], b: ch[(e + 1) % 3], c: ch[(e + 2) % 3], d }
}

/// Empty-circumcircle test across one edge; cocyclic counts as Delaunay.
/// An edge glued to another side of its own triangle always passes.
pub fn is_locally_delaunay(s: &ConeSurface, slot: Slot) -> bool {
    let p = s.partner(slot);
    if p.triangle == slot.triangle {
        return true;
    }
    let q = quad(s, slot);
    let scale = s.local_scale(slot.triangle).max(s.local_scale(p.triangle));
    incircle(q.a, q.b, q.c, q.d) <= s.tol() * scale.powi(4)
}

pub fn is_delaunay(s: &ConeSurface) -> bool {
    (0..s.edge_count()).all(|e| is_locally_delaunay(s, s.edge_slot(e)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlipReport {
    pub flips: usize,
    pub cap: usize,
    pub all_delaunay: bool,
    /// Final lengths by edge id.
    pub edge_lengths: Vec<f64>,
}

impl fmt::Display for FlipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "flips={}", self.flips)?;
        writeln!(f, "cap={}", self.cap)?;
        writeln!(f, "all_delaunay={}", self.all_delaunay)?;
        let lens: Vec<String> = self.edge_lengths.iter().map(|l| format!("{l}")).collect();
        write!(f, "edge_lengths={}", lens.join(","))
    }
}

/// Default flip cap, `10·E²`.
pub fn default_flip_cap(s: &ConeSurface) -> usize {
    10 * s.edge_count() * s.edge_count()
}

/// Flip non-Delaunay edges, lowest edge id first, until none is left.
pub fn delaunayize(s: &ConeSurface) -> Result<(ConeSurface, FlipReport), DelaunayError> {
    delaunayize_with_cap(s, default_flip_cap(s))
}

pub fn delaunayize_with_cap(s: &ConeSurface, cap: usize) -> Result<(ConeSurface, FlipReport), DelaunayError> {
    let mut cur = s.clone();
    let mut flips = 0;
    loop {
        let candidate = (0..cur.edge_count())
            .map(|e| cur.edge_slot(e))
            .find(|&sl| !is_locally_delaunay(&cur, sl) && flippable(&cur, sl));
        let Some(slot) = candidate else { break };
        if flips == cap {
            return Err(DelaunayError::CapExceeded { cap });
        }
        cur = flip(&cur, slot)?;
        flips += 1;
    }
    let report = FlipReport {
        flips,
        cap,
        all_delaunay: is_delaunay(&cur),
        edge_lengths: (0..cur.edge_count()).map(|e| cur.side_length(cur.edge_slot(e))).collect(),
    };
    Ok((cur, report))
}

/// The unfolded quadrilateral is strictly convex.
fn flippable(s: &ConeSurface, slot: Slot) -> bool {
    if s.partner(slot).triangle == slot.triangle {
        return false;
    }
    let q = quad(s, slot);
    orient2d(q.c, q.d, q.a) < 0.0 && orient2d(q.c, q.d, q.b) > 0.0
}

/// Replace the edge at `slot` by the other diagonal of its quadrilateral.
fn flip(s: &ConeSurface, slot: Slot) -> Result<ConeSurface, DelaunayError> {
    let (t, e) = (slot.triangle, slot.edge);
    let p = s.partner(slot);
    let (u, f) = (p.triangle, p.edge);
    let q = quad(s, slot);
    let lt = s.lengths(t);
    let lu = s.lengths(u);
    let cd = q.c.dist(q.d);

    let mut raw = s.to_raw();
    let mut labels = s.corner_labels().to_vec();
    let label = |tri: usize, c: usize| s.corner_labels()[tri][c % 3];
    // new t = (A, D, C), new u = (D, B, C)
    raw.lengths[t] = [lu[(f + 1) % 3], cd, lt[(e + 2) % 3]];
    raw.lengths[u] = [lu[(f + 2) % 3], lt[(e + 1) % 3], cd];
    labels[t] = [label(t, e), label(u, f + 2), label(t, e + 2)];
    labels[u] = [label(u, f + 2), label(t, e + 1), label(t, e + 2)];

    let moved = [
        (Slot::new(u, (f + 1) % 3), Slot::new(t, 0)),
        (Slot::new(t, (e + 2) % 3), Slot::new(t, 2)),
        (Slot::new(u, (f + 2) % 3), Slot::new(u, 0)),
        (Slot::new(t, (e + 1) % 3), Slot::new(u, 1)),
    ];
    let map = |x: Slot| moved.iter().find(|(old, _)| *old == x).map_or(x, |&(_, new)| new);
    let old: Vec<Option<Slot>> = raw.gluing.clone();
    for &(from, to) in &moved {
        let partner = map(old[from.index()].expect("valid surface"));
        raw.gluing[to.index()] = Some(partner);
        raw.gluing[partner.index()] = Some(to);
    }
    raw.gluing[Slot::new(t, 1).index()] = Some(Slot::new(u, 2));
    raw.gluing[Slot::new(u, 2).index()] = Some(Slot::new(t, 1));
    Ok(ConeSurface::build(RawSurface { lengths: raw.lengths, gluing: raw.gluing }, s.tol(), Some(&labels))?)
}

/// `4/π + 1/(2πδ)`, the claimed bound on squared Delaunay edge lengths at
/// unit area.
///
/// It does not hold on sharp cones. A doubled isosceles triangle with apex
/// angle `a` has gap `a/π` and unit-area legs of squared length `1/sin a`,
/// and the apex must be joined to something by an edge at least that long;
/// for small `a` this beats `4/π + 1/(2a)`. See
/// [`delaunay_l2_bound_sector`] for the bound that survives.
pub fn delaunay_l2_bound(delta: f64) -> f64 {
    4.0 / PI + 1.0 / (2.0 * PI * delta)
}

/// `4/π + 1/(πδ)`: the same argument with the area of an annular sector of
/// angle `θ` taken as `θ(R′² − R²)/2`.
pub fn delaunay_l2_bound_sector(delta: f64) -> f64 {
    4.0 / PI + 1.0 / (PI * delta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeBoundReport {
    pub threshold: f64,
    pub max_l2: f64,
    /// Edge ids with their squared lengths.
    pub violations: Vec<(usize, f64)>,
    pub pass: bool,
    /// [`delaunay_l2_bound_sector`] and whether every edge is below it.
    pub sector_threshold: f64,
    pub sector_pass: bool,
}

/// Tolerance on unit area for the edge-length check.
pub const UNIT_AREA_TOL: f64 = 1e-9;

/// Check every edge of a unit-area Delaunay surface against
/// [`delaunay_l2_bound`].
pub fn check_edge_length_bound(s: &ConeSurface, delta: f64) -> Result<EdgeBoundReport, DelaunayError> {
    if !(delta > 0.0) {
        return Err(DelaunayError::ZeroGap);
    }
    if (s.area() - 1.0).abs() > UNIT_AREA_TOL {
        return Err(DelaunayError::NotUnitArea(s.area()));
    }
    let threshold = delaunay_l2_bound(delta);
    let mut max_l2: f64 = 0.0;
    let mut violations = Vec::new();
    for e in 0..s.edge_count() {
        let l2 = s.side_length(s.edge_slot(e)).powi(2);
        max_l2 = max_l2.max(l2);
        if !(l2 < threshold + s.tol()) {
            violations.push((e, l2));
        }
    }
    let sector_threshold = delaunay_l2_bound_sector(delta);
    Ok(EdgeBoundReport {
        threshold,
        max_l2,
        pass: violations.is_empty(),
        violations,
        sector_threshold,
        sector_pass: max_l2 < sector_threshold + s.tol(),
    })
}

/// All-pairs shortest paths in the edge skeleton.
fn skeleton_distances(s: &ConeSurface) -> Vec<Vec<f64>> {
    let n = s.vertex_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for e in 0..s.edge_count() {
        let (a, b) = s.edge_endpoints(e);
        let l = s.side_length(s.edge_slot(e));
        if l < d[a][b] {
            d[a][b] = l;
            d[b][a] = l;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Largest skeleton distance between two cone points. An upper bound for
/// their distance on the surface.
pub fn cone_graph_diameter(s: &ConeSurface) -> Result<f64, DelaunayError> {
    let d = skeleton_distances(s);
    let diam = d.iter().flatten().copied().fold(0.0, f64::max);
    if diam.is_infinite() {
        return Err(DelaunayError::Disconnected);
    }
    Ok(diam)
}

/// Skeleton distance between two arbitrary points, each given as a point in
/// a triangle chart: both are marked as flat vertices, the result is made
/// Delaunay and the path between the two marks is measured. Points must lie
/// strictly inside their triangles and differ.
pub fn marked_distance(s: &ConeSurface, a: (usize, Vec2), b: (usize, Vec2)) -> Result<f64, DelaunayError> {
    let first = mark_point(s, a.0, a.1)?;
    let va: VertexId = s.vertex_count();
    let (tb, pb) = if b.0 != a.0 {
        (b.0, b.1)
    } else {
        // a's triangle was split into (c_i, c_i+1, a) at ids [a.0, T, T+1]
        let c = s.chart(a.0);
        let ids = [a.0, s.triangle_count(), s.triangle_count() + 1];
        let i = (0..3)
            .find(|&i| orient2d(c[i], c[(i + 1) % 3], b.1) > 0.0
                && orient2d(c[(i + 1) % 3], a.1, b.1) > 0.0
                && orient2d(a.1, c[i], b.1) > 0.0)
            .ok_or(SurfaceError::PointOutsideTriangle(a.0))?;
        let nc = first.chart(ids[i]);
        let m = Motion::fit(c[i], c[(i + 1) % 3], nc[0], nc[1]);
        (ids[i], m.apply(b.1))
    };
    let marked = mark_point(&first, tb, pb)?;
    let vb = va + 1;
    let (d, _) = delaunayize(&marked)?;
    let dist = skeleton_distances(&d)[va][vb];
    if dist.is_infinite() {
        return Err(DelaunayError::Disconnected);
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{generate_doubled_polygon, normalize_area, regular_polygon, DEFAULT_TOL};

    fn obtuse() -> ConeSurface {
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, 0.2)];
        generate_doubled_polygon(&pts, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn equilateral_is_delaunay() {
        let s = generate_doubled_polygon(&regular_polygon(3), DEFAULT_TOL).unwrap();
        assert!(is_delaunay(&s));
        let (d, r) = delaunayize(&s).unwrap();
        assert_eq!(r.flips, 0);
        assert_eq!(d.fingerprint(), s.fingerprint());
    }

    #[test]
    fn obtuse_needs_a_flip() {
        let s = obtuse();
        // edge 0-1 is opposite the obtuse corner
        let bad = (0..s.edge_count()).filter(|&e| !is_locally_delaunay(&s, s.edge_slot(e))).count();
        assert_eq!(bad, 1);
        let (d, r) = delaunayize(&s).unwrap();
        assert!(r.flips >= 1 && r.all_delaunay);
        assert!(is_delaunay(&d));
        assert_eq!(d.vertex_count(), 3);
        for v in 0..3 {
            assert!((d.cone_angle(v) - s.cone_angle(v)).abs() < 1e-9);
        }
        assert!((d.area() - s.area()).abs() < 1e-9 * s.area());
        let (_, again) = delaunayize(&d).unwrap();
        assert_eq!(again.flips, 0);
    }

    #[test]
    fn cap_is_reported() {
        assert_eq!(delaunayize_with_cap(&obtuse(), 0).err(), Some(DelaunayError::CapExceeded { cap: 0 }));
    }

    #[test]
    fn edge_bound_on_equilateral() {
        let s = normalize_area(&generate_doubled_polygon(&regular_polygon(3), DEFAULT_TOL).unwrap()).unwrap();
        let r = check_edge_length_bound(&s, 1.0 / 3.0).unwrap();
        assert!((r.threshold - 11.0 / (2.0 * PI)).abs() < 1e-12);
        assert!((r.max_l2 - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(r.pass);
        assert_eq!(check_edge_length_bound(&s, 0.0), Err(DelaunayError::ZeroGap));
    }

    #[test]
    fn sharp_apex_breaks_the_claimed_edge_bound() {
        let a = PI / 10.0;
        let pts = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.5, 0.5 / (a / 2.0).tan())];
        let s = normalize_area(&generate_doubled_polygon(&pts, DEFAULT_TOL).unwrap()).unwrap();
        let (d, _) = delaunayize(&s).unwrap();
        let delta = a / PI;
        let r = check_edge_length_bound(&d, delta).unwrap();
        assert!((r.max_l2 - 1.0 / a.sin()).abs() < 1e-9);
        assert!(!r.pass);
        assert!(r.sector_pass);
    }

    #[test]
    fn diameter_of_equilateral() {
        let s = normalize_area(&generate_doubled_polygon(&regular_polygon(3), DEFAULT_TOL).unwrap()).unwrap();
        let d = cone_graph_diameter(&s).unwrap();
        assert!((d - (2.0 / 3f64.sqrt()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn marked_points() {
        let s = normalize_area(&generate_doubled_polygon(&regular_polygon(4), DEFAULT_TOL).unwrap()).unwrap();
        let c = s.chart(0);
        let g = (c[0] + c[1] + c[2]) / 3.0;
        let h = (c[0] * 0.2 + c[1] * 0.3 + c[2] * 0.5) / 1.0;
        let d1 = marked_distance(&s, (0, g), (1, (s.chart(1)[0] + s.chart(1)[1] + s.chart(1)[2]) / 3.0)).unwrap();
        let d2 = marked_distance(&s, (0, g), (0, h)).unwrap();
        assert!(d1 > 0.0 && d1.is_finite());
        assert!(d2 > 0.0 && d2.is_finite());
    }
}
