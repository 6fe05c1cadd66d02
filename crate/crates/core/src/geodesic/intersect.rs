//! Self-intersections, monogons and crossing counts of traced trajectories.

use std::collections::BTreeMap;

use thiserror::Error;

use super::{Segment, Trajectory, VERTEX_HIT_TOL};
use crate::geom::{line_params, segments_cross_properly, Vec2};
use crate::surface::ConeSurface;

/// A transverse self-intersection between two passes of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfCrossing {
    /// Triangle whose chart holds `point` and both directions.
    pub triangle: usize,
    /// Segment indices, `first < second`. For a crossing on an edge these are
    /// the segments that end there.
    pub first: usize,
    pub second: usize,
    pub point: Vec2,
    /// Arc-length positions of the crossing along each pass.
    pub at_first: f64,
    pub at_second: f64,
    /// Unit headings of the two passes at the crossing.
    pub first_dir: Vec2,
    pub second_dir: Vec2,
}

/// A simple loop cut out of a trajectory by one of its self-intersections.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monogon {
    /// Angle of the loop's corner at the crossing, in `[0, π]`.
    pub interior_angle: f64,
    pub loop_length: f64,
    pub crossing: SelfCrossing,
}

/// Two passes meeting on an edge count once, from the edge; inside a
/// triangle they would only touch at segment ends. This is how a geodesic
/// winding around a cone point on a folded edge crosses itself.
struct Finder<'a> {
    t: &'a Trajectory,
    offset: Vec<f64>,
}

impl<'a> Finder<'a> {
    fn new(t: &'a Trajectory) -> Self {
        let mut offset = Vec::with_capacity(t.segments.len());
        let mut acc = 0.0;
        for seg in &t.segments {
            offset.push(acc);
            acc += seg.length();
        }
        Finder { t, offset }
    }

    fn inside(&self, tri: usize, i: usize, j: usize) -> Option<SelfCrossing> {
        let (a, b) = (&self.t.segments[i], &self.t.segments[j]);
        if !segments_cross_properly(a.start, a.end, b.start, b.end) {
            return None;
        }
        let (u, v) = line_params(a.start, a.end, b.start, b.end).unwrap_or((0.5, 0.5));
        let point = a.start.lerp(a.end, u);
        let (la, lb) = (a.length(), b.length());
        let tol = VERTEX_HIT_TOL * la.max(lb);
        let near_end = |s: &Segment| s.start.dist(point).min(s.end.dist(point)) <= tol;
        if near_end(a) && near_end(b) {
            return None;
        }
        Some(SelfCrossing {
            triangle: tri,
            first: i,
            second: j,
            point,
            at_first: self.offset[i] + u * la,
            at_second: self.offset[j] + v * lb,
            first_dir: a.direction(),
            second_dir: b.direction(),
        })
    }

    fn on_edge(&self, i: usize, j: usize) -> SelfCrossing {
        let (hi, hj) = (&self.t.hits[i], &self.t.hits[j]);
        let a = &self.t.segments[i];
        SelfCrossing {
            triangle: a.triangle,
            first: i,
            second: j,
            point: a.end,
            at_first: self.offset[i + 1],
            at_second: self.offset[j + 1],
            first_dir: a.direction(),
            second_dir: hi.frame.cmul(hj.heading),
        }
    }

    /// Calls `f` on every crossing until it returns false.
    fn each(&self, mut f: impl FnMut(SelfCrossing) -> bool) {
        for (tri, idx) in passes_by_triangle(self.t) {
            for (k, &i) in idx.iter().enumerate() {
                for &j in &idx[k + 1..] {
                    if let Some(x) = self.inside(tri, i, j) {
                        if !f(x) {
                            return;
                        }
                    }
                }
            }
        }
        let mut hits: Vec<usize> = (0..self.t.hits.len()).collect();
        let key = |c: usize| (self.t.hits[c].edge, self.t.hits[c].pos);
        hits.sort_by(|&x, &y| key(x).0.cmp(&key(y).0).then(key(x).1.total_cmp(&key(y).1)));
        for (k, &c) in hits.iter().enumerate() {
            let h = &self.t.hits[c];
            let tol = VERTEX_HIT_TOL * h.edge_length;
            for &d in &hits[k + 1..] {
                let g = &self.t.hits[d];
                if g.edge != h.edge || g.pos - h.pos > tol {
                    break;
                }
                if !f(self.on_edge(c.min(d), c.max(d))) {
                    return;
                }
            }
        }
    }
}

fn passes_by_triangle(t: &Trajectory) -> BTreeMap<usize, Vec<usize>> {
    let mut by: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, seg) in t.segments.iter().enumerate() {
        by.entry(seg.triangle).or_default().push(i);
    }
    by
}

/// All transverse self-intersections, ordered by position along the
/// trajectory of the earlier pass.
pub fn self_crossings(t: &Trajectory) -> Vec<SelfCrossing> {
    let mut out = Vec::new();
    Finder::new(t).each(|x| {
        out.push(x);
        true
    });
    out.sort_by(|x, y| x.at_first.total_cmp(&y.at_first).then(x.at_second.total_cmp(&y.at_second)));
    out
}

/// Number of transverse pairs of passes.
pub fn count_self_intersections(t: &Trajectory) -> usize {
    let mut n = 0;
    Finder::new(t).each(|_| {
        n += 1;
        true
    });
    n
}

/// Whether the trajectory has no transverse self-intersection. Stops at
/// the first one found.
pub fn is_simple(t: &Trajectory) -> bool {
    let mut simple = true;
    Finder::new(t).each(|_| {
        simple = false;
        false
    });
    simple
}

/// One monogon for each self-intersection whose loop contains no other
/// self-intersection.
pub fn extract_monogons(t: &Trajectory) -> Vec<Monogon> {
    let xs = self_crossings(t);
    let mut out = Vec::new();
    for (k, x) in xs.iter().enumerate() {
        let nested = xs.iter().enumerate().any(|(j, y)| {
            j != k && y.at_first >= x.at_first && y.at_second <= x.at_second
        });
        if nested {
            continue;
        }
        // the loop leaves along the first heading and comes back along the second
        let interior_angle = (-x.first_dir.dot(x.second_dir)).clamp(-1.0, 1.0).acos();
        out.push(Monogon { interior_angle, loop_length: x.at_second - x.at_first, crossing: *x });
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombinatorialError {
    #[error("trajectory was traced on a different triangulation")]
    SurfaceMismatch,
    #[error("triangulation is not Delaunay")]
    NotDelaunay,
}

/// Number of pieces the edges of `d` cut the trajectory into, or 0 when it
/// runs inside an edge. `d` must be the Delaunay triangulation the
/// trajectory was traced on.
pub fn combinatorial_length(t: &Trajectory, d: &ConeSurface) -> Result<usize, CombinatorialError> {
    if t.surface_fingerprint() != d.fingerprint() {
        return Err(CombinatorialError::SurfaceMismatch);
    }
    if !crate::delaunay::is_delaunay(d) {
        return Err(CombinatorialError::NotDelaunay);
    }
    Ok(if t.along_edge.is_some() { 0 } else { t.crossings.len() + 1 })
}

/// Passes through each triangle. Empty for a trajectory inside an edge.
pub fn per_triangle_crossings(t: &Trajectory) -> BTreeMap<usize, usize> {
    if t.along_edge.is_some() {
        return BTreeMap::new();
    }
    passes_by_triangle(t).into_iter().map(|(k, v)| (k, v.len())).collect()
}
