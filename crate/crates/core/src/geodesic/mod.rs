//! Geodesics by unfolding.
//!
//! A straight line is followed across glued edges by laying each new
//! triangle down in the plane next to the previous one. The line itself is
//! fixed once in the frame of the start chart, so no error accumulates in its
//! direction; only the placement of triangles is incremental.

mod intersect;
mod saddle;

use std::fmt;

use thiserror::Error;

use crate::geom::Vec2;
use crate::surface::{ConeSurface, Corner, Slot, VertexId};

pub use intersect::{
    combinatorial_length, count_self_intersections, extract_monogons, is_simple,
    per_triangle_crossings, self_crossings, CombinatorialError, Monogon, SelfCrossing,
};
pub use saddle::{
    enumerate_saddle_connections, enumerate_with, EnumerateError, EnumerateOptions,
    SaddleConnection, SearchOutcome,
};

/// Relative vertex-hit tolerance: a line passing within this multiple of the
/// local edge length of a vertex is taken to hit it.
pub const VERTEX_HIT_TOL: f64 = 1e-9;

/// Default cap on edge crossings for a single trace.
pub const DEFAULT_MAX_CROSSINGS: usize = 1_000_000;

/// Orientation-preserving isometry of the plane, `p ↦ rot·p + trans` with
/// `rot` a unit complex number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Motion {
    rot: Vec2,
    trans: Vec2,
}

impl Motion {
    pub(crate) const IDENTITY: Motion = Motion { rot: Vec2::new(1.0, 0.0), trans: Vec2::ZERO };

    pub(crate) fn apply(&self, p: Vec2) -> Vec2 {
        self.rot.cmul(p) + self.trans
    }

    pub(crate) fn invert(&self, q: Vec2) -> Vec2 {
        (q - self.trans).cmul_conj(self.rot)
    }

    /// Direction `v` in the developed plane, expressed in the chart.
    pub(crate) fn invert_dir(&self, v: Vec2) -> Vec2 {
        v.cmul_conj(self.rot)
    }

    /// The motion taking chart points `a, b` to `pa, pb`, which must be the
    /// same distance apart.
    pub(crate) fn fit(a: Vec2, b: Vec2, pa: Vec2, pb: Vec2) -> Motion {
        let rot = (pb - pa).cmul_conj(b - a).normalized();
        Motion { rot, trans: pa - rot.cmul(a) }
    }
}

/// Lay the triangle across `slot` next to the one placed by `m`.
pub(crate) fn unfold(s: &ConeSurface, slot: Slot, m: &Motion) -> (Slot, Motion) {
    let c = s.chart(slot.triangle);
    let pa = m.apply(c[slot.edge]);
    let pb = m.apply(c[(slot.edge + 1) % 3]);
    let p = s.partner(slot);
    let c2 = s.chart(p.triangle);
    (p, Motion::fit(c2[p.edge], c2[(p.edge + 1) % 3], pb, pa))
}

/// Where a trace begins.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Start {
    /// At the vertex of a corner, heading into that corner's sector.
    Vertex(Corner),
    /// At a point strictly inside a triangle, in its chart.
    Interior { triangle: usize, point: Vec2 },
}

/// An endpoint of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    Vertex(VertexId),
    /// A regular point with the heading (radians, in the triangle's chart)
    /// of the trajectory there.
    Point { triangle: usize, point: Vec2, direction: f64 },
}

/// A straight piece of a trajectory inside one triangle, in its chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub triangle: usize,
    pub start: Vec2,
    pub end: Vec2,
}

impl Segment {
    pub fn length(&self) -> f64 {
        self.start.dist(self.end)
    }

    pub fn direction(&self) -> Vec2 {
        (self.end - self.start).normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus {
    /// Ran the full requested length and stopped at a regular point.
    Completed,
    /// Ended at a cone vertex.
    HitVertex,
    /// Stopped at the crossing cap before reaching the requested length.
    BudgetExhausted,
}

impl TraceStatus {
    pub fn name(self) -> &'static str {
        match self {
            TraceStatus::Completed => "completed",
            TraceStatus::HitVertex => "hit-vertex",
            TraceStatus::BudgetExhausted => "budget-exhausted",
        }
    }
}

impl fmt::Display for TraceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A traced geodesic: a chain of chart segments, one per triangle pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub segments: Vec<Segment>,
    /// Slot through which each segment but the last leaves its triangle.
    pub crossings: Vec<Slot>,
    pub start: Anchor,
    pub end: Anchor,
    pub length: f64,
    pub status: TraceStatus,
    /// Set when the whole trajectory runs inside this edge.
    pub along_edge: Option<usize>,
    /// Where each crossing meets its edge.
    pub(crate) hits: Vec<EdgeHit>,
    fingerprint: u64,
}

/// A crossing located on its edge, in coordinates shared by both sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct EdgeHit {
    pub edge: usize,
    /// Distance from the start of the edge's representative slot.
    pub pos: f64,
    pub edge_length: f64,
    /// Unit vector along the representative slot, in the chart of the
    /// triangle being left.
    pub frame: Vec2,
    /// Heading relative to `frame`.
    pub heading: Vec2,
}

fn edge_hit(s: &ConeSurface, slot: Slot, seg: &Segment) -> EdgeHit {
    let c = s.chart(slot.triangle);
    let (a, b) = (c[slot.edge], c[(slot.edge + 1) % 3]);
    let edge = s.edge_id(slot);
    let (origin, v) = if s.edge_slot(edge) == slot { (a, b - a) } else { (b, a - b) };
    let frame = v.normalized();
    EdgeHit { edge, pos: seg.end.dist(origin), edge_length: v.norm(), frame, heading: seg.direction().cmul_conj(frame) }
}

impl Trajectory {
    pub(crate) fn new(
        s: &ConeSurface,
        segments: Vec<Segment>,
        crossings: Vec<Slot>,
        start: Anchor,
        end: Anchor,
        status: TraceStatus,
        along_edge: Option<usize>,
    ) -> Trajectory {
        debug_assert_eq!(segments.len(), crossings.len() + 1);
        let length = segments.iter().map(Segment::length).sum();
        let hits = crossings.iter().zip(&segments).map(|(&slot, seg)| edge_hit(s, slot, seg)).collect();
        Trajectory { segments, crossings, start, end, length, status, along_edge, hits, fingerprint: s.fingerprint() }
    }

    /// Fingerprint of the surface this was traced on.
    pub fn surface_fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn is_saddle_connection(&self) -> bool {
        matches!((self.start, self.end), (Anchor::Vertex(_), Anchor::Vertex(_)))
    }

    /// Segments laid out in the plane, in the frame of the first chart.
    pub fn develop(&self, s: &ConeSurface) -> Result<Vec<[Vec2; 2]>, TraceError> {
        if s.fingerprint() != self.fingerprint {
            return Err(TraceError::SurfaceMismatch);
        }
        let mut m = Motion::IDENTITY;
        let mut out = Vec::with_capacity(self.segments.len());
        for (i, seg) in self.segments.iter().enumerate() {
            out.push([m.apply(seg.start), m.apply(seg.end)]);
            if let Some(&slot) = self.crossings.get(i) {
                m = unfold(s, slot, &m).1;
            }
        }
        Ok(out)
    }

    /// The triangles visited, laid out in the same frame as [`Self::develop`].
    pub fn developed_triangles(&self, s: &ConeSurface) -> Result<Vec<(usize, [Vec2; 3])>, TraceError> {
        if s.fingerprint() != self.fingerprint {
            return Err(TraceError::SurfaceMismatch);
        }
        let mut m = Motion::IDENTITY;
        let mut out = Vec::with_capacity(self.segments.len());
        for (i, seg) in self.segments.iter().enumerate() {
            out.push((seg.triangle, s.chart(seg.triangle).map(|p| m.apply(p))));
            if let Some(&slot) = self.crossings.get(i) {
                m = unfold(s, slot, &m).1;
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error("triangle {0} out of range")]
    TriangleOutOfRange(usize),
    #[error("corner index {0} out of range")]
    CornerOutOfRange(usize),
    #[error("start point is not strictly inside triangle {0}")]
    PointOutsideTriangle(usize),
    #[error("direction {direction} does not point into the sector of corner {corner} of triangle {triangle}")]
    DirectionOutsideSector { triangle: usize, corner: usize, direction: f64 },
    #[error("max length must be positive and finite, got {0}")]
    NonPositiveLength(f64),
    #[error("direction must be finite")]
    NonFiniteDirection,
    #[error("trajectory was traced on a different surface")]
    SurfaceMismatch,
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    pub max_crossings: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { max_crossings: DEFAULT_MAX_CROSSINGS }
    }
}

/// Follow the straight line from `start` heading `direction` (radians, in the
/// start triangle's chart) for at most `max_length`.
pub fn trace(s: &ConeSurface, start: Start, direction: f64, max_length: f64) -> Result<Trajectory, TraceError> {
    trace_with(s, start, direction, max_length, &TraceOptions::default())
}

pub fn trace_with(
    s: &ConeSurface,
    start: Start,
    direction: f64,
    max_length: f64,
    opts: &TraceOptions,
) -> Result<Trajectory, TraceError> {
    if !(max_length > 0.0 && max_length.is_finite()) {
        return Err(TraceError::NonPositiveLength(max_length));
    }
    if !direction.is_finite() {
        return Err(TraceError::NonFiniteDirection);
    }
    let d = Vec2::from_angle(direction);
    let t = match start {
        Start::Vertex(c) => c.triangle,
        Start::Interior { triangle, .. } => triangle,
    };
    if t >= s.triangle_count() {
        return Err(TraceError::TriangleOutOfRange(t));
    }
    let ch = s.chart(t);
    let eps = VERTEX_HIT_TOL * s.local_scale(t);
    let tracer = Tracer { s, d, max: max_length, opts };

    match start {
        Start::Vertex(c) => {
            if c.corner > 2 {
                return Err(TraceError::CornerOutOfRange(c.corner));
            }
            let o = ch[c.corner];
            let r = ch[(c.corner + 1) % 3];
            let l = ch[(c.corner + 2) % 3];
            let anchor = Anchor::Vertex(s.vertex_of(c));
            let (cr, cl) = (d.cross(r - o), d.cross(l - o));
            if cr.abs() <= eps && d.dot(r - o) > 0.0 {
                return Ok(tracer.along_edge(Slot::new(t, c.corner), false, anchor));
            }
            if cl.abs() <= eps && d.dot(l - o) > 0.0 {
                return Ok(tracer.along_edge(Slot::new(t, (c.corner + 2) % 3), true, anchor));
            }
            if !(cr < 0.0 && cl > 0.0) {
                return Err(TraceError::DirectionOutsideSector { triangle: t, corner: c.corner, direction });
            }
            Ok(tracer.run(t, o, (c.corner + 1) % 3, anchor))
        }
        Start::Interior { point: p, .. } => {
            let scale = s.local_scale(t);
            for e in 0..3 {
                if crate::geom::orient2d(ch[e], ch[(e + 1) % 3], p) <= 1e-12 * scale * scale {
                    return Err(TraceError::PointOutsideTriangle(t));
                }
            }
            let anchor = Anchor::Point { triangle: t, point: p, direction: d.angle() };
            let mut hit: Option<(f64, usize)> = None;
            for i in 0..3 {
                let w = ch[i] - p;
                let ahead = d.dot(w);
                if ahead > 0.0 && d.cross(w).abs() <= eps && hit.is_none_or(|(h, _)| ahead < h) {
                    hit = Some((ahead, i));
                }
            }
            if let Some((dist, i)) = hit {
                let seg_end = if dist <= max_length { ch[i] } else { p + d * max_length };
                let (end, status) = if dist <= max_length {
                    (Anchor::Vertex(s.vertex_of(Corner::new(t, i))), TraceStatus::HitVertex)
                } else {
                    (Anchor::Point { triangle: t, point: seg_end, direction: d.angle() }, TraceStatus::Completed)
                };
                let seg = Segment { triangle: t, start: p, end: seg_end };
                return Ok(Trajectory::new(s, vec![seg], vec![], anchor, end, status, None));
            }
            let e = (0..3)
                .find(|&e| d.cross(ch[e] - p) < 0.0 && d.cross(ch[(e + 1) % 3] - p) >= 0.0)
                .expect("a line from an interior point leaves through some edge");
            Ok(tracer.run(t, p, e, anchor))
        }
    }
}

struct Tracer<'a> {
    s: &'a ConeSurface,
    d: Vec2,
    max: f64,
    opts: &'a TraceOptions,
}

impl Tracer<'_> {
    /// A trajectory inside edge `slot`, run from corner `slot.edge` to
    /// `slot.edge + 1`, or the other way when `reverse`.
    fn along_edge(&self, slot: Slot, reverse: bool, start: Anchor) -> Trajectory {
        let s = self.s;
        let ch = s.chart(slot.triangle);
        let (a, b) = if reverse { ((slot.edge + 1) % 3, slot.edge) } else { (slot.edge, (slot.edge + 1) % 3) };
        let (pa, pb) = (ch[a], ch[b]);
        let len = pa.dist(pb);
        let edge = Some(s.edge_id(slot));
        if len <= self.max {
            let seg = Segment { triangle: slot.triangle, start: pa, end: pb };
            let end = Anchor::Vertex(s.vertex_of(Corner::new(slot.triangle, b)));
            Trajectory::new(s, vec![seg], vec![], start, end, TraceStatus::HitVertex, edge)
        } else {
            let q = pa.lerp(pb, self.max / len);
            let seg = Segment { triangle: slot.triangle, start: pa, end: q };
            let end = Anchor::Point { triangle: slot.triangle, point: q, direction: (pb - pa).angle() };
            Trajectory::new(s, vec![seg], vec![], start, end, TraceStatus::Completed, edge)
        }
    }

    /// Main loop: currently in triangle `t` at chart point `o` (also the
    /// developed origin), leaving through edge `e`.
    fn run(&self, mut t: usize, o: Vec2, mut e: usize, start: Anchor) -> Trajectory {
        let s = self.s;
        let d = self.d;
        let mut m = Motion::IDENTITY;
        let mut entry = o;
        let mut segments = Vec::new();
        let mut crossings = Vec::new();
        loop {
            let ch = s.chart(t);
            let pa = m.apply(ch[e]);
            let pb = m.apply(ch[(e + 1) % 3]);
            let den = d.cross(pa - pb);
            let u = if den == 0.0 { 0.5 } else { (d.cross(pa - o) / den).clamp(0.0, 1.0) };
            let x = pa.lerp(pb, u);
            if d.dot(x - o) >= self.max {
                let q = o + d * self.max;
                let qc = m.invert(q);
                segments.push(Segment { triangle: t, start: entry, end: qc });
                let end = Anchor::Point { triangle: t, point: qc, direction: m.invert_dir(d).angle() };
                return Trajectory::new(s, segments, crossings, start, end, TraceStatus::Completed, None);
            }
            let exit = ch[e].lerp(ch[(e + 1) % 3], u);
            segments.push(Segment { triangle: t, start: entry, end: exit });
            let slot = Slot::new(t, e);
            crossings.push(slot);
            let (p, m2) = unfold(s, slot, &m);
            let ch2 = s.chart(p.triangle);
            let entry2 = ch2[p.edge].lerp(ch2[(p.edge + 1) % 3], 1.0 - u);
            if crossings.len() >= self.opts.max_crossings {
                segments.push(Segment { triangle: p.triangle, start: entry2, end: entry2 });
                let end = Anchor::Point { triangle: p.triangle, point: entry2, direction: m2.invert_dir(d).angle() };
                return Trajectory::new(s, segments, crossings, start, end, TraceStatus::BudgetExhausted, None);
            }
            // entering through edge e': corner e' on the left, e'+1 on the right
            let apex = (p.edge + 2) % 3;
            let w = m2.apply(ch2[apex]) - o;
            let side = d.cross(w);
            if side.abs() <= VERTEX_HIT_TOL * s.local_scale(p.triangle) {
                let ahead = d.dot(w);
                if ahead <= self.max {
                    segments.push(Segment { triangle: p.triangle, start: entry2, end: ch2[apex] });
                    let end = Anchor::Vertex(s.vertex_of(Corner::new(p.triangle, apex)));
                    return Trajectory::new(s, segments, crossings, start, end, TraceStatus::HitVertex, None);
                }
                let qc = m2.invert(o + d * self.max);
                segments.push(Segment { triangle: p.triangle, start: entry2, end: qc });
                let end = Anchor::Point { triangle: p.triangle, point: qc, direction: m2.invert_dir(d).angle() };
                return Trajectory::new(s, segments, crossings, start, end, TraceStatus::Completed, None);
            }
            e = if side > 0.0 { (p.edge + 1) % 3 } else { apex };
            t = p.triangle;
            m = m2;
            entry = entry2;
        }
    }
}
