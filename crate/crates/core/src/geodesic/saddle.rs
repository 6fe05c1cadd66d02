//! Saddle-connection enumeration by wedge subdivision.
//!
//! Around every corner sector the developed star is explored one triangle at
//! a time. A wedge of directions is carried across an edge; the apex of the
//! next triangle either falls outside the wedge, which sends the whole wedge
//! through one side, or inside it, which is a saddle connection and splits
//! the wedge in two. A wedge is dropped only once the part of its current edge
//! it can see lies entirely beyond the length cutoff, so nothing shorter can
//! be missed. Wedges are expanded nearest first; if the node budget runs out
//! the result is still exact up to the distance reached.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use super::{unfold, Anchor, Motion, Segment, TraceStatus, Trajectory, VERTEX_HIT_TOL};
use crate::geom::{line_params, origin_segment_distance, Vec2};
use crate::surface::{ConeSurface, Corner, Slot, VertexId};

/// A geodesic segment between cone points with no cone point inside,
/// stored by its corridor: the start corner, the edge slots crossed and the
/// end corner. Always kept in the lexicographically smaller orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct SaddleConnection {
    pub start: Corner,
    pub end: Corner,
    pub start_vertex: VertexId,
    pub end_vertex: VertexId,
    pub crossings: Vec<Slot>,
    pub length: f64,
    /// Heading at the start, in the chart of the start triangle.
    pub direction: f64,
    /// Edge id for connections that are edges of the triangulation.
    pub edge: Option<usize>,
}

impl SaddleConnection {
    pub fn is_edge(&self) -> bool {
        self.edge.is_some()
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn key(&self) -> (Corner, &[Slot], Corner) {
        (self.start, &self.crossings, self.end)
    }

    /// Rebuild the chart segments by developing the corridor.
    pub fn trajectory(&self, s: &ConeSurface) -> Trajectory {
        let start = Anchor::Vertex(self.start_vertex);
        let end = Anchor::Vertex(self.end_vertex);
        let ch0 = s.chart(self.start.triangle);
        if self.crossings.is_empty() {
            let seg = Segment { triangle: self.start.triangle, start: ch0[self.start.corner], end: ch0[self.end.corner] };
            return Trajectory::new(s, vec![seg], vec![], start, end, TraceStatus::HitVertex, self.edge);
        }
        let (motions, far) = develop(s, self.start, &self.crossings, self.end);
        let o = ch0[self.start.corner];
        let d = (far - o).normalized();
        let mut segments = Vec::with_capacity(motions.len());
        let mut entry = o;
        for (slot, m) in self.crossings.iter().zip(&motions) {
            let ch = s.chart(slot.triangle);
            let (a, b) = (ch[slot.edge], ch[(slot.edge + 1) % 3]);
            let (pa, pb) = (m.apply(a), m.apply(b));
            let den = d.cross(pa - pb);
            let u = if den == 0.0 { 0.5 } else { (d.cross(pa - o) / den).clamp(0.0, 1.0) };
            let exit = a.lerp(b, u);
            segments.push(Segment { triangle: slot.triangle, start: entry, end: exit });
            let p = s.partner(*slot);
            let ch2 = s.chart(p.triangle);
            entry = ch2[p.edge].lerp(ch2[(p.edge + 1) % 3], 1.0 - u);
        }
        let ch_end = s.chart(self.end.triangle);
        segments.push(Segment { triangle: self.end.triangle, start: entry, end: ch_end[self.end.corner] });
        Trajectory::new(s, segments, self.crossings.clone(), start, end, TraceStatus::HitVertex, None)
    }
}

/// Motions of every triangle along a corridor, and the developed end point.
fn develop(s: &ConeSurface, start: Corner, crossings: &[Slot], end: Corner) -> (Vec<Motion>, Vec2) {
    let mut m = Motion::IDENTITY;
    let mut motions = Vec::with_capacity(crossings.len() + 1);
    debug_assert_eq!(crossings.first().map(|c| c.triangle), Some(start.triangle));
    for &slot in crossings {
        motions.push(m);
        m = unfold(s, slot, &m).1;
    }
    motions.push(m);
    (motions, m.apply(s.chart(end.triangle)[end.corner]))
}

/// Canonical orientation of a found corridor, with geometry recomputed from
/// it so the result does not depend on which orientation was found.
fn canonical(s: &ConeSurface, start: Corner, crossings: Vec<Slot>, end: Corner) -> SaddleConnection {
    let rev_cross: Vec<Slot> = crossings.iter().rev().map(|&c| s.partner(c)).collect();
    let (start, crossings, end) = if (end, rev_cross.as_slice(), start) < (start, crossings.as_slice(), end) {
        (end, rev_cross, start)
    } else {
        (start, crossings, end)
    };
    let o = s.chart(start.triangle)[start.corner];
    let (_, far) = develop(s, start, &crossings, end);
    SaddleConnection {
        start,
        end,
        start_vertex: s.vertex_of(start),
        end_vertex: s.vertex_of(end),
        crossings,
        length: o.dist(far),
        direction: (far - o).angle(),
        edge: None,
    }
}

fn edge_connection(s: &ConeSurface, edge: usize) -> SaddleConnection {
    let slot = s.edge_slot(edge);
    let start = Corner::new(slot.triangle, slot.edge);
    let end = Corner::new(slot.triangle, (slot.edge + 1) % 3);
    let ch = s.chart(slot.triangle);
    SaddleConnection {
        start,
        end,
        start_vertex: s.vertex_of(start),
        end_vertex: s.vertex_of(end),
        crossings: Vec::new(),
        length: ch[slot.edge].dist(ch[(slot.edge + 1) % 3]),
        direction: (ch[(slot.edge + 1) % 3] - ch[slot.edge]).angle(),
        edge: Some(edge),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EnumerateOptions {
    /// Total wedge expansions allowed, split evenly over corner sectors.
    pub node_budget: u64,
    /// Give up (flagged as truncated) after this instant.
    pub deadline: Option<Instant>,
    /// Search corner sectors on the rayon pool.
    pub parallel: bool,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { node_budget: 10_000_000, deadline: None, parallel: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// Sorted by length, then crossing sequence, then corners.
    pub connections: Vec<SaddleConnection>,
    /// The budget or deadline stopped the search early.
    pub truncated: bool,
    /// Every connection strictly shorter than this was found. Equals the
    /// requested cutoff when not truncated.
    pub complete_up_to: f64,
    pub nodes: u64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnumerateError {
    #[error("max length must be positive and finite, got {0}")]
    BadLength(f64),
    #[error("node budget exceeded after {nodes} expansions; complete only below length {complete_up_to}")]
    BudgetExceeded { nodes: u64, complete_up_to: f64 },
}

/// Every saddle connection of length at most `max_length`, each once.
pub fn enumerate_saddle_connections(s: &ConeSurface, max_length: f64) -> Result<Vec<SaddleConnection>, EnumerateError> {
    let out = enumerate_with(s, max_length, &EnumerateOptions::default())?;
    if out.truncated {
        return Err(EnumerateError::BudgetExceeded { nodes: out.nodes, complete_up_to: out.complete_up_to });
    }
    Ok(out.connections)
}

/// As [`enumerate_saddle_connections`], reporting truncation instead of
/// failing on it. When truncated only connections below
/// [`SearchOutcome::complete_up_to`] are returned.
pub fn enumerate_with(s: &ConeSurface, max_length: f64, opts: &EnumerateOptions) -> Result<SearchOutcome, EnumerateError> {
    if !(max_length > 0.0 && max_length.is_finite()) {
        return Err(EnumerateError::BadLength(max_length));
    }
    let sectors: Vec<Corner> =
        (0..s.triangle_count()).flat_map(|t| (0..3).map(move |c| Corner::new(t, c))).collect();
    let per_sector = opts.node_budget.div_ceil(sectors.len() as u64).max(1);
    let run = |&c: &Corner| search_sector(s, c, max_length, per_sector, opts.deadline);
    let results: Vec<SectorResult> =
        if opts.parallel { sectors.par_iter().map(run).collect() } else { sectors.iter().map(run).collect() };

    let nodes = results.iter().map(|r| r.nodes).sum();
    let complete_up_to = results.iter().map(|r| r.complete_up_to).fold(max_length, f64::min);
    let truncated = results.iter().any(|r| r.truncated);

    let mut edges: Vec<usize> = Vec::new();
    let mut found = Vec::new();
    for r in results {
        edges.extend(r.edges);
        found.extend(r.found.into_iter().map(|(start, crossings, end)| canonical(s, start, crossings, end)));
    }
    edges.sort_unstable();
    edges.dedup();
    found.extend(edges.into_iter().map(|e| edge_connection(s, e)));
    found.retain(|c| c.length <= max_length && (!truncated || c.length < complete_up_to));
    found.sort_by(|a, b| {
        a.length
            .total_cmp(&b.length)
            .then_with(|| a.crossings.cmp(&b.crossings))
            .then_with(|| (a.start, a.end).cmp(&(b.start, b.end)))
    });
    found.dedup_by(|a, b| a.key() == b.key());
    Ok(SearchOutcome { connections: found, truncated, complete_up_to, nodes })
}

struct SectorResult {
    edges: Vec<usize>,
    found: Vec<(Corner, Vec<Slot>, Corner)>,
    nodes: u64,
    truncated: bool,
    complete_up_to: f64,
}

/// A wedge waiting to cross `slot`, whose triangle is placed by `motion`.
struct Wedge {
    key: f64,
    seq: u64,
    slot: Slot,
    motion: Motion,
    right: Vec2,
    left: Vec2,
    corridor: u32,
}

impl PartialEq for Wedge {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Wedge {}

impl PartialOrd for Wedge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Wedge {
    // reversed: BinaryHeap is a max-heap and we want the nearest wedge
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.total_cmp(&self.key).then_with(|| other.seq.cmp(&self.seq))
    }
}

const NO_PARENT: u32 = u32::MAX;

/// Distance from the origin to the part of segment `qa qb` inside the
/// wedge between directions `right` and `left`.
fn visible_distance(right: Vec2, left: Vec2, qa: Vec2, qb: Vec2) -> f64 {
    let clip = |w: Vec2, fallback: Vec2| match line_params(Vec2::ZERO, w, qa, qb) {
        Some((_, u)) => qa.lerp(qb, u.clamp(0.0, 1.0)),
        None => fallback,
    };
    origin_segment_distance(clip(right, qa), clip(left, qb))
}

fn search_sector(s: &ConeSurface, c0: Corner, max: f64, budget: u64, deadline: Option<Instant>) -> SectorResult {
    let ch = s.chart(c0.triangle);
    let o = ch[c0.corner];
    let r = ch[(c0.corner + 1) % 3] - o;
    let l = ch[(c0.corner + 2) % 3] - o;
    let mut res = SectorResult { edges: Vec::new(), found: Vec::new(), nodes: 0, truncated: false, complete_up_to: max };
    if r.norm() <= max {
        res.edges.push(s.edge_id(Slot::new(c0.triangle, c0.corner)));
    }

    // corridor arena: (parent, slot index)
    let mut arena: Vec<(u32, u32)> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    // the developed plane is translated so that the start vertex is the origin
    let root = Motion::fit(ch[0], ch[1], ch[0] - o, ch[1] - o);
    let key = visible_distance(r, l, r, l);
    if key <= max {
        heap.push(Wedge { key, seq, slot: Slot::new(c0.triangle, (c0.corner + 1) % 3), motion: root, right: r, left: l, corridor: NO_PARENT });
    }

    while let Some(w) = heap.pop() {
        if res.nodes >= budget || deadline.is_some_and(|d| Instant::now() >= d) {
            res.truncated = true;
            res.complete_up_to = w.key;
            break;
        }
        res.nodes += 1;
        arena.push((w.corridor, w.slot.index() as u32));
        let here = (arena.len() - 1) as u32;

        let (p, m2) = unfold(s, w.slot, &w.motion);
        let ch2 = s.chart(p.triangle);
        let pa = m2.apply(ch2[(p.edge + 1) % 3]);
        let pb = m2.apply(ch2[p.edge]);
        let apex = (p.edge + 2) % 3;
        let dv = m2.apply(ch2[apex]);
        let eps = VERTEX_HIT_TOL * s.local_scale(p.triangle);
        let sr = w.right.normalized().cross(dv);
        let sl = w.left.normalized().cross(dv);

        let mut push = |slot: Slot, right: Vec2, left: Vec2, qa: Vec2, qb: Vec2| {
            if right.cross(left) <= 0.0 {
                return;
            }
            let key = visible_distance(right, left, qa, qb);
            if key <= max {
                seq += 1;
                heap.push(Wedge { key, seq, slot, motion: m2, right, left, corridor: here });
            }
        };
        let right_slot = Slot::new(p.triangle, (p.edge + 1) % 3);
        let left_slot = Slot::new(p.triangle, apex);
        if sr > eps && sl < -eps {
            if dv.norm() <= max {
                let mut crossings = Vec::new();
                let mut cur = here;
                while cur != NO_PARENT {
                    let (parent, slot) = arena[cur as usize];
                    crossings.push(Slot::from_index(slot as usize));
                    cur = parent;
                }
                crossings.reverse();
                res.found.push((c0, crossings, Corner::new(p.triangle, apex)));
            }
            push(right_slot, w.right, dv, pa, dv);
            push(left_slot, dv, w.left, dv, pb);
        } else if sl >= -eps {
            push(right_slot, w.right, w.left, pa, dv);
        } else {
            push(left_slot, w.right, w.left, dv, pb);
        }
    }
    res
}
