//! Flat spheres given as Euclidean triangles glued along their edges.
//!
//! A surface is stored as side lengths plus a gluing involution on edge
//! slots. Edge `e` of a triangle joins corners `e` and `(e + 1) % 3`, and a
//! gluing always reverses orientation: corner `e` of one side is identified
//! with corner `e' + 1` of the other. Per-triangle charts are rebuilt from the
//! lengths with corner 0 at the origin and edge 0 along the positive x-axis.
//!
//! [`RawSurface`] is what a file or generator produces. [`validate_surface`]
//! checks it, and [`RawSurface::into_cone_surface`] turns it into a
//! [`ConeSurface`], the immutable validated form every geometric operation
//! works on.

mod fsph;
mod generate;

use std::collections::hash_map::DefaultHasher;
use std::f64::consts::PI;
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::geom::{corner_angle, heron_area, Vec2};

pub use fsph::{parse_surface, serialize_surface, ParseError};
pub use generate::{
    generate_doubled_polygon, mark_point, polyhedron, random_convex_polygon, regular_polygon,
};

/// Default relative tolerance for length comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Threshold on `|Σk − 2|` for a surface to pass validation.
pub const GAUSS_BONNET_TOL: f64 = 1e-9;

/// Index of a vertex class (cone point).
pub type VertexId = usize;

/// An edge slot: edge `edge` of triangle `triangle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub triangle: usize,
    pub edge: usize,
}

impl Slot {
    pub const fn new(triangle: usize, edge: usize) -> Self {
        Slot { triangle, edge }
    }

    /// Flat index `3 * triangle + edge`.
    pub fn index(self) -> usize {
        3 * self.triangle + self.edge
    }

    pub fn from_index(i: usize) -> Self {
        Slot::new(i / 3, i % 3)
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.triangle, self.edge)
    }
}

/// A triangle corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub triangle: usize,
    pub corner: usize,
}

impl Corner {
    pub const fn new(triangle: usize, corner: usize) -> Self {
        Corner { triangle, corner }
    }
}

/// Unvalidated surface data, as read from a file.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSurface {
    /// Side lengths per triangle; side `e` joins corners `e` and `e + 1`.
    pub lengths: Vec<[f64; 3]>,
    /// Partner of every slot, indexed by [`Slot::index`].
    pub gluing: Vec<Option<Slot>>,
}

/// Which invariant a validation entry refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    SideLengths,
    TriangleInequality,
    GluingInvolution,
    GluedLengths,
    Connected,
    VertexWalk,
    EulerCharacteristic,
    VertexCount,
    GaussBonnet,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::SideLengths => "side-lengths",
            Check::TriangleInequality => "triangle-inequality",
            Check::GluingInvolution => "gluing-involution",
            Check::GluedLengths => "glued-lengths",
            Check::Connected => "connected",
            Check::VertexWalk => "vertex-walk",
            Check::EulerCharacteristic => "euler-characteristic",
            Check::VertexCount => "vertex-count",
            Check::GaussBonnet => "gauss-bonnet",
        }
    }
}

/// Why a validation check failed.
#[derive(Debug, Clone, PartialEq)]
pub enum Reason {
    NoTriangles,
    NonPositiveLength,
    DegenerateTriangle,
    UngluedSlot,
    SelfGluedSlot,
    NotInvolution,
    LengthMismatch { worst_relative: f64 },
    Disconnected { components: usize },
    WalkDidNotClose,
    EulerCharacteristic { v: usize, e: usize, f: usize },
    TooFewVertices { n: usize },
    GaussBonnetResidual { residual: f64 },
    /// A prerequisite check failed, so this one could not run.
    Skipped,
}

impl Reason {
    /// Stable machine-readable reason code.
    pub fn code(&self) -> &'static str {
        match self {
            Reason::NoTriangles => "no-triangles",
            Reason::NonPositiveLength => "nonpositive-length",
            Reason::DegenerateTriangle => "degenerate-triangle",
            Reason::UngluedSlot => "unglued-slot",
            Reason::SelfGluedSlot => "self-glued-slot",
            Reason::NotInvolution => "not-involution",
            Reason::LengthMismatch { .. } => "length-mismatch",
            Reason::Disconnected { .. } => "disconnected",
            Reason::WalkDidNotClose => "walk-did-not-close",
            Reason::EulerCharacteristic { .. } => "euler-characteristic",
            Reason::TooFewVertices { .. } => "too-few-vertices",
            Reason::GaussBonnetResidual { .. } => "gauss-bonnet-residual",
            Reason::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    pub reason: Option<Reason>,
    pub offending: Vec<Slot>,
}

/// Result of [`validate_surface`]; failures are entries, never panics.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckOutcome>,
    /// `|Σk − 2|`, when the topology allowed computing cone angles.
    pub gauss_bonnet_residual: Option<f64>,
    pub pass: bool,
}

impl ValidationReport {
    pub fn outcome(&self, check: Check) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.check == check)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match &c.reason {
                None => writeln!(f, "{}=pass", c.check.name())?,
                Some(r) => writeln!(f, "{}=fail reason={}", c.check.name(), r.code())?,
            }
        }
        if let Some(r) = self.gauss_bonnet_residual {
            writeln!(f, "gauss_bonnet_residual={r:e}")?;
        }
        write!(f, "pass={}", self.pass)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("surface failed validation:\n{0}")]
    Invalid(Box<ValidationReport>),
    #[error("surface area is zero or not finite ({0})")]
    DegenerateArea(f64),
    #[error("polygon is not strictly convex and counterclockwise (at vertex {0})")]
    NotConvex(usize),
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewPolygonVertices(usize),
    #[error("point lies outside triangle {0}")]
    PointOutsideTriangle(usize),
    #[error("triangle index {0} out of range")]
    TriangleOutOfRange(usize),
}

/// A cone point with its cone angle and discrete curvature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConePoint {
    pub id: VertexId,
    /// Cone angle in radians.
    pub angle: f64,
    /// `(2π − angle) / 2π`.
    pub curvature: f64,
}

/// Curvature of a cone angle.
pub fn curvature_of_angle(angle: f64) -> f64 {
    (2.0 * PI - angle) / (2.0 * PI)
}

/// A validated flat sphere. Immutable; safe to share between threads.
#[derive(Debug, Clone)]
pub struct ConeSurface {
    lengths: Vec<[f64; 3]>,
    partner: Vec<usize>,
    charts: Vec<[Vec2; 3]>,
    corner_angles: Vec<[f64; 3]>,
    corner_vertex: Vec<[VertexId; 3]>,
    vertex_corners: Vec<Vec<Corner>>,
    cone_angles: Vec<f64>,
    edge_of_slot: Vec<usize>,
    edge_slots: Vec<Slot>,
    area: f64,
    tol: f64,
    fingerprint: u64,
}

fn chart_of(l: [f64; 3]) -> [Vec2; 3] {
    let [l0, l1, l2] = l;
    let x = (l0 * l0 + l2 * l2 - l1 * l1) / (2.0 * l0);
    let y = 2.0 * heron_area(l0, l1, l2) / l0;
    [Vec2::ZERO, Vec2::new(l0, 0.0), Vec2::new(x, y)]
}

fn corner_angles_of(l: [f64; 3]) -> [f64; 3] {
    // corner c sits between sides c and c+2; the opposite side is c+1.
    [
        corner_angle(l[0], l[2], l[1]),
        corner_angle(l[1], l[0], l[2]),
        corner_angle(l[2], l[1], l[0]),
    ]
}

fn strict_triangle(l: [f64; 3]) -> bool {
    let [a, b, c] = l;
    a < b + c && b < a + c && c < a + b
}

/// Walk every vertex class by crossing the edge that starts at each corner.
/// Returns the classes in first-occurrence order, or `None` if a walk does
/// not close within `3T` steps.
fn walk_vertex_classes(t: usize, partner: &[usize]) -> Option<Vec<Vec<Corner>>> {
    let mut seen = vec![false; 3 * t];
    let mut classes = Vec::new();
    for start in 0..3 * t {
        if seen[start] {
            continue;
        }
        let mut class = Vec::new();
        let mut cur = start;
        let mut closed = false;
        for _ in 0..=3 * t {
            if seen[cur] {
                closed = cur == start;
                break;
            }
            seen[cur] = true;
            class.push(Corner::new(cur / 3, cur % 3));
            let p = partner[cur];
            cur = 3 * (p / 3) + (p % 3 + 1) % 3;
        }
        if !closed {
            return None;
        }
        classes.push(class);
    }
    Some(classes)
}

fn components(t: usize, partner: &[usize]) -> usize {
    let mut comp = vec![usize::MAX; t];
    let mut count = 0;
    for s in 0..t {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(x) = stack.pop() {
            for e in 0..3 {
                let y = partner[3 * x + e] / 3;
                if comp[y] == usize::MAX {
                    comp[y] = count;
                    stack.push(y);
                }
            }
        }
        count += 1;
    }
    count
}

/// Check every [`ConeSurface`] invariant on raw data.
pub fn validate_surface(s: &RawSurface, tol: f64) -> ValidationReport {
    let t = s.lengths.len();
    let mut checks = Vec::new();
    let mut push = |check, offending: Vec<Slot>, reason: Option<Reason>| {
        checks.push(CheckOutcome { check, passed: reason.is_none(), reason, offending });
    };

    if t == 0 {
        push(Check::SideLengths, vec![], Some(Reason::NoTriangles));
        return finish(checks, None);
    }

    let bad_len: Vec<Slot> = (0..3 * t)
        .map(Slot::from_index)
        .filter(|sl| !(s.lengths[sl.triangle][sl.edge] > 0.0 && s.lengths[sl.triangle][sl.edge].is_finite()))
        .collect();
    let lengths_ok = bad_len.is_empty();
    push(Check::SideLengths, bad_len, (!lengths_ok).then_some(Reason::NonPositiveLength));

    let degenerate: Vec<Slot> = (0..t)
        .filter(|&i| lengths_ok && !strict_triangle(s.lengths[i]))
        .map(|i| Slot::new(i, 0))
        .collect();
    let tri_ok = lengths_ok && degenerate.is_empty();
    let reason = if !lengths_ok {
        Some(Reason::Skipped)
    } else if !degenerate.is_empty() {
        Some(Reason::DegenerateTriangle)
    } else {
        None
    };
    push(Check::TriangleInequality, degenerate, reason);

    // involution
    let mut offending = Vec::new();
    let mut reason = None;
    if s.gluing.len() != 3 * t {
        reason = Some(Reason::UngluedSlot);
    } else {
        for i in 0..3 * t {
            let me = Slot::from_index(i);
            match s.gluing[i] {
                None => {
                    offending.push(me);
                    reason.get_or_insert(Reason::UngluedSlot);
                }
                Some(p) if p == me => {
                    offending.push(me);
                    reason.get_or_insert(Reason::SelfGluedSlot);
                }
                Some(p) if p.triangle >= t || p.edge > 2 || s.gluing[p.index()] != Some(me) => {
                    offending.push(me);
                    reason.get_or_insert(Reason::NotInvolution);
                }
                Some(_) => {}
            }
        }
    }
    let involution_ok = reason.is_none();
    push(Check::GluingInvolution, offending, reason);

    let partner: Vec<usize> = if involution_ok {
        s.gluing.iter().map(|p| p.unwrap().index()).collect()
    } else {
        Vec::new()
    };

    // glued lengths
    if involution_ok && lengths_ok {
        let mut worst: f64 = 0.0;
        let mut off = Vec::new();
        for i in 0..3 * t {
            let p = partner[i];
            if p < i {
                continue;
            }
            let a = s.lengths[i / 3][i % 3];
            let b = s.lengths[p / 3][p % 3];
            let rel = (a - b).abs() / a.max(b);
            worst = worst.max(rel);
            if rel > tol {
                off.push(Slot::from_index(i));
            }
        }
        let reason = (!off.is_empty()).then_some(Reason::LengthMismatch { worst_relative: worst });
        push(Check::GluedLengths, off, reason);
    } else {
        push(Check::GluedLengths, vec![], Some(Reason::Skipped));
    }

    let mut classes = None;
    if involution_ok {
        let c = components(t, &partner);
        push(Check::Connected, vec![], (c != 1).then_some(Reason::Disconnected { components: c }));
        classes = walk_vertex_classes(t, &partner);
        push(Check::VertexWalk, vec![], classes.is_none().then_some(Reason::WalkDidNotClose));
    } else {
        push(Check::Connected, vec![], Some(Reason::Skipped));
        push(Check::VertexWalk, vec![], Some(Reason::Skipped));
    }

    let mut residual = None;
    match &classes {
        Some(classes) => {
            let v = classes.len();
            let f = t;
            let e = 3 * t / 2;
            let euler_ok = 3 * t % 2 == 0 && v + f == e + 2;
            push(
                Check::EulerCharacteristic,
                vec![],
                (!euler_ok).then_some(Reason::EulerCharacteristic { v, e, f }),
            );
            push(Check::VertexCount, vec![], (v < 3).then_some(Reason::TooFewVertices { n: v }));
            if tri_ok {
                let total: f64 = classes
                    .iter()
                    .map(|class| {
                        let angle: f64 = class
                            .iter()
                            .map(|c| corner_angles_of(s.lengths[c.triangle])[c.corner])
                            .sum();
                        curvature_of_angle(angle)
                    })
                    .sum();
                let r = (total - 2.0).abs();
                residual = Some(r);
                push(
                    Check::GaussBonnet,
                    vec![],
                    (r >= GAUSS_BONNET_TOL).then_some(Reason::GaussBonnetResidual { residual: r }),
                );
            } else {
                push(Check::GaussBonnet, vec![], Some(Reason::Skipped));
            }
        }
        None => {
            push(Check::EulerCharacteristic, vec![], Some(Reason::Skipped));
            push(Check::VertexCount, vec![], Some(Reason::Skipped));
            push(Check::GaussBonnet, vec![], Some(Reason::Skipped));
        }
    }
    finish(checks, residual)
}

fn finish(checks: Vec<CheckOutcome>, residual: Option<f64>) -> ValidationReport {
    let pass = checks.iter().all(|c| c.passed);
    ValidationReport { checks, gauss_bonnet_residual: residual, pass }
}

impl RawSurface {
    pub fn triangle_count(&self) -> usize {
        self.lengths.len()
    }

    /// Validate and build the immutable surface.
    pub fn into_cone_surface(self, tol: f64) -> Result<ConeSurface, SurfaceError> {
        ConeSurface::build(self, tol, None)
    }
}

impl ConeSurface {
    /// Build from raw data. `labels`, when given, assigns a vertex id to each
    /// corner; all corners of a class must agree and the ids must be
    /// `0..n` so that vertex identities survive retriangulation.
    pub(crate) fn build(
        raw: RawSurface,
        tol: f64,
        labels: Option<&[[VertexId; 3]]>,
    ) -> Result<ConeSurface, SurfaceError> {
        let report = validate_surface(&raw, tol);
        if !report.pass {
            return Err(SurfaceError::Invalid(Box::new(report)));
        }
        let t = raw.lengths.len();
        let partner: Vec<usize> = raw.gluing.iter().map(|p| p.unwrap().index()).collect();
        let mut classes = walk_vertex_classes(t, &partner).expect("validated");
        if let Some(labels) = labels {
            let mut ordered: Vec<Option<Vec<Corner>>> = vec![None; classes.len()];
            for class in classes.drain(..) {
                let id = labels[class[0].triangle][class[0].corner];
                assert!(
                    class.iter().all(|c| labels[c.triangle][c.corner] == id),
                    "inconsistent vertex labels"
                );
                assert!(id < ordered.len() && ordered[id].is_none(), "vertex labels not a bijection");
                ordered[id] = Some(class);
            }
            classes = ordered.into_iter().map(|c| c.expect("bijection")).collect();
        }
        let lengths = raw.lengths;
        let charts: Vec<[Vec2; 3]> = lengths.iter().map(|&l| chart_of(l)).collect();
        let corner_angles: Vec<[f64; 3]> = lengths.iter().map(|&l| corner_angles_of(l)).collect();
        let mut corner_vertex = vec![[0usize; 3]; t];
        for (v, class) in classes.iter().enumerate() {
            for c in class {
                corner_vertex[c.triangle][c.corner] = v;
            }
        }
        let cone_angles = classes
            .iter()
            .map(|class| class.iter().map(|c| corner_angles[c.triangle][c.corner]).sum())
            .collect();
        let mut edge_of_slot = vec![usize::MAX; 3 * t];
        let mut edge_slots = Vec::with_capacity(3 * t / 2);
        for i in 0..3 * t {
            if edge_of_slot[i] == usize::MAX {
                edge_of_slot[i] = edge_slots.len();
                edge_of_slot[partner[i]] = edge_slots.len();
                edge_slots.push(Slot::from_index(i));
            }
        }
        let area = lengths.iter().map(|l| heron_area(l[0], l[1], l[2])).sum();
        let mut s = ConeSurface {
            lengths,
            partner,
            charts,
            corner_angles,
            corner_vertex,
            vertex_corners: classes,
            cone_angles,
            edge_of_slot,
            edge_slots,
            area,
            tol,
            fingerprint: 0,
        };
        s.fingerprint = s.compute_fingerprint();
        Ok(s)
    }

    fn compute_fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for l in &self.lengths {
            for x in l {
                x.to_bits().hash(&mut h);
            }
        }
        self.partner.hash(&mut h);
        self.corner_vertex.hash(&mut h);
        h.finish()
    }

    /// Raw form of this surface (for serialization or editing).
    pub fn to_raw(&self) -> RawSurface {
        RawSurface {
            lengths: self.lengths.clone(),
            gluing: self.partner.iter().map(|&p| Some(Slot::from_index(p))).collect(),
        }
    }

    /// Corner vertex ids, usable as labels for [`ConeSurface::build`].
    pub(crate) fn corner_labels(&self) -> &[[VertexId; 3]] {
        &self.corner_vertex
    }

    pub fn triangle_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_corners.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_slots.len()
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    /// Hash of lengths, gluing and vertex labels; trajectories remember it.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn lengths(&self, triangle: usize) -> [f64; 3] {
        self.lengths[triangle]
    }

    pub fn side_length(&self, slot: Slot) -> f64 {
        self.lengths[slot.triangle][slot.edge]
    }

    /// Chart of a triangle: corner 0 at the origin, edge 0 along +x,
    /// counterclockwise.
    pub fn chart(&self, triangle: usize) -> [Vec2; 3] {
        self.charts[triangle]
    }

    pub fn partner(&self, slot: Slot) -> Slot {
        Slot::from_index(self.partner[slot.index()])
    }

    pub fn corner_angle(&self, c: Corner) -> f64 {
        self.corner_angles[c.triangle][c.corner]
    }

    pub fn vertex_of(&self, c: Corner) -> VertexId {
        self.corner_vertex[c.triangle][c.corner]
    }

    /// Corners of a vertex in walking order.
    pub fn corners_of(&self, v: VertexId) -> &[Corner] {
        &self.vertex_corners[v]
    }

    pub fn cone_angle(&self, v: VertexId) -> f64 {
        self.cone_angles[v]
    }

    pub fn cone_angles(&self) -> &[f64] {
        &self.cone_angles
    }

    pub fn curvatures(&self) -> Vec<f64> {
        self.cone_angles.iter().map(|&a| curvature_of_angle(a)).collect()
    }

    /// Undirected edge id of a slot; both slots of a glued pair share it.
    pub fn edge_id(&self, slot: Slot) -> usize {
        self.edge_of_slot[slot.index()]
    }

    /// Representative (lower-index) slot of an edge.
    pub fn edge_slot(&self, edge: usize) -> Slot {
        self.edge_slots[edge]
    }

    /// Vertices joined by an edge.
    pub fn edge_endpoints(&self, edge: usize) -> (VertexId, VertexId) {
        let s = self.edge_slots[edge];
        (
            self.corner_vertex[s.triangle][s.edge],
            self.corner_vertex[s.triangle][(s.edge + 1) % 3],
        )
    }

    /// Longest side of a triangle; the local length scale for tolerances.
    pub fn local_scale(&self, triangle: usize) -> f64 {
        let l = self.lengths[triangle];
        l[0].max(l[1]).max(l[2])
    }

    pub fn max_edge_length(&self) -> f64 {
        self.lengths.iter().flat_map(|l| l.iter().copied()).fold(0.0, f64::max)
    }

    /// Sides scaled by `factor`; vertex ids and gluing unchanged.
    pub fn scaled(&self, factor: f64) -> ConeSurface {
        let mut s = self.clone();
        for l in &mut s.lengths {
            for x in l.iter_mut() {
                *x *= factor;
            }
        }
        s.charts = s.lengths.iter().map(|&l| chart_of(l)).collect();
        s.area = s.lengths.iter().map(|l| heron_area(l[0], l[1], l[2])).sum();
        s.fingerprint = s.compute_fingerprint();
        s
    }
}

/// One entry per vertex class.
pub fn cone_data(s: &ConeSurface) -> Vec<ConePoint> {
    s.cone_angles
        .iter()
        .enumerate()
        .map(|(id, &angle)| ConePoint { id, angle, curvature: curvature_of_angle(angle) })
        .collect()
}

/// Rescale to unit area. Angles, curvatures and vertex ids are unchanged.
pub fn normalize_area(s: &ConeSurface) -> Result<ConeSurface, SurfaceError> {
    let a = s.area();
    if !(a > 0.0 && a.is_finite()) {
        return Err(SurfaceError::DegenerateArea(a));
    }
    if (a - 1.0).abs() <= 1e-15 {
        return Ok(s.clone());
    }
    Ok(s.scaled(1.0 / a.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doubled_equilateral() -> RawSurface {
        RawSurface {
            lengths: vec![[1.0; 3], [1.0; 3]],
            gluing: vec![
                Some(Slot::new(1, 2)),
                Some(Slot::new(1, 1)),
                Some(Slot::new(1, 0)),
                Some(Slot::new(0, 2)),
                Some(Slot::new(0, 1)),
                Some(Slot::new(0, 0)),
            ],
        }
    }

    #[test]
    fn doubled_equilateral_validates() {
        let r = validate_surface(&doubled_equilateral(), DEFAULT_TOL);
        assert!(r.pass, "{r}");
        // k_i = 1 − π/3/π·… : each vertex sees two corners of π/3.
        assert!(r.gauss_bonnet_residual.unwrap() < 1e-12);
    }

    #[test]
    fn cone_data_of_doubled_equilateral() {
        let s = doubled_equilateral().into_cone_surface(DEFAULT_TOL).unwrap();
        let cones = cone_data(&s);
        assert_eq!(cones.len(), 3);
        for c in cones {
            assert!((c.angle - 2.0 * PI / 3.0).abs() < 1e-12);
            assert!((c.curvature - 2.0 / 3.0).abs() < 1e-12);
        }
        assert_eq!(s.edge_count(), 3);
    }

    #[test]
    fn mismatched_lengths_fail() {
        let mut raw = doubled_equilateral();
        raw.lengths[1] = [1.1, 1.0, 1.0];
        let r = validate_surface(&raw, DEFAULT_TOL);
        assert!(!r.pass);
        let o = r.outcome(Check::GluedLengths).unwrap();
        assert_eq!(o.reason.as_ref().unwrap().code(), "length-mismatch");
        assert!(!o.offending.is_empty());
    }

    #[test]
    fn torus_gluing_fails_euler() {
        let d = 2f64.sqrt();
        let raw = RawSurface {
            lengths: vec![[1.0, 1.0, d], [d, 1.0, 1.0]],
            gluing: vec![
                Some(Slot::new(1, 1)),
                Some(Slot::new(1, 2)),
                Some(Slot::new(1, 0)),
                Some(Slot::new(0, 2)),
                Some(Slot::new(0, 0)),
                Some(Slot::new(0, 1)),
            ],
        };
        let r = validate_surface(&raw, DEFAULT_TOL);
        assert!(!r.pass);
        let o = r.outcome(Check::EulerCharacteristic).unwrap();
        assert_eq!(o.reason, Some(Reason::EulerCharacteristic { v: 1, e: 3, f: 2 }));
    }

    #[test]
    fn unglued_and_self_glued_are_reported() {
        let mut raw = doubled_equilateral();
        raw.gluing[0] = None;
        let r = validate_surface(&raw, DEFAULT_TOL);
        let o = r.outcome(Check::GluingInvolution).unwrap();
        assert!(!o.passed);
        assert!(o.offending.contains(&Slot::new(0, 0)));

        let mut raw = doubled_equilateral();
        raw.gluing[0] = Some(Slot::new(0, 0));
        let r = validate_surface(&raw, DEFAULT_TOL);
        let o = r.outcome(Check::GluingInvolution).unwrap();
        assert_eq!(o.reason.as_ref().unwrap().code(), "self-glued-slot");
    }

    #[test]
    fn degenerate_triangle_fails() {
        let mut raw = doubled_equilateral();
        raw.lengths = vec![[1.0, 1.0, 2.0], [2.0, 1.0, 1.0]];
        let r = validate_surface(&raw, DEFAULT_TOL);
        assert_eq!(
            r.outcome(Check::TriangleInequality).unwrap().reason,
            Some(Reason::DegenerateTriangle)
        );
    }

    #[test]
    fn normalize_area_scales_sides() {
        let s = doubled_equilateral().into_cone_surface(DEFAULT_TOL).unwrap();
        let u = normalize_area(&s).unwrap();
        // 1/√(√3/2)
        let factor = 1.0 / (3f64.sqrt() / 2.0).sqrt();
        assert!((factor - 1.07457).abs() < 1e-5);
        assert!((u.lengths(0)[0] - factor).abs() < 1e-12);
        assert!((u.area() - 1.0).abs() < 1e-12);
        let again = normalize_area(&u).unwrap();
        for t in 0..2 {
            for e in 0..3 {
                assert!((again.lengths(t)[e] - u.lengths(t)[e]).abs() < 1e-12);
            }
        }
        for v in 0..3 {
            assert!((u.cone_angle(v) - s.cone_angle(v)).abs() < 1e-12);
        }
    }

    #[test]
    fn chart_places_corners() {
        let c = chart_of([3.0, 4.0, 5.0]);
        assert_eq!(c[1], Vec2::new(3.0, 0.0));
        assert!((c[2].dist(c[1]) - 4.0).abs() < 1e-12);
        assert!((c[2].norm() - 5.0).abs() < 1e-12);
        assert!(c[2].y > 0.0);
    }
}
